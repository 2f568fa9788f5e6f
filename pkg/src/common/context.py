"""Define the configurable parameters for torus-lab."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from typing import Optional

from .errors import InvalidParameterError

ENV_PREFIX = "TORUS_LAB_"

FIELDS = ("rational", "prime")
OUTPUTS = ("dot", "json", "text")


@dataclass(kw_only=True)
class Context:
    """Runtime configuration for enumeration, linear algebra and output."""

    max_n: int = field(
        default=4,
        metadata={
            "description": "Maximal sequence length n used by enumerations and the graph builders.",
        },
    )

    max_a: int = field(
        default=2,
        metadata={
            "description": "Maximal entry a used by enumerations and the graph builders.",
        },
    )

    p_override: Optional[int] = field(
        default=None,
        metadata={
            "description": "Truncation level used by the linear-algebra oracles. "
            "When unset, each computation uses nil(M)+2.",
        },
    )

    output: str = field(
        default="text",
        metadata={
            "description": "Output format for the CLI: dot, json or text.",
        },
    )

    stern_brocot_cap: int = field(
        default=256,
        metadata={
            "description": "Number of Farey triangles decompose_z3 searches before giving up.",
        },
    )

    threads: int = field(
        default=1,
        metadata={
            "description": "Worker count for batch edge evaluation and the collision scan.",
        },
    )

    log_level: str = field(
        default="WARNING",
        metadata={
            "description": "Logging level configured by the CLI.",
        },
    )

    # Declared last: the attribute name shadows dataclasses.field in the class body.
    field: str = field(
        default="rational",
        metadata={
            "description": "Field for rank computations: 'rational' (exact QQ) or "
            "'prime' (two large primes with rational fallback).",
        },
    )

    def __post_init__(self) -> None:
        """Fetch env vars for attributes that were not passed as args, then validate."""
        for f in fields(self):
            if not f.init:
                continue

            current_value = getattr(self, f.name)
            default_value = f.default
            env_value = os.environ.get(ENV_PREFIX + f.name.upper())

            # Explicit arguments win over the environment
            if current_value == default_value and env_value is not None:
                setattr(self, f.name, _coerce(f.name, env_value, default_value))

        self._validate()

    def _validate(self) -> None:
        if self.max_n < 0 or self.max_a < 0:
            raise InvalidParameterError("bounds must be non-negative")
        if self.stern_brocot_cap < 1:
            raise InvalidParameterError("stern_brocot_cap must be at least 1")
        if self.threads < 1:
            raise InvalidParameterError("threads must be at least 1")
        if self.p_override is not None and self.p_override < 2:
            raise InvalidParameterError("p_override must be at least 2")
        if self.field not in FIELDS:
            raise InvalidParameterError(f"unknown field {self.field!r}")
        if self.output not in OUTPUTS:
            raise InvalidParameterError(f"unknown output format {self.output!r}")


def _coerce(name: str, raw: str, default: object) -> object:
    if isinstance(default, bool):
        return raw.lower() in ("true", "1", "yes", "on")
    if isinstance(default, int) or name == "p_override":
        if name == "p_override" and raw.strip().lower() in ("", "none"):
            return None
        try:
            return int(raw)
        except ValueError as e:
            raise InvalidParameterError(
                f"{ENV_PREFIX}{name.upper()} must be an integer, got {raw!r}"
            ) from e
    return raw
