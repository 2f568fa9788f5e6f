"""Define the state structures for the verification graph."""

from __future__ import annotations

import operator
from dataclasses import dataclass, field

from typing_extensions import Annotated


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one acceptance check."""

    name: str
    passed: bool
    detail: str = ""
    flagged: bool = False
    """Set when a check found something worth reporting without failing, such as a Markov-number collision."""


@dataclass
class VerifyInput:
    """Defines the input state for the verification run."""

    suite: str = "fast"
    """
    Which suite to run.

    "fast" uses reduced bounds and skips the graph-building and p-stability
    checks; "all" runs every check at the acceptance bounds.
    """


@dataclass
class VerifyState(VerifyInput):
    """Represents the complete state of a verification run."""

    results: Annotated[list[CheckResult], operator.add] = field(default_factory=list)
    """
    Results appended by the check nodes.

    The `operator.add` reducer concatenates the lists returned by each node.
    """

    passed: bool = False
    """Set by the final node once every check has reported."""
