"""Shared components for torus-lab: configuration, errors and small helpers."""

from . import errors
from .context import Context
from .errors import TorusLabError
from .utils import fibonacci, format_vector, parse_vector

__all__ = [
    "Context",
    "TorusLabError",
    "errors",
    "fibonacci",
    "format_vector",
    "parse_vector",
]
