"""Embedded forward-search planner over ground STRIPS tasks.

Two interchangeable backends: a pure-Python one and a compiled
extension. The compiled one is picked when importable unless
PRODPLAN_PURE=1 forces the fallback.
"""

from __future__ import annotations

import os

from . import _pysearch
from .grounding import GroundAction, GroundTask, ground

_compiled = None
if os.environ.get("PRODPLAN_PURE", "") != "1":
    try:
        from . import _speedups as _compiled
    except ImportError:
        _compiled = None


def backend_name() -> str:
    return "compiled" if _compiled is not None else "pure"


def available_backends() -> tuple[str, ...]:
    return ("pure", "compiled") if _compiled is not None else ("pure",)


def backend_module(name: str | None = None):
    """Resolve a backend by name; None picks the best available."""
    if name in (None, "auto"):
        return _compiled if _compiled is not None else _pysearch
    if name == "pure":
        return _pysearch
    if name == "compiled":
        if _compiled is None:
            raise ValueError("compiled backend is not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


from .search import SearchResult, solve, validate_plan  # noqa: E402

__all__ = [
    "GroundAction",
    "GroundTask",
    "SearchResult",
    "available_backends",
    "backend_module",
    "backend_name",
    "ground",
    "solve",
    "validate_plan",
]
