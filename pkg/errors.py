"""
errors.py — Domain exceptions shared by the engine, deciders and CLI.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, List, Optional

if TYPE_CHECKING:
    from models import SurfaceIssue


class AngleError(ValueError):
    """Invalid angle or distribution (non-positive angle, negative genus, empty list)."""


class ParseError(ValueError):
    """Exact value or angle list that could not be parsed."""

    def __init__(self, message: str, text: str = "", position: Optional[int] = None) -> None:
        self.message = message
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        detail = f" in {text!r}" if text else ""
        super().__init__(f"{message}{where}{detail}")


class StrataError(ValueError):
    """Invalid stratum, residue arity mismatch, or non-primitive genus-0 stratum."""


class SurfaceValidationError(ValueError):
    """A gluing that breaks one or more well-formedness rules."""

    def __init__(self, issues: List["SurfaceIssue"]) -> None:
        self.issues = issues
        summary = "; ".join(f"{i.kind}: {', '.join(i.ids)}" for i in issues)
        super().__init__(f"invalid surface ({len(issues)} issue(s)): {summary}")


class SurfaceFormatError(ValueError):
    """Malformed surface file."""


class NonRationalInputError(ValueError):
    """Witness search was handed angles with symbolic parts."""


class SearchBoundsError(ValueError):
    """Non-positive search or enumeration bounds."""


class InconsistencyError(RuntimeError):
    """Verdicts contradict a comparison law with no documented explanation."""
