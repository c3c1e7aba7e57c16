"""
models.py — Shared Pydantic data models used across the engine.
Verdicts, certificates, surfaces and reports; everything the CLI serializes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator

SCHEMA_VERSION = "1.0"


def _to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            result = Fraction(int(num), int(den)) if sep else Fraction(int(num))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not an exact rational 'p/q': {value!r}") from e
        return result
    raise ValueError(f"not an exact rational: {value!r} (floats are rejected)")


def _fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    PlainValidator(_to_fraction),
    PlainSerializer(_fraction_text, return_type=str),
]

MonodromyName = Literal["coaxial", "strict-dihedral", "dihedral-any"]


# ── Strata ──────────────────────────────────────────────────────


class StrataVerdict(BaseModel):
    """Outcome of a residue realizability query."""
    realizable: bool
    clause: str
    detail: Dict[str, str] = Field(default_factory=dict)
    also_matched: List[str] = Field(
        default_factory=list,
        description="Further exception clauses that also match, in test order",
    )


# ── Surfaces ────────────────────────────────────────────────────


class Cylinder(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    w: Rational = Field(description="Circumference in turn units")
    boundary: List[str] = Field(description="Cyclic sequence of boundary segment ids")


class JenkinsStrebelSurface(BaseModel):
    """Semi-infinite cylinders glued along boundary segments."""
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    cylinders: List[Cylinder]
    pairs: List[Tuple[str, str]]
    lengths: Dict[str, Rational]

    @property
    def segments(self) -> List[str]:
        return [s for c in self.cylinders for s in c.boundary]


class SurfaceIssue(BaseModel):
    kind: str = Field(
        description=(
            "One of: 'empty-boundary', 'duplicate-segment', 'unknown-segment', 'unpaired-segment', "
            "'multiply-paired', 'self-paired', 'missing-length', 'non-positive-length', "
            "'non-positive-circumference', 'length-mismatch', 'circumference-mismatch', 'disconnected'"
        )
    )
    ids: List[str] = Field(default_factory=list)
    message: str = ""


class SurfaceReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    genus: int
    equatorial_angles: List[int] = Field(description="k for each vertex class (cone angle kπ)")
    pole_angles: List[Rational] = Field(description="w for each pole (cone angle 2πw)")
    is_square: bool
    period_generators: List[Rational]
    monodromy_class: Literal["coaxial", "strict-dihedral"]
    vertices: int
    edges: int
    faces: int
    vertex_classes: List[List[str]] = Field(
        default_factory=list,
        description="Corners of each vertex class, named by the segment they start",
    )
    stratum: str = ""
    regular_points: int = 0
    nontrivial_points: int = 0


# ── Classifier ──────────────────────────────────────────────────


class Certificate(BaseModel):
    clause: str = Field(description="Identifier of the deciding clause")
    summary: str = ""
    params: Dict[str, str] = Field(default_factory=dict)


class StratumAssignment(BaseModel):
    """Equatorial singularities plus the residue data at the poles of the associated differential."""
    kind: Literal["quadratic", "abelian"]
    stratum: str
    equatorial: List[str] = Field(description="Turns of the singularities placed on the equator")
    orders: List[int] = Field(description="Orders of the equatorial singularities")
    pole_residues: List[str] = Field(description="Residues at the double (or simple) poles")
    t: int = Field(description="Number of double (or simple) poles")
    added_units: int = Field(default=0, description="Poles added at regular points (residue ±1)")
    strata_clause: str = ""


class CoaxialBudget(BaseModel):
    K: int
    M: int
    signs: List[int] = Field(default_factory=list)


class Verdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    realizable: bool
    monodromy: MonodromyName
    path: Literal["literal", "strata-reduction"]
    certificate: Certificate
    assignment: Optional[StratumAssignment] = None
    budget: Optional[CoaxialBudget] = None
    witness: Optional[JenkinsStrebelSurface] = None
    divergence: Optional[str] = Field(
        default=None,
        description="Set when the literal arithmetic bound disagrees with the residue predicate",
    )
    gauss_bonnet: Optional[Literal["holds", "fails", "undetermined"]] = Field(
        default=None, description="Plain Gauss-Bonnet status, reported on rejects"
    )
    notes: List[str] = Field(default_factory=list)
    components: List[Verdict] = Field(
        default_factory=list, description="Per-class verdicts behind a dihedral-any disjunction"
    )


class ClassificationReport(BaseModel):
    """Both decision paths on one request, plus the witness search when it ran."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    distribution: str
    genus: int
    monodromy: MonodromyName
    literal: Verdict
    reduction: Verdict
    divergence: Optional[str] = None
    search: Optional[SearchOutcome] = None


class LawCheck(BaseModel):
    name: str
    applies: bool
    holds: bool
    explanation: str = ""


class ComparisonReport(BaseModel):
    distribution: str
    genus: int
    coaxial: Verdict
    strict: Verdict
    any: Verdict
    laws: List[LawCheck] = Field(default_factory=list)
    documented_exceptions: List[str] = Field(default_factory=list)


# ── Search ──────────────────────────────────────────────────────


class SearchBounds(BaseModel):
    max_segments: int = Field(default=8, ge=2)
    max_denominator: int = Field(default=24, ge=1)
    max_regular: int = Field(default=2, ge=0)


class SearchOutcome(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: Literal["found", "exhausted", "bounds-exceeded"]
    witness: Optional[JenkinsStrebelSurface] = None
    bounds: SearchBounds
    examined: int = Field(default=0, description="Gluing combinatorics checked")
    skipped: List[str] = Field(
        default_factory=list,
        description="Configurations left out because they need more segments than allowed",
    )


class SurfaceBounds(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    max_segments: int = Field(default=4, ge=2)
    max_length: int = Field(default=2, ge=1, description="Largest segment length in grid units")
    denominator: int = Field(default=1, ge=1, description="Grid denominator for segment lengths")
    circumferences: Optional[List[Rational]] = None


# ── Runs ────────────────────────────────────────────────────────


class CrosscheckRow(BaseModel):
    genus: int
    turns: str
    monodromy: MonodromyName
    literal: bool
    reduction: bool
    oracle: Optional[str] = Field(default=None, description="Witness search status, when the oracle ran")
    oracle_agrees: Optional[bool] = None
    divergence: Optional[str] = None
    literal_certificate: str = ""
    reduction_certificate: str = ""


class RunState(BaseModel):
    """Progress of one orchestrated run (crosscheck, oracle sweep, census)."""
    status: str = Field(default="idle", description="idle | running | done | failed")
    current_step: str = ""
    errors: List[str] = Field(default_factory=list)
    rows: int = 0


Verdict.model_rebuild()
ClassificationReport.model_rebuild()
