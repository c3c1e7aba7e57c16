"""
deciders/exceptional_families.py — Distributions that fail for a residue obstruction
even though the strengthened Gauss-Bonnet inequality holds.

Torus families (genus one) and three sphere families; all angles in turn units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from engine.angles import ExactValue, Partition
from engine.strata import aabb_relation, abc_relation
from models import Certificate

HALF = Fraction(1, 2)

TORUS_EVEN = "torus-family-(4k+2)"
TORUS_EVEN_EQUAL = "torus-family-(4k+2)-equal-nonintegers"
TORUS_ODD_PAIR = "torus-family-(2k+3,2k+1)"
TORUS_ODD_PAIR_EQUAL = "torus-family-(2k+3,2k+1)-equal-nonintegers"
SPHERE_THREE_ODD = "sphere-family-three-odd"
SPHERE_ADJACENT_ODD = "sphere-family-adjacent-odd"
SPHERE_EQUAL_ODD = "sphere-family-equal-odd"

FAMILY_CLAUSES = {
    TORUS_EVEN,
    TORUS_EVEN_EQUAL,
    TORUS_ODD_PAIR,
    TORUS_ODD_PAIR_EQUAL,
    SPHERE_THREE_ODD,
    SPHERE_ADJACENT_ODD,
    SPHERE_EQUAL_ODD,
}

# Families whose members are also realizable with co-axial monodromy.
COAXIAL_TORUS_FAMILIES = {TORUS_EVEN, TORUS_EVEN_EQUAL}


@dataclass(frozen=True)
class FamilyMatch:
    clause: str
    summary: str
    params: Dict[str, str] = field(default_factory=dict)

    def certificate(self, **extra: str) -> Certificate:
        return Certificate(clause=self.clause, summary=self.summary, params={**self.params, **extra})


def _singular_evens(part: Partition) -> List[int]:
    """Even angles other than marked regular points (turn 1)."""
    return [e for e in part.evens if e != 1]


def _equal_nonintegers(part: Partition, count: int) -> Optional[ExactValue]:
    if part.nN != count or len(set(part.nonintegers)) != 1:
        return None
    return part.nonintegers[0]


def torus_family(part: Partition) -> Optional[FamilyMatch]:
    """The four genus-one families; k ≥ 0 when alone, k ≥ 1 with 2k equal non-integer angles."""
    evens = _singular_evens(part)
    if part.nO == 0 and len(evens) == 1 and evens[0] % 2 == 1:
        k = (evens[0] - 1) // 2
        if part.nN == 0:
            return FamilyMatch(TORUS_EVEN, f"(4k+2)π alone, k={k}", {"k": str(k)})
        c = _equal_nonintegers(part, 2 * k) if k >= 1 else None
        if c is not None:
            return FamilyMatch(
                TORUS_EVEN_EQUAL,
                f"(4k+2)π with {2 * k} equal non-integer angles, k={k}",
                {"k": str(k), "c": str(c)},
            )
    if not evens and part.nO == 2:
        b1, b2 = part.odds
        if b1 - b2 == 1:
            k = int(b2 - HALF)
            if part.nN == 0:
                return FamilyMatch(TORUS_ODD_PAIR, f"((2k+3)π,(2k+1)π) alone, k={k}", {"k": str(k)})
            c = _equal_nonintegers(part, 2 * k) if k >= 1 else None
            if c is not None:
                return FamilyMatch(
                    TORUS_ODD_PAIR_EQUAL,
                    f"((2k+3)π,(2k+1)π) with {2 * k} equal non-integer angles, k={k}",
                    {"k": str(k), "c": str(c)},
                )
    return None


def three_odd_family(part: Partition) -> Optional[FamilyMatch]:
    """((2k+1)π, (2k+1)π, (2l+1)π, α×(2k−1), β) with l ≥ k and one of α, β, l+½ the sum of the other two."""
    if _singular_evens(part) or part.nO != 3:
        return None
    b1, b2, b3 = part.odds
    if b2 != b3:
        return None
    k, l = int(b2 - HALF), int(b1 - HALF)
    if k < 1 or part.nN != 2 * k:
        return None
    values: List[ExactValue] = [ExactValue.of(c) for c in part.nonintegers] + [ExactValue.of(b1)]
    found = abc_relation(values, 2 * k - 1)
    if found is None:
        return None
    return FamilyMatch(
        SPHERE_THREE_ODD,
        f"three odd angles with k={k}, l={l}: {found['relation']}",
        {"k": str(k), "l": str(l), **found},
    )


def two_odd_family(part: Partition, units: int) -> Optional[FamilyMatch]:
    """Families of the two-odd case, matched on the pole circumferences (non-integer angles plus unit poles)."""
    if _singular_evens(part) or part.nO != 2 or units < 0:
        return None
    b1, b2 = part.odds
    values: List[ExactValue] = [ExactValue.of(c) for c in part.nonintegers] + [ExactValue(Fraction(1))] * units

    if b1 - b2 == 1:
        k = int(b2 - HALF)
        found = aabb_relation(values) if len(values) == 2 * k + 2 else None
        if found is not None:
            return FamilyMatch(
                SPHERE_ADJACENT_ODD,
                f"((2k+3)π,(2k+1)π) with pole circumferences (A,A,B,…,B), k={k}",
                {"k": str(k), **found},
            )
    if b1 == b2 and b2 >= 1 + HALF:
        k = int(b2 - 1 - HALF)
        found = abc_relation(values, 2 * k + 1) if len(values) == 2 * k + 3 else None
        if found is not None:
            return FamilyMatch(
                SPHERE_EQUAL_ODD,
                f"((2k+3)π,(2k+3)π) with pole circumferences (A,B,C×{2 * k + 1}), {found['relation']}, k={k}",
                {"k": str(k), **found},
            )
    return None


def coaxial_torus_exception(part: Partition) -> Optional[FamilyMatch]:
    """Torus families that are realizable co-axially but not strictly."""
    match = torus_family(part)
    if match is not None and match.clause in COAXIAL_TORUS_FAMILIES:
        return match
    return None
