"""
deciders/verdicts.py — Clause identifiers and the verdict plumbing shared by both decision paths.
"""

from __future__ import annotations

from typing import List, Optional

from deciders.exceptional_families import FAMILY_CLAUSES
from engine.angles import AngleDistribution, gauss_bonnet
from models import Certificate, Verdict

# ── Clauses ────────────────────────────────────────────────────

TRIVIAL_MONODROMY = "trivial-monodromy"
COAXIAL_SIGNED_SUM = "coaxial-signed-sum"
COAXIAL_PARITY = "coaxial-parity"
COAXIAL_NO_SIGNED_SUM = "coaxial-no-signed-sum"
COAXIAL_ARITHMETIC = "coaxial-arithmetic-condition"
TOO_FEW_ODD = "too-few-odd"
CYCLIC_MONODROMY = "cyclic-monodromy"
STRENGTHENED_GB = "strengthened-gauss-bonnet"
FOUR_ODD = "four-odd-generic"
ARITHMETIC_CONDITION = "arithmetic-condition"
MAXIMAL_REALIZABLE = "maximal-assignment-realizable"
ASSIGNMENT_REALIZABLE = "assignment-realizable"
NO_REALIZABLE_ASSIGNMENT = "no-realizable-assignment"
NO_ADMISSIBLE_ASSIGNMENT = "no-admissible-assignment"
DISJUNCTION = "dihedral-disjunction"

# ── Divergences between the literal and the reduction path ─────

LITERAL_BOUND = "literal-bound"
FAMILY_OVERREACH = "family-overreach"
NON_MAXIMAL_RESCUE = "non-maximal-rescue"
UNEXPLAINED = "unexplained"
DOCUMENTED_DIVERGENCES = {LITERAL_BOUND, FAMILY_OVERREACH, NON_MAXIMAL_RESCUE}

DENSE_MONODROMY_NOTE = "the metric can also be chosen with a dense monodromy group (not verified)"

MONODROMY_CLASSES = ("coaxial", "strict-dihedral", "dihedral-any")
CLASS_ALIASES = {
    "coaxial": "coaxial",
    "strict": "strict-dihedral",
    "strict-dihedral": "strict-dihedral",
    "any": "dihedral-any",
    "dihedral-any": "dihedral-any",
}


def normalize_class(name: str) -> str:
    try:
        return CLASS_ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown monodromy class {name!r}") from None


def regular_point_notes(dist: AngleDistribution) -> List[str]:
    return [
        f"angle #{i + 1} is 2π: a marked regular point, counted as an even singularity"
        for i in dist.regular_points
    ]


def gauss_bonnet_status(dist: AngleDistribution) -> str:
    holds = gauss_bonnet(dist)
    if holds is None:
        return "undetermined"
    return "holds" if holds else "fails"


def make_verdict(
    dist: AngleDistribution,
    realizable: bool,
    monodromy: str,
    path: str,
    clause: str,
    summary: str = "",
    params: Optional[dict] = None,
    notes: Optional[List[str]] = None,
    **fields,
) -> Verdict:
    """Verdict with the regular-point notes attached and, on rejects, the plain Gauss-Bonnet status."""
    return Verdict(
        realizable=realizable,
        monodromy=monodromy,
        path=path,
        certificate=Certificate(
            clause=clause,
            summary=summary,
            params={k: str(v) for k, v in (params or {}).items()},
        ),
        gauss_bonnet=None if realizable else gauss_bonnet_status(dist),
        notes=[*(notes or []), *regular_point_notes(dist)],
        **fields,
    )


def disjunction(dist: AngleDistribution, path: str, coaxial: Verdict, strict: Verdict) -> Verdict:
    """dihedral-any: realizable when either class is; both component verdicts are kept."""
    realizable = coaxial.realizable or strict.realizable
    chosen = [v.monodromy for v in (coaxial, strict) if v.realizable]
    summary = f"realizable with {' and '.join(chosen)} monodromy" if chosen else "neither class is realizable"
    return make_verdict(
        dist,
        realizable,
        "dihedral-any",
        path,
        DISJUNCTION,
        summary,
        {"coaxial": coaxial.certificate.clause, "strict-dihedral": strict.certificate.clause},
        components=[coaxial, strict],
        divergence=strict.divergence or coaxial.divergence,
    )


def path_divergence(literal: Verdict, reduction: Verdict) -> Optional[str]:
    """Name the disagreement between the two paths on one request, None when there is nothing to report.

    A literal-bound disagreement is reported even when both verdicts agree.
    """
    if literal.components and reduction.components:
        found = [path_divergence(lv, rv) for lv, rv in zip(literal.components, reduction.components)]
        named = [d for d in found if d]
        if UNEXPLAINED in named:
            return UNEXPLAINED
        return named[0] if named else None
    if literal.realizable == reduction.realizable:
        return literal.divergence
    if reduction.realizable and literal.certificate.clause in FAMILY_CLAUSES:
        return FAMILY_OVERREACH
    if (
        reduction.realizable
        and literal.certificate.clause == ARITHMETIC_CONDITION
        and reduction.certificate.params.get("maximal") == "no"
    ):
        return NON_MAXIMAL_RESCUE
    return UNEXPLAINED


def trivial_monodromy(dist: AngleDistribution, monodromy: str, path: str) -> Verdict:
    return make_verdict(
        dist,
        False,
        monodromy,
        path,
        TRIVIAL_MONODROMY,
        "every angle lies in 2πℤ on the sphere: the monodromy is trivial (branched covers, classified separately)",
    )
