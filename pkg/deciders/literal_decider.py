"""
deciders/literal_decider.py — Realizability read directly off the classification statements.

Co-axial: signed-sum budget (plus the genus-zero arithmetic condition).
Strict dihedral: strengthened Gauss-Bonnet, exceptional families, and in genus
zero with two or three odd angles the residue condition on the maximal
equatorial assignment. The stated Σr bound is evaluated alongside and any
disagreement with the residue predicate is reported as a divergence.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional

from config import Settings, get_settings
from deciders import verdicts as V
from deciders.exceptional_families import three_odd_family, torus_family, two_odd_family
from engine.angles import AngleDistribution, ExactValue, Partition, common_scale, integer_signed_sums, partition, strengthened_gb
from engine.run_logger import RunLogger
from engine.strata import EXC_AABB, EXC_ABC, QuadraticStratum, QuadResidueConfig, quad_residues_realizable
from models import CoaxialBudget, StrataVerdict, StratumAssignment, Verdict

PATH = "literal"


def coaxial_split(dist: AngleDistribution):
    """Integer turns (the a's) against everything else (the c's, half-integers included)."""
    a = sorted((int(x.turn) for x in dist.angles if x.is_integer), reverse=True)
    c = [ExactValue.of(x) for x in dist.angles if not x.is_integer]
    return a, c


def maximal_assignment(part: Partition) -> StratumAssignment:
    """Every even angle and the two largest odd ones on the equator; T+2−n unit poles."""
    b = part.odds
    orders = [2 * e - 2 for e in part.evens] + [int(2 * x - 2) for x in b[:2]]
    t = part.T - part.nE
    units = part.T + 2 - part.n
    circumferences = [ExactValue.of(c) for c in part.nonintegers] + [ExactValue.of(x) for x in b[2:]]
    circumferences += [ExactValue(Fraction(1))] * units
    stratum = QuadraticStratum(0, tuple(orders), t)
    return StratumAssignment(
        kind="quadratic",
        stratum=str(stratum),
        equatorial=[str(e) for e in part.evens] + [str(x) for x in b[:2]],
        orders=list(stratum.orders),
        pole_residues=QuadResidueConfig.from_circumferences(circumferences).residue_texts,
        t=t,
        added_units=units,
    )


def literal_bound(part: Partition) -> Optional[bool]:
    """Σr ≥ b1+b2 (Σr even) or Σr ≥ b1 (Σr odd) for the pole vector on a common ray; None when not commensurable."""
    b = part.odds
    values = [ExactValue.of(c) for c in part.nonintegers] + [ExactValue.of(x) for x in b[2:]]
    values += [ExactValue(Fraction(1))] * (part.T + 2 - part.n)
    scale = common_scale(values)
    if scale is None:
        return None
    total = scale.total
    if total % 2 == 0:
        return total >= b[0] + b[1]
    return total >= b[0]


class LiteralDecider:
    """Decides (distribution, class) straight from the classification statements."""

    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings or get_settings()
        self._log = RunLogger("LiteralDecider", self._settings)

    def classify(self, dist: AngleDistribution, monodromy: str) -> Verdict:
        monodromy = V.normalize_class(monodromy)
        self._log.action("Classify", f"{dist} [{monodromy}]")
        if monodromy == "coaxial":
            verdict = self.classify_coaxial(dist)
        elif monodromy == "strict-dihedral":
            verdict = self.classify_strict(dist)
        else:
            if dist.genus == 0 and all(a.is_integer for a in dist.angles):
                verdict = V.trivial_monodromy(dist, monodromy, PATH)
            else:
                verdict = V.disjunction(dist, PATH, self.classify_coaxial(dist), self.classify_strict(dist))
        self._log.verdict(verdict)
        return verdict

    # ── co-axial ────────────────────────────────────────────

    def classify_coaxial(self, dist: AngleDistribution) -> Verdict:
        g = dist.genus
        a, c = coaxial_split(dist)
        p = len(c)
        t = sum(a) - len(a) - 2 * g + 2
        params = {"sum_a": sum(a), "n_a": len(a), "p": p, "t": t}

        if p == 0:
            if g == 0:
                return V.trivial_monodromy(dist, "coaxial", PATH)
            ok = t > 0 and t % 2 == 0
            return V.make_verdict(
                dist, ok, "coaxial", PATH, V.COAXIAL_PARITY,
                f"Σa−2g+2−n = {t} is {'positive and even' if ok else 'not positive and even'}",
                params,
                budget=CoaxialBudget(K=0, M=t) if ok else None,
            )

        parity_passed: List[CoaxialBudget] = []
        for K, witness in integer_signed_sums(c).items():
            M = t - p - K
            if M < 0 or M % 2:
                continue
            budget = CoaxialBudget(K=K, M=M, signs=list(witness.signs))
            if g >= 1:
                return V.make_verdict(
                    dist, True, "coaxial", PATH, V.COAXIAL_SIGNED_SUM,
                    f"signed sum K={K} leaves M={M} ≥ 0 and even",
                    {**params, "K": K, "M": M},
                    budget=budget,
                )
            parity_passed.append(budget)
            scale = common_scale(c + [ExactValue(Fraction(1))] * (M + K))
            top = max(a, default=0)
            if scale is None or 2 * top <= scale.total:
                detail = "not commensurable" if scale is None else f"2·max(a)={2 * top} ≤ Σb={scale.total}"
                return V.make_verdict(
                    dist, True, "coaxial", PATH, V.COAXIAL_SIGNED_SUM,
                    f"signed sum K={K} leaves M={M} ≥ 0 and even; {detail}",
                    {**params, "K": K, "M": M},
                    budget=budget,
                )

        if parity_passed:
            first = parity_passed[0]
            return V.make_verdict(
                dist, False, "coaxial", PATH, V.COAXIAL_ARITHMETIC,
                f"every admissible signed sum fails 2·max(a) ≤ Σb (max a = {max(a, default=0)})",
                {**params, "K": first.K, "M": first.M},
                budget=first,
            )
        return V.make_verdict(
            dist, False, "coaxial", PATH, V.COAXIAL_NO_SIGNED_SUM,
            "no integer signed sum K leaves M ≥ 0 and even",
            params,
        )

    # ── strict dihedral ─────────────────────────────────────

    def classify_strict(self, dist: AngleDistribution) -> Verdict:
        g = dist.genus
        part = partition(dist)
        gb_params = {"T": part.T, "n": part.n, "nE": part.nE, "nO": part.nO, "nN": part.nN}

        if g == 0:
            if part.nO < 2:
                return V.make_verdict(
                    dist, False, "strict-dihedral", PATH, V.TOO_FEW_ODD,
                    f"the sphere needs at least two odd angles, found {part.nO}", gb_params,
                )
            if part.nO + part.nN < 3:
                return V.make_verdict(
                    dist, False, "strict-dihedral", PATH, V.CYCLIC_MONODROMY,
                    "fewer than three angles outside 2πℤ: the monodromy is cyclic", gb_params,
                )

        if not strengthened_gb(part, g):
            bound = 2 * g + part.n - (1 if part.nO % 2 == 0 and part.nN == 0 else 2)
            return V.make_verdict(
                dist, False, "strict-dihedral", PATH, V.STRENGTHENED_GB,
                f"T={part.T} < {bound}", {**gb_params, "bound": bound},
            )

        if g >= 1:
            family = torus_family(part) if g == 1 else None
            if family is not None:
                return self._family_reject(dist, family.certificate())
            return V.make_verdict(
                dist, True, "strict-dihedral", PATH, V.STRENGTHENED_GB,
                f"strengthened Gauss-Bonnet holds (T={part.T})", gb_params,
                notes=[V.DENSE_MONODROMY_NOTE],
            )

        if part.nO >= 4:
            return V.make_verdict(
                dist, True, "strict-dihedral", PATH, V.FOUR_ODD,
                f"{part.nO} odd angles: strengthened Gauss-Bonnet suffices", gb_params,
                notes=[V.DENSE_MONODROMY_NOTE],
            )
        return self._genus0_residue_case(dist, part)

    def _family_reject(self, dist: AngleDistribution, certificate, **fields) -> Verdict:
        return V.make_verdict(
            dist, False, "strict-dihedral", PATH, certificate.clause, certificate.summary,
            certificate.params, **fields,
        )

    def _genus0_residue_case(self, dist: AngleDistribution, part: Partition) -> Verdict:
        assignment = maximal_assignment(part)
        stratum = QuadraticStratum(0, tuple(assignment.orders), assignment.t)
        circumferences = [ExactValue.of(c) for c in part.nonintegers] + [ExactValue.of(x) for x in part.odds[2:]]
        circumferences += [ExactValue(Fraction(1))] * assignment.added_units
        strata: StrataVerdict = quad_residues_realizable(stratum, QuadResidueConfig.from_circumferences(circumferences))
        assignment = assignment.model_copy(update={"strata_clause": strata.clause})
        self._log.debug(f"maximal assignment {assignment.stratum} residues {assignment.pole_residues}: {strata.clause}")

        bound = literal_bound(part)
        divergence = V.LITERAL_BOUND if bound is not None and bound != strata.realizable else None
        if divergence:
            self._log.warning(
                f"stated Σr bound {'passes' if bound else 'fails'} but the residue predicate says {strata.clause}"
            )

        family = three_odd_family(part) if part.nO == 3 else two_odd_family(part, assignment.added_units)
        if family is not None and (strata.realizable or strata.clause in (EXC_ABC, EXC_AABB)):
            return self._family_reject(
                dist,
                family.certificate(stratum=assignment.stratum, strata_clause=strata.clause),
                assignment=assignment,
                divergence=divergence,
            )

        params = {
            "stratum": assignment.stratum,
            "residues": ",".join(assignment.pole_residues),
            "strata_clause": strata.clause,
            **strata.detail,
        }
        if family is not None:
            params["family"] = family.clause
        if not strata.realizable:
            return V.make_verdict(
                dist, False, "strict-dihedral", PATH, V.ARITHMETIC_CONDITION,
                f"stratum {assignment.stratum} with residues ({','.join(assignment.pole_residues)}) "
                f"is excluded by the {strata.clause} clause",
                params, assignment=assignment, divergence=divergence,
            )
        return V.make_verdict(
            dist, True, "strict-dihedral", PATH, V.MAXIMAL_REALIZABLE,
            f"stratum {assignment.stratum} realizes residues ({','.join(assignment.pole_residues)})",
            params, assignment=assignment, divergence=divergence,
        )


def classify(dist: AngleDistribution, monodromy: str, settings: Optional[Settings] = None) -> Verdict:
    return LiteralDecider(settings).classify(dist, monodromy)
