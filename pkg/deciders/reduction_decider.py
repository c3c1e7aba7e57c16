"""
deciders/reduction_decider.py — Realizability through residue queries on strata.

Strict dihedral: every admissible split of the πℤ angles into equatorial
singularities and double poles is turned into a quadratic stratum with
prescribed circumferences; the distribution is realizable when one of them is.
Co-axial: integer angles become zeros of a 1-form whose simple poles carry
the signed non-integer angles and ±1 for added regular points.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from config import Settings, get_settings
from deciders import verdicts as V
from deciders.literal_decider import coaxial_split
from engine.angles import AngleDistribution, ExactValue, integer_signed_sums, partition
from engine.run_logger import RunLogger
from engine.strata import (
    AbelianResidueConfig,
    AbelianStratum,
    QuadraticStratum,
    QuadResidueConfig,
    abelian_residues_realizable,
    quad_residues_realizable,
)
from models import CoaxialBudget, StrataVerdict, StratumAssignment, Verdict

PATH = "strata-reduction"


@dataclass(frozen=True)
class Assignment:
    """Equatorial turns (in πℤ/2π) and the circumferences left at the poles."""

    genus: int
    equatorial: Tuple[Fraction, ...]
    poles: Tuple[ExactValue, ...]
    t: int

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(int(2 * x - 2) for x in self.equatorial)

    @property
    def added_units(self) -> int:
        return self.t - len(self.poles)

    def circumferences(self) -> List[ExactValue]:
        return list(self.poles) + [ExactValue(Fraction(1))] * self.added_units

    def stratum(self) -> QuadraticStratum:
        return QuadraticStratum(self.genus, self.orders, self.t)

    def describe(self, clause: str = "") -> StratumAssignment:
        return StratumAssignment(
            kind="quadratic",
            stratum=str(self.stratum()),
            equatorial=[str(x) for x in self.equatorial],
            orders=list(self.stratum().orders),
            pole_residues=QuadResidueConfig.from_circumferences(self.circumferences()).residue_texts,
            t=self.t,
            added_units=self.added_units,
            strata_clause=clause,
        )


def admissible_assignments(dist: AngleDistribution) -> List[Assignment]:
    """All equator choices with an even number of odd angles (two or more on the sphere) and t ≥ max(1, poles).

    Ordered by equatorial turn sum, then by the sorted equatorial turns, both descending.
    """
    g = dist.genus
    part = partition(dist)
    integral = Counter([Fraction(e) for e in part.evens] + list(part.odds))
    values = sorted(integral, reverse=True)
    found: List[Assignment] = []
    for counts in itertools.product(*(range(integral[v] + 1) for v in values)):
        chosen = tuple(v for v, c in zip(values, counts) for _ in range(c))
        odd = sum(1 for x in chosen if x.denominator == 2)
        if odd % 2 or (g == 0 and odd < 2):
            continue
        t = int(sum(chosen, Fraction(0))) - len(chosen) - 2 * g + 2
        left = [ExactValue.of(v) for v, c in zip(values, counts) for _ in range(integral[v] - c)]
        poles = tuple(left + [ExactValue.of(c) for c in part.nonintegers])
        if t < max(1, len(poles)):
            continue
        found.append(Assignment(g, chosen, poles, t))
    found.sort(key=lambda a: (-sum(a.equatorial, Fraction(0)), tuple(-x for x in a.equatorial)))
    return found


class ReductionDecider:
    """Decides (distribution, class) by querying residue realizability on strata."""

    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings or get_settings()
        self._log = RunLogger("ReductionDecider", self._settings)

    def classify(self, dist: AngleDistribution, monodromy: str) -> Verdict:
        monodromy = V.normalize_class(monodromy)
        self._log.action("Classify via strata", f"{dist} [{monodromy}]")
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
        if g == 0 and not c:
            return V.trivial_monodromy(dist, "coaxial", PATH)
        t = sum(a) - len(a) - 2 * g + 2
        if t < 1:
            return V.make_verdict(
                dist, False, "coaxial", PATH, V.NO_ADMISSIBLE_ASSIGNMENT,
                f"the 1-form with zeros of order a−1 has t={t} simple poles",
                {"t": t},
            )
        stratum = AbelianStratum(g, tuple(x - 1 for x in a), t)

        first_reject: Optional[Tuple[StrataVerdict, StratumAssignment, CoaxialBudget]] = None
        for K, witness in integer_signed_sums(c).items():
            M = t - len(c) - K
            if M < 0 or M % 2:
                continue
            units = M // 2
            config = AbelianResidueConfig(
                tuple(c) + (ExactValue(Fraction(1)),) * (2 * units + K),
                tuple(witness.signs) + (1,) * units + (-1,) * (units + K),
            )
            strata = abelian_residues_realizable(stratum, config)
            self._log.debug(f"{stratum} residues ({','.join(config.residue_texts)}): {strata.clause}")
            assignment = StratumAssignment(
                kind="abelian",
                stratum=str(stratum),
                equatorial=[str(x) for x in a],
                orders=list(stratum.zero_orders),
                pole_residues=config.residue_texts,
                t=t,
                added_units=M + K,
                strata_clause=strata.clause,
            )
            budget = CoaxialBudget(K=K, M=M, signs=list(witness.signs))
            if strata.realizable:
                return V.make_verdict(
                    dist, True, "coaxial", PATH, V.ASSIGNMENT_REALIZABLE,
                    f"{stratum} realizes residues ({','.join(config.residue_texts)})",
                    {"stratum": str(stratum), "residues": ",".join(config.residue_texts), "K": K, "M": M},
                    assignment=assignment, budget=budget,
                )
            if first_reject is None:
                first_reject = (strata, assignment, budget)

        if first_reject is None:
            return V.make_verdict(
                dist, False, "coaxial", PATH, V.NO_ADMISSIBLE_ASSIGNMENT,
                f"no residue configuration on {stratum} sums to zero with M ≥ 0 even",
                {"stratum": str(stratum), "t": t},
            )
        strata, assignment, budget = first_reject
        return V.make_verdict(
            dist, False, "coaxial", PATH, V.NO_REALIZABLE_ASSIGNMENT,
            f"{stratum}: every signed residue configuration is excluded ({strata.clause} first)",
            {"stratum": str(stratum), "residues": ",".join(assignment.pole_residues), "strata_clause": strata.clause},
            assignment=assignment, budget=budget,
        )

    # ── strict dihedral ─────────────────────────────────────

    def _query(self, assignment: Assignment) -> StrataVerdict:
        stratum = assignment.stratum()
        config = QuadResidueConfig.from_circumferences(assignment.circumferences())
        verdict = quad_residues_realizable(stratum, config)
        self._log.debug(f"{stratum} residues ({','.join(config.residue_texts)}): {verdict.clause}")
        return verdict

    def classify_strict(self, dist: AngleDistribution) -> Verdict:
        part = partition(dist)
        if dist.genus == 0 and part.nO < 2:
            return V.make_verdict(
                dist, False, "strict-dihedral", PATH, V.TOO_FEW_ODD,
                f"a primitive differential on the sphere needs two odd orders, found {part.nO} odd angles",
            )
        if dist.genus == 0 and part.nO + part.nN < 3:
            return V.make_verdict(
                dist, False, "strict-dihedral", PATH, V.CYCLIC_MONODROMY,
                "fewer than three angles outside 2πℤ: the monodromy is cyclic",
            )

        candidates = admissible_assignments(dist)
        if not candidates:
            return V.make_verdict(
                dist, False, "strict-dihedral", PATH, V.NO_ADMISSIBLE_ASSIGNMENT,
                "no equator choice leaves enough double poles",
                {"T": part.T, "n": part.n},
            )

        results: List[Optional[StrataVerdict]] = [None] * len(candidates)
        with ThreadPoolExecutor(max_workers=self._settings.jobs) as executor:
            futures = {executor.submit(self._query, a): i for i, a in enumerate(candidates)}
            for future in as_completed(futures):
                results[futures[future]] = future.result()

        notes = [V.DENSE_MONODROMY_NOTE] if dist.genus >= 1 or part.nO >= 4 else []
        for index, (assignment, strata) in enumerate(zip(candidates, results)):
            if strata is not None and strata.realizable:
                described = assignment.describe(strata.clause)
                return V.make_verdict(
                    dist, True, "strict-dihedral", PATH, V.ASSIGNMENT_REALIZABLE,
                    f"{described.stratum} realizes residues ({','.join(described.pole_residues)})",
                    {
                        "stratum": described.stratum,
                        "residues": ",".join(described.pole_residues),
                        "maximal": "yes" if index == 0 else "no",
                    },
                    notes=notes,
                    assignment=described,
                )

        top, strata = candidates[0], results[0]
        described = top.describe(strata.clause)
        return V.make_verdict(
            dist, False, "strict-dihedral", PATH, V.NO_REALIZABLE_ASSIGNMENT,
            f"{len(candidates)} assignment(s) excluded; maximal {described.stratum} "
            f"with residues ({','.join(described.pole_residues)}) by the {strata.clause} clause",
            {
                "stratum": described.stratum,
                "residues": ",".join(described.pole_residues),
                "strata_clause": strata.clause,
                "assignments": len(candidates),
                **strata.detail,
            },
            assignment=described,
        )


def classify_via_strata(dist: AngleDistribution, monodromy: str, settings: Optional[Settings] = None) -> Verdict:
    return ReductionDecider(settings).classify(dist, monodromy)
