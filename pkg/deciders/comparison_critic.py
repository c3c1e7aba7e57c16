"""
deciders/comparison_critic.py — Consistency gate across monodromy classes.
Checks the verdicts of one distribution against the laws relating co-axial and strict realizability.
"""

from __future__ import annotations

from typing import List, Optional

from config import Settings, get_settings
from deciders import verdicts as V
from deciders.exceptional_families import coaxial_torus_exception
from deciders.literal_decider import LiteralDecider
from deciders.reduction_decider import ReductionDecider
from engine.angles import AngleDistribution, partition, strengthened_gb
from engine.run_logger import RunLogger
from errors import InconsistencyError
from models import ComparisonReport, LawCheck, Verdict


class ComparisonCritic:
    """Runs all three classes and asserts the comparison laws; unexplained violations raise."""

    def __init__(
        self,
        decider: Optional[LiteralDecider] = None,
        settings: Optional[Settings] = None,
        reduction: Optional[ReductionDecider] = None,
    ) -> None:
        self._settings = settings or get_settings()
        self._decider = decider or LiteralDecider(self._settings)
        self._reduction = reduction or ReductionDecider(self._settings)
        self._log = RunLogger("ComparisonCritic", self._settings)

    def _explanation(self, dist: AngleDistribution, strict: Verdict) -> Optional[str]:
        if strict.divergence in V.DOCUMENTED_DIVERGENCES:
            return strict.divergence
        found = V.path_divergence(strict, self._reduction.classify(dist, "strict-dihedral"))
        return found if found in V.DOCUMENTED_DIVERGENCES else None

    def _laws(self, dist: AngleDistribution, coaxial: Verdict, strict: Verdict, any_: Verdict) -> List[LawCheck]:
        g = dist.genus
        part = partition(dist)
        laws = [
            LawCheck(
                name="any-is-disjunction",
                applies=True,
                holds=any_.realizable == (coaxial.realizable or strict.realizable),
            ),
            LawCheck(
                name="strict-needs-strengthened-gauss-bonnet",
                applies=strict.realizable,
                holds=not strict.realizable or strengthened_gb(part, g),
            ),
        ]
        if g == 0:
            laws.append(
                LawCheck(
                    name="sphere-strict-needs-two-odd",
                    applies=strict.realizable,
                    holds=not strict.realizable or part.nO >= 2,
                )
            )
            expected = part.nO >= 2 and part.nO + part.nN >= 3
            laws.append(
                LawCheck(
                    name="sphere-coaxial-to-strict",
                    applies=coaxial.realizable,
                    holds=not coaxial.realizable or strict.realizable == expected,
                    explanation=f"nO={part.nO}, nO+nN={part.nO + part.nN}: strict expected {'YES' if expected else 'NO'}",
                )
            )
        else:
            exception = coaxial_torus_exception(part) if g == 1 else None
            laws.append(
                LawCheck(
                    name="coaxial-implies-strict",
                    applies=coaxial.realizable,
                    holds=not coaxial.realizable or strict.realizable or exception is not None,
                    explanation=f"listed exception {exception.summary}" if exception else "",
                )
            )
        return laws

    def compare(self, dist: AngleDistribution) -> ComparisonReport:
        self._log.action("Compare classes", str(dist))
        coaxial = self._decider.classify(dist, "coaxial")
        strict = self._decider.classify(dist, "strict-dihedral")
        any_ = self._decider.classify(dist, "dihedral-any")

        laws = self._laws(dist, coaxial, strict, any_)
        documented: List[str] = []
        for law in laws:
            self._log.debug(f"law {law.name}: applies={law.applies} holds={law.holds}")
            if law.holds:
                continue
            explained = self._explanation(dist, strict)
            if explained:
                documented.append(f"{law.name}: explained by the {explained} divergence")
                self._log.warning(f"{dist}: {law.name} fails, explained by {explained}")
                continue
            self._log.error(f"{dist}: {law.name} violated ({law.explanation})")
            raise InconsistencyError(f"{dist}: comparison law {law.name} violated; {law.explanation}")

        return ComparisonReport(
            distribution=str(dist),
            genus=dist.genus,
            coaxial=coaxial,
            strict=strict,
            any=any_,
            laws=laws,
            documented_exceptions=documented,
        )


def compare_classes(dist: AngleDistribution, settings: Optional[Settings] = None) -> ComparisonReport:
    return ComparisonCritic(settings=settings).compare(dist)
