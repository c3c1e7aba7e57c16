"""
orchestrator.py — Run controller for classification requests.
Runs both decision paths, the witness oracle, class comparison, crosscheck sweeps and the surface census.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator, List, Optional, Sequence

import pandas as pd

from config import Settings, get_settings
from deciders import verdicts as V
from deciders.comparison_critic import ComparisonCritic
from deciders.literal_decider import LiteralDecider
from deciders.reduction_decider import ReductionDecider
from engine.angles import AngleDistribution, parse_exact
from engine.run_logger import RunLogger
from generators.surface_enumerator import SurfaceEnumerator
from generators.witness_search import WitnessSearch
from models import (
    ClassificationReport,
    ComparisonReport,
    CrosscheckRow,
    JenkinsStrebelSurface,
    RunState,
    SearchBounds,
    SearchOutcome,
    SurfaceBounds,
    Verdict,
)

CROSSCHECK_CLASSES = ("coaxial", "strict-dihedral")


class ClassificationOrchestrator:
    """Glues the deciders, the oracle and the census together.

    State machine: idle → running → done (or failed).
    on_status_change(status, step) is called on every transition.
    """

    def __init__(
        self,
        settings: Optional[Settings] = None,
        on_status_change: Optional[Callable[[str, str], None]] = None,
    ) -> None:
        self._settings = settings or get_settings()
        self._log = RunLogger("Orchestrator", self._settings)

        self._literal = LiteralDecider(self._settings)
        self._reduction = ReductionDecider(self._settings)
        self._critic = ComparisonCritic(self._literal, self._settings, self._reduction)
        self._search = WitnessSearch(self._settings)
        self._enumerator = SurfaceEnumerator(self._settings)

        self.state = RunState()
        self._on_status_change = on_status_change

    def _set_status(self, status: str, step: str = "") -> None:
        self.state.status = status
        self.state.current_step = step
        self._log.info(f"Run status: {status} | {step}")
        if self._on_status_change:
            self._on_status_change(status, step)

    def _fail(self, step: str, error: Exception) -> None:
        self._set_status("failed", f"{step} failed: {error}")
        self.state.errors.append(str(error))

    # ── Single requests ─────────────────────────────────────

    def classify(
        self,
        dist: AngleDistribution,
        monodromy: str,
        witness: bool = False,
        bounds: Optional[SearchBounds] = None,
    ) -> ClassificationReport:
        """Both paths on one request; with witness=True the oracle runs when the reduction path accepts."""
        monodromy = V.normalize_class(monodromy)
        self._set_status("running", f"classify {dist} [{monodromy}]")
        try:
            literal = self._literal.classify(dist, monodromy)
            reduction = self._reduction.classify(dist, monodromy)
            divergence = V.path_divergence(literal, reduction)
            if divergence == V.UNEXPLAINED:
                self._log.error(f"{dist} [{monodromy}]: paths disagree without a documented reason")
            elif divergence:
                self._log.warning(f"{dist} [{monodromy}]: {divergence} divergence")

            search: Optional[SearchOutcome] = None
            if witness and reduction.realizable:
                if dist.is_rational:
                    search = self._search.search(dist, monodromy, bounds)
                    if search.witness is not None:
                        literal = _with_witness(literal, search.witness)
                        reduction = _with_witness(reduction, search.witness)
                else:
                    self._log.warning(f"{dist}: symbolic angles, witness search skipped")

            self._set_status("done", f"classify {dist}")
            return ClassificationReport(
                distribution=str(dist),
                genus=dist.genus,
                monodromy=monodromy,
                literal=literal,
                reduction=reduction,
                divergence=divergence,
                search=search,
            )
        except Exception as e:
            self._fail("classify", e)
            raise

    def compare(self, dist: AngleDistribution) -> ComparisonReport:
        self._set_status("running", f"compare {dist}")
        try:
            report = self._critic.compare(dist)
            self._set_status("done", f"compare {dist}")
            return report
        except Exception as e:
            self._fail("compare", e)
            raise

    def witness(
        self,
        dist: AngleDistribution,
        monodromy: str,
        bounds: Optional[SearchBounds] = None,
    ) -> SearchOutcome:
        monodromy = V.normalize_class(monodromy)
        self._set_status("running", f"witness {dist} [{monodromy}]")
        try:
            outcome = self._search.search(dist, monodromy, bounds)
            self._set_status("done", f"witness {outcome.status}")
            return outcome
        except Exception as e:
            self._fail("witness", e)
            raise

    def oracle_check(
        self,
        dist: AngleDistribution,
        monodromy: str,
        bounds: Optional[SearchBounds] = None,
    ) -> Optional[SearchOutcome]:
        """Witness search used as an oracle; None where it does not apply (symbolic or trivial monodromy)."""
        if not dist.is_rational:
            return None
        if dist.genus == 0 and all(a.is_integer for a in dist.angles):
            return None
        return self._search.search(dist, V.normalize_class(monodromy), bounds)

    # ── Sweeps ──────────────────────────────────────────────

    def crosscheck(
        self,
        coefficients: Optional[Sequence[str]] = None,
        max_n: Optional[int] = None,
        max_genus: Optional[int] = None,
        oracle: bool = False,
        bounds: Optional[SearchBounds] = None,
    ) -> pd.DataFrame:
        """Literal path against reduction path (and optionally the oracle) over a grid of distributions.

        The grid is every multiset of at most max_n coefficients, for every genus up to max_genus.
        The oracle only runs in genus zero.
        """
        coefficients = list(coefficients or self._settings.coefficient_grid)
        max_n = max_n or self._settings.crosscheck_max_n
        max_genus = self._settings.crosscheck_max_genus if max_genus is None else max_genus
        values = sorted({parse_exact(c) for c in coefficients}, key=lambda v: v.sort_key())

        self._set_status("running", f"crosscheck {len(values)} coefficients, n ≤ {max_n}, g ≤ {max_genus}")
        rows: List[dict] = []
        try:
            for genus in range(max_genus + 1):
                with self._log.step_start(f"crosscheck genus {genus}"):
                    for n in range(1, max_n + 1):
                        for combo in itertools.combinations_with_replacement(values, n):
                            dist = AngleDistribution.from_turns(genus, combo)
                            for monodromy in CROSSCHECK_CLASSES:
                                rows.append(self._crosscheck_row(dist, monodromy, oracle and genus == 0, bounds))
                self.state.rows = len(rows)
        except Exception as e:
            self._fail("crosscheck", e)
            raise

        frame = pd.DataFrame(rows, columns=list(CrosscheckRow.model_fields))
        flagged = int(frame["divergence"].notna().sum())
        unexplained = int((frame["divergence"] == V.UNEXPLAINED).sum())
        self._log.info(f"crosscheck: {len(frame)} rows, {flagged} divergent, {unexplained} unexplained")
        self._set_status("done", f"crosscheck {len(frame)} rows")
        return frame

    def _crosscheck_row(
        self,
        dist: AngleDistribution,
        monodromy: str,
        oracle: bool,
        bounds: Optional[SearchBounds],
    ) -> dict:
        literal = self._literal.classify(dist, monodromy)
        reduction = self._reduction.classify(dist, monodromy)
        row = CrosscheckRow(
            genus=dist.genus,
            turns=",".join(str(a) for a in dist.angles),
            monodromy=monodromy,
            literal=literal.realizable,
            reduction=reduction.realizable,
            divergence=V.path_divergence(literal, reduction),
            literal_certificate=literal.certificate.clause,
            reduction_certificate=reduction.certificate.clause,
        )
        if oracle:
            outcome = self.oracle_check(dist, monodromy, bounds)
            if outcome is not None:
                row.oracle = outcome.status
                if outcome.status != "bounds-exceeded":
                    row.oracle_agrees = (outcome.status == "found") == reduction.realizable
        return row.model_dump()

    # ── Census ──────────────────────────────────────────────

    def enumerate(self, bounds: SurfaceBounds) -> Iterator[JenkinsStrebelSurface]:
        self._set_status("running", f"enumerate up to {bounds.max_segments} segments")
        return self._enumerator.enumerate(bounds)

    def census(self, bounds: SurfaceBounds) -> pd.DataFrame:
        self._set_status("running", f"census up to {bounds.max_segments} segments")
        try:
            frame = self._enumerator.census(bounds)
            self.state.rows = len(frame)
            self._set_status("done", f"census {int(frame['count'].sum()) if len(frame) else 0} surfaces")
            return frame
        except Exception as e:
            self._fail("census", e)
            raise


def _with_witness(verdict: Verdict, witness: JenkinsStrebelSurface) -> Verdict:
    if not verdict.realizable:
        return verdict
    return verdict.model_copy(update={"witness": witness})
