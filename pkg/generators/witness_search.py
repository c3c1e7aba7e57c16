"""
generators/witness_search.py — Bounded exhaustive search for a hemispherical surface
realizing a rational angle distribution with a requested monodromy class.

Every cone point with angle in πℤ may sit on the equator (k corners, angle kπ)
or at the pole of a cylinder; every other cone point is a pole. Extra double
poles of circumference 1 and extra regular equatorial vertices are added as
the stratum equation demands.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational
from sympy.solvers.simplex import InfeasibleLPError, linprog

from config import Settings, get_settings
from engine.angles import AngleDistribution
from engine.run_logger import RunLogger
from errors import NonRationalInputError, SearchBoundsError
from generators.surface_analyzer import Gluing, _canonical_surface, monodromy_class
from generators.surface_enumerator import boundaries_for, cylinder_sizes, pair_list, perfect_matchings
from models import JenkinsStrebelSurface, SearchBounds, SearchOutcome

_CLASSES = ("coaxial", "strict-dihedral", "dihedral-any")


@dataclass(frozen=True)
class GluingConfig:
    """One way of splitting the cone points between equator and poles."""

    genus: int
    equatorial: Tuple[int, ...]
    ws: Tuple[Fraction, ...]
    regular: int

    @property
    def segments(self) -> int:
        edges = len(self.equatorial) + len(self.ws) - 2 + 2 * self.genus
        return 2 * edges

    def label(self) -> str:
        ks = ",".join(str(k) for k in self.equatorial)
        ws = ",".join(str(w) for w in self.ws)
        return f"k=({ks}) w=({ws}) +{self.regular} regular"


# ── Lengths ────────────────────────────────────────────────────


def _grid_fill(gluing: Gluing, pairs: List[Tuple[int, int]], targets: List[int]) -> Optional[List[int]]:
    """Positive integer pair lengths with each cylinder summing to its target."""
    remaining = list(targets)
    slots = [len(b) for b in gluing.boundaries]
    values = [0] * len(pairs)

    def place(i: int) -> bool:
        if i == len(pairs):
            return all(r == 0 for r in remaining)
        s, t = pairs[i]
        a, b = gluing.cyl_of[s], gluing.cyl_of[t]
        slots[a] -= 1
        slots[b] -= 1
        if a == b:
            hi = (remaining[a] - slots[a]) // 2
            if slots[a] == 0:
                candidates = [remaining[a] // 2] if remaining[a] % 2 == 0 else []
            else:
                candidates = list(range(1, hi + 1))
        else:
            hi = min(remaining[a] - slots[a], remaining[b] - slots[b])
            forced = {remaining[c] for c in (a, b) if slots[c] == 0}
            if len(forced) > 1:
                candidates = []
            elif forced:
                candidates = list(forced)
            else:
                candidates = list(range(1, hi + 1))
        for v in candidates:
            if v < 1 or v > hi:
                continue
            remaining[a] -= v
            remaining[b] -= v
            values[i] = v
            if place(i + 1):
                return True
            remaining[a] += v
            remaining[b] += v
        slots[a] += 1
        slots[b] += 1
        return False

    return values if place(0) else None


def _lp_lengths(gluing: Gluing, pairs: List[Tuple[int, int]], ws: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Exact simplex: maximise the smallest pair length subject to the cylinder sums."""
    P = len(pairs)
    objective = Matrix([[0] * P + [-1]])
    ub_rows, ub_rhs = [], []
    for j in range(P):
        row = [0] * (P + 1)
        row[j], row[P] = -1, 1
        ub_rows.append(row)
        ub_rhs.append(0)
    ub_rows.append([0] * P + [1])
    ub_rhs.append(1)
    eq_rows = []
    for boundary in gluing.boundaries:
        row = [0] * (P + 1)
        for j, (s, t) in enumerate(pairs):
            row[j] = sum(1 for x in (s, t) if x in boundary)
        eq_rows.append(row)
    eq_rhs = [Rational(w.numerator, w.denominator) for w in ws]
    try:
        optimum, argmin = linprog(
            objective, Matrix(ub_rows), Matrix(ub_rhs), Matrix(eq_rows), Matrix(eq_rhs)
        )
    except InfeasibleLPError:
        return None
    if -optimum <= 0:
        return None
    return [Fraction(int(Rational(v).p), int(Rational(v).q)) for v in list(argmin)[:P]]


def solve_lengths(gluing: Gluing, ws: Sequence[Fraction], max_denominator: int) -> Optional[List[Fraction]]:
    """Per-segment lengths on the grid 1/N, N a multiple of the circumference denominators.

    Grids are tried up to max_denominator; when none fits, the exact simplex decides
    whether any positive lengths exist at all.
    """
    pairs = pair_list(gluing)
    step = reduce(math.lcm, (w.denominator for w in ws), 1)
    pair_values: Optional[List[Fraction]] = None
    N = step
    while N <= max_denominator:
        found = _grid_fill(gluing, pairs, [int(w * N) for w in ws])
        if found is not None:
            pair_values = [Fraction(v, N) for v in found]
            break
        N += step
    if pair_values is None:
        pair_values = _lp_lengths(gluing, pairs, ws)
    if pair_values is None:
        return None
    lengths = [Fraction(0)] * gluing.segment_count
    for (s, t), value in zip(pairs, pair_values):
        lengths[s] = lengths[t] = value
    return lengths


# ── Search ─────────────────────────────────────────────────────


class WitnessSearch:
    """Oracle: finds the canonical-first surface for (distribution, class) within bounds."""

    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings or get_settings()
        self._log = RunLogger("WitnessSearch", self._settings)

    def default_bounds(self) -> SearchBounds:
        return SearchBounds(
            max_segments=self._settings.max_segments,
            max_denominator=self._settings.max_denominator,
            max_regular=self._settings.max_regular,
        )

    def configurations(self, dist: AngleDistribution, max_regular: int) -> List[GluingConfig]:
        g = dist.genus
        turns = [a.turn for a in dist.angles]
        integral = Counter(t for t in turns if (2 * t).denominator == 1)
        others = [t for t in turns if (2 * t).denominator != 1]
        values = sorted(integral)

        configs: List[GluingConfig] = []
        for counts in itertools.product(*(range(integral[v] + 1) for v in values)):
            chosen = [v for v, c in zip(values, counts) for _ in range(c)]
            leftover = [v for v, c in zip(values, counts) for _ in range(integral[v] - c)]
            pole_side = others + leftover
            for regular in range(max_regular + 1):
                ks = [int(2 * v) for v in chosen] + [2] * regular
                excess = sum(k - 2 for k in ks) - 4 * g + 4
                if excess % 2:
                    continue
                t = excess // 2
                if t < max(1, len(pole_side)):
                    continue
                ws = pole_side + [Fraction(1)] * (t - len(pole_side))
                config = GluingConfig(
                    genus=g,
                    equatorial=tuple(sorted(ks, reverse=True)),
                    ws=tuple(sorted(ws, reverse=True)),
                    regular=regular,
                )
                if config.segments >= 2 and config not in configs:
                    configs.append(config)
        return configs

    def _config_candidates(
        self, config: GluingConfig, requested: str, max_denominator: int
    ) -> Tuple[int, Dict[tuple, JenkinsStrebelSurface]]:
        examined = 0
        found: Dict[tuple, JenkinsStrebelSurface] = {}
        target = list(config.equatorial)
        for sizes in cylinder_sizes(config.segments, config.ws):
            boundaries = boundaries_for(sizes)
            for partner in perfect_matchings(config.segments):
                examined += 1
                gluing = Gluing(boundaries, partner)
                if gluing.orbit_sizes() != target or not gluing.is_connected():
                    continue
                cls = monodromy_class(config.genus, gluing.is_square(), config.equatorial, config.ws)
                if requested != "dihedral-any" and cls != requested:
                    continue
                lengths = solve_lengths(gluing, config.ws, max_denominator)
                if lengths is None:
                    continue
                key, _ = gluing.canonical(lengths, config.ws)
                if key not in found:
                    found[key] = _canonical_surface(gluing, lengths, config.ws)
        return examined, found

    def search(
        self,
        dist: AngleDistribution,
        monodromy: str,
        bounds: Optional[SearchBounds] = None,
    ) -> SearchOutcome:
        """Smallest witness by segment count, canonical-first among those; never a non-existence claim."""
        if monodromy not in _CLASSES:
            raise ValueError(f"unknown monodromy class {monodromy!r}")
        if not dist.is_rational:
            raise NonRationalInputError(f"witness search needs rational angles, got {dist}")
        bounds = bounds or self.default_bounds()
        if bounds.max_segments < 2 or bounds.max_denominator < 1 or bounds.max_regular < 0:
            raise SearchBoundsError(f"search bounds must be positive: {bounds}")

        self._log.action("Witness search", f"{dist} [{monodromy}] within {bounds.model_dump()}")
        configs = self.configurations(dist, bounds.max_regular)
        skipped = [c.label() for c in configs if c.segments > bounds.max_segments]
        by_count: Dict[int, List[GluingConfig]] = {}
        for config in configs:
            if config.segments <= bounds.max_segments:
                by_count.setdefault(config.segments, []).append(config)

        examined = 0
        for count in sorted(by_count):
            group = by_count[count]
            results: List[Optional[Tuple[int, Dict[tuple, JenkinsStrebelSurface]]]] = [None] * len(group)
            with self._log.step_start(f"{count} segments, {len(group)} configuration(s)"):
                with ThreadPoolExecutor(max_workers=self._settings.jobs) as executor:
                    futures = {
                        executor.submit(self._config_candidates, config, monodromy, bounds.max_denominator): i
                        for i, config in enumerate(group)
                    }
                    for future in as_completed(futures):
                        results[futures[future]] = future.result()
            merged: Dict[tuple, JenkinsStrebelSurface] = {}
            for result in results:
                if result is None:
                    continue
                seen, found = result
                examined += seen
                for key, surface in found.items():
                    merged.setdefault(key, surface)
            if merged:
                witness = merged[min(merged)]
                self._log.decision("found", f"{count} segments, {len(merged)} candidate(s)")
                return SearchOutcome(status="found", witness=witness, bounds=bounds, examined=examined, skipped=skipped)

        status = "bounds-exceeded" if skipped else "exhausted"
        self._log.decision(status, f"{examined} gluing(s) examined, {len(skipped)} configuration(s) skipped")
        return SearchOutcome(status=status, bounds=bounds, examined=examined, skipped=skipped)


def search_witness(
    dist: AngleDistribution,
    monodromy: str,
    bounds: Optional[SearchBounds] = None,
    settings: Optional[Settings] = None,
) -> SearchOutcome:
    return WitnessSearch(settings).search(dist, monodromy, bounds)
