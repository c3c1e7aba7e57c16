"""
generators/surface_enumerator.py — Bounded census of cylinder gluings up to canonical form.
Also hosts the combinatorial building blocks shared with the witness search.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import pandas as pd

from config import Settings, get_settings
from engine.run_logger import RunLogger
from errors import SearchBoundsError
from generators.surface_analyzer import Gluing, _canonical_surface, analyze
from models import JenkinsStrebelSurface, SurfaceBounds


# ── Combinatorial building blocks ─────────────────────────────


def perfect_matchings(count: int) -> Iterator[Tuple[int, ...]]:
    """Fixed-point-free involutions on 0..count-1, as partner tuples."""
    if count % 2:
        return
    partner = [-1] * count

    def _extend(free: List[int]) -> Iterator[Tuple[int, ...]]:
        if not free:
            yield tuple(partner)
            return
        first = free[0]
        for i in range(1, len(free)):
            other = free[i]
            partner[first], partner[other] = other, first
            yield from _extend(free[1:i] + free[i + 1:])
        partner[first] = -1

    yield from _extend(list(range(count)))


def cylinder_sizes(total: int, ws: Sequence[Fraction]) -> Iterator[Tuple[int, ...]]:
    """Segment counts per cylinder (each ≥ 1) summing to total; nonincreasing across equal circumferences."""
    faces = len(ws)
    if faces == 0 or total < faces:
        return
    for cuts in itertools.combinations(range(1, total), faces - 1):
        bounds = (0, *cuts, total)
        sizes = tuple(bounds[i + 1] - bounds[i] for i in range(faces))
        if all(not (ws[i] == ws[i + 1] and sizes[i] < sizes[i + 1]) for i in range(faces - 1)):
            yield sizes


def boundaries_for(sizes: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    out, start = [], 0
    for size in sizes:
        out.append(tuple(range(start, start + size)))
        start += size
    return tuple(out)


def pair_list(gluing: Gluing) -> List[Tuple[int, int]]:
    return [(s, t) for s, t in enumerate(gluing.partner) if s < t]


# ── Census ─────────────────────────────────────────────────────


class SurfaceEnumerator:
    """Streams every valid gluing within bounds, one canonical representative each."""

    def __init__(self, settings: Optional[Settings] = None) -> None:
        self._settings = settings or get_settings()
        self._log = RunLogger("SurfaceEnumerator", self._settings)

    def _layout_candidates(
        self, sizes: Tuple[int, ...], bounds: SurfaceBounds, allowed: Optional[Set[Fraction]]
    ) -> Dict[tuple, JenkinsStrebelSurface]:
        boundaries = boundaries_for(sizes)
        count = sum(sizes)
        found: Dict[tuple, JenkinsStrebelSurface] = {}
        grid = [Fraction(j, bounds.denominator) for j in range(1, bounds.max_length + 1)]
        for partner in perfect_matchings(count):
            gluing = Gluing(boundaries, partner)
            if not gluing.is_connected():
                continue
            pairs = pair_list(gluing)
            for choice in itertools.product(grid, repeat=len(pairs)):
                lengths = [Fraction(0)] * count
                for (s, t), value in zip(pairs, choice):
                    lengths[s] = lengths[t] = value
                ws = [sum((lengths[s] for s in b), Fraction(0)) for b in boundaries]
                if allowed is not None and any(w not in allowed for w in ws):
                    continue
                key, _ = gluing.canonical(lengths, ws)
                if key not in found:
                    found[key] = _canonical_surface(gluing, lengths, ws)
        return found

    def enumerate(self, bounds: SurfaceBounds) -> Iterator[JenkinsStrebelSurface]:
        """Yield surfaces ordered by segment count, then canonical key."""
        if bounds.max_segments < 2 or bounds.max_length < 1 or bounds.denominator < 1:
            raise SearchBoundsError(f"enumeration bounds must be positive: {bounds}")
        allowed = set(bounds.circumferences) if bounds.circumferences is not None else None
        jobs = self._settings.jobs

        for count in range(2, bounds.max_segments + 1, 2):
            layouts = [
                sizes
                for faces in range(1, count + 1)
                for sizes in cylinder_sizes(count, [Fraction(0)] * faces)
            ]
            with self._log.step_start(f"enumerate {count} segments ({len(layouts)} layouts)"):
                results: List[Optional[Dict[tuple, JenkinsStrebelSurface]]] = [None] * len(layouts)
                with ThreadPoolExecutor(max_workers=jobs) as executor:
                    futures = {
                        executor.submit(self._layout_candidates, sizes, bounds, allowed): i
                        for i, sizes in enumerate(layouts)
                    }
                    for future in as_completed(futures):
                        results[futures[future]] = future.result()
                merged: Dict[tuple, JenkinsStrebelSurface] = {}
                for partial in results:
                    for key, surface in (partial or {}).items():
                        merged.setdefault(key, surface)
            self._log.info(f"{count} segments: {len(merged)} canonical surfaces")
            for key in sorted(merged):
                yield merged[key]

    def census(self, bounds: SurfaceBounds) -> pd.DataFrame:
        """Counts per (segments, genus, square) over the enumerated stream."""
        rows = []
        for surface in self.enumerate(bounds):
            report = analyze(surface)
            rows.append(
                {
                    "segments": len(surface.segments),
                    "genus": report.genus,
                    "square": report.is_square,
                    "monodromy": report.monodromy_class,
                }
            )
        if not rows:
            return pd.DataFrame(columns=["segments", "genus", "square", "monodromy", "count"])
        frame = pd.DataFrame(rows)
        return (
            frame.groupby(["segments", "genus", "square", "monodromy"])
            .size()
            .reset_index(name="count")
        )


def enumerate_surfaces(bounds: SurfaceBounds, settings: Optional[Settings] = None) -> Iterator[JenkinsStrebelSurface]:
    return SurfaceEnumerator(settings).enumerate(bounds)
