"""
generators/surface_analyzer.py — Validation and analysis of cylinder gluings.

A surface is a set of semi-infinite cylinders whose boundary circles are cut
into segments and glued in pairs. Corners between consecutive boundary
segments carry angle π; gluing identifies the corner at the start of a
segment with the corner at the start of the segment following its partner.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from engine.angles import Angle, AngleDistribution
from errors import SurfaceValidationError
from models import Cylinder, JenkinsStrebelSurface, SurfaceIssue, SurfaceReport

CanonicalKey = Tuple[Tuple[Fraction, Tuple[Tuple[Fraction, int], ...]], ...]


@dataclass(frozen=True)
class Gluing:
    """Index form of a gluing: segments are 0..m-1, listed per cylinder in boundary order."""

    boundaries: Tuple[Tuple[int, ...], ...]
    partner: Tuple[int, ...]
    cyl_of: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    nxt: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    prv: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        cyl_of = [0] * len(self.partner)
        nxt = [0] * len(self.partner)
        prv = [0] * len(self.partner)
        for c, boundary in enumerate(self.boundaries):
            size = len(boundary)
            for i, s in enumerate(boundary):
                cyl_of[s] = c
                nxt[s] = boundary[(i + 1) % size]
                prv[s] = boundary[(i - 1) % size]
        object.__setattr__(self, "cyl_of", tuple(cyl_of))
        object.__setattr__(self, "nxt", tuple(nxt))
        object.__setattr__(self, "prv", tuple(prv))

    @property
    def segment_count(self) -> int:
        return len(self.partner)

    @property
    def faces(self) -> int:
        return len(self.boundaries)

    @property
    def edges(self) -> int:
        return len(self.partner) // 2

    def corner_orbits(self) -> List[List[int]]:
        """Vertex classes as cycles of s -> next(partner(s)); corner s sits at the start of s."""
        seen = [False] * self.segment_count
        orbits: List[List[int]] = []
        for start in range(self.segment_count):
            if seen[start]:
                continue
            orbit = []
            s = start
            while not seen[s]:
                seen[s] = True
                orbit.append(s)
                s = self.nxt[self.partner[s]]
            orbits.append(orbit)
        return orbits

    def orbit_sizes(self) -> List[int]:
        return sorted((len(o) for o in self.corner_orbits()), reverse=True)

    def genus(self) -> int:
        chi = len(self.corner_orbits()) - self.edges + self.faces
        return (2 - chi) // 2

    def is_connected(self) -> bool:
        if not self.boundaries:
            return False
        seen = {0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for s in self.boundaries[c]:
                other = self.cyl_of[self.partner[s]]
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
        return len(seen) == self.faces

    def is_square(self) -> bool:
        """Cylinders 2-colourable so that every glued pair joins opposite colours."""
        colour: Dict[int, int] = {}
        for root in range(self.faces):
            if root in colour:
                continue
            colour[root] = 0
            queue = deque([root])
            while queue:
                c = queue.popleft()
                for s in self.boundaries[c]:
                    other = self.cyl_of[self.partner[s]]
                    if other == c:
                        return False
                    if other not in colour:
                        colour[other] = 1 - colour[c]
                        queue.append(other)
                    elif colour[other] == colour[c]:
                        return False
        return True

    # ── canonical labelling ─────────────────────────────────

    def _encode(self, start: int, step: int, lengths: Sequence[Fraction], ws: Sequence[Fraction]):
        move = self.nxt if step > 0 else self.prv
        order: List[int] = []
        label: Dict[int, int] = {}
        visited_cyl = {self.cyl_of[start]: start}
        queue = deque([start])
        sequences: List[List[int]] = []
        while queue:
            entry = queue.popleft()
            seq = [entry]
            s = move[entry]
            while s != entry:
                seq.append(s)
                s = move[s]
            for s in seq:
                label[s] = len(order)
                order.append(s)
            for s in seq:
                other = self.cyl_of[self.partner[s]]
                if other not in visited_cyl:
                    visited_cyl[other] = self.partner[s]
                    queue.append(self.partner[s])
            sequences.append(seq)
        key = tuple(
            (ws[self.cyl_of[seq[0]]], tuple((lengths[s], label[self.partner[s]]) for s in seq))
            for seq in sequences
        )
        return key, sequences

    def canonical(self, lengths: Sequence[Fraction], ws: Sequence[Fraction]):
        """Smallest encoding over every start segment and orientation, with its cylinder sequences."""
        best = None
        for start in range(self.segment_count):
            for step in (1, -1):
                encoded = self._encode(start, step, lengths, ws)
                if best is None or encoded[0] < best[0]:
                    best = encoded
        return best


# ── Conversions ──────────────────────────────────────────────────


def gluing_of(surface: JenkinsStrebelSurface) -> Tuple[Gluing, List[str], List[Fraction], List[Fraction]]:
    """Index form of a structurally sound surface plus segment names, lengths and circumferences."""
    names = surface.segments
    index = {name: i for i, name in enumerate(names)}
    partner = [0] * len(names)
    for a, b in surface.pairs:
        partner[index[a]] = index[b]
        partner[index[b]] = index[a]
    boundaries = tuple(tuple(index[s] for s in c.boundary) for c in surface.cylinders)
    lengths = [surface.lengths.get(name, Fraction(0)) for name in names]
    ws = [c.w for c in surface.cylinders]
    return Gluing(boundaries, tuple(partner)), names, lengths, ws


def surface_from_gluing(
    gluing: Gluing, lengths: Sequence[Fraction], ws: Sequence[Fraction], prefix: str = "s"
) -> JenkinsStrebelSurface:
    cylinders = [
        Cylinder(w=ws[c], boundary=[f"{prefix}{s}" for s in boundary])
        for c, boundary in enumerate(gluing.boundaries)
    ]
    pairs = sorted(
        {tuple(sorted((s, gluing.partner[s]))) for s in range(gluing.segment_count)}
    )
    return JenkinsStrebelSurface(
        cylinders=cylinders,
        pairs=[(f"{prefix}{a}", f"{prefix}{b}") for a, b in pairs],
        lengths={f"{prefix}{s}": lengths[s] for s in range(gluing.segment_count)},
    )


# ── Operations ───────────────────────────────────────────────────


def validate(surface: JenkinsStrebelSurface) -> List[SurfaceIssue]:
    """Every broken gluing rule, with the offending ids. Empty means the surface is well formed."""
    issues: List[SurfaceIssue] = []
    occurrences = Counter(surface.segments)
    known = set(occurrences)

    for i, cyl in enumerate(surface.cylinders):
        if not cyl.boundary:
            issues.append(SurfaceIssue(kind="empty-boundary", ids=[f"cylinder {i}"], message="cylinder without segments"))
        if cyl.w <= 0:
            issues.append(SurfaceIssue(kind="non-positive-circumference", ids=[f"cylinder {i}"], message=f"w = {cyl.w}"))
    for name, count in sorted(occurrences.items()):
        if count > 1:
            issues.append(SurfaceIssue(kind="duplicate-segment", ids=[name], message=f"appears {count} times on boundaries"))

    paired: Counter = Counter()
    for a, b in surface.pairs:
        for name in (a, b):
            if name not in known:
                issues.append(SurfaceIssue(kind="unknown-segment", ids=[name], message="paired but on no boundary"))
        if a == b:
            issues.append(SurfaceIssue(kind="self-paired", ids=[a], message="pairing has a fixed point"))
        paired[a] += 1
        if a != b:
            paired[b] += 1
    for name in sorted(known):
        if paired[name] == 0:
            issues.append(SurfaceIssue(kind="unpaired-segment", ids=[name]))
        elif paired[name] > 1:
            issues.append(SurfaceIssue(kind="multiply-paired", ids=[name], message=f"in {paired[name]} pairs"))

    for name in sorted(set(surface.lengths) - known):
        issues.append(SurfaceIssue(kind="unknown-segment", ids=[name], message="length given for unknown segment"))
    for name in sorted(known):
        length = surface.lengths.get(name)
        if length is None:
            issues.append(SurfaceIssue(kind="missing-length", ids=[name]))
        elif length <= 0:
            issues.append(SurfaceIssue(kind="non-positive-length", ids=[name], message=f"length {length}"))

    for a, b in surface.pairs:
        la, lb = surface.lengths.get(a), surface.lengths.get(b)
        if a != b and la is not None and lb is not None and la != lb:
            issues.append(SurfaceIssue(kind="length-mismatch", ids=[a, b], message=f"{la} != {lb}"))

    for i, cyl in enumerate(surface.cylinders):
        if cyl.boundary and all(s in surface.lengths for s in cyl.boundary):
            total = sum((surface.lengths[s] for s in cyl.boundary), Fraction(0))
            if total != cyl.w:
                issues.append(
                    SurfaceIssue(
                        kind="circumference-mismatch",
                        ids=[f"cylinder {i}", *cyl.boundary],
                        message=f"segments sum to {total}, circumference is {cyl.w}",
                    )
                )

    structural = {"duplicate-segment", "unknown-segment", "unpaired-segment", "multiply-paired", "self-paired", "empty-boundary"}
    if not any(issue.kind in structural for issue in issues):
        gluing, _, _, _ = gluing_of(surface)
        if not gluing.is_connected():
            issues.append(SurfaceIssue(kind="disconnected", ids=[], message="gluing has more than one component"))
    return issues


def ensure_valid(surface: JenkinsStrebelSurface) -> None:
    issues = validate(surface)
    if issues:
        raise SurfaceValidationError(issues)


def monodromy_class(genus: int, is_square: bool, equatorial: Sequence[int], poles: Sequence[Fraction]) -> str:
    """Co-axial for squares, and in genus 0 whenever at most two cone points rotate (cyclic monodromy)."""
    if is_square:
        return "coaxial"
    nontrivial = sum(1 for k in equatorial if k % 2) + sum(1 for w in poles if w.denominator != 1)
    if genus == 0 and nontrivial <= 2:
        return "coaxial"
    return "strict-dihedral"


def analyze(surface: JenkinsStrebelSurface) -> SurfaceReport:
    ensure_valid(surface)
    gluing, names, lengths, ws = gluing_of(surface)
    orbits = gluing.corner_orbits()
    equatorial = sorted((len(o) for o in orbits), reverse=True)
    genus = gluing.genus()
    square = gluing.is_square()
    poles = sorted(ws, reverse=True)
    periods = sorted(set(ws) | set(lengths))
    orders = ",".join(str(k - 2) for k in equatorial)
    pole_part = f"-2^{len(ws)}" if len(ws) > 1 else "-2"
    return SurfaceReport(
        genus=genus,
        equatorial_angles=equatorial,
        pole_angles=poles,
        is_square=square,
        period_generators=periods,
        monodromy_class=monodromy_class(genus, square, equatorial, poles),
        vertices=len(orbits),
        edges=gluing.edges,
        faces=gluing.faces,
        vertex_classes=[[names[s] for s in orbit] for orbit in orbits],
        stratum=f"Q({orders},{pole_part})" if orders else f"Q({pole_part})",
        regular_points=sum(1 for k in equatorial if k == 2) + sum(1 for w in poles if w == 1),
        nontrivial_points=sum(1 for k in equatorial if k % 2) + sum(1 for w in poles if w.denominator != 1),
    )


def to_distribution(surface: JenkinsStrebelSurface, drop_regular: bool = True) -> Optional[AngleDistribution]:
    """Cone angles of the surface in turn units; None for the round sphere (nothing left)."""
    report = analyze(surface)
    turns = [Fraction(k, 2) for k in report.equatorial_angles] + list(report.pole_angles)
    if drop_regular:
        turns = [t for t in turns if t != 1]
    if not turns:
        return None
    return AngleDistribution(report.genus, tuple(Angle(t) for t in turns))


def canonical_key(surface: JenkinsStrebelSurface) -> CanonicalKey:
    ensure_valid(surface)
    gluing, _, lengths, ws = gluing_of(surface)
    return gluing.canonical(lengths, ws)[0]


def canonical_form(surface: JenkinsStrebelSurface) -> JenkinsStrebelSurface:
    """Relabel to s0, s1, … in canonical traversal order."""
    ensure_valid(surface)
    gluing, _, lengths, ws = gluing_of(surface)
    return _canonical_surface(gluing, lengths, ws)


def _canonical_surface(gluing: Gluing, lengths: Sequence[Fraction], ws: Sequence[Fraction]) -> JenkinsStrebelSurface:
    _, sequences = gluing.canonical(lengths, ws)
    relabel = {s: i for i, s in enumerate(s for seq in sequences for s in seq)}
    boundaries = tuple(tuple(relabel[s] for s in seq) for seq in sequences)
    partner = [0] * gluing.segment_count
    for s, t in enumerate(gluing.partner):
        partner[relabel[s]] = relabel[t]
    new_lengths = [Fraction(0)] * gluing.segment_count
    for s, i in relabel.items():
        new_lengths[i] = lengths[s]
    new_ws = [ws[gluing.cyl_of[seq[0]]] for seq in sequences]
    return surface_from_gluing(Gluing(boundaries, tuple(partner)), new_lengths, new_ws)
