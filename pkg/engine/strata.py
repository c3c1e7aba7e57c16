"""
engine/strata.py — Strata of quadratic and Abelian differentials and the
realizability predicates for prescribed residues at their poles.

Quadratic residues are handled through their square roots (the cylinder
circumferences), which keeps every relation between them linear and exact.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from engine.angles import ExactValue, Number, common_scale, sqrt_rational, square_text
from errors import StrataError
from models import StrataVerdict

GENERIC_YES = "generic-yes"
EXC_TORUS_EVEN = "exception-Q(4s,-2^2s)"
EXC_TORUS_ODD = "exception-Q(2s+1,2s-1,-2^2s)"
EXC_ABC = "exception-ABC"
EXC_AABB = "exception-AABB"
EXC_EVEN_WEIGHT = "exception-even-weight"
EXC_ODD_WEIGHT = "exception-odd-weight"
EXC_GENUS0_ARITH = "exception-genus0-arith"
RESIDUE_THEOREM = "residue-theorem-violation"

REALIZABLE_CLAUSES = {GENERIC_YES}


def _orders_text(orders: Sequence[int], poles: int, pole_order: int) -> str:
    parts = [str(o) for o in orders]
    if poles:
        parts.append(f"{pole_order}^{poles}" if poles > 1 else str(pole_order))
    return ",".join(parts)


# ── Quadratic strata ───────────────────────────────────────────


@dataclass(frozen=True)
class QuadraticStratum:
    """Q(orders, -2^p): zeros and simple poles listed in orders, p double poles."""

    genus: int
    orders: Tuple[int, ...]
    p: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(sorted(self.orders, reverse=True)))
        if self.genus < 0 or self.p < 0:
            raise StrataError(f"invalid stratum {self}: negative genus or pole count")
        if any(o < -1 for o in self.orders):
            raise StrataError(f"invalid stratum {self}: orders must be >= -1 (double poles go in p)")
        if sum(self.orders) - 2 * self.p != 4 * self.genus - 4:
            raise StrataError(
                f"invalid stratum {self}: sum of orders - 2p = {sum(self.orders) - 2 * self.p}, "
                f"expected 4g-4 = {4 * self.genus - 4}"
            )

    @classmethod
    def from_orders(cls, genus: int, orders: Iterable[int], p: Optional[int] = None) -> "QuadraticStratum":
        """Build a stratum, inferring the number of double poles when p is omitted."""
        orders = tuple(orders)
        if p is None:
            excess = sum(orders) - 4 * genus + 4
            if excess % 2 or excess < 0:
                raise StrataError(f"no quadratic stratum in genus {genus} with orders {orders}")
            p = excess // 2
        return cls(genus, orders, p)

    @property
    def odd_orders(self) -> Tuple[int, ...]:
        return tuple(o for o in self.orders if o % 2)

    @property
    def has_even_order(self) -> bool:
        return any(o % 2 == 0 for o in self.orders)

    def __str__(self) -> str:
        return f"Q({_orders_text(self.orders, self.p, -2)})"


@dataclass(frozen=True)
class QuadResidueConfig:
    """Quadratic residues stored as circumferences c_i, residue r_i = c_i²."""

    circumferences: Tuple[ExactValue, ...]

    def __post_init__(self) -> None:
        values = tuple(ExactValue.of(c) for c in self.circumferences)
        for c in values:
            if c.is_zero or (c.is_rational and c.turn <= 0):
                raise StrataError(f"circumference must be positive, got {c}")
        object.__setattr__(self, "circumferences", values)

    @classmethod
    def from_residues(cls, residues: Iterable[Union[Fraction, int]]) -> "QuadResidueConfig":
        values = []
        for r in residues:
            r = Fraction(r)
            if r <= 0:
                raise StrataError(f"quadratic residue must be positive, got {r}")
            values.append(sqrt_rational(r))
        return cls(tuple(values))

    @classmethod
    def from_circumferences(cls, values: Iterable[Union[ExactValue, Number]]) -> "QuadResidueConfig":
        return cls(tuple(ExactValue.of(v) for v in values))

    def __len__(self) -> int:
        return len(self.circumferences)

    @property
    def residue_texts(self) -> List[str]:
        return [square_text(c) for c in self.circumferences]


# ── Abelian strata ─────────────────────────────────────────────


@dataclass(frozen=True)
class AbelianStratum:
    """H(zero_orders, -1^p). Zero orders of 0 stand for marked regular points."""

    genus: int
    zero_orders: Tuple[int, ...]
    p: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "zero_orders", tuple(sorted(self.zero_orders, reverse=True)))
        if self.genus < 0 or self.p < 0:
            raise StrataError(f"invalid stratum {self}: negative genus or pole count")
        if any(a < 0 for a in self.zero_orders):
            raise StrataError(f"invalid stratum {self}: zero orders must be nonnegative")
        if sum(self.zero_orders) - self.p != 2 * self.genus - 2:
            raise StrataError(
                f"invalid stratum {self}: sum of zero orders - p = {sum(self.zero_orders) - self.p}, "
                f"expected 2g-2 = {2 * self.genus - 2}"
            )

    @classmethod
    def from_zeros(cls, genus: int, zero_orders: Iterable[int], p: Optional[int] = None) -> "AbelianStratum":
        zeros = tuple(zero_orders)
        if p is None:
            p = sum(zeros) - 2 * genus + 2
            if p < 0:
                raise StrataError(f"no Abelian stratum in genus {genus} with zeros {zeros}")
        return cls(genus, zeros, p)

    def __str__(self) -> str:
        return f"H({_orders_text(self.zero_orders, self.p, -1)})"


@dataclass(frozen=True)
class AbelianResidueConfig:
    """Residues at the simple poles as positive magnitudes with explicit signs."""

    magnitudes: Tuple[ExactValue, ...]
    signs: Tuple[int, ...]

    def __post_init__(self) -> None:
        mags = tuple(ExactValue.of(m) for m in self.magnitudes)
        if len(mags) != len(self.signs):
            raise StrataError("residue magnitudes and signs differ in length")
        for m in mags:
            if m.is_zero or (m.is_rational and m.turn <= 0):
                raise StrataError(f"residue magnitude must be positive, got {m}")
        if any(s not in (1, -1) for s in self.signs):
            raise StrataError("residue signs must be +1 or -1")
        object.__setattr__(self, "magnitudes", mags)
        object.__setattr__(self, "signs", tuple(self.signs))

    @classmethod
    def from_signed(cls, residues: Iterable[Union[ExactValue, Number]]) -> "AbelianResidueConfig":
        """Signed rational residues; symbolic entries go through the constructor with explicit signs."""
        mags: List[ExactValue] = []
        signs: List[int] = []
        for r in residues:
            value = ExactValue.of(r)
            if not value.is_rational:
                raise StrataError(f"sign of symbolic residue {value} is not decidable; give it explicitly")
            if value.turn == 0:
                raise StrataError("residues at simple poles must be nonzero")
            signs.append(1 if value.turn > 0 else -1)
            mags.append(value if value.turn > 0 else -value)
        return cls(tuple(mags), tuple(signs))

    def __len__(self) -> int:
        return len(self.magnitudes)

    @property
    def total(self) -> ExactValue:
        total = ExactValue()
        for m, s in zip(self.magnitudes, self.signs):
            total = total + m.scale(s)
        return total

    @property
    def residue_texts(self) -> List[str]:
        return [str(m.scale(s)) for m, s in zip(self.magnitudes, self.signs)]


# ── Relation matchers (shared with the exceptional-family deciders) ─


def abc_relation(values: Sequence[ExactValue], copies: int) -> Optional[Dict[str, str]]:
    """Match (A, B, C×copies) with one of A, B, C the sum of the other two.

    Returns the matched parameters or None.
    """
    if len(values) != copies + 2 or copies < 1:
        return None
    counts = Counter(values)
    splits = []
    for C in sorted(counts, key=lambda v: v.sort_key()):
        if counts[C] < copies:
            continue
        rest = list(values)
        for _ in range(copies):
            rest.remove(C)
        A, B = sorted(rest, key=lambda v: v.sort_key())
        splits.append((A, B, C))
    for relation in ("C=A+B", "B=A+C", "A=B+C"):
        for A, B, C in splits:
            holds = {
                "C=A+B": C == A + B,
                "B=A+C": B == A + C,
                "A=B+C": A == B + C,
            }[relation]
            if holds:
                return {"A": str(A), "B": str(B), "C": str(C), "relation": relation}
    return None


def aabb_relation(values: Sequence[ExactValue]) -> Optional[Dict[str, str]]:
    """Match (A, A, B, …, B)."""
    if len(values) < 2:
        return None
    counts = Counter(values)
    for A in sorted(counts, key=lambda v: v.sort_key()):
        if counts[A] < 2:
            continue
        rest = list(values)
        rest.remove(A)
        rest.remove(A)
        if len(set(rest)) <= 1:
            B = rest[0] if rest else A
            return {"A": str(A), "B": str(B)}
    return None


# ── Predicates ─────────────────────────────────────────────────


def _verdict(clause: str, detail: Optional[Dict[str, str]] = None, also: Optional[List[str]] = None) -> StrataVerdict:
    return StrataVerdict(
        realizable=clause in REALIZABLE_CLAUSES,
        clause=clause,
        detail=detail or {},
        also_matched=also or [],
    )


def quad_residues_realizable(stratum: QuadraticStratum, config: QuadResidueConfig) -> StrataVerdict:
    """Decide whether the circumferences are realized by a primitive differential in the stratum."""
    if stratum.p < 1:
        raise StrataError(f"{stratum} has no double poles; residues are not defined")
    if len(config) != stratum.p:
        raise StrataError(f"{stratum} has {stratum.p} double poles but {len(config)} residues were given")
    if stratum.genus == 0 and not stratum.odd_orders:
        raise StrataError(f"{stratum} has no odd order; genus-0 differentials there are squares")

    circ = list(config.circumferences)
    base = {"stratum": str(stratum), "residues": ",".join(config.residue_texts)}
    # marked points (order 0) do not change which residues occur
    orders = tuple(o for o in stratum.orders if o != 0)

    if stratum.genus >= 2:
        return _verdict(GENERIC_YES, base)

    if stratum.genus == 1:
        all_equal = len(set(circ)) == 1
        s = stratum.p // 2
        if all_equal and stratum.p % 2 == 0 and s >= 1:
            if orders == (4 * s,):
                return _verdict(EXC_TORUS_EVEN, {**base, "s": str(s), "r": config.residue_texts[0]})
            if orders == (2 * s + 1, 2 * s - 1):
                return _verdict(EXC_TORUS_ODD, {**base, "s": str(s), "r": config.residue_texts[0]})
        return _verdict(GENERIC_YES, base)

    matches: List[Tuple[str, Dict[str, str]]] = []
    p = stratum.p
    odd = stratum.odd_orders

    if len(odd) == 2:
        scale = common_scale(circ)
        if scale is not None:
            total = scale.total
            weights = {
                "L": square_text(scale.unit),
                "f": ",".join(str(f) for f in scale.r),
                "sum_f": str(total),
            }
            if total % 2 == 0 and total < 2 * p:
                matches.append((EXC_EVEN_WEIGHT, {**weights, "bound": f"< 2p = {2 * p}"}))
            if total % 2 == 1 and total <= max(odd):
                matches.append((EXC_ODD_WEIGHT, {**weights, "bound": f"<= max odd order = {max(odd)}"}))

    if p % 2 == 1 and p >= 3 and orders == (p - 2, p - 2):
        found = abc_relation(circ, p - 2)
        if found:
            matches.append((EXC_ABC, found))

    if p % 2 == 0 and p >= 2 and orders == (p - 1, p - 3):
        found = aabb_relation(circ)
        if found:
            matches.append((EXC_AABB, found))

    if not matches:
        return _verdict(GENERIC_YES, base)
    clause, detail = matches[0]
    return _verdict(clause, {**base, **detail}, [c for c, _ in matches[1:]])


def abelian_residues_realizable(stratum: AbelianStratum, config: AbelianResidueConfig) -> StrataVerdict:
    """Decide whether the signed residues are realized by a 1-form in the stratum."""
    if stratum.p < 1:
        raise StrataError(f"{stratum} has no simple poles; residues are not defined")
    if len(config) != stratum.p:
        raise StrataError(f"{stratum} has {stratum.p} simple poles but {len(config)} residues were given")

    base = {"stratum": str(stratum), "residues": ",".join(config.residue_texts)}
    total = config.total
    if not total.is_zero:
        return _verdict(RESIDUE_THEOREM, {**base, "sum": str(total)})

    if stratum.genus >= 1:
        return _verdict(GENERIC_YES, base)

    scale = common_scale(config.magnitudes)
    if scale is None:
        return _verdict(GENERIC_YES, base)
    positive = sum(f for f, s in zip(scale.r, config.signs) if s > 0)
    bound = max(stratum.zero_orders, default=0)
    detail = {
        **base,
        "L": str(scale.unit),
        "weights": ",".join(str(f * s) for f, s in zip(scale.r, config.signs)),
        "sum_f": str(positive),
        "max_zero_order": str(bound),
    }
    if positive > bound:
        return _verdict(GENERIC_YES, detail)
    return _verdict(EXC_GENUS0_ARITH, detail)
