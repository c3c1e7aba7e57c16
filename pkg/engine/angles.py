"""
engine/angles.py — Exact cone angles and the arithmetic predicates built on them.

Angles are stored in turn units (θ/2π). A value is a rational part plus a
rational combination of formal generators that are assumed linearly
independent over ℚ together with 1, so every ℚ-linear relation between
values is decided exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import factorint

from errors import AngleError, ParseError

Number = Union[int, Fraction]
IrrTerms = Tuple[Tuple[str, Fraction], ...]


def _clean_irr(terms: Iterable[Tuple[str, Fraction]]) -> IrrTerms:
    merged: Dict[str, Fraction] = {}
    for gen, coef in terms:
        merged[gen] = merged.get(gen, Fraction(0)) + Fraction(coef)
    return tuple(sorted((g, c) for g, c in merged.items() if c != 0))


def _format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


# ── Exact values ───────────────────────────────────────────────


@dataclass(frozen=True, eq=False)
class ExactValue:
    """turn + Σ coef·generator, all coefficients rational."""

    turn: Fraction = Fraction(0)
    irr: IrrTerms = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "turn", Fraction(self.turn))
        object.__setattr__(self, "irr", _clean_irr(self.irr))

    # construction helpers

    @classmethod
    def of(cls, value: Union["ExactValue", Number, str]) -> "ExactValue":
        if isinstance(value, ExactValue):
            return ExactValue(value.turn, value.irr)
        if isinstance(value, str):
            return parse_exact(value)
        return cls(Fraction(value))

    # predicates

    @property
    def is_rational(self) -> bool:
        return not self.irr

    @property
    def is_zero(self) -> bool:
        return self.turn == 0 and not self.irr

    @property
    def is_integer(self) -> bool:
        return self.is_rational and self.turn.denominator == 1

    @property
    def is_half_integer(self) -> bool:
        return self.is_rational and self.turn.denominator == 2

    @property
    def generators(self) -> Tuple[str, ...]:
        return tuple(g for g, _ in self.irr)

    def rational(self) -> Fraction:
        if self.irr:
            raise ValueError(f"{self} has symbolic parts")
        return self.turn

    def sort_key(self) -> Tuple[Fraction, IrrTerms]:
        return (self.turn, self.irr)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactValue(Fraction(other))
        if not isinstance(other, ExactValue):
            return NotImplemented
        return self.turn == other.turn and self.irr == other.irr

    def __hash__(self) -> int:
        return hash((self.turn, self.irr))

    # arithmetic

    def __add__(self, other: Union["ExactValue", Number]) -> "ExactValue":
        other = ExactValue.of(other)
        return ExactValue(self.turn + other.turn, self.irr + other.irr)

    __radd__ = __add__

    def __neg__(self) -> "ExactValue":
        return ExactValue(-self.turn, tuple((g, -c) for g, c in self.irr))

    def __sub__(self, other: Union["ExactValue", Number]) -> "ExactValue":
        return self + (-ExactValue.of(other))

    def __rsub__(self, other: Union["ExactValue", Number]) -> "ExactValue":
        return ExactValue.of(other) - self

    def scale(self, factor: Number) -> "ExactValue":
        factor = Fraction(factor)
        return ExactValue(self.turn * factor, tuple((g, c * factor) for g, c in self.irr))

    def __mul__(self, other: Number) -> "ExactValue":
        if isinstance(other, ExactValue):
            if other.is_rational:
                return self.scale(other.turn)
            if self.is_rational:
                return other.scale(self.turn)
            raise TypeError("product of two symbolic values is not representable")
        return self.scale(other)

    __rmul__ = __mul__

    def ratio_to(self, unit: "ExactValue") -> Optional[Fraction]:
        """q with self == q·unit, or None when no rational multiple matches."""
        if unit.is_zero:
            return None
        if unit.irr:
            gen, coef = unit.irr[0]
            q = dict(self.irr).get(gen, Fraction(0)) / coef
        else:
            if self.irr:
                return None
            q = self.turn / unit.turn
        return q if unit.scale(q) == self else None

    def __str__(self) -> str:
        parts: List[str] = []
        if self.turn != 0 or not self.irr:
            parts.append(_format_fraction(self.turn))
        for gen, coef in self.irr:
            if coef == 1:
                term = gen
            elif coef == -1:
                term = f"-{gen}"
            else:
                term = f"{_format_fraction(coef)}*{gen}"
            if parts and not term.startswith("-"):
                term = "+" + term
            parts.append(term)
        return "".join(parts)


@dataclass(frozen=True, eq=False)
class Angle(ExactValue):
    """A positive cone angle in turn units."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.irr and self.turn <= 0:
            raise AngleError(f"cone angle must be positive, got {self.turn}")

    @classmethod
    def of(cls, value: Union[ExactValue, Number, str]) -> "Angle":
        exact = ExactValue.of(value)
        return cls(exact.turn, exact.irr)

    @property
    def is_regular(self) -> bool:
        """Turn exactly 1, i.e. angle 2π."""
        return self.is_rational and self.turn == 1


@dataclass(frozen=True)
class AngleDistribution:
    genus: int
    angles: Tuple[Angle, ...]

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise AngleError(f"genus must be nonnegative, got {self.genus}")
        if not self.angles:
            raise AngleError("a distribution needs at least one cone angle")
        object.__setattr__(self, "angles", tuple(Angle.of(a) for a in self.angles))

    @classmethod
    def from_turns(cls, genus: int, turns: Iterable[Union[ExactValue, Number, str]]) -> "AngleDistribution":
        return cls(genus, tuple(Angle.of(t) for t in turns))

    @property
    def n(self) -> int:
        return len(self.angles)

    @property
    def is_rational(self) -> bool:
        return all(a.is_rational for a in self.angles)

    @property
    def regular_points(self) -> List[int]:
        return [i for i, a in enumerate(self.angles) if a.is_regular]

    def canonical(self) -> Tuple[int, Tuple[Tuple[Fraction, IrrTerms], ...]]:
        """Order-free key; permutations of the angle list share it."""
        return (self.genus, tuple(sorted(a.sort_key() for a in self.angles)))

    def __str__(self) -> str:
        return f"g={self.genus}, turns=({', '.join(str(a) for a in self.angles)})"


# ── Partition ──────────────────────────────────────────────────


@dataclass(frozen=True)
class Partition:
    evens: Tuple[int, ...]
    odds: Tuple[Fraction, ...]
    nonintegers: Tuple[Angle, ...]
    sigma: ExactValue
    T: int

    @property
    def nE(self) -> int:
        return len(self.evens)

    @property
    def nO(self) -> int:
        return len(self.odds)

    @property
    def nN(self) -> int:
        return len(self.nonintegers)

    @property
    def n(self) -> int:
        return self.nE + self.nO + self.nN


def partition(dist: AngleDistribution) -> Partition:
    """Split into even (2πℤ), odd (π+2πℤ) and non-integer angles; compute σ and T."""
    evens: List[int] = []
    odds: List[Fraction] = []
    others: List[Angle] = []
    for angle in dist.angles:
        if angle.is_integer:
            evens.append(int(angle.turn))
        elif angle.is_half_integer:
            odds.append(angle.turn)
        else:
            others.append(angle)
    evens.sort(reverse=True)
    odds.sort(reverse=True)
    others.sort(key=lambda a: a.sort_key(), reverse=True)

    sigma = reduce(lambda acc, a: acc + a, dist.angles, ExactValue())
    paired = 2 * (len(odds) // 2)
    top = sum(odds[:paired], Fraction(0))
    T = sum(evens) + int(top)
    return Partition(tuple(evens), tuple(odds), tuple(others), sigma, T)


def strengthened_gb(part: Partition, g: int) -> bool:
    """T ≥ 2g+n−1 when nO is even and nN = 0, otherwise T ≥ 2g+n−2."""
    if part.nO % 2 == 0 and part.nN == 0:
        return part.T >= 2 * g + part.n - 1
    return part.T >= 2 * g + part.n - 2


def gauss_bonnet(dist: AngleDistribution) -> Optional[bool]:
    """Plain Gauss-Bonnet σ > 2g−2+n; None when σ has symbolic parts."""
    sigma = partition(dist).sigma
    if not sigma.is_rational:
        return None
    return sigma.turn > 2 * dist.genus - 2 + dist.n


# ── Rays and common scales ─────────────────────────────────────


@dataclass(frozen=True)
class RayDecomposition:
    L: Fraction
    r: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.r)


@dataclass(frozen=True)
class CommonScale:
    """values[i] = unit · r[i] with r a primitive positive integer vector."""

    unit: ExactValue
    r: Tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.r)


def _as_rational(value: Union[ExactValue, Number]) -> Optional[Fraction]:
    if isinstance(value, ExactValue):
        return value.turn if value.is_rational else None
    return Fraction(value)


def ray_decomposition(values: Sequence[Union[ExactValue, Number]]) -> Optional[RayDecomposition]:
    rationals = [_as_rational(v) for v in values]
    if not rationals or any(q is None or q <= 0 for q in rationals):
        return None
    denominator = reduce(math.lcm, (q.denominator for q in rationals))
    scaled = [int(q * denominator) for q in rationals]
    divisor = reduce(math.gcd, scaled)
    return RayDecomposition(Fraction(divisor, denominator), tuple(s // divisor for s in scaled))


def common_scale(values: Sequence[Union[ExactValue, Number]]) -> Optional[CommonScale]:
    """Primitive integer weights when all values are positive rational multiples of one value."""
    exacts = [ExactValue.of(v) for v in values]
    if not exacts:
        return None
    base = exacts[0]
    ratios = [v.ratio_to(base) for v in exacts]
    if any(q is None or q <= 0 for q in ratios):
        return None
    ray = ray_decomposition(ratios)
    if ray is None:
        return None
    unit = base.scale(ray.L)
    if unit.is_rational and unit.turn <= 0:
        return None
    return CommonScale(unit, ray.r)


# ── Signed sums ────────────────────────────────────────────────


@dataclass(frozen=True)
class SignedSumWitness:
    signs: Tuple[int, ...]
    K: int


def integer_signed_sums(c: Sequence[Union[ExactValue, Number]]) -> Dict[int, SignedSumWitness]:
    """Every K ≥ 0 reachable as Σ ε_j·c_j, with the first sign vector found for it.

    Reachable partial sums are merged exactly, so the table stays small
    whenever the inputs share denominators or generators.
    """
    values = [ExactValue.of(v) for v in c]
    reachable: Dict[ExactValue, Tuple[int, ...]] = {ExactValue(): ()}
    for value in values:
        step: Dict[ExactValue, Tuple[int, ...]] = {}
        for partial, signs in reachable.items():
            for sign in (1, -1):
                total = partial + value.scale(sign)
                if total not in step:
                    step[total] = signs + (sign,)
        reachable = step

    found: Dict[int, SignedSumWitness] = {}
    for total, signs in reachable.items():
        if total.is_integer and total.turn >= 0:
            K = int(total.turn)
            found[K] = SignedSumWitness(signs, K)
    return dict(sorted(found.items()))


# ── Square roots of rational residues ──────────────────────────


def sqrt_rational(value: Union[Fraction, int]) -> ExactValue:
    """√(p/q) = (m/q)·√s with pq = s·m² and s squarefree; √s is the generator 'sqrt(s)'."""
    value = Fraction(value)
    if value <= 0:
        raise ValueError(f"square root of non-positive residue {value}")
    product = value.numerator * value.denominator
    squarefree, root = 1, 1
    for prime, exponent in factorint(product).items():
        root *= prime ** (exponent // 2)
        if exponent % 2:
            squarefree *= prime
    coef = Fraction(root, value.denominator)
    if squarefree == 1:
        return ExactValue(coef)
    return ExactValue(Fraction(0), ((f"sqrt({squarefree})", coef),))


def square_text(value: ExactValue) -> str:
    """Residue text for a circumference: exact when rational or a single radical."""
    if value.is_rational:
        return _format_fraction(value.turn ** 2)
    if value.turn == 0 and len(value.irr) == 1:
        gen, coef = value.irr[0]
        match = _SQRT_GEN.fullmatch(gen)
        if match:
            return _format_fraction(coef * coef * int(match.group(1)))
    return f"({value})^2"


# ── Parsing ────────────────────────────────────────────────────

_SQRT_GEN = re.compile(r"sqrt\((\d+)\)")
_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<gen>sqrt\(\d+\)|[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[+\-*]))"
)


def parse_exact(text: str, generators: Iterable[str] = ()) -> ExactValue:
    """Parse 'p/q', 'p/q+r/s*x', 'x', '-1/2*y' into an exact value.

    Generators must be declared, except radicals written 'sqrt(n)'.
    """
    declared = set(generators)
    tokens: List[Tuple[str, str, int]] = []
    pos = 0
    stripped = text.rstrip()
    if not stripped.strip():
        raise ParseError("empty value", text, 0)
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if not match or match.end() == pos:
            raise ParseError("unexpected character", text, pos)
        kind = match.lastgroup or ""
        start = match.start(kind)
        tokens.append((kind, match.group(kind), start))
        pos = match.end()

    turn = Fraction(0)
    irr: List[Tuple[str, Fraction]] = []
    i = 0
    expect_term = True
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise ParseError("dangling sign", text, len(stripped))
        kind, value, start = tokens[i]
        coef = Fraction(1)
        gen: Optional[str] = None
        if kind == "num":
            coef = _parse_fraction(value, text, start)
            i += 1
            if i < len(tokens) and tokens[i][1] == "*":
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "gen":
                    raise ParseError("expected generator after '*'", text, tokens[i][2])
                gen = tokens[i + 1][1]
                start = tokens[i + 1][2]
                i += 2
        elif kind == "gen":
            gen = value
            i += 1
        else:
            raise ParseError(f"unexpected '{value}'", text, start)
        if gen is not None:
            if gen not in declared and not _SQRT_GEN.fullmatch(gen):
                raise ParseError(f"undeclared generator '{gen}'", text, start)
            irr.append((gen, sign * coef))
        else:
            turn += sign * coef
        expect_term = False
        if i < len(tokens):
            if tokens[i][0] != "op" or tokens[i][1] == "*":
                raise ParseError("expected '+' or '-'", text, tokens[i][2])
    if expect_term:
        raise ParseError("empty value", text, 0)
    return ExactValue(turn, tuple(irr))


def _parse_fraction(token: str, text: str, position: int) -> Fraction:
    num, _, den = token.partition("/")
    if den and int(den) == 0:
        raise ParseError("zero denominator", text, position)
    return Fraction(int(num), int(den) if den else 1)


def parse_angle_list(
    text: str,
    generators: Iterable[str] = (),
    unit_factor: Fraction = Fraction(1, 2),
) -> List[Angle]:
    """Comma-separated exact angles, multiplied by unit_factor into turn units.

    unit_factor is 1/2 for π units, 1 for 2π units and 1/360 for degrees.
    """
    gens = tuple(generators)
    angles: List[Angle] = []
    offset = 0
    for chunk in text.split(","):
        try:
            value = parse_exact(chunk, gens)
        except ParseError as e:
            local = e.position or 0
            raise ParseError(e.message, text, offset + local) from e
        try:
            angles.append(Angle.of(value.scale(unit_factor)))
        except AngleError as e:
            raise ParseError(str(e), text, offset) from e
        offset += len(chunk) + 1
    return angles
