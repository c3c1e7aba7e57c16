import random
from fractions import Fraction

import pytest

from deciders import verdicts as V
from deciders.exceptional_families import (
    SPHERE_ADJACENT_ODD,
    SPHERE_EQUAL_ODD,
    SPHERE_THREE_ODD,
    TORUS_EVEN,
    TORUS_EVEN_EQUAL,
    TORUS_ODD_PAIR,
    TORUS_ODD_PAIR_EQUAL,
)
from deciders.literal_decider import LiteralDecider, literal_bound, maximal_assignment
from deciders.reduction_decider import ReductionDecider, admissible_assignments
from engine.angles import AngleDistribution, parse_exact, partition
from engine.strata import EXC_AABB, EXC_EVEN_WEIGHT


@pytest.fixture
def literal(settings):
    return LiteralDecider(settings)


@pytest.fixture
def reduction(settings):
    return ReductionDecider(settings)


def dist(genus, *turns):
    return AngleDistribution.from_turns(genus, list(turns))


# ── literal path ───────────────────────────────────────────────


def test_arithmetic_obstruction_literal(literal, arithmetic_obstruction):
    verdict = literal.classify(arithmetic_obstruction, "strict")
    assert not verdict.realizable
    assert verdict.certificate.clause == V.ARITHMETIC_CONDITION
    assert verdict.divergence == V.LITERAL_BOUND
    assert verdict.assignment.stratum == "Q(1,1,-2^3)"
    assert verdict.assignment.pole_residues == ["9/16", "9/16", "9/4"]
    assert verdict.assignment.strata_clause == EXC_EVEN_WEIGHT
    assert verdict.gauss_bonnet is not None


def test_maximal_assignment_and_stated_bound(arithmetic_obstruction):
    part = partition(arithmetic_obstruction)
    assignment = maximal_assignment(part)
    assert assignment.orders == [1, 1]
    assert assignment.t == 3
    assert assignment.added_units == 0
    # pole vector (3/4,3/4,3/2) = 3/4·(1,1,2): Σr = 4 ≥ b1+b2 = 3
    assert literal_bound(part) is True


def test_torus_six_pi(literal, reduction, torus_six_pi):
    strict = literal.classify(torus_six_pi, "strict-dihedral")
    assert not strict.realizable
    assert strict.certificate.clause == TORUS_EVEN
    assert strict.certificate.params["k"] == "1"
    assert not reduction.classify(torus_six_pi, "strict-dihedral").realizable

    coaxial = literal.classify(torus_six_pi, "coaxial")
    assert coaxial.realizable
    assert coaxial.certificate.clause == V.COAXIAL_PARITY
    via_strata = reduction.classify(torus_six_pi, "coaxial")
    assert via_strata.realizable
    assert via_strata.assignment.stratum == "H(2,-1^2)"
    assert via_strata.assignment.pole_residues == ["1", "-1"]


def test_basic_example(literal, reduction, basic_example):
    strict = literal.classify(basic_example, "strict-dihedral")
    assert strict.realizable
    assert strict.certificate.clause == V.MAXIMAL_REALIZABLE
    assert strict.assignment.stratum == "Q(-1,-1,-2)"
    assert strict.gauss_bonnet is None
    via_strata = reduction.classify(basic_example, "strict-dihedral")
    assert via_strata.realizable
    assert via_strata.certificate.params["maximal"] == "yes"

    coaxial = literal.classify(basic_example, "coaxial")
    assert not coaxial.realizable
    assert coaxial.certificate.clause == V.COAXIAL_NO_SIGNED_SUM


@pytest.mark.parametrize(
    "genus, turns, clause",
    [
        (0, ["3/4", "3/4", "1/2"], V.TOO_FEW_ODD),
        (0, ["1/2", "1/2"], V.CYCLIC_MONODROMY),
        (0, ["3/2", "3/2", "3/2", "3/2"], V.FOUR_ODD),
    ],
)
def test_simple_strict_outcomes(literal, genus, turns, clause):
    assert literal.classify(dist(genus, *turns), "strict").certificate.clause == clause


def test_trivial_monodromy_on_the_sphere(literal, reduction):
    integral = dist(0, 2, 3)
    for decider in (literal, reduction):
        assert decider.classify(integral, "any").certificate.clause == V.TRIVIAL_MONODROMY
        assert decider.classify(integral, "coaxial").certificate.clause == V.TRIVIAL_MONODROMY


def test_regular_points_are_noted(literal):
    verdict = literal.classify(dist(0, "1/2", "1/2", "3/4", 1), "strict")
    assert any(note.startswith("angle #4 is 2π") for note in verdict.notes)


# ── exceptional families and their mutations ──────────────────


@pytest.mark.parametrize(
    "genus, turns, clause",
    [
        (0, ["5/2", "3/2", "3/4", "3/4"], SPHERE_ADJACENT_ODD),
        (1, [3, "3/4", "3/4"], TORUS_EVEN_EQUAL),
        (1, ["5/2", "3/2"], TORUS_ODD_PAIR),
    ],
)
def test_family_members_are_rejected_by_both_paths(literal, reduction, genus, turns, clause):
    member = dist(genus, *turns)
    verdict = literal.classify(member, "strict")
    assert not verdict.realizable
    assert verdict.certificate.clause == clause
    assert not reduction.classify(member, "strict").realizable


def test_adjacent_odd_family_reports_the_residue_clause(literal):
    verdict = literal.classify(dist(0, "5/2", "3/2", "3/4", "3/4"), "strict")
    assert verdict.certificate.params["strata_clause"] == EXC_AABB


@pytest.mark.parametrize(
    "genus, turns",
    [
        (0, ["5/2", "3/2", "3/4", "5/4"]),
        (1, [3, "3/4", "5/4"]),
    ],
)
def test_mutated_family_members_become_realizable(literal, reduction, genus, turns):
    mutated = dist(genus, *turns)
    assert literal.classify(mutated, "strict").realizable
    assert reduction.classify(mutated, "strict").realizable


HALF = Fraction(1, 2)
EPSILON = Fraction(1, 997)
FAMILIES = [
    TORUS_EVEN,
    TORUS_EVEN_EQUAL,
    TORUS_ODD_PAIR,
    TORUS_ODD_PAIR_EQUAL,
    SPHERE_THREE_ODD,
    SPHERE_ADJACENT_ODD,
    SPHERE_EQUAL_ODD,
]


def _noninteger(rng, below=None):
    while True:
        x = Fraction(rng.randint(1, 30), rng.choice([3, 4, 5, 6, 8]))
        if (2 * x).denominator != 1 and (below is None or x < below):
            return x


def family_member(rng, family, k):
    """(genus, turns) of one member with parameter k, None when k is out of range.

    When the member has non-integer angles the last turn is one of them.
    """
    if family == TORUS_EVEN:
        return 1, [2 * k + 1]
    if family == TORUS_ODD_PAIR:
        return 1, [k + 3 * HALF, k + HALF]
    if family in (TORUS_EVEN_EQUAL, TORUS_ODD_PAIR_EQUAL):
        if k < 1:
            return None
        head = [2 * k + 1] if family == TORUS_EVEN_EQUAL else [k + 3 * HALF, k + HALF]
        return 1, head + [_noninteger(rng)] * (2 * k)
    if family == SPHERE_THREE_ODD:
        if k < 1:
            return None
        b = k + HALF
        relation = rng.choice(["sum", "alpha", "beta"])
        if relation == "sum":
            alpha = _noninteger(rng, below=b)
            beta = b - alpha
        elif relation == "alpha":
            beta = _noninteger(rng)
            alpha = beta + b
        else:
            alpha = _noninteger(rng)
            beta = alpha + b
        return 0, [b, b, b] + [alpha] * (2 * k - 1) + [beta]
    if family == SPHERE_ADJACENT_ODD:
        a = _noninteger(rng)
        # B is either the unit pole or a non-integer angle
        tail = [_noninteger(rng)] * (2 * k) if rng.random() < 0.5 else []
        return 0, [k + 3 * HALF, k + HALF] + tail + [a, a]
    b = k + 3 * HALF
    if rng.random() < 0.5:
        # C is the unit pole
        a = _noninteger(rng)
        return 0, [b, b, a, rng.choice([a + 1, abs(1 - a)])]
    while True:
        a, c = _noninteger(rng), _noninteger(rng)
        x = rng.choice([a + c, abs(a - c)])
        if x > 0 and (2 * x).denominator != 1:
            return 0, [b, b] + [c] * (2 * k + 1) + [a, x]


def _names(verdict):
    return {verdict.certificate.clause, verdict.certificate.params.get("family")}


@pytest.mark.parametrize("family", FAMILIES)
def test_random_family_members_are_rejected(literal, reduction, family):
    rng = random.Random(f"members-{family}")
    for k in range(4):
        for _ in range(20):
            member = family_member(rng, family, k)
            if member is None:
                break
            genus, turns = member
            target = dist(genus, *turns)
            verdict = literal.classify(target, "strict")
            assert not verdict.realizable, target
            assert not reduction.classify(target, "strict").realizable, target
            # alone with k=0 the strengthened Gauss-Bonnet bound already fails
            if k >= 1 or family.startswith("sphere"):
                assert family in _names(verdict), target


@pytest.mark.parametrize("family", [f for f in FAMILIES if f not in (TORUS_EVEN, TORUS_ODD_PAIR)])
def test_perturbed_family_members_are_realizable(literal, reduction, family):
    rng = random.Random(f"perturbed-{family}")
    for k in range(4):
        for _ in range(20):
            member = family_member(rng, family, k)
            if member is None:
                break
            genus, turns = member
            target = dist(genus, *turns[:-1], turns[-1] + EPSILON)
            assert reduction.classify(target, "strict").realizable, target
            assert family not in _names(literal.classify(target, "strict")), target


def test_marked_point_on_the_torus(literal, reduction):
    marked = dist(1, 3, 1)
    verdict = literal.classify(marked, "strict")
    assert not verdict.realizable
    assert verdict.certificate.clause == TORUS_EVEN
    assert V.path_divergence(verdict, reduction.classify(marked, "strict")) is None
    assert literal.classify(marked, "coaxial").realizable


def test_torus_eight_pi_is_realizable(literal, reduction):
    torus = dist(1, 4)
    verdict = literal.classify(torus, "strict")
    assert verdict.realizable
    assert V.DENSE_MONODROMY_NOTE in verdict.notes
    via_strata = reduction.classify(torus, "strict")
    assert via_strata.realizable
    assert via_strata.assignment.stratum == "Q(6,-2^3)"


# ── reduction path ─────────────────────────────────────────────


def test_arithmetic_obstruction_reduction(reduction, arithmetic_obstruction):
    assignments = admissible_assignments(arithmetic_obstruction)
    assert len(assignments) == 1
    verdict = reduction.classify(arithmetic_obstruction, "strict")
    assert not verdict.realizable
    assert verdict.certificate.clause == V.NO_REALIZABLE_ASSIGNMENT
    assert verdict.assignment.pole_residues == ["9/4", "9/16", "9/16"]


def test_assignments_are_ordered_by_equatorial_sum():
    assignments = admissible_assignments(dist(0, "5/2", "3/2", "3/2", "3/2"))
    sums = [sum(a.equatorial, Fraction(0)) for a in assignments]
    assert sums == sorted(sums, reverse=True)
    assert all(sum(1 for x in a.equatorial if x.denominator == 2) % 2 == 0 for a in assignments)


def test_parallel_assignment_evaluation_matches_serial(settings):
    target = dist(0, "5/2", "3/2", "3/2", "3/2", "3/4")
    serial = ReductionDecider(settings).classify(target, "strict")
    parallel = ReductionDecider(settings.model_copy(update={"jobs": 4})).classify(target, "strict")
    assert serial == parallel


# ── agreement between the paths ────────────────────────────────


def test_path_divergence(literal, reduction, arithmetic_obstruction, basic_example, torus_six_pi):
    for target, expected in [
        (arithmetic_obstruction, V.LITERAL_BOUND),
        (basic_example, None),
        (torus_six_pi, None),
    ]:
        assert V.path_divergence(literal.classify(target, "strict"), reduction.classify(target, "strict")) == expected


def test_three_odd_family_overreaches_when_the_odd_angles_differ(literal, reduction):
    target = dist(0, "5/4", "5/4", "3/2", "3/2", "5/2")
    strict = literal.classify(target, "strict")
    assert not strict.realizable
    assert strict.certificate.clause == SPHERE_THREE_ODD
    assert (strict.certificate.params["k"], strict.certificate.params["l"]) == ("1", "2")
    assert strict.certificate.params["strata_clause"] == "generic-yes"

    accepted = reduction.classify(target, "strict")
    assert accepted.realizable
    assert accepted.certificate.params["maximal"] == "yes"
    assert accepted.assignment.stratum == "Q(3,1,-2^4)"
    assert V.path_divergence(strict, accepted) == V.FAMILY_OVERREACH


def test_family_is_named_when_the_residue_clause_decides(literal, arithmetic_obstruction):
    verdict = literal.classify(arithmetic_obstruction, "strict")
    assert verdict.certificate.clause == V.ARITHMETIC_CONDITION
    assert verdict.certificate.params["family"] == SPHERE_THREE_ODD
    assert "family" not in literal.classify(dist(0, "1/2", "1/2", "3/4"), "strict").certificate.params


def test_dihedral_any_is_a_disjunction(literal, reduction, basic_example, torus_six_pi):
    verdict = literal.classify(basic_example, "dihedral-any")
    assert verdict.realizable
    assert verdict.certificate.clause == V.DISJUNCTION
    assert [c.monodromy for c in verdict.components] == ["coaxial", "strict-dihedral"]
    assert verdict.certificate.params["coaxial"] == V.COAXIAL_NO_SIGNED_SUM

    torus = reduction.classify(torus_six_pi, "any")
    assert torus.realizable
    assert [c.realizable for c in torus.components] == [True, False]


def test_unknown_class(literal):
    with pytest.raises(ValueError):
        literal.classify(dist(0, "1/2", "1/2", "3/4"), "cyclic")


def _assert_order_free(literal, reduction, rng, shuffles, max_genus):
    pool = ["1/2", "3/4", "3/2", "5/2", "5/4", 2, 3]
    for _ in range(shuffles):
        turns = [rng.choice(pool) for _ in range(rng.randint(2, 5))]
        genus = rng.randint(0, max_genus)
        shuffled = turns[:]
        rng.shuffle(shuffled)
        for monodromy in ("coaxial", "strict"):
            for decider in (literal, reduction):
                a = decider.classify(dist(genus, *turns), monodromy)
                b = decider.classify(dist(genus, *shuffled), monodromy)
                assert (a.realizable, a.certificate.clause) == (b.realizable, b.certificate.clause)


def test_verdicts_do_not_depend_on_angle_order(literal, reduction):
    _assert_order_free(literal, reduction, random.Random(11), shuffles=25, max_genus=1)


@pytest.mark.slow
def test_verdicts_do_not_depend_on_angle_order_at_scale(literal, reduction):
    _assert_order_free(literal, reduction, random.Random(1000), shuffles=1000, max_genus=2)


def test_symbolic_angles(literal):
    x = parse_exact("x", ["x"])
    target = AngleDistribution.from_turns(0, ["3/2", "3/2", x, x.scale(2)])
    verdict = literal.classify(target, "strict")
    # 2x, x and the unit pole share no ray, so only the generic clause can apply
    assert verdict.realizable
    assert verdict.certificate.clause == V.MAXIMAL_REALIZABLE
    assert verdict.divergence is None
