import random
from fractions import Fraction

import pytest

from engine.angles import parse_exact
from engine.strata import (
    EXC_ABC,
    EXC_EVEN_WEIGHT,
    EXC_GENUS0_ARITH,
    EXC_ODD_WEIGHT,
    EXC_TORUS_EVEN,
    GENERIC_YES,
    RESIDUE_THEOREM,
    AbelianResidueConfig,
    AbelianStratum,
    QuadraticStratum,
    QuadResidueConfig,
    abelian_residues_realizable,
    quad_residues_realizable,
)
from errors import StrataError


def quad(genus, orders, residues):
    stratum = QuadraticStratum.from_orders(genus, orders, len(residues))
    return quad_residues_realizable(stratum, QuadResidueConfig.from_residues(residues))


def abelian(genus, zeros, residues):
    stratum = AbelianStratum.from_zeros(genus, zeros, len(residues))
    return abelian_residues_realizable(stratum, AbelianResidueConfig.from_signed(residues))


def test_stratum_text():
    assert str(QuadraticStratum(0, (1, 1), 3)) == "Q(1,1,-2^3)"
    assert str(QuadraticStratum(0, (-1, -1), 1)) == "Q(-1,-1,-2)"
    assert str(AbelianStratum(1, (2,), 2)) == "H(2,-1^2)"


def test_torus_even_exception():
    verdict = quad(1, [4], [1, 1])
    assert not verdict.realizable
    assert verdict.clause == EXC_TORUS_EVEN
    assert quad(1, [4], [1, 2]).clause == GENERIC_YES


def test_marked_points_keep_the_exceptions():
    marked = quad(1, [4, 0], [1, 1])
    assert marked.clause == EXC_TORUS_EVEN
    assert marked.detail["stratum"] == "Q(4,0,-2^2)"
    assert quad(1, [4, 0, 0], [1, 2]).clause == GENERIC_YES
    assert quad(0, [1, 1, 0], [1, 4, 9]).clause == EXC_ABC


@pytest.mark.parametrize(
    "residues, realizable",
    [
        ([1, 4, 9], False),
        ([Fraction(9, 16), Fraction(9, 16), Fraction(9, 4)], False),
        ([1, 4, 16], True),
    ],
)
def test_sphere_with_two_simple_zeros(residues, realizable):
    assert quad(0, [1, 1], residues).realizable is realizable


def test_first_matching_clause_wins_and_others_are_listed():
    verdict = quad(0, [1, 1], [Fraction(9, 16), Fraction(9, 16), Fraction(9, 4)])
    assert verdict.clause == EXC_EVEN_WEIGHT
    assert verdict.also_matched == [EXC_ABC]
    assert verdict.detail["f"] == "1,1,2"


def test_abc_clause():
    assert quad(0, [1, 1], [1, 4, 9]).clause == EXC_ABC


def test_odd_weight_clause():
    verdict = quad(0, [3, -1], [1, 1, 1])
    assert verdict.clause == EXC_ODD_WEIGHT


def test_higher_genus_is_generic():
    assert quad(2, [4, 4], [1, 1]).clause == GENERIC_YES


@pytest.mark.parametrize(
    "residues, realizable",
    [
        ([1, 1, -1, -1], False),
        ([2, 1, -2, -1], True),
    ],
)
def test_abelian_sphere(residues, realizable):
    assert abelian(0, [2], residues).realizable is realizable


def test_abelian_clauses():
    assert abelian(0, [2], [1, 1, -1, -1]).clause == EXC_GENUS0_ARITH
    assert abelian(0, [2], [1, 1, 1, -1]).clause == RESIDUE_THEOREM
    assert abelian(1, [2], [1, -1]).clause == GENERIC_YES


def test_scale_invariance():
    rng = random.Random(7)
    for _ in range(100):
        s = Fraction(rng.randint(1, 40), rng.randint(1, 40))
        assert quad(0, [1, 1], [s, 4 * s, 16 * s]).realizable
        assert not quad(0, [1, 1], [s, 4 * s, 9 * s]).realizable
        assert not quad(1, [4], [s, s]).realizable
        assert abelian(0, [2], [2 * s, s, -2 * s, -s]).realizable


def test_invalid_strata():
    with pytest.raises(StrataError):
        QuadraticStratum(0, (1, 1), 2)
    with pytest.raises(StrataError):
        QuadraticStratum(0, (-2,), 1)
    with pytest.raises(StrataError):
        AbelianStratum(0, (-1,), 1)


def test_arity_mismatch():
    stratum = QuadraticStratum(0, (1, 1), 3)
    with pytest.raises(StrataError):
        quad_residues_realizable(stratum, QuadResidueConfig.from_residues([1, 1]))


def test_genus_zero_squares_are_refused():
    with pytest.raises(StrataError):
        quad_residues_realizable(QuadraticStratum(0, (0,), 2), QuadResidueConfig.from_residues([1, 1]))


def test_bad_residues():
    with pytest.raises(StrataError):
        QuadResidueConfig.from_residues([0])
    with pytest.raises(StrataError):
        AbelianResidueConfig.from_signed([parse_exact("x", ["x"]), -1])
