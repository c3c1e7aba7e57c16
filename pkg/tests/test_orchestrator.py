from fractions import Fraction

import pytest

from deciders import verdicts as V
from engine.angles import AngleDistribution, parse_exact
from errors import SearchBoundsError
from generators.surface_analyzer import analyze, to_distribution, validate
from models import CrosscheckRow, SearchBounds, SurfaceBounds
from orchestrator import ClassificationOrchestrator


@pytest.fixture
def transitions():
    return []


@pytest.fixture
def orchestrator(settings, transitions):
    return ClassificationOrchestrator(settings, on_status_change=lambda status, step: transitions.append(status))


def test_classify_runs_both_paths(orchestrator, transitions, arithmetic_obstruction):
    report = orchestrator.classify(arithmetic_obstruction, "strict", witness=True)
    assert report.monodromy == "strict-dihedral"
    assert report.literal.path == "literal"
    assert report.reduction.path == "strata-reduction"
    assert report.divergence == V.LITERAL_BOUND
    # the reduction path rejects, so the oracle is not consulted
    assert report.search is None
    assert transitions == ["running", "done"]
    assert orchestrator.state.status == "done"


def test_classify_attaches_the_witness(orchestrator, basic_example):
    report = orchestrator.classify(basic_example, "strict-dihedral", witness=True)
    assert report.divergence is None
    assert report.search.status == "found"
    assert report.literal.witness == report.search.witness
    assert report.reduction.witness == report.search.witness


def test_symbolic_distributions_skip_the_witness(orchestrator):
    x = parse_exact("x", ["x"])
    report = orchestrator.classify(AngleDistribution.from_turns(0, ["3/2", "3/2", x, x.scale(2)]), "strict", witness=True)
    assert report.reduction.realizable
    assert report.search is None


def test_failures_are_recorded(orchestrator, basic_example):
    bounds = SearchBounds.model_construct(max_segments=0, max_denominator=24, max_regular=2)
    with pytest.raises(SearchBoundsError):
        orchestrator.witness(basic_example, "strict", bounds)
    assert orchestrator.state.status == "failed"
    assert len(orchestrator.state.errors) == 1


def test_oracle_check_skips_trivial_monodromy(orchestrator):
    assert orchestrator.oracle_check(AngleDistribution.from_turns(0, [2, 3]), "coaxial") is None
    outcome = orchestrator.oracle_check(AngleDistribution.from_turns(0, ["1/2", "1/2"]), "coaxial")
    assert outcome.status == "found"


def test_crosscheck_small_grid(orchestrator):
    frame = orchestrator.crosscheck(["1/2", "3/4"], max_n=3, max_genus=1)
    # 9 multisets per genus, two genera, two classes
    assert len(frame) == 36
    assert list(frame.columns) == list(CrosscheckRow.model_fields)
    assert set(frame["monodromy"]) == {"coaxial", "strict-dihedral"}
    assert frame["divergence"].isna().all()
    assert (frame["literal"] == frame["reduction"]).all()
    assert frame["oracle"].isna().all()
    assert orchestrator.state.rows == 36


def test_crosscheck_flags_the_arithmetic_obstruction(orchestrator):
    frame = orchestrator.crosscheck(["3/4", "3/2"], max_n=5, max_genus=0)
    row = frame[(frame["turns"] == "3/4,3/4,3/2,3/2,3/2") & (frame["monodromy"] == "strict-dihedral")]
    assert row["divergence"].tolist() == [V.LITERAL_BOUND]


def test_census(orchestrator):
    frame = orchestrator.census(SurfaceBounds(max_segments=2, max_length=2, denominator=1))
    assert int(frame["count"].sum()) == 4
    assert orchestrator.state.status == "done"


@pytest.mark.slow
def test_oracle_agrees_with_the_reduction_path(orchestrator):
    frame = orchestrator.crosscheck(["1/2", "3/4", "3/2"], max_n=3, max_genus=0, oracle=True)
    assert frame["oracle"].notna().any()
    assert not (frame["oracle_agrees"] == False).any()


def test_family_overreach_comes_with_a_witness(orchestrator):
    target = AngleDistribution.from_turns(0, ["5/4", "5/4", "3/2", "3/2", "5/2"])
    report = orchestrator.classify(target, "strict", witness=True)
    assert report.divergence == V.FAMILY_OVERREACH
    assert not report.literal.realizable
    assert report.reduction.realizable
    assert report.search.status == "found"
    witness = report.search.witness
    assert validate(witness) == []
    surface = analyze(witness)
    assert surface.genus == 0
    assert not surface.is_square
    assert surface.monodromy_class == "strict-dihedral"
    assert to_distribution(witness).canonical() == target.canonical()


@pytest.mark.slow
def test_default_crosscheck_grid_has_only_documented_divergences(orchestrator):
    frame = orchestrator.crosscheck()
    # 1286 multisets of at most five coefficients, three genera, two classes
    assert len(frame) == 7716
    divergent = frame[frame["divergence"].notna()]
    assert set(divergent["divergence"]) <= V.DOCUMENTED_DIVERGENCES
    assert divergent["literal_certificate"].notna().all()
    assert divergent["reduction_certificate"].notna().all()
    overreach = frame[(frame["turns"] == "5/4,5/4,3/2,3/2,5/2") & (frame["monodromy"] == "strict-dihedral")]
    assert overreach["divergence"].tolist() == [V.FAMILY_OVERREACH]


@pytest.mark.slow
def test_oracle_agrees_on_quarter_turn_grid(orchestrator):
    quarters = [str(Fraction(i, 4)) for i in range(1, 11)]
    frame = orchestrator.crosscheck(quarters, max_n=4, max_genus=0, oracle=True)
    assert frame["oracle"].notna().any()
    assert not (frame["oracle_agrees"] == False).any()
