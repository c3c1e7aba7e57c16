from fractions import Fraction

import pytest

from errors import SurfaceFormatError, SurfaceValidationError
from generators.surface_analyzer import (
    analyze,
    canonical_form,
    canonical_key,
    ensure_valid,
    to_distribution,
    validate,
)
from models import Cylinder, JenkinsStrebelSurface
from utils.surface_io import dump_surface, load_surface, parse_surface


def kinds(surface):
    return {issue.kind for issue in validate(surface)}


def test_basic_example_is_valid(basic_surface):
    assert validate(basic_surface) == []


def test_unequal_paired_lengths(basic_surface):
    broken = basic_surface.model_copy(update={"lengths": {"a": Fraction(1, 4), "b": Fraction(1, 2)}})
    issues = validate(broken)
    mismatch = [i for i in issues if i.kind == "length-mismatch"]
    assert mismatch and mismatch[0].ids == ["a", "b"]


def test_self_paired_segment():
    surface = JenkinsStrebelSurface(
        cylinders=[Cylinder(w=Fraction(1), boundary=["a", "b"])],
        pairs=[("a", "a"), ("b", "b")],
        lengths={"a": Fraction(1, 2), "b": Fraction(1, 2)},
    )
    assert "self-paired" in kinds(surface)
    with pytest.raises(SurfaceValidationError) as info:
        ensure_valid(surface)
    assert info.value.issues


def test_circumference_mismatch(basic_surface):
    broken = basic_surface.model_copy(update={"cylinders": [Cylinder(w=Fraction(1), boundary=["a", "b"])]})
    assert "circumference-mismatch" in kinds(broken)


def test_disconnected_gluing(basic_surface, make_hemispheres):
    other = make_hemispheres()
    renamed = JenkinsStrebelSurface(
        cylinders=basic_surface.cylinders + [Cylinder(w=c.w, boundary=[f"x{s}" for s in c.boundary]) for c in other.cylinders],
        pairs=basic_surface.pairs + [(f"x{a}", f"x{b}") for a, b in other.pairs],
        lengths={**basic_surface.lengths, **{f"x{k}": v for k, v in other.lengths.items()}},
    )
    assert kinds(renamed) == {"disconnected"}


def test_unpaired_and_missing_length():
    surface = JenkinsStrebelSurface(
        cylinders=[Cylinder(w=Fraction(1), boundary=["a", "b"])],
        pairs=[],
        lengths={"a": Fraction(1)},
    )
    assert {"unpaired-segment", "missing-length"} <= kinds(surface)


def test_analyze_basic_example(basic_surface):
    report = analyze(basic_surface)
    assert report.genus == 0
    assert report.equatorial_angles == [1, 1]
    assert report.pole_angles == [Fraction(3, 4)]
    assert report.is_square is False
    assert report.monodromy_class == "strict-dihedral"
    assert report.stratum == "Q(-1,-1,-2)"
    assert (report.vertices, report.edges, report.faces) == (2, 1, 1)


def test_analyze_round_sphere(round_sphere):
    report = analyze(round_sphere)
    assert report.genus == 0
    assert report.equatorial_angles == [2]
    assert report.pole_angles == [1, 1]
    assert report.is_square is True
    assert report.monodromy_class == "coaxial"
    assert report.regular_points == 3


def test_analyze_interleaved_gluing_is_a_torus():
    surface = JenkinsStrebelSurface(
        cylinders=[Cylinder(w=Fraction(2), boundary=["s1", "s2", "s3", "s4"])],
        pairs=[("s1", "s3"), ("s2", "s4")],
        lengths={s: Fraction(1, 2) for s in ("s1", "s2", "s3", "s4")},
    )
    report = analyze(surface)
    assert (report.vertices, report.edges, report.faces) == (1, 2, 1)
    assert report.genus == 1
    assert report.equatorial_angles == [4]
    assert report.monodromy_class == "strict-dihedral"
    # Σ(k-2) - 2·#poles = 4g - 4
    assert sum(k - 2 for k in report.equatorial_angles) - 2 * len(report.pole_angles) == 4 * report.genus - 4


def test_to_distribution(basic_surface, round_sphere, make_hemispheres):
    dist = to_distribution(basic_surface)
    assert dist.genus == 0
    assert [a.turn for a in dist.angles] == [Fraction(1, 2), Fraction(1, 2), Fraction(3, 4)]
    assert to_distribution(round_sphere) is None
    kept = to_distribution(make_hemispheres(Fraction(5, 4)), drop_regular=False)
    assert [a.turn for a in kept.angles] == [Fraction(1), Fraction(5, 4), Fraction(5, 4)]


def test_relabelling_does_not_change_canonical_form(basic_surface):
    relabelled = JenkinsStrebelSurface(
        cylinders=[Cylinder(w=Fraction(3, 4), boundary=["q", "p"])],
        pairs=[("p", "q")],
        lengths={"p": Fraction(3, 8), "q": Fraction(3, 8)},
    )
    assert canonical_key(relabelled) == canonical_key(basic_surface)
    assert canonical_form(relabelled) == canonical_form(basic_surface)
    assert analyze(relabelled).model_dump(exclude={"vertex_classes"}) == analyze(basic_surface).model_dump(
        exclude={"vertex_classes"}
    )


def test_surface_file_round_trip(tmp_path, basic_surface):
    path = tmp_path / "basic.json"
    dump_surface(basic_surface, path)
    assert load_surface(path) == basic_surface


def test_surface_file_format_errors(tmp_path):
    with pytest.raises(SurfaceFormatError):
        parse_surface("{not json")
    with pytest.raises(SurfaceFormatError):
        parse_surface("[]")
    with pytest.raises(SurfaceFormatError):
        parse_surface('{"cylinders": [], "pairs": [], "lengths": {}, "colour": "red"}')
    with pytest.raises(SurfaceFormatError):
        parse_surface('{"cylinders": [{"w": 0.75, "boundary": ["a"]}], "pairs": [], "lengths": {}}')
    with pytest.raises(SurfaceFormatError):
        load_surface(tmp_path / "missing.json")


def test_surface_file_accepts_rational_strings():
    surface = parse_surface(
        '{"cylinders": [{"w": "3/4", "boundary": ["a", "b"]}], "pairs": [["a", "b"]],'
        ' "lengths": {"a": "3/8", "b": "3/8"}}'
    )
    assert surface.cylinders[0].w == Fraction(3, 4)
    assert validate(surface) == []
