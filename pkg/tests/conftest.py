"""Shared fixtures: settings without the file sink, worked distributions, the basic surfaces."""

from __future__ import annotations

from fractions import Fraction

import pytest

from config import Settings
from engine.angles import AngleDistribution
from models import Cylinder, JenkinsStrebelSurface


@pytest.fixture(autouse=True)
def _no_log_file(monkeypatch):
    monkeypatch.setenv("LOG_TO_FILE", "false")
    monkeypatch.setenv("LOG_LEVEL", "WARNING")


@pytest.fixture
def settings() -> Settings:
    return Settings(log_to_file=False, log_level="WARNING", jobs=1)


@pytest.fixture
def arithmetic_obstruction() -> AngleDistribution:
    """3π,3π,3π,3π/2,3π/2 on the sphere: fails only because of the residue arithmetic."""
    return AngleDistribution.from_turns(0, ["3/2", "3/2", "3/2", "3/4", "3/4"])


@pytest.fixture
def basic_example() -> AngleDistribution:
    """π, π, 3π/2 on the sphere."""
    return AngleDistribution.from_turns(0, ["1/2", "1/2", "3/4"])


@pytest.fixture
def torus_six_pi() -> AngleDistribution:
    return AngleDistribution.from_turns(1, [3])


@pytest.fixture
def basic_surface() -> JenkinsStrebelSurface:
    """One cylinder of circumference 3/4 whose two boundary halves are glued together."""
    return JenkinsStrebelSurface(
        cylinders=[Cylinder(w=Fraction(3, 4), boundary=["a", "b"])],
        pairs=[("a", "b")],
        lengths={"a": Fraction(3, 8), "b": Fraction(3, 8)},
    )


def hemispheres(w: Fraction = Fraction(1)) -> JenkinsStrebelSurface:
    return JenkinsStrebelSurface(
        cylinders=[Cylinder(w=w, boundary=["a"]), Cylinder(w=w, boundary=["b"])],
        pairs=[("a", "b")],
        lengths={"a": w, "b": w},
    )


@pytest.fixture
def round_sphere() -> JenkinsStrebelSurface:
    return hemispheres()


@pytest.fixture
def make_hemispheres():
    return hemispheres
