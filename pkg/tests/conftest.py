from __future__ import annotations

import os
from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

from tcpel.mln import ground_kb
from tcpel.syntax import parse_kb

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def fixture_text(name: str) -> str:
    return resources.files("tcpel").joinpath("data", name).read_text(encoding="utf-8")


def fixture_path(name: str) -> str:
    return str(resources.files("tcpel").joinpath("data", name))


@pytest.fixture(scope="session")
def toy_kb():
    return parse_kb(fixture_text("toy.tcpkb")).kb


@pytest.fixture(scope="session")
def toy_g(toy_kb):
    return ground_kb(toy_kb)


@pytest.fixture(scope="session")
def forms_kb():
    return parse_kb(fixture_text("forms.tcpkb")).kb


@pytest.fixture(scope="session")
def forms_g(forms_kb):
    return ground_kb(forms_kb)


def forms_worlds(g):
    """The right-aligned and the top-aligned labelings of the single field."""
    right = g.world(["canLabel(f,l)", "hor(l,f)", "adj(l,f)", "right(l,f)"])
    top = g.world(["canLabel(f,l)", "adj(l,f)", "top(l,f)", "ver(l,f)"])
    return right, top
