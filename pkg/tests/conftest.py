"""Shared fixtures: cached catalog sample sets and plain test immersions."""

import math

import numpy as np
import pytest

from solitongeo import ImmersionDef, build_sample_set, jets, make_surface, sample_points
from solitongeo.catalog import CATALOG

_CACHE = {}


def catalog_sample(name, grid=4, random_count=10, seed=1):
    """Build (and cache) a sample set for a named catalog surface."""
    key = (name, grid, random_count, seed)
    if key not in _CACHE:
        imm = make_surface(CATALOG[name], name=name)
        pts = sample_points(imm.box, grid=grid, random_count=random_count,
                            rng=np.random.default_rng(seed))
        _CACHE[key] = build_sample_set(imm, pts)
    return _CACHE[key]


@pytest.fixture
def sample_of():
    return catalog_sample


def unit_sphere_immersion():
    """The polar-chart unit sphere used by the worked examples."""

    def rule(u):
        th, ph = u
        return [jets.sin(th) * jets.cos(ph), jets.sin(th) * jets.sin(ph), jets.cos(th)]

    return ImmersionDef(n=2, m=3, rule=rule,
                        box=[[0.1, math.pi - 0.1], [-0.5, 6.3]], name="unit-sphere")


def plane_immersion(offset=1.0):
    def rule(u, _c=offset):
        return [u[0], u[1], _c]

    return ImmersionDef(n=2, m=3, rule=rule, box=[[-1.0, 1.0], [-1.0, 1.0]], name="plane")


def cylinder_immersion():
    def rule(u):
        ph, z = u
        return [jets.cos(ph), jets.sin(ph), z]

    return ImmersionDef(n=2, m=3, rule=rule,
                        box=[[-0.5, 6.3], [0.25, 2.5]], name="cylinder")


@pytest.fixture
def unit_sphere():
    return unit_sphere_immersion()


@pytest.fixture
def plane():
    return plane_immersion()


@pytest.fixture
def cylinder():
    return cylinder_immersion()
