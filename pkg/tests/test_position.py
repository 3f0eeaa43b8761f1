"""Position splitting and the structural identities of the concurrence relation."""

import math

import numpy as np
import pytest

from solitongeo import (
    evaluate_jet2,
    induced_metric,
    jets,
    lie_derivative_metric,
    split_position,
    tangent_covariant_derivative,
    verify_structural_identities,
)
from solitongeo.jets import ImmersionDef

from conftest import catalog_sample


def _split_at(imm, u):
    jet = evaluate_jet2(imm, u)
    g = induced_metric(jet)
    return jet, g, split_position(jet, g)


def test_split_unit_sphere_is_normal(unit_sphere):
    for u in ([0.7, 0.3], [math.pi / 2, 2.0], [2.2, 5.0]):
        jet, _, split = _split_at(unit_sphere, u)
        assert split.xt_norm < 1e-14
        assert split.xn_norm == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_allclose(split.xn_ambient, jet.value, atol=1e-14)


def test_split_cone_is_tangential():
    def rule(u):
        s, ph = u
        return [s * jets.cos(ph) / math.sqrt(2), s * jets.sin(ph) / math.sqrt(2), s / math.sqrt(2)]

    cone = ImmersionDef(n=2, m=3, rule=rule, box=[[0.5, 2.0], [0.0, 6.0]])
    for u in ([0.7, 1.0], [1.8, 4.2]):
        _, _, split = _split_at(cone, u)
        assert split.xn_norm < 1e-14


def test_split_cylinder_hand_values(cylinder):
    jet, _, split = _split_at(cylinder, [0.9, 1.0])
    np.testing.assert_allclose(split.xt_ambient, [0.0, 0.0, 1.0], atol=1e-14)
    np.testing.assert_allclose(split.xn_ambient, [math.cos(0.9), math.sin(0.9), 0.0], atol=1e-14)
    assert split.xt_norm == pytest.approx(1.0, abs=1e-14)
    assert split.xn_norm == pytest.approx(1.0, abs=1e-14)


def test_split_invariants_across_catalog():
    for name in ("sphere-offcenter", "rotational-catenary", "clifford-torus", "plane-z1"):
        sample = catalog_sample(name)
        for p in sample.points:
            s = p.split
            assert np.max(np.abs(p.jet.value - s.xt_ambient - s.xn_ambient)) < 1e-12
            assert np.max(np.abs(p.jet.d1.T @ s.xn_ambient)) < 1e-12
            gnorm2 = float(s.xt_coords @ (p.metric.g @ s.xt_coords))
            assert abs(np.dot(s.xt_ambient, s.xt_ambient) - gnorm2) < 1e-10


def test_covariant_derivative_sphere_vanishes(unit_sphere):
    for direction in ([1.0, 0.0], [0.0, 1.0], [0.3, -0.8]):
        d = tangent_covariant_derivative(unit_sphere, [1.0, 0.5], direction)
        np.testing.assert_allclose(d, [0.0, 0.0], atol=1e-13)


def test_covariant_derivative_cylinder_hand_values(cylinder):
    d_phi = tangent_covariant_derivative(cylinder, [0.4, 1.3], [1.0, 0.0])
    np.testing.assert_allclose(d_phi, [0.0, 0.0], atol=1e-14)
    d_z = tangent_covariant_derivative(cylinder, [0.4, 1.3], [0.0, 1.0])
    np.testing.assert_allclose(d_z, [0.0, 1.0], atol=1e-14)


def test_lie_derivative_sphere_zero(unit_sphere):
    for v, w in (([1.0, 0.0], [0.0, 1.0]), ([1.0, 1.0], [1.0, 1.0])):
        assert lie_derivative_metric(unit_sphere, [1.0, 0.5], v, w) == pytest.approx(0.0, abs=1e-13)


def test_lie_derivative_plane(plane):
    val = lie_derivative_metric(plane, [0.4, 0.2], [1.0, 0.0], [1.0, 0.0])
    assert val == pytest.approx(2.0, abs=1e-13)


def test_lie_derivative_cylinder_values(cylinder):
    u = [0.4, 1.0]
    assert lie_derivative_metric(cylinder, u, [1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0, abs=1e-13)
    # along the ruling the identity right-hand side is 2 g(V,V) + 0
    assert lie_derivative_metric(cylinder, u, [0.0, 1.0], [0.0, 1.0]) == pytest.approx(2.0, abs=1e-13)


def test_lie_derivative_symmetric(cylinder):
    u = [1.3, 0.8]
    v, w = [0.7, -0.2], [0.1, 0.9]
    assert lie_derivative_metric(cylinder, u, v, w) == lie_derivative_metric(cylinder, u, w, v)


def test_identities_plane(plane):
    rep = verify_structural_identities(plane, [0.3, -0.5])
    assert rep.max_ad() < 1e-9
    assert rep.max_fd() < 1e-9


def test_identities_sphere_random_points(unit_sphere):
    rng = np.random.default_rng(11)
    lo = unit_sphere.box[:, 0] + 1e-3
    hi = unit_sphere.box[:, 1] - 1e-3
    for u in rng.uniform(lo, hi, size=(20, 2)):
        rep = verify_structural_identities(unit_sphere, u)
        assert rep.max_ad() < 1e-8
        assert rep.max_fd() < 1e-8


def test_identities_cylinder_lie_value(cylinder):
    # at z = 1 with V = W = the ruling direction both identity sides equal 2
    u = [0.3, 1.0]
    lhs = lie_derivative_metric(cylinder, u, [0.0, 1.0], [0.0, 1.0])
    assert lhs == pytest.approx(2.0, abs=1e-13)
    rep = verify_structural_identities(cylinder, u)
    assert rep.lie_metric_ad < 1e-12
