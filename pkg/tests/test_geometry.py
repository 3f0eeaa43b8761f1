"""Extrinsic geometry operations against closed-form values and invariants."""

import math

import numpy as np
import pytest

from solitongeo import (
    evaluate_jet2,
    hessian_scalar,
    induced_metric,
    jets,
    normal_connection_derivative,
    normal_frame,
    riemann_via_gauss,
    second_fundamental_form,
    shape_operator,
    weyl_tensor,
)
from solitongeo.errors import DegeneratePointError
from solitongeo.jets import ImmersionDef

from conftest import catalog_sample


def _pipeline(imm, u):
    jet = evaluate_jet2(imm, u)
    g = induced_metric(jet)
    frame = normal_frame(jet)
    sff = second_fundamental_form(jet, g, frame)
    return jet, g, frame, sff


def test_plane_metric_flat(plane):
    _, g, _, _ = _pipeline(plane, [0.2, -0.4])
    np.testing.assert_allclose(g.g, np.eye(2), atol=1e-15)
    assert np.max(np.abs(g.christoffel)) == 0.0


def test_sphere_metric_values(unit_sphere):
    _, g, _, _ = _pipeline(unit_sphere, [math.pi / 2, 0.0])
    np.testing.assert_allclose(g.g, np.eye(2), atol=1e-15)
    _, g3, _, _ = _pipeline(unit_sphere, [math.pi / 3, 0.0])
    np.testing.assert_allclose(g3.g, np.diag([1.0, 0.75]), atol=1e-15)


def test_sphere_christoffel_closed_form(unit_sphere):
    th = 1.1
    _, g, _, _ = _pipeline(unit_sphere, [th, 0.7])
    assert g.christoffel[0, 1, 1] == pytest.approx(-math.sin(th) * math.cos(th), abs=1e-14)
    assert g.christoffel[1, 0, 1] == pytest.approx(1.0 / math.tan(th), abs=1e-13)
    assert g.christoffel[1, 1, 0] == pytest.approx(1.0 / math.tan(th), abs=1e-13)


def test_cylinder_metric_flat(cylinder):
    _, g, _, _ = _pipeline(cylinder, [1.0, 1.5])
    np.testing.assert_allclose(g.g, np.eye(2), atol=1e-15)
    assert np.max(np.abs(g.christoffel)) < 1e-15


def test_metric_invariants_on_catalog():
    for name in ("sphere-r2", "rotational-catenary", "clifford-torus"):
        sample = catalog_sample(name)
        for p in sample.points[:10]:
            np.testing.assert_allclose(p.metric.g @ p.metric.g_inv,
                                       np.eye(sample.n), atol=1e-12)
            gamma = p.metric.christoffel
            assert np.max(np.abs(gamma - np.swapaxes(gamma, 1, 2))) < 1e-14
            assert p.metric.det_g > 0


def test_metric_compatibility_fd():
    # FD derivative of g matches the Christoffel reconstruction
    # d_k g_ij = Gamma^l_ki g_lj + Gamma^l_kj g_li
    sample = catalog_sample("rotational-parabola")
    imm = sample.immersion
    step = 1e-5
    for p in sample.points[:6]:
        g0 = p.metric
        recon = (np.einsum("lki,lj->kij", g0.christoffel, g0.g)
                 + np.einsum("lkj,li->kij", g0.christoffel, g0.g))
        for k in range(sample.n):
            up = p.u.copy()
            um = p.u.copy()
            up[k] += step
            um[k] -= step
            gp = induced_metric(evaluate_jet2(imm, up)).g
            gm = induced_metric(evaluate_jet2(imm, um)).g
            fd = (gp - gm) / (2 * step)
            assert np.max(np.abs(fd - recon[k])) < 1e-6


def test_degenerate_metric_raises():
    # cone chart is singular on the axis u = 0
    def rule(u):
        s, ph = u
        return [s * jets.cos(ph), s * jets.sin(ph), s]

    cone = ImmersionDef(n=2, m=3, rule=rule, box=[[-1.0, 1.0], [0.0, 6.0]])
    jet = evaluate_jet2(cone, [0.0, 1.0])
    with pytest.raises(DegeneratePointError):
        induced_metric(jet)


def test_normal_frame_plane(plane):
    _, _, frame, _ = _pipeline(plane, [0.1, 0.1])
    assert frame.basis.shape == (1, 3)
    np.testing.assert_allclose(np.abs(frame.basis[0]), [0.0, 0.0, 1.0], atol=1e-14)


def test_normal_frame_sphere_radial(unit_sphere):
    jet, _, frame, _ = _pipeline(unit_sphere, [math.pi / 2, 0.0])
    np.testing.assert_allclose(np.abs(frame.basis[0]), np.abs(jet.value), atol=1e-13)


def test_normal_frame_clifford_torus():
    sample = catalog_sample("clifford-torus")
    for p in sample.points[:8]:
        basis = p.frame.basis
        assert basis.shape == (2, 4)
        np.testing.assert_allclose(basis @ basis.T, np.eye(2), atol=1e-12)
        assert np.max(np.abs(basis @ p.jet.d1)) < 1e-12


def test_sff_plane_minimal(plane):
    _, _, _, sff = _pipeline(plane, [0.3, 0.3])
    assert np.max(np.abs(sff.h_coeffs)) == 0.0
    np.testing.assert_allclose(sff.mean_curvature, np.zeros(3), atol=1e-15)


def test_sff_sphere_umbilical(unit_sphere):
    jet, g, _, sff = _pipeline(unit_sphere, [1.2, 0.4])
    # pairing with the outward normal (= position) gives h_ij = -g_ij
    np.testing.assert_allclose(sff.pairing(jet.value), -g.g, atol=1e-13)
    assert np.linalg.norm(sff.mean_curvature) == pytest.approx(1.0, abs=1e-13)


def test_sff_cylinder_eigenvalues(cylinder):
    jet, g, _, sff = _pipeline(cylinder, [0.8, 1.0])
    outward = np.array([jet.value[0], jet.value[1], 0.0])
    vals = np.sort(np.linalg.eigvalsh(sff.pairing(outward)))
    np.testing.assert_allclose(vals, [-1.0, 0.0], atol=1e-13)
    assert np.linalg.norm(sff.mean_curvature) == pytest.approx(0.5, abs=1e-13)


def test_shape_operator_zero_eta(unit_sphere):
    _, g, _, sff = _pipeline(unit_sphere, [1.0, 1.0])
    np.testing.assert_allclose(shape_operator(sff, g, np.zeros(3)), np.zeros((2, 2)), atol=1e-15)


def test_shape_operator_sphere_identity(unit_sphere):
    jet, g, _, sff = _pipeline(unit_sphere, [1.0, 1.0])
    a = shape_operator(sff, g, jet.value)  # outward normal = position
    np.testing.assert_allclose(a, -np.eye(2), atol=1e-13)


def test_shape_operator_cylinder(cylinder):
    jet, g, _, sff = _pipeline(cylinder, [0.3, 1.2])
    xn = np.array([jet.value[0], jet.value[1], 0.0])
    a = shape_operator(sff, g, xn)
    np.testing.assert_allclose(a, np.diag([-1.0, 0.0]), atol=1e-13)


def test_shape_operator_rejects_tangential(unit_sphere):
    jet, g, _, sff = _pipeline(unit_sphere, [1.0, 1.0])
    with pytest.raises(ValueError):
        shape_operator(sff, g, jet.d1[:, 0])


def test_shape_operator_self_adjointness():
    # g(A_eta X, Y) = <h(X, Y), eta> for every frame normal
    for name in ("clifford-torus", "rotational-catenary", "sphere-3d-r1"):
        sample = catalog_sample(name)
        for p in sample.points[:6]:
            for eta in p.frame.basis:
                a = shape_operator(p.sff, p.metric, eta)
                lhs = p.metric.g @ a
                rhs = p.sff.pairing(eta)
                assert np.max(np.abs(lhs - rhs)) < 1e-10
                assert np.max(np.abs(lhs - lhs.T)) < 1e-10


def test_curvature_flat_families():
    for name in ("plane-z1", "cylinder-r1", "cone-unit", "clifford-torus"):
        sample = catalog_sample(name)
        for p in sample.points[:8]:
            assert abs(p.curvature.scalar) < 1e-12


def test_curvature_spheres_closed_form():
    for name, expect in (("sphere-r1", 2.0), ("sphere-r2", 0.5), ("sphere-3d-r1", 6.0)):
        sample = catalog_sample(name)
        for p in sample.points[:8]:
            assert p.curvature.scalar == pytest.approx(expect, abs=1e-10)
            off_diag = p.curvature.sectional[~np.eye(sample.n, dtype=bool)]
            np.testing.assert_allclose(off_diag, expect / (sample.n * (sample.n - 1)),
                                       atol=1e-10)


def test_riemann_symmetries():
    for name in ("rotational-catenary", "sphere-3d-r1", "sphere-offcenter"):
        sample = catalog_sample(name)
        for p in sample.points[:6]:
            r = p.curvature.riemann
            assert np.max(np.abs(r + np.einsum("jikl->ijkl", r))) < 1e-10
            assert np.max(np.abs(r + np.einsum("ijlk->ijkl", r))) < 1e-10
            assert np.max(np.abs(r - np.einsum("klij->ijkl", r))) < 1e-10
            bianchi = r + np.einsum("jkil->ijkl", r) + np.einsum("kijl->ijkl", r)
            assert np.max(np.abs(bianchi)) < 1e-10


def test_scalar_curvature_convention_matches_ricci_contraction():
    for name in ("sphere-3d-r05", "rotational-parabola", "sphere-offcenter"):
        sample = catalog_sample(name)
        for p in sample.points[:6]:
            double_contraction = float(np.einsum("ij,ij->", p.metric.g_inv, p.curvature.ricci))
            assert abs(p.curvature.scalar - double_contraction) < 1e-10


def test_q_operator_definition():
    sample = catalog_sample("sphere-3d-r1")
    p = sample.points[0]
    # g(Q X, Y) = Ric(X, Y)
    np.testing.assert_allclose(p.metric.g @ p.curvature.q_operator.T, p.curvature.ricci,
                               atol=1e-10)


def test_weyl_vanishes_on_round_sphere_and_flat_chart():
    for name in ("sphere-4d-r1", "plane-4d"):
        sample = catalog_sample(name, grid=2, random_count=6)
        for p in sample.points:
            w = weyl_tensor(p.curvature, p.metric)
            assert w.applicable
            assert w.frobenius_norm < 1e-9
            if name == "plane-4d":
                assert w.frobenius_norm < 1e-12


def test_weyl_flat_four_torus_chart():
    # flat torus T^4 in E^8: curvature vanishes, codimension-4 normal frame
    def rule(u):
        out = []
        for t in u:
            out.extend([jets.cos(t), jets.sin(t)])
        return out

    torus4 = ImmersionDef(n=4, m=8, rule=rule, box=[[0.05, 6.2]] * 4)
    for u in ([0.3, 1.2, 2.5, 4.0], [1.0, 1.0, 1.0, 1.0]):
        jet, g, frame, sff = _pipeline(torus4, u)
        assert frame.basis.shape == (4, 8)
        np.testing.assert_allclose(frame.basis @ frame.basis.T, np.eye(4), atol=1e-12)
        curv = riemann_via_gauss(sff, g)
        assert abs(curv.scalar) < 1e-12
        w = weyl_tensor(curv, g)
        assert w.frobenius_norm < 1e-12


def test_weyl_low_dimension_flagged():
    sample = catalog_sample("sphere-r1")
    w = weyl_tensor(sample.points[0].curvature, sample.points[0].metric)
    assert not w.applicable
    assert w.frobenius_norm == 0.0


def test_weyl_trace_free():
    sample = catalog_sample("sphere-4d-r1", grid=2, random_count=4)
    specs = ("ijkl,ij->kl", "ijkl,ik->jl", "ijkl,il->jk",
             "ijkl,jk->il", "ijkl,jl->ik", "ijkl,kl->ij")
    for p in sample.points[:4]:
        w = weyl_tensor(p.curvature, p.metric)
        for spec in specs:
            t = np.einsum(spec, w.c, p.metric.g_inv)
            assert np.max(np.abs(t)) < 1e-9


def test_hessian_flat_chart(plane):
    _, g, _, _ = _pipeline(plane, [0.2, 0.2])
    h_lin = hessian_scalar(lambda u: 2.0 * u[0] - u[1], [0.2, 0.2], g)
    np.testing.assert_allclose(h_lin, np.zeros((2, 2)), atol=1e-15)
    h_quad = hessian_scalar(lambda u: u[0] * u[0] + u[1] * u[1], [0.2, 0.2], g)
    np.testing.assert_allclose(h_quad, 2.0 * np.eye(2), atol=1e-14)


def test_hessian_on_sphere(unit_sphere):
    u = [math.pi / 3, 0.0]
    _, g, _, _ = _pipeline(unit_sphere, u)
    h = hessian_scalar(lambda q: jets.cos(q[0]), u, g)
    assert h[0, 0] == pytest.approx(-0.5, abs=1e-13)
    assert np.max(np.abs(h - h.T)) == 0.0


def test_normal_connection_plane_constant_normal(plane):
    d_normal, d_tangent = normal_connection_derivative(
        plane, [0.1, 0.1], [1.0, 0.0], lambda u: np.array([0.0, 0.0, 1.0]))
    np.testing.assert_allclose(d_normal, np.zeros(3), atol=1e-12)
    np.testing.assert_allclose(d_tangent, np.zeros(3), atol=1e-12)


def test_normal_connection_sphere_radial_parallel(unit_sphere):
    u = [math.pi / 2, 0.0]
    d_normal, d_tangent = normal_connection_derivative(
        unit_sphere, u, [1.0, 0.0], unit_sphere.value)
    np.testing.assert_allclose(d_normal, np.zeros(3), atol=1e-8)
    # tangential part is -A_eta V = +V for A_eta = -identity
    np.testing.assert_allclose(d_tangent, [0.0, 0.0, -1.0], atol=1e-8)
