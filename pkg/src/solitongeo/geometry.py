"""Pointwise extrinsic geometry of an immersed submanifold.

Everything here is assembled from a single second-order jet of the
immersion: induced metric and Christoffel symbols, an orthonormal normal
frame, the second fundamental form and shape operators, curvature via the
Gauss equation (so no third derivatives are ever needed), the Weyl
conformal tensor, and Hessians of scalar chart functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import linalg as sla

from .errors import DegeneratePointError
from .jets import (
    DEFAULT_FD_STEP,
    ImmersionDef,
    ImmersionJet2,
    directional_derivative_field,
    evaluate_jet2,
    evaluate_scalar_jet2,
)

__all__ = [
    "MetricData",
    "NormalFrame",
    "SecondFundamentalForm",
    "CurvatureSummary",
    "WeylTensor",
    "induced_metric",
    "normal_frame",
    "second_fundamental_form",
    "shape_operator",
    "riemann_via_gauss",
    "weyl_tensor",
    "hessian_scalar",
    "normal_connection_derivative",
]

# seeds whose residual after tangential projection is below this are skipped
_FRAME_SEED_TOL = 1e-6
_TANGENT_REJECT_TOL = 1e-10


@dataclass
class MetricData:
    """Induced metric, inverse, determinant and Christoffel symbols at a point."""

    g: np.ndarray  # (n, n)
    g_inv: np.ndarray  # (n, n)
    det_g: float
    christoffel: np.ndarray  # (n, n, n), christoffel[k, i, j] = Gamma^k_ij
    cho: tuple  # cached Cholesky factor of g for solves

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve g @ a = rhs using the cached Cholesky factor."""
        return sla.cho_solve(self.cho, rhs)


@dataclass
class NormalFrame:
    """Orthonormal basis of the normal space, plus an orthonormal tangent basis.

    ``basis`` has one row per normal vector (shape (m-n, m)); ``tangent``
    holds an orthonormal basis of the tangent space as columns (m, n), used
    for projections.
    """

    basis: np.ndarray
    tangent: np.ndarray

    @property
    def codim(self) -> int:
        return self.basis.shape[0]

    def project_normal(self, w: np.ndarray) -> np.ndarray:
        return w - self.tangent @ (self.tangent.T @ w)

    def project_tangent(self, w: np.ndarray) -> np.ndarray:
        return self.tangent @ (self.tangent.T @ w)


@dataclass
class SecondFundamentalForm:
    """Frame coefficients h^a_ij of the second fundamental form and the mean curvature vector."""

    h_coeffs: np.ndarray  # (m-n, n, n)
    mean_curvature: np.ndarray  # (m,)
    frame: NormalFrame

    def pairing(self, eta: np.ndarray) -> np.ndarray:
        """Matrix <h(d_i, d_j), eta> for an ambient normal vector eta."""
        c = self.frame.basis @ np.asarray(eta, dtype=float)
        return np.einsum("a,aij->ij", c, self.h_coeffs)

    def vector(self, vi: np.ndarray, vj: np.ndarray) -> np.ndarray:
        """Ambient vector h(V, W) for chart vectors V, W."""
        coeffs = np.einsum("aij,i,j->a", self.h_coeffs, vi, vj)
        return self.frame.basis.T @ coeffs


@dataclass
class CurvatureSummary:
    """Curvature data from the Gauss equation.

    ``riemann[i, j, k, l]`` is the covariant tensor g(R(d_i, d_j) d_k, d_l);
    sectional curvatures are taken over the Gram-Schmidt orthonormalization
    of the chart basis, and the scalar curvature is the sum of sectional
    curvatures over ordered index pairs.
    """

    riemann: np.ndarray  # (n, n, n, n)
    sectional: np.ndarray  # (n, n), zero diagonal
    scalar: float
    ricci: np.ndarray  # (n, n)
    q_operator: np.ndarray  # (n, n)


@dataclass
class WeylTensor:
    """Conformal curvature tensor (standard coefficients) and its invariant norm."""

    c: np.ndarray  # (n, n, n, n), zeros when n < 4
    frobenius_norm: float
    applicable: bool  # False when n < 4 (dimension below the conformal threshold)


def induced_metric(jet: ImmersionJet2) -> MetricData:
    """Induced metric g_ij = <d_i x, d_j x> with inverse, det and Christoffel symbols.

    The Christoffel symbols are assembled from the metric derivatives
    d_k g_ij = <d2_ki, d1_j> + <d1_i, d2_kj>, which are exact given the jet.
    Raises DegeneratePointError when g is not positive definite.
    """
    d1, d2 = jet.d1, jet.d2
    g = d1.T @ d1
    try:
        cho = sla.cho_factor(g, lower=True)
    except sla.LinAlgError as exc:
        raise DegeneratePointError(f"induced metric is singular: {exc}") from exc
    det_g = float(np.linalg.det(g))
    if not det_g > 0:
        raise DegeneratePointError("induced metric has non-positive determinant")
    g_inv = sla.cho_solve(cho, np.eye(g.shape[0]))
    # dg[k, i, j] = d_k g_ij
    dg = np.einsum("aki,aj->kij", d2, d1) + np.einsum("ai,akj->kij", d1, d2)
    # Gamma^l_ij = 1/2 g^{lk} (d_i g_jk + d_j g_ik - d_k g_ij)
    gamma_lower = 0.5 * (
        np.einsum("ijk->kij", dg) + np.einsum("jik->kij", dg) - dg
    )  # gamma_lower[k, i, j] = [ij, k]
    christoffel = np.einsum("lk,kij->lij", g_inv, gamma_lower)
    return MetricData(g=g, g_inv=g_inv, det_g=det_g, christoffel=christoffel, cho=cho)


def normal_frame(jet: ImmersionJet2) -> NormalFrame:
    """Deterministic orthonormal completion of the tangent space.

    Modified Gram-Schmidt over the ambient standard basis in index order,
    skipping seeds whose residual after projection is shorter than 1e-6.
    """
    m, n = jet.m, jet.n
    q, _ = np.linalg.qr(jet.d1)
    if np.linalg.matrix_rank(jet.d1, tol=1e-10) < n:
        raise DegeneratePointError("differential is rank deficient; no normal frame")
    normals: list[np.ndarray] = []
    for k in range(m):
        if len(normals) == m - n:
            break
        w = np.zeros(m)
        w[k] = 1.0
        # two projection passes for orthogonality at the 1e-14 level
        for _ in range(2):
            w = w - q @ (q.T @ w)
            for eta in normals:
                w = w - np.dot(eta, w) * eta
        norm = np.linalg.norm(w)
        if norm < _FRAME_SEED_TOL:
            continue
        normals.append(w / norm)
    if len(normals) != m - n:
        raise DegeneratePointError("could not complete normal frame from standard seeds")
    return NormalFrame(basis=np.array(normals), tangent=q)


def second_fundamental_form(
    jet: ImmersionJet2, g: MetricData, frame: NormalFrame
) -> SecondFundamentalForm:
    """h^a_ij = <d2_ij, eta_a> and the mean curvature vector H = (1/n) g^{ij} h_ij."""
    h = np.einsum("am,mij->aij", frame.basis, jet.d2)
    trace = np.einsum("ij,aij->a", g.g_inv, h)
    mean = frame.basis.T @ trace / jet.n
    return SecondFundamentalForm(h_coeffs=h, mean_curvature=mean, frame=frame)


def shape_operator(sff: SecondFundamentalForm, g: MetricData, eta: np.ndarray) -> np.ndarray:
    """Matrix of A_eta in the chart basis, defined by g(A_eta X, Y) = <h(X, Y), eta>.

    ``eta`` must lie in the normal space; a tangential component larger than
    1e-10 (relative to |eta|) is rejected.
    """
    eta = np.asarray(eta, dtype=float)
    tang = sff.frame.project_tangent(eta)
    if np.linalg.norm(tang) > _TANGENT_REJECT_TOL * max(1.0, np.linalg.norm(eta)):
        raise ValueError("eta has a nonzero tangential part; not a normal vector")
    return g.solve(sff.pairing(eta))


def _orthonormal_chart_frame(g: np.ndarray) -> np.ndarray:
    """Columns = g-orthonormalized chart basis (Gram-Schmidt in index order)."""
    n = g.shape[0]
    frame = np.zeros((n, n))
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        for j in range(i):
            v = v - (frame[:, j] @ (g @ v)) * frame[:, j]
        norm2 = float(v @ (g @ v))
        if norm2 <= 0:
            raise DegeneratePointError("metric not positive definite in chart frame")
        frame[:, i] = v / np.sqrt(norm2)
    return frame


def riemann_via_gauss(sff: SecondFundamentalForm, g: MetricData) -> CurvatureSummary:
    """Curvature purely from the second fundamental form.

    g(R(X,Y)Z, W) = <h(X,W), h(Y,Z)> - <h(X,Z), h(Y,W)> for a flat ambient
    space, so riemann[i,j,k,l] = sum_a h^a_il h^a_jk - h^a_ik h^a_jl.
    """
    h = sff.h_coeffs
    riemann = np.einsum("ail,ajk->ijkl", h, h) - np.einsum("aik,ajl->ijkl", h, h)
    n = g.n
    e = _orthonormal_chart_frame(g.g)
    # K_ij = R(e_i, e_j, e_j, e_i)
    sectional = np.einsum("abcd,ai,bj,cj,di->ij", riemann, e, e, e, e)
    np.fill_diagonal(sectional, 0.0)
    scalar = float(np.sum(sectional))
    ricci = np.einsum("il,ijkl->jk", g.g_inv, riemann)
    q_operator = g.g_inv @ ricci
    return CurvatureSummary(
        riemann=riemann,
        sectional=sectional,
        scalar=scalar,
        ricci=ricci,
        q_operator=q_operator,
    )


def weyl_tensor(curv: CurvatureSummary, g: MetricData) -> WeylTensor:
    """Standard-coefficient Weyl conformal tensor; a flagged zero for n < 4.

    The reported norm is the g-invariant Frobenius norm (all four indices
    raised with g^{-1}), so it is chart independent.
    """
    n = g.n
    if n < 4:
        return WeylTensor(c=np.zeros((n, n, n, n)), frobenius_norm=0.0, applicable=False)
    gm, ric, r = g.g, curv.ricci, curv.scalar
    ric_term = (
        np.einsum("il,jk->ijkl", gm, ric)
        - np.einsum("ik,jl->ijkl", gm, ric)
        + np.einsum("jk,il->ijkl", gm, ric)
        - np.einsum("jl,ik->ijkl", gm, ric)
    ) / (n - 2)
    scal_term = (
        r
        / ((n - 1) * (n - 2))
        * (np.einsum("il,jk->ijkl", gm, gm) - np.einsum("ik,jl->ijkl", gm, gm))
    )
    c = curv.riemann - ric_term + scal_term
    gi = g.g_inv
    norm2 = float(np.einsum("ijkl,abcd,ia,jb,kc,ld->", c, c, gi, gi, gi, gi))
    return WeylTensor(c=c, frobenius_norm=float(np.sqrt(max(norm2, 0.0))), applicable=True)


def hessian_scalar(f: Callable, u, g: MetricData) -> np.ndarray:
    """Covariant Hessian of a scalar chart function: H^f_ij = d_i d_j f - Gamma^k_ij d_k f."""
    _, grad, hess = evaluate_scalar_jet2(f, u)
    return hess - np.einsum("kij,k->ij", g.christoffel, grad)


def normal_connection_derivative(
    imm: ImmersionDef,
    u,
    direction,
    eta_field: Callable[[np.ndarray], np.ndarray],
    step: float = DEFAULT_FD_STEP,
) -> tuple[np.ndarray, np.ndarray]:
    """Normal-connection derivative D_V eta of a normal field along a chart direction.

    The ambient directional derivative of ``eta_field`` is computed by
    central differences and split at u into its normal part (returned first,
    this is D_V eta) and its tangential part (returned second; for a normal
    field it equals -A_eta V and is useful for cross-checks).
    """
    u = np.asarray(u, dtype=float)
    ambient = directional_derivative_field(eta_field, u, direction, step=step, box=imm.box)
    frame = normal_frame(evaluate_jet2(imm, u))
    return frame.project_normal(ambient), frame.project_tangent(ambient)
