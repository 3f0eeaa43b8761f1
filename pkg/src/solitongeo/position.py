"""Tangential/normal splitting of the position vector field and its identities.

The position of an immersed point, read as an ambient vector, splits into a
tangential part (a vector field on the chart) and a normal part.  The
structural identities verified here are consequences of the concurrence of
the ambient position field: its derivative along any tangent direction is
that direction itself, which forces a fixed relation between the covariant
derivative of the tangential part, the shape operator of the normal part,
and the Lie derivative of the metric.  They hold exactly in theory, so any
persistent residual is an implementation bug.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    MetricData,
    NormalFrame,
    SecondFundamentalForm,
    induced_metric,
    normal_connection_derivative,
    normal_frame,
    second_fundamental_form,
)
from .jets import (
    DEFAULT_FD_STEP,
    ImmersionDef,
    ImmersionJet2,
    directional_derivative_field,
    evaluate_jet2,
)

__all__ = [
    "PositionSplit",
    "IdentityReport",
    "split_position",
    "xt_coordinate_jacobian",
    "covariant_xt_jacobian",
    "tangent_covariant_derivative",
    "lie_derivative_metric",
    "verify_structural_identities",
]


@dataclass
class PositionSplit:
    """Decomposition x = x^T + x^N of the position vector at one point."""

    xt_coords: np.ndarray  # (n,) chart components of x^T
    xt_ambient: np.ndarray  # (m,)
    xn_ambient: np.ndarray  # (m,)
    xt_norm: float
    xn_norm: float


@dataclass
class IdentityReport:
    """Residuals of the structural identities at one point.

    ``ad`` residuals come from exact jet-pipeline derivatives (machine
    precision class); ``fd`` residuals route through central differences
    (O(step^2) class).
    """

    reconstruction: float  # | x - (x^T + x^N) |
    concurrence_fd: float  # | FD d_V x - V_ambient |, max over basis directions
    covariant_ad: float  # | nabla_V x^T - A_{x^N} V - V |, pushed to ambient
    normal_part_ad: float  # | h(V, x^T) + D_V x^N |, exact derivative route
    normal_part_fd: float  # | h(V, x^T) + D_V x^N |, FD normal-connection route
    lie_metric_ad: float  # | (L_{x^T} g)(V,W) - 2 g(V,W) - 2 <h(V,W), x^N> |

    def max_ad(self) -> float:
        return max(self.reconstruction, self.covariant_ad, self.normal_part_ad, self.lie_metric_ad)

    def max_fd(self) -> float:
        return max(self.concurrence_fd, self.normal_part_fd)


def split_position(jet: ImmersionJet2, g: MetricData) -> PositionSplit:
    """Project the position vector onto the tangent space (Cholesky solve on g)."""
    a = g.solve(jet.d1.T @ jet.value)
    xt = jet.d1 @ a
    xn = jet.value - xt
    xt_norm = float(np.sqrt(max(a @ (g.g @ a), 0.0)))
    return PositionSplit(
        xt_coords=a,
        xt_ambient=xt,
        xn_ambient=xn,
        xt_norm=xt_norm,
        xn_norm=float(np.linalg.norm(xn)),
    )


def xt_coordinate_jacobian(jet: ImmersionJet2, g: MetricData, split: PositionSplit) -> np.ndarray:
    """Exact partials da[i, k] = d_i a^k of the chart components of x^T.

    Differentiating g a = d1^T x gives
    d_i a = g^{-1} (d_i (d1^T x) - (d_i g) a), and both right-hand terms are
    available from the second-order jet:
    d_i (d1^T x)_j = <d2_ij, x> + g_ij and d_i g_jk = <d2_ij, d1_k> + <d1_j, d2_ik>.
    """
    d1, d2, x = jet.d1, jet.d2, jet.value
    a = split.xt_coords
    db = np.einsum("aij,a->ij", d2, x) + g.g  # db[i, j] = d_i (d1^T x)_j
    dg = np.einsum("aij,ak->ijk", d2, d1) + np.einsum("aj,aik->ijk", d1, d2)  # d_i g_jk
    rhs = db - np.einsum("ijk,k->ij", dg, a)
    return g.solve(rhs.T).T


def covariant_xt_jacobian(jet: ImmersionJet2, g: MetricData, split: PositionSplit) -> np.ndarray:
    """Matrix M[i, k] = (nabla_{d_i} x^T)^k = d_i a^k + Gamma^k_ij a^j."""
    da = xt_coordinate_jacobian(jet, g, split)
    return da + np.einsum("kij,j->ik", g.christoffel, split.xt_coords)


def tangent_covariant_derivative(imm: ImmersionDef, u, direction) -> np.ndarray:
    """Chart components of nabla_V x^T at u, computed exactly from the jet pipeline."""
    jet = evaluate_jet2(imm, u)
    g = induced_metric(jet)
    split = split_position(jet, g)
    m = covariant_xt_jacobian(jet, g, split)
    return np.asarray(direction, dtype=float) @ m


def xn_ambient_jacobian(
    jet: ImmersionJet2, g: MetricData, split: PositionSplit
) -> np.ndarray:
    """Exact ambient partials dxn[i, :] = d_i x^N = d_i x - d_i (d1 a)."""
    da = xt_coordinate_jacobian(jet, g, split)
    a = split.xt_coords
    d_xt = np.einsum("ij,aj->ia", da, jet.d1) + np.einsum("aij,j->ia", jet.d2, a)
    return jet.d1.T - d_xt


def lie_derivative_metric(imm: ImmersionDef, u, v, w) -> float:
    """(L_{x^T} g)(V, W) = g(nabla_V x^T, W) + g(nabla_W x^T, V).

    Uses the covariant-derivative formula directly, not the second
    fundamental form shortcut (the shortcut is what gets verified against
    this).  Symmetric in (V, W) by construction.
    """
    jet = evaluate_jet2(imm, u)
    g = induced_metric(jet)
    split = split_position(jet, g)
    m = covariant_xt_jacobian(jet, g, split)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    return float((v @ m) @ (g.g @ w) + (w @ m) @ (g.g @ v))


def _pointwise(imm: ImmersionDef, u):
    jet = evaluate_jet2(imm, u)
    g = induced_metric(jet)
    frame = normal_frame(jet)
    sff = second_fundamental_form(jet, g, frame)
    split = split_position(jet, g)
    return jet, g, frame, sff, split


def verify_structural_identities(
    imm: ImmersionDef, u, step: float = DEFAULT_FD_STEP
) -> IdentityReport:
    """Residuals of the position-field identities at one point (see IdentityReport)."""
    u = np.asarray(u, dtype=float)
    jet, g, frame, sff, split = _pointwise(imm, u)
    n = jet.n

    reconstruction = float(
        np.max(np.abs(jet.value - split.xt_ambient - split.xn_ambient))
    )

    # concurrence: the ambient derivative of the position along d_i is d_i x itself
    concurrence = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        d = directional_derivative_field(imm.value, u, e, step=step, box=imm.box)
        concurrence = max(concurrence, float(np.max(np.abs(d - jet.d1[:, i]))))

    # covariant identity: nabla_V x^T = A_{x^N} V + V
    m = covariant_xt_jacobian(jet, g, split)
    shape_xn = g.solve(sff.pairing(split.xn_ambient))
    covariant = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        res_chart = m[i, :] - shape_xn @ e - e
        covariant = max(covariant, float(np.max(np.abs(jet.d1 @ res_chart))))

    # normal identity: h(V, x^T) = -D_V x^N, exact route and FD route
    dxn = xn_ambient_jacobian(jet, g, split)
    normal_ad = 0.0
    normal_fd = 0.0

    def xn_field(p: np.ndarray) -> np.ndarray:
        jp = evaluate_jet2(imm, p)
        gp = induced_metric(jp)
        return split_position(jp, gp).xn_ambient

    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        h_vxt = sff.vector(e, split.xt_coords)
        d_exact = frame.project_normal(dxn[i])
        normal_ad = max(normal_ad, float(np.max(np.abs(h_vxt + d_exact))))
        d_fd, _ = normal_connection_derivative(imm, u, e, xn_field, step=step)
        normal_fd = max(normal_fd, float(np.max(np.abs(h_vxt + d_fd))))

    # Lie derivative identity: (L_{x^T} g)(V,W) = 2 g(V,W) + 2 <h(V,W), x^N>
    pairing = sff.pairing(split.xn_ambient)
    lie = 0.0
    for i in range(n):
        for j in range(i, n):
            lhs = float(m[i, :] @ (g.g[:, j]) + m[j, :] @ (g.g[:, i]))
            rhs = 2.0 * g.g[i, j] + 2.0 * pairing[i, j]
            lie = max(lie, float(abs(lhs - rhs)))

    return IdentityReport(
        reconstruction=reconstruction,
        concurrence_fd=concurrence,
        covariant_ad=covariant,
        normal_part_ad=normal_ad,
        normal_part_fd=normal_fd,
        lie_metric_ad=lie,
    )
