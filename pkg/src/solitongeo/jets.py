"""Second-order forward-mode jet arithmetic and its finite-difference oracle.

A ``Jet2`` carries a value, an n-vector of first partials and a symmetric
n x n matrix of second partials through arithmetic; seeding the chart
coordinates and pushing them through an immersion rule yields exact
(machine-precision) first and second derivatives in one pass.  The
finite-difference routines provide an independent O(step^2) cross-check
and are meant for tests and for quantities that live outside the jet
pipeline (normal-connection derivatives of sampled fields).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonFiniteError

__all__ = [
    "Jet2",
    "ImmersionDef",
    "ImmersionJet2",
    "seed_point",
    "evaluate_jet2",
    "finite_difference_jet2",
    "directional_derivative_field",
    "evaluate_scalar_jet2",
    "sin",
    "cos",
    "tan",
    "exp",
    "log",
    "sqrt",
    "sinh",
    "cosh",
    "tanh",
    "arctan",
]

DEFAULT_FD_STEP = 1e-4


@dataclass
class Jet2:
    """Truncated second-order polynomial scalar: value, gradient, Hessian."""

    val: float
    grad: np.ndarray
    hess: np.ndarray

    @property
    def n(self) -> int:
        return self.grad.shape[0]

    @staticmethod
    def constant(c: float, n: int) -> "Jet2":
        return Jet2(float(c), np.zeros(n), np.zeros((n, n)))

    @staticmethod
    def variable(c: float, i: int, n: int) -> "Jet2":
        g = np.zeros(n)
        g[i] = 1.0
        return Jet2(float(c), g, np.zeros((n, n)))

    def _coerce(self, other) -> "Jet2 | None":
        if isinstance(other, Jet2):
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Jet2.constant(float(other), self.n)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet2(self.val + o.val, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet2(self.val - o.val, self.grad - o.grad, self.hess - o.hess)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # outer(a,b) + outer(b,a) is exactly symmetric in IEEE arithmetic.
        hess = (
            self.val * o.hess
            + o.val * self.hess
            + np.outer(self.grad, o.grad)
            + np.outer(o.grad, self.grad)
        )
        return Jet2(self.val * o.val, self.val * o.grad + o.val * self.grad, hess)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * _chain(o, 1.0 / o.val, -1.0 / o.val**2, 2.0 / o.val**3)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, p):
        if not isinstance(p, (int, float, np.integer, np.floating)):
            return NotImplemented
        p = float(p)
        v = self.val
        if v == 0.0 and p < 2.0 and p != 1.0 and p != 0.0:
            raise ZeroDivisionError("jet power with vanishing base needs exponent in {0, 1} or >= 2")
        f1 = p * math.pow(v, p - 1.0) if p != 0.0 else 0.0
        f2 = p * (p - 1.0) * math.pow(v, p - 2.0) if p not in (0.0, 1.0) else 0.0
        return _chain(self, math.pow(v, p), f1, f2)


def _chain(x: Jet2, f0: float, f1: float, f2: float) -> Jet2:
    """Compose a scalar function (value f0, derivatives f1, f2 at x.val) with a jet."""
    return Jet2(f0, f1 * x.grad, f1 * x.hess + f2 * np.outer(x.grad, x.grad))


def _unary(x, f, f1, f2):
    if isinstance(x, Jet2):
        return _chain(x, f(x.val), f1(x.val), f2(x.val))
    return f(x)


def sin(x):
    return _unary(x, math.sin, math.cos, lambda v: -math.sin(v))


def cos(x):
    return _unary(x, math.cos, lambda v: -math.sin(v), lambda v: -math.cos(v))


def tan(x):
    return _unary(
        x, math.tan, lambda v: 1.0 / math.cos(v) ** 2, lambda v: 2.0 * math.tan(v) / math.cos(v) ** 2
    )


def exp(x):
    return _unary(x, math.exp, math.exp, math.exp)


def log(x):
    return _unary(x, math.log, lambda v: 1.0 / v, lambda v: -1.0 / v**2)


def sqrt(x):
    return _unary(
        x, math.sqrt, lambda v: 0.5 / math.sqrt(v), lambda v: -0.25 / math.sqrt(v) ** 3
    )


def sinh(x):
    return _unary(x, math.sinh, math.cosh, math.sinh)


def cosh(x):
    return _unary(x, math.cosh, math.sinh, math.cosh)


def tanh(x):
    return _unary(
        x,
        math.tanh,
        lambda v: 1.0 / math.cosh(v) ** 2,
        lambda v: -2.0 * math.tanh(v) / math.cosh(v) ** 2,
    )


def arctan(x):
    return _unary(
        x,
        math.atan,
        lambda v: 1.0 / (1.0 + v * v),
        lambda v: -2.0 * v / (1.0 + v * v) ** 2,
    )


def seed_point(u: np.ndarray) -> list[Jet2]:
    """Lift chart coordinates to jet variables (gradient = chart basis, Hessian = 0)."""
    u = np.asarray(u, dtype=float)
    n = u.shape[0]
    return [Jet2.variable(u[i], i, n) for i in range(n)]


@dataclass(frozen=True, eq=False)
class ImmersionDef:
    """A parametrized immersion of an n-dimensional chart into Euclidean m-space.

    ``rule`` maps a sequence of n scalars (floats or Jet2, uniformly) to m
    scalars; it must be written with the jet-dispatching functions of this
    module so that both plain evaluation and jet lifting work.  ``box`` is
    the closed valid parameter domain, one (lo, hi) row per chart axis.
    """

    n: int
    m: int
    rule: Callable[[Sequence], Sequence]
    box: np.ndarray
    name: str = ""

    def __post_init__(self):
        if not (self.m > self.n >= 1):
            raise ValueError(f"need m > n >= 1, got n={self.n}, m={self.m}")
        box = np.asarray(self.box, dtype=float)
        if box.shape != (self.n, 2):
            raise ValueError(f"box must have shape ({self.n}, 2), got {box.shape}")
        if not np.all(box[:, 0] < box[:, 1]):
            raise ValueError("box rows must satisfy lo < hi")
        object.__setattr__(self, "box", box)

    def contains(self, u: np.ndarray, slack: float = 1e-12) -> bool:
        u = np.asarray(u, dtype=float)
        return bool(
            np.all(u >= self.box[:, 0] - slack) and np.all(u <= self.box[:, 1] + slack)
        )

    def value(self, u: np.ndarray) -> np.ndarray:
        """Plain (derivative-free) evaluation of the immersion at u."""
        out = self.rule([float(c) for c in np.asarray(u, dtype=float)])
        x = np.array([float(c) for c in out], dtype=float)
        if x.shape != (self.m,):
            raise ValueError(f"rule returned {x.shape[0]} components, expected {self.m}")
        return x


@dataclass
class ImmersionJet2:
    """Value, first and second partials of an immersion at one chart point."""

    value: np.ndarray  # (m,)
    d1: np.ndarray  # (m, n), column i = d x / d u_i
    d2: np.ndarray  # (m, n, n), d2[:, i, j] = d^2 x / d u_i d u_j

    @property
    def n(self) -> int:
        return self.d1.shape[1]

    @property
    def m(self) -> int:
        return self.d1.shape[0]


def _check_point(imm: ImmersionDef, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (imm.n,):
        raise ValueError(f"parameter point must have {imm.n} coordinates, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise ValueError("parameter point has non-finite entries")
    if not imm.contains(u):
        raise DomainError(f"point {u.tolist()} outside domain of {imm.name or 'immersion'}")
    return u


def evaluate_jet2(imm: ImmersionDef, u) -> ImmersionJet2:
    """Exact value/d1/d2 of the immersion at u via second-order jet arithmetic."""
    u = _check_point(imm, u)
    out = imm.rule(seed_point(u))
    if len(out) != imm.m:
        raise ValueError(f"rule returned {len(out)} components, expected {imm.m}")
    value = np.empty(imm.m)
    d1 = np.empty((imm.m, imm.n))
    d2 = np.empty((imm.m, imm.n, imm.n))
    for a, comp in enumerate(out):
        if not isinstance(comp, Jet2):
            comp = Jet2.constant(float(comp), imm.n)
        value[a] = comp.val
        d1[a] = comp.grad
        d2[a] = comp.hess
    if not (np.all(np.isfinite(value)) and np.all(np.isfinite(d1)) and np.all(np.isfinite(d2))):
        raise NonFiniteError(f"immersion produced non-finite jet at {u.tolist()}")
    return ImmersionJet2(value, d1, d2)


def _axis_mode(imm: ImmersionDef, u: np.ndarray, i: int, step: float, reach: int) -> str:
    """Pick central/forward/backward so the whole stencil stays in the box."""
    lo, hi = imm.box[i]
    if u[i] - reach * step >= lo - 1e-12 and u[i] + reach * step <= hi + 1e-12:
        return "central"
    if u[i] + 2 * reach * step <= hi + 1e-12:
        return "forward"
    if u[i] - 2 * reach * step >= lo - 1e-12:
        return "backward"
    raise DomainError(
        f"finite-difference stencil leaves domain on axis {i} at {u.tolist()} (step={step})"
    )


def _shifted(u: np.ndarray, i: int, k: float, step: float) -> np.ndarray:
    v = u.copy()
    v[i] += k * step
    return v


def _fd1_axis(f, imm: ImmersionDef, u: np.ndarray, i: int, step: float) -> np.ndarray:
    """Second-order first derivative along chart axis i, one-sided near the boundary."""
    mode = _axis_mode(imm, u, i, step, reach=1)
    if mode == "central":
        return (f(_shifted(u, i, 1, step)) - f(_shifted(u, i, -1, step))) / (2 * step)
    if mode == "forward":
        return (
            -3.0 * f(u) + 4.0 * f(_shifted(u, i, 1, step)) - f(_shifted(u, i, 2, step))
        ) / (2 * step)
    return (
        3.0 * f(u) - 4.0 * f(_shifted(u, i, -1, step)) + f(_shifted(u, i, -2, step))
    ) / (2 * step)


def _fd2_diag(f, imm: ImmersionDef, u: np.ndarray, i: int, step: float) -> np.ndarray:
    lo, hi = imm.box[i]
    if u[i] - step >= lo - 1e-12 and u[i] + step <= hi + 1e-12:
        return (
            f(_shifted(u, i, 1, step)) - 2.0 * f(u) + f(_shifted(u, i, -1, step))
        ) / step**2
    if u[i] + 3 * step <= hi + 1e-12:
        return (
            2.0 * f(u)
            - 5.0 * f(_shifted(u, i, 1, step))
            + 4.0 * f(_shifted(u, i, 2, step))
            - f(_shifted(u, i, 3, step))
        ) / step**2
    if u[i] - 3 * step >= lo - 1e-12:
        return (
            2.0 * f(u)
            - 5.0 * f(_shifted(u, i, -1, step))
            + 4.0 * f(_shifted(u, i, -2, step))
            - f(_shifted(u, i, -3, step))
        ) / step**2
    raise DomainError(
        f"finite-difference stencil leaves domain on axis {i} at {u.tolist()} (step={step})"
    )


def finite_difference_jet2(imm: ImmersionDef, u, step: float = DEFAULT_FD_STEP) -> ImmersionJet2:
    """Central-difference approximation of evaluate_jet2 with O(step^2) error.

    Used only as an independent oracle in tests.  d2 is exactly symmetric by
    construction (cross terms computed once per unordered pair); near the
    domain boundary one-sided second-order stencils are used.
    """
    u = _check_point(imm, u)
    if not step > 0:
        raise ValueError("step must be positive")
    f = imm.value
    value = f(u)
    m, n = imm.m, imm.n
    d1 = np.empty((m, n))
    d2 = np.empty((m, n, n))
    for i in range(n):
        d1[:, i] = _fd1_axis(f, imm, u, i, step)
        d2[:, i, i] = _fd2_diag(f, imm, u, i, step)
    for i in range(n):
        for j in range(i + 1, n):
            # nested one-dimensional stencils stay domain-safe in both axes
            cross = _fd1_axis(
                lambda v: _fd1_axis(f, imm, v, j, step), imm, u, i, step
            )
            d2[:, i, j] = cross
            d2[:, j, i] = cross
    return ImmersionJet2(value, d1, d2)


def directional_derivative_field(
    field: Callable[[np.ndarray], np.ndarray],
    u,
    direction,
    step: float = DEFAULT_FD_STEP,
    box: np.ndarray | None = None,
) -> np.ndarray:
    """Central-difference derivative of an ambient-valued field along a chart direction.

    Computes d/dt field(u + t*direction) at t = 0 to O(step^2).  When ``box``
    is given the stencil is shifted one-sided if u +- step*direction leaves it.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(direction, dtype=float)
    if not np.linalg.norm(v) > 0:
        raise ValueError("direction must be nonzero")

    def inside(p: np.ndarray) -> bool:
        if box is None:
            return True
        b = np.asarray(box, dtype=float)
        return bool(np.all(p >= b[:, 0] - 1e-12) and np.all(p <= b[:, 1] + 1e-12))

    if inside(u + step * v) and inside(u - step * v):
        return (np.asarray(field(u + step * v)) - np.asarray(field(u - step * v))) / (2 * step)
    if inside(u + 2 * step * v):
        return (
            -3.0 * np.asarray(field(u))
            + 4.0 * np.asarray(field(u + step * v))
            - np.asarray(field(u + 2 * step * v))
        ) / (2 * step)
    if inside(u - 2 * step * v):
        return (
            3.0 * np.asarray(field(u))
            - 4.0 * np.asarray(field(u - step * v))
            + np.asarray(field(u - 2 * step * v))
        ) / (2 * step)
    raise DomainError("directional derivative stencil leaves domain")


def evaluate_scalar_jet2(f: Callable[[Sequence], object], u) -> tuple[float, np.ndarray, np.ndarray]:
    """Value, gradient and coordinate Hessian of a scalar chart function at u."""
    u = np.asarray(u, dtype=float)
    out = f(seed_point(u))
    if not isinstance(out, Jet2):
        out = Jet2.constant(float(out), u.shape[0])
    return out.val, out.grad.copy(), out.hess.copy()
