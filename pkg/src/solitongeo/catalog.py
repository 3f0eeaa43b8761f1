"""Closed-form surface catalog with analytic expectations.

Each surface kind builds an ImmersionDef from a small parameter set, and
``expected`` returns the analytically known verdicts and constants for it
(position type, soliton constants, per-point scalar curvature and mu
formulas).  These expectations are the ground truth the verification
pipeline is compared against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import jets
from .jets import ImmersionDef
from .solitons import (
    CLASS_HYPERPLANE,
    CLASS_NA,
    CLASS_ORIGIN_SPHERE,
    POSITION_CONIC,
    POSITION_PROPER,
    POSITION_SPHERICAL,
    SECTION_PARALLEL,
    SIGN_EXPANDING,
    SIGN_SHRINKING,
    SIGN_STEADY,
    TORSE_CONCIRCULAR,
    TORSE_PROPER,
    TORSE_UNDERDETERMINED,
    VERDICT_NOT,
    VERDICT_QUASI,
    VERDICT_UNDERDETERMINED,
    VERDICT_YAMABE,
)

__all__ = [
    "SurfaceSpec",
    "Expectation",
    "KINDS",
    "PROFILES",
    "CATALOG",
    "make_surface",
    "expected",
    "sample_points",
]

KINDS = (
    "hyperplane",
    "sphere",
    "cylinder",
    "cone",
    "rotational",
    "clifford_torus",
    "spherical_curve",
)

# named profile functions for the rotational family; each maps a jet or
# float u (plus the coefficient) to the radius of the sphere factor
PROFILES = {
    "constant": lambda u, c: c + 0.0 * u,
    "linear": lambda u, c: c * u,
    "catenary": lambda u, c: jets.cosh(u),
    "parabola": lambda u, c: 1.0 + u * u,
}

# analytic profile data (value, first, second derivative) for expectations
_PROFILE_DERIVS = {
    "constant": lambda u, c: (c, 0.0, 0.0),
    "linear": lambda u, c: (c * u, c, 0.0),
    "catenary": lambda u, c: (math.cosh(u), math.sinh(u), math.cosh(u)),
    "parabola": lambda u, c: (1.0 + u * u, 2.0 * u, 2.0),
}


@dataclass(frozen=True, eq=False)
class SurfaceSpec:
    """Parameter bundle for one catalog surface."""

    kind: str
    n: int = 2
    params: dict = dc_field(default_factory=dict)
    box: np.ndarray | None = None  # (n, 2); kind default when None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown surface kind {self.kind!r}; valid: {KINDS}")
        if self.box is not None:
            object.__setattr__(self, "box", np.asarray(self.box, dtype=float))


@dataclass(frozen=True, eq=False)
class Expectation:
    """Analytic ground truth for one surface; None fields are unconstrained."""

    position_type: str | None = None
    yamabe_verdict: str | None = None
    yamabe_lambda: float | None = None
    soliton_sign: str | None = None
    quasi_verdict: str | None = None  # fit verdict, or "error" when the fit must raise
    quasi_lambda: float | None = None
    mu_formula: Callable[[np.ndarray], float] | None = None
    hypersurface_class: str | None = None
    scalar_curvature: Callable[[np.ndarray], float] | None = None
    torse_verdict: str | None = None  # or "error" when the fit must raise
    normal_section: str | None = None
    conformally_flat: bool | None = None


def _param(spec: SurfaceSpec, key: str, default=None):
    return spec.params.get(key, default)


def _angle_box(n_angles: int) -> list[list[float]]:
    """Polar-angle boxes: 0.1 rad pole margin, near-full last angle."""
    box = [[0.1, math.pi - 0.1] for _ in range(n_angles - 1)]
    box.append([0.05, 2.0 * math.pi - 0.05])
    return box


def _unit_sphere_components(angles: list) -> list:
    """Hyperspherical chart of S^{k} from k angles (k+1 components)."""
    comps = []
    prefix = 1.0
    for t in angles:
        comps.append(prefix * jets.cos(t))
        prefix = prefix * jets.sin(t)
    comps.append(prefix)
    return comps


def make_surface(spec: SurfaceSpec, name: str = "") -> ImmersionDef:
    """Build the ImmersionDef for a surface spec; validates kind parameters."""
    kind, n = spec.kind, spec.n
    if kind == "hyperplane":
        offset = float(_param(spec, "offset", 0.0))
        box = spec.box if spec.box is not None else [[-1.0, 1.0]] * n

        def rule(u, _c=offset):
            return list(u) + [_c]

        return ImmersionDef(n=n, m=n + 1, rule=rule, box=box, name=name or f"hyperplane(n={n})")

    if kind == "sphere":
        r = float(_param(spec, "radius", 1.0))
        if not r > 0:
            raise ValueError("sphere radius must be positive")
        center = np.asarray(_param(spec, "center", np.zeros(n + 1)), dtype=float)
        if center.shape != (n + 1,):
            raise ValueError(f"sphere center must have {n + 1} components")
        box = spec.box if spec.box is not None else _angle_box(n)

        def rule(u, _r=r, _c=center):
            return [_r * comp + ck for comp, ck in zip(_unit_sphere_components(list(u)), _c)]

        return ImmersionDef(n=n, m=n + 1, rule=rule, box=box, name=name or f"sphere(n={n},r={r})")

    if kind == "cylinder":
        r = float(_param(spec, "radius", 1.0))
        if not r > 0:
            raise ValueError("cylinder radius must be positive")
        if n != 2:
            raise ValueError("cylinder is a 2-dimensional chart")
        box = spec.box if spec.box is not None else [[0.05, 2 * math.pi - 0.05], [0.5, 2.0]]

        def rule(u, _r=r):
            phi, z = u
            return [_r * jets.cos(phi), _r * jets.sin(phi), z]

        return ImmersionDef(n=2, m=3, rule=rule, box=box, name=name or f"cylinder(r={r})")

    if kind == "cone":
        k = float(_param(spec, "slope", 1.0))
        if k == 0.0:
            raise ValueError("cone slope must be nonzero")
        if n != 2:
            raise ValueError("cone is a 2-dimensional chart")
        box = spec.box if spec.box is not None else [[0.5, 2.0], [0.05, 2 * math.pi - 0.05]]

        def rule(u, _k=k):
            s, phi = u
            return [_k * s * jets.cos(phi), _k * s * jets.sin(phi), s]

        return ImmersionDef(n=2, m=3, rule=rule, box=box, name=name or f"cone(slope={k})")

    if kind == "rotational":
        profile = _param(spec, "profile", "catenary")
        if profile not in PROFILES:
            raise ValueError(f"unknown profile {profile!r}; valid: {tuple(PROFILES)}")
        coeff = float(_param(spec, "coeff", 1.0))
        if profile in ("constant", "linear") and coeff == 0.0:
            raise ValueError("constant/linear profile coefficient must be nonzero")
        if spec.box is not None:
            box = spec.box
        else:
            u_box = {
                "constant": [0.5, 2.0],
                "linear": [0.5, 2.0],
                "catenary": [0.3, 1.1],
                "parabola": [0.2, 0.9],
            }[profile]
            box = [u_box] + _angle_box(n - 1)
        g_fn = PROFILES[profile]
        lo, hi = float(np.asarray(box, dtype=float)[0, 0]), float(np.asarray(box, dtype=float)[0, 1])
        for u0 in np.linspace(lo, hi, 17):
            if not float(g_fn(float(u0), coeff)) > 0:
                raise ValueError("rotational profile must be positive on the parameter box")

        def rule(u, _g=g_fn, _c=coeff):
            s = u[0]
            radius = _g(s, _c)
            comps = _unit_sphere_components(list(u[1:]))
            return [radius * y for y in comps] + [s]

        return ImmersionDef(
            n=n, m=n + 1, rule=rule, box=box, name=name or f"rotational({profile})"
        )

    if kind == "clifford_torus":
        r = float(_param(spec, "radius", 1.0))
        if not r > 0:
            raise ValueError("clifford torus radius must be positive")
        if n != 2:
            raise ValueError("clifford torus is a 2-dimensional chart")
        box = (
            spec.box
            if spec.box is not None
            else [[0.05, 2 * math.pi - 0.05], [0.05, 2 * math.pi - 0.05]]
        )
        a = r / math.sqrt(2.0)

        def rule(u, _a=a):
            s, t = u
            return [_a * jets.cos(s), _a * jets.sin(s), _a * jets.cos(t), _a * jets.sin(t)]

        return ImmersionDef(n=2, m=4, rule=rule, box=box, name=name or f"clifford_torus(r={r})")

    if kind == "spherical_curve":
        r = float(_param(spec, "radius", 1.0))
        if not r > 0:
            raise ValueError("spherical curve radius must be positive")
        tilt = float(_param(spec, "tilt", 0.6))
        if n != 1:
            raise ValueError("spherical curve is a 1-dimensional chart")
        box = spec.box if spec.box is not None else [[0.05, 2 * math.pi - 0.05]]
        ca, sa = math.cos(tilt), math.sin(tilt)

        def rule(u, _r=r, _ca=ca, _sa=sa):
            (t,) = u
            return [_r * _ca * jets.cos(t), _r * _ca * jets.sin(t), _r * _sa]

        return ImmersionDef(n=1, m=3, rule=rule, box=box, name=name or f"spherical_curve(r={r})")

    raise ValueError(f"unknown surface kind {kind!r}")


def _rotational_scalar_curvature(profile: str, coeff: float) -> Callable[[np.ndarray], float]:
    """R(u) = -2 g''/(g (1 + g'^2)^2) for a 2-dimensional rotational chart."""

    def formula(u: np.ndarray) -> float:
        g0, g1, g2 = _PROFILE_DERIVS[profile](float(u[0]), coeff)
        return -2.0 * g2 / (g0 * (1.0 + g1 * g1) ** 2)

    return formula


def expected(spec: SurfaceSpec) -> Expectation:
    """Analytic expectations for a surface spec."""
    kind, n = spec.kind, spec.n
    zero = lambda u: 0.0  # noqa: E731

    if kind == "hyperplane":
        offset = float(_param(spec, "offset", 0.0))
        return Expectation(
            position_type=POSITION_CONIC if offset == 0.0 else POSITION_PROPER,
            yamabe_verdict=VERDICT_YAMABE,
            yamabe_lambda=-1.0,
            soliton_sign=SIGN_EXPANDING,
            quasi_verdict=VERDICT_UNDERDETERMINED if n == 1 else VERDICT_QUASI,
            quasi_lambda=None if n == 1 else -1.0,
            mu_formula=None if n == 1 else zero,
            hypersurface_class=CLASS_HYPERPLANE,
            scalar_curvature=zero,
            torse_verdict=TORSE_UNDERDETERMINED if n == 1 else TORSE_CONCIRCULAR,
            conformally_flat=True if n >= 4 else None,
        )

    if kind == "sphere":
        r = float(_param(spec, "radius", 1.0))
        center = np.asarray(_param(spec, "center", np.zeros(n + 1)), dtype=float)
        r_const = n * (n - 1) / r**2
        curvature = lambda u, _v=r_const: _v  # noqa: E731
        if float(np.linalg.norm(center)) == 0.0:
            return Expectation(
                position_type=POSITION_SPHERICAL,
                yamabe_verdict=VERDICT_YAMABE,
                yamabe_lambda=r_const if n > 1 else 0.0,
                soliton_sign=SIGN_SHRINKING if n > 1 else SIGN_STEADY,
                quasi_verdict="error",
                hypersurface_class=CLASS_ORIGIN_SPHERE,
                scalar_curvature=curvature,
                torse_verdict="error",
                conformally_flat=True if n >= 4 else None,
            )
        return Expectation(
            position_type=POSITION_PROPER,
            yamabe_verdict=VERDICT_NOT,
            quasi_verdict=VERDICT_NOT,
            hypersurface_class=CLASS_NA,
            scalar_curvature=curvature,
            torse_verdict=TORSE_CONCIRCULAR,
            conformally_flat=True if n >= 4 else None,
        )

    if kind == "cylinder":
        return Expectation(
            position_type=POSITION_PROPER,
            yamabe_verdict=VERDICT_NOT,
            quasi_verdict=VERDICT_QUASI,
            quasi_lambda=0.0,
            mu_formula=lambda u: 1.0 / float(u[1]) ** 2,
            hypersurface_class=CLASS_NA,
            scalar_curvature=zero,
            torse_verdict=TORSE_PROPER,
        )

    if kind == "cone":
        # satisfies the plain soliton identity with lambda = -1, but the
        # hypersurface classification bucket for it is missing; see README
        return Expectation(
            position_type=POSITION_CONIC,
            yamabe_verdict=VERDICT_YAMABE,
            yamabe_lambda=-1.0,
            soliton_sign=SIGN_EXPANDING,
            quasi_verdict=VERDICT_QUASI,
            quasi_lambda=-1.0,
            mu_formula=zero,
            scalar_curvature=zero,
            torse_verdict=TORSE_CONCIRCULAR,
        )

    if kind == "rotational":
        profile = _param(spec, "profile", "catenary")
        coeff = float(_param(spec, "coeff", 1.0))
        if n != 2:
            raise ValueError("expectations for the rotational family cover n = 2 only")
        curvature = _rotational_scalar_curvature(profile, coeff)
        if profile == "constant":
            return Expectation(
                position_type=POSITION_PROPER,
                yamabe_verdict=VERDICT_NOT,
                quasi_verdict=VERDICT_QUASI,
                quasi_lambda=0.0,
                mu_formula=lambda u: 1.0 / float(u[0]) ** 2,
                hypersurface_class=CLASS_NA,
                scalar_curvature=curvature,
                torse_verdict=TORSE_PROPER,
            )
        if profile == "linear":
            return Expectation(
                position_type=POSITION_CONIC,
                yamabe_verdict=VERDICT_YAMABE,
                yamabe_lambda=-1.0,
                soliton_sign=SIGN_EXPANDING,
                quasi_verdict=VERDICT_QUASI,
                quasi_lambda=-1.0,
                mu_formula=zero,
                scalar_curvature=curvature,
                torse_verdict=TORSE_CONCIRCULAR,
            )
        return Expectation(
            position_type=POSITION_PROPER,
            yamabe_verdict=VERDICT_NOT,
            quasi_verdict=VERDICT_NOT,
            hypersurface_class=CLASS_NA,
            scalar_curvature=curvature,
            torse_verdict=TORSE_PROPER,
        )

    if kind == "clifford_torus":
        return Expectation(
            position_type=POSITION_SPHERICAL,
            yamabe_verdict=VERDICT_YAMABE,
            yamabe_lambda=0.0,
            soliton_sign=SIGN_STEADY,
            quasi_verdict="error",
            scalar_curvature=zero,
            torse_verdict="error",
            normal_section=SECTION_PARALLEL,
        )

    if kind == "spherical_curve":
        return Expectation(
            position_type=POSITION_SPHERICAL,
            yamabe_verdict=VERDICT_YAMABE,
            yamabe_lambda=0.0,
            soliton_sign=SIGN_STEADY,
            quasi_verdict="error",
            scalar_curvature=zero,
            torse_verdict="error",
            normal_section=SECTION_PARALLEL,
        )

    raise ValueError(f"unknown surface kind {kind!r}")


# named default instances, iterated in this order by "all-catalog" runs
CATALOG: dict[str, SurfaceSpec] = {
    "plane-origin": SurfaceSpec("hyperplane", n=2, params={"offset": 0.0}),
    "plane-z1": SurfaceSpec("hyperplane", n=2, params={"offset": 1.0}),
    "plane-4d": SurfaceSpec("hyperplane", n=4, params={"offset": 1.0}),
    "sphere-r1": SurfaceSpec("sphere", n=2, params={"radius": 1.0}),
    "sphere-r2": SurfaceSpec("sphere", n=2, params={"radius": 2.0}),
    "sphere-3d-r1": SurfaceSpec("sphere", n=3, params={"radius": 1.0}),
    "sphere-3d-r05": SurfaceSpec("sphere", n=3, params={"radius": 0.5}),
    "sphere-4d-r1": SurfaceSpec("sphere", n=4, params={"radius": 1.0}),
    "sphere-offcenter": SurfaceSpec(
        "sphere", n=2, params={"radius": 1.0, "center": (0.0, 0.0, 2.0)}
    ),
    "cylinder-r1": SurfaceSpec("cylinder", n=2, params={"radius": 1.0}),
    "cone-unit": SurfaceSpec("cone", n=2, params={"slope": 1.0}),
    "rotational-constant": SurfaceSpec(
        "rotational", n=2, params={"profile": "constant", "coeff": 1.0}
    ),
    "rotational-linear": SurfaceSpec(
        "rotational", n=2, params={"profile": "linear", "coeff": 1.0}
    ),
    "rotational-catenary": SurfaceSpec("rotational", n=2, params={"profile": "catenary"}),
    "rotational-parabola": SurfaceSpec("rotational", n=2, params={"profile": "parabola"}),
    "clifford-torus": SurfaceSpec("clifford_torus", n=2, params={"radius": 1.0}),
    "spherical-curve": SurfaceSpec(
        "spherical_curve", n=1, params={"radius": 1.0, "tilt": 0.6}
    ),
}

# relative margin by which sampling shrinks away from the closed box boundary
_SAMPLE_MARGIN = 1e-3


def sample_points(
    box: np.ndarray,
    grid: int = 5,
    random_count: int = 20,
    rng: np.random.Generator | None = None,
) -> list[np.ndarray]:
    """Tensor-product grid plus seeded uniform points, deduplicated.

    Both parts stay a relative margin of 1e-3 inside the box so that
    finite-difference stencils remain valid.  Ordering is grid-major (first
    axis slowest) followed by the random points in generation order.
    """
    box = np.asarray(box, dtype=float)
    if grid < 2:
        raise ValueError("grid resolution must be at least 2 per axis")
    width = box[:, 1] - box[:, 0]
    lo = box[:, 0] + _SAMPLE_MARGIN * width
    hi = box[:, 1] - _SAMPLE_MARGIN * width
    axes = [np.linspace(lo[i], hi[i], grid) for i in range(box.shape[0])]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = [np.array(p) for p in zip(*(m.ravel() for m in mesh))]
    if random_count > 0:
        if rng is None:
            rng = np.random.default_rng(0)
        rand = rng.uniform(lo, hi, size=(random_count, box.shape[0]))
        points.extend(np.array(p) for p in rand)
    seen = set()
    unique = []
    for p in points:
        key = tuple(p.tolist())
        if key in seen:
            continue
        seen.add(key)
        unique.append(p)
    return unique
