"""Batch driver: parse a run config, sample surfaces, verify, report.

The report is a single attribute-value tree rendered as JSON text with all
reals at 17 significant digits, so two runs with the same config bytes and
seed produce byte-identical output except for the wall-time fields.
"""

from __future__ import annotations

import configparser
import json
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import __version__
from .catalog import CATALOG, Expectation, SurfaceSpec, expected, make_surface, sample_points
from .errors import ConfigError, GeometryError, SolitonFieldVanishesError
from .geometry import weyl_tensor
from .position import verify_structural_identities
from .solitons import (
    SampleSet,
    build_sample_set,
    classify,
    quasi_yamabe_fit,
    torse_forming_fit,
    yamabe_fit,
)

__all__ = [
    "RunConfig",
    "RunReport",
    "ALL_CHECKS",
    "parse_config",
    "run",
    "render_report",
]

ALL_CHECKS = ("identities", "yamabe", "quasi_yamabe", "classify", "torse", "weyl")

# tolerance for comparing per-point mu against its closed-form expectation
MU_TOL = 1e-6


@dataclass
class RunConfig:
    surfaces: list[tuple[str, SurfaceSpec]]
    grid: int = 5
    random_count: int = 20
    seed: int = 0
    checks: tuple[str, ...] = ALL_CHECKS
    tol_ad: float = 1e-7
    tol_fd: float = 1e-4
    out: str | None = None

    def validate(self) -> None:
        if not self.surfaces:
            raise ConfigError("no surfaces selected (names, sections, or all-catalog)")
        if self.grid < 2:
            raise ConfigError("grid resolution must be >= 2 per axis")
        if self.random_count < 0:
            raise ConfigError("random sample count must be >= 0")
        bad = [c for c in self.checks if c not in ALL_CHECKS]
        if bad:
            raise ConfigError(f"unknown checks {bad}; valid: {list(ALL_CHECKS)}")
        if not (self.tol_ad > 0 and self.tol_fd > 0):
            raise ConfigError("tolerances must be positive")


@dataclass
class RunReport:
    document: dict
    text: str
    passed: bool
    failures: list[str] = dc_field(default_factory=list)


def _parse_box(raw: str, where: str) -> list[list[float]]:
    rows = []
    for axis in raw.split(","):
        vals = axis.split()
        if len(vals) != 2:
            raise ConfigError(f"{where}: each box axis needs 'lo hi', got {axis!r}")
        try:
            lo, hi = float(vals[0]), float(vals[1])
        except ValueError as exc:
            raise ConfigError(f"{where}: expected numbers in box, got {axis!r}") from exc
        rows.append([lo, hi])
    return rows


def _surface_from_section(name: str, sec: configparser.SectionProxy) -> SurfaceSpec:
    where = f"[surface:{name}]"
    if "kind" not in sec:
        raise ConfigError(f"{where}: missing required key 'kind'")
    kind = sec["kind"].strip()
    try:
        n = sec.getint("n", fallback=2)
    except ValueError as exc:
        raise ConfigError(f"{where}: key 'n' must be an integer") from exc
    box = _parse_box(sec["box"], f"{where} key 'box'") if "box" in sec else None
    params: dict = {}
    for key, raw in sec.items():
        if key in ("kind", "n", "box"):
            continue
        raw = raw.strip()
        toks = raw.split()
        try:
            if len(toks) > 1:
                params[key] = tuple(float(t) for t in toks)
            else:
                params[key] = float(raw)
        except ValueError:
            params[key] = raw  # named options such as profile selectors
    try:
        spec = SurfaceSpec(kind=kind, n=n, params=params, box=box)
        make_surface(spec, name=name)  # validate parameters eagerly
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    return spec


def parse_config(path: str) -> RunConfig:
    """Parse the sectioned key-value run configuration file."""
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config parse error in {path!r}: {exc}") from exc

    cfg = RunConfig(surfaces=[])
    if parser.has_section("run"):
        run_sec = parser["run"]
        known = {"surfaces", "grid", "random", "seed", "checks", "tol_ad", "tol_fd", "out"}
        unknown = set(run_sec.keys()) - known
        if unknown:
            raise ConfigError(f"[run]: unknown keys {sorted(unknown)}")
        try:
            cfg.grid = run_sec.getint("grid", fallback=cfg.grid)
            cfg.random_count = run_sec.getint("random", fallback=cfg.random_count)
            cfg.seed = run_sec.getint("seed", fallback=cfg.seed)
            cfg.tol_ad = run_sec.getfloat("tol_ad", fallback=cfg.tol_ad)
            cfg.tol_fd = run_sec.getfloat("tol_fd", fallback=cfg.tol_fd)
        except ValueError as exc:
            raise ConfigError(f"[run]: bad numeric value ({exc})") from exc
        if "checks" in run_sec:
            cfg.checks = tuple(run_sec["checks"].replace(",", " ").split())
        if "out" in run_sec:
            cfg.out = run_sec["out"].strip()
        if "surfaces" in run_sec:
            names = run_sec["surfaces"].replace(",", " ").split()
            if "all-catalog" in names:
                cfg.surfaces.extend((nm, sp) for nm, sp in CATALOG.items())
                names = [nm for nm in names if nm != "all-catalog"]
            for nm in names:
                if nm not in CATALOG:
                    raise ConfigError(
                        f"[run]: unknown catalog surface {nm!r}; see list-surfaces"
                    )
                cfg.surfaces.append((nm, CATALOG[nm]))

    for section in parser.sections():
        if section == "run":
            continue
        if not section.startswith("surface:"):
            raise ConfigError(f"unknown section [{section}]; use [run] or [surface:NAME]")
        name = section.split(":", 1)[1].strip()
        if not name:
            raise ConfigError("surface section needs a name: [surface:NAME]")
        cfg.surfaces.append((name, _surface_from_section(name, parser[section])))

    cfg.validate()
    return cfg


# --- report rendering ------------------------------------------------------


def _render(obj, indent: int) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not np.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(f"{pad}  {_render(v, indent + 1)}" for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_render(v, indent + 1)}" for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, np.ndarray):
        return _render(obj.tolist(), indent)
    raise TypeError(f"cannot render {type(obj)} in report")


def render_report(document: dict) -> str:
    """Canonical report text: JSON tree, 17 significant digits, 2-space indent."""
    return _render(document, 0) + "\n"


# --- per-surface execution -------------------------------------------------


def _spec_doc(name: str, spec: SurfaceSpec, imm) -> dict:
    params = {}
    for k in sorted(spec.params):
        v = spec.params[k]
        params[k] = list(v) if isinstance(v, (tuple, list, np.ndarray)) else v
    return {
        "name": name,
        "kind": spec.kind,
        "n": imm.n,
        "m": imm.m,
        "params": params,
        "box": imm.box.tolist(),
    }


def _identities_check(sample: SampleSet, exp: Expectation) -> dict:
    worst = {
        "reconstruction": 0.0,
        "concurrence_fd": 0.0,
        "covariant_ad": 0.0,
        "normal_part_ad": 0.0,
        "normal_part_fd": 0.0,
        "lie_metric_ad": 0.0,
    }
    for p in sample.points:
        rep = verify_structural_identities(sample.immersion, p.u)
        for key in worst:
            worst[key] = max(worst[key], getattr(rep, key))
    doc = dict(worst)
    doc["max_ad"] = max(
        worst["reconstruction"], worst["covariant_ad"], worst["normal_part_ad"], worst["lie_metric_ad"]
    )
    doc["max_fd"] = max(worst["concurrence_fd"], worst["normal_part_fd"])
    dev = None
    if exp.scalar_curvature is not None:
        dev = max(
            abs(p.curvature.scalar - exp.scalar_curvature(p.u)) for p in sample.points
        )
    doc["scalar_curvature_max_dev"] = dev
    return doc


def _fit_doc(fit) -> dict:
    doc = {
        "lambda": fit.lambda_,
        "lambda_stddev": fit.lambda_stddev,
        "lambda_spread": fit.lambda_spread,
        "max_residual": fit.max_residual,
        "verdict": fit.verdict,
        "soliton_sign": fit.soliton_sign,
    }
    if fit.mu_values is not None:
        finite = fit.mu_values[np.isfinite(fit.mu_values)]
        doc["mu_min"] = float(np.min(finite)) if finite.size else None
        doc["mu_max"] = float(np.max(finite)) if finite.size else None
        doc["n_excluded"] = fit.n_excluded
        doc["underdetermined"] = fit.underdetermined
    return doc


def _weyl_check(sample: SampleSet) -> dict:
    if sample.n < 4:
        return {"applicable": False, "max_frobenius_norm": 0.0, "max_trace_norm": 0.0}
    max_fro = 0.0
    max_trace = 0.0
    specs = ("ijkl,ij->kl", "ijkl,ik->jl", "ijkl,il->jk", "ijkl,jk->il", "ijkl,jl->ik", "ijkl,kl->ij")
    for p in sample.points:
        w = weyl_tensor(p.curvature, p.metric)
        max_fro = max(max_fro, w.frobenius_norm)
        gi = p.metric.g_inv
        for espec in specs:
            t = np.einsum(espec, w.c, gi)
            norm2 = float(np.einsum("ij,kl,ik,jl->", t, t, gi, gi))
            max_trace = max(max_trace, float(np.sqrt(max(norm2, 0.0))))
    return {"applicable": True, "max_frobenius_norm": max_fro, "max_trace_norm": max_trace}


def _compare(field_name: str, expected_v, actual_v, ok: bool, rows: list) -> None:
    rows.append(
        {"field": field_name, "expected": expected_v, "actual": actual_v, "pass": bool(ok)}
    )


def _run_surface(name: str, spec: SurfaceSpec, cfg: RunConfig, rng: np.random.Generator) -> dict:
    t0 = time.perf_counter()
    checks: dict = {}
    rows: list = []
    try:
        imm = make_surface(spec, name=name)
        doc = _spec_doc(name, spec, imm)
        exp = expected(spec)
        points = sample_points(imm.box, grid=cfg.grid, random_count=cfg.random_count, rng=rng)
    except (ValueError, GeometryError) as exc:
        return {
            "name": name,
            "kind": spec.kind,
            "error": f"{type(exc).__name__}: {exc}",
            "checks": checks,
            "expectations": rows,
            "passed": False,
            "wall_time_s": time.perf_counter() - t0,
        }
    doc["sample_count"] = len(points)
    doc["error"] = None
    try:
        sample = build_sample_set(imm, points)

        yam = None
        quasi = None
        quasi_error = None
        if "yamabe" in cfg.checks or "classify" in cfg.checks:
            yam = yamabe_fit(sample, cfg.tol_ad)
        if "quasi_yamabe" in cfg.checks:
            try:
                quasi = quasi_yamabe_fit(sample, cfg.tol_ad)
            except SolitonFieldVanishesError as exc:
                quasi_error = str(exc)

        if "identities" in cfg.checks:
            ident = _identities_check(sample, exp)
            checks["identities"] = ident
            _compare("identity_max_ad", 0.0, ident["max_ad"], ident["max_ad"] < cfg.tol_ad, rows)
            _compare("identity_max_fd", 0.0, ident["max_fd"], ident["max_fd"] < cfg.tol_fd, rows)
            if exp.scalar_curvature is not None:
                dev = ident["scalar_curvature_max_dev"]
                _compare("scalar_curvature_max_dev", 0.0, dev, dev < cfg.tol_ad, rows)

        if "yamabe" in cfg.checks:
            checks["yamabe"] = _fit_doc(yam)
            if exp.yamabe_verdict is not None:
                _compare("yamabe_verdict", exp.yamabe_verdict, yam.verdict, yam.verdict == exp.yamabe_verdict, rows)
            if exp.yamabe_lambda is not None:
                ok = abs(yam.lambda_ - exp.yamabe_lambda) < cfg.tol_ad
                _compare("yamabe_lambda", exp.yamabe_lambda, yam.lambda_, ok, rows)
            if exp.soliton_sign is not None:
                _compare("soliton_sign", exp.soliton_sign, yam.soliton_sign, yam.soliton_sign == exp.soliton_sign, rows)

        if "quasi_yamabe" in cfg.checks:
            if quasi_error is not None:
                checks["quasi_yamabe"] = {"error": quasi_error}
                if exp.quasi_verdict is not None:
                    _compare("quasi_verdict", exp.quasi_verdict, "error", exp.quasi_verdict == "error", rows)
            else:
                qdoc = _fit_doc(quasi)
                qdoc["error"] = None
                checks["quasi_yamabe"] = qdoc
                if exp.quasi_verdict is not None:
                    _compare("quasi_verdict", exp.quasi_verdict, quasi.verdict, quasi.verdict == exp.quasi_verdict, rows)
                if exp.quasi_lambda is not None:
                    ok = abs(quasi.lambda_ - exp.quasi_lambda) < cfg.tol_ad
                    _compare("quasi_lambda", exp.quasi_lambda, quasi.lambda_, ok, rows)
                if exp.mu_formula is not None and quasi.mu_values is not None:
                    dev = 0.0
                    for u, mu in zip((p.u for p in sample.points), quasi.mu_values):
                        if np.isfinite(mu):
                            dev = max(dev, abs(mu - exp.mu_formula(u)))
                    _compare("mu_max_dev", 0.0, dev, dev < MU_TOL, rows)

        if "classify" in cfg.checks:
            verdict = classify(sample, yamabe=yam, tol=cfg.tol_ad, tol_fd=cfg.tol_fd)
            checks["classify"] = {
                "position_type": verdict.position_type,
                "hypersurface_class": verdict.hypersurface_class,
                "classification_violation": verdict.classification_violation,
                "quasi_umbilical": verdict.quasi_umbilical,
                "distinguished_direction_alignment": verdict.distinguished_direction_alignment,
                "torse_forming": verdict.torse_forming,
                "normal_section": verdict.normal_section,
                "conformally_flat": verdict.conformally_flat,
            }
            if exp.position_type is not None:
                _compare("position_type", exp.position_type, verdict.position_type, verdict.position_type == exp.position_type, rows)
            if exp.hypersurface_class is not None:
                _compare("hypersurface_class", exp.hypersurface_class, verdict.hypersurface_class, verdict.hypersurface_class == exp.hypersurface_class, rows)
            if exp.normal_section is not None:
                _compare("normal_section", exp.normal_section, verdict.normal_section, verdict.normal_section == exp.normal_section, rows)

        if "torse" in cfg.checks:
            try:
                torse = torse_forming_fit(sample, cfg.tol_ad)
                has_fit = torse.phi_values.size > 0
                checks["torse"] = {
                    "verdict": torse.verdict,
                    "max_residual": torse.max_residual,
                    "phi_min": float(np.min(torse.phi_values)) if has_fit else None,
                    "phi_max": float(np.max(torse.phi_values)) if has_fit else None,
                    "alpha_min": float(np.min(torse.alpha_dual_norms)) if has_fit else None,
                    "alpha_max": float(np.max(torse.alpha_dual_norms)) if has_fit else None,
                    "error": None,
                }
                if exp.torse_verdict is not None:
                    _compare("torse_verdict", exp.torse_verdict, torse.verdict, torse.verdict == exp.torse_verdict, rows)
            except SolitonFieldVanishesError as exc:
                checks["torse"] = {"error": str(exc)}
                if exp.torse_verdict is not None:
                    _compare("torse_verdict", exp.torse_verdict, "error", exp.torse_verdict == "error", rows)

        if "weyl" in cfg.checks:
            wdoc = _weyl_check(sample)
            checks["weyl"] = wdoc
            if exp.conformally_flat is not None and wdoc["applicable"]:
                actual = wdoc["max_frobenius_norm"] < 1e-9
                _compare("conformally_flat", exp.conformally_flat, actual, actual == exp.conformally_flat, rows)

    except GeometryError as exc:
        doc["error"] = f"{type(exc).__name__}: {exc}"

    doc["checks"] = checks
    doc["expectations"] = rows
    doc["passed"] = doc["error"] is None and all(r["pass"] for r in rows)
    doc["wall_time_s"] = time.perf_counter() - t0
    return doc


def run(config: RunConfig) -> RunReport:
    """Execute all requested checks; deterministic for a fixed config and seed."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    surface_docs = []
    failures: list[str] = []
    for name, spec in config.surfaces:
        doc = _run_surface(name, spec, config, rng)
        surface_docs.append(doc)
        if doc["error"] is not None:
            failures.append(f"{name}: {doc['error']}")
        else:
            failures.extend(
                f"{name}: {row['field']} expected {row['expected']} got {row['actual']}"
                for row in doc["expectations"]
                if not row["pass"]
            )
    passed = not failures
    document = {
        "tool": {"name": "solitongeo", "version": __version__},
        "config": {
            "surfaces": [
                {
                    "name": name,
                    "kind": spec.kind,
                    "n": spec.n,
                    "params": {
                        k: (list(v) if isinstance(v, (tuple, list)) else v)
                        for k, v in sorted(spec.params.items())
                    },
                    "box": spec.box.tolist() if spec.box is not None else None,
                }
                for name, spec in config.surfaces
            ],
            "grid": config.grid,
            "random": config.random_count,
            "seed": config.seed,
            "checks": list(config.checks),
            "tol_ad": config.tol_ad,
            "tol_fd": config.tol_fd,
        },
        "surfaces": surface_docs,
        "summary": {
            "n_surfaces": len(surface_docs),
            "n_passed": sum(1 for d in surface_docs if d["passed"]),
            "n_failed": sum(1 for d in surface_docs if not d["passed"]),
            "passed": passed,
        },
    }
    return RunReport(
        document=document, text=render_report(document), passed=passed, failures=failures
    )
