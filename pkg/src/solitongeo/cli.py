"""Thin command-line client for the verification service.

``run`` parses a config file, posts it to the service (in-process by
default, remote with --server), writes the canonical report and exits with
0 on success, 1 on expectation failure or surface error, 2 on usage or
configuration errors.  ``list-surfaces`` and ``explain`` query the catalog
endpoints; ``serve`` starts the HTTP service.
"""

from __future__ import annotations

import sys

import click
import httpx

from .errors import ConfigError
from .runner import ALL_CHECKS, parse_config

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


@click.group()
@click.version_option(package_name="solitongeo")
def main() -> None:
    """Verification suite for position-field soliton criteria on immersed surfaces."""


@main.command(name="run")
@click.argument("config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--tol", type=float, default=None, help="Override the exact-path tolerance.")
@click.option("--tol-fd", type=float, default=None, help="Override the finite-difference tolerance.")
@click.option("--seed", type=int, default=None, help="Override the sampling seed.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report output path.")
@click.option("--checks", type=str, default=None, help="Space/comma separated subset of checks.")
@click.option("--server", type=str, default=None, help="Remote service URL (default: in-process).")
def run_cmd(config_path, tol, tol_fd, seed, out, checks, server) -> None:
    """Run the verification batch described by CONFIG_PATH."""
    try:
        cfg = parse_config(config_path)
        if tol is not None:
            cfg.tol_ad = tol
        if tol_fd is not None:
            cfg.tol_fd = tol_fd
        if seed is not None:
            cfg.seed = seed
        if out is not None:
            cfg.out = out
        if checks is not None:
            cfg.checks = tuple(checks.replace(",", " ").split())
        cfg.validate()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    payload = {
        "surfaces": [
            {
                "name": name,
                "kind": spec.kind,
                "n": spec.n,
                "params": {
                    k: (list(v) if isinstance(v, tuple) else v) for k, v in spec.params.items()
                },
                "box": spec.box.tolist() if spec.box is not None else None,
            }
            for name, spec in cfg.surfaces
        ],
        "grid": cfg.grid,
        "random_count": cfg.random_count,
        "seed": cfg.seed,
        "checks": list(cfg.checks),
        "tol_ad": cfg.tol_ad,
        "tol_fd": cfg.tol_fd,
    }
    with _client(server) as client:
        resp = client.post("/run", json=payload)
    if resp.status_code != 200:
        click.echo(f"service error ({resp.status_code}): {resp.text}", err=True)
        sys.exit(EXIT_USAGE)
    body = resp.json()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(body["report_text"])
        click.echo(f"report written to {cfg.out}")
    else:
        click.echo(body["report_text"], nl=False)
    if body["passed"]:
        click.echo(f"PASS: all {len(cfg.surfaces)} surface(s) match expectations")
        sys.exit(EXIT_OK)
    for line in body["failures"]:
        click.echo(f"FAIL: {line}", err=True)
    click.echo(f"FAIL: {len(body['failures'])} expectation failure(s)", err=True)
    sys.exit(EXIT_FAIL)


@main.command(name="list-surfaces")
@click.option("--server", type=str, default=None, help="Remote service URL (default: in-process).")
def list_surfaces_cmd(server) -> None:
    """List the catalog surfaces addressable from run configs."""
    with _client(server) as client:
        resp = client.get("/surfaces")
    resp.raise_for_status()
    for info in resp.json():
        params = ", ".join(f"{k}={v}" for k, v in info["params"].items())
        click.echo(f"{info['name']:22s} kind={info['kind']:15s} n={info['n']} m={info['m']}  {params}")


@main.command(name="explain")
@click.argument("surface")
@click.option("--server", type=str, default=None, help="Remote service URL (default: in-process).")
def explain_cmd(surface, server) -> None:
    """Print the analytic expectations for a catalog surface."""
    with _client(server) as client:
        resp = client.get(f"/surfaces/{surface}")
    if resp.status_code == 404:
        click.echo(f"unknown surface {surface!r}; try list-surfaces", err=True)
        sys.exit(EXIT_USAGE)
    resp.raise_for_status()
    body = resp.json()
    click.echo(f"{body['name']} (kind={body['kind']}, chart dim {body['n']}, ambient dim {body['m']})")
    if body["params"]:
        click.echo("parameters: " + ", ".join(f"{k}={v}" for k, v in body["params"].items()))
    click.echo("domain box: " + "; ".join(f"[{lo:g}, {hi:g}]" for lo, hi in body["box"]))
    click.echo("expected:")
    for key, value in body["expectation"].items():
        click.echo(f"  {key} = {value}")


@main.command(name="serve")
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve_cmd(host, port) -> None:
    """Start the HTTP verification service."""
    import uvicorn

    uvicorn.run("solitongeo.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
