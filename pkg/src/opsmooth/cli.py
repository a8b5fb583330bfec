"""Command-line surface emitting deterministic JSON reports.

Inputs are positional JSON: either an inline JSON object or a path to a
file containing one.  Exit codes: 0 success, 1 usage or input error,
2 regression-assertion failure, 3 oracle discrepancy above tolerance.
"""

from __future__ import annotations

import json
import math
import os
import sys
import time

import click
import numpy as np

from .diagonal import DiagonalOperator, SymbolGrammarError, diag_smoothness
from .operators import (
    MatrixOperator,
    gateaux_derivative,
    m_t_delta,
    mt_delta_localization,
    op_norm,
    orthogonality_transfer_test,
    smoothness_decide,
)
from .oracles import bj_battery, op_norm_battery, smooth_point_battery
from .orthogonality import approx_bj, bj_orthogonal, directional_class
from .reporting import Report, RunConfig, Tolerances, jsonable
from .repro import reproduce_examples
from .spaces import NormSpec, Vector, duality_map, is_smooth_point, norm, sip
from .tags import (
    RULE_ATTAIN,
    RULE_DIFF,
    RULE_PLUMBING,
    RULE_SIP,
    RULE_TRANSFER,
)


def _parse_p(value, name: str = "p") -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
        try:
            value = float(value)
        except ValueError:
            raise click.UsageError(f"{name} must be a number or 'inf', got {value!r}")
    p = float(value)
    if p < 1.0:
        raise click.UsageError(f"{name} must be >= 1, got {p}")
    return p


def _load_payload(arg: str) -> dict:
    if os.path.exists(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = arg
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"cannot parse JSON input: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError("input must be a JSON object")
    return data


def _require(data: dict, key: str):
    if key not in data:
        raise click.UsageError(f"missing input field {key!r}")
    return data[key]


def _vector(data: dict, key: str, p: float) -> Vector:
    coords = np.asarray(_require(data, key), dtype=float)
    return Vector(coords, NormSpec(p, coords.shape[0]))


def _operator(data: dict, key: str, p: float, r: float) -> MatrixOperator:
    entries = np.asarray(_require(data, key), dtype=float)
    if entries.ndim != 2:
        raise click.UsageError(f"{key} must be a JSON matrix")
    return MatrixOperator(entries, NormSpec(p, entries.shape[1]), NormSpec(r, entries.shape[0]))


def _emit(ctx, command: str, inputs, verdicts, citations, t0: float) -> Report:
    report = Report(
        command=command,
        inputs=jsonable(inputs),
        verdicts=jsonable(verdicts),
        citations=list(citations),
        timing=time.perf_counter() - t0,
    )
    text = report.to_json()
    click.echo(text)
    path = ctx.obj.get("json_out")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return report


@click.group()
@click.option("--seed", type=int, default=1234, show_default=True)
@click.option("--tol-formula", type=float, default=1e-9, show_default=True)
@click.option("--tol-opt", type=float, default=1e-6, show_default=True)
@click.option("--grid", type=int, default=100_000, show_default=True,
              help="grid density for oracle comparisons")
@click.option("--json-out", type=click.Path(dir_okay=False), default=None,
              help="also write the report JSON to this path")
@click.pass_context
def cli(ctx, seed, tol_formula, tol_opt, grid, json_out):
    """Norm geometry and operator smoothness probes on lp spaces."""
    try:
        config = RunConfig(
            seed=seed,
            tolerances=Tolerances(formula=tol_formula, optimizer=tol_opt),
            grid_density=grid,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    ctx.obj = {"config": config, "json_out": json_out}


@cli.command("check-orth")
@click.argument("payload")
@click.pass_context
def check_orth(ctx, payload):
    """Orthogonality verdict for {"p", "x", "y"} with optional "eps"."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p = _parse_p(data.get("p", 2))
    x = _vector(data, "x", p)
    y = _vector(data, "y", p)
    verdict = bj_orthogonal(x, y)
    verdicts = {"orthogonal": verdict.orthogonal, "min_value": verdict.min_value,
                "minimizer": verdict.minimizer, "certificate": verdict.certificate,
                "sip_value": verdict.sip_value}
    if "eps" in data:
        eps = float(data["eps"])
        verdicts["approx_orthogonal"] = approx_bj(x, y, eps)
        verdicts["directional"] = directional_class(x, y, eps)
    _emit(ctx, "check-orth", data, verdicts, [RULE_PLUMBING], t0)
    return 0


@cli.command("duality")
@click.argument("payload")
@click.pass_context
def duality(ctx, payload):
    """Canonical norming functional for {"p", "x"}."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p = _parse_p(data.get("p", 2))
    x = _vector(data, "x", p)
    f = duality_map(x)
    verdict = is_smooth_point(x)
    verdicts = {
        "coeffs": f.coeffs,
        "unique": f.unique,
        "dual_norm": f.dual_norm(),
        "pairing": f(x),
        "vector_norm": norm(x),
        "smooth_point": verdict.smooth,
    }
    _emit(ctx, "duality", data, verdicts, [RULE_SIP], t0)
    return 0


@cli.command("sip")
@click.argument("payload")
@click.pass_context
def sip_cmd(ctx, payload):
    """Semi-inner-product [y, x] for {"p", "x", "y"} (x is the base point)."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p = _parse_p(data.get("p", 2))
    x = _vector(data, "x", p)
    y = _vector(data, "y", p)
    verdicts = {"value": sip(y, x), "base_norm": norm(x)}
    _emit(ctx, "sip", data, verdicts, [RULE_SIP], t0)
    return 0


def _pr(data: dict) -> tuple[float, float]:
    return _parse_p(data.get("p", 2)), _parse_p(data.get("r", data.get("p", 2)), "r")


@cli.command("op-norm")
@click.argument("payload")
@click.pass_context
def op_norm_cmd(ctx, payload):
    """Operator norm for {"entries", "p", "r"}."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p, r = _pr(data)
    T = _operator(data, "entries", p, r)
    config = ctx.obj["config"]
    result = op_norm(T, seed=config.seed)
    verdicts = {"value": result.value,
                "maximizers": [m.coords for m in result.maximizers]}
    _emit(ctx, "op-norm", data, verdicts, [RULE_PLUMBING], t0)
    return 0


@cli.command("op-smooth")
@click.argument("payload")
@click.pass_context
def op_smooth(ctx, payload):
    """Smoothness decision for {"entries", "p", "r"}."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p, r = _pr(data)
    T = _operator(data, "entries", p, r)
    config = ctx.obj["config"]
    report = smoothness_decide(T, seed=config.seed)
    _emit(ctx, "op-smooth", data, report, report.citations, t0)
    return 0


@cli.command("transfer")
@click.argument("payload")
@click.pass_context
def transfer(ctx, payload):
    """Orthogonality transfer test for {"t", "a", "p", "r"}."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p, r = _pr(data)
    T = _operator(data, "t", p, r)
    A = _operator(data, "a", p, r)
    config = ctx.obj["config"]
    result = orthogonality_transfer_test(
        T, A, seed=config.seed, audit=bool(data.get("audit", False)),
        rel_tol=config.tolerances.optimizer,
    )
    _emit(ctx, "transfer", data, result, [RULE_TRANSFER], t0)
    return 0


@cli.command("gateaux")
@click.argument("payload")
@click.pass_context
def gateaux(ctx, payload):
    """One-sided norm derivatives for {"t", "a", "p", "r", "h_schedule"?}."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p, r = _pr(data)
    T = _operator(data, "t", p, r)
    A = _operator(data, "a", p, r)
    config = ctx.obj["config"]
    result = gateaux_derivative(T, A, h_schedule=data.get("h_schedule"), seed=config.seed)
    _emit(ctx, "gateaux", data, result, [RULE_DIFF], t0)
    return 0


@cli.command("mtdelta")
@click.argument("payload")
@click.pass_context
def mtdelta(ctx, payload):
    """Near-attainment probes for {"t", "p", "r"} with "delta" and/or "eps"."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p, r = _pr(data)
    T = _operator(data, "t", p, r)
    config = ctx.obj["config"]
    verdicts = {}
    if "delta" in data:
        result = m_t_delta(T, float(data["delta"]), seed=config.seed,
                           sample_count=int(data.get("samples", 4096)))
        verdicts["sampled_set"] = {
            "norm_value": result.attainment.norm_value,
            "delta": result.attainment.delta,
            "member_count": len(result.attainment.maximizers),
            "singleton_pair": result.attainment.singleton_pair,
        }
    if "eps" in data:
        loc = mt_delta_localization(T, float(data["eps"]), seed=config.seed,
                                    sample_count=int(data.get("samples", 10_000)),
                                    audit=bool(data.get("audit", False)))
        verdicts["localization"] = loc
    if not verdicts:
        raise click.UsageError("mtdelta needs at least one of 'delta' or 'eps'")
    _emit(ctx, "mtdelta", data, verdicts, [RULE_DIFF, RULE_ATTAIN], t0)
    return 0


@cli.command("diag-smooth")
@click.argument("payload")
@click.pass_context
def diag_smooth(ctx, payload):
    """Diagonal-rule smoothness for {"symbol", "p"}."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    p = _parse_p(data.get("p", 2))
    try:
        D = DiagonalOperator.parse(str(_require(data, "symbol")), p)
    except SymbolGrammarError as exc:
        raise click.UsageError(str(exc))
    report = diag_smoothness(D)
    _emit(ctx, "diag-smooth", data, report, report.citations, t0)
    return 0


@cli.command("reproduce-examples")
@click.pass_context
def reproduce(ctx):
    """Run the stock fixture regressions; nonzero exit on any failure."""
    t0 = time.perf_counter()
    config = ctx.obj["config"]
    result = reproduce_examples(seed=config.seed)
    _emit(ctx, "reproduce-examples", {}, result, result.citations, t0)
    return 0 if result.ok else 2


@cli.command("oracle")
@click.argument("payload")
@click.pass_context
def oracle(ctx, payload):
    """Fast path vs brute force for {"kind": "bj"|"op-norm"|"smooth-point", ...}."""
    t0 = time.perf_counter()
    data = _load_payload(payload)
    kind = _require(data, "kind")
    config = ctx.obj["config"]
    dim = int(data.get("dim", 2))
    if dim > 3:
        raise click.UsageError("oracle comparisons support dim <= 3")
    count = int(data.get("count", 20))
    seed = int(data.get("seed", config.seed))
    if kind == "bj":
        p = _parse_p(data.get("p", 2))
        result = bj_battery(p, dim, count, grid_count=config.grid_density, seed=seed)
    elif kind == "op-norm":
        p, r = _pr(data)
        result = op_norm_battery(p, r, dim, count, grid_count=config.grid_density,
                                 seed=seed)
    elif kind == "smooth-point":
        p = _parse_p(data.get("p", 2))
        result = smooth_point_battery(p, dim, count=count, seed=seed,
                                      step=float(data.get("step", 1e-3)),
                                      corners=bool(data.get("corners", False)))
    else:
        raise click.UsageError(f"unknown oracle kind {kind!r}")
    _emit(ctx, "oracle", data, result, [RULE_PLUMBING], t0)
    return 0 if result.ok else 3


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.Abort:
        return 1
    except ValueError as exc:
        click.echo(f"input error: {exc}", err=True)
        return 1
    return int(rv) if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
