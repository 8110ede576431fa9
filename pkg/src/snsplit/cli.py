"""Command-line interface: change-point testing, null simulation, Monte Carlo
experiments and synthetic panel generation.

Exit codes: 0 success, 1 input/config parse error, 2 statistical error
(insufficient or degenerate data), 3 rejection when --fail-on-reject.
"""

from __future__ import annotations

import json
import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import click
import numpy as np

from . import _kernels, __version__
from .dgp import CovSpec, DgpSpec, gen_panel, preset_shift
from .errors import SnsplitError, InsufficientSample, DegenerateSeries, InvalidPreset
from .harness import McExperiment, TestConfig, run_power, run_size
from .multiscan import test_multi
from .nulldist import (
    STANDARD_LEVELS,
    builtin_table,
    load_null,
    save_null,
    simulate_G,
    simulate_GM,
)
from .panel import PanelSeries
from .single import test_single

EXIT_PARSE = 1
EXIT_STAT = 2
EXIT_REJECT = 3


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def read_panel_csv(path) -> PanelSeries:
    """Rows = time, columns = components; a non-numeric first line is treated
    as a header. Ragged or non-numeric rows abort with the line number."""
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if lineno == 1:
                try:
                    [float(c) for c in cells]
                except ValueError:
                    continue  # header row
            try:
                values = [float(c) for c in cells]
            except ValueError:
                _fail(EXIT_PARSE, f"{path}: non-numeric cell on line {lineno}")
            if width is None:
                width = len(values)
            elif len(values) != width:
                _fail(
                    EXIT_PARSE,
                    f"{path}: ragged row on line {lineno} "
                    f"({len(values)} cells, expected {width})",
                )
            rows.append(values)
    if not rows:
        _fail(EXIT_PARSE, f"{path}: no data rows")
    try:
        return PanelSeries(np.array(rows))
    except SnsplitError as exc:
        _fail(EXIT_PARSE, f"{path}: {exc}")


def write_panel_csv(path, panel: PanelSeries, header: bool):
    with open(path, "w") as fh:
        if header:
            fh.write(",".join(f"x{j+1}" for j in range(panel.p)) + "\n")
        for row in panel.data:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _load_null_arg(spec: str, kind: str):
    if spec == "builtin":
        return builtin_table(kind)
    try:
        null = load_null(spec)
    except (OSError, SnsplitError) as exc:
        _fail(EXIT_PARSE, str(exc))
    if null.kind != kind:
        _fail(EXIT_PARSE, f"{spec}: null sample has kind {null.kind}, need {kind}")
    return null


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


@click.group()
@click.version_option(__version__)
def main():
    """Sample-splitting self-normalized change-point tests."""


@main.command("test")
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["dense", "sparse", "bonferroni", "multi"]),
              default="dense", show_default=True)
@click.option("--epsilon", default="0.1", show_default=True)
@click.option("--eta", default="0.04", show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--null", "null_spec", default="builtin", show_default=True,
              help="Calibration: 'builtin' table or a null-sample file path.")
@click.option("--stride", type=int, default=1, show_default=True,
              help="Scan grid stride (multi mode only).")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("--fail-on-reject", is_flag=True,
              help="Exit with code 3 when the test rejects.")
def cmd_test(input_csv, mode, epsilon, eta, alpha, null_spec, stride, as_json,
             fail_on_reject):
    """Run a change-point test on a CSV panel (rows = time)."""
    panel = read_panel_csv(input_csv)
    try:
        if mode == "multi":
            null = _load_null_arg(null_spec, "GM")
            out = test_multi(panel, epsilon, eta, alpha, mode="dense",
                             null_GM=null, stride=stride)
        else:
            null = _load_null_arg(null_spec, "G")
            out = test_single(panel, epsilon, eta, alpha, mode=mode, null=null)
    except (InsufficientSample, DegenerateSeries) as exc:
        _fail(EXIT_STAT, f"{type(exc).__name__}: {exc}")
    except SnsplitError as exc:
        _fail(EXIT_PARSE, str(exc))

    if as_json:
        payload = {
            "mode": out.mode,
            "statistic": _jsonable(out.statistic),
            "p_value": _jsonable(out.p_value),
            "threshold": _jsonable(out.threshold),
            "alpha": out.alpha,
            "reject": out.reject,
            "location": _jsonable(out.location),
            "meta": _jsonable_meta(out.meta),
        }
        click.echo(json.dumps(payload))
    else:
        click.echo(f"mode:      {out.mode}")
        click.echo(f"statistic: {_fmt(out.statistic)}")
        click.echo(f"p-value:   {_fmt(out.p_value)}")
        click.echo(f"threshold: {_fmt(out.threshold)} (alpha={out.alpha})")
        click.echo(f"decision:  {'reject' if out.reject else 'fail to reject'}")
        click.echo(f"location:  {_fmt(out.location)}")
    if fail_on_reject and out.reject:
        sys.exit(EXIT_REJECT)


def _fmt(v):
    if isinstance(v, tuple):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _jsonable_meta(meta):
    return {k: _jsonable(v) for k, v in meta.items()}


@main.command("simulate-null")
@click.option("--kind", type=click.Choice(["G", "GM"]), required=True)
@click.option("--grid", "grid_size", type=int, required=True)
@click.option("--replicates", type=int, required=True)
@click.option("--stride", type=int, default=1, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--threads", type=int, default=0, show_default=True,
              help="Kernel worker count (0 = all cores); does not change results.")
def cmd_simulate_null(kind, grid_size, replicates, stride, seed, out_path, threads):
    """Simulate a null distribution and write it as a null-sample file."""
    _kernels.set_threads(threads)
    try:
        if kind == "G":
            null = simulate_G(grid_size, replicates, seed)
        else:
            null = simulate_GM(grid_size, replicates, stride, seed)
    except (ValueError, SnsplitError) as exc:
        _fail(EXIT_PARSE, str(exc))
    save_null(null, out_path)
    for q in STANDARD_LEVELS:
        click.echo(f"{q*100:5.1f}%  {null.quantile(q):.4f}")
    click.echo(f"wrote {out_path} ({replicates} replicates, grid {grid_size})")


def _parse_config(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        _fail(EXIT_PARSE, str(exc))
    except tomllib.TOMLDecodeError as exc:
        _fail(EXIT_PARSE, f"{path}: {exc}")


def _require(cfg, key, path, section=None):
    where = f"[{section}] " if section else ""
    if key not in cfg:
        _fail(EXIT_PARSE, f"{path}: missing required field {where}{key}")
    return cfg[key]


def _dgp_from_config(cfg, path):
    d = _require(cfg, "dgp", path)
    p = _require(d, "p", path, "dgp")
    cov = CovSpec(
        kind=d.get("cov", "id"),
        p=p,
        rho=d.get("rho", 0.0),
    )
    try:
        return DgpSpec(
            family=d.get("family", "var1"),
            n=_require(d, "n", path, "dgp"),
            p=p,
            cov=cov,
            kappa=d.get("kappa", 0.0),
            decay=d.get("decay", 0.5),
            factor_count=d.get("factor_count", 3),
            loading_scale=d.get("loading_scale", 1.0),
            factor_ar=d.get("factor_ar", 0.5),
        )
    except SnsplitError as exc:
        _fail(EXIT_PARSE, f"{path}: [dgp] {exc}")


def _experiment_from_config(path, need_grid):
    cfg = _parse_config(path)
    dgp = _dgp_from_config(cfg, path)
    tests = []
    for i, t in enumerate(cfg.get("tests", [])):
        try:
            tests.append(
                TestConfig(
                    mode=_require(t, "mode", path, f"tests[{i}]"),
                    epsilon=t.get("epsilon", 0.1),
                    eta=t.get("eta", 0.04),
                    stride=t.get("stride", 1),
                )
            )
        except SnsplitError as exc:
            _fail(EXIT_PARSE, f"{path}: [tests[{i}]] {exc}")
    if not tests:
        _fail(EXIT_PARSE, f"{path}: missing required section [[tests]]")
    try:
        exp = McExperiment(
            dgp=dgp,
            tests=tuple(tests),
            alpha=_require(cfg, "alpha", path),
            replicates=_require(cfg, "replicates", path),
            seed=_require(cfg, "seed", path),
            shift=cfg.get("shift", "none"),
            c_grid=tuple(cfg.get("c_grid", ())),
            size_adjust=cfg.get("size_adjust", True),
        )
    except SnsplitError as exc:
        _fail(EXIT_PARSE, f"{path}: {exc}")
    if need_grid and not exp.c_grid:
        _fail(EXIT_PARSE, f"{path}: missing required field c_grid")
    return exp


def _mc_nulls(null_g, null_gm):
    return {"G": _load_null_arg(null_g, "G"), "GM": _load_null_arg(null_gm, "GM")}


def _write_report(report, out_path, started):
    report.to_csv(out_path)
    sidecar = {
        "meta": report.meta,
        "version": __version__,
        "wall_time_s": round(time.monotonic() - started, 3),
    }
    with open(out_path + ".meta.json", "w") as fh:
        json.dump(sidecar, fh, indent=2)
    click.echo(f"wrote {out_path} ({len(report.rows)} rows)")


@main.command("mc-size")
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--null-g", default="builtin", show_default=True)
@click.option("--null-gm", default="builtin", show_default=True)
@click.option("--threads", type=int, default=0, show_default=True)
def cmd_mc_size(config_path, out_path, null_g, null_gm, threads):
    """Empirical size experiment from a TOML config."""
    _kernels.set_threads(threads)
    exp = _experiment_from_config(config_path, need_grid=False)
    started = time.monotonic()
    try:
        report = run_size(exp, nulls=_mc_nulls(null_g, null_gm))
    except SnsplitError as exc:
        _fail(EXIT_PARSE, f"{config_path}: {exc}")
    _write_report(report, out_path, started)


@main.command("mc-power")
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--null-g", default="builtin", show_default=True)
@click.option("--null-gm", default="builtin", show_default=True)
@click.option("--threads", type=int, default=0, show_default=True)
def cmd_mc_power(config_path, out_path, null_g, null_gm, threads):
    """Power-curve experiment from a TOML config."""
    _kernels.set_threads(threads)
    exp = _experiment_from_config(config_path, need_grid=True)
    started = time.monotonic()
    try:
        report = run_power(exp, nulls=_mc_nulls(null_g, null_gm))
    except SnsplitError as exc:
        _fail(EXIT_PARSE, f"{config_path}: {exc}")
    _write_report(report, out_path, started)


@main.command("gen")
@click.option("--dgp", "config_path", type=click.Path(exists=True), required=True,
              help="TOML config with a [dgp] section.")
@click.option("--shift", default="none", show_default=True,
              help="Shift preset: none, dense_mid, sparse_mid, dd, ss, ds, ddd.")
@click.option("--c", "c_value", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--header/--no-header", default=False, show_default=True)
def cmd_gen(config_path, shift, c_value, seed, out_path, header):
    """Generate a synthetic panel CSV."""
    cfg = _parse_config(config_path)
    dgp = _dgp_from_config(cfg, config_path)
    try:
        shift_spec = preset_shift(shift, dgp.n, dgp.p, c=c_value)
        panel = gen_panel(dgp, shift_spec, seed=seed)
    except InvalidPreset as exc:
        _fail(EXIT_PARSE, str(exc))
    write_panel_csv(out_path, panel, header)
    click.echo(f"wrote {out_path} ({panel.n} rows x {panel.p} columns)")
