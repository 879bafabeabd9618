"""Command-line front end: solve runs, verification suites, sweeps, reports.

Commands
    solve        integrate a configured problem, write the trace to disk
    verify       run the enabled check set on a solved (or inline) trace
    region       CSV feasibility map over an (alpha, beta) grid
    sweep        verify over a cartesian product of config overrides
    preset-list  show the constant-preset catalog

Exit codes: 0 all verdicts pass, 1 verdict failure, 2 usage/config error,
3 solver abort.  Reports are deterministic for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import blowup as bl
from . import classical as cl
from . import constants as co
from . import harnack as ha
from . import traceio
from .errors import BetaZero, ConfigError, EseError, ThresholdNeverMet
from .field import Grid, log_field
from .integrate import (ConstantIC, GaussianIC, ProblemSpec, RescaleSpec,
                        SolveTrace, StepConfig, TabulatedIC, rescale_problem,
                        rescale_trace, solve)

KNOWN_CHECKS = ("h0", "hr", "residual", "blowup", "classical", "rescale")


# ---------------------------------------------------------------------------
# config file parsing

@dataclass
class CheckSettings:
    enabled: tuple[str, ...] = ()
    t_min_frac: float = 0.05
    t_max_frac: float = 0.9
    h0_tol: float = 1e-2
    hr_rect: tuple[tuple[float, float], ...] | None = None
    hr_b_margin: float = 1.05
    residual_tol: float = 5e-2
    classical_pairs: int = 100
    classical_tol: float = 1e-3
    rescale_lambda: float = 2.0
    rescale_tol: float = 1e-3
    blowup_c: float | None = None


@dataclass
class RunConfig:
    problem: ProblemSpec
    step: StepConfig
    constants: co.HarnackConstants
    constants_source: str
    checks: CheckSettings
    outdir: str = "out"
    trace_dir: str | None = None


def _get(cp, section, key, cast, default=None, required=False):
    if not cp.has_option(section, key):
        if required:
            raise ConfigError(f"[{section}] is missing required key '{key}'")
        return default
    raw = cp.get(section, key)
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None


def _parse_bool(raw: str) -> bool:
    val = raw.strip().lower()
    if val in ("1", "on", "true", "yes"):
        return True
    if val in ("0", "off", "false", "no"):
        return False
    raise ValueError(f"expected on/off, got {raw!r}")


def _parse_intervals(raw: str) -> tuple[tuple[float, float], ...]:
    out = []
    for part in raw.split(","):
        lo, sep, hi = part.partition(":")
        if not sep:
            raise ValueError(f"interval {part!r} must look like lo:hi")
        out.append((float(lo), float(hi)))
    return tuple(out)


def _parse_floats(raw: str) -> tuple[float, ...]:
    return tuple(float(v) for v in raw.split(","))


def _parse_ints(raw: str) -> tuple[int, ...]:
    return tuple(int(v) for v in raw.split(","))


def load_config(path, overrides=()) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path) as fh:
            cp.read_file(fh, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        # configparser messages carry line numbers
        raise ConfigError(f"config parse error: {exc}") from None
    for section, key, value in overrides:
        if not cp.has_section(section):
            cp.add_section(section)
        cp.set(section, key, value)
    return build_config(cp)


def build_config(cp: configparser.ConfigParser) -> RunConfig:
    if not cp.has_section("problem"):
        raise ConfigError("config needs a [problem] section")

    dim = _get(cp, "problem", "dim", int, required=True)
    box = _get(cp, "problem", "box", _parse_intervals, required=True)
    extents = _get(cp, "problem", "extents", _parse_ints, required=True)
    if len(box) == 1 and dim > 1:
        box = box * dim
    if len(extents) == 1 and dim > 1:
        extents = extents * dim
    boundary = _get(cp, "problem", "boundary", str, default="periodic")
    try:
        grid = Grid(box, extents, boundary)
    except ValueError as exc:
        raise ConfigError(f"[problem] grid: {exc}") from None
    if grid.dim != dim:
        raise ConfigError(f"[problem] dim={dim} but box has {grid.dim} axes")

    kind = _get(cp, "problem", "initial", str, required=True).strip().lower()
    if kind == "constant":
        initial = ConstantIC(_get(cp, "problem", "level", float, required=True))
    elif kind == "gaussian":
        center = _get(cp, "problem", "center", _parse_floats, default=None)
        initial = GaussianIC(
            amplitude=_get(cp, "problem", "amplitude", float, required=True),
            width=_get(cp, "problem", "width", float, required=True),
            center=center)
    elif kind == "file":
        snap = _get(cp, "problem", "file", str, required=True)
        _, f = traceio.load_field(snap)
        if f.grid != grid:
            raise ConfigError("[problem] file grid does not match configured grid")
        initial = TabulatedIC(f.values)
    else:
        raise ConfigError(f"[problem] initial must be constant/gaussian/file, got {kind!r}")

    try:
        problem = ProblemSpec(
            grid=grid,
            p=_get(cp, "problem", "p", float, required=True),
            initial=initial,
            t_end=_get(cp, "problem", "t_end", float, required=True),
            reaction=_get(cp, "problem", "reaction", _parse_bool, default=True))
    except (ValueError, EseError) as exc:
        raise ConfigError(f"[problem]: {exc}") from None

    try:
        step = StepConfig(
            cfl_safety=_get(cp, "step", "cfl_safety", float, default=0.25),
            reaction_safety=_get(cp, "step", "reaction_safety", float, default=0.05),
            dt_min=_get(cp, "step", "dt_min", float, default=1e-12),
            f_cap=_get(cp, "step", "f_cap", float, default=1e8),
            sample_stride=_get(cp, "step", "sample_stride", int, default=4))
    except ValueError as exc:
        raise ConfigError(f"[step]: {exc}") from None

    if cp.has_option("constants", "preset"):
        name = cp.get("constants", "preset").strip()
        try:
            n_k, p_k, k = co.preset(name)
        except EseError as exc:
            raise ConfigError(f"[constants] preset: {exc}") from None
        if n_k != grid.dim or p_k != problem.p:
            raise ConfigError(
                f"[constants] preset {name} is for (n={n_k}, p={p_k}), "
                f"problem has (n={grid.dim}, p={problem.p})")
        source = name
    elif cp.has_section("constants"):
        k = co.HarnackConstants(
            alpha=_get(cp, "constants", "alpha", float, required=True),
            beta=_get(cp, "constants", "beta", float, required=True),
            c=_get(cp, "constants", "c", float, required=True),
            a=_get(cp, "constants", "a", float, required=True))
        source = "explicit"
    else:
        raise ConfigError("config needs a [constants] section (preset or explicit tuple)")

    checks = CheckSettings()
    if cp.has_section("checks"):
        enabled_raw = _get(cp, "checks", "enabled", str, default="")
        enabled = tuple(v.strip() for v in enabled_raw.split(",") if v.strip())
        for name in enabled:
            if name not in KNOWN_CHECKS:
                raise ConfigError(f"[checks] unknown check {name!r}; known: {KNOWN_CHECKS}")
        checks = CheckSettings(
            enabled=enabled,
            t_min_frac=_get(cp, "checks", "t_min_frac", float, default=0.05),
            t_max_frac=_get(cp, "checks", "t_max_frac", float, default=0.9),
            h0_tol=_get(cp, "checks", "h0_tol", float, default=1e-2),
            hr_rect=_get(cp, "checks", "hr_rect", _parse_intervals, default=None),
            hr_b_margin=_get(cp, "checks", "hr_b_margin", float, default=1.05),
            residual_tol=_get(cp, "checks", "residual_tol", float, default=5e-2),
            classical_pairs=_get(cp, "checks", "classical_pairs", int, default=100),
            classical_tol=_get(cp, "checks", "classical_tol", float, default=1e-3),
            rescale_lambda=_get(cp, "checks", "rescale_lambda", float, default=2.0),
            rescale_tol=_get(cp, "checks", "rescale_tol", float, default=1e-3),
            blowup_c=_get(cp, "checks", "blowup_c", float, default=None))

    outdir = _get(cp, "output", "dir", str, default="out") if cp.has_section("output") else "out"
    trace_dir = (_get(cp, "verify", "trace_dir", str, default=None)
                 if cp.has_section("verify") else None)
    return RunConfig(problem, step, k, source, checks, outdir, trace_dir)


# ---------------------------------------------------------------------------
# report writing

def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_summary(path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------------------
# verify pipeline (shared by verify and sweep)

def _check_blowup(trace: SolveTrace, rc: RunConfig) -> tuple[bool, dict]:
    """Consistency checks around the blowup machinery.

    If blowup was detected, the extrapolated time must lie ahead of the last
    sample and, when the threshold was crossed, the center max must grow
    monotonically from the crossing on.
    """
    n, p = rc.problem.n, rc.problem.p
    c = rc.checks.blowup_c
    if c is None and n * (p - 1.0) <= rc.constants.c < 2.0:
        c = rc.constants.c
    report = bl.blowup_report(trace, n, p, c)
    ok = True
    if report.detected:
        ok &= report.t_estimate is not None and report.t_estimate > 0.95 * trace.t_final
        if report.threshold_met_at is not None:
            _, t_hit = report.threshold_met_at
            try:
                ok &= bl.center_monotonicity_check(trace, report.threshold_value,
                                                   max(t_hit, trace.samples[0][0]))
            except ThresholdNeverMet:
                ok = False
    info = {
        "regime": report.regime,
        "threshold_value": report.threshold_value,
        "threshold_met_at": ([list(report.threshold_met_at[0]), report.threshold_met_at[1]]
                             if report.threshold_met_at else None),
        "detected": report.detected,
        "t_estimate": report.t_estimate,
        "fit_residual": report.fit_residual,
        "method": report.method,
    }
    return ok, info


def _min_hr_over_window(trace: SolveTrace, k, p, loc, window) -> float:
    lo_t, hi_t = window
    best = math.inf
    for t, f in trace.samples:
        if not lo_t <= t <= hi_t:
            continue
        hr = ha.harnack_hr(log_field(f), t, k, p, loc)
        finite = hr.values[np.isfinite(hr.values)]
        if finite.size:
            best = min(best, float(finite.min()))
    if best is math.inf:
        raise ConfigError("hr check: no grid point strictly inside the rectangle")
    return best


def run_pipeline(rc: RunConfig, out: Path, seed: int, allow_inadmissible: bool,
                 require_checks: bool) -> tuple[int, dict]:
    """Solve (or load) and run the enabled checks; returns (exit_code, summary)."""
    n, p, k = rc.problem.n, rc.problem.p, rc.constants
    verdict = co.check_admissible(n, p, k)
    if not verdict.admissible and not allow_inadmissible:
        raise ConfigError(
            "constants are inadmissible: " +
            ", ".join(f"{v.name} (slack {v.slack:.3g})" for v in verdict.violated) +
            "; pass --allow-inadmissible to compute anyway")
    if require_checks and not rc.checks.enabled:
        raise ConfigError("[checks] enabled must name at least one check")
    if "classical" in rc.checks.enabled:
        hyp = co.check_classical_hypothesis(n, p, k)
        if not hyp.admissible and not allow_inadmissible:
            raise ConfigError(
                "constants fail the classical-Harnack hypotheses: " +
                ", ".join(v.name for v in hyp.violated))
    if "hr" in rc.checks.enabled and k.beta == 0:
        raise ConfigError("[checks] hr needs beta > 0 (localizer bound diverges)")

    out.mkdir(parents=True, exist_ok=True)
    if rc.trace_dir:
        trace = traceio.load_trace(rc.trace_dir)
        if trace.grid != rc.problem.grid or trace.p != p:
            raise ConfigError("loaded trace does not match the configured problem")
    else:
        trace = solve(rc.problem, rc.step)

    summary: dict = {
        "status": trace.status.kind,
        "constants": {"alpha": k.alpha, "beta": k.beta, "c": k.c, "a": k.a,
                      "source": rc.constants_source},
        "admissible": verdict.admissible,
        "violated": [v.name for v in verdict.violated],
        "regime": bl.classify_regime(n, p),
        "n_steps": int(len(trace.step_log)),
        "min_h0": None,
        "residual_stats": None,
        "classical_pass_fraction": None,
        "checks": {},
        "seed": seed,
    }
    if trace.status.kind == "blowup":
        summary["t_detect"] = trace.status.t_detect
        t_est, _ = bl.tail_fit(trace, p)
        summary["t_estimate"] = t_est

    if trace.status.kind == "aborted":
        summary["abort_reason"] = trace.status.reason
        write_summary(out / "summary.json", summary)
        return 3, summary

    cs = rc.checks
    window = ha.default_window(trace, cs.t_min_frac, cs.t_max_frac)
    all_pass = True

    if "h0" in cs.enabled:
        report = ha.h0_report(trace, k, p, window, cs.h0_tol)
        summary["min_h0"] = report.min_h0
        summary["checks"]["h0"] = report.passed
        summary["h0"] = {"min": report.min_h0,
                         "argmin_x": list(report.argmin_x),
                         "argmin_t": report.argmin_t,
                         "verdict": report.verdict,
                         "tol": cs.h0_tol}
        write_csv(out / "h0_curve.csv", ["t", "min_h0"], report.curve)
        all_pass &= report.passed

    if "hr" in cs.enabled:
        rect = cs.hr_rect
        if rect is None:
            # central half of the box
            rect = tuple((lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo))
                         for lo, hi in rc.problem.grid.box)
        try:
            loc = ha.make_localizer(rect, n, k, b_margin=cs.hr_b_margin)
        except (BetaZero, ValueError) as exc:
            raise ConfigError(f"[checks] hr: {exc}") from None
        min_hr = _min_hr_over_window(trace, k, p, loc, window)
        summary["hr"] = {"min": min_hr, "rect": [list(iv) for iv in loc.rect],
                         "a": loc.a, "b": loc.b}
        summary["checks"]["hr"] = min_hr >= -cs.h0_tol
        all_pass &= summary["checks"]["hr"]

    if "residual" in cs.enabled:
        stats = ha.evolution_residual(trace, k, p, window)
        summary["residual_stats"] = {"max_rel": stats.max_rel,
                                     "mean_rel": stats.mean_rel,
                                     "max_abs": stats.max_abs,
                                     "normalizer": stats.normalizer,
                                     "n_times": stats.n_times}
        # verdict on the mean: the sup norm is dominated by under-resolved
        # log-field tails near the walls (reported above, never hidden)
        summary["checks"]["residual"] = stats.mean_rel <= cs.residual_tol
        all_pass &= summary["checks"]["residual"]

    if "blowup" in cs.enabled:
        ok, info = _check_blowup(trace, rc)
        summary["blowup"] = info
        summary["checks"]["blowup"] = ok
        all_pass &= ok

    if "classical" in cs.enabled:
        pairs = cl.random_pairs(trace, cs.classical_pairs, seed, window)
        verdicts = cl.classical_harnack_check(trace, pairs, n, cs.classical_tol)
        frac = sum(v.passed for v in verdicts) / len(verdicts)
        summary["classical_pass_fraction"] = frac
        summary["checks"]["classical"] = frac == 1.0
        write_csv(out / "classical_pairs.csv",
                  ["x1", "t1", "x2", "t2", "lhs", "rhs", "slack", "pass"],
                  [(";".join(repr(c) for c in v.x1), v.t1,
                    ";".join(repr(c) for c in v.x2), v.t2,
                    v.lhs, v.rhs, v.slack, v.passed) for v in verdicts])
        all_pass &= summary["checks"]["classical"]

    if "rescale" in cs.enabled:
        disc = rescale_commutation_discrepancy(rc.problem, rc.step,
                                               RescaleSpec(cs.rescale_lambda, p))
        summary["rescale"] = {"lambda": cs.rescale_lambda, "max_rel_discrepancy": disc}
        summary["checks"]["rescale"] = disc <= cs.rescale_tol
        all_pass &= summary["checks"]["rescale"]

    write_summary(out / "summary.json", summary)
    return (0 if all_pass else 1), summary


def rescale_commutation_discrepancy(prob: ProblemSpec, cfg: StepConfig,
                                    spec: RescaleSpec) -> float:
    """max relative gap between solve-then-rescale and rescale-then-solve."""
    direct = rescale_trace(solve(prob, cfg), spec)
    other = solve(rescale_problem(prob, spec), cfg)
    lo = max(direct.samples[0][0], other.samples[0][0])
    hi = min(direct.t_final, other.t_final)
    worst = 0.0
    for t, f in direct.samples:
        if not lo <= t <= hi:
            continue
        g = other.field_at(t)
        denom = float(np.abs(f.values).max())
        worst = max(worst, float(np.abs(f.values - g.values).max()) / denom)
    return worst


# ---------------------------------------------------------------------------
# commands

def cmd_solve(args) -> int:
    rc = load_config(args.config)
    out = Path(args.out or rc.outdir)
    out.mkdir(parents=True, exist_ok=True)
    trace = solve(rc.problem, rc.step)
    traceio.save_trace(out / "trace", trace)
    summary = {
        "status": trace.status.kind,
        "n_steps": int(len(trace.step_log)),
        "n_samples": len(trace.samples),
        "t_final": trace.t_final,
        "constants": {"alpha": rc.constants.alpha, "beta": rc.constants.beta,
                      "c": rc.constants.c, "a": rc.constants.a},
        "regime": bl.classify_regime(rc.problem.n, rc.problem.p),
    }
    if trace.status.kind == "blowup":
        summary["t_detect"] = trace.status.t_detect
        summary["detection_criterion"] = trace.status.criterion
        t_est, quality = bl.tail_fit(trace, rc.problem.p)
        summary["t_estimate"] = t_est
        summary["fit_residual"] = quality
    if trace.status.kind == "aborted":
        summary["abort_reason"] = trace.status.reason
    write_summary(out / "summary.json", summary)
    print(f"status: {trace.status.kind}  samples: {len(trace.samples)}  out: {out}")
    return 3 if trace.status.kind == "aborted" else 0


def cmd_verify(args) -> int:
    rc = load_config(args.config)
    out = Path(args.out or rc.outdir)
    code, summary = run_pipeline(rc, out, args.seed, args.allow_inadmissible,
                                 require_checks=True)
    for name, ok in summary["checks"].items():
        print(f"check {name}: {'pass' if ok else 'FAIL'}")
    print(f"summary: {out / 'summary.json'}")
    return code


def _parse_grid_spec(raw: str) -> np.ndarray:
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid spec {raw!r} must look like lo:hi:count")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ConfigError("grid spec needs count >= 1")
    return np.linspace(lo, hi, count)


def cmd_region(args) -> int:
    alphas = _parse_grid_spec(args.alpha)
    betas = _parse_grid_spec(args.beta)
    if args.p <= 1:
        raise ConfigError("need p > 1")
    rows = []
    any_valid = False
    for alpha in alphas:
        for beta in betas:
            if alpha > beta >= 0:
                any_valid = True
                reg = co.feasible_region(args.n, args.p, alpha, beta)
                rows.append((args.n, args.p, float(alpha), float(beta),
                             reg.c_lo, reg.c_hi, reg.a_min, reg.feasible))
            else:
                rows.append((args.n, args.p, float(alpha), float(beta),
                             math.nan, math.nan, math.nan, False))
    if not any_valid:
        raise ConfigError("no grid point has alpha > beta >= 0")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "region.csv"
    write_csv(path, ["n", "p", "alpha", "beta", "c_lo", "c_hi", "a_min", "feasible"], rows)
    n_feas = sum(1 for r in rows if r[-1])
    print(f"{len(rows)} cells ({n_feas} feasible) -> {path}")
    return 0


def _axis_points(axes: list[tuple[str, str, list[str]]]):
    """Cartesian product of override axes; yields (label, overrides)."""
    names = [f"{sec}.{key}" for sec, key, _ in axes]
    for combo in itertools.product(*(vals for _, _, vals in axes)):
        label = ",".join(f"{n}={v}" for n, v in zip(names, combo))
        overrides = [(sec, key, val) for (sec, key, _), val in zip(axes, combo)]
        yield label, overrides


def _sweep_worker(packed):
    config_path, overrides, outdir, seed, allow_inadmissible = packed
    rc = load_config(config_path, overrides=overrides)
    try:
        code, summary = run_pipeline(rc, Path(outdir), seed, allow_inadmissible,
                                     require_checks=False)
    except EseError as exc:
        return 2, {"status": "config_error", "error": str(exc)}
    return code, summary


def cmd_sweep(args) -> int:
    axes = []
    for spec in args.axis:
        head, sep, tail = spec.partition("=")
        if not sep or "." not in head:
            raise ConfigError(f"axis {spec!r} must look like section.key=v1,v2,...")
        section, _, key = head.partition(".")
        values = [v.strip() for v in tail.split(",") if v.strip()]
        if not values:
            raise ConfigError(f"axis {spec!r} has no values")
        axes.append((section.strip(), key.strip(), values))
    if not axes:
        raise ConfigError("sweep needs at least one --axis")
    load_config(args.config)  # validate template before spawning workers

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    points = list(_axis_points(axes))
    jobs = []
    for i, (label, overrides) in enumerate(points):
        subdir = out / f"point_{i:03d}"
        jobs.append((args.config, overrides, str(subdir), args.seed,
                     args.allow_inadmissible))

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_worker, jobs))
    else:
        results = [_sweep_worker(j) for j in jobs]

    rows = []
    worst = 0
    for i, ((label, _), (code, summary)) in enumerate(zip(points, results)):
        worst = max(worst, code)
        rows.append((i, label, summary.get("status"),
                     summary.get("t_estimate"), summary.get("min_h0"),
                     summary.get("classical_pass_fraction"),
                     code == 0))
        print(f"point {i:03d} [{label}]: {summary.get('status')} "
              f"{'ok' if code == 0 else f'exit {code}'}")
    write_csv(out / "sweep.csv",
              ["point", "axes", "status", "t_estimate", "min_h0",
               "classical_pass_fraction", "pass"], rows)
    return worst


def cmd_preset_list(_args) -> int:
    for name in sorted(co._FIXED_PRESETS):
        n, p, k = co.preset(name)
        print(f"{name}: n={n} p={p} (alpha, beta, c, a)="
              f"({k.alpha}, {k.beta}, {k.c}, {k.a})")
    print("blowup(n,p,c): n=n p=p (2, 1, c, 2n) for n(p-1) <= c < 2")
    return 0


# ---------------------------------------------------------------------------
# entry

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eseharnack",
        description="Solver and Harnack verification harness for f_t = lap(f) + f^p")
    sub = ap.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="integrate and store the trace")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--out", default=None)
    p_solve.set_defaults(fn=cmd_solve)

    p_verify = sub.add_parser("verify", help="run the configured check suite")
    p_verify.add_argument("--config", required=True)
    p_verify.add_argument("--out", default=None)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--allow-inadmissible", action="store_true")
    p_verify.set_defaults(fn=cmd_verify)

    p_region = sub.add_parser("region", help="feasibility map over (alpha, beta)")
    p_region.add_argument("--n", type=int, required=True)
    p_region.add_argument("--p", type=float, required=True)
    p_region.add_argument("--alpha", required=True, metavar="LO:HI:COUNT")
    p_region.add_argument("--beta", required=True, metavar="LO:HI:COUNT")
    p_region.add_argument("--out", default="out")
    p_region.set_defaults(fn=cmd_region)

    p_sweep = sub.add_parser("sweep", help="grid of runs over config overrides")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--axis", action="append", default=[],
                         metavar="SECTION.KEY=V1,V2,...")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--out", default="out")
    p_sweep.add_argument("--allow-inadmissible", action="store_true")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_list = sub.add_parser("preset-list", help="show the constant catalog")
    p_list.set_defaults(fn=cmd_preset_list)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except EseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
