"""Batch front-end: configured experiments with reproducible artifacts.

Every experiment is described by an ExperimentConfig (flag-driven or loaded
from a JSON file), runs deterministically from one seed, and writes its
CSV/JSON artifacts plus a manifest into the output directory.  Exit status:
0 when all contained verifications pass, 1 on a verification failure (the
witness lands in the output), 2 on validation problems.

All randomness flows from the single --seed flag; the default is fixed, not
time-based, so bare invocations reproduce.  Thread count never changes any
output byte.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import asymptotics as asy
from . import goldbach as gb
from . import randmodel as rm
from .growth import GrowthFn, parse_growth
from .representations import build_table, save_table_csv
from .sequences import CounterexampleSpec, counterexample_count, generate, save_sequence

__all__ = ["ExperimentConfig", "ConfigError", "run", "emit_plotdata", "main"]

KINDS = (
    "repr-table",
    "verify",
    "constants",
    "sample",
    "concentration",
    "goldbach",
    "counterexample",
)
VERIFY_CLAIMS = (
    "sandwich",
    "ordering",
    "shift",
    "integral",
    "second-moment",
    "exponent",
)
GOLDBACH_MODES = ("scan", "records")


class ConfigError(ValueError):
    """Invalid experiment configuration (maps to exit status 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete description of one experiment run.

    Round-trips losslessly through JSON; unknown fields are rejected.
    """

    kind: str
    claim: str = ""
    mode: str = ""
    seq: str = "primes"
    f: str = ""
    eps: str = ""
    d: int = 2
    m: int = 2
    horizon: int = 10_000
    xmin: int = 10
    xmax: int = 10_000
    grid_points: int = 25
    nmin: int = 0
    nmax: int = 0
    seed: int = 20260809
    trials: int = 100
    gain: float = 1.0
    epsilon: float = 0.98
    n_threshold: int = 1000
    probes: int = 20
    limit: int = 200_000
    c2_limit: int = 1_000_000
    depth: int = 4
    shift_exponent: float = 0.5
    method: str = "fast"
    threads: int = 1
    out_dir: str = "out"

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.kind == "verify" and self.claim not in VERIFY_CLAIMS:
            raise ConfigError(
                f"verify needs a claim from {VERIFY_CLAIMS}, got {self.claim!r}"
            )
        if self.kind == "goldbach" and self.mode not in GOLDBACH_MODES:
            raise ConfigError(
                f"goldbach needs a mode from {GOLDBACH_MODES}, got {self.mode!r}"
            )
        if self.method not in ("fast", "direct"):
            raise ConfigError(f"unknown table method {self.method!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.xmin >= self.xmax:
            raise ConfigError("xmin must be below xmax")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "kind" not in data:
            raise ConfigError("config must name an experiment kind")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)


def _grid(config: ExperimentConfig) -> np.ndarray:
    return np.unique(
        np.geomspace(config.xmin, config.xmax, config.grid_points).astype(np.int64)
    )


def _growth(spec: str, what: str) -> GrowthFn:
    if not spec:
        raise ConfigError(f"experiment needs a growth spec for {what}")
    try:
        return parse_growth(spec)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _sequence(config: ExperimentConfig, horizon: int):
    try:
        return generate(config.seq, horizon)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def emit_plotdata(curves: dict, out_dir: Path, stem: str) -> list:
    """Write whitespace-separated columnar files, one per named curve.

    ``curves`` maps curve name to a tuple of equal-length columns; the file
    ``<stem>_<name>.dat`` holds them side by side.
    """
    written = []
    for name, cols in curves.items():
        path = out_dir / f"{stem}_{name}.dat"
        arrays = [list(c) for c in cols]
        with path.open("w", newline="\n") as fh:
            for row in zip(*arrays):
                fh.write(" ".join(repr(v) if isinstance(v, float) else str(v) for v in row))
                fh.write("\n")
        written.append(path.name)
    return written


def _write_manifest(out_dir: Path, config: ExperimentConfig, t0: float, extra: dict):
    manifest = {
        "config": config.to_dict(),
        "version": __version__,
        "wall_time_s": round(time.time() - t0, 3),
    }
    manifest.update(extra)
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _run_repr_table(config: ExperimentConfig, out_dir: Path) -> tuple[int, dict]:
    seq = _sequence(config, config.horizon)
    table = build_table(seq, config.d, config.horizon, config.method)
    save_table_csv(table, out_dir / "table.csv")
    return 0, {"artifacts": ["table.csv"], "s_d_at_horizon": int(table.prefix[-1])}


def _run_verify(config: ExperimentConfig, out_dir: Path) -> tuple[int, dict]:
    seq = _sequence(config, config.xmax)
    grid = _grid(config)
    claim = config.claim
    if claim == "sandwich":
        report = asy.sandwich_check(seq, config.d, grid)
    elif claim == "ordering":
        report = asy.ordering_check(seq, config.d, grid)
    elif claim == "shift":
        report = asy.shift_stability(seq, config.d, config.shift_exponent, grid)
    elif claim == "integral":
        f = _growth(config.f, "f")
        eps = _growth(config.eps, "eps") if config.eps else GrowthFn(1.0, 0.0, 0.0, 1.01)
        report = asy.integral_formula_check(seq, f, eps, config.d, grid)
    elif claim == "second-moment":
        report = asy.second_moment_ratio(seq, config.d, grid)
    else:  # exponent
        slope = asy.exponent_estimate(seq, grid)
        (out_dir / "report.json").write_text(
            json.dumps({"claim": f"exponent[{config.seq}]", "slope": slope}, indent=2)
            + "\n"
        )
        return 0, {"slope": slope}
    asy.save_report_json(report, out_dir / "report.json")
    asy.save_report_csv(report, out_dir / "report.csv")
    emit_plotdata(
        {k: (report.grid, v) for k, v in report.values.items()}, out_dir, claim
    )
    if not report.passed:
        print(f"verification failed: {report.claim} witness={report.witness}")
    return (0 if report.passed else 1), {
        "claim": report.claim,
        "verdict": "pass" if report.passed else "fail",
        "witness": report.witness,
    }


def _run_constants(config: ExperimentConfig, out_dir: Path) -> tuple[int, dict]:
    f = _growth(config.f, "f")
    grid = _grid(config)
    est = asy.constant_estimate(f, config.m, grid)
    emit_plotdata(
        {"ratio": (est.grid, est.ratio), "density_ratio": (est.grid, est.density_ratio)},
        out_dir,
        f"c_m{config.m}",
    )
    (out_dir / "constants.json").write_text(
        json.dumps(
            {"f": est.f_spec, "m": est.m, "grid": list(est.grid),
             "ratio": list(est.ratio), "density_ratio": list(est.density_ratio)},
            indent=2,
        )
        + "\n"
    )
    return 0, {"final_ratio": est.ratio[-1]}


def _alpha_spec(config: ExperimentConfig) -> rm.AlphaSpec:
    f = _growth(config.f, "f")
    if config.gain < 1.0:
        raise ConfigError("gain must be >= 1")
    return rm.AlphaSpec.from_growth(f, config.gain)


def _probe_set(config: ExperimentConfig, spec: rm.AlphaSpec) -> np.ndarray:
    lo = max(10 * spec.n0, 100)
    return np.unique(
        np.geomspace(lo, config.horizon, config.probes).astype(np.int64)
    )


def _run_sample(config: ExperimentConfig, out_dir: Path) -> tuple[int, dict]:
    spec = _alpha_spec(config)
    run_desc = rm.SampleRun(
        master_seed=config.seed, trials=config.trials,
        horizon=config.horizon, threads=config.threads,
    )
    omega = rm.sample_sequence(spec, config.horizon, rm.trial_generator(config.seed, 0))
    save_sequence(omega, out_dir / "omega.dat")
    probes = _probe_set(config, spec)
    mc = rm.mc_expectation_rd(spec, config.d, probes, run_desc)
    with (out_dir / "stats.csv").open("w", newline="\n") as fh:
        fh.write("n,d,mean,variance,stderr,normalized\n")
        for n, d, mean, var, se, norm in mc.rows():
            fh.write(f"{n},{d},{mean!r},{var!r},{se!r},{norm!r}\n")
    # oracle comparison is exact only for d = 2
    z_worst = None
    if config.d == 2:
        z_worst = 0.0
        for i, n in enumerate(mc.probe_ns):
            exact = rm.exact_expectation_r2(spec, n, config.horizon)
            se = mc.stderr[i] if mc.stderr[i] > 0 else float("inf")
            z_worst = max(z_worst, abs(mc.mean[i] - exact) / se)
    extra = {
        "spec": spec.describe(),
        "run": run_desc.describe(),
        "probe_ns": [int(n) for n in probes],
        "worst_z_vs_exact": z_worst,
    }
    status = 0 if z_worst is None or z_worst <= 3.0 else 1
    if status:
        print(f"verification failed: MC mean departs from exact E r_2 (z={z_worst:.2f})")
    return status, extra


def _run_concentration(config: ExperimentConfig, out_dir: Path) -> tuple[int, dict]:
    spec = _alpha_spec(config)
    run_desc = rm.SampleRun(
        master_seed=config.seed, trials=config.trials,
        horizon=config.horizon, threads=config.threads,
    )
    try:
        report = rm.concentration_experiment(
            spec, config.epsilon, run_desc, config.n_threshold
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    emit_plotdata(
        {"exceedance": (report.ns, report.exceed_freq, report.ceiling)},
        out_dir,
        "concentration",
    )
    violations = report.ceiling_violations()
    summary = {
        "spec": spec.describe(),
        "run": run_desc.describe(),
        "epsilon": report.epsilon,
        "delta": report.delta,
        "frac_trials_all_positive": report.frac_trials_all_positive,
        "min_r2_overall": int(report.min_r2_per_trial.min()),
        "ceiling_violations_3sigma": violations,
    }
    (out_dir / "concentration.json").write_text(json.dumps(summary, indent=2) + "\n")
    status = 0 if violations == 0 else 1
    if status:
        print(f"verification failed: {violations} exceedance frequencies above ceiling")
    return status, summary


def _run_goldbach(config: ExperimentConfig, out_dir: Path) -> tuple[int, dict]:
    if config.mode == "scan":
        tables = gb.ArithTables(max(2 * config.limit, 1000))
        scan = gb.prop43_scan(config.limit, tables)
        (out_dir / "scan.json").write_text(json.dumps(scan.to_dict(), indent=2) + "\n")
        status = 0 if scan.g_positive_verified else 1
        return status, scan.to_dict()
    nmin = config.nmin or config.xmin
    nmax = config.nmax or config.xmax
    if nmin < 2 or nmin >= nmax:
        raise ConfigError("records need 2 <= nmin < nmax")
    tables = gb.ArithTables(max(2 * nmax, config.c2_limit, 1000))
    c2 = gb.c2_constant(config.c2_limit, tables)
    records = [gb.goldbach_record(n, tables, c2) for n in range(nmin, nmax + 1)]
    gb.save_records_csv(records, out_dir / "records.csv", c2)
    ratio_rows = [(2 * r.n, r.r2 / r.predA) for r in records if r.predA > 0]
    emit_plotdata(
        {"r2_over_predA": tuple(zip(*ratio_rows))}, out_dir, "goldbach"
    )
    bad = [r.n for r in records if r.g == 0]
    status = 0 if not bad else 1
    if status:
        print(f"verification failed: g(n) = 0 at {bad[:5]}")
    return status, {"c2": c2, "n_range": [nmin, nmax], "g_zero": bad}


def _run_counterexample(config: ExperimentConfig, out_dir: Path) -> tuple[int, dict]:
    spec = CounterexampleSpec(depth=config.depth)
    rows = []
    for k in range(1, config.depth + 1):
        a = spec.anchor(k)
        s_a = counterexample_count(spec, a)
        s_2a = counterexample_count(spec, 2 * a)
        rows.append((k, a, s_a, s_2a, s_2a / s_a))
    with (out_dir / "counterexample.csv").open("w", newline="\n") as fh:
        fh.write("k,anchor,s_at_anchor,s_at_twice,ratio\n")
        for k, a, s_a, s_2a, ratio in rows:
            fh.write(f"{k},{a},{s_a},{s_2a},{ratio!r}\n")
    # closed form against brute enumeration on a bitmap horizon
    brute_top = min(config.horizon, 100_000)
    seq = generate(f"stoehr_counterexample({config.depth})", brute_top)
    mismatches = [
        x for x in range(0, brute_top + 1, 997)
        if counterexample_count(spec, x) != seq.count_upto(x)
    ]
    ratios = [row[4] for row in rows]
    increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
    status = 0 if increasing and not mismatches else 1
    if status:
        print("verification failed: counterexample ratios or brute check")
    return status, {
        "ratios": ratios,
        "strictly_increasing": increasing,
        "brute_mismatches": mismatches,
    }


_RUNNERS = {
    "repr-table": _run_repr_table,
    "verify": _run_verify,
    "constants": _run_constants,
    "sample": _run_sample,
    "concentration": _run_concentration,
    "goldbach": _run_goldbach,
    "counterexample": _run_counterexample,
}


def run(config: ExperimentConfig) -> int:
    """Execute one experiment; writes artifacts and returns the exit status."""
    config.validate()
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.time()
    status, extra = _RUNNERS[config.kind](config, out_dir)
    _write_manifest(out_dir, config, t0, {"status": status, "result": extra})
    return status


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master seed (fixed default)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (or ADDBASIS_THREADS); never affects results")
    parser.add_argument("--out", dest="out_dir", default=None, help="output directory")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="addbasis",
        description="Exact representation-function workbench: tables, "
        "asymptotic verification, random-sequence simulation, Goldbach records.",
    )
    parser.add_argument("--config", help="JSON experiment config (overrides subcommand)")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("repr-table", help="build an exact r_d table and dump CSV")
    p.add_argument("--seq", default="primes")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--method", choices=("fast", "direct"), default="fast")
    _add_common(p)

    p = sub.add_parser("verify", help="run one asymptotic verification claim")
    p.add_argument("claim", choices=VERIFY_CLAIMS)
    p.add_argument("--seq", default="primes")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--f", default="")
    p.add_argument("--eps", default="")
    p.add_argument("--xmin", type=int, default=10)
    p.add_argument("--xmax", type=int, default=10_000)
    p.add_argument("--grid-points", type=int, default=25)
    p.add_argument("--shift-exponent", type=float, default=0.5)
    _add_common(p)

    p = sub.add_parser("constants", help="estimate the limit constants c_{f,m}")
    p.add_argument("--f", required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--xmin", type=int, default=100)
    p.add_argument("--xmax", type=int, default=1_000_000)
    p.add_argument("--grid-points", type=int, default=7)
    _add_common(p)

    p = sub.add_parser("sample", help="Monte Carlo E(r_d) campaign in (S, alpha)")
    p.add_argument("--f", required=True)
    p.add_argument("--gain", type=float, default=1.0)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--probes", type=int, default=20)
    _add_common(p)

    p = sub.add_parser("concentration", help="Chernoff concentration experiment")
    p.add_argument("--f", required=True)
    p.add_argument("--gain", type=float, default=4.0)
    p.add_argument("--epsilon", type=float, default=0.98)
    p.add_argument("--horizon", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-threshold", type=int, default=1000)
    _add_common(p)

    p = sub.add_parser("goldbach", help="window-inequality scan or per-n records")
    p.add_argument("mode", choices=GOLDBACH_MODES)
    p.add_argument("--limit", type=int, default=200_000)
    p.add_argument("--nmin", type=int, default=0)
    p.add_argument("--nmax", type=int, default=0)
    p.add_argument("--c2-limit", type=int, default=1_000_000)
    _add_common(p)

    p = sub.add_parser("counterexample", help="block-construction growth ratios")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--horizon", type=int, default=100_000)
    _add_common(p)

    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        return ExperimentConfig.from_json_file(args.config)
    if not args.command:
        raise ConfigError("no experiment requested; pass a subcommand or --config")
    data = {
        k: v
        for k, v in vars(args).items()
        if k not in ("config", "command") and v is not None
    }
    data["kind"] = args.command
    if "threads" not in data:
        env = os.environ.get("ADDBASIS_THREADS")
        if env:
            try:
                data["threads"] = int(env)
            except ValueError as exc:
                raise ConfigError(f"bad ADDBASIS_THREADS value {env!r}") from exc
    return ExperimentConfig.from_dict(data)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
