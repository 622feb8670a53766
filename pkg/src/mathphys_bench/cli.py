"""Command-line front end: ``mathphys-bench verify|sweep|simulate``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import cosmo, electrostatics, heatburgers, mechanics, quantum, ultrametric, walk
from .errors import MathPhysError
from .numerics import RandomStream
from .suites import PROBLEMS, SCHEMA_VERSION, run_suite

SEED_ENV = "MATHPHYS_BENCH_SEED"
SCENARIOS = ("top", "walk", "cosmo", "heat", "burgers")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def fmt_float(x: float) -> str:
    """17 significant digits, which round-trips every double."""
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return "%.17g" % x


def _json_value(v, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, str):
        out = ['"']
        for ch in v:
            if ch in '"\\':
                out.append("\\" + ch)
            elif ord(ch) < 0x20:
                out.append("\\u%04x" % ord(ch))
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f'{pad}{_json_value(str(k), indent, level + 1)}: {_json_value(x, indent, level + 1)}'
                 for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple)) for x in v):
            return "[" + ", ".join(_json_value(x, indent, level + 1) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _json_value(x, indent, level + 1) for x in v) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps_json(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    return _json_value(obj, 2, 0) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_csv_cell(x) for x in v)
    if v is None:
        return ""
    return str(v)


def dumps_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(x) for x in row])
    return buf.getvalue()


def _emit(text: str, out_dir: str | None, name: str) -> None:
    if out_dir is None:
        sys.stdout.write(text)
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(text)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _parse_kv(items: list[str], what: str) -> dict[str, str]:
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"{what} expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment. Keys match the long flags."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    return {k.replace("-", "_"): v for k, v in _parse_kv([ln for ln in lines if ln], "config").items()}


def _resolve_seed(value) -> int:
    if value is None:
        value = os.environ.get(SEED_ENV, "0")
    try:
        return int(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"seed must be an integer, got {value!r}") from exc


def _tol_overrides(items: list[str]) -> dict[str, float]:
    out = {}
    for k, v in _parse_kv(items, "--tol-override").items():
        try:
            out[k] = float(v)
        except ValueError as exc:
            raise UsageError(f"tolerance for {k} is not a number: {v!r}") from exc
    return out


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.problem == "all":
        problems = list(PROBLEMS)
    elif args.problem in PROBLEMS:
        problems = [args.problem]
    else:
        raise UsageError(f"unknown problem {args.problem!r}; choose from {', '.join(PROBLEMS)} or all")
    overrides = _tol_overrides(args.tol_override)
    rows, used = [], set()
    for pid in problems:
        ctx = run_suite(pid, args.seed, overrides)
        used |= ctx.used
        rows.extend(c.as_dict() for c in ctx.checks)
    unused = sorted(set(overrides) - used)
    if unused:
        raise UsageError(f"tolerance override(s) matched no check: {', '.join(unused)}")
    n_fail = sum(not r["passed"] for r in rows)
    if args.format == "json":
        text = dumps_json({"schema_version": SCHEMA_VERSION, "command": "verify", "problem": args.problem,
                           "seed": args.seed, "n_checks": len(rows), "n_failed": n_fail, "checks": rows})
        name = f"verify_{args.problem}.json"
    else:
        keys = ["schema_version", "problem", "check", "computed", "oracle", "tolerance", "mode", "passed",
                "provenance", "paper_anchor"]
        text = dumps_csv(keys, [[SCHEMA_VERSION] + [r[k] for k in keys[1:]] for r in rows])
        name = f"verify_{args.problem}.csv"
    _emit(text, args.out, name)
    for r in rows:
        if not r["passed"]:
            print(f"FAIL {r['problem']}.{r['check']}: computed={r['computed']!r} oracle={r['oracle']!r}",
                  file=sys.stderr)
    print(f"{len(rows) - n_fail}/{len(rows)} checks passed", file=sys.stderr)
    return 1 if n_fail else 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _grid(lo: float, hi: float, n: int, log: bool) -> np.ndarray:
    if n < 1:
        raise UsageError("sweep needs n >= 1")
    if log:
        if not (lo > 0 and hi > 0):
            raise UsageError("log-spaced sweep needs positive bounds")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _sweep_p03(xs, opts):
    a, b, k = float(opts.get("a", 2)), float(opts.get("b", 3)), int(opts.get("k", 1))
    p = ultrametric.SeriesParams(a, b, k)
    rows = []
    for t in xs:
        lo, hi = ultrametric.asymptotic_bounds_S(p, t)
        rows.append([t, ultrametric.sum_S(p, t), lo, hi, ultrametric.sum_R(p, t)])
    return ["t", "sum_S", "lower", "upper", "sum_R"], rows


def _sweep_p05(xs, opts):
    p = walk.WalkParams(float(opts.get("alpha", 0.5)), float(opts.get("tau", 1.0)))
    return (["t", "dispersion", "occupation_m0", "asymptotic_m0"],
            [[t, walk.dispersion(p, t), walk.occupation(p, 0, t),
              walk.occupation_asymptotic(p, t) if t > 0 else math.nan] for t in xs])


def _sweep_p06(xs, opts):
    p = cosmo.CosmoParams(int(opts.get("k", 0)), float(opts.get("N", 1)), float(opts.get("S", 1)))
    rows = []
    for T in xs:
        rho, pr, s = cosmo.thermo(p, T)
        h2 = cosmo.hubble_sq(p, T)
        rows.append([T, rho, pr, s, h2])
    return ["T", "rho", "p", "s", "hubble_sq"], rows


def _sweep_p07_s(xs, opts):
    alphas = [float(a) for a in str(opts.get("alphas", "0.5,1,2")).split(",")]
    for s in xs:
        if not s > 1:
            raise UsageError("s must exceed 1")
    return (["s"] + [f"f_alpha={a:g}" for a in alphas],
            [[s] + [electrostatics.dimensionless_force(a, s) for a in alphas] for s in xs])


def _sweep_p07_alpha(xs, opts):
    rows = []
    for a in xs:
        if not a > 0:
            raise UsageError("alpha must be positive")
        s_max, f_max = electrostatics.force_maximum(a)
        rows.append([a, electrostatics.equilibrium_distance(a), s_max, f_max])
    return ["alpha", "s0", "s_max", "f_max"], rows


def _sweep_p10(xs, opts):
    alpha, eps = float(opts.get("alpha", 0.5)), float(opts.get("eps", 0.4))
    rows = []
    for bg in xs:
        d = mechanics.DimensionlessTop(alpha, 1.0, bg)
        band = mechanics.motion_band(d, eps)
        a0, a1, a2 = band.a0, band.a1, band.a2
        rows.append([bg, a0, a1, a2, band.z_plus, band.z_minus, band.lifts_up, band.cos_theta_range[0],
                     band.cos_theta_range[1]])
    return ["betagamma", "a0", "a1", "a2", "z_plus", "z_minus", "lifts_up", "cos_lo", "cos_hi"], rows


def _sweep_p11(xs, opts):
    a, b = float(opts.get("a", 1.3)), float(opts.get("b", 1.0))
    count = int(opts.get("count", 6))
    rows = [[phi] + list(quantum.lowest_exact(quantum.TorusSpec(a, b, phi, float(opts.get("phi2", 0.0))), count))
            for phi in xs]
    return ["phi1"] + [f"E{i}" for i in range(count)], rows


def _sweep_p12(xs, opts):
    rows = []
    for a in xs:
        row = [a]
        for form in ("lorentz_1d", "lorentz_sq_x2_1d", "lorentz_cube_1d"):
            row.append(quantum.nascent_pairing(quantum.NascentFamily(form, a), quantum.bump, 1.0))
        row.append(quantum.nascent_pairing(quantum.NascentFamily("lorentz_sq_3d", a), quantum.gaussian_cutoff, 2.0))
        row.append(quantum.coulomb_momentum_limit(a))
        rows.append(row)
    return ["a", "lorentz_1d", "lorentz_sq_x2_1d", "lorentz_cube_1d", "lorentz_sq_3d", "coulomb_ratio"], rows


def _sweep_p13(xs, opts):
    r = heatburgers.RodSpec(float(opts.get("l", 1.0)), float(opts.get("a_sq", 1.0)), float(opts.get("c", 1.0)))
    Q = float(opts.get("Q", 1.0))
    x = float(opts.get("x", 0.5 * r.l))
    return (["t", "case_a", "case_b", "tent"],
            [[t, heatburgers.series_case_a(r, float(opts.get("T0", 1.0)), x, t),
              heatburgers.series_case_b(r, Q, x, t), heatburgers.stationary_omega(r, Q, x)] for t in xs])


SWEEPS = {
    ("p03", "t"): (_sweep_p03, True),
    ("p05", "t"): (_sweep_p05, False),
    ("p06", "T"): (_sweep_p06, True),
    ("p07", "s"): (_sweep_p07_s, False),
    ("p07", "alpha"): (_sweep_p07_alpha, True),
    ("p10", "betagamma"): (_sweep_p10, False),
    ("p11", "phi"): (_sweep_p11, False),
    ("p12", "a"): (_sweep_p12, True),
    ("p13", "t"): (_sweep_p13, False),
}


def cmd_sweep(args) -> int:
    key = (args.problem, args.parameter)
    if key not in SWEEPS:
        known = ", ".join(f"{p} {q}" for p, q in SWEEPS)
        raise UsageError(f"unknown sweep parameter {args.parameter!r} for {args.problem}; known: {known}")
    fn, log_default = SWEEPS[key]
    log = log_default if args.spacing is None else args.spacing == "log"
    xs = _grid(args.lo, args.hi, args.n, log)
    header, rows = fn([float(x) for x in xs], _parse_kv(args.set, "--set"))
    if args.format == "json":
        text = dumps_json({"schema_version": SCHEMA_VERSION, "command": "sweep", "problem": args.problem,
                           "parameter": args.parameter, "columns": header,
                           "rows": [[_plain_cell(x) for x in r] for r in rows]})
    else:
        text = dumps_csv(header, rows)
    _emit(text, args.out, f"sweep_{args.problem}_{args.parameter}.{args.format}")
    return 0


def _plain_cell(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _sim_top(opts, seed):
    alpha = float(opts.get("alpha", 0.5))
    bg = float(opts.get("betagamma", 0.1))
    eps = float(opts.get("eps", 0.4))
    beta = float(opts.get("beta", 1.0))
    omega0 = float(opts.get("omega0", 5.0))
    if not bg > 0:
        raise UsageError("betagamma must be positive")
    spec = mechanics.TopSpec(m=beta, l=1.0, J=1.0, J0=alpha, omega0=omega0, epsilon=eps,
                             g=bg / beta * omega0 ** 2)
    run = mechanics.simulate_top(spec, float(opts.get("t_end", 50.0 / omega0)))
    e0, pphi0, ppsi0 = run.initial_energy(), run.p_phi()[0], run.p_psi()[0]
    table = run.table()
    header = ["t", "theta", "phi", "psi", "x_m", "y_m", "E", "p_phi", "p_psi", "E_drift", "p_phi_drift",
              "p_psi_drift"]
    rows = [list(r) + [r[6] - e0, r[7] - pphi0, r[8] - ppsi0] for r in table]
    band = mechanics.motion_band(mechanics.dimensionless(spec), eps)
    summary = dict(run.drifts(), reduced_equation=run.reduced_equation_residual(), lifts_up=band.lifts_up,
                   cos_lo=band.cos_theta_range[0], cos_hi=band.cos_theta_range[1])
    return header, rows, summary


def _sim_walk(opts, seed):
    p = walk.WalkParams(float(opts.get("alpha", 0.5)), float(opts.get("tau", 1.0)))
    t = float(opts.get("t", 10.0))
    n = int(opts.get("samples", 100_000))
    law = walk.simulate(p, t, n, RandomStream(seed, 5))
    sites, probs = walk.occupation_law(p, t)
    rows = [[int(m), law.counts.get(int(m), 0) / n, float(pr)] for m, pr in zip(sites, probs)]
    stat, dof, pval = walk.chi_square_test(law, p)
    summary = {"variance": law.variance(), "dispersion": walk.dispersion(p, t),
               "variance_stderr": law.variance_stderr(), "chi2": stat, "dof": dof, "p_value": pval}
    return ["m", "empirical", "bessel_law"], rows, summary


def _sim_cosmo(opts, seed):
    p = cosmo.CosmoParams(int(opts.get("k", 0)), float(opts.get("N", 1.0)), float(opts.get("S", 1.0)))
    T0, t_end = float(opts.get("T0", 1.0)), float(opts.get("t_end", 10.0))
    tr = cosmo.evolve(p, T0, t_end)
    closed = cosmo.flat_closed_form(p, T0, tr.t) if p.k == 0 else np.full_like(tr.t, math.nan)
    rows = [[t, T, a, c] for t, T, a, c in zip(tr.t, tr.T, tr.a, closed)]
    summary = {"aT_drift": cosmo.reciprocity_drift(tr), "sa3_drift": cosmo.entropy_drift(tr)}
    if p.k == 0:
        summary["closed_form_error"] = float(np.max(np.abs(tr.T / closed - 1)))
    return ["t", "T", "a", "T_flat_closed_form"], rows, summary


def _sim_heat(opts, seed):
    case = str(opts.get("case", "b"))
    r = heatburgers.RodSpec(float(opts.get("l", 1.0)), float(opts.get("a_sq", 1.0)), float(opts.get("c", 1.0)))
    nx, nt = int(opts.get("nx", 200)), int(opts.get("nt", 400))
    t_end = float(opts.get("t_end", 3.0 * r.time_scale if case == "a" else 10.0 * r.time_scale))
    if case == "a":
        init, q = heatburgers.Field1D([0.0, r.l], [float(opts.get("T0", 1.0))] * 2), 0.0
    elif case == "b":
        init, q = heatburgers.Field1D([0.0, r.l], [0.0, 0.0]), float(opts.get("Q", 1.0))
    else:
        raise UsageError("heat case must be a or b")
    n_snap = 10
    steps = [int(round(nt * (i + 1) / n_snap)) for i in range(n_snap)]
    _, shots = heatburgers.fd_heat_solve(r, init, q, t_end, nx, nt, snapshots=steps)
    probes = np.linspace(0.0, r.l, 11)
    rows = []
    for f in shots:
        for x in probes:
            ref = (heatburgers.series_case_a(r, init.values[0], x, f.t) if case == "a"
                   else heatburgers.series_case_b(r, q, x, f.t))
            tent = heatburgers.stationary_omega(r, q, x) if case == "b" else 0.0
            rows.append([f.t, x, float(f.interpolate(x)), ref, tent])
    last = [row for row in rows if row[0] == shots[-1].t]
    peak = max(abs(row[4]) for row in last) or 1.0
    summary = {"final_distance_to_stationary": max(abs(row[2] - row[4]) for row in last) / peak}
    return ["t", "x", "T_fd", "T_series", "stationary"], rows, summary


def _sim_burgers(opts, seed):
    nu = float(opts.get("nu", 1.0))
    n = int(opts.get("n", 16))
    x = np.linspace(float(opts.get("x_lo", -1.0)), float(opts.get("x_hi", 1.0)), n + 1)
    t = np.linspace(float(opts.get("t_lo", 1.0)), float(opts.get("t_hi", 1.25)), n + 1)
    v = heatburgers.SpaceTimeField.sample(lambda a, b: heatburgers.two_bump_velocity(nu, a, b), x, t)
    rows = [[ti, xj, v.values[i, j]] for i, ti in enumerate(t) for j, xj in enumerate(x)]
    return ["t", "x", "v"], rows, {"burgers_residual": heatburgers.burgers_residual(nu, v)}


SIMULATIONS = {"top": _sim_top, "walk": _sim_walk, "cosmo": _sim_cosmo, "heat": _sim_heat,
               "burgers": _sim_burgers}


def cmd_simulate(args) -> int:
    if args.scenario not in SIMULATIONS:
        raise UsageError(f"unknown scenario {args.scenario!r}; choose from {', '.join(SCENARIOS)}")
    opts = _parse_kv(args.set, "--set")
    for name in ("alpha", "betagamma", "eps", "k", "case"):
        val = getattr(args, name, None)
        if val is not None:
            opts[name] = val
    header, rows, summary = SIMULATIONS[args.scenario](opts, args.seed)
    if args.format == "json":
        text = dumps_json({"schema_version": SCHEMA_VERSION, "command": "simulate", "scenario": args.scenario,
                           "seed": args.seed, "summary": {k: _plain_cell(v) for k, v in summary.items()},
                           "columns": header, "rows": [[_plain_cell(x) for x in r] for r in rows]})
    else:
        text = dumps_csv(header, rows)
    _emit(text, args.out, f"simulate_{args.scenario}.{args.format}")
    for k, v in summary.items():
        print(f"{k} = {_csv_cell(_plain_cell(v))}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", default=None, help=f"integer seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--tol-override", action="append", default=[], metavar="CHECK=TOL",
                        help="replace the tolerance of a check (name or problem.name)")
    common.add_argument("--out", default=None, metavar="DIR", help="write the report into DIR instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--config", default=None, metavar="FILE", help="flat key=value file with flag defaults")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="model parameter for sweep/simulate")

    parser = _Parser(prog="mathphys-bench", description="Verification suites for fourteen worked problems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("problem", help="p01..p14 or all")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="tabulate outputs over a parameter range")
    s.add_argument("problem")
    s.add_argument("parameter")
    s.add_argument("lo", type=float)
    s.add_argument("hi", type=float)
    s.add_argument("n", type=int)
    s.add_argument("--spacing", choices=("lin", "log"), default=None)
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("simulate", parents=[common], help="run a simulation scenario")
    m.add_argument("scenario")
    m.add_argument("--alpha", default=None)
    m.add_argument("--betagamma", default=None)
    m.add_argument("--eps", default=None)
    m.add_argument("--k", default=None)
    m.add_argument("--case", default=None)
    m.set_defaults(func=cmd_simulate)
    return parser


def _apply_config(args, parser) -> None:
    if not args.config:
        return
    cfg = read_config(args.config)
    list_keys = {"tol_override", "set"}
    for key, value in cfg.items():
        if not hasattr(args, key) or key in ("command", "func", "config"):
            raise UsageError(f"unknown config key {key!r}")
        if key in list_keys:
            setattr(args, key, [x.strip() for x in value.split(",") if x.strip()] + getattr(args, key))
        elif getattr(args, key) is None:
            setattr(args, key, value)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, parser)
        args.seed = _resolve_seed(args.seed)
        if args.format is None:
            args.format = "json" if args.command == "verify" else "csv"
        elif args.format not in ("json", "csv"):
            raise UsageError(f"format must be json or csv, got {args.format!r}")
        return args.func(args)
    except UsageError as exc:
        print(f"mathphys-bench: error: {exc}", file=sys.stderr)
        return 2
    except (MathPhysError, ValueError) as exc:
        print(f"mathphys-bench: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
