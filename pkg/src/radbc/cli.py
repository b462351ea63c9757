"""Command-line interface: ``radbc {poles,quad,bound,simulate,sweep}``.

Exit codes: 0 success, 2 usage error, 3 config validation error,
4 numerical failure.  Errors are reported on stderr as one JSON object.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import branchcut_quadrature as bq
from . import error_bounds as eb
from . import wave_sim as ws
from .errors import ConfigError, NumericalError, UnknownFunction
from .modes import get_mode
from .rational_dtn import poles_and_residues

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3, 4

POLES_COLUMNS = ("j", "theta_j", "pole_im", "residue")
QUAD_COLUMNS = ("rule", "n", "t", "k_abs", "exact_re", "exact_im",
                "approx_re", "approx_im", "abs_error")
BOUND_COLUMNS = ("n", "t", "k", "M", "measured_error", "bound", "ratio", "holds")
TIMESERIES_COLUMNS = ("t", "error")

MAX_POLES_ORDER = 1000
MAX_QUAD_T = 100.0
MAX_SIM_ORDER = 8


class UsageError(Exception):
    pass


def fmt(value):
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


def to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_json(rows, columns):
    return json.dumps([{c: _json_safe(r[c]) for c in columns} for r in rows], indent=2) + "\n"


def emit(rows, columns, args):
    text = to_json(rows, columns) if args.format == "json" else to_csv(rows, columns)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def poles_rows(n):
    if not 1 <= n <= MAX_POLES_ORDER:
        raise UsageError(f"--n must lie in [1, {MAX_POLES_ORDER}], got {n}")
    abc = poles_and_residues(n)
    return [
        {"j": j, "theta_j": th, "pole_im": z.imag, "residue": r}
        for j, (th, z, r) in enumerate(zip(abc.thetas, abc.poles, abc.residues), start=1)
    ]


def quad_row(g_name, n, t, k, rule, m=None, tol=1e-13):
    if not 0 <= t <= MAX_QUAD_T:
        raise UsageError(f"--t must lie in [0, {MAX_QUAD_T:g}], got {t}")
    if n < 1 or k <= 0:
        raise UsageError("need --n >= 1 and --k > 0")
    g = get_mode(g_name)
    if rule == "polesum":
        target = poles_and_residues(n)
    elif rule == "gcu":
        target = bq.gauss_chebyshev_u_rule(n)
    elif rule == "gl":
        m = n if m is None else m
        if not 1 <= m <= 256:
            raise UsageError("--m must lie in [1, 256]")
        target = bq.gauss_legendre_folded_rule(m)
    else:
        raise UsageError(f"unknown rule {rule!r}")
    rep = bq.quadrature_report(target, g, t, k, tol)
    return {
        "rule": rule, "n": rep.n_nodes, "t": rep.t, "k_abs": rep.k_abs,
        "exact_re": rep.exact.real, "exact_im": rep.exact.imag,
        "approx_re": rep.approx.real, "approx_im": rep.approx.imag,
        "abs_error": rep.abs_error,
    }


def bound_row(n, t, k, mode, M=None, g_name=None, tol=1e-13):
    if (M is None) == (g_name is None):
        raise UsageError("give exactly one of --M and --g")
    if n < 1 or t < 0 or k <= 0:
        raise UsageError("need --n >= 1, --t >= 0 and --k > 0")
    g = get_mode(g_name) if g_name is not None else None
    if g is not None:
        M = eb.estimate_M(g, k, 4096)
    elif M < 0:
        raise UsageError("--M must be nonnegative")
    row = {"n": n, "t": float(t), "k": float(k), "M": float(M),
           "measured_error": None, "ratio": None, "holds": None}
    if mode == "integrated":
        row["bound"] = eb.integrated_bound(n, t, k, M)
        return row
    row["bound"] = eb.per_mode_bound(n, t, k, M)
    if g is not None:
        rep = bq.quadrature_report(poles_and_residues(n), g, t, k, tol)
        check = eb.bound_check(rep, row["bound"])
        row.update(measured_error=rep.abs_error, ratio=check.ratio, holds=check.holds)
    return row


def load_config(path):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config is not valid JSON: {exc}"]) from None
    return data


def _sim_config(data):
    config = ws.ModeSimConfig.from_dict(data)
    if config.n_bc > MAX_SIM_ORDER:
        raise ConfigError([f"n_bc must be <= {MAX_SIM_ORDER}, got {config.n_bc}"])
    return config


def simulate(config_path, output_dir):
    config = _sim_config(load_config(config_path))
    report = ws.run_simulation(config)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [{"t": float(t), "error": float(e)} for t, e in zip(report.times, report.errors)]
    (out / "timeseries.csv").write_text(to_csv(rows, TIMESERIES_COLUMNS))
    summary = report.summary()
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary


def sweep_configs(data):
    """A JSON list of configs, or ``{"base": {...}, "grid": {key: [values]}}``."""
    if isinstance(data, list):
        raw = data
    elif isinstance(data, dict) and set(data) <= {"base", "grid"} and "base" in data:
        raw = [dict(data["base"])]
        for key, values in data.get("grid", {}).items():
            if not isinstance(values, list):
                raise ConfigError([f"grid entry {key!r} must be a list"])
            raw = [dict(r, **{key: v}) for r in raw for v in values]
    else:
        raise ConfigError(['sweep config must be a list or {"base": ..., "grid": ...}'])
    configs, problems = [], []
    for i, item in enumerate(raw):
        try:
            configs.append(_sim_config(item))
        except ConfigError as exc:
            problems += [f"config[{i}]: {v}" for v in exc.violations]
    if problems:
        raise ConfigError(problems)
    return configs


def build_parser():
    parser = argparse.ArgumentParser(
        prog="radbc",
        description="Rational radiation boundary conditions: poles, quadrature, bounds, simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("poles", help="poles and residues of the order-n approximation")
    p.add_argument("--n", type=int, required=True)
    add_output(p)

    p = sub.add_parser("quad", help="compare a quadrature rule with the exact branch-cut integral")
    p.add_argument("--g", required=True, help="registered mode function name")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--rule", choices=("polesum", "gcu", "gl"), default="polesum")
    p.add_argument("--m", type=int, help="node count for --rule gl (default: --n)")
    p.add_argument("--tol", type=float, default=1e-13)
    add_output(p)

    p = sub.add_parser("bound", help="evaluate an error bound")
    p.add_argument("--mode", choices=("permode", "integrated"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--k", "--kmax", dest="k", type=float, required=True,
                   help="|k| for permode, K_max for integrated")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--M", type=float)
    src.add_argument("--g")
    add_output(p)

    p = sub.add_parser("simulate", help="run one mode simulation from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--output-dir", default=".")

    p = sub.add_parser("sweep", help="run a list of mode simulations")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    add_output(p)
    return parser


def _fail(code, kind, message, violations=None):
    payload = {"error": kind, "message": message}
    if violations is not None:
        payload["violations"] = violations
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "poles":
            emit(poles_rows(args.n), POLES_COLUMNS, args)
        elif args.command == "quad":
            row = quad_row(args.g, args.n, args.t, args.k, args.rule, args.m, args.tol)
            emit([row], QUAD_COLUMNS, args)
        elif args.command == "bound":
            emit([bound_row(args.n, args.t, args.k, args.mode, args.M, args.g)], BOUND_COLUMNS, args)
        elif args.command == "simulate":
            summary = simulate(args.config, args.output_dir)
            sys.stdout.write(json.dumps({"peak_error": summary["peak_error"]}) + "\n")
        elif args.command == "sweep":
            rows = ws.sweep(sweep_configs(load_config(args.config)), workers=args.workers)
            emit(rows, ws.SWEEP_COLUMNS, args)
    except (UsageError, UnknownFunction) as exc:
        return _fail(EXIT_USAGE, type(exc).__name__, str(exc))
    except ConfigError as exc:
        return _fail(EXIT_VALIDATION, "ConfigError", str(exc), exc.violations)
    except NumericalError as exc:
        return _fail(EXIT_NUMERICAL, type(exc).__name__, f"{args.command}: {exc}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
