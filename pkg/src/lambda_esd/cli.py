"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 domain validation error.
Times in every output are dimensionless: Gamma*t for dephasing runs and
G*t for Jaynes-Cummings runs.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import itertools
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import dephasing, esd, jc
from .entanglement import lambda_distance, negativity
from .errors import BadRange, InvalidParams, InvalidState, LambdaESDError
from .state import XStateParams, from_json_dict, purity, x_state

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3
MAX_GRID_POINTS = 10**6

DEPHASING_WINDOW = (5.0, 501)
JC_WINDOW = (4 * math.pi, 1257)

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")


class UsageError(Exception):
    pass


def decimal(text: str) -> float:
    """Parse a plain decimal literal (no exponents, no inf/nan)."""
    text = text.strip()
    if not _DECIMAL.match(text):
        raise argparse.ArgumentTypeError(f"not a plain decimal number: {text!r}")
    return float(text)


def _count(text: str) -> int:
    if not re.fullmatch(r"\d+", text.strip()):
        raise argparse.ArgumentTypeError(f"not a nonnegative integer: {text!r}")
    return int(text)


def parse_assignments(spec: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in spec.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"expected key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


_X_KEYS = ("a", "b", "c", "d", "z", "w", "z_im", "w_im")


def parse_x_state(spec: str) -> XStateParams:
    """``a=..,b=..,c=..,d=..[,z=..][,w=..][,z_im=..][,w_im=..]``."""
    kv = parse_assignments(spec)
    unknown = set(kv) - set(_X_KEYS)
    if unknown:
        raise UsageError(f"unknown X-state keys: {sorted(unknown)}")
    missing = {"a", "b", "c", "d"} - set(kv)
    if missing:
        raise UsageError(f"missing X-state keys: {sorted(missing)}")
    try:
        vals = {k: decimal(v) for k, v in kv.items()}
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None
    z = complex(vals.get("z", 0.0), vals.get("z_im", 0.0))
    w = complex(vals.get("w", 0.0), vals.get("w_im", 0.0))
    return XStateParams.create(vals["a"], vals["b"], vals["c"], vals["d"], z, w)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def trajectory_csv(tag: str, params: dict, rows, extra_columns=(), footer: str | None = None) -> str:
    buf = io.StringIO()
    buf.write(f"# model={tag} params={json.dumps(params, sort_keys=True, separators=(',', ':'))}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "lambda", "concurrence", *extra_columns])
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    if footer:
        buf.write(f"# {footer}\n")
    return buf.getvalue()


def read_trajectory_csv(text: str) -> tuple[str, dict, list[dict[str, float]]]:
    """Inverse of :func:`trajectory_csv`: model tag, params, and numeric rows."""
    lines = text.splitlines()
    m = re.match(r"# model=(\S+) params=(.*)$", lines[0])
    if not m:
        raise ValueError("missing '# model=... params=...' header")
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    rows = [{k: float(v) for k, v in r.items()} for r in csv.DictReader(body)]
    return m.group(1), json.loads(m.group(2)), rows


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# models used by the commands
# ---------------------------------------------------------------------------

def x_params_dict(p: XStateParams) -> dict:
    return {"a": p.a, "b": p.b, "c": p.c, "d": p.d,
            "z": p.z.real, "z_im": p.z.imag, "w": p.w.real, "w_im": p.w.imag}


def dephasing_model(p: XStateParams, gamma_ratio: float = 1.0):
    """Lambda as a function of Gamma_A * t via the full density-matrix pipeline."""
    rho0 = x_state(p)
    rates = dephasing.DephasingParams(1.0, gamma_ratio)
    return lambda tau: lambda_distance(dephasing.dephase(rho0, rates, tau)).lam


def jc_closed_model(family: str, alpha: float):
    return lambda tau: jc.lambda_jc_closed(family, alpha, 1.0, tau)


def jc_simulated_model(family: str, alpha: float, n_max: int = 1):
    sim = jc.JCSimulator(jc.JCInitialFamily(family, alpha), jc.JCParams(1.0, n_max=n_max))
    return lambda tau: lambda_distance(sim.atoms(tau)).lam


def _window(args, default):
    t_max = default[0] if args.t_max is None else args.t_max
    steps = default[1] if args.steps is None else args.steps
    return t_max, steps


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_measure(args) -> int:
    if (args.input is None) == (args.x_state is None):
        raise UsageError("give exactly one of --input or --x-state")
    if args.input is not None:
        try:
            text = Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
            doc = json.loads(text)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read density matrix: {exc}") from None
        try:
            rho = from_json_dict(doc)
        except LambdaESDError:
            raise
        except ValueError as exc:
            raise UsageError(f"malformed density-matrix document: {exc}") from None
    else:
        rho = x_state(parse_x_state(args.x_state))
    res = lambda_distance(rho)
    report = res.as_dict()
    report["purity"] = purity(rho)
    report["negativity"] = negativity(rho)
    _emit(dump_json(report), args.out)
    return EXIT_OK


def _run_trajectory(args, tag, params, model, t_max, steps, extra=None) -> int:
    traj, report = esd.analyze(model, 0.0, t_max, steps, tag)
    extra_cols, extra_vals, footer = (), None, None
    if extra is not None:
        extra_cols, extra_vals, footer = extra(traj)
    rows = []
    for i, (t, lam) in enumerate(zip(traj.times, traj.lambdas)):
        row = [t, lam, max(0.0, lam)]
        if extra_vals is not None:
            row.extend(extra_vals[i])
        rows.append(row)
    report_text = dump_json(report.as_dict())
    if args.format == "json":
        _emit(report_text, args.out)
    else:
        _emit(trajectory_csv(tag, params, rows, extra_cols, footer), args.out)
        if args.report:
            Path(args.report).write_text(report_text)
        elif args.out:
            sys.stdout.write(report_text)
    return EXIT_OK


def cmd_dephase(args) -> int:
    p = parse_x_state(args.x_state)
    gamma_b = args.gamma if args.gamma_b is None else args.gamma_b
    if not args.gamma > 0:
        raise InvalidParams("--gamma must be > 0 (times are reported as gamma*t)")
    dephasing.DephasingParams(args.gamma, gamma_b)
    t_max, steps = _window(args, DEPHASING_WINDOW)
    params = {**x_params_dict(p), "gamma": args.gamma, "gamma_b": gamma_b, "time_unit": "gamma*t"}
    model = dephasing_model(p, gamma_b / args.gamma)
    return _run_trajectory(args, "dephasing", params, model, t_max, steps)


def cmd_jc(args) -> int:
    init = jc.JCInitialFamily(args.family, args.alpha)
    jc.JCParams(args.g, n_max=args.n_max)
    t_max, steps = _window(args, JC_WINDOW)
    mode = args.mode or "closed-form"
    params = {"family": init.family, "alpha": init.alpha, "g": args.g, "mode": mode,
              "n_max": args.n_max, "time_unit": "g*t"}
    closed = jc_closed_model(init.family, init.alpha)
    if mode == "closed-form":
        return _run_trajectory(args, f"jc-{init.family}", params, closed, t_max, steps)
    simulated = jc_simulated_model(init.family, init.alpha, args.n_max)
    if mode == "simulate":
        return _run_trajectory(args, f"jc-{init.family}", params, simulated, t_max, steps)

    def both(traj):
        sims = [simulated(float(t)) for t in traj.times]
        diff = max(abs(a - b) for a, b in zip(traj.lambdas, sims))
        return ("lambda_simulated",), [[s] for s in sims], f"max_abs_diff={diff:.6e}"

    return _run_trajectory(args, f"jc-{init.family}", params, closed, t_max, steps, extra=both)


# --- sweep -----------------------------------------------------------------

SWEEP_MODELS = {
    "dephasing": ("a", "b", "c", "d", "z", "w", "gamma_ratio"),
    "jc-phi": ("alpha",),
    "jc-psi": ("alpha",),
}


def parse_grid(spec: str) -> tuple[str, list[float]]:
    """``name=start:stop:count`` or ``name=v1,v2,...``."""
    name, sep, body = spec.partition("=")
    name = name.strip()
    if not sep or not name:
        raise UsageError(f"grid spec must look like name=start:stop:count, got {spec!r}")
    try:
        if ":" in body:
            parts = body.split(":")
            if len(parts) != 3:
                raise UsageError(f"range spec needs start:stop:count, got {body!r}")
            start, stop = decimal(parts[0]), decimal(parts[1])
            count = _count(parts[2])
            values = list(np.linspace(start, stop, count)) if count != 1 else [start]
        else:
            values = [decimal(v) for v in body.split(",") if v.strip()]
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None
    return name, [float(v) for v in values]


def _resolve_dephasing(point: dict[str, str | float], ties: dict[str, str]) -> tuple[XStateParams, float]:
    vals: dict[str, str | float] = {"z": 0.0, "w": 0.0, "gamma_ratio": 1.0, **point}
    for target, source in ties.items():
        vals[target] = vals[source]
    pops = {}
    auto = [k for k in "abcd" if vals.get(k) == "auto"]
    fixed = [k for k in "abcd" if k not in auto]
    for k in fixed:
        if k not in vals:
            raise UsageError(f"population {k!r} is not set")
        pops[k] = float(vals[k])
    if auto:
        rest = (1.0 - math.fsum(pops.values())) / len(auto)
        for k in auto:
            pops[k] = rest
    coh = {}
    bounds = {"z": math.sqrt(max(pops["b"] * pops["c"], 0.0)), "w": math.sqrt(max(pops["a"] * pops["d"], 0.0))}
    for k in ("z", "w"):
        coh[k] = bounds[k] if vals[k] == "max" else float(vals[k])
    p = XStateParams.create(pops["a"], pops["b"], pops["c"], pops["d"], coh["z"], coh["w"])
    return p, float(vals["gamma_ratio"])


def _sweep_point(job):
    index, model_name, point, ties, t_max, steps = job
    record = {"index": index, "params": {k: v for k, v in point.items()}}
    try:
        if model_name == "dephasing":
            p, ratio = _resolve_dephasing(point, ties)
            record["state"] = x_params_dict(p)
            model = dephasing_model(p, ratio)
        else:
            model = jc_closed_model(model_name.split("-")[1], float(point["alpha"]))
        _, report = esd.analyze(model, 0.0, t_max, steps, model_name)
        record["report"] = report.as_dict()
        record["classification"] = report.classification.value
        record["first_crossing"] = report.first_crossing
        record["error"] = ""
    except LambdaESDError as exc:
        record["report"] = None
        record["classification"] = "Invalid"
        record["first_crossing"] = None
        record["error"] = str(exc)
    return record


def cmd_sweep(args) -> int:
    allowed = SWEEP_MODELS[args.model]
    grids = [parse_grid(g) for g in args.vary]
    names = [n for n, _ in grids]
    if len(set(names)) != len(names):
        raise UsageError("a parameter may be varied only once")
    fixed: dict[str, str | float] = {}
    for s in args.set or []:
        for k, v in parse_assignments(s).items():
            if v in ("auto", "max"):
                fixed[k] = v
            else:
                try:
                    fixed[k] = decimal(v)
                except argparse.ArgumentTypeError as exc:
                    raise UsageError(str(exc)) from None
    ties = {}
    for t in args.tie or []:
        ties.update(parse_assignments(t))
    for k in [*names, *fixed, *ties, *ties.values()]:
        if k not in allowed:
            raise UsageError(f"unknown parameter {k!r} for model {args.model}; allowed {allowed}")
    size = math.prod(len(v) for _, v in grids)
    if size == 0:
        raise UsageError("empty grid")
    if size > MAX_GRID_POINTS:
        raise UsageError(f"grid has {size} points, limit is {MAX_GRID_POINTS}")
    default = DEPHASING_WINDOW if args.model == "dephasing" else JC_WINDOW
    t_max, steps = _window(args, default)
    if steps < 2 or not t_max > 0:
        raise BadRange("need --steps >= 2 and --t-max > 0")

    jobs = []
    for i, combo in enumerate(itertools.product(*(v for _, v in grids))):
        point = {**fixed, **dict(zip(names, combo))}
        jobs.append((i, args.model, point, ties, t_max, steps))
    if args.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.workers) as pool:
            records = list(pool.map(_sweep_point, jobs, chunksize=max(1, len(jobs) // (4 * args.workers))))
    else:
        records = [_sweep_point(j) for j in jobs]

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = max(6, len(str(len(records) - 1)))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", *names, "classification", "first_crossing", "error"])
    for rec in records:
        (out / f"point_{rec['index']:0{width}d}.json").write_text(dump_json(rec))
        fc = rec["first_crossing"]
        writer.writerow([rec["index"], *(_fmt(rec["params"][n]) for n in names),
                         rec["classification"], "none" if fc is None else _fmt(fc), rec["error"]])
    (out / "summary.csv").write_text(buf.getvalue())
    sys.stdout.write(f"wrote {len(records)} points to {out}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_window(p):
    p.add_argument("--t-max", type=decimal, help="window end in dimensionless time")
    p.add_argument("--steps", type=_count, help="number of samples including endpoints")


def _add_output(p):
    p.add_argument("--out", help="write the primary output here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--report", help="also write the crossing report JSON to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lambda-esd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="Lambda, concurrence, purity and negativity of one state")
    m.add_argument("--input", help="density-matrix JSON file ('-' for stdin)")
    m.add_argument("--x-state", help="a=..,b=..,c=..,d=..[,z=..,w=..,z_im=..,w_im=..]")
    m.add_argument("--out")
    m.set_defaults(func=cmd_measure)

    d = sub.add_parser("dephase", help="Lambda(t) of an X state under independent dephasing")
    d.add_argument("--x-state", required=True)
    d.add_argument("--gamma", type=decimal, default=1.0, help="dephasing rate of qubit A (and B)")
    d.add_argument("--gamma-b", type=decimal, help="separate rate for qubit B")
    _add_window(d)
    _add_output(d)
    d.set_defaults(func=cmd_dephase)

    j = sub.add_parser("jc", help="Lambda(t) for the double Jaynes-Cummings model")
    j.add_argument("--family", required=True, help="phi or psi")
    j.add_argument("--alpha", type=decimal, required=True, help="mixing angle in radians")
    j.add_argument("--g", type=decimal, default=1.0)
    j.add_argument("--n-max", type=_count, default=1)
    mode = j.add_mutually_exclusive_group()
    mode.add_argument("--simulate", dest="mode", action="store_const", const="simulate")
    mode.add_argument("--closed-form", dest="mode", action="store_const", const="closed-form")
    mode.add_argument("--both", dest="mode", action="store_const", const="both")
    _add_window(j)
    _add_output(j)
    j.set_defaults(func=cmd_jc)

    s = sub.add_parser("sweep", help="classify trajectories over a parameter grid")
    s.add_argument("--model", required=True, choices=sorted(SWEEP_MODELS))
    s.add_argument("--vary", action="append", required=True, help="name=start:stop:count or name=v1,v2")
    s.add_argument("--set", action="append", help="fixed parameters, e.g. b=auto,c=auto,z=max")
    s.add_argument("--tie", action="append", help="copy one parameter from another, e.g. d=a")
    s.add_argument("--out-dir", required=True)
    s.add_argument("--workers", type=_count, default=1)
    _add_window(s)
    s.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BadRange as exc:
        print(f"bad range: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidState as exc:
        print(f"invalid state: invariant '{exc.invariant}' violated: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except LambdaESDError as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
