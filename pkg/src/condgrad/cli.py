"""Command-line benchmark harness.

Subcommands:

* ``solve``    -- one (problem, method) run, trace written as CSV/JSON
* ``bench``    -- a method x problem grid from a JSON config
* ``profile``  -- recompute profile metrics from a directory of traces
* ``gen-data`` -- write a synthetic returns matrix as CSV
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import problems as prob
from .profiles import RunRecord, build_profile_table, fraction_solved, iteration_ratio, time_ratio
from .lloo import lloo_simplex
from .solvers import (
    LlooConfig,
    RunConfig,
    certificate_lower_bound,
    estimate_sigma,
    fw_solve,
    lloo_fw_solve,
    read_trace_csv,
)

METHODS = ("standard", "line_search", "analytic", "backtracking", "lloo")
DEFAULT_EPS_GRID = [10.0**-p for p in range(1, 9)]
DEFAULT_MAX_ITER = 50000
DEFAULT_GAP_TOL = 1e-10


def build_problem(spec):
    """Instantiate a problem from a config entry; returns (name, oracle, set)."""
    kind = spec["kind"]
    seed = int(spec.get("seed", 0))
    if kind == "portfolio":
        if "data" in spec:
            returns, seed = prob.load_returns_csv(spec["data"])
        else:
            returns = prob.gen_portfolio_data(int(spec["T"]), int(spec["n"]), seed)
        p = prob.portfolio_problem(returns)
        name = spec.get("name", f"portfolio_n{p.oracle.dim}_T{returns.shape[0]}_s{seed}")
    elif kind == "poisson":
        radius = float(spec.get("radius", prob.DEFAULT_RADIUS))
        if "data" in spec:
            feats, _labels = parse_libsvm_path(spec["data"])
            counts = np.ones(feats.shape[0])
            name = spec.get("name", f"poisson_{Path(spec['data']).stem}")
        else:
            feats = prob.gen_binary_design(int(spec["m"]), int(spec["n"]), float(spec.get("density", 0.2)), seed)
            counts = np.ones(feats.shape[0])
            name = spec.get("name", f"poisson_m{feats.shape[0]}_n{feats.shape[1]}_s{seed}")
        p = prob.poisson_oracle(feats, counts, radius)
    elif kind == "logistic":
        radius = float(spec.get("radius", prob.DEFAULT_RADIUS))
        if "data" in spec:
            feats, labels = parse_libsvm_path(spec["data"])
            labels = np.where(labels > 0, 1.0, -1.0)
            name = spec.get("name", f"logistic_{Path(spec['data']).stem}")
        else:
            feats, labels = prob.gen_logistic_data(int(spec["N"]), int(spec["n"]), seed)
            name = spec.get("name", f"logistic_N{feats.shape[0]}_n{feats.shape[1]}_s{seed}")
        p = prob.logistic_oracle(
            feats, labels, mu=float(spec.get("mu", 0.0)), gamma=spec.get("gamma"), radius=radius
        )
    else:
        raise ValueError(f"unknown problem kind {kind!r}")
    return name, p.oracle, p.feasible_set


def parse_libsvm_path(path):
    with open(path) as fh:
        return prob.parse_libsvm(fh)


def run_one(oracle, feasible_set, method, eps, max_iter, seed=0, record_times=True):
    config = RunConfig(epsilon=eps, max_iter=max_iter, policy=method,
                       record_times=record_times, seed=seed)
    if method == "lloo":
        if feasible_set.kind != "simplex":
            raise ValueError("the lloo method runs on simplex problems only")
        sigma = estimate_sigma(oracle, feasible_set.start_point())
        return lloo_fw_solve(oracle, lloo_simplex, config, LlooConfig(sigma_f=sigma))
    return fw_solve(oracle, feasible_set, config)


def cmd_solve(args):
    spec = {"kind": args.problem, "seed": args.seed}
    if args.T is not None:
        spec["T"] = args.T
    if args.n is not None:
        spec["n"] = args.n
    if args.samples is not None:
        spec["m" if args.problem == "poisson" else "N"] = args.samples
    if args.data:
        spec["data"] = args.data
    if args.radius is not None:
        spec["radius"] = args.radius
    name, oracle, feasible_set = build_problem(spec)
    trace = run_one(oracle, feasible_set, args.method, args.eps, args.max_iter, seed=args.seed)
    trace.save_csv(args.out)
    if args.json:
        trace.save_json(args.json)
    last = trace.records[-1]
    print(
        f"{name} [{args.method}] {trace.termination} after {last.k} iterations: "
        f"f={last.f:.12g} gap={last.gap:.3e} lower_bound={certificate_lower_bound(trace):.12g}"
    )
    return 0


def _expand_problems(cfg):
    seeds = cfg.get("seeds", [0])
    specs = []
    for entry in cfg["problems"]:
        if "seed" in entry or "data" in entry:
            specs.append(dict(entry))
        else:
            for s in seeds:
                e = dict(entry)
                e["seed"] = s
                specs.append(e)
    return specs


def run_suite(cfg, out_dir):
    """Execute a bench config; returns (summary dict, ProfileTable or None)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    methods = cfg.get("methods", ["standard", "line_search", "analytic", "backtracking"])
    max_iter = int(cfg.get("max_iter", DEFAULT_MAX_ITER))
    gap_tol = float(cfg.get("gap_tol", DEFAULT_GAP_TOL))
    eps_grid = [float(e) for e in cfg.get("eps_grid", DEFAULT_EPS_GRID)]

    instances = []
    for spec in _expand_problems(cfg):
        instances.append((build_problem(spec), spec))

    runs = []
    records = []
    for (name, oracle, feasible_set), spec in instances:
        for method in methods:
            entry = {"method": method, "problem": name}
            try:
                trace = run_one(oracle, feasible_set, method, gap_tol, max_iter, seed=int(spec.get("seed", 0)))
            except ValueError as exc:
                entry["error"] = str(exc)
                runs.append(entry)
                continue
            path = out_dir / f"{method}__{name}.csv"
            trace.save_csv(path)
            f_series = np.array([r.f for r in trace.records])
            t_series = np.array([r.time_ns for r in trace.records])
            entry.update(
                termination=trace.termination,
                iterations=len(trace.records) - 1,
                final_f=float(trace.records[-1].f),
                best_f=float(np.min(f_series)),
                final_gap=float(trace.records[-1].gap),
                lower_bound=float(certificate_lower_bound(trace)),
                wall_ns=int(t_series[-1]),
                trace=path.name,
            )
            runs.append(entry)
            records.append(RunRecord(method, name, f_series, t_series))
    summary = {"config": cfg, "runs": runs}
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=1))

    table = None
    usable = _fully_covered_records(records)
    if usable:
        table = build_profile_table(usable)
        (out_dir / "profiles.csv").write_text(format_profiles_csv(table, eps_grid))
    return summary, table


def _fully_covered_records(records):
    """Drop methods that lack a trace on some problem (e.g. the simplex-only
    local-oracle method on non-simplex problems)."""
    problems = {r.problem for r in records}
    pairs = {(r.method, r.problem) for r in records}
    covered = {m for m in {r.method for r in records} if all((m, p) in pairs for p in problems)}
    return [r for r in records if r.method in covered]


def format_profiles_csv(table, eps_grid):
    lines = ["method,eps,frac_solved,iter_ratio,time_ratio"]
    for eps in eps_grid:
        frac = fraction_solved(table, eps)
        try:
            iters = iteration_ratio(table, eps)
            times = time_ratio(table, eps)
        except ValueError:
            iters = times = None
        for m in table.methods:
            it = "" if iters is None else format(iters[m], ".17g")
            tt = "" if times is None else format(times[m], ".17g")
            lines.append(f"{m},{format(eps, '.17g')},{format(frac[m], '.17g')},{it},{tt}")
    return "\n".join(lines) + "\n"


def table_from_trace_dir(trace_dir):
    """Rebuild a ProfileTable from `<method>__<problem>.csv` traces.

    Methods without a trace on every problem in the directory are dropped,
    mirroring what `bench` does when it writes profiles.csv.
    """
    records = []
    for path in sorted(Path(trace_dir).glob("*__*.csv")):
        method, _, problem = path.stem.partition("__")
        rows = read_trace_csv(path)
        records.append(
            RunRecord(
                method,
                problem,
                np.array([r.f for r in rows]),
                np.array([r.time_ns for r in rows]),
            )
        )
    records = _fully_covered_records(records)
    if not records:
        raise ValueError(f"no complete method traces found under {trace_dir}")
    return build_profile_table(records)


def cmd_bench(args):
    cfg = json.loads(Path(args.config).read_text())
    out_dir = args.out or cfg.get("out_dir", "bench_out")
    summary, table = run_suite(cfg, out_dir)
    failures = [r for r in summary["runs"] if "error" in r]
    print(f"{len(summary['runs']) - len(failures)} runs completed, {len(failures)} skipped -> {out_dir}")
    return 0


def cmd_profile(args):
    table = table_from_trace_dir(args.traces)
    eps_grid = [float(tok) for tok in args.eps_grid.split(",")] if args.eps_grid else DEFAULT_EPS_GRID
    text = format_profiles_csv(table, eps_grid)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gen_data(args):
    returns = prob.gen_portfolio_data(args.T, args.n, args.seed)
    prob.save_returns_csv(args.out, returns, args.seed)
    print(f"wrote {args.T}x{args.n} returns matrix (seed {args.seed}) to {args.out}")
    return 0


def make_parser():
    parser = argparse.ArgumentParser(prog="condgrad", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one method on one problem")
    p.add_argument("--problem", required=True, choices=["portfolio", "poisson", "logistic"])
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--eps", type=float, default=DEFAULT_GAP_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="trace CSV path")
    p.add_argument("--json", help="optional trace JSON path")
    p.add_argument("--T", type=int, help="portfolio: number of periods")
    p.add_argument("--n", type=int, help="problem dimension")
    p.add_argument("--samples", type=int, help="poisson/logistic: number of rows")
    p.add_argument("--data", help="LIBSVM file (poisson/logistic) or returns CSV (portfolio)")
    p.add_argument("--radius", type=float, help="feasible-set radius where applicable")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run a method x problem grid from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output directory (overrides config out_dir)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("profile", help="recompute profile metrics from stored traces")
    p.add_argument("--traces", required=True, help="directory of <method>__<problem>.csv files")
    p.add_argument("--eps-grid", help="comma-separated relative-error levels")
    p.add_argument("--out", help="profiles CSV path (default: stdout)")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("gen-data", help="write a synthetic returns matrix")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_data)
    return parser


def main(argv=None):
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
