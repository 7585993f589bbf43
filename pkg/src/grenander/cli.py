"""Command line interface: ``grenander estimate|simulate|verify|selftest``."""
from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import analytic, harness, saddlepoint
from .estimator import grenander, read_sample
from .functionals import L2

CHARFUN_N = 10**5


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def cmd_estimate(args) -> int:
    d = grenander(read_sample(args.file))
    fh = _open_out(args.out)
    try:
        d.to_csv(fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_simulate(args) -> int:
    cfg = harness.ExperimentConfig(
        kind=args.kind,
        n=args.n,
        reps=args.reps,
        seed=args.seed,
        workers=args.workers,
        out=args.out,
        path=args.path,
        compare=args.compare,
    )
    res = harness.run_experiment(cfg)
    if args.hist:
        res.write_histogram_csv(args.hist, bins=args.bins)
    print(f"kind={cfg.kind} path={cfg.path} n={cfg.n} reps={cfg.reps} seed={cfg.seed}")
    print(f"mean={res.mean:.6g} variance={res.variance:.6g} skewness={res.skewness:.6g}")
    if res.ks_statistic is not None:
        print(f"KS vs N(0,1): D={res.ks_statistic:.4g} p={res.ks_pvalue:.4g}")
    if res.two_sample_ks is not None:
        print(f"two-sample KS direct vs representation: D={res.two_sample_ks[0]:.4g} p={res.two_sample_ks[1]:.4g}")
    for k, v in res.extras.items():
        if isinstance(v, (int, float)):
            print(f"{k}={v:.6g}")
    print(f"wall_time={res.wall_time:.2f}s")
    return 0


def _write_rows(path, header, rows):
    fh = _open_out(path)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_verify(args) -> int:
    target = args.target
    if target == "charfun":
        g = np.arange(-5, 6, dtype=float)
        rows = analytic.charfun_grid_errors(args.n or CHARFUN_N, g, g)
        _write_rows(args.out, ["t", "u", "abs_finite_minus_closed", "abs_quad_minus_closed"], rows.tolist())
        inner = (np.abs(rows[:, 0]) <= 3) & (np.abs(rows[:, 1]) <= 3)
        ok = rows[:, 3].max() < 1e-8 and rows[inner, 2].max() < 0.02
    elif target == "saddle":
        n = args.n or 10**6
        rows = saddlepoint.saddle_error_rows(L2, n, [1.0], [1.0], [10, 100, 1000])
        _write_rows(args.out, ["j", "s", "t", "n", "abs_quad", "abs_saddle", "rel_error"], rows)
        errs = [r[-1] for r in rows]
        ok = all(a > b for a, b in zip(errs, errs[1:])) and errs[-1] < 0.05
    elif target == "cauchy":
        rows = []
        for delta in harness.CAUCHY_DELTAS:
            lhs = saddlepoint.series_exp_partial_log(delta, args.n or 1000).coeffs
            rhs = saddlepoint.binomial_products(delta, args.n or 1000)
            for k in range(1, lhs.size):
                rows.append([repr(complex(delta)), k, abs(lhs[k] - rhs[k]) / abs(rhs[k])])
        _write_rows(args.out, ["delta", "n", "rel_error"], rows)
        ok = max(r[2] for r in rows) < 1e-10
    elif target == "levy":
        pts = [(1.0, 1.0), (2.0, -1.0), (0.5, 3.0)]
        rows = [(t, u, analytic.lk_exponent_check(t, u)) for t, u in pts]
        _write_rows(args.out, ["t", "u", "abs_error"], rows)
        ok = max(r[2] for r in rows) < 1e-6
    else:
        raise ValueError(target)
    print(f"verify {target}: {'PASS' if ok else 'FAIL'}", file=sys.stderr)
    return 0 if ok else 1


def cmd_selftest(args) -> int:
    return 0 if harness.selftest() else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grenander", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", help="fit the Grenander estimator to a file of observations")
    e.add_argument("file")
    e.add_argument("--out", help="CSV output (default stdout)")
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    s.add_argument("--kind", required=True, choices=harness.KINDS)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--reps", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--path", choices=harness.PATHS, default="direct")
    s.add_argument("--compare", action="store_true", help="also run the other path and two-sample KS")
    s.add_argument("--out", help="result file: .json for the full result, .csv for values only")
    s.add_argument("--hist", help="histogram CSV output")
    s.add_argument("--bins", type=int, default=50)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="emit an error grid and check it against its tolerance")
    v.add_argument("target", choices=["charfun", "saddle", "cauchy", "levy"])
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--out", help="CSV output (default stdout)")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("selftest", help="run the fast property checks")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
