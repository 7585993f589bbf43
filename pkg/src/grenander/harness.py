"""Monte Carlo experiments and goodness-of-fit machinery.

Replications are generated in fixed blocks of ``BLOCK`` draws.  Block ``b``
of path ``p`` uses ``SeedSequence(seed, spawn_key=(p, b))``, so results
depend only on ``(config, seed)`` and not on how blocks are spread over
worker processes.
"""
from __future__ import annotations

import cmath
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy import special, stats

from . import analytic, representation, saddlepoint
from .estimator import blocks, grenander, rescale_to_max
from .functionals import (
    block_sum_statistic,
    get_functional,
    integral_functional,
    standardize,
    standardize_jumps,
)
from .representation import harmonic

BLOCK = 1024
KINDS = (
    "jumps",
    "l2",
    "entropy",
    "representation-l2",
    "representation-entropy",
    "charfun",
    "saddle",
    "cauchy",
    "repr-profile",
)
STATISTIC_KINDS = ("jumps", "l2", "entropy")
PATHS = ("direct", "representation")
CAUCHY_DELTAS = (0.5, 2.0, 1 + 1j, cmath.exp(1j / math.sqrt(math.log(50))))


def normal_cdf(x):
    """Standard normal distribution function."""
    return 0.5 * special.erfc(-np.asarray(x, dtype=float) / math.sqrt(2.0))


def ks_one_sample(values, cdf=normal_cdf) -> tuple[float, float]:
    """Kolmogorov-Smirnov distance to ``cdf`` and its asymptotic p-value."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("empty input")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    D = float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))
    return D, float(special.kolmogorov(math.sqrt(n) * D))


def ks_two_sample(a, b) -> tuple[float, float]:
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty input")
    grid = np.concatenate([a, b])
    Fa = np.searchsorted(a, grid, side="right") / a.size
    Fb = np.searchsorted(b, grid, side="right") / b.size
    D = float(np.max(np.abs(Fa - Fb)))
    en = math.sqrt(a.size * b.size / (a.size + b.size))
    return D, float(special.kolmogorov(en * D))


def tv_distance(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


@dataclass
class ExperimentConfig:
    kind: str
    n: int
    reps: int
    seed: int = 0
    workers: int = 1
    out: str | None = None
    path: str = "direct"
    compare: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind.startswith("representation-"):
            self.kind = self.kind.split("-", 1)[1]
            self.path = "representation"
        if self.kind == "repr-profile":
            self.path = "representation"
        if self.path not in PATHS:
            raise ValueError(f"unknown path {self.path!r}")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.kind == "repr-profile" and self.n > representation.ORACLE_MAX_N:
            raise ValueError(f"repr-profile needs n <= {representation.ORACLE_MAX_N}")
        if self.compare and self.kind not in STATISTIC_KINDS:
            raise ValueError("compare is only defined for jumps, l2 and entropy")


@dataclass
class ExperimentResult:
    config: dict
    seed: int
    values: np.ndarray
    raw: np.ndarray | None = None
    mean: float = float("nan")
    variance: float = float("nan")
    skewness: float = float("nan")
    ks_statistic: float | None = None
    ks_pvalue: float | None = None
    two_sample_ks: tuple | None = None
    extras: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def summarize(self) -> None:
        v = np.asarray(self.values, dtype=float)
        self.mean = float(np.mean(v))
        self.variance = float(np.var(v, ddof=1)) if v.size > 1 else 0.0
        self.skewness = float(stats.skew(v)) if v.size > 2 and np.ptp(v) > 0 else 0.0

    def to_dict(self) -> dict:
        d = {
            "config": self.config,
            "seed": self.seed,
            "mean": self.mean,
            "variance": self.variance,
            "skewness": self.skewness,
            "ks_statistic": self.ks_statistic,
            "ks_pvalue": self.ks_pvalue,
            "two_sample_ks": list(self.two_sample_ks) if self.two_sample_ks else None,
            "extras": self.extras,
            "wall_time": self.wall_time,
            "values": np.asarray(self.values, dtype=float).tolist(),
        }
        if self.raw is not None:
            d["raw"] = np.asarray(self.raw, dtype=float).tolist()
        return d

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, default=_json_default))

    def write_values_csv(self, path) -> None:
        np.savetxt(path, np.asarray(self.values, dtype=float), fmt="%.17g")

    def write_histogram_csv(self, path, bins: int = 50) -> None:
        counts, edges = np.histogram(np.asarray(self.values, dtype=float), bins=bins)
        with open(path, "w") as fh:
            fh.write("bin_left,bin_right,count\n")
            for lo, hi, c in zip(edges[:-1], edges[1:], counts):
                fh.write(f"{lo!r},{hi!r},{int(c)}\n")


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o))


def _block_rng(seed: int, path_idx: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(path_idx, block)))


def _run_block(kind: str, path: str, n: int, count: int, seed: int, block: int):
    """Simulate ``count`` replications; returns (standardised, raw, aux)."""
    rng = _block_rng(seed, PATHS.index(path), block)
    std = np.empty(count)
    raw = np.empty(count)
    aux = {}
    if kind == "jumps" and path == "representation":
        raw[:] = representation.sample_block_numbers(n, count, rng)
        std[:] = (raw - math.log(n)) / math.sqrt(math.log(n))
    elif kind == "jumps":
        for r in range(count):
            m = grenander(rng.random(n)).n_jumps
            raw[r], std[r] = m, standardize_jumps(m, n)
    elif kind in ("l2", "entropy") and path == "representation":
        spec = get_functional(kind)
        for r in range(count):
            st = representation.representation_statistic(representation.sample_conditional(n, rng), spec)
            raw[r], std[r] = st.raw, st.standardized
    elif kind in ("l2", "entropy"):
        spec = get_functional(kind)
        worst = 0.0
        for r in range(count):
            # the zero-step spacing on (X_(n), 1] is dropped by rescaling
            s = rescale_to_max(rng.random(n))
            d = grenander(s)
            raw[r] = integral_functional(spec, d)
            std[r] = standardize(spec, raw[r], n)
            J, S = blocks(d, s)
            worst = max(worst, abs(block_sum_statistic(spec, J, S, n) - std[r]))
        aux["max_block_sum_discrepancy"] = worst
    elif kind == "repr-profile":
        counts = representation.sample_profile_counts(n, count, rng)
        raw[:] = counts.sum(axis=1)
        std[:] = raw
        aux["profiles"] = Counter(representation.counts_to_key(row) for row in counts)
    else:
        raise ValueError(f"kind {kind!r} is not a replication kind")
    return std, raw, aux


def _simulate(kind: str, path: str, n: int, reps: int, seed: int, workers: int):
    nblocks = -(-reps // BLOCK)
    jobs = [(kind, path, n, min(BLOCK, reps - b * BLOCK), seed, b) for b in range(nblocks)]
    if workers > 1 and nblocks > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_block, *zip(*jobs)))
    else:
        parts = [_run_block(*job) for job in jobs]
    std = np.concatenate([p[0] for p in parts])
    raw = np.concatenate([p[1] for p in parts])
    aux: dict = {}
    for _, _, a in parts:
        for k, v in a.items():
            if k == "profiles":
                aux.setdefault(k, Counter()).update(v)
            else:
                aux[k] = max(aux.get(k, 0.0), v)
    return std, raw, aux


def _grid_experiment(config: ExperimentConfig) -> tuple[np.ndarray, dict]:
    if config.kind == "charfun":
        g = np.arange(-3.0, 3.0 + 1e-9, 0.5)
        rows = analytic.charfun_grid_errors(config.n, g, g)
        return rows[:, 2], {"grid": rows.tolist(), "max_quadrature_error": float(rows[:, 3].max())}
    if config.kind == "saddle":
        rows = saddlepoint.saddle_error_rows(get_functional("l2"), config.n, [1.0], [-1.0, 0.5, 1.0], [10, 100, 1000])
        return np.array([r[-1] for r in rows]), {"rows": rows}
    if config.kind == "cauchy":
        top = min(config.n, 1000)
        errs, rows = [], []
        for delta in CAUCHY_DELTAS:
            lhs = saddlepoint.series_exp_partial_log(delta, top).coeffs[1:]
            rhs = saddlepoint.binomial_products(delta, top)[1:]
            e = np.abs(lhs - rhs) / np.abs(rhs)
            errs.append(e)
            rows.append([delta, float(e.max())])
        return np.concatenate(errs), {"max_by_delta": rows}
    raise ValueError(config.kind)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the replications (or error grid) described by ``config``."""
    t0 = time.perf_counter()
    res = ExperimentResult(config=asdict(config), seed=config.seed, values=np.empty(0))
    if config.kind in ("charfun", "saddle", "cauchy"):
        res.values, res.extras = _grid_experiment(config)
    else:
        std, raw, aux = _simulate(config.kind, config.path, config.n, config.reps, config.seed, config.workers)
        res.values, res.raw = std, raw
        if "profiles" in aux:
            total = sum(aux["profiles"].values())
            emp = {k: c / total for k, c in aux["profiles"].items()}
            res.extras["tv_distance"] = tv_distance(emp, representation.conditional_profile_pmf_oracle(config.n))
        elif aux:
            res.extras.update(aux)
        if config.kind in STATISTIC_KINDS:
            res.ks_statistic, res.ks_pvalue = ks_one_sample(std)
        if config.kind == "jumps":
            res.extras["raw_mean"] = float(np.mean(raw))
            res.extras["expected_raw_mean"] = harmonic(config.n)
            res.extras["expected_raw_sd"] = math.sqrt(harmonic(config.n) - representation.harmonic2(config.n))
        if config.compare:
            other = "representation" if config.path == "direct" else "direct"
            std2, _, _ = _simulate(config.kind, other, config.n, config.reps, config.seed, config.workers)
            res.two_sample_ks = ks_two_sample(std, std2)
    res.summarize()
    res.wall_time = time.perf_counter() - t0
    if config.out:
        out = Path(config.out)
        if out.suffix == ".csv":
            res.write_values_csv(out)
        else:
            res.write_json(out)
    return res


def selftest(log=print) -> bool:
    """Fast versions of the package's checks; returns True iff all pass."""
    from .estimator import grenander_oracle

    checks = []
    rng = np.random.default_rng(20240601)

    def oracle_eq():
        for _ in range(100):
            u = rng.random(int(rng.integers(1, 60)))
            a, b = grenander(u), grenander_oracle(u)
            if a.levels.size != b.levels.size or not (
                np.allclose(a.levels, b.levels, rtol=0, atol=1e-10)
                and np.allclose(a.breakpoints, b.breakpoints, rtol=0, atol=1e-10)
            ):
                return False, "mismatch"
        return True, "100 samples"

    def cauchy():
        worst = max(float(_grid_experiment(ExperimentConfig("cauchy", 200, 1))[0].max()), 0.0)
        return worst < 1e-10, f"max rel err {worst:.2e}"

    def prob_t():
        n, reps = 5, 200_000
        p = representation.prob_T_equals_n(n)
        freq = np.mean(representation.sample_T(n, reps, rng) == n)
        sd = math.sqrt(p * (1 - p) / reps)
        return abs(freq - p) < 3 * sd, f"freq {freq:.5f} vs {p:.5f}"

    def profile_tv():
        n, reps = 5, 200_000
        counts = representation.sample_profile_counts(n, reps, rng)
        c = Counter(representation.counts_to_key(r) for r in counts)
        tv = tv_distance({k: v / reps for k, v in c.items()}, representation.conditional_profile_pmf_oracle(n))
        return tv < 0.01, f"TV {tv:.4f}"

    def charfun():
        worst = 0.0
        for t in range(-5, 6):
            for u in range(-5, 6):
                if t or u:
                    worst = max(worst, abs(analytic.charfun_VW_limit_quadrature(t, u) - analytic.charfun_VW_closed_form(t, u)))
        return worst < 1e-8, f"max |quad - closed| {worst:.2e}"

    def levy():
        worst = max(analytic.lk_exponent_check(t, u) for t, u in [(1, 1), (2, -1), (0.5, 3)])
        return worst < 1e-6, f"max {worst:.2e}"

    def saddle():
        ctx = saddlepoint.PhaseContext(10**6, 1.0, 1.0, get_functional("l2"))
        errs = [abs(saddlepoint.phi_saddle(ctx, j) / saddlepoint.phi_quadrature(ctx, j) - 1) for j in (10, 100, 1000)]
        ok = errs[0] > errs[1] > errs[2] and errs[2] < 0.05
        return ok, "rel errs " + ", ".join(f"{e:.2e}" for e in errs)

    for name, fn in [
        ("estimator oracle equivalence", oracle_eq),
        ("Cauchy coefficient identity", cauchy),
        ("P{T_n = n} = exp(-H_n)", prob_t),
        ("conditional profile law", profile_tv),
        ("charfun closed form", charfun),
        ("Levy-Khintchine exponent", levy),
        ("saddle-point asymptotics", saddle),
    ]:
        ok, detail = fn()
        checks.append(ok)
        log(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return all(checks)
