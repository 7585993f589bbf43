"""Grenander estimator of a nonincreasing density on [0, 1].

The estimator is the left-continuous slope of the least concave majorant
(LCM) of the empirical distribution function.  It is stored as a step
function on the intervals ``[0, xi_1], (xi_1, xi_2], ..., (xi_m, 1]``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

# relative tolerance below which adjacent hull slopes are treated as equal
SLOPE_RTOL = 1e-12
ORACLE_MAX_N = 5000


def _same_slope(a: float, b: float) -> bool:
    return abs(a - b) <= SLOPE_RTOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class Sample:
    """Observations ``X_1, ..., X_n`` in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(v)):
            raise ValueError("sample contains non-finite values")
        if v.min() < 0.0 or v.max() > 1.0:
            raise ValueError("sample values must lie in [0, 1]")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @classmethod
    def from_file(cls, path) -> "Sample":
        """Read one decimal number per line; blank lines and ``#`` comments are skipped."""
        vals = []
        for line in Path(path).read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                vals.append(float(line))
        return cls(np.array(vals))


def as_sample(sample) -> Sample:
    return sample if isinstance(sample, Sample) else Sample(np.asarray(sample, dtype=float))


def rescale_to_max(sample) -> Sample:
    """Divide the observations by their maximum.

    The LCM block structure is scale invariant, so this leaves the jump
    profile unchanged while putting the last hull vertex at ``x = 1``.  The
    fitted spacings then sum to one, which is the normalisation under which
    the Poisson-gamma representation holds exactly at finite ``n``.
    """
    s = as_sample(sample)
    top = s.values.max()
    if top <= 0.0:
        raise ValueError("cannot rescale a sample whose maximum is 0")
    return Sample(s.values / top)


@dataclass(frozen=True)
class StepDensity:
    """Piecewise-constant density with levels ``levels[i]`` on
    ``(breakpoints[i], breakpoints[i+1]]`` (the first interval is closed at 0).
    """

    breakpoints: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        lv = np.asarray(self.levels, dtype=float)
        if b.ndim != 1 or lv.ndim != 1 or b.size != lv.size + 1:
            raise ValueError("need len(breakpoints) == len(levels) + 1")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(lv < 0):
            raise ValueError("levels must be nonnegative")
        for arr in (b, lv):
            arr.setflags(write=False)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "levels", lv)

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def n_jumps(self) -> int:
        """Number of (downward) jumps, i.e. interior breakpoints."""
        return int(self.levels.size - 1)

    def integral(self) -> float:
        return float(np.dot(self.levels, self.spacings))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.breakpoints, x, side="left") - 1
        idx = np.clip(idx, 0, self.levels.size - 1)
        out = self.levels[idx]
        out = np.where((x < self.breakpoints[0]) | (x > self.breakpoints[-1]), 0.0, out)
        return out if out.ndim else float(out)

    def to_csv(self, path_or_file) -> None:
        """Write ``xi_left,xi_right,level`` rows."""
        if hasattr(path_or_file, "write"):
            self._write_rows(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                self._write_rows(fh)

    def _write_rows(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["xi_left", "xi_right", "level"])
        for a, b, lv in zip(self.breakpoints[:-1], self.breakpoints[1:], self.levels):
            w.writerow([repr(float(a)), repr(float(b)), repr(float(lv))])

    @classmethod
    def from_csv(cls, path) -> "StepDensity":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        left = [float(r["xi_left"]) for r in rows]
        right = [float(r["xi_right"]) for r in rows]
        return cls(np.array(left[:1] + right), np.array([float(r["level"]) for r in rows]))


@dataclass(frozen=True)
class JumpProfile:
    """Block sizes ``J_i`` of the positive-level intervals and their counts ``Q_j``."""

    sizes: tuple
    n: int
    counts: dict = field(init=False)

    def __post_init__(self):
        sizes = tuple(int(j) for j in self.sizes)
        if any(j < 1 for j in sizes):
            raise ValueError("block sizes must be positive")
        if sum(sizes) != self.n:
            raise ValueError(f"block sizes sum to {sum(sizes)}, expected n={self.n}")
        object.__setattr__(self, "sizes", sizes)
        q: dict[int, int] = {}
        for j in sizes:
            q[j] = q.get(j, 0) + 1
        object.__setattr__(self, "counts", dict(sorted(q.items())))

    @classmethod
    def from_counts(cls, counts: dict, n: int | None = None) -> "JumpProfile":
        sizes = [j for j, q in sorted(counts.items()) for _ in range(q)]
        return cls(tuple(sizes), sum(sizes) if n is None else n)

    @property
    def n_blocks(self) -> int:
        return len(self.sizes)

    def key(self) -> tuple:
        """Hashable canonical form: sorted ``(j, Q_j)`` pairs."""
        return tuple(self.counts.items())


def ecdf_vertices(sample) -> tuple[np.ndarray, np.ndarray]:
    """Vertices ``(0, 0), (X_(i), i/n)`` of the empirical CDF.

    Tied observations are stacked, keeping only the topmost point per ``x``.
    """
    s = as_sample(sample)
    xs = np.sort(s.values)
    y = np.arange(1, s.n + 1) / s.n
    last = np.r_[xs[1:] != xs[:-1], True]
    x = np.r_[0.0, xs[last]]
    y = np.r_[0.0, y[last]]
    if x.size > 1 and x[1] == 0.0:
        # observations at zero stack onto the origin
        x, y = x[1:], y[1:]
    return x, y


def least_concave_majorant(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Upper hull of the points ``(x_i, y_i)``.

    Returns the hull vertices; consecutive slopes are strictly decreasing
    (collinear vertices are dropped).  ``x`` must be strictly increasing.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two vertices")
    if x.shape != y.shape or np.any(np.diff(x) <= 0):
        raise ValueError("x must be strictly increasing and match y")
    hx = [float(x[0]), float(x[1])]
    hy = [float(y[0]), float(y[1])]
    for xr, yr in zip(x[2:].tolist(), y[2:].tolist()):
        while len(hx) >= 2:
            s_pq = (hy[-1] - hy[-2]) / (hx[-1] - hx[-2])
            s_qr = (yr - hy[-1]) / (xr - hx[-1])
            if s_pq > s_qr and not _same_slope(s_pq, s_qr):
                break
            hx.pop()
            hy.pop()
        hx.append(xr)
        hy.append(yr)
    return np.array(hx), np.array(hy)


def _step_from_hull(hx: np.ndarray, hy: np.ndarray) -> StepDensity:
    levels = np.diff(hy) / np.diff(hx)
    breaks = hx
    if breaks[-1] < 1.0:
        breaks = np.r_[breaks, 1.0]
        levels = np.r_[levels, 0.0]
    return StepDensity(breaks, levels)


def _check_support(s: Sample) -> None:
    if np.any(s.values == 0.0):
        raise ValueError("an observation at 0 makes the estimator unbounded at the origin")


def grenander(sample) -> StepDensity:
    """Grenander estimator: slopes of the LCM of the empirical CDF.

    If ``max(X) < 1`` the level 0 is appended on ``(X_(n), 1]``.
    """
    s = as_sample(sample)
    _check_support(s)
    x, y = ecdf_vertices(s)
    return _step_from_hull(*least_concave_majorant(x, y))


def grenander_oracle(sample) -> StepDensity:
    """Quadratic-cost reference for :func:`grenander`.

    On the k-th data interval the estimator equals
    ``min_{a < k} max_{b >= k} (F(x_b) - F(x_a)) / (x_b - x_a)`` over the
    data grid; equal neighbouring values are then merged.
    """
    s = as_sample(sample)
    if s.n > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_N}")
    _check_support(s)
    ux, cnt = np.unique(s.values, return_counts=True)
    gx = np.r_[0.0, ux]
    gF = np.r_[0, np.cumsum(cnt)] / s.n
    K = ux.size
    with np.errstate(divide="ignore", invalid="ignore"):
        avg = (gF[None, :] - gF[:, None]) / (gx[None, :] - gx[:, None])
    a_idx, b_idx = np.indices(avg.shape)
    avg = np.where(b_idx > a_idx, avg, -np.inf)
    # suffix max over b, then prefix min over a
    suf = np.maximum.accumulate(avg[:, ::-1], axis=1)[:, ::-1]
    suf = np.where(b_idx >= a_idx + 1, suf, np.inf)
    pre = np.minimum.accumulate(suf, axis=0)
    seg = np.array([pre[k - 1, k] for k in range(1, K + 1)])

    breaks = [0.0]
    levels = [seg[0]]
    for k in range(1, K):
        if not _same_slope(levels[-1], seg[k]):
            breaks.append(gx[k])
            levels.append(seg[k])
    breaks.append(gx[K])
    if gx[K] < 1.0:
        breaks.append(1.0)
        levels.append(0.0)
    return StepDensity(np.array(breaks), np.array(levels))


def jump_profile(d: StepDensity, sample) -> JumpProfile:
    """Number of observations ``J_i`` in each positive-level interval, and ``Q_j``.

    The zero level appended on ``(X_(n), 1]`` holds no observations and is
    not a block.
    """
    s = as_sample(sample)
    xs = np.sort(s.values)
    pos = np.searchsorted(xs, d.breakpoints, side="right")
    pos[0] = 0
    J = np.diff(pos)
    if J.sum() != s.n:
        raise ValueError("density and sample are inconsistent: not all observations covered")
    keep = d.levels > 0
    if np.any(J[~keep] != 0):
        raise ValueError("density and sample are inconsistent: observations under a zero level")
    expected = J[keep] / (s.n * d.spacings[keep])
    if not np.allclose(expected, d.levels[keep], rtol=1e-9, atol=0.0):
        raise ValueError("density levels do not match block counts of this sample")
    return JumpProfile(tuple(J[keep].tolist()), s.n)


def blocks(d: StepDensity, sample) -> tuple[np.ndarray, np.ndarray]:
    """Block sizes ``J_i`` and scaled spacings ``n D_i`` of the positive levels."""
    prof = jump_profile(d, sample)
    spac = d.spacings[d.levels > 0]
    return np.array(prof.sizes, dtype=float), prof.n * spac


def read_sample(path) -> Sample:
    return Sample.from_file(path)


def write_density_csv(d: StepDensity, path) -> None:
    d.to_csv(path)

