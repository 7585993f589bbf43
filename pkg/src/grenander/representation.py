"""Poisson-gamma representation of the Grenander estimator for uniform data.

With ``N_j ~ Poisson(1/j)`` independent and ``S_ji ~ Gamma(j, 1)``, put
``S_n = sum_j sum_i S_ji`` and ``T_n = sum_j j N_j``.  For a uniform sample
the multiset of pairs (block size, ``n`` x block length) of the estimator has
the law of ``{(j, S_ji)}`` conditioned on ``S_n = n, T_n = n``.

Given ``T_n = n`` the counts ``(N_1, ..., N_n)`` have the law of the cycle
type of a uniform random permutation of ``n`` letters.  Given the counts,
conditioning on ``S_n = n`` is a Dirichlet normalisation of the gammas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .estimator import JumpProfile
from .functionals import FunctionalSpec, StatisticValue, block_sum_statistic, standardize, standardize_jumps

ORACLE_MAX_N = 12


def harmonic(n: int) -> float:
    """``H_n = sum_{j<=n} 1/j = psi(n + 1) + gamma``."""
    return float(special.digamma(n + 1.0)) + np.euler_gamma


def harmonic2(n: int) -> float:
    """``sum_{j<=n} 1/j^2 = pi^2/6 - psi'(n + 1)``."""
    return math.pi**2 / 6 - float(special.polygamma(1, n + 1.0))


def prob_T_equals_n(n: int) -> float:
    """``P{T_n = n} = exp(-H_n)``."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return math.exp(-harmonic(n))


@dataclass(frozen=True)
class PoissonGammaDraw:
    n: int
    N: np.ndarray
    S: tuple  # S[j-1] holds the N_j gamma(j) variables

    @property
    def Tn(self) -> int:
        return int(np.dot(np.arange(1, self.n + 1), self.N))

    @property
    def Sn(self) -> float:
        return math.fsum(float(x) for arr in self.S for x in arr)

    @property
    def Vn(self) -> float:
        return (self.Sn - self.Tn) / math.sqrt(self.n)

    @property
    def Wn(self) -> float:
        return self.Tn / self.n

    def profile(self) -> dict:
        return {j: int(q) for j, q in enumerate(self.N, start=1) if q}


def sample_unconditional(n: int, rng: np.random.Generator) -> PoissonGammaDraw:
    if n < 1:
        raise ValueError("n >= 1 required")
    j = np.arange(1, n + 1)
    N = rng.poisson(1.0 / j)
    S = tuple(rng.gamma(float(jj), size=int(q)) if q else np.empty(0) for jj, q in zip(j, N))
    return PoissonGammaDraw(n, N, S)


def sample_T(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` independent copies of ``T_n = sum_j j N_j``."""
    j = np.arange(1, n + 1)
    return rng.poisson(1.0 / j, size=(size, n)) @ j


def sample_VW(n: int, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """``size`` draws of ``(V_n, W_n)`` without materialising the ``N_j``.

    ``sum_j N_j ~ Poisson(H_n)`` and, given that total, the sizes ``j`` are
    iid with ``P(j) = (1/j) / H_n``.  Given ``T_n``, ``S_n ~ Gamma(T_n, 1)``.
    """
    j = np.arange(1, n + 1)
    cdf = np.cumsum(1.0 / j)
    H = cdf[-1]
    K = rng.poisson(H, size=size)
    picks = np.searchsorted(cdf, rng.random(K.sum()) * H, side="right") + 1
    T = np.bincount(np.repeat(np.arange(size), K), weights=picks, minlength=size)
    S = np.where(T > 0, rng.gamma(np.maximum(T, 1.0)), 0.0)
    return (S - T) / math.sqrt(n), T / n


def _feller_sizes(n: int, rng: np.random.Generator) -> list[int]:
    # Feller coupling: independent xi_i ~ Bernoulli(1/i); cycle lengths are the
    # gaps between successive ones in xi_1 ... xi_n 1.  From a one at i the
    # next one is at k > i with P(K > k) = i / k, i.e. K = floor(i / U) + 1.
    sizes = []
    pos = 1
    while pos <= n:
        u = 1.0 - rng.random()
        nxt = min(math.floor(pos / u) + 1, n + 1)
        sizes.append(nxt - pos)
        pos = nxt
    return sizes


def _permutation_sizes(n: int, rng: np.random.Generator) -> list[int]:
    perm = rng.permutation(n)
    seen = np.zeros(n, dtype=bool)
    sizes = []
    for start in range(n):
        if seen[start]:
            continue
        k, length = start, 0
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        sizes.append(length)
    return sizes


def sample_profile_conditional(n: int, rng: np.random.Generator, method: str = "feller") -> JumpProfile:
    """Draw ``(N_1, ..., N_n) | T_n = n`` as a cycle type.

    ``method="feller"`` uses the Feller coupling and costs O(number of
    cycles); ``method="permutation"`` materialises a random permutation.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    if method == "feller":
        sizes = _feller_sizes(n, rng)
    elif method == "permutation":
        sizes = _permutation_sizes(n, rng)
    else:
        raise ValueError(f"unknown method {method!r}")
    return JumpProfile(tuple(sizes), n)


def sample_profile_counts(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorised Feller coupling: array of shape ``(size, n + 1)`` whose row
    ``r`` holds ``Q_j`` at column ``j`` for draw ``r``."""
    counts = np.zeros((size, n + 1), dtype=np.int64)
    pos = np.ones(size)
    rows = np.arange(size)
    while rows.size:
        u = 1.0 - rng.random(rows.size)
        nxt = np.minimum(np.floor(pos[rows] / u) + 1.0, n + 1.0)
        np.add.at(counts, (rows, (nxt - pos[rows]).astype(np.int64)), 1)
        pos[rows] = nxt
        rows = rows[nxt <= n]
    return counts


def sample_block_numbers(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Number of cycles ``sum_j N_j`` given ``T_n = n`` for ``size`` draws.

    Counts the ones of the Feller coupling by jumping between them, so the
    cost per draw is O(log n) even for very large ``n``.
    """
    total = np.zeros(size, dtype=np.int64)
    pos = np.ones(size)
    rows = np.arange(size)
    while rows.size:
        total[rows] += 1
        u = 1.0 - rng.random(rows.size)
        nxt = np.floor(pos[rows] / u) + 1.0
        pos[rows] = nxt
        rows = rows[nxt <= n]
    return total


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def conditional_profile_pmf_oracle(n: int) -> dict:
    """Exact pmf of ``(N_1, ..., N_n) | T_n = n`` by enumerating partitions.

    Keys are :meth:`JumpProfile.key` tuples.  Each partition with
    multiplicities ``N_j`` gets weight ``prod_j (1/j)**N_j / N_j!``.
    """
    if not 1 <= n <= ORACLE_MAX_N:
        raise ValueError(f"oracle needs 1 <= n <= {ORACLE_MAX_N}")
    weights = {}
    for lam in _partitions(n):
        q: dict[int, int] = {}
        for part in lam:
            q[part] = q.get(part, 0) + 1
        w = 1.0
        for j, c in q.items():
            w *= (1.0 / j) ** c / math.factorial(c)
        weights[tuple(sorted(q.items()))] = w
    total = math.fsum(weights.values())
    return {k: w / total for k, w in weights.items()}


def counts_to_key(row) -> tuple:
    return tuple((j, int(q)) for j, q in enumerate(row) if j and q)


@dataclass(frozen=True)
class ConditionalDraw:
    """Block sizes ``J_i`` (exchangeable order) and scaled spacings ``n D_i``."""

    profile: JumpProfile
    sizes: np.ndarray
    spacings: np.ndarray

    @property
    def n(self) -> int:
        return self.profile.n


def sample_conditional(n: int, rng: np.random.Generator) -> ConditionalDraw:
    prof = sample_profile_conditional(n, rng)
    sizes = rng.permutation(np.array(prof.sizes, dtype=float))
    g = rng.gamma(sizes)
    spacings = n * g / g.sum()
    return ConditionalDraw(prof, sizes, spacings)


def representation_statistic(draw: ConditionalDraw, spec: FunctionalSpec) -> StatisticValue:
    """Standardised functional from a conditional draw.

    ``standardized`` is the block-sum form with the ``h'(1)`` variance
    reducing terms.  Under the conditioning those terms vanish and it
    coincides with the standardised ``raw = n^-1 sum_i h(J_i / S_i) S_i``;
    the two are cross-checked.
    """
    J, S, n = draw.sizes, draw.spacings, draw.n
    if np.any(S <= 0):
        raise ValueError("nonpositive spacing")
    hv = np.asarray(spec.h((J / S).astype(complex)), dtype=complex).real
    raw = math.fsum(hv * S) / n
    u = block_sum_statistic(spec, J, S, n)
    direct = standardize(spec, raw, n)
    if abs(u - direct) > 1e-8 * (1.0 + abs(u)):
        raise RuntimeError(f"conditioning identity violated: {u!r} vs {direct!r}")
    return StatisticValue(raw, u, n)


def representation_jump_statistic(draw: ConditionalDraw) -> StatisticValue:
    m = draw.profile.n_blocks
    return StatisticValue(float(m), standardize_jumps(m, draw.n), draw.n)
