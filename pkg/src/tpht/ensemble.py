"""Random-symbol Monte-Carlo: finite-n trace moments against their large-n limits.

Every sample owns a counter-based Philox stream keyed by ``(seed, index,
side)``, so a run is bit-reproducible however the index range is split
across workers.  Side 0 feeds the finite-matrix (LHS) sampler and, in
simultaneous mode, the limit (RHS) sampler as well; side 1 feeds the RHS
sampler in independent mode.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._jit import njit, select
from .matrices import tpht_band
from .spectra import _trace_poly_band_loops, _trace_poly_band_numpy
from .symbols import elementary_symmetric, rhs_coefficient_batch

DEFAULT_SEED = 1729
KINDS = ("lognormal", "exponential", "bernoulli")
MODES = ("simultaneous", "independent")


@dataclass(frozen=True)
class DistSpec:
    kind: str
    m: int
    sigma: object = 1.0  # scalar or per-root vector (lognormal)
    mean: float = 1.0  # exponential
    q: float = 0.5  # bernoulli

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution {self.kind!r}")
        if self.m < 0:
            raise ValueError("m must be non-negative")
        if self.kind == "lognormal":
            sig = self.sigmas()
            if np.any(sig < 0) or not np.all(np.isfinite(sig)):
                raise ValueError("sigma must be finite and non-negative")
        if self.kind == "exponential" and not self.mean > 0:
            raise ValueError("mean must be positive")
        if self.kind == "bernoulli" and not 0.0 <= self.q <= 1.0:
            raise ValueError("q must lie in [0, 1]")

    def sigmas(self):
        sig = np.asarray(self.sigma, dtype=float)
        return np.full(self.m, float(sig)) if sig.ndim == 0 else sig.ravel()


def stream(seed, index, side=0):
    """Generator for one sample; independent of any other ``(index, side)``."""
    counter = (int(index) << 64) + (int(side) << 192)
    return np.random.Generator(np.random.Philox(key=int(seed) & (2**128 - 1), counter=counter))


def sample_roots(dist, rng):
    m = dist.m
    if dist.kind == "lognormal":
        if m and len(dist.sigmas()) != m:
            raise ValueError("sigma vector length must equal m")
        return np.exp(dist.sigmas() * rng.standard_normal(m))
    if dist.kind == "exponential":
        return -dist.mean * np.log1p(-rng.random(m))
    return (rng.random(m) < dist.q).astype(float)


def sample_roots_batch(dist, seed, start, stop, side=0):
    out = np.empty((stop - start, dist.m))
    for k in range(start, stop):
        out[k - start] = sample_roots(dist, stream(seed, k, side))
    return out


def lhs_moment_sample(dist, n, p, rng):
    """``(1/n) Tr(T_n^p)`` for one random symbol."""
    roots = sample_roots(dist, rng)
    return float(lhs_moment_batch(roots[None, :], n, p)[0])


def rhs_moment_sample(dist, p, rng):
    """``[z^p] (prod_j (1 + a_j z))^p`` for one random symbol."""
    roots = sample_roots(dist, rng)
    return float(rhs_coefficient_batch(roots[None, :], p)[0])


@njit
def _lhs_batch_loops(roots, n, p):
    nsamp, m = roots.shape
    out = np.empty(nsamp)
    w = max(m + 2, 2)
    band = np.zeros((n, w))
    poly = np.zeros(p + 1)
    poly[p] = 1.0
    c = np.zeros(m + 1)
    for s in range(nsamp):
        c[:] = 0.0
        c[0] = 1.0
        for j in range(m):
            a = roots[s, j]
            for k in range(j + 1, 0, -1):
                c[k] += a * c[k - 1]
        for i in range(n):
            for d in range(w):
                col = i + 1 - d
                band[i, d] = c[d] if (d <= m and 0 <= col < n) else 0.0
        out[s] = _trace_poly_band_loops(band, poly) / n
    return out


def _lhs_batch_numpy(roots, n, p):
    poly = np.zeros(p + 1)
    poly[p] = 1.0
    out = np.empty(roots.shape[0])
    for s in range(roots.shape[0]):
        band = tpht_band(roots[s], n).data
        out[s] = _trace_poly_band_numpy(band, poly) / n
    return out


_lhs_batch = select(_lhs_batch_loops, _lhs_batch_numpy)


def lhs_moment_batch(roots, n, p):
    """LHS moments for each row of a ``(samples, m)`` root array."""
    if p < 1 or n < 1:
        raise ValueError("need n >= 1 and p >= 1")
    return _lhs_batch(np.ascontiguousarray(roots, dtype=float), int(n), int(p))


def rhs_moment_batch(roots, p):
    if p < 1:
        raise ValueError("p must be >= 1")
    return rhs_coefficient_batch(np.ascontiguousarray(roots, dtype=float), int(p))


@dataclass
class MomentBounds:
    lower: float
    upper: float
    mean_exact: float
    log_lower: float
    log_upper: float
    log_mean: float


def _logsumexp(v):
    v = np.asarray(v, dtype=float)
    top = np.max(v)
    if not np.isfinite(top):
        return top
    return float(top + np.log(np.sum(np.exp(v - top))))


def expected_moment_lognormal(sigmas, p):
    """Exact mean of the limiting ``p``-th moment for independent log-normal roots.

    ``E a_j^i = exp(i^2 sigma_j^2 / 2)``, so the mean is the ``z^p``
    coefficient of ``prod_j sum_i C(p, i) exp(i^2 sigma_j^2 / 2) z^i``.
    Everything is carried in log space; the linear fields overflow to ``inf``
    rather than raise.
    """
    sig = np.atleast_1d(np.asarray(sigmas, dtype=float))
    m = sig.size
    if p < 0:
        raise ValueError("p must be non-negative")
    i = np.arange(p + 1)
    log_binom = np.array([math.log(math.comb(p, k)) for k in i])
    acc = np.full(p + 1, -np.inf)
    acc[0] = 0.0
    for s in sig:
        fac = log_binom + 0.5 * i**2 * s**2
        new = np.full(p + 1, -np.inf)
        for k in range(p + 1):
            new[k] = _logsumexp(acc[: k + 1] + fac[k::-1])
        acc = new
    log_mean = float(acc[p])
    log_c = math.log(math.comb(m * p, p)) if m * p >= p else -np.inf
    inv = np.sum(1.0 / sig**2) if np.all(sig > 0) else np.inf
    log_lower = log_c + (p * p / (2.0 * inv) if np.isfinite(inv) else 0.0)
    log_upper = log_c + p * p * float(np.max(sig) ** 2 if m else 0.0) / 2.0

    def _exp(x):
        return math.exp(x) if x < 700 else math.inf

    return MomentBounds(_exp(log_lower), _exp(log_upper), _exp(log_mean), log_lower, log_upper, log_mean)


def bernoulli_moment_law(m, q, p):
    """Law of the limiting ``p``-th moment when each root is 1 with probability ``q``, else 0.

    With ``k`` unit roots the moment is ``C(pk, p)`` (0 for ``k = 0``).
    Returns ``(k, values, probabilities)``.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    k = np.arange(m + 1)
    values = [math.comb(p * int(j), p) for j in k]
    probs = np.array([math.comb(m, int(j)) * q**j * (1.0 - q) ** (m - j) for j in k])
    return k, values, probs


@njit
def _ks_sorted_loops(x, y):
    n = x.size
    m = y.size
    i = 0
    j = 0
    d = 0.0
    while i < n and j < m:
        v = min(x[i], y[j])
        while i < n and x[i] == v:
            i += 1
        while j < m and y[j] == v:
            j += 1
        diff = abs(i / n - j / m)
        if diff > d:
            d = diff
    return d


def _ks_sorted_numpy(x, y):
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / x.size
    fy = np.searchsorted(y, grid, side="right") / y.size
    return float(np.max(np.abs(fx - fy)))


_ks_sorted = select(_ks_sorted_loops, _ks_sorted_numpy)


def ks_distance(x, y):
    """Two-sample Kolmogorov-Smirnov statistic."""
    x = np.sort(np.asarray(x, dtype=float).ravel())
    y = np.sort(np.asarray(y, dtype=float).ravel())
    if x.size == 0 or y.size == 0:
        raise ValueError("both samples must be nonempty")
    return float(_ks_sorted(x, y))


@dataclass
class EnsembleRun:
    dist: DistSpec
    n: int
    p: int
    samples: int
    seed: int = DEFAULT_SEED
    mode: str = "independent"
    threads: Optional[int] = None
    lhs_samples: np.ndarray = field(default_factory=lambda: np.zeros(0))
    rhs_samples: np.ndarray = field(default_factory=lambda: np.zeros(0))
    summary: Optional[dict] = None


def _run_chunk(cfg, start, stop):
    roots = sample_roots_batch(cfg.dist, cfg.seed, start, stop, 0)
    lhs = lhs_moment_batch(roots, cfg.n, cfg.p)
    if cfg.mode == "independent":
        roots = sample_roots_batch(cfg.dist, cfg.seed, start, stop, 1)
    rhs = rhs_moment_batch(roots, cfg.p)
    return lhs, rhs


def log_skewness(x):
    """Sample skewness of ``log(x)`` over the positive entries."""
    lx = np.log(np.asarray(x, dtype=float)[np.asarray(x) > 0])
    if lx.size < 3:
        return float("nan")
    c = lx - lx.mean()
    sd = np.sqrt(np.mean(c**2))
    return float(np.mean(c**3) / sd**3) if sd > 0 else 0.0


def _describe(x, bins=40):
    x = np.asarray(x, dtype=float)
    pos = x[x > 0]
    out = {
        "mean": float(np.mean(x)),
        "median": float(np.median(x)),
        "std": float(np.std(x, ddof=1)) if x.size > 1 else 0.0,
        "stderr": float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0,
        "zero_fraction": float(np.mean(x == 0)),
        "log_skewness": log_skewness(x),
    }
    if pos.size:
        counts, edges = np.histogram(np.log10(pos), bins=bins)
        out["log10_hist"] = {"edges": edges.tolist(), "counts": counts.tolist()}
    return out


def summarize(run):
    d = run.dist
    s = {
        "lhs": _describe(run.lhs_samples),
        "rhs": _describe(run.rhs_samples),
        "ks": ks_distance(run.lhs_samples, run.rhs_samples),
        "ones_reference": math.comb(d.m * run.p, run.p),
    }
    if d.kind == "lognormal":
        b = expected_moment_lognormal(d.sigmas(), run.p)
        s["bounds"] = {"lower": b.lower, "upper": b.upper, "mean_exact": b.mean_exact}
    return s


def run_ensemble(cfg, chunk=1024):
    """Fill ``cfg.lhs_samples`` / ``cfg.rhs_samples`` (and ``summary``) in place and return ``cfg``."""
    if cfg.mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if cfg.samples < 0:
        raise ValueError("samples must be non-negative")
    N = int(cfg.samples)
    cfg.lhs_samples = np.zeros(N)
    cfg.rhs_samples = np.zeros(N)
    if N == 0:
        cfg.summary = None
        return cfg
    ranges = [(a, min(N, a + chunk)) for a in range(0, N, chunk)]
    workers = cfg.threads or os.cpu_count() or 1
    if workers <= 1 or len(ranges) == 1:
        results = [_run_chunk(cfg, a, b) for a, b in ranges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _run_chunk(cfg, *r), ranges))
    for (a, b), (lhs, rhs) in zip(ranges, results):
        cfg.lhs_samples[a:b] = lhs
        cfg.rhs_samples[a:b] = rhs
    cfg.summary = summarize(cfg)
    return cfg
