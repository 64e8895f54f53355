import math

import numpy as np
import pytest
import scipy.stats

from tpht import DistSpec, EnsembleRun, bernoulli_moment_law, expected_moment_lognormal, ks_distance, run_ensemble
from tpht.ensemble import (
    DEFAULT_SEED,
    lhs_moment_batch,
    lhs_moment_sample,
    log_skewness,
    rhs_moment_batch,
    rhs_moment_sample,
    sample_roots,
    sample_roots_batch,
    stream,
)
from tpht.gs_asymptotics import compositions


def test_distspec_validation():
    with pytest.raises(ValueError):
        DistSpec("gamma", 3)
    with pytest.raises(ValueError):
        DistSpec("lognormal", 3, sigma=-1.0)
    with pytest.raises(ValueError):
        DistSpec("exponential", 3, mean=0.0)
    with pytest.raises(ValueError):
        DistSpec("bernoulli", 3, q=1.5)
    assert DistSpec("lognormal", 3, sigma=[0.5, 1.0, 2.0]).sigmas().tolist() == [0.5, 1.0, 2.0]


def test_sample_roots_examples():
    assert sample_roots(DistSpec("bernoulli", 5, q=1.0), stream(1, 0)).tolist() == [1.0] * 5
    assert sample_roots(DistSpec("bernoulli", 5, q=0.0), stream(1, 0)).tolist() == [0.0] * 5
    a = sample_roots_batch(DistSpec("lognormal", 1, 1.0), 11, 0, 100_000).ravel()
    assert np.mean(a) == pytest.approx(math.exp(0.5), rel=0.02)
    e = sample_roots_batch(DistSpec("exponential", 1, mean=2.0), 12, 0, 50_000).ravel()
    assert np.mean(e) == pytest.approx(2.0, rel=0.03) and np.all(e >= 0)


def test_streams_are_independent_of_partition():
    dist = DistSpec("lognormal", 4, 1.0)
    whole = sample_roots_batch(dist, 5, 0, 100)
    parts = np.vstack([sample_roots_batch(dist, 5, a, a + 25) for a in range(0, 100, 25)])
    assert np.array_equal(whole, parts)
    assert not np.array_equal(sample_roots_batch(dist, 5, 0, 10, side=0), sample_roots_batch(dist, 5, 0, 10, side=1))


def test_lhs_examples():
    assert lhs_moment_sample(DistSpec("bernoulli", 2, q=1.0), 100, 3, stream(0, 0)) == pytest.approx(19.88)
    assert lhs_moment_sample(DistSpec("bernoulli", 4, q=0.0), 37, 3, stream(0, 0)) == 0.0


def test_lhs_cross_validates_rhs_bounds():
    dist = DistSpec("lognormal", 3, 1.0)
    roots = sample_roots_batch(dist, 21, 0, 10_000)
    lhs = lhs_moment_batch(roots, 10, 5)
    b = expected_moment_lognormal(dist.sigmas(), 5)
    se = np.std(lhs, ddof=1) / math.sqrt(lhs.size)
    assert b.lower - 3 * se <= np.mean(lhs) <= b.upper + 3 * se


def test_rhs_examples():
    assert rhs_moment_sample(DistSpec("bernoulli", 3, q=1.0), 5, stream(0, 0)) == math.comb(15, 5)
    assert rhs_moment_sample(DistSpec("bernoulli", 3, q=0.0), 5, stream(0, 0)) == 0.0
    got = rhs_moment_batch(np.array([[2.0, 3.0]]), 2)[0]
    full = np.convolve(np.convolve([1, 2], [1, 2]), np.convolve([1, 3], [1, 3]))
    assert full.tolist() == [1, 10, 37, 60, 36]
    assert got == 37.0


def test_rhs_batch_against_direct_expansion():
    rng = np.random.default_rng(0)
    roots = rng.uniform(0, 3, (50, 4))
    for p in (1, 2, 5):
        got = rhs_moment_batch(roots, p)
        for r, g in zip(roots, got):
            # np.poly(-r) lists e_0, e_1, ..., the ascending coefficients of prod(1 + r z)
            poly = np.polynomial.polynomial.polypow(np.poly(-r), p)
            assert g == pytest.approx(poly[p], rel=1e-12)


def _mean_by_compositions(sig, p):
    tot = 0.0
    for c in compositions(p, len(sig)):
        tot += math.prod(math.comb(p, i) * math.exp(i * i * s * s / 2) for i, s in zip(c, sig))
    return tot


def test_expected_moment_examples():
    b = expected_moment_lognormal(np.zeros(3), 4)
    assert b.mean_exact == pytest.approx(math.comb(12, 4)) and b.lower == b.upper == pytest.approx(math.comb(12, 4))
    b = expected_moment_lognormal(np.ones(3), 5)
    assert b.lower == pytest.approx(math.comb(15, 5) * math.exp(25 / 6))
    assert b.upper == pytest.approx(math.comb(15, 5) * math.exp(25 / 2))
    b = expected_moment_lognormal([1.0], 2)
    assert b.mean_exact == pytest.approx(math.e**2) and b.lower == pytest.approx(b.upper)


def test_expected_moment_matches_composition_sum():
    rng = np.random.default_rng(1)
    for _ in range(20):
        sig = rng.uniform(0.1, 1.2, rng.integers(1, 5))
        p = int(rng.integers(1, 6))
        b = expected_moment_lognormal(sig, p)
        assert b.mean_exact == pytest.approx(_mean_by_compositions(sig, p), rel=1e-12)
        assert b.lower <= b.mean_exact * (1 + 1e-12) and b.mean_exact <= b.upper * (1 + 1e-12)
        assert b.lower == pytest.approx(math.comb(len(sig) * p, p) * math.exp(p * p / (2 * np.sum(sig**-2.0))))
        assert b.upper == pytest.approx(math.comb(len(sig) * p, p) * math.exp(p * p * np.max(sig) ** 2 / 2))


def test_expected_moment_overflow_is_inf_not_error():
    b = expected_moment_lognormal(np.full(10, 3.0), 20)
    assert math.isinf(b.upper) and b.log_upper > 700
    assert b.log_lower <= b.log_mean <= b.log_upper


def test_bernoulli_law():
    k, values, probs = bernoulli_moment_law(10, 0.5, 5)
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert probs[0] == pytest.approx(1 / 1024) and values[0] == 0
    assert values == [math.comb(5 * j, 5) for j in range(11)]
    _, v1, p1 = bernoulli_moment_law(4, 1.0, 3)
    assert p1[-1] == 1.0 and v1[-1] == math.comb(12, 3) and p1[:-1].sum() == 0
    _, v0, p0 = bernoulli_moment_law(4, 0.0, 3)
    assert p0[0] == 1.0 and v0[0] == 0
    with pytest.raises(ValueError):
        bernoulli_moment_law(4, -0.1, 3)


def test_bernoulli_frequencies_within_multinomial_bands():
    dist = DistSpec("bernoulli", 10, q=0.5)
    N = 100_000
    rhs = rhs_moment_batch(sample_roots_batch(dist, DEFAULT_SEED, 0, N), 5)
    _, values, probs = bernoulli_moment_law(10, 0.5, 5)
    for v, pr in zip(values, probs):
        freq = np.mean(rhs == v)
        assert abs(freq - pr) <= 3 * math.sqrt(pr * (1 - pr) / N)


def test_ks_examples():
    x = np.array([0.3, 1.0, 2.0])
    assert ks_distance(x, x) == 0.0
    assert ks_distance(np.zeros(5), np.ones(7)) == 1.0
    assert ks_distance([1, 2, 3], [1.5, 2.5, 3.5]) == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        ks_distance([], [1.0])


def test_ks_against_scipy():
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = rng.standard_normal(rng.integers(1, 300))
        y = rng.standard_normal(rng.integers(1, 300)) + rng.uniform(-1, 1)
        if rng.random() < 0.5:
            x = np.round(x, 1)  # ties
            y = np.round(y, 1)
        assert ks_distance(x, y) == pytest.approx(scipy.stats.ks_2samp(x, y).statistic, abs=1e-12)


def test_run_is_deterministic_and_partition_free():
    def go(threads, chunk):
        cfg = EnsembleRun(DistSpec("lognormal", 3, 1.0), n=20, p=3, samples=3000, seed=99, threads=threads)
        return run_ensemble(cfg, chunk=chunk)

    a, b, c = go(1, 1024), go(4, 1024), go(3, 100)
    for r in (b, c):
        assert np.array_equal(a.lhs_samples, r.lhs_samples)
        assert np.array_equal(a.rhs_samples, r.rhs_samples)
    assert a.lhs_samples.size == a.rhs_samples.size == 3000


def test_run_modes():
    dist = DistSpec("exponential", 3, mean=1.0)
    sim = run_ensemble(EnsembleRun(dist, n=15, p=3, samples=200, seed=4, mode="simultaneous"))
    roots = sample_roots_batch(dist, 4, 0, 200, side=0)
    assert np.array_equal(sim.lhs_samples, lhs_moment_batch(roots, 15, 3))
    assert np.array_equal(sim.rhs_samples, rhs_moment_batch(roots, 3))
    ind = run_ensemble(EnsembleRun(dist, n=15, p=3, samples=200, seed=4, mode="independent"))
    assert np.array_equal(ind.lhs_samples, sim.lhs_samples)
    assert np.array_equal(ind.rhs_samples, rhs_moment_batch(sample_roots_batch(dist, 4, 0, 200, side=1), 3))
    with pytest.raises(ValueError):
        run_ensemble(EnsembleRun(dist, n=15, p=3, samples=10, mode="both"))


def test_empty_run():
    r = run_ensemble(EnsembleRun(DistSpec("lognormal", 3), n=10, p=3, samples=0))
    assert r.lhs_samples.size == 0 and r.rhs_samples.size == 0 and r.summary is None


def test_small_n_ks_band():
    cfg = EnsembleRun(DistSpec("lognormal", 3, 1.0), n=10, p=5, samples=10_000, seed=DEFAULT_SEED)
    ks = run_ensemble(cfg).summary["ks"]
    assert 0.01 < ks < 0.04


@pytest.mark.parametrize("m,p", [(3, 3), (3, 5), (5, 3)])
def test_rhs_mean_within_three_standard_errors(m, p):
    dist = DistSpec("lognormal", m, 0.5)
    rhs = rhs_moment_batch(sample_roots_batch(dist, DEFAULT_SEED, 0, 100_000), p)
    se = np.std(rhs, ddof=1) / math.sqrt(rhs.size)
    assert abs(np.mean(rhs) - expected_moment_lognormal(dist.sigmas(), p).mean_exact) <= 3 * se


@pytest.mark.parametrize("sigma", [0.5, 1.0])
def test_log_moments_nearly_symmetric(sigma):
    rhs = rhs_moment_batch(sample_roots_batch(DistSpec("lognormal", 10, sigma), DEFAULT_SEED, 0, 20_000), 20)
    assert abs(log_skewness(rhs)) < 0.2


def test_summary_fields():
    r = run_ensemble(EnsembleRun(DistSpec("lognormal", 3, 1.0), n=30, p=5, samples=500, seed=3))
    s = r.summary
    assert s["ones_reference"] == math.comb(15, 5)
    assert s["bounds"]["lower"] == pytest.approx(math.comb(15, 5) * math.exp(25 / 6))
    for side in ("lhs", "rhs"):
        assert {"mean", "median", "std", "stderr", "log_skewness", "log10_hist"} <= set(s[side])
        assert sum(s[side]["log10_hist"]["counts"]) == 500
