import numpy as np
import pytest

from tpht import (
    ComplexSpectrum,
    check_oscillation,
    eigen_hessenberg,
    epsilon_lambda,
    esd_average,
    esd_histogram,
    esd_moment,
    lu_dynamics_step,
    one_norm_bound,
    piecewise_nodes,
    sign_variations,
    tpht_band,
    tpht_truncation,
)
from tpht.spectra import exp_taylor_coefficients, inverse_iteration, ks_to_cdf, trace_series_average

T5_EVALS = [11.0024, 7.9317, 4.3187, 1.5285, 0.2187]


def test_ones5_eigenvalues():
    S = eigen_hessenberg(tpht_truncation([1] * 5, 5), want_vectors=True, assume_tp=True)
    assert np.allclose(S.eigenvalues, T5_EVALS, atol=5e-4)
    assert S.max_imag == 0.0
    assert S.residual < 1e-10


def test_tridiagonal_closed_form():
    n = 50
    k = np.arange(1, n + 1)
    want = 2 + 2 * np.cos(k * np.pi / (n + 1))
    for path in ("auto", "hqr"):
        assert np.max(np.abs(eigen_hessenberg(tpht_truncation([1, 1], n), path=path).eigenvalues - want)) < 1e-9
    A5 = tpht_truncation([1, 1], 5)
    oracle = np.sort(np.roots(np.poly(A5)).real)[::-1]
    assert np.allclose(eigen_hessenberg(A5).eigenvalues, oracle, atol=1e-9)


def test_triangular_input_is_exact():
    S = eigen_hessenberg(epsilon_lambda([3.0, 2.0, 1.0]))
    assert S.eigenvalues.tolist() == [3.0, 2.0, 1.0]


def test_against_high_precision_oracle():
    mp = pytest.importorskip("mpmath")
    rng = np.random.default_rng(0)
    with mp.workdps(60):
        for _ in range(8):
            A = tpht_truncation(rng.uniform(0, 2, rng.integers(2, 6)), int(rng.integers(2, 25)))
            ref = mp.eig(mp.matrix(A.tolist()), left=False, right=False)
            ref = np.sort([float(mp.re(z)) for z in ref])[::-1]
            assert np.allclose(eigen_hessenberg(A).eigenvalues, ref, rtol=1e-7, atol=1e-9)


def test_general_upper_hessenberg():
    rng = np.random.default_rng(1)
    H = np.triu(rng.standard_normal((12, 12)), -1)
    got = eigen_hessenberg(H, path="hqr").values_complex
    ref = np.linalg.eigvals(H)
    ref = ref[np.lexsort((-ref.imag, -ref.real))]
    assert np.allclose(got, ref, atol=1e-10)


def test_non_hessenberg_rejected():
    with pytest.raises(ValueError):
        eigen_hessenberg(np.ones((4, 4)))


def test_complex_spectrum_guard():
    R = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert eigen_hessenberg(R).max_imag == pytest.approx(1.0)
    with pytest.raises(ComplexSpectrum):
        eigen_hessenberg(R, assume_tp=True)


def test_graded_nonnormal_eigenvalues_are_accurate():
    # eigenvalue condition numbers near 1e15; checked through the exact trace identity
    A = tpht_truncation([0.74537055, 0.06170059, 0.2467842], 50)
    S = eigen_hessenberg(A)
    assert S.max_imag == 0.0
    assert esd_moment(A, 3) == pytest.approx(np.mean(S.eigenvalues**3), rel=1e-10)
    assert esd_moment(A, 7) == pytest.approx(np.mean(S.eigenvalues**7), rel=1e-10)


def test_eigenvector_residual_up_to_200():
    rng = np.random.default_rng(2)
    for _ in range(25):
        A = tpht_truncation(rng.uniform(0, 2, rng.integers(1, 7)), int(rng.integers(2, 201)))
        S = eigen_hessenberg(A, want_vectors=True)
        assert np.all(np.diff(S.eigenvalues) <= 0)
        assert S.residual <= 1e-7


def test_eigenvector_normalization():
    S = eigen_hessenberg(tpht_truncation([1] * 5, 5), want_vectors=True)
    V = S.eigenvectors
    assert np.allclose(np.linalg.norm(V, axis=0), 1.0)
    assert np.all(V[-1] > 0)
    v = inverse_iteration(tpht_truncation([1] * 5, 5), S.eigenvalues[0])
    assert np.allclose(v, V[:, 0], atol=1e-10)


def test_strictly_tp_spectra_are_oscillatory():
    rng = np.random.default_rng(3)
    for _ in range(100):
        A = tpht_truncation(rng.uniform(0.05, 2, rng.integers(2, 7)), int(rng.integers(2, 11)))
        S = eigen_hessenberg(A, want_vectors=True, assume_tp=True)
        assert S.max_imag == 0.0
        assert np.all(S.eigenvalues > 0) and np.all(np.diff(S.eigenvalues) < 0)
        assert check_oscillation(S).ok


def test_spectrum_invariant_under_lu_step():
    rng = np.random.default_rng(4)
    for _ in range(40):
        A = tpht_truncation(rng.uniform(0, 2, rng.integers(2, 7)) + 1e-3, int(rng.integers(2, 51)))
        e0 = eigen_hessenberg(A).values_complex
        e1 = eigen_hessenberg(lu_dynamics_step(A)).values_complex
        assert np.max(np.abs(e0 - e1)) < 1e-7


def test_moment_two_paths():
    rng = np.random.default_rng(5)
    for _ in range(40):
        r = rng.uniform(0, 2, rng.integers(1, 6))
        n = int(rng.integers(2, 51))
        A = tpht_truncation(r, n)
        ev = eigen_hessenberg(A).values_complex
        for p in (1, 2, 3, 5):
            assert esd_moment(A, p) == pytest.approx(np.mean(ev**p).real, rel=1e-6, abs=1e-12)


def test_max_eigenvalue_below_norm_bound():
    for m in range(1, 6):
        A = tpht_truncation([1] * m, 40)
        assert eigen_hessenberg(A).eigenvalues[0] <= one_norm_bound([1] * m, 40)


def test_esd_moment_examples():
    assert esd_moment(tpht_band([1, 1], 100), 3) == pytest.approx(19.88, abs=1e-9)
    assert esd_moment(tpht_band([1, 1, 1], 100), 3) == pytest.approx(83.4, abs=1e-9)
    A = tpht_truncation([0.3, 1.7, 0.2], 17)
    assert esd_moment(A, 1) == pytest.approx(np.mean(np.diag(A)))
    assert esd_moment(tpht_band([1, 1], 9), 1) == pytest.approx(2.0)


def test_esd_moment_band_matches_dense_power():
    rng = np.random.default_rng(6)
    for _ in range(10):
        A = tpht_truncation(rng.uniform(0, 2, rng.integers(0, 5)), int(rng.integers(1, 30)))
        for p in (1, 2, 4, 6):
            ref = np.trace(np.linalg.matrix_power(A, p)) / A.shape[0]
            assert esd_moment(A, p) == pytest.approx(ref, rel=1e-12, abs=1e-12)
    with pytest.raises(ValueError):
        esd_moment(A, 0)


def test_esd_average_examples():
    assert esd_average(tpht_truncation([1, 1], 100), np.exp) == pytest.approx(16.7344, abs=5e-3)
    assert esd_average(tpht_truncation([1, 1, 1], 100), np.exp) == pytest.approx(166.85865, abs=5e-2)
    assert esd_average(tpht_truncation([0.4, 2.0], 7), lambda z: np.ones_like(z)) == 1.0


def test_trace_series_matches_eigen_average():
    A = tpht_truncation([1, 1, 1], 100)
    c = exp_taylor_coefficients(one_norm_bound([1, 1, 1], 100))
    assert trace_series_average(tpht_band([1, 1, 1], 100), c) == pytest.approx(esd_average(A, np.exp), rel=1e-9)


def test_sign_variations_examples():
    V = eigen_hessenberg(tpht_truncation([1] * 5, 5), want_vectors=True).eigenvectors
    assert sign_variations(V[:, 0]) == 0
    assert sign_variations(V[:, 1]) == 1
    assert V[1, 1] * V[2, 1] < 0  # the change sits between entries 2 and 3
    assert sign_variations([1, -1, 1, -1]) == 3
    assert sign_variations([1, 1e-14, -1]) == 1


def test_piecewise_nodes_examples():
    assert piecewise_nodes([1, -1]) == [1.5]
    assert piecewise_nodes([2, -2, 2]) == [1.5, 2.5]
    assert piecewise_nodes([1, 0, -1]) == [2.0]
    # grid oracle for the interpolant's root
    t = np.linspace(1, 3, 20001)
    x = np.interp(t, [1, 2, 3], [1, 0, -1])
    assert t[np.argmin(np.abs(x))] == pytest.approx(2.0, abs=1e-4)
    v = [3.0, 1.0, -2.0, -0.5, 4.0]
    nodes = piecewise_nodes(v)
    assert all(1 <= z <= len(v) for z in nodes)
    assert np.allclose(np.interp(nodes, np.arange(1, 6), v), 0.0, atol=1e-12)


def test_check_oscillation_examples():
    rep = check_oscillation(eigen_hessenberg(tpht_truncation([1] * 5, 5), want_vectors=True))
    assert rep.sign_variations == [0, 1, 2, 3, 4] and all(rep.interlacing_ok) and rep.ok
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    rep = check_oscillation(eigen_hessenberg(A, want_vectors=True))
    assert rep.sign_variations == [0, 1] and rep.ok


def test_check_oscillation_detects_failure():
    # a symmetric matrix with negative couplings is not oscillatory
    A = np.array([[2.0, 1.0, 0.0], [-1.0, 2.0, 1.0], [0.0, -1.0, 2.0]])
    S = eigen_hessenberg(A, want_vectors=True, path="lapack")
    assert S.max_imag > 0 or not check_oscillation(S).ok


def test_esd_histogram():
    edges, counts = esd_histogram(np.array([[4.0]]), 5)
    assert sum(counts) == 1 and edges[0] <= 4.0 <= edges[-1]
    A = epsilon_lambda([1.0, 2.0, 2.5, 4.0])
    edges, counts = esd_histogram(A, 3)
    ref_counts, ref_edges = np.histogram([1.0, 2.0, 2.5, 4.0], bins=3)
    assert np.allclose(edges, ref_edges) and list(counts) == ref_counts.tolist()


def test_ks_to_cdf():
    rng = np.random.default_rng(7)
    x = rng.uniform(0, 1, 20000)
    assert ks_to_cdf(x, lambda t: np.clip(t, 0, 1)) < 0.015
    assert ks_to_cdf([0.5], lambda t: np.clip(t, 0, 1)) == pytest.approx(0.5)
