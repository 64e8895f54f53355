"""Eigenvalues, eigenvectors, trace moments and eigenvector oscillation for Hessenberg matrices."""

from dataclasses import dataclass, field
from typing import Optional

import warnings

import numpy as np
import scipy.linalg

from ._eigen_kernels import balance, hessenberg_reduce, hqr, one_based, tqli, upper_solve_scaled
from ._jit import njit, select
from .errors import ComplexSpectrum, NoConvergence
from .matrices import HessBand

DEFLATE_TOL = 1e-12
SIGN_TOL = 1e-12
NODE_TOL = 1e-9
INVERSE_ITERATIONS = 3
PIVOT_FLOOR = 1e-200


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray  # real parts, descending
    eigenvectors: Optional[np.ndarray] = None
    max_imag: float = 0.0
    residual: float = float("nan")
    values_complex: Optional[np.ndarray] = None
    path: str = "hqr"

    @property
    def n(self):
        return self.eigenvalues.size


def _hessenberg_orientation(A):
    n = A.shape[0]
    if n <= 2:
        return "lower"
    if not np.any(np.triu(A, 2)):
        return "lower"
    if not np.any(np.tril(A, -2)):
        return "upper"
    return None


def _symmetric_tridiagonal(A):
    # (diag, offdiag) of a symmetric matrix similar to A, or None
    n = A.shape[0]
    if n > 2 and (np.any(np.triu(A, 2)) or np.any(np.tril(A, -2))):
        return None
    b = np.diag(A, 1)
    c = np.diag(A, -1)
    prod = b * c
    if np.any(prod < 0.0):
        return None
    return np.diag(A).copy(), np.sqrt(prod)


def _run_hqr(M, balanced, reduce):
    n = M.shape[0]
    a = one_based(np.ascontiguousarray(M))
    if balanced:
        balance(a)
    if reduce:
        hessenberg_reduce(a)
    wr, wi, status = hqr(a, DEFLATE_TOL, 30 * max(n, 1))
    if status:
        raise NoConvergence(f"QR iteration exceeded {30 * n} sweeps")
    return wr + 1j * wi


def _eigenvalues_hqr(A, balanced):
    """QR on the Hessenberg input; a Householder-reduced retry if complex pairs show up.

    For strongly non-normal lower Hessenberg input, sweeping the transpose can
    split a cluster of real eigenvalues into spurious complex pairs, while QR
    after an orthogonal reduction of ``A`` itself does not (and vice versa on
    other inputs).  The run with the smaller imaginary residue is kept.
    """
    lower = _hessenberg_orientation(A) == "lower"
    vals = _run_hqr(A.T if lower else A, balanced, False)
    imag = np.max(np.abs(vals.imag)) if vals.size else 0.0
    if lower and imag > 0.0:
        alt = _run_hqr(A, balanced, True)
        if np.max(np.abs(alt.imag)) < imag:
            vals = alt
    return vals


def _eigenvalues_tqli(d, e):
    n = d.size
    dd = np.zeros(n + 1)
    dd[1:] = d
    ee = np.zeros(n + 1)
    ee[2:] = e
    if tqli(dd, ee, 30):
        raise NoConvergence("symmetric QL iteration did not converge")
    return dd[1:].astype(complex)


def _solve_scaled(lu, piv, v):
    # permuted unit-lower solve, then a rescaling back-substitution: with a
    # near-exact shift the raw solution can exceed the float range, and only
    # its direction matters
    y = v.copy()
    for i, p in enumerate(piv):
        if p != i:
            y[i], y[p] = y[p], y[i]
    y = scipy.linalg.solve_triangular(lu, y, lower=True, unit_diagonal=True, check_finite=False)
    x = upper_solve_scaled(lu, y)
    nx = np.linalg.norm(x)
    if not np.isfinite(nx) or nx == 0.0:
        return None
    return x / nx


def inverse_iteration(A, lam, iterations=INVERSE_ITERATIONS):
    """Eigenvector for ``lam`` by shifted inverse iteration on ``A`` itself.

    Two start vectors are iterated and the iterate with the smallest explicit
    residual is kept; on strongly non-normal input later iterates can be
    worse than the first.  Returns the vector scaled to unit 2-norm with its
    last nonzero entry positive (real case).
    """
    n = A.shape[0]
    scale = max(np.abs(A).sum(axis=1).max(), np.finfo(float).tiny)
    dtype = complex if np.iscomplexobj(lam) and lam.imag != 0 else float
    lam = lam.real if dtype is float else lam
    mu = lam + 1e-14 * scale
    A = A.astype(dtype)
    M = A - mu * np.eye(n, dtype=dtype)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    # an exactly singular shift is the best case for inverse iteration; only
    # pivots small enough to overflow the solve are lifted (tiny but finite
    # pivots are what make the iteration work on non-normal input)
    d = np.diagonal(lu).copy()
    tiny = np.abs(d) < PIVOT_FLOOR * scale
    if tiny.any():
        d[tiny] = PIVOT_FLOOR * scale
        lu[np.arange(n), np.arange(n)] = d
    t = np.arange(1, n + 1)
    best, best_res = None, np.inf
    for start in (np.ones(n) + 0.1 * np.sin(t), np.cos(2.4 * t) + 0.3):
        v = start.astype(dtype)
        for _ in range(iterations):
            v = _solve_scaled(lu, piv, v)
            if v is None:
                break
            res = np.linalg.norm(A @ v - lam * v)
            if res < best_res:
                best, best_res = v, res
    if best is None:
        raise NoConvergence("inverse iteration broke down")
    v = best
    nz = np.flatnonzero(np.abs(v) > 0)
    if nz.size and dtype is float and v[nz[-1]] < 0:
        v = -v
    return v


def eigen_hessenberg(A, want_vectors=False, assume_tp=False, balanced=True, path="auto"):
    """Spectrum of a real Hessenberg matrix.

    ``path`` is ``auto``, ``hqr`` (double-shift QR), ``symmetric`` (QL on the
    symmetrized tridiagonal; needs sub/super products >= 0) or ``lapack``.
    ``auto`` takes the symmetric path when it applies.  With ``assume_tp``
    imaginary parts above ``1e-6 * ||A||`` raise :class:`ComplexSpectrum`.
    """
    if isinstance(A, HessBand):
        A = A.to_dense()
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if path not in ("auto", "hqr", "symmetric", "lapack"):
        raise ValueError(f"unknown path {path!r}")
    if path in ("auto", "hqr", "symmetric") and _hessenberg_orientation(A) is None:
        raise ValueError("matrix is not Hessenberg")
    if n == 0:
        return SpectrumResult(np.zeros(0), np.zeros((0, 0)) if want_vectors else None, 0.0, 0.0, np.zeros(0, complex))

    used = path
    tri = _symmetric_tridiagonal(A) if path in ("auto", "symmetric") else None
    if path == "symmetric" and tri is None:
        raise ValueError("symmetric path needs a tridiagonal matrix with non-negative sub*super products")
    if tri is not None:
        vals = _eigenvalues_tqli(*tri)
        used = "symmetric"
    elif path == "lapack":
        vals = np.linalg.eigvals(A).astype(complex)
    else:
        vals = _eigenvalues_hqr(A, balanced)
        used = "hqr"

    order = np.lexsort((-vals.imag, -vals.real))
    vals = vals[order]
    max_imag = float(np.max(np.abs(vals.imag))) if n else 0.0
    norm = float(np.abs(A).sum(axis=1).max())
    if assume_tp and max_imag > 1e-6 * max(norm, 1.0):
        raise ComplexSpectrum(f"imaginary part {max_imag:.3g} for a matrix declared TP")
    res = SpectrumResult(vals.real.copy(), None, max_imag, float("nan"), vals, used)
    if want_vectors:
        # iterate on the balanced matrix B = D^-1 A D; rounding in the shifted
        # solve then stays small relative to the graded entries of A
        a = one_based(A)
        D = balance(a)[1:] if balanced else np.ones(n)
        B = a[1:, 1:]
        V = np.zeros((n, n), dtype=complex if max_imag > 0 else float)
        worst = 0.0
        for k in range(n):
            lam = vals[k] if max_imag > 0 else vals[k].real
            v = D * inverse_iteration(B, lam)
            v = v / np.linalg.norm(v)
            V[:, k] = v
            worst = max(worst, np.linalg.norm(A @ v - lam * v) / np.linalg.norm(v))
        res.eigenvectors = V
        res.residual = float(worst)
    return res


@njit
def _trace_poly_band_loops(band, coeffs):
    # Tr(sum_k coeffs[k] A^k) for lower Hessenberg A in row-band storage
    n, w = band.shape
    b = w - 2
    K = coeffs.size - 1
    total = 0.0
    span = K * (b + 1) + 1
    x = np.zeros(span)
    y = np.zeros(span)
    for i in range(n):
        lo0 = max(0, i - K)
        hi0 = min(n - 1, i + K * b)
        size = hi0 - lo0 + 1
        for t in range(size):
            x[t] = 0.0
        x[i - lo0] = 1.0
        lo = i
        hi = i
        acc = coeffs[0]
        for k in range(1, K + 1):
            nlo = max(0, lo - 1)
            nhi = min(n - 1, hi + b)
            for r in range(nlo, nhi + 1):
                s = 0.0
                # A[r, c] is stored at band[r, r + 1 - c] for c in [r - b, r + 1]
                c0 = max(lo, r - b)
                c1 = min(hi, r + 1)
                for c in range(c0, c1 + 1):
                    s += band[r, r + 1 - c] * x[c - lo0]
                y[r - lo0] = s
            for r in range(nlo, nhi + 1):
                x[r - lo0] = y[r - lo0]
            lo = nlo
            hi = nhi
            acc += coeffs[k] * x[i - lo0]
        total += acc
    return total


def _band_matvec_numpy(band, X):
    # Y = A @ X for the band matrix, X of shape (n, cols)
    n, w = band.shape
    Y = np.zeros_like(X)
    for d in range(w):
        off = 1 - d
        if off >= 0:
            Y[: n - off] += band[: n - off, d, None] * X[off:]
        else:
            Y[-off:] += band[-off:, d, None] * X[: n + off]
    return Y


def _trace_poly_band_numpy(band, coeffs, block=512):
    n = band.shape[0]
    total = 0.0
    for start in range(0, n, block):
        cols = np.arange(start, min(n, start + block))
        X = np.zeros((n, cols.size))
        X[cols, np.arange(cols.size)] = 1.0
        acc = coeffs[0] * cols.size
        for k in range(1, coeffs.size):
            X = _band_matvec_numpy(band, X)
            acc += coeffs[k] * X[cols, np.arange(cols.size)].sum()
        total += acc
    return total


trace_poly_band = select(_trace_poly_band_loops, _trace_poly_band_numpy)


def _as_band(A):
    if isinstance(A, HessBand):
        return A
    return HessBand.from_dense(A)


def trace_series_average(A, coeffs):
    """``(1/n) Tr(sum_k coeffs[k] A^k)`` through band matrix-vector products."""
    band = _as_band(A)
    c = np.ascontiguousarray(coeffs, dtype=float)
    return float(trace_poly_band(np.ascontiguousarray(band.data), c)) / band.n


def esd_moment(A, p):
    """``(1/n) Tr(A^p)`` without an eigensolve; lower Hessenberg band structure is exploited."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if not isinstance(A, HessBand) and _hessenberg_orientation(np.asarray(A)) != "lower":
        A = np.asarray(A, dtype=float)
        return float(np.trace(np.linalg.matrix_power(A, p))) / A.shape[0]
    c = np.zeros(p + 1)
    c[p] = 1.0
    return trace_series_average(A, c)


def exp_taylor_coefficients(radius, rtol=1e-17):
    """Taylor coefficients ``1/k!`` of exp, cut once ``radius^k / k!`` is negligible."""
    coeffs = [1.0]
    term = peak = 1.0
    k = 0
    while True:
        k += 1
        coeffs.append(coeffs[-1] / k)
        term *= radius / k
        peak = max(peak, term)
        if k > radius and term < rtol * peak:
            return np.array(coeffs)


def esd_average(A, f, spectrum=None):
    """Mean of ``f`` over the eigenvalues (complex pairs included, real part returned)."""
    if spectrum is None:
        spectrum = eigen_hessenberg(A)
    vals = spectrum.values_complex
    if vals is None:
        vals = spectrum.eigenvalues.astype(complex)
    if vals.size == 0:
        raise ValueError("empty spectrum")
    fv = np.broadcast_to(np.asarray(f(vals)), vals.shape)
    return float(np.mean(fv).real)


def sign_variations(v, tol=SIGN_TOL):
    """Strict sign changes between consecutive entries, ignoring entries below ``tol * ||v||``."""
    v = np.asarray(v)
    if np.iscomplexobj(v):
        v = v.real
    v = v.astype(float)
    if v.size == 0:
        return 0
    keep = np.abs(v) >= tol * np.linalg.norm(v)
    s = np.sign(v[keep & (v != 0)])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def piecewise_nodes(v, tol=0.0):
    """Zeros of the piecewise-linear interpolant ``x(t)`` of ``v`` on ``[1, n]``.

    Entries with ``|v_i| <= tol * ||v||`` count as zeros.  A zero entry is a
    node when it lies strictly between the first and last nonzero entries.
    """
    v = np.asarray(v)
    if np.iscomplexobj(v):
        v = v.real
    v = v.astype(float).copy()
    if v.size == 0:
        return []
    v[np.abs(v) <= tol * np.linalg.norm(v)] = 0.0
    nz = np.flatnonzero(v)
    if nz.size == 0:
        return []
    first, last = nz[0], nz[-1]
    nodes = []
    for k in range(first, last):
        a, b = v[k], v[k + 1]
        if a == 0.0:
            nodes.append(float(k + 1))
        elif a * b < 0.0:
            nodes.append(float(k + 1 + a / (a - b)))
    return nodes


def _interlace(inner, outer, tol):
    # one node of `inner` strictly inside each gap of `outer`, and none outside
    if len(outer) != len(inner) + 1:
        return False
    for i, a in enumerate(inner):
        if not (outer[i] + tol < a < outer[i + 1] - tol):
            return False
    return True


@dataclass
class OscillationReport:
    sign_variations: list
    nodes: list
    interlacing_ok: list
    expected_variations: list = field(default_factory=list)

    @property
    def variations_ok(self):
        return self.sign_variations == self.expected_variations

    @property
    def ok(self):
        return self.variations_ok and all(self.interlacing_ok)


def check_oscillation(S, tol=NODE_TOL, sign_tol=SIGN_TOL):
    """Sign-variation counts and node interlacing for the eigenvectors in ``S``."""
    if S.eigenvectors is None:
        raise ValueError("spectrum carries no eigenvectors")
    V = S.eigenvectors
    n = V.shape[1]
    var = [sign_variations(V[:, k], sign_tol) for k in range(n)]
    nodes = [piecewise_nodes(V[:, k], sign_tol) for k in range(n)]
    inter = [_interlace(nodes[k], nodes[k + 1], tol) for k in range(n - 1)]
    return OscillationReport(var, nodes, inter, list(range(n)))


def esd_histogram(A, bins, spectrum=None):
    """Counts of the (real parts of the) eigenvalues in ``bins`` equal bins over ``[min, max]``."""
    if spectrum is None:
        spectrum = eigen_hessenberg(A)
    counts, edges = np.histogram(spectrum.eigenvalues, bins=bins)
    return edges, counts


def ks_to_cdf(samples, cdf):
    """Sup distance between the empirical CDF of ``samples`` and a continuous ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("no samples")
    F = np.asarray(cdf(x), dtype=float)
    hi = np.arange(1, n + 1) / n - F
    lo = F - np.arange(0, n) / n
    return float(max(hi.max(), lo.max()))
