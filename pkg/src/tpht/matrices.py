"""Hessenberg/Toeplitz constructors, initial minors and total-positivity tests.

Dense matrices are plain ``float64`` ndarrays.  Lower Hessenberg matrices
(zero above the first superdiagonal) can also be carried in row-band form by
:class:`HessBand`, which is what the trace kernels consume; dense storage at
``n = 10_000`` would need 800 MB.
"""

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from ._jit import njit, select
from .symbols import Symbol, _as_symbol

TP_TOL = 1e-10
# a computed minor is also allowed this many ulps of its Hadamard bound below zero
ROUNDING_SLACK = 64 * np.finfo(float).eps
EXHAUSTIVE_MAX_N = 10


@dataclass(frozen=True, eq=False)
class HessBand:
    """Row-band storage of a lower Hessenberg matrix.

    ``data[i, d] == A[i, i + 1 - d]`` for ``d = 0 .. lower + 1``; ``d = 0`` is
    the superdiagonal, ``d = 1`` the diagonal.  Entries that would fall
    outside the matrix are stored as zero.
    """

    data: np.ndarray

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def lower(self):
        return self.data.shape[1] - 2

    @classmethod
    def from_dense(cls, A, tol=0.0):
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError("matrix must be square")
        if n > 2 and np.any(np.abs(np.triu(A, 2)) > tol):
            raise ValueError("matrix is not lower Hessenberg")
        low = np.abs(np.tril(A, -1)) > tol
        lower = int(np.max(np.subtract.outer(np.arange(n), np.arange(n))[low])) if low.any() else 0
        w = lower + 2
        data = np.zeros((n, w))
        for d in range(w):
            off = 1 - d
            if off >= 0:
                idx = np.arange(0, n - off)
            else:
                idx = np.arange(-off, n)
            data[idx, d] = A[idx, idx + off]
        return cls(data)

    def to_dense(self):
        n, w = self.data.shape
        A = np.zeros((n, n))
        for d in range(w):
            off = 1 - d
            idx = np.arange(max(0, -off), min(n, n - off))
            A[idx, idx + off] = self.data[idx, d]
        return A


def tpht_truncation(s, n):
    """The ``n x n`` truncation: ``T[i, j] = coeffs[i - j + 1]``, unit superdiagonal."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = _as_symbol(s)
    c = s.coeffs
    i, j = np.indices((n, n))
    d = i - j + 1
    T = np.zeros((n, n))
    mask = (d >= 0) & (d < c.size)
    T[mask] = c[d[mask]]
    return T


def tpht_band(s, n):
    """Same matrix as :func:`tpht_truncation`, in :class:`HessBand` storage."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = _as_symbol(s)
    c = s.coeffs
    data = np.zeros((n, c.size if c.size >= 2 else 2))
    data[:, : c.size] = c
    rows = np.arange(n)[:, None]
    cols = rows + 1 - np.arange(data.shape[1])[None, :]
    data[(cols < 0) | (cols >= n)] = 0.0
    return HessBand(data)


def companion_matrix(char_coeffs):
    """Companion matrix of ``x^n + sum c_i x^i``: unit superdiagonal, last row ``-c``."""
    c = np.asarray(char_coeffs, dtype=float).ravel()
    n = c.size
    C = np.zeros((n, n))
    if n == 0:
        return C
    C[np.arange(n - 1), np.arange(1, n)] = 1.0
    C[-1, :] = -c
    return C


def epsilon_lambda(lam):
    lam = np.asarray(lam, dtype=float).ravel()
    n = lam.size
    E = np.diag(lam)
    E[np.arange(n - 1), np.arange(1, n)] = 1.0
    return E


def principal_nilpotent(n):
    return epsilon_lambda(np.zeros(n))


@njit
def _bareiss(M):
    # fraction-free elimination with partial pivoting; overwrites M
    k = M.shape[0]
    if k == 0:
        return 1.0
    sign = 1.0
    prev = 1.0
    for c in range(k - 1):
        p = c
        best = abs(M[c, c])
        for r in range(c + 1, k):
            v = abs(M[r, c])
            if v > best:
                best = v
                p = r
        if best == 0.0:
            return 0.0
        if p != c:
            for j in range(c, k):
                t = M[c, j]
                M[c, j] = M[p, j]
                M[p, j] = t
            sign = -sign
        piv = M[c, c]
        for r in range(c + 1, k):
            mrc = M[r, c]
            for j in range(c + 1, k):
                M[r, j] = (M[r, j] * piv - mrc * M[c, j]) / prev
        prev = piv
    return sign * M[k - 1, k - 1]


def det(M):
    """Determinant by fraction-free (Bareiss) elimination with partial pivoting."""
    M = np.array(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("det needs a square matrix")
    return float(_bareiss(M))


def tau_init(A, S):
    """Minor with rows ``S`` (1-based) and the first ``|S|`` columns; 1 for empty ``S``."""
    A = np.asarray(A, dtype=float)
    rows = sorted(int(i) for i in S)
    if not rows:
        return 1.0
    if rows[0] < 1 or rows[-1] > A.shape[0]:
        raise ValueError("row index out of range")
    if len(set(rows)) != len(rows):
        raise ValueError("row indices must be distinct")
    r = np.array(rows) - 1
    return det(A[np.ix_(r, np.arange(len(rows)))])


@njit
def _initial_minors_loops(A):
    # out[i, j] = tau_{{i+1} u [j]}(A) for i >= j (0-based j counts the prefix)
    n = A.shape[0]
    out = np.zeros((n, n))
    for j in range(n):
        k = j + 1
        sub = np.empty((k, k))
        for i in range(j, n):
            for r in range(j):
                for c in range(k):
                    sub[r, c] = A[r, c]
            for c in range(k):
                sub[j, c] = A[i, c]
            out[i, j] = _bareiss(sub)
    return out


def _initial_minors_numpy(A):
    n = A.shape[0]
    out = np.zeros((n, n))
    for j in range(n):
        k = j + 1
        rows = np.empty((n - j, k), dtype=np.intp)
        rows[:, :j] = np.arange(j)
        rows[:, j] = np.arange(j, n)
        sub = A[rows[:, :, None], np.arange(k)[None, None, :]]
        out[j:, j] = np.linalg.det(sub)
    return out


_initial_minors = select(_initial_minors_loops, _initial_minors_numpy)


def initial_minors(A):
    """Table ``M[i-1, j-1] = tau_{{i} u [j-1]}(A)`` for ``i >= j``; the diagonal holds ``tau_[j]``."""
    A = np.ascontiguousarray(A, dtype=float)
    return _initial_minors(A)


@dataclass
class TPReport:
    is_tp: bool
    method: str
    witness: Optional[tuple] = None  # (rows, cols, value), 1-based
    note: str = ""


@njit
def _next_comb(idx, n):
    k = idx.size
    i = k - 1
    while i >= 0 and idx[i] == n - k + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, k):
        idx[j] = idx[j - 1] + 1
    return True


@njit
def _first_negative_minor_loops(A, tol):
    # returns (k, rows, cols, value); k == 0 when no minor is below its threshold
    n = A.shape[0]
    sub = np.empty((n, n))
    for k in range(1, n + 1):
        ridx = np.arange(k)
        more_r = True
        while more_r:
            cidx = np.arange(k)
            more_c = True
            while more_c:
                s = sub[:k, :k]
                for a in range(k):
                    for b in range(k):
                        s[a, b] = A[ridx[a], cidx[b]]
                had = 1.0
                for a in range(k):
                    rn = 0.0
                    for b in range(k):
                        rn += s[a, b] * s[a, b]
                    had *= math.sqrt(rn)
                v = _bareiss(s)
                if v < -max(tol, ROUNDING_SLACK * had):
                    return k, ridx.copy(), cidx.copy(), v
                more_c = _next_comb(cidx, n)
            more_r = _next_comb(ridx, n)
    return 0, np.zeros(0, np.int64), np.zeros(0, np.int64), 0.0


def _first_negative_minor_numpy(A, tol):
    n = A.shape[0]
    for k in range(1, n + 1):
        combs = np.array(list(combinations(range(n), k)), dtype=np.intp)
        sub = A[combs[:, None, :, None], combs[None, :, None, :]]
        dets = np.linalg.det(sub)
        had = np.prod(np.linalg.norm(sub, axis=-1), axis=-1)
        bad = np.flatnonzero((dets < -np.maximum(tol, ROUNDING_SLACK * had)).ravel())
        if bad.size:
            r, c = divmod(int(bad[0]), combs.shape[0])
            return k, combs[r].astype(np.int64), combs[c].astype(np.int64), float(dets[r, c])
    return 0, np.zeros(0, np.int64), np.zeros(0, np.int64), 0.0


_first_negative_minor = select(_first_negative_minor_loops, _first_negative_minor_numpy)


def _neville_certifies(A, tol):
    A = np.array(A, dtype=float)
    n = A.shape[0]
    for k in range(n - 1):
        # rows that are zero from column k on do not affect any minor; park them at the bottom
        rest = A[k:, k:]
        zero = np.all(np.abs(rest) <= tol, axis=1)
        if zero.any() and not zero.all():
            order = np.concatenate([np.flatnonzero(~zero), np.flatnonzero(zero)]) + k
            A[k:] = A[order]
        col = A[k:, k]
        if np.any(col < -tol):
            return False
        for i in range(n - 1, k, -1):
            below, above = A[i, k], A[i - 1, k]
            if abs(below) <= tol:
                A[i, k] = 0.0
                continue
            if abs(above) <= tol:
                return False
            mult = below / above
            if mult < -tol:
                return False
            A[i, k:] -= mult * A[i - 1, k:]
            A[i, k] = 0.0
    return A[n - 1, n - 1] >= -tol


def is_totally_positive(A, mode="exhaustive", tol=TP_TOL):
    """Check that every minor of ``A`` is non-negative.

    ``exhaustive`` evaluates all equal-size row/column minors (``n <= 10``)
    and reports the first one below ``-max(tol, 64 eps H)``, where ``H`` is
    the product of the submatrix row norms (so rounding in a minor that is
    exactly zero does not count as a violation).  ``neville`` runs Neville
    elimination on ``A`` and ``A.T``; a pass is a certificate, a failure only
    means the certificate could not be produced.
    """
    A = np.ascontiguousarray(A, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive TP check is limited to n <= {EXHAUSTIVE_MAX_N}, got {n}")
        k, rows, cols, val = _first_negative_minor(A, tol)
        if k == 0:
            return TPReport(True, "exhaustive")
        witness = (tuple(int(r) + 1 for r in rows), tuple(int(c) + 1 for c in cols), float(val))
        return TPReport(False, "exhaustive", witness)
    if mode == "neville":
        ok = _neville_certifies(A, tol) and _neville_certifies(A.T, tol)
        return TPReport(bool(ok), "neville", note="sufficient certificate" if ok else "no certificate")
    raise ValueError(f"unknown mode {mode!r}")


def one_norm_bound(s, n):
    """Induced 1-norm (max column sum of ``|T|``) of the ``n x n`` truncation."""
    s = _as_symbol(s)
    c = np.abs(s.coeffs)
    m = c.size - 1
    best = 0.0
    for j in range(n):
        tot = (c[0] if j >= 1 else 0.0) + c[1 : min(m, n - j) + 1].sum()
        best = max(best, tot)
    return float(best)
