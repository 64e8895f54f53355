"""LU factorizations of Hessenberg matrices, LU dynamics, chops and the 3x3 Lusztig factorization."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateFactorization, SingularBlock, ZeroLeadingMinor, ZeroPivot
from .matrices import initial_minors


@dataclass
class LUFactors:
    L: np.ndarray
    U: np.ndarray
    method: str  # "closed_form" or "doolittle"

    def product(self):
        return self.L @ self.U


def _check_unit_hessenberg(T):
    n = T.shape[0]
    if T.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > 2 and np.any(np.triu(T, 2) != 0.0):
        raise ValueError("matrix is not lower Hessenberg")
    if n > 1 and np.any(np.diag(T, 1) != 1.0):
        raise ValueError("superdiagonal must be all ones")


def lu_closed_form(T, assume_tpht=True):
    """LU factors from ratios of initial minors.

    ``L[i, j] = tau_{{i} u [j-1]} / tau_[j]`` and ``U[i, i] = tau_[i] / tau_[i-1]``
    with ones on the superdiagonal of ``U``.  The formulas only need ``T`` to
    be lower Hessenberg with unit superdiagonal, so LU-dynamics iterates are
    accepted too.  With ``assume_tpht=False`` that shape is validated first.
    """
    T = np.ascontiguousarray(T, dtype=float)
    if not assume_tpht:
        _check_unit_hessenberg(T)
    n = T.shape[0]
    M = initial_minors(T)
    lead = np.diag(M).copy()
    bad = np.flatnonzero((lead == 0.0) | ~np.isfinite(lead))
    if bad.size:
        raise ZeroLeadingMinor(f"leading initial minor tau_[{bad[0] + 1}] vanishes")
    L = np.tril(M / lead[None, :], -1) + np.eye(n)
    U = np.zeros((n, n))
    prev = np.concatenate([[1.0], lead[:-1]])
    U[np.arange(n), np.arange(n)] = lead / prev
    U[np.arange(n - 1), np.arange(1, n)] = 1.0
    return LUFactors(L, U, "closed_form")


def lu_doolittle(A):
    """Unpivoted Gaussian elimination; an exact zero pivot raises :class:`ZeroPivot`."""
    U = np.array(A, dtype=float)
    n = U.shape[0]
    if U.shape != (n, n):
        raise ValueError("matrix must be square")
    L = np.eye(n)
    for k in range(n - 1):
        piv = U[k, k]
        if piv == 0.0:
            raise ZeroPivot(f"zero pivot at step {k + 1}")
        mult = U[k + 1 :, k] / piv
        L[k + 1 :, k] = mult
        U[k + 1 :, k:] -= np.outer(mult, U[k, k:])
        U[k + 1 :, k] = 0.0
    if n and U[n - 1, n - 1] == 0.0:
        raise ZeroPivot(f"zero pivot at step {n}")
    return LUFactors(L, U, "doolittle")


def lu_dynamics_step(A):
    """One step ``A = LU -> UL`` of the isospectral LU flow."""
    f = lu_doolittle(A)
    return f.U @ f.L


def lu_dynamics_iterate(A, steps):
    """Trajectory ``[A, A1, ..., A_steps]``."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    traj = [np.array(A, dtype=float)]
    for _ in range(steps):
        traj.append(lu_dynamics_step(traj[-1]))
    return traj


def schur_complement(A, k):
    """``A22 - A21 A11^{-1} A12`` for the block split after row/column ``k``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if not 0 <= k <= n:
        raise ValueError("split index out of range")
    if k == 0:
        return A.copy()
    A11, A12, A21, A22 = A[:k, :k], A[:k, k:], A[k:, :k], A[k:, k:]
    try:
        X = np.linalg.solve(A11, A12)
    except np.linalg.LinAlgError as exc:
        raise SingularBlock(f"leading {k}x{k} block is singular") from exc
    if not np.all(np.isfinite(X)):
        raise SingularBlock(f"leading {k}x{k} block is singular")
    return A22 - A21 @ X


def chop_values(A, k, rtol=1e-12):
    """Finite roots of ``det((A - x I)[k:, :n-k])``, sorted by real part, descending.

    For ``k = 0`` these are the eigenvalues.  The polynomial has degree at
    most ``n - 2k``; for lower Hessenberg input its roots are conserved by
    the LU flow.  Computed as the finite generalized eigenvalues of the pencil
    ``(A[k:, :n-k], I[k:, :n-k])``.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if not 0 <= 2 * k <= n:
        raise ValueError("need 0 <= 2k <= n")
    size = n - k
    if size == 0:
        return np.zeros(0)
    a = A[k:, :size]
    b = np.eye(n)[k:, :size]
    alpha, beta = scipy.linalg.eigvals(a, b, homogeneous_eigvals=True)
    scale = np.maximum(np.abs(alpha), np.abs(beta))
    finite = np.abs(beta) > rtol * np.where(scale > 0, scale, 1.0)
    vals = alpha[finite] / beta[finite]
    vals = vals[np.argsort(-vals.real, kind="stable")]
    if np.all(np.abs(vals.imag) <= 1e-9 * np.maximum(1.0, np.abs(vals.real))):
        return vals.real.copy()
    return vals


@dataclass
class LusztigFactors3:
    alpha: float
    beta: float
    gamma: float
    U: np.ndarray

    def factors(self):
        """The three elementary lower factors ``(I + alpha E21), (I + beta E32), (I + gamma E21)``."""
        f1, f2, f3 = np.eye(3), np.eye(3), np.eye(3)
        f1[1, 0] = self.alpha
        f2[2, 1] = self.beta
        f3[1, 0] = self.gamma
        return f1, f2, f3

    def lower(self):
        f1, f2, f3 = self.factors()
        return f1 @ f2 @ f3

    def reconstruct(self):
        return self.lower() @ self.U


def lusztig_factor_3(T, tol=1e-10):
    """Split the ``L`` of a 3x3 TPHT matrix into positive elementary bidiagonal factors."""
    T = np.asarray(T, dtype=float)
    if T.shape != (3, 3):
        raise ValueError("lusztig_factor_3 needs a 3x3 matrix")
    lu = lu_closed_form(T)
    L = lu.L
    beta = L[2, 1]
    if not beta > 0.0:
        raise DegenerateFactorization(f"L32 = {beta} is not positive")
    gamma = L[2, 0] / beta
    alpha = L[1, 0] - gamma
    if not (alpha > 0.0 and gamma > 0.0):
        raise DegenerateFactorization(f"non-positive parameter: alpha={alpha}, gamma={gamma}")
    out = LusztigFactors3(float(alpha), float(beta), float(gamma), lu.U)
    err = np.linalg.norm(out.reconstruct() - T) / max(np.linalg.norm(T), 1.0)
    if err > tol:
        raise DegenerateFactorization(f"reconstruction error {err:.3g}")
    return out
