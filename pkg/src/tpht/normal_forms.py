"""Lower-unipotent normal forms of unit-superdiagonal Hessenberg matrices.

A lower Hessenberg ``X`` with ones on the superdiagonal is conjugate, by a
unique lower unipotent ``L1``, to the companion matrix of its characteristic
polynomial.  Doing the same for ``eps_Lambda = diag(Lambda) + shift`` and
diagonalising ``eps_Lambda`` by an upper triangular Vandermonde-type ``U``
gives the eigenvector matrix of ``X`` as ``L^{-1} U`` with ``L = L2 L1^{-1}``.
Every result is checked against the identity it is supposed to satisfy.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import RepeatedEigenvalue, SpectrumMismatch, VerificationFailed
from .matrices import companion_matrix, epsilon_lambda
from .symbols import elementary_symmetric

CONJ_TOL = 1e-8
DIAG_TOL = 1e-9
EIG_TOL = 1e-7
SPEC_TOL = 1e-6


def _intertwine_residual(A, S, B):
    # relative residual of A S = S B
    num = np.linalg.norm(A @ S - S @ B)
    den = np.linalg.norm(A) * np.linalg.norm(S) + np.linalg.norm(S) * np.linalg.norm(B)
    return float(num / den) if den > 0 else float(num)


def leading_charpolys(X):
    """Ascending coefficients of ``det(x I_k - X[:k, :k])`` for ``k = 0..n`` (row ``k``).

    Expanding along the last row of a unit-superdiagonal lower Hessenberg
    block gives ``p_k = (x - X_kk) p_{k-1} - sum_{i<k} X_ki p_{i-1}``.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    P = np.zeros((n + 1, n + 1))
    P[0, 0] = 1.0
    for k in range(1, n + 1):
        P[k, 1:] = P[k - 1, :-1]
        P[k] -= X[k - 1, k - 1] * P[k - 1]
        for i in range(1, k):
            P[k] -= X[k - 1, i - 1] * P[i - 1]
    return P


def _check_shape(X):
    n = X.shape[0]
    if X.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > 2 and np.any(np.triu(X, 2) != 0.0):
        raise ValueError("matrix is not lower Hessenberg")
    if n > 1 and np.any(np.diag(X, 1) != 1.0):
        raise ValueError("superdiagonal must be all ones")


def to_companion_L(X, tol=CONJ_TOL):
    """Lower unipotent ``L1`` with ``L1^{-1} X L1`` equal to the companion matrix of ``X``.

    Row ``k + 1`` of ``L1`` holds the characteristic coefficients of the
    leading ``k x k`` block.
    """
    X = np.asarray(X, dtype=float)
    _check_shape(X)
    n = X.shape[0]
    P = leading_charpolys(X)
    L1 = P[:n, :n].copy()
    C = companion_matrix(P[n, :n])
    res = _intertwine_residual(X, L1, C)
    if not res <= tol:
        raise VerificationFailed(f"companion conjugation residual {res:.3g}")
    return L1


def l2_closed_form(lam):
    """``(L2)_ij = (-1)^(i+j) e_{i-j}(lambda_1, ..., lambda_{i-1})`` for ``i > j`` (1-based)."""
    lam = np.asarray(lam, dtype=float).ravel()
    n = lam.size
    L2 = np.eye(n)
    for i in range(2, n + 1):
        e = elementary_symmetric(lam[: i - 1])
        for j in range(1, i):
            L2[i - 1, j - 1] = (-1) ** (i + j) * e[i - j]
    return L2


def companion_to_epsilon_L(lam, tol=CONJ_TOL):
    """Lower unipotent ``L2`` with ``L2^{-1} eps_Lambda L2 = c_Lambda``."""
    return to_companion_L(epsilon_lambda(lam), tol)


def _check_distinct(lam):
    lam = np.asarray(lam, dtype=float)
    if lam.size < 2:
        return
    gaps = np.abs(lam[:, None] - lam[None, :])[np.triu_indices(lam.size, 1)]
    if gaps.min() <= 1e-10 * np.max(np.abs(lam)):
        raise RepeatedEigenvalue(f"eigenvalues not distinct (min gap {gaps.min():.3g})")


def epsilon_diagonalizer(lam, tol=DIAG_TOL):
    """Upper triangular ``U`` with ``eps_Lambda U = U diag(Lambda)``; ``u_ij = prod_{k<i} (lambda_j - lambda_k)``."""
    lam = np.asarray(lam, dtype=float).ravel()
    _check_distinct(lam)
    n = lam.size
    U = np.zeros((n, n))
    for j in range(n):
        U[0, j] = 1.0
        for i in range(1, n):
            U[i, j] = U[i - 1, j] * (lam[j] - lam[i - 1])
    res = _intertwine_residual(epsilon_lambda(lam), U, np.diag(lam))
    if not res <= tol:
        raise VerificationFailed(f"diagonalizer residual {res:.3g}")
    return U


@dataclass
class NormalFormBundle:
    L1: np.ndarray
    L2: np.ndarray
    L: np.ndarray
    U: np.ndarray
    lam: np.ndarray
    L_inv: np.ndarray
    residuals: dict = field(default_factory=dict)

    def eigenvectors(self):
        return self.L_inv @ self.U


def normal_form_bundle(X, lam=None):
    """All factors for ``X``; ``lam`` defaults to the computed eigenvalues, descending."""
    X = np.asarray(X, dtype=float)
    _check_shape(X)
    if lam is None:
        from .spectra import eigen_hessenberg

        lam = eigen_hessenberg(X).eigenvalues
    lam = np.asarray(lam, dtype=float).ravel()
    n = X.shape[0]
    if lam.size != n:
        raise SpectrumMismatch("need one eigenvalue per row")
    _check_distinct(lam)

    P = leading_charpolys(X)
    want = elementary_symmetric(-lam)[::-1]  # ascending coefficients of prod (x - lambda)
    scale = np.maximum(np.abs(want), 1.0)
    if np.max(np.abs(P[n] - want) / scale) > SPEC_TOL:
        raise SpectrumMismatch("lambda does not match the characteristic polynomial of X")

    L1 = to_companion_L(X)
    L2 = companion_to_epsilon_L(lam)
    U = epsilon_diagonalizer(lam)
    L1_inv = scipy.linalg.solve_triangular(L1, np.eye(n), lower=True, unit_diagonal=True)
    L = L2 @ L1_inv
    L_inv = scipy.linalg.solve_triangular(L, np.eye(n), lower=True, unit_diagonal=True)
    V = L_inv @ U
    res = {
        "L1": _intertwine_residual(X, L1, companion_matrix(P[n, :n])),
        "L2": _intertwine_residual(epsilon_lambda(lam), L2, companion_matrix(want[:n])),
        "U": _intertwine_residual(epsilon_lambda(lam), U, np.diag(lam)),
        "eig": _intertwine_residual(X, V, np.diag(lam)),
    }
    if not res["eig"] <= EIG_TOL:
        raise VerificationFailed(f"eigenfunction residual {res['eig']:.3g}")
    return NormalFormBundle(L1, L2, L, U, lam, L_inv, res)


def eigenfunction_factorized(X, lam=None):
    """``(L^{-1}, U)`` whose product has the eigenvectors of ``X`` as columns, in ``lam`` order."""
    b = normal_form_bundle(X, lam)
    return b.L_inv, b.U
