"""Factored Hessenberg symbols ``z^-1 * prod(1 + a_l z)`` and polynomial helpers."""

from dataclasses import dataclass

import numpy as np

from ._jit import njit, select


def elementary_symmetric(roots):
    """Elementary symmetric polynomials ``(e_0, ..., e_m)`` of ``roots``.

    Built by multiplying in one linear factor ``(1 + a z)`` at a time, so the
    result is the coefficient vector of ``prod(1 + a_l z)``.
    """
    roots = np.asarray(roots, dtype=float).ravel()
    coeffs = np.zeros(roots.size + 1)
    coeffs[0] = 1.0
    for k, a in enumerate(roots, start=1):
        coeffs[1 : k + 1] += a * coeffs[:k].copy()
    return coeffs


@dataclass(frozen=True, eq=False)
class Symbol:
    """Symbol with non-negative roots ``a_l``; ``coeffs[k] = e_k(roots)``."""

    roots: np.ndarray
    coeffs: np.ndarray

    @classmethod
    def from_roots(cls, roots):
        r = np.array(roots, dtype=float).ravel()
        if not np.all(np.isfinite(r)):
            raise ValueError("symbol roots must be finite")
        r.setflags(write=False)
        c = elementary_symmetric(r)
        c.setflags(write=False)
        return cls(r, c)

    @classmethod
    def ones(cls, m):
        return cls.from_roots(np.ones(m))

    @property
    def m(self):
        return self.roots.size

    def __call__(self, theta):
        return symbol_eval(self, theta)

    def __repr__(self):
        return f"Symbol(roots={self.roots.tolist()})"


def _as_symbol(s):
    return s if isinstance(s, Symbol) else Symbol.from_roots(s)


def symbol_eval(s, theta):
    """``phi(e^{i theta})`` evaluated in factored form (scalar or array theta)."""
    s = _as_symbol(s)
    th = np.asarray(theta, dtype=float)
    z = np.exp(1j * th)
    out = np.ones_like(z)
    for a in s.roots:
        out = out * (1.0 + a * z)
    out = out / z
    return out[()] if out.ndim == 0 else out


@njit
def _mul_truncated_loops(a, b, cap):
    n = min(a.size + b.size - 1, cap + 1)
    out = np.zeros(n)
    for i in range(min(a.size, n)):
        ai = a[i]
        if ai == 0.0:
            continue
        for j in range(min(b.size, n - i)):
            out[i + j] += ai * b[j]
    return out


def _mul_truncated_numpy(a, b, cap):
    return np.convolve(a, b)[: cap + 1].copy()


mul_truncated = select(_mul_truncated_loops, _mul_truncated_numpy)


def poly_power_truncated(coeffs, p, degree_cap):
    """Coefficients of ``(sum_k c_k z^k)^p`` modulo ``z^(degree_cap+1)``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if degree_cap < 0:
        raise ValueError("degree_cap must be non-negative")
    c = np.asarray(coeffs, dtype=float).ravel()[: degree_cap + 1].copy()
    out = c
    for _ in range(p - 1):
        out = mul_truncated(out, c, degree_cap)
    if out.size < degree_cap + 1:
        out = np.concatenate([out, np.zeros(degree_cap + 1 - out.size)])
    return out


@njit
def _rhs_batch_loops(roots, p):
    # [z^p] prod_j (1 + a_j z)^p for each row of `roots`
    nsamp, m = roots.shape
    out = np.empty(nsamp)
    base = np.empty(p + 1)
    acc = np.empty(p + 1)
    for s in range(nsamp):
        base[:] = 0.0
        base[0] = 1.0
        for j in range(m):
            a = roots[s, j]
            for k in range(p, 0, -1):
                base[k] += a * base[k - 1]
        acc[:] = base
        for _ in range(p - 1):
            for k in range(p, -1, -1):
                t = 0.0
                for i in range(k + 1):
                    t += acc[i] * base[k - i]
                acc[k] = t
        out[s] = acc[p]
    return out


def _rhs_batch_numpy(roots, p):
    roots = np.asarray(roots, dtype=float)
    nsamp, m = roots.shape
    base = np.zeros((nsamp, p + 1))
    base[:, 0] = 1.0
    for j in range(m):
        a = roots[:, j : j + 1]
        base[:, 1:] = base[:, 1:] + a * base[:, :-1]
    acc = base.copy()
    for _ in range(p - 1):
        new = np.zeros_like(acc)
        for i in range(p + 1):
            new[:, i:] += acc[:, i : i + 1] * base[:, : p + 1 - i]
        acc = new
    return acc[:, p].copy()


# [z^p] prod_j (1 + a_j z)^p for each row of a (samples, m) array
rhs_coefficient_batch = select(_rhs_batch_loops, _rhs_batch_numpy)
