"""Large-n limits of eigenvalue averages of Toeplitz truncations.

For a symbol ``phi`` the limit of ``(1/n) sum f(lambda_k(T_n))`` is the
circle average of ``f(phi(e^{i theta}))``.  For ``f(z) = z^p`` this is the
coefficient ``[z^p] (prod_j (1 + a_j z))^p``.
"""

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ImagResidueTooLarge, VerificationFailed
from .matrices import tpht_band
from .spectra import esd_moment
from .symbols import _as_symbol, poly_power_truncated, symbol_eval

DEFAULT_NODES = 4096
IMAG_TOL = 1e-6


@dataclass
class GSLimit:
    value: float
    method: str  # coefficient, quadrature or closed_form
    nodes_used: int = 0
    imag_residue: float = 0.0


def gs_moment_exact(s, p):
    """``lim (1/n) Tr(T_n^p)`` by coefficient extraction."""
    if p < 1:
        raise ValueError("p must be >= 1")
    s = _as_symbol(s)
    c = poly_power_truncated(s.coeffs, p, p)
    return GSLimit(float(c[p]), "coefficient")


def gs_average_quadrature(s, f, nodes=DEFAULT_NODES):
    """Trapezoid rule for the circle average of ``f o phi``.

    ``f`` receives a complex array.  The imaginary part of the average,
    relative to ``max(1, mean |f o phi|)``, is kept in ``imag_residue``; above
    ``1e-6`` the average is rejected.
    """
    if nodes < 64:
        raise ValueError("need at least 64 quadrature nodes")
    s = _as_symbol(s)
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    vals = np.broadcast_to(np.asarray(f(symbol_eval(s, theta)), dtype=complex), theta.shape)
    mean = np.mean(vals)
    scale = max(1.0, float(np.mean(np.abs(vals))))
    resid = abs(mean.imag) / scale
    if resid > IMAG_TOL:
        raise ImagResidueTooLarge(f"imaginary residue {resid:.3g} exceeds {IMAG_TOL}")
    return GSLimit(float(mean.real), "quadrature", int(nodes), float(resid))


def compositions(total, parts) -> Iterator[tuple]:
    """Weak compositions of ``total`` into ``parts`` non-negative integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def composition_sum(m, p):
    """``sum over i_1 + ... + i_m = p of prod_j C(p, i_j)`` by enumeration."""
    return sum(math.prod(math.comb(p, i) for i in c) for c in compositions(p, m))


def binom_mp_p(m, p, verify=None):
    """``C(mp, p)`` as an exact integer.

    With ``verify`` (default: when ``m, p <= 6``) the value is cross-checked
    against :func:`composition_sum`.
    """
    if m < 0 or p < 0:
        raise ValueError("m and p must be non-negative")
    val = math.comb(m * p, p)
    if verify is None:
        verify = m <= 6 and p <= 6
    if verify and composition_sum(m, p) != val:
        raise VerificationFailed(f"composition identity fails at m={m}, p={p}")
    return val


def bessel_I0(x):
    """Modified Bessel function ``I_0`` by its power series."""
    x = float(x)
    if abs(x) > 50:
        raise ValueError("bessel_I0 series is used for |x| <= 50 only")
    q = 0.25 * x * x
    term = total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        new = total + term
        if new == total:
            return total
        total = new


def exp_average_ones(m):
    """Closed form ``sum_k C(mk, k) / k!`` of the exp average for the all-ones symbol."""
    total = 0.0
    k = 0
    while True:
        term = math.comb(m * k, k) / math.factorial(k)
        new = total + term
        if k > 2 * m * math.e and new == total:
            return GSLimit(total, "closed_form")
        total = new
        k += 1


def tridiagonal_limit_cdf(s):
    """CDF of the limiting eigenvalue law for a two-root symbol.

    ``T_n`` is tridiagonal with diagonal ``x1`` and off-diagonal product
    ``x2``, so it is similar to a symmetric Toeplitz matrix and its
    eigenvalues are ``x1 + 2 sqrt(x2) cos(k pi / (n + 1))``: an arcsine law
    on ``[x1 - 2 sqrt(x2), x1 + 2 sqrt(x2)]``.
    """
    s = _as_symbol(s)
    if s.m != 2:
        raise ValueError("tridiagonal_limit_cdf needs a symbol with exactly two roots")
    c = float(s.coeffs[1])
    r = 2.0 * math.sqrt(float(s.coeffs[2]))

    def cdf(t):
        u = np.clip((np.asarray(t, dtype=float) - c) / r, -1.0, 1.0)
        return 1.0 - np.arccos(u) / np.pi

    return cdf


def finite_moment_table(s, p, ns=(100, 1000, 10000)):
    """``(1/n) Tr(T_n^p)`` for each ``n`` in ``ns`` (banded, no dense matrix)."""
    return [esd_moment(tpht_band(s, n), p) for n in ns]
