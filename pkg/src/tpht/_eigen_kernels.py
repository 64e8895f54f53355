"""Dense eigenvalue kernels for small and medium Hessenberg problems.

All three kernels work on 1-based copies (row/column 0 unused), which keeps
the index arithmetic of the classical formulations intact.
"""

import math

import numpy as np

from ._jit import njit

RADIX = 2.0


@njit
def balance(a):
    # in place a <- D^-1 a D with D a power-of-two diagonal equalising row and
    # column norms; keeps any zero pattern.  Returns D (1-based).
    n = a.shape[0] - 1
    d = np.ones(n + 1)
    sqrdx = RADIX * RADIX
    done = False
    while not done:
        done = True
        for i in range(1, n + 1):
            r = 0.0
            c = 0.0
            for j in range(1, n + 1):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c != 0.0 and r != 0.0:
                g = r / RADIX
                f = 1.0
                s = c + r
                while c < g:
                    f *= RADIX
                    c *= sqrdx
                g = r * RADIX
                while c > g:
                    f /= RADIX
                    c /= sqrdx
                if (c + r) / f < 0.95 * s:
                    done = False
                    g = 1.0 / f
                    d[i] *= f
                    for j in range(1, n + 1):
                        a[i, j] *= g
                    for j in range(1, n + 1):
                        a[j, i] *= f
    return d


@njit
def hessenberg_reduce(a):
    """Householder similarity ``a <- Q^T a Q`` to upper Hessenberg form (1-based, in place)."""
    n = a.shape[0] - 1
    v = np.zeros(n + 1)
    for k in range(1, n - 1):
        scale = 0.0
        for i in range(k + 1, n + 1):
            scale += abs(a[i, k])
        if scale == 0.0:
            continue
        h = 0.0
        for i in range(k + 1, n + 1):
            v[i] = a[i, k] / scale
            h += v[i] * v[i]
        g = math.sqrt(h)
        if v[k + 1] > 0.0:
            g = -g
        h -= v[k + 1] * g
        v[k + 1] -= g
        # P = I - v v^T / h maps the column onto g e_{k+1}
        for j in range(k + 1, n + 1):
            f = 0.0
            for i in range(k + 1, n + 1):
                f += v[i] * a[i, j]
            f /= h
            for i in range(k + 1, n + 1):
                a[i, j] -= f * v[i]
        for i in range(1, n + 1):
            f = 0.0
            for j in range(k + 1, n + 1):
                f += v[j] * a[i, j]
            f /= h
            for j in range(k + 1, n + 1):
                a[i, j] -= f * v[j]
        a[k + 1, k] = scale * g
        for i in range(k + 2, n + 1):
            a[i, k] = 0.0


@njit
def hqr(a, deflate, max_total):
    """Francis double-shift QR on an upper Hessenberg ``a`` (1-based, destroyed).

    Returns ``(wr, wi, status)``; ``status`` is 0 on success, 1 when the total
    number of sweeps exceeds ``max_total``.  Exceptional shifts are taken after
    every 10 sweeps without a deflation.
    """
    n = a.shape[0] - 1
    wr = np.zeros(n + 1)
    wi = np.zeros(n + 1)
    anorm = 0.0
    for i in range(1, n + 1):
        for j in range(max(i - 1, 1), n + 1):
            anorm += abs(a[i, j])
    nn = n
    t = 0.0
    total = 0
    p = q = r = s = w = x = y = z = 0.0
    while nn >= 1:
        its = 0
        while True:
            l = 1
            for ll in range(nn, 1, -1):
                s = abs(a[ll - 1, ll - 1]) + abs(a[ll, ll])
                if s == 0.0:
                    s = anorm
                if abs(a[ll, ll - 1]) <= deflate * s:
                    a[ll, ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
            else:
                y = a[nn - 1, nn - 1]
                w = a[nn, nn - 1] * a[nn - 1, nn]
                if l == nn - 1:
                    p = 0.5 * (y - x)
                    q = p * p + w
                    z = math.sqrt(abs(q))
                    x += t
                    if q >= 0.0:
                        z = p + (z if p >= 0.0 else -z)
                        wr[nn - 1] = x + z
                        wr[nn] = x + z
                        if z != 0.0:
                            wr[nn] = x - w / z
                        wi[nn - 1] = 0.0
                        wi[nn] = 0.0
                    else:
                        wr[nn - 1] = x + p
                        wr[nn] = x + p
                        wi[nn - 1] = -z
                        wi[nn] = z
                    nn -= 2
                else:
                    if total >= max_total:
                        return wr[1:], wi[1:], 1
                    if its > 0 and its % 10 == 0:
                        t += x
                        for i in range(1, nn + 1):
                            a[i, i] -= x
                        s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                        x = 0.75 * s
                        y = x
                        w = -0.4375 * s * s
                    its += 1
                    total += 1
                    m = nn - 2
                    while m >= l:
                        z = a[m, m]
                        r = x - z
                        s = y - z
                        p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                        q = a[m + 1, m + 1] - z - r - s
                        r = a[m + 2, m + 1]
                        s = abs(p) + abs(q) + abs(r)
                        p /= s
                        q /= s
                        r /= s
                        if m == l:
                            break
                        u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                        v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                        if u + v == v:
                            break
                        m -= 1
                    for i in range(m + 2, nn + 1):
                        a[i, i - 2] = 0.0
                        if i != m + 2:
                            a[i, i - 3] = 0.0
                    for k in range(m, nn):
                        if k != m:
                            p = a[k, k - 1]
                            q = a[k + 1, k - 1]
                            r = 0.0
                            if k != nn - 1:
                                r = a[k + 2, k - 1]
                            x = abs(p) + abs(q) + abs(r)
                            if x != 0.0:
                                p /= x
                                q /= x
                                r /= x
                        s = math.sqrt(p * p + q * q + r * r)
                        if p < 0.0:
                            s = -s
                        if s != 0.0:
                            if k == m:
                                if l != m:
                                    a[k, k - 1] = -a[k, k - 1]
                            else:
                                a[k, k - 1] = -s * x
                            p += s
                            x = p / s
                            y = q / s
                            z = r / s
                            q /= p
                            r /= p
                            for j in range(k, nn + 1):
                                p = a[k, j] + q * a[k + 1, j]
                                if k != nn - 1:
                                    p += r * a[k + 2, j]
                                    a[k + 2, j] -= p * z
                                a[k + 1, j] -= p * y
                                a[k, j] -= p * x
                            mmin = nn if nn < k + 3 else k + 3
                            for i in range(l, mmin + 1):
                                p = x * a[i, k] + y * a[i, k + 1]
                                if k != nn - 1:
                                    p += z * a[i, k + 2]
                                    a[i, k + 2] -= p * r
                                a[i, k + 1] -= p * q
                                a[i, k] -= p
            if not l < nn - 1:
                break
    return wr[1:], wi[1:], 0


@njit
def tqli(d, e, max_iter):
    """Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.

    ``d[1..n]`` is the diagonal, ``e[2..n]`` the off-diagonal (1-based, both
    destroyed).  Eigenvalues are left in ``d[1..n]``.  Returns 0 on success,
    1 when one eigenvalue needs more than ``max_iter`` sweeps.
    """
    n = d.shape[0] - 1
    for i in range(2, n + 1):
        e[i - 1] = e[i]
    e[n] = 0.0
    for l in range(1, n + 1):
        it = 0
        while True:
            m = n
            for mm in range(l, n):
                dd = abs(d[mm]) + abs(d[mm + 1])
                if abs(e[mm]) + dd == dd:
                    m = mm
                    break
            if m == l:
                break
            if it == max_iter:
                return 1
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            early = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    early = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if early:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def one_based(A):
    n = A.shape[0]
    out = np.zeros((n + 1, n + 1))
    out[1:, 1:] = A
    return out


@njit
def upper_solve_scaled(U, y):
    """Direction of ``x`` with ``triu(U) x = y``, rescaling on the way up so nothing overflows."""
    n = y.size
    x = y.copy()
    for i in range(n - 1, -1, -1):
        s = x[i]
        for j in range(i + 1, n):
            s -= U[i, j] * x[j]
        d = U[i, i]
        if abs(s) > 1e290 * abs(d):
            f = 1e-150
            for j in range(n):
                x[j] *= f
            s *= f
        x[i] = s / d
        big = abs(x[i])
        if big > 1e150:
            f = 1.0 / big
            for j in range(n):
                x[j] *= f
    return x
