"""
Special functions used by the photon-added state formulas.

Associated Laguerre polynomials, Pochhammer symbols, the confluent
hypergeometric series and multidimensional Hermite polynomials of a
(complex) symmetric matrix argument.
"""

import itertools
import math

import numpy as np

from .errors import NonConvergedError

MAX_ORDER = 64
"""Largest polynomial order accepted by :func:`laguerre` and :func:`hermite_multidim`."""

_F11_TOL = 1e-16
_F11_MAX_TERMS = 10**6


def _check_order(m, name="m"):
    if int(m) != m or m < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {m!r}")
    if m > MAX_ORDER:
        raise ValueError(f"{name}={m} exceeds the supported maximum order {MAX_ORDER}")
    return int(m)


def laguerre(m, a, x):
    r"""Associated Laguerre polynomial :math:`L_m^{a}(x)`.

    Evaluated with the upward three-term recurrence

    .. math:: (k+1) L_{k+1}^a = (2k + a + 1 - x) L_k^a - (k + a) L_{k-1}^a.

    Parameters
    ----------
    m : int
        Polynomial order, ``0 <= m <= MAX_ORDER``.
    a : int
        Non-negative integer superscript; ``a = 0`` gives the ordinary
        Laguerre polynomial.
    x : float or array_like
        Evaluation point(s).

    Returns
    -------
    float or ndarray
        Same shape as ``x``.
    """
    m = _check_order(m)
    if int(a) != a or a < 0:
        raise ValueError(f"a must be a non-negative integer, got {a!r}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if m == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - x
    for k in range(1, m):
        prev, cur = cur, ((2 * k + a + 1 - x) * cur - (k + a) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def pochhammer(a, n):
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)`` with ``(a)_0 = 1``.

    Integer ``a`` is multiplied exactly; the result is returned as ``int``
    while it stays within ``2**53`` and as ``float`` beyond. Raises
    ``OverflowError`` if the float result is not finite.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    if isinstance(a, (int, np.integer)):
        value = math.prod(range(int(a), int(a) + n))
        if abs(value) <= 2**53:
            return value
        try:
            return float(value)
        except OverflowError:
            raise OverflowError(f"({a})_{n} exceeds the float range") from None
    value = 1.0
    for k in range(n):
        value *= a + k
    if not math.isfinite(value):
        raise OverflowError(f"({a})_{n} exceeds the float range")
    return value


def confluent_1f1(a, c, x):
    """Kummer's series ``1F1(a; c; x) = sum_k (a)_k / (c)_k x^k / k!``.

    Terminates exactly for ``a`` a non-positive integer. Otherwise terms
    are summed until one drops below ``1e-16`` relative to the partial
    sum (after the terms have started to decrease).
    """
    if c <= 0 and float(c).is_integer():
        raise ValueError(f"c must not be a non-positive integer, got {c!r}")
    total = 1.0
    term = 1.0
    for k in range(_F11_MAX_TERMS):
        term *= (a + k) * x / ((c + k) * (k + 1))
        total += term
        if term == 0.0:
            return total
        if k + 1 > abs(x) and abs(term) <= _F11_TOL * abs(total):
            return total
    raise NonConvergedError(
        f"1F1({a}, {c}; {x}) did not converge in {_F11_MAX_TERMS} terms"
    )


def hermite_multidim(M, m, z):
    r"""Multidimensional Hermite polynomial :math:`H^M_{\mathbf m}(z)`.

    Defined by :math:`H^M_m(z) = (-1)^{|m|} e^{z^T M z/2}\,
    \partial^{m} e^{-z^T M z/2}` and evaluated through

    .. math:: H_{m+e_k} = (Mz)_k H_m - \sum_l M_{kl} m_l H_{m-e_l},

    memoized over the lattice of multi-indices below ``m``.

    Parameters
    ----------
    M : (N, N) array_like
        Complex symmetric matrix.
    m : sequence of int
        Multi-index of length N.
    z : (..., N) array_like
        Evaluation point(s); leading dimensions are broadcast.

    Returns
    -------
    complex or ndarray of complex
    """
    M = np.asarray(M, dtype=complex)
    m = tuple(_check_order(k) for k in m)
    n = len(m)
    if M.shape != (n, n):
        raise ValueError(f"M has shape {M.shape}, expected {(n, n)}")
    scale = max(np.abs(M).max(), 1.0)
    if np.abs(M - M.T).max() > 1e-12 * scale:
        raise ValueError("M must be symmetric")
    z = np.asarray(z, dtype=complex)
    if z.shape[-1:] != (n,):
        raise ValueError(f"z must have trailing dimension {n}")

    Mz = z @ M.T
    one = np.ones(z.shape[:-1], dtype=complex)
    table = {(0,) * n: one}
    # lattice ordered by total degree so every predecessor exists
    lattice = sorted(itertools.product(*(range(k + 1) for k in m)), key=sum)
    for idx in lattice[1:]:
        k = next(i for i, v in enumerate(idx) if v)
        base = list(idx)
        base[k] -= 1
        value = Mz[..., k] * table[tuple(base)]
        for l in range(n):
            if base[l]:
                lower = list(base)
                lower[l] -= 1
                value = value - M[k, l] * base[l] * table[tuple(lower)]
        table[idx] = value
    out = table[m]
    return out if out.ndim else complex(out)


def hermite_pair_to_laguerre_check(m, z1, z2):
    """Both sides of ``H_{m,m}^{sigma_x}(z1, z2) = (-1)^m m! L_m(z1 z2)``.

    ``sigma_x`` is the off-diagonal Pauli matrix. The Laguerre side is
    evaluated by the explicit finite sum so it accepts complex products.
    """
    m = _check_order(m)
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]])
    lhs = hermite_multidim(sigma_x, (m, m), np.array([z1, z2], dtype=complex))
    x = complex(z1) * complex(z2)
    lag = sum((-1) ** j * math.comb(m, j) * x**j / math.factorial(j) for j in range(m + 1))
    rhs = (-1) ** m * math.factorial(m) * lag
    return complex(lhs), complex(rhs)
