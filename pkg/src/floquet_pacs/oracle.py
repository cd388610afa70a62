"""
Brute-force truncated Fock-space reference.

Works in the stationary frame, where the integrals of motion are ordinary
ladder operators. Mode 1 is the slowest-varying Kronecker factor.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import TruncationWarning

MAX_DIMENSION = 10**6
TOP_SHELL_TOL = 1e-12


def annihilation_matrix(dim):
    """Dense ``dim x dim`` matrix of ``a`` in the number basis."""
    return np.diag(np.sqrt(np.arange(1, dim)), k=1)


@dataclass(frozen=True)
class TruncatedLadder:
    n_modes: int
    dim: int
    annihilators: tuple
    creators: tuple

    @property
    def size(self):
        return self.dim**self.n_modes

    def vacuum(self):
        v = np.zeros(self.size, dtype=complex)
        v[0] = 1.0
        return v


def _embed(op, k, n_modes, dim):
    left = sp.identity(dim**k, format="csr")
    right = sp.identity(dim ** (n_modes - k - 1), format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


def build_truncated_ladder(n_modes, dim):
    """Sparse ``a_i`` and ``a_i^dag`` on ``(C^dim)^{otimes N}``."""
    if dim < 2:
        raise ValueError("truncation dimension must be at least 2")
    if dim**n_modes > MAX_DIMENSION:
        raise ValueError(f"dim**n_modes = {dim**n_modes} exceeds {MAX_DIMENSION}")
    a = annihilation_matrix(dim)
    ann = tuple(_embed(a, k, n_modes, dim) for k in range(n_modes))
    cre = tuple(op.conj().T.tocsr() for op in ann)
    return TruncatedLadder(n_modes, dim, ann, cre)


@dataclass(frozen=True)
class OracleState:
    vector: np.ndarray
    norm_squared: float
    top_shell_population: float


def _top_shell_population(ladder, vec):
    probs = np.abs(vec.reshape((ladder.dim,) * ladder.n_modes)) ** 2
    total = 0.0
    for k in range(ladder.n_modes):
        total += np.take(probs, ladder.dim - 1, axis=k).sum()
    return float(total)


def oracle_state(ladder, spec):
    """Numerical state ``prod (a_k^dag)^{m_k} D(alpha) |0>``, renormalized.

    The displacement is a Pade matrix exponential of each mode's generator
    ``alpha a^dag - alpha* a``; generators of different modes commute, also
    after truncation, so the product of per-mode exponentials is exact.
    ``norm_squared`` is the squared norm before renormalization.
    """
    if spec.n_modes != ladder.n_modes:
        raise ValueError("state and ladder disagree on the number of modes")
    a = annihilation_matrix(ladder.dim)
    vec = ladder.vacuum()
    for k, alpha in enumerate(spec.alpha):
        if alpha:
            gen = alpha * a.T - np.conj(alpha) * a
            vec = _embed(scipy.linalg.expm(gen), k, ladder.n_modes, ladder.dim) @ vec
    for k, m in enumerate(spec.excitations):
        for _ in range(m):
            vec = ladder.creators[k] @ vec
    norm_sq = float(np.vdot(vec, vec).real)
    vec = vec / math.sqrt(norm_sq)
    top = _top_shell_population(ladder, vec)
    if top > TOP_SHELL_TOL:
        warnings.warn(
            f"top Fock shell holds population {top:.2e}; increase the truncation",
            TruncationWarning,
            stacklevel=2,
        )
    return OracleState(vec, norm_sq, top)


@dataclass(frozen=True)
class OracleMoments:
    """Moments of the ladder operators and of ``q = (a + a^dag)/sqrt 2``, ``p = (a - a^dag)/(i sqrt 2)``."""

    mean_a: np.ndarray
    mean_adag: np.ndarray
    aa: np.ndarray
    adagadag: np.ndarray
    adaga: np.ndarray
    aadag: np.ndarray
    mean_x: np.ndarray
    sigma_x: np.ndarray

    def sigma_iom(self):
        """Symmetrized covariance of ``(a^dag, a)``."""
        n = len(self.mean_a)
        mean = np.concatenate([self.mean_adag, self.mean_a])
        second = np.block([[self.adagadag, self.adaga], [self.aadag, self.aa]])
        sym = 0.5 * (second + second.T)
        return sym - np.outer(mean, mean)


def oracle_moments(ladder, state):
    """All first and second moments by direct contraction ``<psi|O|psi>``."""
    psi = state.vector if isinstance(state, OracleState) else np.asarray(state)
    n = ladder.n_modes
    a_psi = [op @ psi for op in ladder.annihilators]
    ad_psi = [op @ psi for op in ladder.creators]
    mean_a = np.array([np.vdot(psi, v) for v in a_psi])
    mean_adag = np.array([np.vdot(psi, v) for v in ad_psi])
    aa = np.empty((n, n), dtype=complex)
    dd = np.empty((n, n), dtype=complex)
    da = np.empty((n, n), dtype=complex)
    ad = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            aa[i, j] = np.vdot(psi, ladder.annihilators[i] @ a_psi[j])
            dd[i, j] = np.vdot(psi, ladder.creators[i] @ ad_psi[j])
            # <a_i^dag a_j> = (a_i psi)^H (a_j psi)
            da[i, j] = np.vdot(a_psi[i], a_psi[j])
            ad[i, j] = np.vdot(psi, ladder.annihilators[i] @ ad_psi[j])

    # x = T (a^dag, a) with q = (a + a^dag)/sqrt2, p = i (a^dag - a)/sqrt2
    s = 1.0 / math.sqrt(2.0)
    eye = np.eye(n)
    t = np.block([[s * eye, s * eye], [1j * s * eye, -1j * s * eye]])
    mean_iom = np.concatenate([mean_adag, mean_a])
    second = np.block([[dd, da], [ad, aa]])
    sym = 0.5 * (second + second.T) - np.outer(mean_iom, mean_iom)
    mean_x = (t @ mean_iom).real
    sigma_x = (t @ sym @ t.T).real
    return OracleMoments(mean_a, mean_adag, aa, dd, da, ad, mean_x, sigma_x)


def series_expectation(alpha, m, element, n_max=25):
    """Single-mode PACS expectation value by the double number-state series.

    ``element(i, j)`` returns ``<i|O|j>``. The state coefficients are
    ``c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!) sqrt((n+1)...(n+m))`` on
    ``|n + m>``; the bra carries the complex conjugate.
    """
    lag = sum(
        math.comb(m, j) * abs(alpha) ** (2 * j) / math.factorial(j) for j in range(m + 1)
    )
    coef = []
    for n in range(n_max + 1):
        rising = math.sqrt(math.prod(range(n + 1, n + m + 1)))
        coef.append(alpha**n / math.sqrt(math.factorial(n)) * rising)
    total = 0j
    for i in range(n_max + 1):
        for j in range(n_max + 1):
            e = element(i + m, j + m)
            if e:
                total += np.conj(coef[i]) * coef[j] * e
    return total * math.exp(-abs(alpha) ** 2) / (math.factorial(m) * lag)
