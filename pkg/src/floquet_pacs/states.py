"""
Moments and covariance matrices of Fock, coherent and photon-added coherent states.

States are labelled in the basis of the integrals of motion
``I = (A^dag_1..A^dag_N, A_1..A_N)``. Their covariance ``sigma(I)`` is
time independent; the quadrature covariance follows from

    sigma(x) = F(t) e^{iWt} sigma(I) e^{iWt} F(t)^T.

Photon-added coherent states (PACS) ``prod_k (A_k^dag)^{m_k} |alpha>`` are
normalized by ``prod_k m_k! L_{m_k}(-|alpha_k|^2)``. ``m = 0`` gives the
coherent states and ``alpha = 0`` the Fock states.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ImaginaryResidueError
from .floquet import flt_at, floquet_solutions
from .special import MAX_ORDER, laguerre

IMAGINARY_TOL = 1e-8
INTELLIGENCE_TOL = 1e-9


class Family(enum.Enum):
    FOCK = "fock"
    COHERENT = "coherent"
    PACS = "pacs"


class Frame(enum.Enum):
    QUADRATURE = "quadrature"
    INTEGRALS_OF_MOTION = "integrals_of_motion"


@dataclass(frozen=True)
class StateSpec:
    """State family with displacement ``alpha`` and excitation multi-index."""

    family: Family
    alpha: tuple
    excitations: tuple

    def __post_init__(self):
        family = Family(self.family)
        alpha = tuple(complex(a) for a in np.atleast_1d(self.alpha))
        exc = tuple(int(m) for m in np.atleast_1d(self.excitations))
        if len(alpha) != len(exc):
            raise ValueError("alpha and excitations must have the same length")
        if any(m < 0 or m > MAX_ORDER for m in exc):
            raise ValueError(f"excitations must lie in [0, {MAX_ORDER}]")
        if family is Family.FOCK and any(alpha):
            raise ValueError("Fock states have zero displacement")
        if family is Family.COHERENT and any(exc):
            raise ValueError("coherent states carry no added excitations")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "excitations", exc)

    @classmethod
    def fock(cls, n):
        n = tuple(np.atleast_1d(n))
        return cls(Family.FOCK, (0j,) * len(n), n)

    @classmethod
    def coherent(cls, alpha):
        alpha = tuple(np.atleast_1d(alpha))
        return cls(Family.COHERENT, alpha, (0,) * len(alpha))

    @classmethod
    def pacs(cls, alpha, m):
        return cls(Family.PACS, tuple(np.atleast_1d(alpha)), tuple(np.atleast_1d(m)))

    @property
    def n_modes(self):
        return len(self.alpha)

    @property
    def alpha_array(self):
        return np.array(self.alpha, dtype=complex)

    @property
    def m_array(self):
        return np.array(self.excitations, dtype=int)

    def to_dict(self):
        return {
            "family": self.family.value,
            "alpha": [[a.real, a.imag] for a in self.alpha],
            "excitations": list(self.excitations),
        }


@dataclass(frozen=True)
class CovarianceReport:
    """Covariance matrix with its Robertson diagnostics.

    In the integrals-of-motion frame ``determinant`` is the modulus of the
    (complex-frame) determinant, which equals the quadrature determinant.
    """

    sigma: np.ndarray
    determinant: float
    robertson_bound: float
    gap: float
    frame: Frame
    n_modes: int
    t: float = None

    @property
    def intelligent(self):
        return abs(self.gap) <= INTELLIGENCE_TOL

    def to_dict(self):
        sigma = self.sigma
        if np.iscomplexobj(sigma):
            matrix = np.stack([sigma.real, sigma.imag], axis=-1).tolist()
        else:
            matrix = sigma.tolist()
        return {
            "frame": self.frame.value,
            "n_modes": self.n_modes,
            "t": self.t,
            "matrix": matrix,
            "determinant": self.determinant,
            "robertson_bound": self.robertson_bound,
            "gap": self.gap,
            "intelligent": self.intelligent,
        }


def robertson_bound(n_modes):
    return 2.0 ** (-2 * n_modes)


def _laguerre_ratios(spec):
    """Per mode ``(L^1_m / L_m, L^2_m / L_m)`` at ``-|alpha|^2``."""
    x = -np.abs(spec.alpha_array) ** 2
    r1, r2 = [], []
    for m, xk in zip(spec.excitations, x):
        base = laguerre(m, 0, xk)
        r1.append(laguerre(m, 1, xk) / base)
        r2.append(laguerre(m, 2, xk) / base)
    return np.array(r1), np.array(r2)


def p_ratio(n, m, x):
    """``P^n_m(x) = L^n_m(x)/L_m(x) - (L^1_m(x)/L_m(x))^2``."""
    base = laguerre(m, 0, x)
    return laguerre(m, n, x) / base - (laguerre(m, 1, x) / base) ** 2


@dataclass(frozen=True)
class PacsMoments:
    """First and second moments of ``A``, ``A^dag`` in a PACS (diagonal parts).

    Cross terms ``i != j`` factorize into products of first moments.
    """

    mean_A: np.ndarray
    mean_Adag: np.ndarray
    AA_diag: np.ndarray
    AdagAdag_diag: np.ndarray
    AdagA_diag: np.ndarray

    def AA(self):
        out = np.outer(self.mean_A, self.mean_A)
        np.fill_diagonal(out, self.AA_diag)
        return out

    def AdagAdag(self):
        out = np.outer(self.mean_Adag, self.mean_Adag)
        np.fill_diagonal(out, self.AdagAdag_diag)
        return out

    def AdagA(self):
        """``<A_i^dag A_j>``."""
        out = np.outer(self.mean_Adag, self.mean_A)
        np.fill_diagonal(out, self.AdagA_diag)
        return out

    def AAdag(self):
        """``<A_i A_j^dag> = delta_ij + <A_j^dag A_i>``."""
        return np.eye(len(self.mean_A)) + self.AdagA().T


def pacs_moments(spec):
    """Closed-form moments of the integrals of motion; valid for every family."""
    alpha = spec.alpha_array
    r1, r2 = _laguerre_ratios(spec)
    mean_a = alpha * r1
    return PacsMoments(
        mean_A=mean_a,
        mean_Adag=mean_a.conj(),
        AA_diag=alpha**2 * r2,
        AdagAdag_diag=alpha.conj() ** 2 * r2,
        AdagA_diag=np.abs(alpha) ** 2 * r1 + spec.m_array,
    )


def _mode_variances(spec):
    """Per mode ``(sigma(A,A), sigma(A^dag,A))``."""
    alpha = spec.alpha_array
    x = -np.abs(alpha) ** 2
    p1 = np.array([p_ratio(1, m, xk) for m, xk in zip(spec.excitations, x)])
    p2 = np.array([p_ratio(2, m, xk) for m, xk in zip(spec.excitations, x)])
    return alpha**2 * p2, np.abs(alpha) ** 2 * p1 + spec.m_array + 0.5


def covariance_iom(spec):
    """Covariance of ``I = (A^dag, A)`` as a :class:`CovarianceReport`."""
    n = spec.n_modes
    if spec.family is Family.FOCK:
        aa = np.zeros(n, dtype=complex)
        cross = spec.m_array + 0.5
    elif spec.family is Family.COHERENT:
        aa = np.zeros(n, dtype=complex)
        cross = np.full(n, 0.5)
    else:
        aa, cross = _mode_variances(spec)
    sigma = np.block(
        [[np.diag(aa.conj()), np.diag(cross).astype(complex)],
         [np.diag(cross).astype(complex), np.diag(aa)]]
    )
    det = float(abs(np.prod(np.abs(aa) ** 2 - cross**2)))
    bound = robertson_bound(n)
    return CovarianceReport(sigma, det, bound, det - bound, Frame.INTEGRALS_OF_MOTION, n)


def _real(a, what):
    residue = np.abs(np.imag(a)).max() if np.size(a) else 0.0
    if residue > IMAGINARY_TOL:
        raise ImaginaryResidueError(f"{what}: imaginary residue {residue:.3e}")
    return np.real(a).copy()


def transform_covariance(decomp, t, sigma_iom):
    """``F(t) e^{iWt} sigma_iom e^{iWt} F(t)^T`` (real part, after a residue check)."""
    if isinstance(sigma_iom, CovarianceReport):
        sigma_iom = sigma_iom.sigma
    f = flt_at(decomp, t)
    e = np.exp(1j * decomp.W * t)
    g = f * e
    out = g @ sigma_iom @ g.T
    return _real(out, "transformed covariance")


def robertson_report(sigma, n_modes, t=None):
    """Determinant, the bound ``2^{-2N}`` and their gap for a quadrature covariance."""
    sigma = np.asarray(sigma, dtype=float)
    scale = max(np.abs(sigma).max(), 1.0)
    if sigma.shape != (2 * n_modes, 2 * n_modes):
        raise ValueError(f"expected a {2 * n_modes}x{2 * n_modes} matrix")
    if np.abs(sigma - sigma.T).max() > 1e-10 * scale:
        raise ValueError("covariance matrix is not symmetric")
    det = float(np.linalg.det(sigma))
    bound = robertson_bound(n_modes)
    return CovarianceReport(sigma, det, bound, det - bound, Frame.QUADRATURE, n_modes, t)


def covariance_quadrature(decomp, t, spec):
    """Closed-form quadrature covariance ``sigma(x)`` at time ``t``.

    Fock: ``F F^dag / 2 + F diag(n, n) F^dag``; coherent: ``F F^dag / 2``;
    PACS: squared classical Floquet modes weighted by ``P^2`` plus the
    paired-column term weighted by ``|alpha_k|^2 P^1 + m_k + 1/2``.
    """
    n = spec.n_modes
    f = flt_at(decomp, t)
    if spec.family is Family.COHERENT:
        sigma = 0.5 * f @ f.conj().T
    elif spec.family is Family.FOCK:
        nn = np.concatenate([spec.m_array, spec.m_array])
        sigma = 0.5 * f @ f.conj().T + (f * nn) @ f.conj().T
    else:
        alpha = spec.alpha_array
        x = -np.abs(alpha) ** 2
        p1 = np.array([p_ratio(1, m, xk) for m, xk in zip(spec.excitations, x)])
        p2 = np.array([p_ratio(2, m, xk) for m, xk in zip(spec.excitations, x)])
        chi = np.concatenate([alpha.conj(), alpha]) * np.exp(1j * decomp.W * t)
        weight = chi**2 * np.concatenate([p2, p2])
        sigma = (f * weight) @ f.T
        cross = np.abs(alpha) ** 2 * p1 + spec.m_array + 0.5
        fa, fb = f[:, :n], f[:, n:]
        sigma = sigma + (fa * cross) @ fb.T + (fb * cross) @ fa.T
    sigma = _real(sigma, "quadrature covariance")
    return robertson_report(0.5 * (sigma + sigma.T), n, t)


def mean_quadratures(decomp, t, spec):
    """``<x>(t) = F(t) e^{iWt} chi(0)`` with ``chi(0) = (alpha*, alpha)`` rescaled by ``L^1_m/L_m``."""
    if spec.family is Family.FOCK:
        return np.zeros(2 * spec.n_modes)
    mom = pacs_moments(spec)
    g = floquet_solutions(decomp, t)
    return _real(g @ np.concatenate([mom.mean_Adag, mom.mean_A]), "mean quadratures")
