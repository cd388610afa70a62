"""
Wavefunctions and Wigner functions of photon-added coherent states.

The Wigner function is normalized so that ``int W d^Nq d^Np = (2 pi)^N``;
the single-mode ground state of a unit oscillator is ``2 exp(-(q^2 + p^2))``.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import GridTooLargeError
from .floquet import floquet_solutions, integrals_of_motion_coefficients
from .special import hermite_multidim, laguerre

MAX_GRID_POINTS = 10**7


def axis_names(n_modes):
    return [f"q{k + 1}" for k in range(n_modes)] + [f"p{k + 1}" for k in range(n_modes)]


@dataclass(frozen=True)
class Axis:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("an axis needs at least two points")
        if not self.stop > self.start:
            raise ValueError("axis stop must exceed start")

    @property
    def values(self):
        return np.linspace(self.start, self.stop, self.count)

    @property
    def step(self):
        return (self.stop - self.start) / (self.count - 1)


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Rectangular lattice over free phase-space axes with the rest pinned.

    ``axes`` maps axis names (``q1..qN, p1..pN``) to :class:`Axis`; ``pinned``
    maps the remaining names to fixed values. ``samples`` has one dimension
    per free axis, in canonical axis order (row-major when flattened).
    """

    n_modes: int
    axes: dict
    pinned: dict = field(default_factory=dict)
    samples: np.ndarray = None

    def __post_init__(self):
        names = axis_names(self.n_modes)
        axes = {k: v if isinstance(v, Axis) else Axis(*v) for k, v in self.axes.items()}
        pinned = {k: float(v) for k, v in self.pinned.items()}
        unknown = (set(axes) | set(pinned)) - set(names)
        if unknown:
            raise ValueError(f"unknown axes: {sorted(unknown)}")
        if set(axes) & set(pinned) or len(axes) + len(pinned) != len(names):
            raise ValueError("every axis must be either free or pinned, exactly once")
        ordered = {k: axes[k] for k in names if k in axes}
        object.__setattr__(self, "axes", ordered)
        object.__setattr__(self, "pinned", {k: pinned[k] for k in names if k in pinned})

    @property
    def shape(self):
        return tuple(a.count for a in self.axes.values())

    @property
    def size(self):
        return math.prod(self.shape)

    @property
    def cell_volume(self):
        return math.prod(a.step for a in self.axes.values())

    def points(self):
        """Coordinates of shape ``shape + (2N,)``."""
        names = axis_names(self.n_modes)
        mesh = np.meshgrid(*(a.values for a in self.axes.values()), indexing="ij")
        free = dict(zip(self.axes, mesh))
        cols = [free[k] if k in free else np.full(self.shape, self.pinned[k]) for k in names]
        return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class NegativityStats:
    min_value: float
    min_location: np.ndarray
    negative_mass: float


def classical_mode(decomp, t, q, p):
    """``A(q, p, t) = e^{i Omega t} (-i V^T q + i U^T p)``, vectorized over leading axes."""
    c_a, _ = integrals_of_motion_coefficients(decomp, t)
    x = np.concatenate([np.asarray(q, dtype=float), np.asarray(p, dtype=float)], axis=-1)
    return x @ c_a.T


def _as_spec(spec, n):
    if spec.n_modes != n:
        raise ValueError(f"state has {spec.n_modes} modes, decomposition has {n}")
    return spec


def wigner_values(decomp, t, spec, x):
    """Wigner function at phase-space points ``x`` of shape ``(..., 2N)``."""
    n = decomp.n_modes
    spec = _as_spec(spec, n)
    alpha = spec.alpha_array
    x = np.asarray(x, dtype=float)
    a = classical_mode(decomp, t, x[..., :n], x[..., n:])
    out = 2.0**n * np.exp(-2.0 * np.sum(np.abs(a - alpha) ** 2, axis=-1))
    for k, m in enumerate(spec.excitations):
        if m:
            arg = np.abs(2.0 * a[..., k] - alpha[k]) ** 2
            out = out * ((-1) ** m * laguerre(m, 0, arg) / laguerre(m, 0, -abs(alpha[k]) ** 2))
    return out


def wigner_pacs(decomp, t, spec, grid):
    """Evaluate the Wigner function on ``grid``; returns a populated copy."""
    if grid.n_modes != decomp.n_modes:
        raise ValueError("grid and decomposition disagree on the number of modes")
    if grid.size > MAX_GRID_POINTS:
        raise GridTooLargeError(f"grid has {grid.size} points (limit {MAX_GRID_POINTS})")
    return replace(grid, samples=wigner_values(decomp, t, spec, grid.points()))


def negativity_scan(grid, cell_volume=None):
    """Minimum of the samples and the integrated negative volume ``sum |W| dV / (2 pi)^N``."""
    if grid.samples is None or grid.samples.size == 0:
        raise ValueError("grid has no samples")
    w = grid.samples
    if cell_volume is None:
        cell_volume = grid.cell_volume
    k = np.unravel_index(int(np.argmin(w)), w.shape)
    loc = grid.points()[k]
    neg = float(np.abs(w[w < 0]).sum() * cell_volume / (2 * np.pi) ** grid.n_modes)
    return NegativityStats(float(w[k]), loc, neg)


def _wavefunction_parts(decomp, t):
    n = decomp.n_modes
    g = floquet_solutions(decomp, t)
    u, v = g[:n, :n], g[n:, :n]
    u_inv_t = np.linalg.inv(u).T
    quad = u_inv_t @ v.T  # B = U^{-T} V^T, symmetric
    quad = 0.5 * (quad + quad.T)
    herm = u.conj().T @ u_inv_t  # M = U^dag U^{-T}, symmetric
    herm = 0.5 * (herm + herm.T)
    shift = np.linalg.inv(u.conj())  # U^{-*}
    return quad, herm, shift


def _gaussian_log_norm(quad, lin, const):
    """``log int |exp(q^T (i B / 2) q + lin^T q + const)|^2 dq``."""
    k = quad.imag
    r = lin.real
    n = k.shape[0]
    sign, logdet = np.linalg.slogdet(k)
    if sign <= 0:
        raise np.linalg.LinAlgError("Gaussian is not normalizable")
    return (
        0.5 * n * math.log(math.pi) - 0.5 * logdet + r @ np.linalg.solve(k, r) + 2 * const.real
    )


def wavefunction_pacs(decomp, t, spec, q):
    r"""Position-space wavefunction of a PACS (or its Fock/coherent limits).

    .. math::
        \psi_{\alpha,m}(q) = N_{\alpha,m}\, \psi_\alpha(q)\,
        H^{M}_{m}(U^{-*} q - \alpha), \qquad M = U^\dagger U^{-T},

    with ``psi_alpha = N_alpha exp(-|alpha|^2/2 + i q^T U^{-T} V^T q / 2
    - alpha^T M alpha / 2 + alpha^T M U^{-*} q)``. Here ``U`` and ``V``
    carry the Floquet phases, i.e. they are blocks of ``F(t) e^{iWt}``.
    ``N_alpha > 0`` normalizes the Gaussian in closed form and
    ``N_{alpha,m} = prod_k (m_k! L_{m_k}(-|alpha_k|^2))^{-1/2}``.

    ``q`` has shape ``(..., N)``.
    """
    n = decomp.n_modes
    spec = _as_spec(spec, n)
    alpha = spec.alpha_array
    q = np.asarray(q, dtype=float)
    try:
        quad, herm, shift = _wavefunction_parts(decomp, t)
    except np.linalg.LinAlgError:
        raise np.linalg.LinAlgError("U(t) is singular: broken decomposition") from None
    lin = (herm @ shift).T @ alpha
    const = -0.5 * np.vdot(alpha, alpha).real - 0.5 * alpha @ herm @ alpha
    log_norm = _gaussian_log_norm(quad, lin, const)
    exponent = 0.5j * np.einsum("...i,ij,...j->...", q, quad, q) + q @ lin + const
    gauss = np.exp(exponent - 0.5 * log_norm)
    if not any(spec.excitations):
        return gauss
    pacs_norm = math.prod(
        math.factorial(m) * laguerre(m, 0, -abs(a) ** 2) for m, a in zip(spec.excitations, alpha)
    )
    z = q @ shift.T - alpha
    return gauss * hermite_multidim(herm, spec.excitations, z) / math.sqrt(pacs_norm)
