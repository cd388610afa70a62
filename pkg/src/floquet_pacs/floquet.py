"""
Floquet analysis of ``dx/dt = Pi(t) x``.

The fundamental matrix is integrated over one period with fixed-step RK4.
Eigenvectors of the monodromy matrix give the columns of the
Floquet-Lyapunov transformation

    F(t) = Phi(t) F(0) exp(-i W t),     W = diag(Omega, -Omega),

with ``F = [[U, U*], [V, V*]]``. Each mode is normalized with respect to
the symplectic (Krein) form so that ``F J F^T = -i J``: the first ``N``
columns then multiply creation operators and the last ``N`` annihilation
operators.
"""

from dataclasses import dataclass, replace
from functools import cached_property
from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy.interpolate import CubicSpline

from .errors import (
    DegenerateError,
    IntegrationError,
    NormalizationSingularError,
    UnstableError,
)
from .model import evaluate_pi

STABILITY_TOL = 1e-6
_CLUSTER_TOL = 1e-6
_RANK_TOL = 1e-8
_KREIN_TOL = 1e-12


def _rk4(config, t0, h, n_steps, phi0):
    """Fixed-step RK4 for ``Phi' = Pi(t) Phi``; returns all ``n_steps + 1`` iterates."""
    times = t0 + h * np.arange(n_steps + 1)
    pi_full = evaluate_pi(config, times)
    pi_half = evaluate_pi(config, times[:-1] + 0.5 * h)
    out = np.empty((n_steps + 1,) + phi0.shape, dtype=phi0.dtype)
    out[0] = phi = phi0
    for k in range(n_steps):
        # overflow surfaces as IntegrationError below
        with np.errstate(over="ignore", invalid="ignore"):
            a, b, c = pi_full[k], pi_half[k], pi_full[k + 1]
            k1 = a @ phi
            k2 = b @ (phi + 0.5 * h * k1)
            k3 = b @ (phi + 0.5 * h * k2)
            k4 = c @ (phi + h * k3)
            phi = phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(phi)):
            raise IntegrationError(
                f"non-finite fundamental matrix at step {k + 1} (t={times[k + 1]:.6g})",
                step=k + 1,
            )
        out[k + 1] = phi
    return out


def fundamental_matrix(config):
    """``Phi(t_k)`` on ``t_k = k T / steps_per_period``, ``k = 0..steps_per_period``.

    Returns an array of shape ``(steps_per_period + 1, 2N, 2N)``; the first
    entry is exactly the identity.
    """
    n = config.steps_per_period
    h = config.period / n
    return _rk4(config, 0.0, h, n, np.eye(2 * config.n_modes))


class MonodromyAnalysis(NamedTuple):
    monodromy: np.ndarray
    exponents: np.ndarray
    stable: bool
    stability_margin: float


def _check_complete(vectors, what):
    cols = vectors / np.linalg.norm(vectors, axis=0)
    s = np.linalg.svd(cols, compute_uv=False)
    if s[-1] < _RANK_TOL:
        raise DegenerateError(f"defective monodromy: {what} lacks a full eigenspace")


def _krein_positive_modes(monodromy, period):
    """Floquet vectors with ``-i w^H J w = 1`` and their exponents.

    Eigenvalues are grouped by angle on the unit circle. Within each group
    the Krein form ``-i B^H J B`` is diagonalized; positive directions keep
    their multiplier, negative ones are conjugated (the conjugate
    multiplier belongs to the same pair).
    """
    dim = monodromy.shape[0]
    n = dim // 2
    J = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    lam, vec = scipy.linalg.eig(monodromy)
    theta = np.angle(lam)

    order = np.argsort(theta, kind="stable")
    groups, current = [], [order[0]]
    for i in order[1:]:
        if theta[i] - theta[current[-1]] <= _CLUSTER_TOL:
            current.append(i)
        else:
            groups.append(current)
            current = [i]
    groups.append(current)
    # theta = pi and theta near -pi are the same multiplier -1
    if len(groups) > 1 and theta[groups[0][0]] + np.pi <= _CLUSTER_TOL and np.pi - theta[groups[-1][-1]] <= _CLUSTER_TOL:
        groups[-1] = groups[-1] + groups.pop(0)

    modes, exps = [], []
    for g in groups:
        th = float(np.mean(np.abs(theta[g])))
        if th <= _CLUSTER_TOL:
            raise DegenerateError("zero Floquet exponent (multiplier 1): resonant period")
        at_minus_one = np.pi - th <= _CLUSTER_TOL
        if not at_minus_one and theta[g[0]] < 0:
            continue  # represented by the conjugate group
        basis = vec[:, g]
        _check_complete(basis, f"multiplier {np.mean(lam[g]):.6g}")
        basis, _ = np.linalg.qr(basis)
        krein = -1j * basis.conj().T @ J @ basis
        krein = 0.5 * (krein + krein.conj().T)
        kval, kvec = np.linalg.eigh(krein)
        if np.min(np.abs(kval)) < _KREIN_TOL:
            raise NormalizationSingularError(
                f"mode with vanishing symplectic norm at multiplier angle {th:.6g}"
            )
        pos = []
        for val, q in zip(kval, kvec.T):
            w = basis @ q / np.sqrt(abs(val))
            if val > 0:
                pos.append((w, th if not at_minus_one else np.pi))
            elif not at_minus_one:
                pos.append((w.conj(), -th))
        if at_minus_one and len(pos) * 2 != len(g):
            raise NormalizationSingularError("indefinite Krein form at multiplier -1")
        by_exp = {}
        for w, e in pos:
            by_exp.setdefault(e, []).append(w)
        for e, ws in by_exp.items():
            for w in _align(np.array(ws).T, n).T:
                modes.append(w)
                exps.append(e / period)
    if len(modes) != n:
        raise DegenerateError("could not assemble N Floquet modes from the monodromy spectrum")
    return np.array(exps), np.array(modes).T


def _align(W, n):
    """Rotate a Krein-orthonormal block so its position part is lower trapezoidal.

    Only matters for repeated multipliers, where any unitary mix of the
    eigenspace is admissible; this picks the one aligned with the mode axes.
    """
    if W.shape[1] == 1:
        return W
    # W_u^H = Q R  =>  (W Q)_u = R^H
    q, r = np.linalg.qr(W[:n].conj().T)
    d = np.diag(r)
    phases = np.where(np.abs(d) > 1e-14, d / np.where(d == 0, 1, np.abs(d)), 1.0)
    return W @ (q * phases)


def _fix_phase(w, n):
    u = w[:n]
    ref = u if np.abs(u).max() > 1e-10 else w
    k = int(np.argmax(np.abs(ref)))
    return w * (abs(ref[k]) / ref[k])


def monodromy_and_exponents(config, fundamental=None):
    """Monodromy matrix, Floquet exponents and stability verdict.

    Exponents ``omega_j`` satisfy ``lambda_j = exp(i omega_j T)`` for the
    Krein-positive member of each conjugate pair and lie in the band
    ``(-pi/T, pi/T]``, sorted ascending. For an unstable configuration the
    exponents are ``nan`` and ``stable`` is ``False``.

    Raises
    ------
    DegenerateError
        A multiplier equals 1, or a repeated multiplier is defective.
    """
    if fundamental is None:
        fundamental = fundamental_matrix(config)
    monodromy = fundamental[-1]
    lam = scipy.linalg.eigvals(monodromy)
    margin = float(np.max(np.abs(np.abs(lam) - 1.0)))
    if margin > STABILITY_TOL:
        return MonodromyAnalysis(monodromy, np.full(config.n_modes, np.nan), False, margin)
    exps, modes = _sorted_modes(monodromy, config)
    return MonodromyAnalysis(monodromy, exps, True, margin)


def _sorted_modes(monodromy, config):
    n = config.n_modes
    exps, modes = _krein_positive_modes(monodromy, config.period)
    modes = np.column_stack([_fix_phase(modes[:, j], n) for j in range(n)])
    # ascending exponent; ties by descending |entries| so uncoupled modes keep their labels
    keys = [
        (round(exps[j] * config.period, 9), tuple(-np.round(np.abs(modes[:, j]), 9)))
        for j in range(n)
    ]
    order = sorted(range(n), key=lambda j: keys[j])
    return exps[order], modes[:, order]


@dataclass(frozen=True, eq=False)
class FloquetDecomposition:
    """Floquet-Lyapunov data of a stable configuration; build with :func:`build_flt`."""

    config: object
    monodromy: np.ndarray
    exponents: np.ndarray
    fundamental: np.ndarray
    flt_samples: np.ndarray
    stable: bool
    stability_margin: float

    @property
    def n_modes(self):
        return self.config.n_modes

    @property
    def period(self):
        return self.config.period

    @property
    def times(self):
        return np.linspace(0.0, self.period, self.config.steps_per_period + 1)

    @property
    def W(self):
        return np.concatenate([self.exponents, -self.exponents])

    def U(self, t):
        return flt_at(self, t)[: self.n_modes, : self.n_modes]

    def V(self, t):
        return flt_at(self, t)[self.n_modes :, : self.n_modes]

    @cached_property
    def _spline(self):
        data = np.array(self.flt_samples)
        data[-1] = data[0]
        stacked = np.concatenate([data.real, data.imag], axis=-1)
        return CubicSpline(self.times, stacked, axis=0, bc_type="periodic")

    def to_dict(self, include_samples=False):
        lam = np.linalg.eigvals(self.monodromy)
        out = {
            "n_modes": self.n_modes,
            "period": self.period,
            "steps_per_period": self.config.steps_per_period,
            "stable": bool(self.stable),
            "stability_margin": self.stability_margin,
            "exponents": self.exponents.tolist(),
            "multipliers": _complex_list(np.sort_complex(lam)),
            "monodromy": self.monodromy.tolist(),
            "flt_at_0": _complex_list(self.flt_samples[0]),
        }
        if include_samples:
            out["flt_samples"] = _complex_list(self.flt_samples)
        return out


def _complex_list(a):
    a = np.asarray(a)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def build_flt(config):
    """Integrate, analyse and assemble the canonical Floquet-Lyapunov transformation.

    Raises
    ------
    UnstableError
        Some multiplier is off the unit circle by more than ``1e-6``.
    DegenerateError, NormalizationSingularError
        See :func:`monodromy_and_exponents`.
    """
    phi = fundamental_matrix(config)
    monodromy = phi[-1]
    lam = scipy.linalg.eigvals(monodromy)
    margin = float(np.max(np.abs(np.abs(lam) - 1.0)))
    if margin > STABILITY_TOL:
        raise UnstableError(
            f"unstable configuration: multiplier modulus off the unit circle by {margin:.3e}",
            margin=margin,
        )
    exps, modes = _sorted_modes(monodromy, config)
    f0 = np.hstack([modes, modes.conj()])
    times = np.linspace(0.0, config.period, config.steps_per_period + 1)
    w = np.concatenate([exps, -exps])
    samples = (phi @ f0) * np.exp(-1j * np.outer(times, w))[:, None, :]
    samples[0] = f0
    for a in (phi, samples):
        a.setflags(write=False)
    return FloquetDecomposition(config, monodromy, exps, phi, samples, True, margin)


def _grid_index(decomp, t_red):
    n = decomp.config.steps_per_period
    x = t_red / decomp.period * n
    k = int(round(x))
    if abs(x - k) <= 1e-9:
        return k % n if k == n else k
    return None


def flt_at(decomp, t, reintegrate=False):
    """``F(t)`` for any real ``t``.

    Reduced modulo ``T``; grid times return the stored sample, other times
    are cubic-spline interpolated (or, with ``reintegrate=True``, obtained
    by one RK4 step from the preceding grid sample).
    """
    t_red = float(np.mod(t, decomp.period))
    k = _grid_index(decomp, t_red)
    if k is not None:
        return np.array(decomp.flt_samples[k])
    if reintegrate:
        h = decomp.period / decomp.config.steps_per_period
        k = int(np.floor(t_red / h))
        phi = _rk4(decomp.config, k * h, t_red - k * h, 1, decomp.fundamental[k])[-1]
        return (phi @ decomp.flt_samples[0]) * np.exp(-1j * decomp.W * t_red)
    n2 = 2 * decomp.n_modes
    vals = decomp._spline(t_red)
    return vals[:, :n2] + 1j * vals[:, n2:]


def floquet_solutions(decomp, t):
    """``F(t) exp(i W t)``: its columns are classical solutions ``Phi(t) F(0)``."""
    return flt_at(decomp, t) * np.exp(1j * decomp.W * t)


def integrals_of_motion_coefficients(decomp, t):
    """Coefficients of the linear integrals of motion on ``x = (q, p)``.

    Returns ``(C_A, C_Adag)``, each ``N x 2N``, with

        A(t)      = e^{i Omega t} (-i V^T q + i U^T p)
        A^dag(t)  = e^{-i Omega t} (i V^H q - i U^H p)

    Stacked as ``[C_Adag; C_A]`` they form ``(F(t) e^{iWt})^{-1}``.
    """
    n = decomp.n_modes
    f = flt_at(decomp, t)
    u, v = f[:n, :n], f[n:, :n]
    ph = np.exp(1j * decomp.exponents * t)[:, None]
    c_a = ph * np.hstack([-1j * v.T, 1j * u.T])
    return c_a, c_a.conj()


def corrupted(decomp, u_scale):
    """Copy of ``decomp`` with the ``U`` blocks scaled by ``u_scale`` (fault injection)."""
    n = decomp.n_modes
    samples = np.array(decomp.flt_samples)
    samples[:, :n, :] *= u_scale
    samples.setflags(write=False)
    return replace(decomp, flt_samples=samples)
