"""
Invariant checks for a configuration and its Floquet decomposition.

Each check yields a residual and a tolerance; :func:`run_checks` collects
them into :class:`Check` records. Oracle comparisons run only for
``N <= 2``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .floquet import (
    STABILITY_TOL,
    flt_at,
    floquet_solutions,
    integrals_of_motion_coefficients,
)
from .model import evaluate_pi, is_time_reversal_symmetric
from .oracle import build_truncated_ladder, oracle_moments, oracle_state
from .special import laguerre
from .states import (
    StateSpec,
    covariance_iom,
    covariance_quadrature,
    mean_quadratures,
    pacs_moments,
    transform_covariance,
)

ORACLE_DIM = 40


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


def _sample_times(decomp, count):
    n = decomp.config.steps_per_period
    idx = np.linspace(0, n, count, dtype=int)
    return idx * decomp.period / n


def demo_specs(n_modes):
    """Representative states of each family used by the checks."""
    alpha = [0.8 - 0.2j, 0.5j, -0.3][:n_modes] + [0.4] * max(0, n_modes - 3)
    m = [1, 2, 0][:n_modes] + [1] * max(0, n_modes - 3)
    return {
        "fock": StateSpec.fock([1] + [0] * (n_modes - 1)),
        "coherent": StateSpec.coherent(alpha),
        "pacs": StateSpec.pacs(alpha, m),
    }


def run_checks(decomp):
    """Run every invariant check on ``decomp``; returns a list of :class:`Check`."""
    cfg = decomp.config
    n = decomp.n_modes
    J = cfg.J
    T = decomp.period
    checks = []

    ts = np.linspace(0.0, T, 17)
    pi = evaluate_pi(cfg, ts)
    checks.append(Check("hamiltonian_vector_field", float(np.abs(np.swapaxes(pi, -1, -2) @ J + J @ pi).max()), 1e-12))
    phi = decomp.fundamental
    checks.append(Check("symplecticity", float(np.abs(np.swapaxes(phi, -1, -2) @ J @ phi - J).max()), 1e-9))
    checks.append(Check("stability_margin", decomp.stability_margin, STABILITY_TOL))

    f0 = flt_at(decomp, 0.0)
    u0, v0 = f0[:n, :n], f0[n:, :n]
    if is_time_reversal_symmetric(cfg):
        canon = np.abs(v0.T @ u0 - 0.5j * np.eye(n)).max()
    else:
        # general form of the canonical condition: U^T V* - V^T U* = -i I, U^T V = V^T U
        canon = max(
            np.abs(u0.T @ v0.conj() - v0.T @ u0.conj() + 1j * np.eye(n)).max(),
            np.abs(u0.T @ v0 - v0.T @ u0).max(),
        )
    checks.append(Check("canonical_condition", float(canon), 1e-10))

    samples = decomp.flt_samples[:: max(1, len(decomp.flt_samples) // 32)]
    algebra = np.abs(samples @ J @ np.swapaxes(samples, -1, -2) + 1j * J).max()
    checks.append(Check("canonical_algebra", float(algebra), 1e-9))
    dets = np.linalg.det(samples)
    checks.append(Check("det_flt", float(np.abs(dets - (-1j) ** n).max()), 1e-9))
    checks.append(Check("flt_periodicity", float(np.abs(decomp.flt_samples[-1] - decomp.flt_samples[0]).max()), 1e-8))

    h = 1e-5 * T
    t_mid = 0.5 * T
    c_plus = integrals_of_motion_coefficients(decomp, t_mid + h)[0]
    c_minus = integrals_of_motion_coefficients(decomp, t_mid - h)[0]
    c_mid = integrals_of_motion_coefficients(decomp, t_mid)[0]
    deriv = (c_plus - c_minus) / (2 * h)
    checks.append(Check("iom_conservation", float(np.abs(deriv + c_mid @ evaluate_pi(cfg, t_mid)).max()), 2e-6))

    specs = demo_specs(n)
    times = _sample_times(decomp, 9)
    dets = [covariance_quadrature(decomp, t, specs["coherent"]).determinant for t in times]
    checks.append(Check("coherent_intelligence", float(np.abs(np.array(dets) - 2.0 ** (-2 * n)).max()), 1e-9))
    pdets = np.array([covariance_quadrature(decomp, t, specs["pacs"]).determinant for t in times])
    checks.append(Check("pacs_det_constancy", float(np.std(pdets) / np.mean(pdets)), 1e-8))
    frame = 0.0
    for spec in specs.values():
        for t in times[:4]:
            closed = covariance_quadrature(decomp, t, spec).sigma
            routed = transform_covariance(decomp, t, covariance_iom(spec))
            frame = max(frame, np.abs(closed - routed).max())
    checks.append(Check("frame_consistency", float(frame), 1e-9))

    if n <= 2:
        checks.extend(_oracle_checks(decomp, specs["pacs"]))
    return checks


def _oracle_checks(decomp, spec):
    n = spec.n_modes
    ladder = build_truncated_ladder(n, ORACLE_DIM)
    state = oracle_state(ladder, spec)
    mom = oracle_moments(ladder, state)
    closed = pacs_moments(spec)
    dev = max(
        np.abs(mom.mean_a - closed.mean_A).max(),
        np.abs(mom.aa - closed.AA()).max(),
        np.abs(mom.adagadag - closed.AdagAdag()).max(),
        np.abs(mom.adaga - closed.AdagA()).max(),
        np.abs(mom.aadag - closed.AAdag()).max(),
    )
    expected_norm = 1.0
    for m, a in zip(spec.excitations, spec.alpha):
        expected_norm *= math.factorial(m) * laguerre(m, 0, -abs(a) ** 2)
    g = floquet_solutions(decomp, 0.0)
    sigma_oracle = (g @ mom.sigma_iom() @ g.T).real
    mean_oracle = (g @ np.concatenate([mom.mean_adag, mom.mean_a])).real
    sigma_closed = covariance_quadrature(decomp, 0.0, spec).sigma
    mean_closed = mean_quadratures(decomp, 0.0, spec)
    return [
        Check("oracle_moments", float(dev), 1e-6),
        Check("oracle_normalization", abs(state.norm_squared / expected_norm - 1.0), 1e-8),
        Check("oracle_quadrature_covariance", float(np.abs(sigma_oracle - sigma_closed).max()), 1e-6),
        Check("oracle_quadrature_mean", float(np.abs(mean_oracle - mean_closed).max()), 1e-6),
    ]
