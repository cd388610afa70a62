"""
Wigner functions of photon-added coherent states and where they go negative.

For N = 2 the full phase space is four-dimensional, so we look at the
(q2, p2) slice through the state mean and compare the negative region with
the condition |2 A_2 - alpha_2|^2 < 1 on the classical Floquet mode.
"""

import numpy as np

from floquet_pacs import (
    Axis,
    PhaseSpaceGrid,
    StateSpec,
    build_configuration,
    build_flt,
    mean_quadratures,
    negativity_scan,
    preset_mathieu_pair,
    wavefunction_pacs,
    wigner_pacs,
)
from floquet_pacs.phase_space import classical_mode

decomp = build_flt(preset_mathieu_pair(1.1, 0.9, 0.05, 0.1, 2 * np.pi))
spec = StateSpec.pacs([0.8, 0.5], [0, 1])

# %% A slice through the mean at a few times
for t in np.linspace(0, decomp.period, 4, endpoint=False):
    mean = mean_quadratures(decomp, t, spec)
    grid = PhaseSpaceGrid(2, {"q2": Axis(-4, 4, 161), "p2": Axis(-4, 4, 161)}, {"q1": mean[0], "p1": mean[2]})
    grid = wigner_pacs(decomp, t, spec, grid)
    stats = negativity_scan(grid)
    pts = grid.points()
    a2 = classical_mode(decomp, t, pts[..., :2], pts[..., 2:])[..., 1]
    region = np.abs(2 * a2 - spec.alpha[1]) ** 2 < 1
    print(
        f"t={t:4.2f}  min W={stats.min_value:+.4f} at (q2,p2)=({stats.min_location[1]:+.2f},{stats.min_location[3]:+.2f})"
        f"  negative points={int((grid.samples < 0).sum())}  predicted={int(region.sum())}"
    )

# %% Increasing the number of added photons on a single squeezed mode
single = build_flt(
    build_configuration(1, 2 * np.pi, {"k_qq": {"constant": [[0.7]], "harmonics": [{"harmonic": 1, "cos": [[-0.2]]}]}, "k_pp": [[1.0]]})
)
for m in range(5):
    g = PhaseSpaceGrid(1, {"q1": Axis(-6, 6, 241), "p1": Axis(-6, 6, 241)})
    stats = negativity_scan(wigner_pacs(single, 0.0, StateSpec.pacs([0.6], [m]), g))
    print(f"m={m}: min W={stats.min_value:+.4f}  negative mass={stats.negative_mass:.4f}")

# %% The position wavefunction of a photon-added state of the driven pair
q = np.linspace(-5, 5, 11)
psi = wavefunction_pacs(decomp, 1.0, spec, np.stack([q, np.zeros_like(q)], axis=-1))
print("|psi(q1, 0)|^2 at t=1:", np.round(np.abs(psi) ** 2, 5))
