"""
Floquet analysis of two coupled Mathieu oscillators.

Builds the driven pair, looks at the monodromy matrix and its multipliers,
then checks the canonical structure of the Floquet-Lyapunov transformation.
Run with ``python3 demos/01_mathieu_floquet.py``.
"""

import numpy as np

from floquet_pacs import build_flt, flt_at, monodromy_and_exponents, preset_mathieu_pair

np.set_printoptions(precision=5, suppress=True)

# %% The configuration: k_qq(t) = diag(1.1, 0.9) - 0.1 cos(t) I + 0.1 sigma_x, T = 2 pi
config = preset_mathieu_pair(1.1, 0.9, 0.05, 0.1, 2 * np.pi)
analysis = monodromy_and_exponents(config)
print("monodromy matrix:\n", analysis.monodromy)
print("multipliers:", np.linalg.eigvals(analysis.monodromy))
print("|lambda| - 1:", analysis.stability_margin, "stable:", analysis.stable)
print("Floquet exponents:", analysis.exponents)

# %% Exponents are only defined modulo 2 pi / T. Unwrapping against the bare
# frequencies sqrt(1.1 +- ...) shows the modes are the dressed normal modes.
bare = np.sqrt(np.linalg.eigvalsh([[1.1, 0.1], [0.1, 0.9]]))
print("bare normal-mode frequencies:", bare, "-> reduced:", (bare + 0.5) % 1.0 - 0.5)

# %% The transformation F(t) and its blocks
decomp = build_flt(config)
u0, v0 = decomp.U(0.0), decomp.V(0.0)
print("V^T U at t=0 (should be i/2):\n", v0.T @ u0)

J = config.J
for t in np.linspace(0, decomp.period, 5):
    f = flt_at(decomp, t)
    print(f"t={t:5.2f}  |FJF^T + iJ| = {np.abs(f @ J @ f.T + 1j * J).max():.1e}  det F = {np.linalg.det(f):.6f}")

# %% Periodicity of F and quasi-periodicity of the solutions
print("F(T) - F(0):", np.abs(flt_at(decomp, decomp.period) - flt_at(decomp, 0.0)).max())

# %% Pushing the drive into parametric resonance makes the system unstable
unstable = monodromy_and_exponents(preset_mathieu_pair(0.1, 0.1, 0.3, 0.0, 2 * np.pi))
print("resonant drive: stable =", unstable.stable, "margin =", round(unstable.stability_margin, 3))
