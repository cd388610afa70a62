import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floquet_pacs.errors import GridTooLargeError
from floquet_pacs.phase_space import (
    Axis,
    PhaseSpaceGrid,
    classical_mode,
    negativity_scan,
    wavefunction_pacs,
    wigner_pacs,
    wigner_values,
)
from floquet_pacs.states import StateSpec, covariance_quadrature, mean_quadratures

finite = st.floats(-5, 5)


def square_grid(lim, count, n_modes=1, pinned=None):
    pinned = pinned or {}
    free = {k: Axis(-lim, lim, count) for k in (["q1", "p1"] if n_modes == 1 else ["q1", "p1"])}
    return PhaseSpaceGrid(n_modes, free, pinned)


def wigner_transform(decomp, t, spec, q, p, r_lim=12.0, r_count=2401):
    """Numerical ``int dr e^{-i p r} psi(q + r/2) psi*(q - r/2)`` on a (q, p) mesh."""
    r = np.linspace(-r_lim, r_lim, r_count)
    out = np.empty((len(q), len(p)))
    for i, qi in enumerate(q):
        plus = wavefunction_pacs(decomp, t, spec, (qi + r / 2)[:, None])
        minus = wavefunction_pacs(decomp, t, spec, (qi - r / 2)[:, None])
        corr = plus * minus.conj()
        integrand = np.exp(-1j * np.outer(p, r)) * corr
        out[i] = np.trapezoid(integrand, r, axis=1).real
    return out


class TestClassicalMode:
    def test_origin(self, mathieu_decomp):
        np.testing.assert_array_equal(classical_mode(mathieu_decomp, 1.0, [0, 0], [0, 0]), 0)

    def test_unit_values(self, unit_decomp):
        assert classical_mode(unit_decomp, 0.0, [1.0], [0.0])[0] == pytest.approx(2**-0.5)
        assert classical_mode(unit_decomp, 0.0, [0.0], [1.0])[0] == pytest.approx(1j * 2**-0.5)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(finite, min_size=8, max_size=8), finite, finite, st.floats(0, 7))
    def test_linearity(self, mathieu_decomp, v, a, b, t):
        q1, p1, q2, p2 = (np.array(v[i : i + 2]) for i in range(0, 8, 2))
        lhs = classical_mode(mathieu_decomp, t, a * q1 + b * q2, a * p1 + b * p2)
        rhs = a * classical_mode(mathieu_decomp, t, q1, p1) + b * classical_mode(mathieu_decomp, t, q2, p2)
        np.testing.assert_allclose(lhs, rhs, atol=1e-11)


class TestGrid:
    def test_axis_validation(self):
        with pytest.raises(ValueError):
            Axis(0, 1, 1)
        with pytest.raises(ValueError):
            Axis(1, 0, 5)

    def test_free_plus_pinned(self):
        with pytest.raises(ValueError):
            PhaseSpaceGrid(2, {"q1": Axis(-1, 1, 3)}, {"p1": 0.0})
        with pytest.raises(ValueError):
            PhaseSpaceGrid(1, {"q1": Axis(-1, 1, 3), "x": Axis(-1, 1, 3)})
        with pytest.raises(ValueError):
            PhaseSpaceGrid(1, {"q1": Axis(-1, 1, 3), "p1": Axis(-1, 1, 3)}, {"q1": 0.0})

    def test_canonical_order(self):
        g = PhaseSpaceGrid(2, {"p1": Axis(-1, 1, 3), "q1": Axis(-2, 2, 5)}, {"p2": 0.5, "q2": 0.1})
        assert list(g.axes) == ["q1", "p1"] and g.shape == (5, 3)
        pts = g.points()
        assert pts.shape == (5, 3, 4)
        np.testing.assert_array_equal(pts[4, 0], [2.0, 0.1, -1.0, 0.5])

    def test_guard(self, unit_decomp):
        big = PhaseSpaceGrid(1, {"q1": Axis(-1, 1, 4000), "p1": Axis(-1, 1, 4000)})
        with pytest.raises(GridTooLargeError):
            wigner_pacs(unit_decomp, 0.0, StateSpec.coherent([0.0]), big)


class TestWignerValues:
    def test_ground_state(self, unit_decomp):
        w = wigner_values(unit_decomp, 0.0, StateSpec.coherent([0.0]), [0.0, 0.0])
        assert abs(w - 2.0) <= 1e-12

    def test_ground_state_shape(self, unit_decomp):
        x = np.array([[0.5, -0.3], [1.2, 0.7]])
        w = wigner_values(unit_decomp, 0.4, StateSpec.coherent([0.0]), x)
        np.testing.assert_allclose(w, 2 * np.exp(-(x**2).sum(axis=1)), atol=1e-12)

    def test_single_photon(self, unit_decomp):
        w = wigner_values(unit_decomp, 0.0, StateSpec.pacs([0.0], [1]), [0.0, 0.0])
        assert abs(w + 2.0) <= 1e-12

    def test_single_photon_hermite_oracle(self, unit_decomp):
        # W_1 = 2 (2 r^2 - 1) exp(-r^2) for the first excited state
        x = np.random.default_rng(2).normal(size=(20, 2))
        r2 = (x**2).sum(axis=1)
        w = wigner_values(unit_decomp, 0.0, StateSpec.fock([1]), x)
        np.testing.assert_allclose(w, 2 * (2 * r2 - 1) * np.exp(-r2), atol=1e-12)

    def test_periodicity(self, mathieu_decomp):
        x = np.random.default_rng(4).normal(size=(50, 4))
        T = mathieu_decomp.period
        fock = StateSpec.pacs([0.0, 0.0], [1, 2])
        np.testing.assert_allclose(
            wigner_values(mathieu_decomp, 0.7 + T, fock, x), wigner_values(mathieu_decomp, 0.7, fock, x), atol=1e-8
        )
        # displaced states come back rotated by the Floquet phase
        alpha = np.array([0.8, 0.5])
        shifted = alpha * np.exp(-1j * mathieu_decomp.exponents * T)
        a = wigner_values(mathieu_decomp, 0.7 + T, StateSpec.pacs(alpha, [0, 1]), x)
        b = wigner_values(mathieu_decomp, 0.7, StateSpec.pacs(shifted, [0, 1]), x)
        np.testing.assert_allclose(a, b, atol=1e-8)


class TestNegativity:
    def test_gaussian(self, mathieu_decomp):
        grid = PhaseSpaceGrid(2, {"q1": Axis(-5, 5, 81), "p1": Axis(-5, 5, 81)}, {"q2": 0.3, "p2": -0.2})
        stats = negativity_scan(wigner_pacs(mathieu_decomp, 1.0, StateSpec.coherent([0.4, 0.1]), grid))
        assert stats.min_value >= 0 and stats.negative_mass == 0

    def test_fock_one(self, unit_decomp):
        grid = wigner_pacs(unit_decomp, 0.0, StateSpec.fock([1]), square_grid(4, 201))
        stats = negativity_scan(grid)
        assert stats.min_value == pytest.approx(-2.0, abs=1e-12)
        np.testing.assert_allclose(stats.min_location, [0.0, 0.0], atol=1e-12)
        assert stats.negative_mass > 0

    def test_zero_grid(self):
        g = PhaseSpaceGrid(1, {"q1": Axis(-50, 50, 11), "p1": Axis(-50, 50, 11)}, samples=np.zeros((11, 11)))
        stats = negativity_scan(g)
        assert stats.min_value == 0 and stats.negative_mass == 0

    def test_empty(self):
        with pytest.raises(ValueError):
            negativity_scan(square_grid(1, 3))

    def test_two_mode_region(self, mathieu_decomp):
        spec = StateSpec.pacs([0.8, 0.5], [0, 1])
        t = 1.1
        mean = mean_quadratures(mathieu_decomp, t, spec)
        grid = PhaseSpaceGrid(2, {"q2": Axis(-3, 3, 101), "p2": Axis(-3, 3, 101)}, {"q1": mean[0], "p1": mean[2]})
        grid = wigner_pacs(mathieu_decomp, t, spec, grid)
        stats = negativity_scan(grid)
        assert stats.min_value < 0
        pts = grid.points()
        a = classical_mode(mathieu_decomp, t, pts[..., :2], pts[..., 2:])
        inside = np.abs(2 * a[..., 1] - 0.5) ** 2 < 1
        np.testing.assert_array_equal(grid.samples < 0, inside)
        k = np.unravel_index(np.argmin(grid.samples), grid.shape)
        assert inside[k]


class TestNormalization:
    @pytest.mark.parametrize("spec", [StateSpec.coherent([0.0]), StateSpec.pacs([1.0], [1]), StateSpec.pacs([0.5 - 0.5j], [3])])
    def test_integral(self, squeezed_decomp, spec):
        g = wigner_pacs(squeezed_decomp, 0.9, spec, square_grid(6, 401))
        total = g.samples.sum() * g.cell_volume / (2 * np.pi)
        assert 0.999 <= total <= 1.001

    @staticmethod
    def _trapezoid_total(g):
        w = g.samples
        edges = w[0].sum() + w[-1].sum() + w[:, 0].sum() + w[:, -1].sum()
        corners = w[0, 0] + w[0, -1] + w[-1, 0] + w[-1, -1]
        return (w.sum() - 0.5 * edges + 0.25 * corners) * g.cell_volume / (2 * np.pi)

    def test_refinement_full_window(self, squeezed_decomp):
        spec = StateSpec.pacs([0.3], [1])
        errs = []
        for count in (41, 81, 161, 321):
            g = wigner_pacs(squeezed_decomp, 0.0, spec, square_grid(10, count))
            errs.append(abs(self._trapezoid_total(g) - 1.0))
        for coarse, fine in zip(errs, errs[1:]):
            assert fine <= coarse / 4 or fine <= 1e-12

    def test_second_order_rate(self, squeezed_decomp):
        # a window that cuts the function exposes the h^2 term of the rule
        spec = StateSpec.pacs([0.3], [1])
        totals = []
        for count in (41, 81, 161, 321):
            g = wigner_pacs(squeezed_decomp, 0.0, spec, square_grid(1.5, count))
            totals.append(self._trapezoid_total(g))
        diffs = np.abs(np.diff(totals))
        rates = np.log2(diffs[:-1] / diffs[1:])
        np.testing.assert_allclose(rates, 2.0, atol=0.05)

    def test_moments(self, squeezed_decomp):
        spec = StateSpec.pacs([0.6 + 0.2j], [2])
        t = 2.2
        g = wigner_pacs(squeezed_decomp, t, spec, square_grid(9, 601))
        x = g.points()
        w = g.samples * g.cell_volume / (2 * np.pi)
        mean = np.einsum("ij,ijk->k", w, x)
        np.testing.assert_allclose(mean, mean_quadratures(squeezed_decomp, t, spec), atol=1e-4)
        d = x - mean
        sigma = np.einsum("ij,ijk,ijl->kl", w, d, d)
        np.testing.assert_allclose(sigma, covariance_quadrature(squeezed_decomp, t, spec).sigma, atol=1e-4)

    def test_moments_two_modes(self, mathieu_decomp):
        spec = StateSpec.pacs([0.4, -0.3j], [1, 1])
        t = 0.8
        ax = Axis(-6.5, 6.5, 53)
        g = wigner_pacs(mathieu_decomp, t, spec, PhaseSpaceGrid(2, {k: ax for k in ("q1", "q2", "p1", "p2")}))
        x = g.points()
        w = g.samples * g.cell_volume / (2 * np.pi) ** 2
        assert w.sum() == pytest.approx(1.0, abs=1e-4)
        mean = np.einsum("abcd,abcdk->k", w, x)
        np.testing.assert_allclose(mean, mean_quadratures(mathieu_decomp, t, spec), atol=1e-4)
        d = x - mean
        sigma = np.einsum("abcd,abcdk,abcdl->kl", w, d, d)
        np.testing.assert_allclose(sigma, covariance_quadrature(mathieu_decomp, t, spec).sigma, atol=1e-4)


class TestWavefunction:
    def test_gaussian_normalized(self, squeezed_decomp):
        q = np.linspace(-10, 10, 4001)
        psi = wavefunction_pacs(squeezed_decomp, 1.3, StateSpec.coherent([0.7 - 0.3j]), q[:, None])
        assert np.trapezoid(np.abs(psi) ** 2, q) == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("spec", [StateSpec.pacs([1.0], [1]), StateSpec.pacs([0.4j], [3]), StateSpec.fock([2])])
    def test_pacs_normalized(self, squeezed_decomp, spec):
        q = np.linspace(-12, 12, 6001)
        psi = wavefunction_pacs(squeezed_decomp, 0.4, spec, q[:, None])
        assert np.trapezoid(np.abs(psi) ** 2, q) == pytest.approx(1.0, abs=1e-6)

    def test_first_excited_state(self, unit_decomp):
        q = np.linspace(-4, 4, 33)
        psi = wavefunction_pacs(unit_decomp, 0.0, StateSpec.fock([1]), q[:, None])
        np.testing.assert_allclose(np.abs(psi) ** 2, 2 / np.sqrt(np.pi) * q**2 * np.exp(-(q**2)), atol=1e-12)

    def test_positive_gaussian_phase(self, unit_decomp):
        psi = wavefunction_pacs(unit_decomp, 0.0, StateSpec.coherent([0.0]), np.zeros((1, 1)))
        assert psi[0].imag == pytest.approx(0, abs=1e-15) and psi[0].real > 0

    def test_pair_factorizes(self, pair_decomp):
        spec = StateSpec.pacs([0.5, -0.2j], [1, 2])
        rng = np.random.default_rng(5)
        q = rng.normal(size=(10, 2))
        from conftest import unit_config
        from floquet_pacs import build_flt

        single = build_flt(unit_config(1))
        t = 0.35
        joint = wavefunction_pacs(pair_decomp, t, spec, q)
        one = wavefunction_pacs(single, t, StateSpec.pacs([0.5], [1]), q[:, :1])
        two = wavefunction_pacs(single, t, StateSpec.pacs([-0.2j], [2]), q[:, 1:])
        np.testing.assert_allclose(np.abs(joint), np.abs(one * two), atol=1e-10)
        ratio = joint / (one * two)
        np.testing.assert_allclose(ratio, ratio[0], atol=1e-10)

    @pytest.mark.parametrize("t", [0.0, 1.3])
    def test_wigner_consistency(self, squeezed_decomp, t):
        spec = StateSpec.pacs([0.8 - 0.3j], [2])
        q = np.linspace(-3, 3, 13)
        p = np.linspace(-3, 3, 13)
        numeric = wigner_transform(squeezed_decomp, t, spec, q, p)
        x = np.stack(np.meshgrid(q, p, indexing="ij"), axis=-1)
        closed = wigner_values(squeezed_decomp, t, spec, x)
        assert np.abs(numeric - closed).max() <= 1e-6

    def test_mean_position(self, squeezed_decomp):
        spec = StateSpec.pacs([0.5 + 0.5j], [1])
        q = np.linspace(-12, 12, 6001)
        rho = np.abs(wavefunction_pacs(squeezed_decomp, 2.0, spec, q[:, None])) ** 2
        assert np.trapezoid(q * rho, q) == pytest.approx(mean_quadratures(squeezed_decomp, 2.0, spec)[0], abs=1e-6)
