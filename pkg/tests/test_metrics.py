"""Density reductions and the observables built from them.

Oracles: known concurrence values (Bell = 1, product = 0, Werner
p Bell + (1-p) I/4 has C = max(0, (3p-1)/2)), brute-force eigenvalues of the
spin-flip product matrix, and the decoupled-limit closed forms
S = sin^2(2 lam t)/2, C = C_l1 = |sin 2 lam t|.
"""

import math

import numpy as np
import pytest

from qce.dynamics import CouplingParams, evolve_state
from qce.errors import NumericalFaultError
from qce.field import FieldParams, cat_expansion
from qce.metrics import (
    SPIN_FLIP,
    QubitDensity,
    TwoQubitDensity,
    concurrence,
    cumulative_average,
    l1_coherence,
    linear_entropy,
    metrics_series,
    partial_trace_qubit1,
    qubit1_density,
    spin_flip_spectrum,
    two_qubit_density,
    wootters_values,
)

from conftest import SQRT2, random_coupling


def bell_density() -> TwoQubitDensity:
    psi = np.array([0.0, 1.0, 1.0, 0.0]) / SQRT2
    return TwoQubitDensity(np.outer(psi, psi.conj()))


def werner_density(p: float) -> TwoQubitDensity:
    return TwoQubitDensity(p * bell_density().matrix + (1.0 - p) * np.eye(4) / 4.0)


def brute_force_wootters(matrix: np.ndarray) -> float:
    """Independent concurrence via eigenvalues of rho (sy x sy) rho* (sy x sy)."""
    product = matrix @ SPIN_FLIP @ matrix.conj() @ SPIN_FLIP
    lams = np.sqrt(np.sort(np.abs(np.linalg.eigvals(product).real))[::-1])
    return max(0.0, lams[0] - lams[1] - lams[2] - lams[3])


class TestDensities:
    def test_initial_density(self, ref_expansion, unit_coupling):
        rho = two_qubit_density(evolve_state(ref_expansion, unit_coupling, 0.0))
        expected = np.zeros((4, 4))
        expected[1, 1] = 1.0
        np.testing.assert_allclose(rho.matrix, expected, atol=1e-12)

    def test_decoupled_pure_density(self):
        expansion = cat_expansion(FieldParams(3.0, 0.7, 0.4, 0.0, 0.3))
        cpl = CouplingParams(lam=1.0, g=0.0)
        state = evolve_state(expansion, cpl, math.pi / 4)
        rho = two_qubit_density(state)
        psi = np.array([0.0, 1.0 / SQRT2, -1j / SQRT2, 0.0])
        np.testing.assert_allclose(rho.matrix, np.outer(psi, psi.conj()), atol=1e-11)

    def test_trace_sweep_reference_params(self, ref_expansion, unit_coupling):
        for t in np.linspace(0.0, 100.0, 26):
            rho = two_qubit_density(evolve_state(ref_expansion, unit_coupling, float(t)))
            assert abs(np.trace(rho.matrix).real - 1.0) < 1e-9

    def test_qubit1_matches_partial_trace(self, ref_expansion, unit_coupling):
        rng = np.random.default_rng(41)
        for t in rng.uniform(0.0, 80.0, size=200):
            state = evolve_state(ref_expansion, unit_coupling, float(t))
            direct = qubit1_density(state)
            traced = partial_trace_qubit1(two_qubit_density(state))
            assert abs(direct.rho_ee - traced.rho_ee) < 1e-10
            assert abs(direct.rho_gg - traced.rho_gg) < 1e-10
            assert abs(direct.rho_eg - traced.rho_eg) < 1e-10

    def test_density_validity_random(self):
        rng = np.random.default_rng(43)
        for _ in range(200):
            params = FieldParams(
                alpha=float(rng.uniform(0.5, 4.0)),
                r=float(rng.uniform(0.0, 1.2)),
                theta=float(rng.uniform(0.0, 2 * math.pi)),
                phi=float(rng.uniform(0.0, 2 * math.pi)),
                c=float(rng.uniform(0.0, 1.0)),
            )
            expansion = cat_expansion(params)
            state = evolve_state(expansion, random_coupling(rng), float(rng.uniform(0.0, 40.0)))
            m = two_qubit_density(state).matrix  # construction validates
            assert np.max(np.abs(m - m.conj().T)) < 1e-12
            assert np.min(np.linalg.eigvalsh(m)) > -1e-10

    def test_invalid_densities_rejected(self):
        with pytest.raises(NumericalFaultError):
            TwoQubitDensity(np.eye(4))  # trace 4
        bad = np.eye(4) / 4.0
        bad[0, 1] = 0.5
        with pytest.raises(NumericalFaultError):
            TwoQubitDensity(bad)  # not Hermitian
        with pytest.raises(NumericalFaultError):
            QubitDensity(rho_ee=0.7, rho_gg=0.3, rho_eg=0.7 + 0.0j)  # coherence too large


class TestLinearEntropy:
    def test_pure_state(self):
        assert linear_entropy(QubitDensity(1.0, 0.0, 0.0j)) == 0.0

    def test_maximally_mixed(self):
        assert linear_entropy(QubitDensity(0.5, 0.5, 0.0j)) == pytest.approx(0.5, abs=1e-15)

    def test_matches_trace_form(self):
        rng = np.random.default_rng(47)
        for _ in range(100):
            ee = rng.uniform(0.0, 1.0)
            max_coh = math.sqrt(ee * (1 - ee))
            coh = rng.uniform(0, max_coh) * np.exp(1j * rng.uniform(0, 2 * math.pi))
            q = QubitDensity(ee, 1.0 - ee, complex(coh))
            direct = 1.0 - (q.rho_ee**2 + q.rho_gg**2 + 2.0 * abs(q.rho_eg) ** 2)
            assert linear_entropy(q) == pytest.approx(direct, abs=1e-12)

    def test_decoupled_half_entangled(self):
        expansion = cat_expansion(FieldParams(2.0, 0.3, 0.0, 0.0, 0.0))
        cpl = CouplingParams(lam=1.0, g=0.0)
        q = qubit1_density(evolve_state(expansion, cpl, math.pi / 4))
        assert linear_entropy(q) == pytest.approx(0.5, abs=1e-9)


class TestConcurrence:
    def test_bell_state(self):
        assert concurrence(bell_density()) == pytest.approx(1.0, abs=1e-12)

    def test_product_state(self):
        rho = TwoQubitDensity(np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex))
        assert concurrence(rho) == 0.0

    def test_werner_states(self):
        # closed form max(0, (3p-1)/2), cross-checked by brute-force eigenvalues
        for p in (0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0):
            rho = werner_density(p)
            expected = max(0.0, (3.0 * p - 1.0) / 2.0)
            assert concurrence(rho) == pytest.approx(expected, abs=1e-10)
            assert brute_force_wootters(rho.matrix) == pytest.approx(expected, abs=1e-7)

    def test_methods_agree_on_dynamics(self, ref_expansion, unit_coupling):
        for t in (0.7, 3.3, 11.0, 24.5):
            rho = two_qubit_density(evolve_state(ref_expansion, unit_coupling, t))
            svd_value = concurrence(rho, method="svd")
            poly_value = concurrence(rho, method="char-poly")
            brute = brute_force_wootters(rho.matrix)
            assert svd_value == pytest.approx(brute, abs=1e-7)
            assert poly_value == pytest.approx(brute, abs=1e-6)

    def test_spin_flip_spectrum_werner(self):
        # eigenvalues of M for Werner p: ((1+3p)/4)^2 and three ((1-p)/4)^2;
        # the triple root is only conditioned to ~eps^(1/3) through the
        # characteristic polynomial, hence the loose tolerance there
        spectrum = spin_flip_spectrum(werner_density(0.5))
        assert spectrum[0] == pytest.approx((5.0 / 8.0) ** 2, abs=1e-10)
        np.testing.assert_allclose(spectrum[1:], [(1.0 / 8.0) ** 2] * 3, atol=1e-5)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            concurrence(bell_density(), method="guess")


class TestL1Coherence:
    def test_diagonal(self):
        assert l1_coherence(TwoQubitDensity(np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex))) == 0.0

    def test_bell(self):
        assert l1_coherence(bell_density()) == pytest.approx(1.0, abs=1e-12)

    def test_matches_manifold_sums(self, ref_expansion, unit_coupling):
        # the six-sum expression is the upper triangle of the reduced density;
        # recompute it directly from the joint amplitudes
        for t in (0.9, 4.2, 17.0):
            state = evolve_state(ref_expansion, unit_coupling, t)
            w = ref_expansion.weights
            u, v, x, y = (w * state.amps[:, k] for k in range(4))
            six = (
                abs(np.sum(u[1:] * np.conj(v[:-1])))
                + abs(np.sum(u[1:] * np.conj(x[:-1])))
                + abs(np.sum(u[2:] * np.conj(y[:-2])))
                + abs(np.sum(v * np.conj(x)))
                + abs(np.sum(v[1:] * np.conj(y[:-1])))
                + abs(np.sum(x[1:] * np.conj(y[:-1])))
            )
            value = l1_coherence(two_qubit_density(state))
            assert value == pytest.approx(2.0 * six, abs=1e-9)


class TestMetricsSeries:
    def test_constant_cumulative_average(self):
        grid = np.linspace(0.0, 7.0, 141)
        values = np.full(grid.size, 0.3123)
        np.testing.assert_allclose(cumulative_average(grid, values), values, rtol=1e-13)

    def test_initial_values_zero(self, ref_expansion, unit_coupling, backend):
        series = metrics_series(
            ref_expansion, unit_coupling, np.linspace(0.0, 1.0, 21), backend=backend
        )
        assert series.entropy[0] == 0.0
        assert series.concurrence[0] == 0.0
        assert series.coherence_l1[0] == pytest.approx(0.0, abs=1e-12)
        assert series.inversion[0] == 1.0

    def test_decoupled_closed_forms(self, backend):
        expansion = cat_expansion(FieldParams(5.0, 1.0, 0.0, math.pi, 1.0 / SQRT2))
        cpl = CouplingParams(lam=1.0, g=0.0)
        grid = np.linspace(0.0, 4.0 * math.pi, 513)
        series = metrics_series(expansion, cpl, grid, backend=backend)
        target = np.abs(np.sin(2.0 * grid))
        assert np.max(np.abs(series.entropy - np.sin(2.0 * grid) ** 2 / 2.0)) < 1e-10
        assert np.max(np.abs(series.concurrence - target)) < 1e-10
        assert np.max(np.abs(series.coherence_l1 - target)) < 1e-10

    def test_decoupled_long_time_average(self):
        expansion = cat_expansion(FieldParams(2.0, 0.4, 0.0, 0.0, 0.2))
        cpl = CouplingParams(lam=1.0, g=0.0)
        grid = np.arange(0.0, 200.0 + 1e-9, 0.01)
        series = metrics_series(expansion, cpl, grid)
        # oracle: (1/T) int_0^T sin^2(2t)/2 dt = 1/4 - sin(4T)/(16T)
        expected = 0.25 - math.sin(4.0 * 200.0) / (16.0 * 200.0)
        assert series.cumulative_entropy[-1] == pytest.approx(expected, abs=1e-4)
        assert abs(series.cumulative_entropy[-1] - 0.25) < 1e-3

    def test_range_bounds(self, ref_expansion, unit_coupling):
        grid = np.arange(0.0, 30.0 + 1e-9, 0.05)
        series = metrics_series(ref_expansion, unit_coupling, grid)
        assert np.all(series.entropy >= 0.0) and np.all(series.entropy <= 0.5)
        assert np.all(series.concurrence >= 0.0) and np.all(series.concurrence <= 1.0)
        assert np.all(series.coherence_l1 >= 0.0)
        assert np.all(np.abs(series.inversion) <= 1.0)

    def test_sample_accessors(self, ref_expansion, unit_coupling):
        grid = np.linspace(0.0, 2.0, 11)
        series = metrics_series(ref_expansion, unit_coupling, grid)
        sample = series.sample(3)
        assert sample.time == grid[3]
        assert sample.entropy == series.entropy[3]
        assert len(series.samples) == grid.size

    def test_grid_validation(self, ref_expansion, unit_coupling):
        with pytest.raises(ValueError):
            metrics_series(ref_expansion, unit_coupling, np.array([0.5, 1.0]))
        with pytest.raises(ValueError):
            metrics_series(ref_expansion, unit_coupling, np.array([0.0, 1.0, 1.0]))

    def test_esd_zero_runs(self, unit_coupling):
        grid = np.arange(0.0, 50.0 + 1e-9, 0.05)
        measures = {}
        longest = {}
        for theta in (0.0, math.pi):
            expansion = cat_expansion(FieldParams(5.0, 1.0, theta, math.pi, 1.0 / SQRT2))
            series = metrics_series(expansion, unit_coupling, grid)
            zeros = series.concurrence == 0.0
            run = best = 0
            for flag in zeros:
                run = run + 1 if flag else 0
                best = max(best, run)
            measures[theta] = int(zeros.sum())
            longest[theta] = best
        assert longest[math.pi] >= 5
        assert measures[math.pi] > measures[0.0]
