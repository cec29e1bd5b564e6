import math

import numpy as np
import pytest

from prepost.gedanken import (
    EllipsoidConfig,
    HbtConfig,
    WitnessConfig,
    cat_witness_coherence,
    ellipsoid_experiment,
    hbt_rate,
    stern_gerlach_recombine,
)
from prepost.hilbert import StateVector, basis_state, make_rng, random_state

SQRT2 = np.sqrt(2.0)


class TestHbtRate:
    def test_unit_amplitudes_bosons(self):
        assert hbt_rate(HbtConfig(1, 1, 1, 1, "boson")) == pytest.approx(4.0)

    def test_unit_amplitudes_fermions(self):
        assert hbt_rate(HbtConfig(1, 1, 1, 1, "fermion")) == 0.0

    def test_phase_sweep(self):
        for phi in np.linspace(0, 2 * math.pi, 17):
            cfg = HbtConfig(1.0, np.exp(1j * phi), 1.0, 1.0, "boson")
            assert hbt_rate(cfg) == pytest.approx(2 + 2 * math.cos(phi), abs=1e-12)

    def test_statistics_sum_rule(self):
        # boson + fermion rates add to twice the two classical pairings
        rng = make_rng(20)
        for _ in range(20):
            a = rng.standard_normal(8)
            a13, a14, a23, a24 = (complex(a[i], a[i + 1]) for i in range(0, 8, 2))
            boson = hbt_rate(HbtConfig(a13, a14, a23, a24, "boson"))
            fermion = hbt_rate(HbtConfig(a13, a14, a23, a24, "fermion"))
            classical = 2 * (abs(a13 * a24) ** 2 + abs(a14 * a23) ** 2)
            assert boson + fermion == pytest.approx(classical, rel=1e-12)

    def test_bad_statistics(self):
        with pytest.raises(ValueError):
            HbtConfig(1, 1, 1, 1, "anyon")


class TestEllipsoid:
    def test_open_mirror_fully_constructive(self):
        cfg = EllipsoidConfig(2.0, 1.0, 40.0, 4096, (), 0.0)
        res = ellipsoid_experiment(cfg)
        assert res.total_rate / res.rate_direct == pytest.approx(2.0, abs=1e-6)

    def test_open_mirror_pi_phase_destructive(self):
        cfg = EllipsoidConfig(2.0, 1.0, 40.0, 4096, (), math.pi)
        res = ellipsoid_experiment(cfg)
        assert res.total_rate / res.rate_direct == pytest.approx(0.0, abs=1e-6)

    def test_equal_path_lengths_hold_at_large_wavenumber(self):
        # any spread in bounce path lengths would scramble phases at k=5000
        cfg = EllipsoidConfig(2.0, 1.0, 5000.0, 4096, (), 0.0)
        res = ellipsoid_experiment(cfg)
        assert res.total_rate / res.rate_direct == pytest.approx(2.0, abs=1e-6)

    def test_fully_dark_mirror(self):
        cfg = EllipsoidConfig(2.0, 1.0, 40.0, 4096, ((0.0, 1.0),), 0.9)
        res = ellipsoid_experiment(cfg)
        assert res.rate_interference == 0.0
        assert res.emission_probability_shift == 0.0

    @pytest.mark.parametrize("f", [0.0, 0.25, 0.5, 1.0])
    @pytest.mark.parametrize("phi", [0.0, math.pi / 2, math.pi])
    def test_analytic_law(self, f, phi):
        arcs = ((0.0, f),) if f > 0 else ()
        cfg = EllipsoidConfig(2.0, 1.0, 40.0, 4096, arcs, phi)
        res = ellipsoid_experiment(cfg)
        law = 1.0 + (1.0 - f) * math.cos(phi)
        assert res.total_rate / res.rate_direct == pytest.approx(law, abs=1e-3)

    def test_shift_linear_in_open_fraction(self):
        # symmetric dark spots of growing size: shift/(1-f) stays constant;
        # these fractions align with the 4096-point grid, so counts are exact
        ratios = []
        for f in (0.25, 0.5, 0.75):
            arcs = ((0.5 - f / 2, 0.5 + f / 2),)
            cfg = EllipsoidConfig(3.0, 1.5, 25.0, 4096, arcs, 0.7)
            res = ellipsoid_experiment(cfg)
            ratios.append(res.emission_probability_shift / (1.0 - f))
        assert max(ratios) - min(ratios) <= 1e-6
        assert ratios[0] == pytest.approx(math.cos(0.7), abs=1e-6)

    def test_shift_linear_off_grid_within_quantization(self):
        # arbitrary arc endpoints quantize to the surface grid: error <= 1/n
        for f in (0.2, 0.4, 0.6):
            arcs = ((0.5 - f / 2, 0.5 + f / 2),)
            cfg = EllipsoidConfig(3.0, 1.5, 25.0, 4096, arcs, 0.7)
            res = ellipsoid_experiment(cfg)
            expected = (1.0 - f) * math.cos(0.7)
            assert res.emission_probability_shift == pytest.approx(expected, abs=1e-3)

    def test_inverse_r_weighting_stays_close(self):
        cfg = EllipsoidConfig(2.0, 1.0, 40.0, 4096, (), 0.0, inverse_r_weighting=True)
        res = ellipsoid_experiment(cfg)
        # amplitude reweighting moves nothing at f=0 (weights have unit mean)
        assert res.total_rate / res.rate_direct == pytest.approx(2.0, abs=1e-6)

    def test_degenerate_ellipse_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            EllipsoidConfig(1.0, 1.0, 40.0, 4096)
        with pytest.raises(ValueError, match="degenerate"):
            EllipsoidConfig(2.0, -1.0, 40.0, 4096)

    def test_surface_resolution_floor(self):
        with pytest.raises(ValueError, match="n_surface"):
            EllipsoidConfig(2.0, 1.0, 40.0, 32)

    def test_overlapping_arcs_rejected(self):
        with pytest.raises(ValueError, match="overlap"):
            EllipsoidConfig(2.0, 1.0, 40.0, 4096, ((0.0, 0.5), (0.4, 0.6)))


class TestSternGerlach:
    def test_sideways_input_no_witness(self):
        res = stern_gerlach_recombine(StateVector([1 / SQRT2, 1 / SQRT2]), False)
        assert res.return_fidelity == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(
            res.output_state.amps, [1 / SQRT2, 1 / SQRT2], atol=1e-12
        )

    def test_basis_input_both_modes(self):
        e0 = basis_state(2, 0)
        assert stern_gerlach_recombine(e0, False).return_fidelity == pytest.approx(
            1.0, abs=1e-12
        )
        res = stern_gerlach_recombine(e0, True, witness_overlap=0.0)
        assert res.return_fidelity == pytest.approx(1.0, abs=1e-12)

    def test_random_inputs_return_exactly(self):
        rng = make_rng(44)
        for _ in range(50):
            psi = random_state(2, rng)
            res = stern_gerlach_recombine(psi, False)
            assert abs(res.return_fidelity - 1.0) <= 1e-12

    def test_orthogonal_witness_halves_fidelity(self):
        psi = StateVector([1 / SQRT2, 1 / SQRT2])
        res = stern_gerlach_recombine(psi, True, witness_overlap=0.0)
        assert res.return_fidelity == pytest.approx(0.5, abs=1e-12)
        assert res.output_state is None

    def test_witnessed_fidelity_hand_oracle(self):
        # oracle: 4-dim spin (x) witness state built by hand, manual block
        # partial trace, fidelity against the input
        c = 0.4 * np.exp(1j * 0.9)
        alpha, beta = 0.6, 0.8
        psi = StateVector([alpha, beta])
        w0 = np.array([1.0, 0.0], dtype=complex)
        w1 = np.array([c, math.sqrt(1 - abs(c) ** 2)], dtype=complex)
        joint = alpha * np.kron([1, 0], w0) + beta * np.kron([0, 1], w1)
        rho4 = np.outer(joint, joint.conj())
        reduced = np.zeros((2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                reduced[i, j] = rho4[2 * i, 2 * j] + rho4[2 * i + 1, 2 * j + 1]
        oracle = np.vdot(psi.amps, reduced @ psi.amps).real

        res = stern_gerlach_recombine(psi, True, witness_overlap=c)
        assert res.return_fidelity == pytest.approx(oracle, abs=1e-12)

    def test_unnormalized_input_rejected(self):
        with pytest.raises(ValueError, match="normalized"):
            stern_gerlach_recombine(StateVector([1.0, 1.0]), False)

    def test_wrong_dimension_rejected(self):
        with pytest.raises(ValueError, match="2-dimensional"):
            stern_gerlach_recombine(basis_state(3, 0), False)


class TestCatWitness:
    def test_perfect_insulation(self):
        assert cat_witness_coherence(WitnessConfig(1.0)) == pytest.approx(1.0, abs=1e-12)

    def test_escaped_witness(self):
        assert cat_witness_coherence(WitnessConfig(0.0)) == 0.0

    def test_partial_complex_overlap(self):
        c = 0.3 * np.exp(1j * math.pi / 4)
        assert cat_witness_coherence(WitnessConfig(c)) == pytest.approx(0.3, abs=1e-12)

    def test_tracks_magnitude_over_grid(self):
        for mag in np.linspace(0.0, 1.0, 11):
            for phase in (0.0, 1.0, -2.0):
                c = mag * np.exp(1j * phase)
                out = cat_witness_coherence(WitnessConfig(c))
                assert out == pytest.approx(mag, abs=1e-12)

    def test_overlap_bound_enforced(self):
        with pytest.raises(ValueError):
            WitnessConfig(1.5)
