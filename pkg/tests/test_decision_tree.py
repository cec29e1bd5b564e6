import numpy as np
import pytest

from prepost.decision_tree import (
    DecisionRun,
    FinalDensity,
    accumulate_final_density,
    enumerate_histories,
    overlap_scaling_experiment,
)
from prepost.errors import EnumerationCapError, ImpossiblePostSelectionError
from prepost.hilbert import (
    Operator,
    Projector,
    StateVector,
    basis_projector,
    basis_state,
    make_rng,
    random_state,
)
from prepost.two_boundary import (
    Measure,
    Schedule,
    TwoBoundaryProcess,
    basis_averaged_probabilities,
    computational_event,
)

SQRT2 = np.sqrt(2.0)


class TestAccumulateFinalDensity:
    def test_single_projector(self):
        out = accumulate_final_density([basis_projector(2, 0)], Operator(np.eye(2) / 2))
        np.testing.assert_allclose(out.rho.entries, [[1, 0], [0, 0]], atol=1e-12)

    def test_complete_set_is_identity_action(self):
        rng = make_rng(14)
        psi = random_state(3, rng)
        rho0 = Operator(np.outer(psi.amps, psi.amps.conj()))
        projs = computational_event(3).projectors
        out = accumulate_final_density(projs, rho0)
        np.testing.assert_allclose(out.rho.entries, rho0.entries, atol=1e-12)

    def test_overcomplete_pair_hand_oracle(self):
        # S = |0><0| + |+><+| = [[1.5, .5], [.5, .5]]; with rho0 = I/2 the
        # normalized S rho0 S+ is [[5/6, 1/3], [1/3, 1/6]] by direct 2x2
        # arithmetic.
        p0 = basis_projector(2, 0)
        plus = StateVector([1 / SQRT2, 1 / SQRT2])
        p_plus = Projector(np.outer(plus.amps, plus.amps.conj()))
        out = accumulate_final_density([p0, p_plus], Operator(np.eye(2) / 2))
        expected = np.array([[5 / 6, 1 / 3], [1 / 3, 1 / 6]])
        np.testing.assert_allclose(out.rho.entries, expected, atol=1e-12)

    def test_annihilating_decisions_raise(self):
        rho0 = Operator(np.outer([0, 1], [0, 1]))
        with pytest.raises(ImpossiblePostSelectionError, match="annihilate"):
            accumulate_final_density([basis_projector(2, 0)], rho0)

    def test_output_is_valid_density(self):
        rng = make_rng(6)
        psi = random_state(4, rng)
        rho0 = Operator(np.outer(psi.amps, psi.amps.conj()))
        projs = [basis_projector(4, 0), basis_projector(4, 2)]
        out = accumulate_final_density(projs, rho0)
        m = out.rho.entries
        assert abs(np.trace(m).real - 1.0) <= 1e-10
        assert np.abs(m - m.conj().T).max() <= 1e-10
        assert np.linalg.eigvalsh(m).min() >= -1e-10


class TestFinalDensityValidation:
    def test_rejects_trace_not_one(self):
        with pytest.raises(ValueError, match="trace"):
            FinalDensity(Operator(np.eye(2)))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError, match="semidefinite"):
            FinalDensity(Operator(np.diag([1.5, -0.5])))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            FinalDensity(Operator([[0.5, 0.5], [0.0, 0.5]]))


class TestEnumerateHistories:
    def test_two_measurements_single_certain_history(self):
        e0 = basis_state(2, 0)
        proc = TwoBoundaryProcess(
            e0,
            e0,
            Schedule([Measure(computational_event(2)), Measure(computational_event(2))]),
        )
        histories = enumerate_histories(proc)
        assert len(histories) == 4
        assert [h.outcomes for h in histories] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        probs = {h.outcomes: h.probability for h in histories}
        assert probs[(0, 0)] == pytest.approx(1.0)
        assert all(probs[o] == 0 for o in [(0, 1), (1, 0), (1, 1)])

    def test_final_average_recovers_even_split(self):
        plus = StateVector([1 / SQRT2, 1 / SQRT2])
        proc = TwoBoundaryProcess(
            plus, basis_state(2, 0), Schedule([Measure(computational_event(2))])
        )
        averaged = basis_averaged_probabilities(proc)
        np.testing.assert_allclose(averaged, [0.5, 0.5], atol=1e-12)

    def test_probabilities_sum_to_one_random(self):
        rng = make_rng(11)
        proc = TwoBoundaryProcess(
            random_state(4, rng),
            random_state(4, rng),
            Schedule(
                [Measure(computational_event(4)), Measure(computational_event(4))]
            ),
        )
        histories = enumerate_histories(proc)
        assert len(histories) == 16
        assert sum(h.probability for h in histories) == pytest.approx(1.0, abs=1e-10)

    def test_cap_error_names_required_cap(self):
        e0 = basis_state(2, 0)
        steps = [Measure(computational_event(2))] * 8
        proc = TwoBoundaryProcess(e0, e0, Schedule(steps))
        with pytest.raises(EnumerationCapError, match="cap=256"):
            enumerate_histories(proc, cap=100)

    def test_impossible_postselection(self):
        proc = TwoBoundaryProcess(
            basis_state(2, 0),
            basis_state(2, 1),
            Schedule([Measure(computational_event(2))]),
        )
        with pytest.raises(ImpossiblePostSelectionError):
            enumerate_histories(proc)


class TestOverlapScaling:
    def test_single_decision_is_half(self):
        res = overlap_scaling_experiment(DecisionRun(1, 2, make_rng(0)))
        assert np.exp(res.log_sq_overlaps[0]) == pytest.approx(0.5, abs=1e-12)

    def test_ten_decisions_exact_product(self):
        res = overlap_scaling_experiment(DecisionRun(10, 2, make_rng(5)))
        assert res.log_sq_overlaps[-1] == pytest.approx(10 * np.log(0.5), abs=1e-10)

    def test_fitted_decay_base(self):
        res = overlap_scaling_experiment(DecisionRun(20, 2, make_rng(5)))
        assert res.decay_base == pytest.approx(0.5, abs=1e-6)
        assert res.amplitude_decay_base == pytest.approx(1 / SQRT2, abs=1e-6)

    def test_each_decision_multiplies_by_half(self):
        res = overlap_scaling_experiment(DecisionRun(20, 2, make_rng(9)))
        steps = np.diff(res.log_sq_overlaps)
        np.testing.assert_allclose(steps, np.log(0.5), atol=1e-12)

    def test_branching_factor_sets_base(self):
        res = overlap_scaling_experiment(DecisionRun(12, 3, make_rng(2)))
        assert res.decay_base == pytest.approx(1 / 3, abs=1e-6)

    def test_run_validation(self):
        with pytest.raises(ValueError):
            DecisionRun(0, 2, make_rng(0))
        with pytest.raises(ValueError):
            DecisionRun(31, 2, make_rng(0))
        with pytest.raises(ValueError):
            DecisionRun(5, 1, make_rng(0))
