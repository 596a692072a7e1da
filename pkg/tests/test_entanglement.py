import math

import numpy as np
import pytest

from dicke_lmg.checks import (pair_reduction_bruteforce, random_product_state,
                              random_symmetric_state)
from dicke_lmg.entanglement import (cw_of_ground, entropy_of_entanglement,
                                    entropy_of_ground, reduce_to_two_qubits,
                                    trace_out_field, wootters_concurrence)
from dicke_lmg.model import DickeBasis, ModelParams, PureState
from dicke_lmg.rwa import first_nonvacuum_state


def _w_state(n_atoms: int) -> PureState:
    """Vacuum field times the single-excitation symmetric (W) state."""
    return PureState(np.array([1.0]), ((0, 1.0 - n_atoms / 2.0),), n_atoms)


def _density_checks(rho: np.ndarray):
    assert np.abs(rho - rho.T.conj()).max() < 1e-12
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


class TestTraceOutField:
    def test_product_state_is_pure(self):
        state = _w_state(4)
        rho = trace_out_field(state)
        _density_checks(rho)
        assert np.abs(rho @ rho - rho).max() < 1e-12

    def test_entangled_state_mixes(self):
        # (|0>|m=-1/2> + |1>|m=-3/2>)/sqrt(2): photon number marks the branch
        state = PureState(np.array([1.0, 1.0]) / math.sqrt(2),
                          ((0, -0.5), (1, -1.5)), n_atoms=3)
        rho = trace_out_field(state)
        _density_checks(rho)
        basis = DickeBasis(3)
        expected = np.zeros((4, 4))
        expected[basis.index_of(-0.5), basis.index_of(-0.5)] = 0.5
        expected[basis.index_of(-1.5), basis.index_of(-1.5)] = 0.5
        assert np.abs(rho - expected).max() < 1e-14

    def test_coherences_kept_within_a_photon_sector(self):
        state = PureState(np.array([0.6, 0.8]), ((2, -0.5), (2, 0.5)), n_atoms=3)
        rho = trace_out_field(state)
        basis = DickeBasis(3)
        assert rho[basis.index_of(-0.5), basis.index_of(0.5)] == pytest.approx(
            0.48, abs=1e-14)


class TestEntropy:
    def test_known_values(self):
        assert entropy_of_entanglement(np.eye(2) / 2) == pytest.approx(1.0,
                                                                       abs=1e-12)
        assert entropy_of_entanglement(np.eye(4) / 4) == pytest.approx(2.0,
                                                                       abs=1e-12)
        pure = np.zeros((3, 3))
        pure[0, 0] = 1.0
        assert entropy_of_entanglement(pure) == pytest.approx(0.0, abs=1e-12)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError):
            entropy_of_entanglement(np.diag([1.5, -0.5]))

    def test_equal_branch_state_gives_one_bit(self):
        params = ModelParams(omega_f=1.0, delta=0.0, eta=0.0, lam=1.0, n_atoms=5)
        # h = -1: equal superposition of two orthogonal branches
        assert entropy_of_ground(first_nonvacuum_state(params)) == pytest.approx(
            1.0, abs=1e-12)


class TestPairReduction:
    def test_matches_bruteforce_on_random_states(self):
        rng = np.random.default_rng(0)
        for na in range(2, 9):
            for _ in range(10):
                state = random_product_state(rng, na, n_cut=2)
                mine = reduce_to_two_qubits(trace_out_field(state), na)
                brute = pair_reduction_bruteforce(state, na)
                assert np.abs(mine - brute).max() < 1e-12

    def test_pair_choice_is_irrelevant_for_symmetric_states(self):
        rng = np.random.default_rng(1)
        state = random_product_state(rng, 5, n_cut=1)
        base = pair_reduction_bruteforce(state, 5, pair=(0, 1))
        for pair in ((0, 3), (2, 4), (1, 2)):
            other = pair_reduction_bruteforce(state, 5, pair=pair)
            assert np.abs(base - other).max() < 1e-12

    def test_output_is_swap_symmetric_density_matrix(self):
        rng = np.random.default_rng(2)
        state = random_symmetric_state(rng, 6)
        rho2 = reduce_to_two_qubits(trace_out_field(state), 6)
        _density_checks(rho2)
        swap = np.eye(4)[[0, 2, 1, 3]]
        assert np.abs(swap @ rho2 @ swap - rho2).max() < 1e-14

    def test_all_down_reduces_to_00(self):
        rho = np.zeros((5, 5))
        rho[0, 0] = 1.0
        rho2 = reduce_to_two_qubits(rho, 4)
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        assert np.abs(rho2 - expected).max() < 1e-14

    def test_requires_at_least_two_qubits(self):
        with pytest.raises(ValueError):
            reduce_to_two_qubits(np.eye(2) / 2, 1)


class TestConcurrence:
    def test_bell_state(self):
        psi = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2)
        assert wootters_concurrence(np.outer(psi, psi)) == pytest.approx(
            1.0, abs=1e-12)

    def test_separable_states_vanish(self):
        assert wootters_concurrence(np.eye(4) / 4) == pytest.approx(0.0,
                                                                    abs=1e-12)
        psi = np.zeros(4)
        psi[0] = 1.0
        assert wootters_concurrence(np.outer(psi, psi)) == pytest.approx(
            0.0, abs=1e-12)

    def test_w_state_pair_concurrence_is_two_over_n(self):
        for na in (3, 4, 5, 6, 8):
            assert cw_of_ground(_w_state(na)) == pytest.approx(2.0 / na,
                                                               abs=1e-12)

    def test_sharing_bound_for_symmetric_states(self):
        rng = np.random.default_rng(42)
        for na in range(2, 9):
            for _ in range(100):
                state = random_symmetric_state(rng, na)
                c = cw_of_ground(state)
                assert c <= 2.0 / na + 1e-10

    def test_invalid_shape_rejected(self):
        with pytest.raises(ValueError):
            wootters_concurrence(np.eye(3) / 3)
