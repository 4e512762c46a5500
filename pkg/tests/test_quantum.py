import math
from functools import reduce

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridsim.dynamics import quantum as q
from hybridsim.physcore import DomainError

G = 2 * math.pi * 60.0


def qubit_chain_oracle(n_atoms: int, g: float) -> float:
    """Swap frequency from exact diagonalisation of N distinguishable qubits plus a mode.

    Built with plain Kronecker products in the full 2^N x 2 space (mode cut at
    one quantum), independent of the symmetric-sector operators under test.
    """
    sm = np.array([[0, 1], [0, 0]], complex)
    eye2 = np.eye(2)
    b = np.array([[0, 1], [0, 0]], complex)
    H = np.zeros((2 ** (n_atoms + 1),) * 2, complex)
    for j in range(n_atoms):
        ops = [eye2] * n_atoms
        ops[j] = sm
        s_j = reduce(np.kron, ops)
        H += g * (np.kron(s_j.conj().T, b) + np.kron(s_j, b.conj().T))
    psi0 = np.zeros(H.shape[0], complex)
    psi0[1] = 1.0  # all atoms in |0>, mode in |1>
    E, V = np.linalg.eigh(H)
    weight = np.abs(V.conj().T @ psi0) ** 2
    present = E[weight > 1e-12]
    return 0.5 * (present.max() - present.min())


class TestOperators:
    def test_dicke_matches_collective_sum(self):
        # J- on the symmetric ladder has the same spectrum of J+J- as the qubit sum
        n = 3
        J = q.dicke_lowering(n)
        np.testing.assert_allclose(np.diag(J.conj().T @ J).real, [0, 3, 4, 3])

    def test_destroy(self):
        a = q.destroy(4)
        np.testing.assert_allclose(np.diag(a.conj().T @ a).real, [0, 1, 2, 3])

    def test_thermal_populations(self):
        p = q.thermal_populations(1.0, 60)
        assert p.sum() == pytest.approx(1.0)
        assert np.dot(np.arange(60), p) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("n, dim", [(0.0, 20), (1.0, 20), (2.0, 24), (10.0, 88)])
    def test_auto_cutoff_rule(self, n, dim):
        assert q.auto_cutoff(n) == dim

    @given(st.floats(0.01, 10.0))
    def test_required_cutoff_holds_thermal_state(self, n):
        dim = q.required_cutoff(n)
        assert q.thermal_populations(n, dim)[-2:].sum() < 1e-6


class TestJaynesCummings:
    def test_swap_fidelity(self):
        space = q.Space.tls(4)
        state = q.QuantumState.from_levels(space, 0, mech_level=1)
        traj = q.evolve_quantum(state, q.EvolutionSpec(q.Hamiltonian.jaynes_cummings(G), math.pi / (2 * G)))
        fid = q.fidelity_pure(traj.final, q.basis_vector(space, 1, 0))
        assert fid > 1 - 1e-6

    def test_matches_matrix_exponential(self):
        space = q.Space.tls(6)
        state = q.QuantumState.from_levels(space, 0, mech_populations=q.thermal_populations(0.3, 6))
        H = q.Hamiltonian.jaynes_cummings(G, detuning=0.3 * G)
        t = 1.3 / G
        traj = q.evolve_quantum(state, q.EvolutionSpec(H, t), check_cutoff=False)
        ref = q.exact_evolution(state, H.matrix(space), t)
        np.testing.assert_allclose(traj.final.rho, ref.rho, atol=1e-9)

    def test_space_mismatch(self):
        with pytest.raises(DomainError):
            q.Hamiltonian.jaynes_cummings(G).matrix(q.Space.fock(3, 3))


class TestTavisCummings:
    @pytest.mark.parametrize("n_atoms", [1, 2, 3, 4])
    def test_sqrt_n_frequency(self, n_atoms):
        space = q.Space.dicke(n_atoms, 3)
        state = q.QuantumState.from_levels(space, 0, mech_level=1)
        T = math.pi / (2 * G * math.sqrt(n_atoms))
        traj = q.evolve_quantum(state, q.EvolutionSpec(q.Hamiltonian.tavis_cummings(G, n_atoms), T),
                                store_every=1, keep_states=True, check_cutoff=False)
        p = np.array([s.reshape(space.atom_dim, 3, space.atom_dim, 3)[0, 1, 0, 1].real
                      for s in traj.states])
        omega = q.rabi_frequency_from_population(traj.times, p)
        oracle = qubit_chain_oracle(n_atoms, G)
        assert oracle == pytest.approx(math.sqrt(n_atoms) * G, rel=1e-12)
        assert abs(omega / oracle - 1) < 1e-6

    def test_wrong_atom_number(self):
        with pytest.raises(DomainError):
            q.Hamiltonian.tavis_cummings(G, 3).matrix(q.Space.dicke(2, 3))


class TestOpenSystem:
    def test_thermalization_closed_form(self):
        gamma, n_th, cut = 1.0, 1.0, 30
        space = q.Space.tls(cut)
        state = q.QuantumState.from_levels(space, 0, mech_level=0)
        spec = q.EvolutionSpec(q.Hamiltonian.jaynes_cummings(0.0), 3.0,
                               dissipators=(q.Dissipator(gamma, "mech_decay", n_th),))
        traj = q.evolve_quantum(state, spec)
        expected = n_th * (1 - np.exp(-gamma * traj.times))
        assert np.max(np.abs(traj.n_mech - expected)) < 1e-4

    def test_invariants_every_step(self):
        space = q.Space.tls(8)
        state = q.QuantumState.from_levels(space, 1, mech_populations=q.thermal_populations(0.5, 8))
        spec = q.EvolutionSpec(q.Hamiltonian.jaynes_cummings(1.0), 2.0, dissipators=(
            q.Dissipator(0.2, "mech_decay", 0.2), q.Dissipator(0.3, "atom_dephase"),
            q.Dissipator(0.1, "atom_decay")))
        traj = q.evolve_quantum(state, spec, store_every=1, check_cutoff=False)
        n_steps, _ = spec.steps_and_dt(space)
        assert len(traj.times) == n_steps + 1
        assert np.max(np.abs(traj.trace - 1)) < 1e-10
        assert traj.min_eigenvalue.min() > -1e-10

    def test_closed_system_conserves(self):
        space = q.Space.dicke(3, 6)
        state = q.QuantumState.from_levels(space, 1, mech_level=2)
        traj = q.evolve_quantum(state, q.EvolutionSpec(q.Hamiltonian.tavis_cummings(1.0, 3), 3.0))
        assert np.max(np.abs(traj.excitation - 3)) < 1e-9
        assert np.max(np.abs(traj.purity - 1)) < 1e-9

    def test_dephasing_kills_coherence_only(self):
        space = q.Space.tls(2)
        plus = np.zeros(4, complex)
        plus[[0, 2]] = 1 / math.sqrt(2)
        state = q.QuantumState(np.outer(plus, plus.conj()), space)
        spec = q.EvolutionSpec(q.Hamiltonian.jaynes_cummings(0.0), 1.0,
                               dissipators=(q.Dissipator(0.5, "atom_dephase"),))
        rho = q.evolve_quantum(state, spec, check_cutoff=False).final.rho
        assert rho[0, 2] == pytest.approx(0.5 * math.exp(-0.5), rel=1e-8)
        assert rho[2, 2].real == pytest.approx(0.5)

    def test_cutoff_error(self):
        space = q.Space.tls(6)
        state = q.QuantumState.from_levels(space, 0, mech_level=0)
        spec = q.EvolutionSpec(q.Hamiltonian.jaynes_cummings(0.0), 5.0,
                               dissipators=(q.Dissipator(1.0, "mech_decay", 3.0),))
        with pytest.raises(q.CutoffError) as info:
            q.evolve_quantum(state, spec)
        assert info.value.required_cutoff > 6

    def test_step_refused(self):
        with pytest.raises(DomainError, match="exceeds"):
            q.EvolutionSpec(q.Hamiltonian.jaynes_cummings(100.0), 1.0, step=1e-3)

    def test_invalid_state_rejected(self):
        space = q.Space.tls(2)
        bad = q.QuantumState(np.diag([1.2, -0.2, 0, 0]).astype(complex), space)
        with pytest.raises(FloatingPointError):
            bad.check()


class TestSwapCool:
    def test_fock_one(self):
        res = q.swap_cool([0.0, 1.0], G)
        assert res.transfer_fidelity > 1 - 1e-6
        assert res.n_after < 1e-6

    def test_thermal_against_expm(self):
        pops = q.thermal_populations(0.5, 20)
        res = q.swap_cool(pops, G)
        space = q.Space.tls(20)
        state = q.QuantumState.from_levels(space, 0, mech_populations=pops)
        ref = q.exact_evolution(state, q.Hamiltonian.jaynes_cummings(G).matrix(space), res.duration)
        assert res.n_after == pytest.approx(ref.expect(space.mech_number()), abs=1e-9)
        # the one-phonon component swaps completely; higher ones only partly
        assert res.n_before - res.n_after >= pops[1] - 1e-9

    def test_overdamped_swap_ineffective(self):
        pops = [0.0, 1.0]
        res = q.swap_cool(pops, 1.0, atom_dephasing=200.0, mech_dim=4)
        assert res.n_before - res.n_after < 0.1

    def test_collective_faster(self):
        r1 = q.swap_cool([0.0, 1.0], G)
        r4 = q.swap_cool([0.0, 1.0], G, n_atoms=4)
        assert r4.duration == pytest.approx(r1.duration / 2)
        assert r4.transfer_fidelity > 1 - 1e-6

    def test_populations_validated(self):
        with pytest.raises(DomainError):
            q.swap_cool([0.5, 0.4], G)
        with pytest.raises(DomainError):
            q.swap_cool([0.0, 1.0], 0.0)

    def test_deterministic(self):
        a = q.swap_cool(q.thermal_populations(0.3, 10), G).trajectory.to_csv()
        b = q.swap_cool(q.thermal_populations(0.3, 10), G).trajectory.to_csv()
        assert a == b


class TestSympatheticCooling:
    def test_rate_within_ten_percent(self, cooling_crosscheck):
        assert cooling_crosscheck.relative_error < 0.10

    def test_steady_state_below_bath(self, cooling_crosscheck):
        assert cooling_crosscheck.steady_state < 0.5

    def test_no_coupling_gives_bare_damping(self):
        r = q.sympathetic_cooling_crosscheck(0.0, 1, 1.0, 0.05, 0.5, duration=40.0)
        assert r.fitted_rate == pytest.approx(0.05, rel=0.02)

    def test_doubling_atoms_doubles_cold_damping(self):
        r1 = q.sympathetic_cooling_crosscheck(0.03, 1, 1.0, 0.0, 0.0, duration=400.0, mech_dim=5,
                                              initial_mech_level=2)
        r2 = q.sympathetic_cooling_crosscheck(0.03, 2, 1.0, 0.0, 0.0, duration=200.0, mech_dim=5,
                                              initial_mech_level=2)
        assert r2.fitted_rate / r1.fitted_rate == pytest.approx(2.0, rel=0.05)

    def test_strong_coupling_refused(self):
        with pytest.raises(DomainError, match="weak-coupling"):
            q.sympathetic_cooling_crosscheck(0.3, 1, 1.0, 0.001, 0.5)
