import csv
import io
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridsim import coupling as cp
from hybridsim.physcore import DomainError, Environment, OscillatorSpec, TrapSpec, species
from hybridsim.potentials import casimir_polder, custom_power_law

RB = species("Rb87")
W = 2 * math.pi * 1e4
C4 = 1.7844e-55


def make_pair(beta=1.0, d=1e-6, n_atoms=1, T=0.0, gamma_a=0.0, w=W, wm=W):
    return cp.CoupledPair(
        atom=RB, trap=TrapSpec(w), oscillator=OscillatorSpec(1e-14, wm, 1e5),
        potential=casimir_polder(C4, beta), equilibrium_distance=d,
        environment=Environment(T), atomic_decoherence=gamma_a, n_atoms=n_atoms,
    )


class TestPair:
    def test_distance_outside_range(self):
        with pytest.raises(DomainError, match="valid range"):
            make_pair(d=1e-9)

    @pytest.mark.parametrize("kw", [dict(n_atoms=0), dict(gamma_a=-1.0)])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            make_pair(**kw)


class TestEpsilon:
    def test_matches_definition(self):
        pair = make_pair(beta=20.0, d=1e-6)
        k = -20 * 20 * C4 / 1e-6**6
        assert pair.curvature() == pytest.approx(k)
        assert cp.coupling_strength_parameter(pair) == pytest.approx(k / (RB.mass * W**2 + k))

    def test_negative_for_attraction(self):
        assert cp.coupling_strength_parameter(make_pair(beta=100.0)) < 0

    def test_effective_frequency(self):
        pair = make_pair(beta=20.0)
        wa, _ = cp.effective_frequencies(pair)
        assert wa**2 == pytest.approx(W**2 + pair.curvature() / RB.mass)

    def test_trap_vanishes(self):
        # curvature exceeds m w^2 at 300 nm for beta = 1000
        pair = make_pair(beta=1000.0, d=3e-7)
        with pytest.raises(cp.TrapVanishedError) as info:
            cp.budget(pair)
        assert info.value.critical_curvature == pytest.approx(RB.mass * W**2)

    @given(st.floats(-0.9, 0.9).filter(lambda x: abs(x) > 1e-6))
    def test_epsilon_inverts(self, eps):
        # eps = k / (m w0^2 + k)  <=>  k = eps m w0^2 / (1 - eps)
        k = eps * RB.mass * W**2 / (1 - eps)
        assert cp.epsilon_from_curvature(k, RB.mass, W) == pytest.approx(eps, rel=1e-12)


class TestShifts:
    def test_signs_and_values(self):
        pair = make_pair(beta=20.0)
        grad = pair.potential.derivative(1, 1e-6)
        dza, dzm = cp.equilibrium_shifts(pair)
        assert dza == pytest.approx(grad / (RB.mass * W**2))
        assert dzm == pytest.approx(-grad / (1e-14 * W**2))
        assert dza * dzm < 0


class TestRate:
    def test_resonant_formula(self):
        g = cp.coupling_rate(0.5, W, W, 1.0, 4.0)
        assert g == pytest.approx(0.5 * W / 2 * 0.5)

    def test_detuned_prefactor(self):
        g_res = cp.coupling_rate(0.5, W, W, 1.0, 4.0)
        g_det = cp.coupling_rate(0.5, W, W / 4, 1.0, 4.0)
        assert g_det / g_res == pytest.approx(2.0)

    def test_collective_sqrt_n(self):
        b1 = cp.budget(make_pair(beta=20.0))
        b9 = cp.budget(make_pair(beta=20.0, n_atoms=9))
        assert b9.gN == pytest.approx(3 * b1.gN)
        assert b9.g0 == pytest.approx(b1.g0)

    def test_anharmonic_small_amplitude(self):
        pair = make_pair(beta=20.0)
        wa, _ = cp.effective_frequencies(pair)
        assert cp.anharmonic_frequency(pair, 0.0) == pytest.approx(wa)
        assert cp.anharmonic_frequency(pair, 1e-8) < wa
        with pytest.raises(DomainError):
            cp.anharmonic_frequency(pair, -1.0)


class TestBudget:
    @pytest.mark.parametrize("gN, gm, ga, expected", [
        (10.0, 1.0, 1.0, True),
        (10.0, 11.0, 1.0, False),
        (10.0, 1.0, 10.0, False),
        (-10.0, 1.0, 1.0, True),
    ])
    def test_verdict(self, gN, gm, ga, expected):
        assert cp.strong_coupling_verdict(gN, gm, ga) is expected

    def test_fields(self):
        b = cp.budget(make_pair(beta=20.0, T=4.0, gamma_a=2.0))
        assert b.gamma_m_dec == pytest.approx(1.380649e-23 * 4 / (1.054571817e-34 * 1e5))
        assert b.gamma_a_dec == 2.0
        assert b.detuning == pytest.approx(b.effective_omega_a - b.effective_omega_m)

    def test_exports(self):
        b = cp.budget(make_pair(beta=20.0, T=1.0))
        row = json.loads(b.to_json())
        assert list(row) == list(cp.BUDGET_FIELDS)
        parsed = list(csv.DictReader(io.StringIO(b.to_csv())))
        assert float(parsed[0]["g0_hz"]) == pytest.approx(row["g0_hz"])

    def test_assemble_rejects_zero_atoms(self):
        with pytest.raises(DomainError):
            cp.assemble_budget(g0=1.0, oscillator=OscillatorSpec(1.0, 1.0, 1.0),
                               environment=Environment(0.0), gamma_a_dec=0.0, n_atoms=0)

    def test_custom_potential(self):
        pair = cp.CoupledPair(RB, TrapSpec(W), OscillatorSpec(1e-14, W, 1e5),
                              custom_power_law(-1e-41, 2.0), 1e-6)
        b = cp.budget(pair)
        assert b.epsilon == pytest.approx(cp.epsilon_from_curvature(-6e-41 / 1e-6**4, RB.mass, W))
