"""Scheme calculators against closed forms rebuilt from scipy constants."""

import math

import pytest
import scipy.constants as sc

from hybridsim import schemes
from hybridsim.checks import judge
from hybridsim.config import find_preset, load
from hybridsim.physcore import DomainError, species
from hybridsim.schemes import bec_surface, cnt, ion, lattice, magnetic

MU_B = sc.physical_constants["Bohr magneton"][0]


def preset(name):
    sc_ = load(find_preset(name))
    return sc_, schemes.evaluate(sc_.scheme, sc_.params).flat()


class TestIon:
    def test_voltage_closed_form(self):
        _, q = preset("ion_be9")
        m, w, d, r = species("Be9+").mass, 2 * math.pi * 70e6, 10e-6, 100e-9
        # eps = e q / (2 pi eps0 d^3 m w^2) with q = 4 pi eps0 r V
        assert q["required_voltage_v"] == pytest.approx(m * w**2 * d**3 / (2 * sc.e * r), rel=1e-9)

    def test_g0_closed_form(self):
        _, q = preset("ion_be9")
        m, w = species("Be9+").mass, 2 * math.pi * 70e6
        eps = 2 * sc.e * 100e-9 * 90.0 / (10e-6**3 * m * w**2)
        assert q["abs_epsilon"] == pytest.approx(eps, rel=1e-6)
        assert q["abs_g0_hz"] == pytest.approx(eps * w / 2 * math.sqrt(m / 1e-15) / (2 * math.pi), rel=1e-6)

    def test_shift_half_distance(self):
        _, q = preset("ion_be9")
        assert abs(q["delta_z_a_over_d"]) == pytest.approx(0.5, rel=0.01)

    def test_neutral_species_rejected(self):
        sc_ = load(find_preset("ion_be9"))
        p = dict(sc_.params, species="Rb87")
        with pytest.raises(DomainError, match="no charge"):
            schemes.evaluate("ion", p)

    def test_sphere_charge(self):
        assert ion.sphere_charge(90.0, 1e-7) == pytest.approx(4 * math.pi * sc.epsilon_0 * 1e-7 * 90)


class TestBecSurface:
    def test_tof_formula(self):
        m, w = species("Rb87").mass, 2 * math.pi * 100
        expected = math.sqrt(2 * sc.hbar * w / (m * 100)) * 4e-3
        assert bec_surface.tof_detection_amplitude(100, w, 1.0, 4e-3, m) == pytest.approx(expected)
        assert expected == pytest.approx(383.3e-9, rel=1e-3)

    @pytest.mark.parametrize("args", [(0, 1.0, 1.0, 1.0, 1.0), (1, 1.0, -1.0, 1.0, 1.0)])
    def test_tof_domain(self, args):
        with pytest.raises(DomainError):
            bec_surface.tof_detection_amplitude(*args)

    def test_thermal_amplitude(self):
        _, q = preset("bec_cantilever")
        expected = math.sqrt(sc.k * 300 / (5e-12 * (2 * math.pi * 1e4) ** 2))
        assert q["a_th_m"] == pytest.approx(expected, rel=1e-9)

    def test_epsilon_matches_retuned_closed_form(self):
        _, q = preset("bec_cantilever")
        m, w = species("Rb87").mass, 2 * math.pi * 1e4
        c4 = 1.784382546556869e-55
        assert q["abs_epsilon"] == pytest.approx(20 * 200 * c4 / (m * w**2 * q["distance_m"] ** 6), rel=1e-6)
        assert q["U0_over_hbar_omega"] == pytest.approx(8.0, rel=1e-8)


class TestCnt:
    def test_scaled_tube(self):
        m, w = cnt.scaled_tube(1e-6, 1e-21, 1e6, 2e-6)
        assert m == pytest.approx(2e-21)
        assert w == pytest.approx(0.25e6)
        with pytest.raises(DomainError):
            cnt.scaled_tube(0.0, 1.0, 1.0, 1.0)

    def test_amplitudes(self):
        _, q = preset("cnt_collective")
        M, w = q["effective_mass_kg"], 2 * math.pi * q["omega_m_hz"]
        assert q["b_th_room_m"] == pytest.approx(math.sqrt(sc.k * 300 / (M * w**2)), rel=1e-9)
        assert q["b_qm_m"] == pytest.approx(math.sqrt(sc.hbar / (2 * M * w)), rel=1e-9)

    def test_collective_enhancement(self):
        sc_, q = preset("cnt_collective")
        n = sc_.params["n_atoms"]
        assert q["gN_hz"] / q["g0_hz"] == pytest.approx(math.sqrt(n), rel=1e-12)

    def test_single_atom_strong_coupling(self):
        _, q = preset("cnt_single")
        assert q["strong_coupling"] is True


class TestLattice:
    def test_rate_equations(self):
        sc_, q = preset("lattice_membrane")
        R = sc_.params["oscillator"]["power_reflectivity"]
        gamma_c = sc_.params["atom_cooling_rate_hz"]
        # in Hz units the 2 pi factors cancel in 4 R g^2 / gamma
        assert q["Gamma_m_hz"] == pytest.approx(q["gamma_m_hz"] + 4 * R * q["abs_gN_hz"] ** 2 / gamma_c,
                                                rel=1e-9)
        assert q["cooling_factor"] == pytest.approx(q["Gamma_m_hz"] / q["gamma_m_hz"], rel=1e-12)
        assert q["gm_over_gN"] == R

    def test_backaction(self):
        dP, F = lattice.lattice_backaction(1e-20, 0.3)
        assert dP == pytest.approx(1e-20 * sc.c / 2)
        assert F == pytest.approx(-0.3 * 1e-20)
        with pytest.raises(DomainError):
            lattice.lattice_backaction(1.0, 2.0)

    @pytest.mark.parametrize("R", [0.0, 0.1, 0.3, 1.0])
    def test_ratio_equals_reflectivity(self, R):
        sc_ = load(find_preset("lattice_membrane"))
        p = dict(sc_.params)
        p["oscillator"] = dict(p["oscillator"], power_reflectivity=R)
        q = schemes.evaluate("lattice", p).flat()
        # "exact" means equal up to float round-off
        assert judge(q["gm_over_gN"], R, "exact")


class TestMagnetic:
    def test_g0_from_geometry(self):
        _, q = preset("magnetic_rb87")
        vol = 250e-9 * 50e-9 * 80e-9
        G = 3 * sc.mu_0 * 1.4e6 * vol / (4 * math.pi * 250e-9**4)
        M = 0.243 * 2330 * 8e-6 * 0.3e-6 * 0.05e-6 + 8900 * vol
        w = 2 * math.pi * 2.8e6
        g0 = MU_B * 0.5 * (1 / math.sqrt(2)) * G * math.sqrt(sc.hbar / (2 * M * w)) / sc.hbar
        assert q["abs_g0_hz"] == pytest.approx(g0 / (2 * math.pi), rel=1e-6)
        assert q["field_gradient_t_per_m"] == pytest.approx(G, rel=1e-9)

    @pytest.mark.parametrize("F, a, b, expected", [
        (1, -1, 0, 1 / math.sqrt(2)),
        (1, 0, 1, 1 / math.sqrt(2)),
        (2, 0, 1, math.sqrt(6) / 2),
        (2, 2, 1, 1.0),
        (1, -1, 1, 0.0),
    ])
    def test_fx_elements(self, F, a, b, expected):
        assert magnetic.fx_matrix_element(F, a, b) == pytest.approx(expected)

    def test_fx_domain(self):
        with pytest.raises(DomainError):
            magnetic.fx_matrix_element(1, 2, 1)

    def test_resonance_field(self):
        rb = species("Rb87")
        w = 2 * math.pi * 2.8e6
        B0 = magnetic.resonance_bias_field(rb, 1, w)
        assert magnetic.larmor_frequency(rb, 1, B0) == pytest.approx(w, rel=1e-12)
        assert B0 == pytest.approx(sc.h * 2.8e6 / (MU_B * 0.5), rel=1e-9)

    def test_transfer_time(self):
        assert magnetic.transfer_time(2.0, 4) == pytest.approx(math.pi / 8)
        with pytest.raises(DomainError):
            magnetic.transfer_time(0.0)


class TestDecoherencePresets:
    @pytest.mark.parametrize("name, Q, T", [("decoherence_4k", 1e5, 4.0), ("decoherence_10mk", 1e7, 0.01)])
    def test_rate(self, name, Q, T):
        _, q = preset(name)
        assert q["gamma_m_dec_hz"] == pytest.approx(sc.k * T / (sc.hbar * Q) / (2 * math.pi), rel=1e-9)


def test_unknown_scheme():
    with pytest.raises(Exception):
        schemes.evaluate("warp_drive", {})
