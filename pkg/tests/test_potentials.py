import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridsim import potentials as pt
from hybridsim.physcore import CONST, DomainError

C4 = 1.7844e-55

ALL = [
    pt.casimir_polder(C4, 1.0),
    pt.scaled_casimir_polder(C4, 0.06),
    pt.coulomb(CONST.elementary_charge, 1e-15),
    pt.charged_tip_polarization(5e-39, 1e-15),
    pt.magnetic_dipole_pair(1e-12, 9.27e-24),
    pt.custom_power_law(-3e-40, 2.5),
]


def _fd(f, x, h, order):
    # central finite differences from a 5-point stencil
    if order == 1:
        return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)
    if order == 2:
        return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h**2)
    raise ValueError


class TestDerivatives:
    @pytest.mark.parametrize("pot", ALL, ids=lambda p: p.kind)
    @pytest.mark.parametrize("order", [1, 2])
    def test_finite_difference(self, pot, order):
        d = 1e-6
        fd = _fd(pot, d, 1e-3 * d, order)
        assert pot.derivative(order, d) == pytest.approx(fd, rel=1e-6)

    def test_fourth_derivative_cp(self):
        p = pt.casimir_polder(C4, 1.0)
        d = 2e-7
        assert p.derivative(4, d) == pytest.approx(-C4 * 4 * 5 * 6 * 7 * d**-8)

    def test_array_input(self):
        p = pt.casimir_polder(C4)
        d = np.array([1e-7, 2e-7])
        np.testing.assert_allclose(p(d), -C4 / d**4)

    def test_order_limit(self):
        with pytest.raises(ValueError):
            pt.casimir_polder(C4).derivative(5, 1e-6)

    @given(st.floats(1e-8, 4e-5), st.floats(0.5, 6.0))
    def test_power_law_scaling(self, d, p):
        pot = pt.custom_power_law(1.0, p)
        assert pot(2 * d) == pytest.approx(pot(d) * 2**-p, rel=1e-12)


class TestDomain:
    @pytest.mark.parametrize("d", [0.0, -1e-6, 1e-9, 1e-3])
    def test_outside_valid_range(self, d):
        with pytest.raises(DomainError):
            pt.casimir_polder(C4)(d)

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            pt.casimir_polder(-1.0)
        with pytest.raises(DomainError):
            pt.casimir_polder(C4, -1.0)
        with pytest.raises(DomainError):
            pt.custom_power_law(1.0, 0.0)


class TestPhysics:
    def test_cp_attractive(self):
        p = pt.casimir_polder(C4, 2.0)
        assert p(1e-7) == pytest.approx(-2 * C4 / 1e-28)

    def test_coulomb_value(self):
        q = 1e-15
        p = pt.coulomb(CONST.elementary_charge, q)
        expected = CONST.elementary_charge * q / (4 * math.pi * CONST.epsilon_0 * 1e-5)
        assert p(1e-5) == pytest.approx(expected)

    def test_charged_tip_is_alpha_e2_over_2(self):
        alpha, q, d = 5e-39, 1e-15, 2e-6
        E = q / (4 * math.pi * CONST.epsilon_0 * d**2)
        assert pt.charged_tip_polarization(alpha, q)(d) == pytest.approx(-0.5 * alpha * E**2)

    def test_dipole_gradient(self):
        mu, d = 1e-12, 1e-6
        # field of a dipole seen side-on, mu0 mu / (4 pi z^3)
        B = lambda z: CONST.mu_0 * mu / (4 * math.pi * z**3)
        assert pt.magnetic_dipole_gradient(mu, d) == pytest.approx(abs(_fd(B, d, 1e-4 * d, 1)), rel=1e-7)


class TestRoundTrip:
    @pytest.mark.parametrize("pot", ALL, ids=lambda p: p.kind)
    def test_to_from_dict(self, pot):
        back = pt.from_dict(pot.to_dict())
        assert back.kind == pot.kind
        assert back.coefficient == pytest.approx(pot.coefficient, rel=1e-14)
        assert back.power == pot.power

    def test_scaled_and_range(self):
        pot = pt.custom_power_law(-1.0, 3.0).scaled(2.0).with_range(1e-8, 1e-5)
        back = pt.from_dict(pot.to_dict())
        assert back.coefficient == -2.0
        assert back.valid_range == (1e-8, 1e-5)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            pt.from_dict({"kind": "yukawa"})
