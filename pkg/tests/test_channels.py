import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from phasecov.channels import (GAD, MARKOVIAN, MOUN, NMAD, NON_MARKOVIAN_DIVISIBLE,
                               NON_MARKOVIAN_INDIVISIBLE, OUN, RTN, Composite, Eternal,
                               Phenomenological, combine, evolve, evolve_derivative,
                               generator_apply, map_integrals, phenomenological_gamma3, propagate,
                               rates_at, regime_of, trajectory)
from phasecov.errors import SingularRateError
from phasecov.qubit import QubitState, state_from_bloch, state_from_theta

from conftest import catalog


def master_equation_oracle(c, s0, t, omega=0.0):
    """Integrate the master equation for (p1, Re alpha, Im alpha) with scipy."""
    def rhs(x, y):
        g1, g2, g3 = (float(v[0]) for v in c.rates(np.array([x])))
        p1, a = y[0], y[1] + 1j * y[2]
        dp = 0.5 * g2 * (1 - p1) - 0.5 * g1 * p1
        da = (1j * omega - 0.25 * (g1 + g2) - g3) * a
        return [dp, da.real, da.imag]

    sol = solve_ivp(rhs, (0.0, t), [s0.p1, s0.alpha.real, s0.alpha.imag], method="DOP853",
                    rtol=1e-12, atol=1e-13)
    y = sol.y[:, -1]
    return y[0], y[1] + 1j * y[2]


S0 = state_from_bloch((0.3, -0.2, 0.5))


class TestAgainstMasterEquation:
    @pytest.mark.parametrize("name, t", [
        ("nmad", 3.0), ("rtn", 1.1), ("oun", 2.0), ("moun", 2.0), ("phenomenological", 1.5),
        ("eternal", 1.5), ("gad", 2.0), ("nmad+rtn", 1.0),
    ])
    def test_evolve_matches_ode(self, name, t):
        c = catalog()[name]
        p1, alpha = master_equation_oracle(c, S0, t)
        rho = evolve(c, S0, t)
        assert rho.p1 == pytest.approx(p1, abs=1e-8)
        assert rho.alpha == pytest.approx(alpha, abs=1e-8)

    def test_eternal_populations_closed_form(self):
        b, nu = 0.5, 1.0
        c = Eternal(b, nu)
        for t in (0.2, 1.0, 4.0):
            expected = 0.5 * (1 - b) + (S0.p1 - 0.5 * (1 - b)) * math.exp(-2 * nu * t)
            assert evolve(c, S0, t).p1 == pytest.approx(expected, abs=1e-14)

    def test_through_rate_pole(self):
        # the map stays finite although the NMAD rate diverges at t ~ 8.24
        c = NMAD(1.0, 0.1)
        (pole,) = c.poles(0.0, 9.0)
        rho = evolve(c, state_from_theta(math.pi / 2), pole)
        assert rho.alpha == pytest.approx(0.0, abs=1e-9)
        assert rho.p1 == pytest.approx(1.0, abs=1e-9)

    def test_omega_factor_two(self):
        # the map's phase is 2*omega*t while the generator rotates at omega
        w, t = 0.7, 0.9
        c = MOUN(0.2, omega=w)
        _, alpha_gen = master_equation_oracle(c, S0, t, omega=w)
        _, alpha_2w = master_equation_oracle(c, S0, t, omega=2 * w)
        alpha = evolve(c, S0, t).alpha
        assert alpha == pytest.approx(alpha_2w, abs=1e-9)
        assert abs(alpha - alpha_gen) > 0.1


class TestGeneratorConsistency:
    @pytest.mark.parametrize("name", list(catalog()))
    def test_finite_differences(self, name, rng):
        c = catalog()[name]
        h = 1e-5
        for t in rng.uniform(0.05, 1.0, size=5):
            p_plus = evolve(c, S0, t + h)
            p_minus = evolve(c, S0, t - h)
            fd = (p_plus.matrix - p_minus.matrix) / (2 * h)
            gen = generator_apply(c, evolve(c, S0, t), t)
            np.testing.assert_allclose(gen, fd, atol=1e-7)
            np.testing.assert_allclose(evolve_derivative(c, S0, t), gen, atol=1e-9)

    @given(st.floats(0.0, 2 * math.pi), st.floats(0.01, 2.0))
    @settings(max_examples=30, deadline=None)
    def test_phase_covariance(self, phi, t):
        u = np.diag([np.exp(-1j * phi), np.exp(1j * phi)])
        for c in (NMAD(1.0, 0.1), Eternal(0.5, 1.0), GAD(0.3, 0.9)):
            rotated = QubitState.from_matrix(u @ S0.matrix @ u.conj().T)
            lhs = evolve(c, rotated, t).matrix
            rhs = u @ evolve(c, S0, t).matrix @ u.conj().T
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestRates:
    def test_phenomenological_zero_temperature_is_nmad(self):
        ts = np.linspace(0.0, 3.0, 50)
        for R in (0.2, 0.8):
            d = cmath.sqrt(1 - 2 * R)
            for t in ts:
                # independent closed form: G = e^{-t/2}(cosh(dt/2) + sinh(dt/2)/d)
                if abs(d) > 0:
                    sh = cmath.sinh(d * t / 2) / d
                else:
                    sh = t / 2
                g = cmath.exp(-t / 2) * (cmath.cosh(d * t / 2) + sh)
                dg = -R * cmath.exp(-t / 2) * sh
                expected = (-4 * dg / g).real
                g1, g2, _, _ = rates_at(Phenomenological(R, T=0.0), t)
                g1n, g2n, _, _ = rates_at(NMAD(R, 1.0), t)
                assert g1 == 0.0
                assert g2 == pytest.approx(expected, abs=1e-10)
                assert g2 == pytest.approx(g2n, abs=1e-12)

    def test_gamma3_zero_temperature_closed_form(self):
        # 2 int_0^inf w^4 e^{-w} sin(w t) dw = 48 Im (1 - i t)^{-5}
        for t in (0.3, 1.0, 2.5):
            exact = 48 * (1 / (1 - 1j * t) ** 5).imag
            assert phenomenological_gamma3(t, 0.0, 4, 1.0, 1.0) == pytest.approx(exact, abs=1e-8)

    def test_eternal_rates(self):
        g1, g2, g3, w = rates_at(Eternal(0.5, 1.0), 0.4)
        assert (g1, g2) == (3.0, 1.0)
        x = 1 + 0.25 + 0.75 * math.cosh(0.8)
        assert g3 == pytest.approx(-0.75 * math.sinh(0.8) / x)
        assert w == 0.0

    def test_pole_raises(self):
        (pole,) = NMAD(1.0, 0.1).poles(0.0, 9.0)
        assert pole == pytest.approx(8.242, abs=1e-3)
        with pytest.raises(SingularRateError) as err:
            rates_at(NMAD(1.0, 0.1), pole)
        assert err.value.pole == pytest.approx(pole, abs=1e-6)

    def test_rtn_pole(self):
        (pole,) = RTN(1.0, 1.0).poles(0.0, 1.5)
        lam, _ = RTN(1.0, 1.0).decoherence(np.array([pole]))
        assert abs(lam[0]) < 1e-12

    def test_markovian_rtn_has_no_pole(self):
        assert RTN(0.1, 1.0).poles(0.0, 100.0) == []


class TestMapIntegrals:
    @pytest.mark.parametrize("c", [GAD(0.7, 0.4), Eternal(0.5, 1.0), MOUN(0.3),
                                   combine(NMAD(1.0, 3.0), OUN(0.2, 1.0))])
    def test_auto_matches_quadrature(self, c):
        a = map_integrals(c, 1.3)
        q = map_integrals(c, 1.3, method="quadrature")
        np.testing.assert_allclose(a, q, atol=1e-9)

    def test_eternal_gamma_tilde(self):
        b, nu, t = 0.5, 1.0, 1.0
        x = 1 + b * b + (1 - b * b) * math.cosh(2 * nu * t)
        assert map_integrals(Eternal(b, nu), t).GammaTilde == pytest.approx(-0.5 * math.log(x / 2))

    def test_omega_integral_keeps_factor_two(self):
        assert map_integrals(GAD(1.0, 1.0, omega=0.5), 2.0).Omega == pytest.approx(2.0)

    def test_quadrature_fails_at_pole(self):
        with pytest.raises(SingularRateError):
            map_integrals(RTN(1.0, 1.0), 2.0, method="quadrature")


class TestPropagate:
    def test_semigroup_composition(self):
        c = Eternal(0.5, 1.0)
        mid = evolve(c, S0, 0.7)
        direct = evolve(c, S0, 1.9)
        via = propagate(c, mid, 0.7, 1.9)
        np.testing.assert_allclose(via.matrix, direct.matrix, atol=1e-13)

    def test_trajectory_vectorized(self):
        c = catalog()["nmad+rtn"]
        ts = np.array([0.1, 0.5, 0.9])
        p1, alpha, _, _ = trajectory(c, S0, ts)
        for k, t in enumerate(ts):
            assert p1[k] == pytest.approx(evolve(c, S0, t).p1, abs=1e-15)
            assert alpha[k] == pytest.approx(evolve(c, S0, t).alpha, abs=1e-15)


class TestRegime:
    @pytest.mark.parametrize("c, label", [
        (RTN(1.0, 1.0), NON_MARKOVIAN_INDIVISIBLE),
        (RTN(0.1, 1.0), MARKOVIAN),
        (NMAD(1.0, 0.1), NON_MARKOVIAN_INDIVISIBLE),
        (NMAD(1.0, 3.0), MARKOVIAN),
        (OUN(0.1, 1.0), NON_MARKOVIAN_DIVISIBLE),
        (MOUN(0.1), MARKOVIAN),
        (Eternal(0.5, 1.0), NON_MARKOVIAN_INDIVISIBLE),
        (GAD(1.0, 1.0), MARKOVIAN),
        (Phenomenological(0.8), NON_MARKOVIAN_INDIVISIBLE),
        (Phenomenological(0.2, s=1.0), MARKOVIAN),
    ])
    def test_labels(self, c, label):
        assert regime_of(c) == label

    def test_composite_takes_strongest(self):
        assert regime_of(combine(NMAD(1.0, 3.0), OUN(0.1, 1.0))) == NON_MARKOVIAN_DIVISIBLE


class TestComposite:
    def test_role_clash(self):
        with pytest.raises(ValueError):
            combine(RTN(1.0, 1.0), OUN(0.1, 1.0))

    def test_empty_is_identity(self):
        rho = evolve(Composite(()), S0, 5.0)
        np.testing.assert_allclose(rho.matrix, S0.matrix, atol=1e-15)

    def test_dephasing_factors_multiply(self):
        a, b = NMAD(1.0, 0.1), MOUN(0.4)
        t = 0.8
        alone = evolve(a, S0, t).alpha
        both = evolve(combine(a, b), S0, t).alpha
        assert both == pytest.approx(alone * math.exp(-0.2 * t), abs=1e-15)
