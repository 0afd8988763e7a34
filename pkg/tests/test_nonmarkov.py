import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasecov.channels import GAD, MOUN, NMAD, OUN, RTN, Eternal, combine
from phasecov.errors import SingularRateError
from phasecov.nonmarkov import (ConstantGenerator, _phase_covariant_trace_norm,
                                lindbladian_matrix, sss_zeta, sss_zeta_eternal, trace_norm,
                                zeta_details, zeta_objective)
from phasecov.qubit import state_from_bloch

rate = st.floats(-3.0, 3.0, allow_nan=False)


def vec(rho):
    return rho.reshape(-1)


class TestLindbladian:
    def test_pure_dephasing_diagonal(self):
        m = lindbladian_matrix(0.0, 0.0, 1.0, 0.0)
        np.testing.assert_allclose(m, np.diag([0, -1, -1, 0]), atol=1e-15)

    @given(rate, rate, rate, rate)
    @settings(max_examples=40)
    def test_matches_master_equation(self, g1, g2, g3, w):
        rho = state_from_bloch((0.3, -0.1, 0.4)).matrix
        out = (lindbladian_matrix(g1, g2, g3, w) @ vec(rho)).reshape(2, 2)
        p1, a = rho[1, 1].real, rho[1, 0]
        dp = 0.5 * g2 * (1 - p1) - 0.5 * g1 * p1
        da = (1j * w - 0.25 * (g1 + g2) - g3) * a
        np.testing.assert_allclose(out, [[-dp, np.conj(da)], [da, dp]], atol=1e-13)

    @given(rate, rate, rate, rate)
    @settings(max_examples=60)
    def test_closed_form_trace_norm(self, g1, g2, g3, w):
        svd = trace_norm(lindbladian_matrix(g1, g2, g3, w))
        assert _phase_covariant_trace_norm(g1, g2, g3, w) == pytest.approx(svd, abs=1e-12)

    def test_constant_generator_rejects_negative(self):
        with pytest.raises(ValueError):
            ConstantGenerator(-0.1, 0.0, 0.0)


class TestEternalOracle:
    def test_value(self):
        expected = math.log((1.25 + 0.75 * math.cosh(2.0)) / 2)
        assert sss_zeta(Eternal(0.5, 1.0), 1.0) == pytest.approx(expected, abs=1e-4)

    def test_closed_form_helper(self):
        assert sss_zeta_eternal(0.5, 1.0, 1.0) == pytest.approx(
            math.log((1.25 + 0.75 * math.cosh(2.0)) / 2), rel=1e-15)

    def test_markovian_limit_is_zero(self):
        assert sss_zeta(Eternal(1.0, 1.0), 1.0) == pytest.approx(0.0, abs=1e-7)


class TestMeasure:
    @pytest.mark.parametrize("c", [GAD(0.3, 0.7), MOUN(0.4)])
    def test_semigroups_give_zero(self, c):
        assert sss_zeta(c, 2.0) == pytest.approx(0.0, abs=1e-7)

    def test_found_generator_reproduces_value(self):
        c = OUN(0.1, 1.0)
        res = zeta_details(c, 1.0)
        assert res.zeta > 0
        assert zeta_objective(c, 1.0, res.generator) == pytest.approx(res.zeta, abs=1e-12)

    def test_minimum_beats_neighbours(self):
        c = combine(NMAD(1.0, 0.1), RTN(0.5, 1.0))
        res = zeta_details(c, 1.0)
        g = res.generator
        for d in np.eye(4) * 1e-3:
            for sign in (1, -1):
                x = np.array([g.g1s, g.g2s, g.g3s, g.ws]) + sign * d
                if np.any(x[:3] < 0):
                    continue
                other = zeta_objective(c, 1.0, ConstantGenerator(*x))
                assert other >= res.zeta - 1e-7

    def test_seed_determinism(self):
        c = combine(NMAD(1.0, 0.1), RTN(0.5, 1.0))
        assert sss_zeta(c, 1.0, seed=7) == sss_zeta(c, 1.0, seed=7)

    def test_pole_in_horizon(self):
        with pytest.raises(SingularRateError):
            sss_zeta(RTN(1.0, 1.0), 2.0)
