import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from phasecov.action import (ActionParams, ControlPath, action_functional, action_qsl_time,
                             cauchy_schwarz_bound, first_integral, lagrangian_initial_state,
                             optimize_path)
from phasecov.channels import GAD, evolve
from phasecov.errors import PathConstraintError
from phasecov.qsl import qsl_time_pure
from phasecov.qubit import state_from_theta

QUARTER = math.pi / 4


def params(theta=QUARTER, q_f=0.75):
    return ActionParams(theta, 1.0, 1.0, 1.0, q_f)


class TestParams:
    def test_eta_from_rates(self):
        p = ActionParams(0.3, 2.0, 0.5)
        assert p.eta == pytest.approx(2.0 / 2.5, abs=1e-14)
        assert p.beta == pytest.approx(0.5 * math.log(4.0))

    def test_q_f_must_be_below_one(self):
        with pytest.raises(ValueError):
            ActionParams(0.3, 1.0, 1.0, q_f=1.0)

    def test_from_gad(self):
        p = ActionParams.from_gad(0.3, 1.0, 2.0, 0.5)
        assert p.q_f == pytest.approx(1 - math.exp(-0.75))


class TestPath:
    def test_linear(self):
        path = ControlPath.linear(0.75)
        assert path.q[0] == 0.0 and path.q[-1] == 0.75
        assert path.intervals == 256

    @pytest.mark.parametrize("q", [
        lambda t: 0.75 * t ** 2 * (1 - np.sin(6 * t)),
        lambda t: 0.1 + 0.65 * t,
        lambda t: 1.2 * t,
    ])
    def test_rejects_inadmissible(self, q):
        grid = np.linspace(0, 1, 65)
        with pytest.raises(PathConstraintError):
            ControlPath(grid, q(grid))

    def test_rejects_coarse_grid(self):
        with pytest.raises(PathConstraintError):
            ControlPath(np.linspace(0, 1, 11), np.linspace(0, 0.5, 11))


class TestFunctional:
    def test_linear_path_analytic(self):
        # qdot = q_f, so a = q_f^2 * int_0^1 f(q_f t) dt
        p = params(0.6)
        path = ControlPath.linear(0.75, intervals=4096)
        f = lambda q: math.sin(1.2) ** 2 / (16 * (1 - q)) + (math.sin(0.6) ** 2 - 0.5) ** 2
        exact = 0.75 ** 2 * quad(lambda t: f(0.75 * t), 0, 1)[0]
        assert action_functional(path, p) == pytest.approx(exact, rel=1e-6)

    def test_bound_closed_form(self):
        # f = 1/(16(1 - q)) for theta = pi/4, eta = 1/2
        assert cauchy_schwarz_bound(params()) == pytest.approx(0.0625, abs=1e-10)

    @given(st.lists(st.floats(0.01, 1.0), min_size=64, max_size=64), st.floats(0.0, 1.5))
    @settings(max_examples=40, deadline=None)
    def test_bound_below_every_path(self, weights, theta):
        p = params(theta)
        inc = np.array(weights) / np.sum(weights) * p.q_f
        path = ControlPath(np.linspace(0, 1, 65), np.concatenate([[0.0], np.cumsum(inc)]))
        # the discrete action carries an O(h^2) error
        assert action_functional(path, p) >= cauchy_schwarz_bound(p) * (1 - 1e-2)


class TestOptimizer:
    def test_converges_to_bound(self):
        p = params()
        start = time.perf_counter()
        path, trace = optimize_path(p, ControlPath.linear(0.75))
        elapsed = time.perf_counter() - start
        assert len(trace) - 1 <= 500
        assert elapsed < 10
        assert np.all(np.diff(trace) <= 0)
        assert trace[-1] == pytest.approx(0.0625, rel=5e-3)

    def test_analytic_optimum(self):
        # Euler-Lagrange solution for f = 1/(16(1 - q)) with q(1) = 3/4
        p = params()
        path, _ = optimize_path(p, ControlPath.linear(0.75))
        t = path.grid
        np.testing.assert_allclose(path.q, t - t ** 2 / 4, atol=1e-4)

    def test_first_integral_constant(self):
        p = params(0.5)
        path, _ = optimize_path(p, ControlPath.linear(0.75))
        fi = first_integral(path, p)
        assert np.ptp(fi) / np.mean(fi) < 1e-2

    def test_grid_convergence(self):
        p = params(0.5)
        bound = cauchy_schwarz_bound(p)
        errs = []
        for n in (64, 128):
            _, trace = optimize_path(p, ControlPath.linear(0.75, intervals=n), steps=2000)
            errs.append(abs(trace[-1] - bound))
        assert errs[1] < errs[0] / 2.5

    def test_callback_and_monotone(self):
        seen = []
        optimize_path(params(), ControlPath.linear(0.75), steps=5,
                      callback=lambda k, q: seen.append((k, q[-1])))
        assert [k for k, _ in seen] == [1, 2, 3, 4, 5]
        assert all(q == pytest.approx(0.75, abs=1e-15) for _, q in seen)

    def test_rejects_mismatched_endpoint(self):
        with pytest.raises(PathConstraintError):
            optimize_path(params(), ControlPath.linear(0.5))


class TestActionQsl:
    def test_zero_angle(self):
        p = params()
        s = lagrangian_initial_state(QUARTER)
        assert action_qsl_time(p, ControlPath.linear(0.75), s, s) == 0.0

    def test_reciprocal_in_action(self):
        p = params()
        s0 = state_from_theta(0.0)
        s1 = state_from_theta(1.0)
        path = ControlPath.linear(0.75)
        a = action_functional(path, p)
        # tau^a * a = sin^4 B, so doubling the action halves tau^a
        assert action_qsl_time(p, path, s0, s1) * a == pytest.approx(math.sin(0.5) ** 4)

    def test_requires_pure_start(self):
        from phasecov.qubit import MAXIMALLY_MIXED
        with pytest.raises(ValueError):
            action_qsl_time(params(), ControlPath.linear(0.75), MAXIMALLY_MIXED, MAXIMALLY_MIXED)

    @pytest.mark.parametrize("theta", [QUARTER, 0.6])
    def test_matches_geometric_square(self, theta):
        k = math.log(4.0)
        p = ActionParams(theta, k, k, 1.0, 0.75)
        c = GAD(k, k)
        s0 = lagrangian_initial_state(theta)
        path, _ = optimize_path(p, ControlPath.linear(0.75))
        ratio = action_qsl_time(p, path, s0, evolve(c, s0, 1.0)) / p.tau
        assert ratio == pytest.approx(qsl_time_pure(c, s0, 1.0).ratio ** 2, rel=1e-2)

    def test_unoptimized_below_geometric(self):
        k = math.log(4.0)
        p = ActionParams(0.6, k, k, 1.0, 0.75)
        c = GAD(k, k)
        s0 = lagrangian_initial_state(0.6)
        path = ControlPath.linear(0.75)
        ratio = action_qsl_time(p, path, s0, evolve(c, s0, 1.0))
        assert ratio <= qsl_time_pure(c, s0, 1.0).ratio ** 2
