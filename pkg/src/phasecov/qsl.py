"""Geometric quantum speed limit times.

The generator norms along a trajectory are integrated with the adaptive
Gauss-Kronrod rule on derivatives taken from the channel factors, so rate
poles of the noise models never enter the integrand.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .channels import propagate, propagate_trajectory, trajectory, evolve
from .errors import DivergentIntegrandError, PuritySingularityError
from .qubit import bures_angle_mixed, bures_angle_pure, norms_batch, purity_of

NORM_TOL = 1e-8
INTEGRAND_BOUND = 1e12
PURITY_FLOOR = 1e-14
MAX_MISMATCH = 1e-12


@dataclass(frozen=True)
class QslResult:
    bures: float
    lambda_op: float
    lambda_hs: float
    lambda_tr: float
    tau_qsl: float
    tau_drive: float
    frozen: bool = False

    @property
    def ratio(self):
        return self.tau_qsl / self.tau_drive if self.tau_drive > 0 else 0.0


def _checked(values, ts):
    values = np.asarray(values)
    bad = ~np.isfinite(values) | (np.abs(values) > INTEGRAND_BOUND)
    if np.any(bad):
        row = np.nonzero(bad.any(axis=tuple(range(1, values.ndim))))[0][0]
        where = float(ts[row])
        raise DivergentIntegrandError(
            f"generator norm diverges near t={where:.12g}", location=where)
    return values


def _norm_stack(dp1, dalpha):
    op, hs, tr = norms_batch(-dp1, dp1, dalpha)
    return np.stack([op, hs, tr], axis=-1)


def lambda_functionals(c, s0, tau):
    """Time-averaged operator, Hilbert-Schmidt and trace norms of drho/dt."""
    if tau <= 0:
        raise ValueError("tau must be > 0")

    def integrand(ts):
        _, _, dp1, dalpha = trajectory(c, s0, ts)
        return _checked(_norm_stack(dp1, dalpha), ts)

    total = quadrature.integrate(integrand, 0.0, tau, abs_tol=NORM_TOL, rel_tol=1e-10,
                                 initial_panels=4)
    op, hs, tr = (float(v) / tau for v in total)
    return op, hs, tr


def _bound(sin2, lam_op, lam_hs, lam_tr):
    """sin^2(B) times the largest inverse norm, checked against the op-norm term."""
    if lam_op <= 0.0:
        return 0.0, True
    inv = max(1.0 / lam_op, 1.0 / lam_hs, 1.0 / lam_tr)
    if abs(inv - 1.0 / lam_op) > MAX_MISMATCH * (1.0 / lam_op):
        raise AssertionError("norm ordering violated: max inverse is not the op-norm term")
    return inv * sin2, False


def qsl_time_pure(c, s0, tau):
    """Speed-limit time for a pure initial state driven for time ``tau``."""
    rho_t = evolve(c, s0, tau)
    angle = bures_angle_pure(s0, rho_t)
    lam = lambda_functionals(c, s0, tau)
    tau_qsl, frozen = _bound(math.sin(angle) ** 2, *lam)
    return QslResult(angle, *lam, tau_qsl=tau_qsl, tau_drive=float(tau), frozen=frozen)


def qsl_time_mixed(c, s_tau, tau, tau_d):
    """Speed-limit time from ``rho_tau`` (the state at ``tau``) to ``rho_{tau+tau_d}``.

    The norm average carries the purity factor
    ``1 + sqrt((1 - tr rho_tau^2) / (1 - tr rho_t^2))``, set to 1 when the
    starting state is pure.
    """
    if tau < 0 or tau_d <= 0:
        raise ValueError("need tau >= 0 and tau_d > 0")
    start_mix = 1.0 - s_tau.purity
    use_factor = start_mix >= PURITY_FLOOR

    def integrand(ts):
        p1, alpha, dp1, dalpha = propagate_trajectory(c, s_tau, tau, ts)
        stack = _norm_stack(dp1, dalpha)
        if use_factor:
            mix = 1.0 - purity_of(p1, alpha)
            if np.any(mix < PURITY_FLOOR):
                where = float(ts[np.argmax(mix < PURITY_FLOOR)])
                raise PuritySingularityError(
                    f"evolved state is pure at t={where:.12g}; purity factor undefined")
            stack = stack * (1.0 + np.sqrt(start_mix / mix))[:, None]
        return _checked(stack, ts)

    total = quadrature.integrate(integrand, tau, tau + tau_d, abs_tol=NORM_TOL, rel_tol=1e-10,
                                 initial_panels=4)
    lam = tuple(float(v) / tau_d for v in total)
    rho_end = propagate(c, s_tau, tau, tau + tau_d)
    angle = bures_angle_mixed(s_tau, rho_end)
    tau_qsl, frozen = _bound(math.sin(angle) ** 2, *lam)
    return QslResult(angle, *lam, tau_qsl=tau_qsl, tau_drive=float(tau_d), frozen=frozen)


def holevo_rate_bound(qsl):
    """Upper bound on the rate of change of accessible information, per unit change.

    Returns ``inf`` when the speed-limit time vanishes.
    """
    if qsl.tau_qsl <= 0.0:
        return math.inf
    return 1.0 / qsl.tau_qsl
