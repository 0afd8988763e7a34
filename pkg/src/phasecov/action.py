"""Action speed limit for generalized amplitude damping.

The action of a control path ``q(t)`` is

    a = int_0^tau qdot^2 f(q) dt,
    f(q) = sin^2(2 theta) / (16 (1 - q)) + (sin^2 theta - eta)^2,

discretized with the trapezoid rule on a uniform grid. The path is kept
admissible during descent by writing its increments as a softmax of free
variables: every iterate is nondecreasing, pinned at ``q(0) = 0`` and
``q(tau) = q_f``, and stays below ``q_f < 1``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature
from .errors import PathConstraintError
from .qubit import overlap_pure, state_from_theta

MIN_GAP = 1e-9
MIN_NODES = 64
ARMIJO = 1e-4
BACKTRACK = 0.5


@dataclass(frozen=True)
class ActionParams:
    theta: float
    gamma: float
    GammaL: float
    tau: float = 1.0
    q_f: float = 0.75
    beta: float = field(init=False)
    eta: float = field(init=False)

    def __post_init__(self):
        if self.gamma <= 0 or self.GammaL <= 0:
            raise ValueError("gain and loss rates must be > 0")
        if self.tau <= 0:
            raise ValueError("tau must be > 0")
        if not 0.0 < self.q_f < 1.0:
            raise ValueError("q_f must lie in (0, 1)")
        beta = 0.5 * math.log(self.gamma / self.GammaL)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "eta", 0.5 * (1.0 + math.tanh(beta)))

    @classmethod
    def from_gad(cls, theta, gamma, GammaL, tau=1.0):
        """Parameters whose endpoint is the one reached by the channel at ``tau``."""
        q_f = -math.expm1(-0.5 * (gamma + GammaL) * tau)
        return cls(theta, gamma, GammaL, tau, q_f)

    @property
    def coherent_weight(self):
        return math.sin(2.0 * self.theta) ** 2 / 16.0

    @property
    def population_weight(self):
        return (math.sin(self.theta) ** 2 - self.eta) ** 2


def lagrangian_weight(q, p):
    """``f(q)``, the factor multiplying ``qdot^2`` in the action."""
    return p.coherent_weight / (1.0 - q) + p.population_weight


def lagrangian_initial_state(theta):
    """Initial state whose amplitude-damping trajectory the action describes.

    The coherent weight ``sin^2(2 theta)/16`` and population offset
    ``sin^2 theta - eta`` correspond to ``sin(theta)|0> + cos(theta)|1>``.
    """
    return state_from_theta(math.pi - 2.0 * theta)


@dataclass(frozen=True, eq=False)
class ControlPath:
    grid: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if grid.ndim != 1 or grid.shape != q.shape:
            raise PathConstraintError("grid and q must be 1-d arrays of equal length")
        if len(grid) < MIN_NODES + 1:
            raise PathConstraintError(f"need at least {MIN_NODES} intervals, got {len(grid) - 1}")
        steps = np.diff(grid)
        if np.any(steps <= 0) or np.ptp(steps) > 1e-9 * steps.mean():
            raise PathConstraintError("grid must be uniform and increasing")
        if grid[0] != 0.0:
            raise PathConstraintError("grid must start at t = 0")
        if q[0] != 0.0:
            raise PathConstraintError("path must start at q = 0")
        if np.any(np.diff(q) < 0):
            raise PathConstraintError("path must be nondecreasing")
        if q[-1] >= 1.0:
            raise PathConstraintError("path endpoint must stay below 1")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "q", q)

    @property
    def tau(self):
        return float(self.grid[-1])

    @property
    def q_f(self):
        return float(self.q[-1])

    @property
    def intervals(self):
        return len(self.grid) - 1

    @classmethod
    def linear(cls, q_f, tau=1.0, intervals=256):
        grid = np.linspace(0.0, tau, intervals + 1)
        return cls(grid, q_f * grid / tau)


def _action_from_q(q, h, p):
    f = lagrangian_weight(q, p)
    dq = np.diff(q)
    return float(np.sum(dq * dq / h * 0.5 * (f[:-1] + f[1:])))


def action_functional(path, p):
    """Trapezoid-rule action of ``path``; O(h^2) accurate."""
    if np.any(1.0 - path.q < MIN_GAP):
        raise PathConstraintError("path reaches q = 1 where the action diverges")
    h = path.tau / path.intervals
    return _action_from_q(path.q, h, p)


def _action_gradient_q(q, h, p):
    """Exact gradient of the discrete action with respect to every node."""
    f = lagrangian_weight(q, p)
    df = p.coherent_weight / (1.0 - q) ** 2
    dq = np.diff(q)
    favg = 0.5 * (f[:-1] + f[1:])
    kinetic = 2.0 * dq / h * favg
    curvature = 0.5 * dq * dq / h
    grad = np.zeros_like(q)
    grad[:-1] += -kinetic + curvature * df[:-1]
    grad[1:] += kinetic + curvature * df[1:]
    return grad


def _softmax(u):
    e = np.exp(u - u.max())
    return e / e.sum()


def _path_from_u(u, q_f):
    return np.concatenate([[0.0], np.cumsum(q_f * _softmax(u))])


def _objective_and_grad(u, q_f, h, p):
    q = _path_from_u(u, q_f)
    q[-1] = q_f
    a = _action_from_q(q, h, p)
    gq = _action_gradient_q(q, h, p)
    # d a / d increment_k = sum of node gradients downstream of k
    gd = np.cumsum(gq[::-1])[::-1][1:]
    s = _softmax(u)
    gu = q_f * s * (gd - np.dot(s, gd))
    return a, gu, q


def optimize_path(p, init, steps=500, rate=1.0, grad_tol=1e-14, callback=None):
    """Monotone gradient descent on the discretized action.

    Each step backtracks (factor 0.5, Armijo constant 1e-4) until the action
    drops; after an accepted step the trial step doubles. Stops after
    ``steps`` iterations, when the gradient vanishes, or when no step
    length above machine precision decreases the action.
    Returns the final path and the action after every iteration, starting
    with the initial action. ``callback(iteration, q)`` is called after
    each accepted step.
    """
    if steps < 1 or rate <= 0:
        raise ValueError("need steps >= 1 and rate > 0")
    if abs(init.q_f - p.q_f) > 1e-12 or abs(init.tau - p.tau) > 1e-12:
        raise PathConstraintError("initial path endpoints do not match the parameters")
    q_f = p.q_f
    h = init.tau / init.intervals
    inc = np.diff(init.q) / q_f
    if np.any(inc <= 0):
        raise PathConstraintError("initial path must be strictly increasing")
    u = np.log(inc)
    u -= u.mean()

    a, g, q = _objective_and_grad(u, q_f, h, p)
    trace = [a]
    step = rate
    for _ in range(steps):
        gnorm2 = float(g @ g)
        if gnorm2 <= grad_tol ** 2:
            break
        accepted = False
        while step * math.sqrt(gnorm2) > 1e-18 * max(1.0, np.abs(u).max()):
            trial = u - step * g
            a_new, g_new, q_new = _objective_and_grad(trial, q_f, h, p)
            if a_new <= a - ARMIJO * step * gnorm2:
                accepted = True
                break
            step *= BACKTRACK
        if not accepted:
            break
        if not (np.all(np.diff(q_new) >= 0) and q_new[-1] < 1.0):
            raise PathConstraintError("descent step left the admissible region")
        u, a, g, q = trial, a_new, g_new, q_new
        trace.append(a)
        if callback is not None:
            callback(len(trace) - 1, q)
        step *= 2.0
    return ControlPath(init.grid.copy(), q), trace


def cauchy_schwarz_bound(p):
    """Minimum action over paths with pinned endpoints, ``(int sqrt(f) dq)^2 / tau``."""
    length = quadrature.integrate(lambda q: np.sqrt(lagrangian_weight(q, p)), 0.0, p.q_f,
                                  abs_tol=1e-12)
    return length * length / p.tau


def first_integral(path, p):
    """``qdot sqrt(f(q))`` at interior nodes (central differences)."""
    h = path.tau / path.intervals
    qdot = (path.q[2:] - path.q[:-2]) / (2.0 * h)
    return qdot * np.sqrt(lagrangian_weight(path.q[1:-1], p))


def action_qsl_time(p, path, rho0, rho_tau):
    """``(sin^2 B)^2 / a`` with B the Bures angle from the pure ``rho0`` to ``rho_tau``.

    Returns ``inf`` for a path with zero action and nonzero angle.
    """
    if not rho0.is_pure:
        raise ValueError("rho0 must be pure")
    sin2 = 1.0 - overlap_pure(rho0, rho_tau)
    a = action_functional(path, p)
    if sin2 == 0.0:
        return 0.0
    if a <= 0.0:
        return math.inf
    return sin2 * sin2 / a
