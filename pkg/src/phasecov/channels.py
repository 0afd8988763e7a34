"""Phase-covariant qubit channels.

Every channel supplies rate functions ``g1`` (absorption), ``g2`` (emission),
``g3`` (pure dephasing) and a constant precession frequency ``omega`` for
the master equation

    drho/dt = -i omega/2 [sz, rho] + g1/2 L1(rho) + g2/2 L2(rho) + g3/2 L3(rho)

The map itself is evaluated through *factors* rather than through the
integrated rates::

    p1(t)    = I(t) + D(t) p1(0)
    alpha(t) = alpha(0) A(t) E(t) exp(i Omega(t))

with ``D = exp(-Gamma)``, ``I = exp(-Gamma) G``, ``A = exp(-Gamma/2)`` and
``E = exp(-GammaTilde)``. For the noise models built on a decoherence
function these factors are polynomials in that function, so they stay finite
(and keep their sign) where the function crosses zero and the rates blow up.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import quadrature
from .errors import PhaseCovError, SingularRateError
from .qubit import QubitState

MAP_TOL = 1e-10
SPECTRAL_TOL = 1e-8
SPECTRAL_CUTOFF = 40.0
POLE_WINDOW = 1e-9
IMAG_TOL = 1e-12

MARKOVIAN = "Markovian"
NON_MARKOVIAN_INDIVISIBLE = "non-Markovian-CP-indivisible"
NON_MARKOVIAN_DIVISIBLE = "non-Markovian-CP-divisible"


class MapFactors(NamedTuple):
    D: np.ndarray
    dD: np.ndarray
    I: np.ndarray
    dI: np.ndarray
    A: np.ndarray
    dA: np.ndarray
    E: np.ndarray
    dE: np.ndarray


class MapIntegrals(NamedTuple):
    Gamma: float
    G: float
    Omega: float
    GammaTilde: float


def _identity_factors(t):
    one = np.ones_like(t)
    zero = np.zeros_like(t)
    return MapFactors(one, zero, zero, zero, one, zero, one, zero)


def _as_real(z):
    z = np.asarray(z)
    if np.iscomplexobj(z):
        bad = np.abs(z.imag) > IMAG_TOL * np.maximum(1.0, np.abs(z.real))
        if np.any(bad):
            raise PhaseCovError("complex-safe evaluation left an imaginary part")
        return z.real
    return z


def _shc(x):
    """sinh(x)/x for complex x, accurate near 0."""
    x = np.asarray(x, dtype=complex)
    small = np.abs(x) < 1e-4
    safe = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 + x2 / 6.0 + x2 * x2 / 120.0, np.sinh(safe) / safe)


def _damped_pair(width, split_sq, t):
    """Decoherence function of the damped Jaynes-Cummings form.

    Returns ``L = exp(-w t/2) (cosh(z t/2) + (w/z) sinh(z t/2))`` and
    ``exp(-w t/2) (t/2) sinh(z t/2)/(z t/2)`` for ``z**2 = split_sq``;
    ``z`` may be imaginary, in which case the hyperbolic functions turn
    into their trigonometric counterparts.
    """
    z = np.sqrt(complex(split_sq))
    half = 0.5 * t
    env = np.exp(-width * half)
    shc = _shc(z * half)
    lam = env * (np.cosh(z * half) + width * half * shc)
    tail = env * half * shc
    return _as_real(lam), _as_real(tail)


def _find_zeros(fn, t0, t1, freq):
    """Sign changes of ``fn`` on ``[t0, t1]`` refined by Brent's method."""
    if t1 <= t0:
        return []
    n = max(400, int(40 * (t1 - t0) * max(freq, 1e-12) / (2 * math.pi)) + 1)
    grid = np.linspace(t0, t1, n)
    vals = fn(grid)
    roots = []
    for k in np.nonzero(vals == 0.0)[0]:
        roots.append(float(grid[k]))
    idx = np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]
    for k in idx:
        roots.append(brentq(lambda x: float(fn(np.array([x]))[0]), grid[k], grid[k + 1],
                            xtol=1e-14, rtol=4 * np.finfo(float).eps))
    return sorted(set(roots))


def _guard_rate(lam, dlam, t, what):
    lam = np.asarray(lam)
    dlam = np.asarray(dlam)
    near = np.abs(lam) <= POLE_WINDOW * np.maximum(np.abs(dlam), 1e-300)
    if np.any(near):
        where = float(np.atleast_1d(t)[np.argmax(near)])
        raise SingularRateError(
            f"{what} rate diverges near t={where:.12g} (decoherence function vanishes)",
            pole=where)


class ChannelSpec:
    """Base class of the channel catalog.

    Subclasses declare which rate roles they supply and implement
    :meth:`rates` and :meth:`factors` on arrays of times.
    """

    kind = "channel"
    roles = frozenset()
    omega = 0.0

    def rates(self, t):
        raise NotImplementedError

    def factors(self, t):
        raise NotImplementedError

    def decoherence(self, t):
        """Decoherence function and its time derivative, if the model has one."""
        raise PhaseCovError(f"channel kind '{self.kind}' has no decoherence function")

    def poles(self, t0, t1):
        """Times in ``[t0, t1]`` where a rate diverges."""
        return []

    @property
    def total_omega(self):
        return float(self.omega)

    def params(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class NMAD(ChannelSpec):
    """Non-Markovian amplitude damping (emission only)."""

    kappa: float
    l: float
    omega: float = 0.0
    kind = "nmad"
    roles = frozenset({"g2"})

    def __post_init__(self):
        if self.kappa < 0 or self.l < 0:
            raise ValueError("NMAD needs kappa >= 0 and l >= 0")

    def decoherence(self, t):
        t = np.asarray(t, dtype=float)
        lam, tail = _damped_pair(self.l, self.l ** 2 - 2 * self.kappa * self.l, t)
        return lam, -self.kappa * self.l * tail

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        lam, dlam = self.decoherence(t)
        _guard_rate(lam, dlam, t, "NMAD emission")
        zero = np.zeros_like(t)
        return zero, -4.0 * dlam / lam, zero

    def factors(self, t):
        t = np.asarray(t, dtype=float)
        lam, dlam = self.decoherence(t)
        D = lam * lam
        dD = 2.0 * lam * dlam
        one = np.ones_like(t)
        return MapFactors(D, dD, 1.0 - D, -dD, lam, dlam, one, np.zeros_like(t))

    def poles(self, t0, t1):
        split = self.l ** 2 - 2 * self.kappa * self.l
        if split >= 0:
            return []
        return _find_zeros(lambda x: self.decoherence(x)[0], t0, t1, 0.5 * math.sqrt(-split))


@dataclass(frozen=True)
class RTN(ChannelSpec):
    """Random telegraph noise dephasing."""

    alpha: float
    eta: float
    omega: float = 0.0
    kind = "rtn"
    roles = frozenset({"g3"})

    def __post_init__(self):
        if self.alpha < 0 or self.eta < 0:
            raise ValueError("RTN needs alpha >= 0 and eta >= 0")

    def decoherence(self, t):
        # mu * eta, written so that eta = 0 stays finite
        t = np.asarray(t, dtype=float)
        w = np.sqrt(complex(4 * self.alpha ** 2 - self.eta ** 2))
        env = np.exp(-self.eta * t)
        sc = _shc(1j * w * t)
        lam = _as_real(env * (np.cos(w * t) + self.eta * t * sc))
        dlam = _as_real(-4 * self.alpha ** 2 * t * env * sc)
        return lam, dlam

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        lam, dlam = self.decoherence(t)
        _guard_rate(lam, dlam, t, "RTN dephasing")
        zero = np.zeros_like(t)
        return zero, zero, -dlam / lam

    def factors(self, t):
        t = np.asarray(t, dtype=float)
        lam, dlam = self.decoherence(t)
        base = _identity_factors(t)
        return base._replace(E=lam, dE=dlam)

    def poles(self, t0, t1):
        split = 4 * self.alpha ** 2 - self.eta ** 2
        if split <= 0:
            return []
        return _find_zeros(lambda x: self.decoherence(x)[0], t0, t1, math.sqrt(split))


@dataclass(frozen=True)
class OUN(ChannelSpec):
    """Ornstein-Uhlenbeck noise dephasing."""

    p: float
    m: float
    omega: float = 0.0
    kind = "oun"
    roles = frozenset({"g3"})

    def __post_init__(self):
        if self.p < 0 or self.m < 0:
            raise ValueError("OUN needs p >= 0 and m >= 0")

    def _rate(self, t):
        return -0.5 * self.p * np.expm1(-self.m * t)

    def decoherence(self, t):
        t = np.asarray(t, dtype=float)
        if self.m > 0:
            memory = np.expm1(-self.m * t) / self.m
        else:
            memory = -t
        lam = np.exp(-0.5 * self.p * (t + memory))
        return lam, -self._rate(t) * lam

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        zero = np.zeros_like(t)
        return zero, zero, self._rate(t)

    def factors(self, t):
        lam, dlam = self.decoherence(t)
        return _identity_factors(np.asarray(t, dtype=float))._replace(E=lam, dE=dlam)


@dataclass(frozen=True)
class MOUN(ChannelSpec):
    """Markovian limit of the Ornstein-Uhlenbeck noise (1/m -> infinity)."""

    p: float
    omega: float = 0.0
    kind = "moun"
    roles = frozenset({"g3"})

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("MOUN needs p >= 0")

    def decoherence(self, t):
        t = np.asarray(t, dtype=float)
        lam = np.exp(-0.5 * self.p * t)
        return lam, -0.5 * self.p * lam

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        zero = np.zeros_like(t)
        return zero, zero, np.full_like(t, 0.5 * self.p)

    def factors(self, t):
        lam, dlam = self.decoherence(t)
        return _identity_factors(np.asarray(t, dtype=float))._replace(E=lam, dE=dlam)


def mean_excitation(T, nu0):
    if T <= 0:
        return 0.0
    return 1.0 / math.expm1(nu0 / T)


def _spectral_weight(w, T, s, upsilon, omega_c):
    # J(w) coth(w/T) with coth -> 1 at T = 0
    J = upsilon * (w / omega_c) ** s * np.exp(-w / omega_c)
    if T > 0:
        J = J / np.tanh(w / T)
    return J


def phenomenological_gamma3(t, T, s, upsilon, omega_c):
    """Dephasing rate ``2 int_0^{40 wc} J(w) coth(w/T) sin(w t) dw``.

    ``t`` may be a scalar or an array; arrays are integrated on a shared
    adaptive mesh.
    """
    if s < 1:
        raise ValueError("Ohmic parameter s must be >= 1")
    ts = np.atleast_1d(np.asarray(t, dtype=float))

    def integrand(w):
        return 2.0 * _spectral_weight(w, T, s, upsilon, omega_c)[:, None] * np.sin(w[:, None] * ts[None, :])

    vals = quadrature.integrate(integrand, 0.0, SPECTRAL_CUTOFF * omega_c,
                                abs_tol=SPECTRAL_TOL, initial_panels=8)
    return float(vals[0]) if np.ndim(t) == 0 else vals


def phenomenological_gamma_tilde(t, T, s, upsilon, omega_c):
    """Accumulated dephasing ``int_0^t g3``, integrated over time analytically.

    Swapping the order of integration turns ``sin(w t')`` into
    ``(1 - cos(w t))/w``, leaving a single frequency integral.
    """
    ts = np.atleast_1d(np.asarray(t, dtype=float))

    def integrand(w):
        weight = 2.0 * _spectral_weight(w, T, s, upsilon, omega_c) / w
        return weight[:, None] * 2.0 * np.sin(0.5 * w[:, None] * ts[None, :]) ** 2

    vals = quadrature.integrate(integrand, 0.0, SPECTRAL_CUTOFF * omega_c,
                                abs_tol=MAP_TOL, initial_panels=8)
    return float(vals[0]) if np.ndim(t) == 0 else vals


@dataclass(frozen=True)
class Phenomenological(ChannelSpec):
    """Thermal model with absorption, emission and spectral dephasing."""

    R: float
    T: float = 0.0
    nu0: float = 1.0
    s: float = 4.0
    upsilon: float = 1.0
    omega_c: float = 1.0
    c0: float = 1.0
    omega: float = 0.0
    kind = "phenomenological"
    roles = frozenset({"g1", "g2", "g3"})

    def __post_init__(self):
        if self.R <= 0:
            raise ValueError("R must be > 0")
        if self.T < 0 or self.nu0 <= 0 or self.omega_c <= 0 or self.upsilon < 0:
            raise ValueError("invalid thermal or spectral parameters")
        if self.s < 1:
            raise ValueError("Ohmic parameter s must be >= 1")
        if self.c0 == 0:
            raise ValueError("c0 must be nonzero")

    @property
    def N(self):
        return mean_excitation(self.T, self.nu0)

    def _u(self, t):
        lam, tail = _damped_pair(1.0, 1.0 - 2.0 * self.R, t)
        return lam, -self.R * tail

    def decoherence(self, t):
        t = np.asarray(t, dtype=float)
        u, du = self._u(t)
        return self.c0 * u, self.c0 * du

    def gamma3(self, t):
        return phenomenological_gamma3(t, self.T, self.s, self.upsilon, self.omega_c)

    def gamma_tilde(self, t):
        return phenomenological_gamma_tilde(t, self.T, self.s, self.upsilon, self.omega_c)

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        u, du = self._u(t)
        _guard_rate(u, du, t, "phenomenological decay")
        f = -2.0 * du / u
        N = self.N
        return 2.0 * N * f, 2.0 * (N + 1.0) * f, np.atleast_1d(self.gamma3(t)).reshape(t.shape)

    def factors(self, t):
        t = np.asarray(t, dtype=float)
        u, du = self._u(t)
        N = self.N
        n = 2.0 * N + 1.0
        au = np.abs(u)
        sgn = np.sign(u)
        D = au ** (2 * n)
        dD = 2 * n * au ** (2 * n - 1) * sgn * du
        A = sgn * au ** n
        dA = n * au ** (n - 1) * du
        ts = t.ravel()
        g3 = np.atleast_1d(self.gamma3(ts)).reshape(t.shape)
        E = np.exp(-np.atleast_1d(self.gamma_tilde(ts)).reshape(t.shape))
        share = (N + 1.0) / n
        return MapFactors(D, dD, share * (1.0 - D), -share * dD, A, dA, E, -g3 * E)

    def poles(self, t0, t1):
        split = 1.0 - 2.0 * self.R
        if split >= 0:
            return []
        return _find_zeros(lambda x: self._u(x)[0], t0, t1, 0.5 * math.sqrt(-split))


@dataclass(frozen=True)
class Eternal(ChannelSpec):
    """Eternally CP-indivisible, non-unital channel."""

    b: float
    nu: float
    omega: float = 0.0
    kind = "eternal"
    roles = frozenset({"g1", "g2", "g3"})

    def __post_init__(self):
        if abs(self.b) > 1 or self.nu < 0:
            raise ValueError("Eternal needs |b| <= 1 and nu >= 0")

    def _x(self, t):
        return 1.0 + self.b ** 2 + (1.0 - self.b ** 2) * np.cosh(2 * self.nu * t)

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        b, nu = self.b, self.nu
        g3 = -nu * (1 - b * b) * np.sinh(2 * nu * t) / self._x(t)
        return np.full_like(t, 2 * nu * (1 + b)), np.full_like(t, 2 * nu * (1 - b)), g3

    def factors(self, t):
        t = np.asarray(t, dtype=float)
        b, nu = self.b, self.nu
        D = np.exp(-2 * nu * t)
        dD = -2 * nu * D
        A = np.exp(-nu * t)
        E = np.sqrt(0.5 * self._x(t))
        dE = (1 - b * b) * nu * np.sinh(2 * nu * t) / (2 * E)
        share = 0.5 * (1 - b)
        return MapFactors(D, dD, share * (1 - D), -share * dD, A, -nu * A, E, dE)


@dataclass(frozen=True)
class GAD(ChannelSpec):
    """Generalized amplitude damping with constant gain and loss rates."""

    gamma: float
    Gamma: float
    omega: float = 0.0
    kind = "gad"
    roles = frozenset({"g1", "g2"})

    def __post_init__(self):
        if self.gamma < 0 or self.Gamma < 0:
            raise ValueError("GAD rates must be >= 0")

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        return np.full_like(t, self.gamma), np.full_like(t, self.Gamma), np.zeros_like(t)

    def factors(self, t):
        t = np.asarray(t, dtype=float)
        total = self.gamma + self.Gamma
        k = 0.5 * total
        D = np.exp(-k * t)
        share = self.Gamma / total if total > 0 else 0.0
        A = np.exp(-0.5 * k * t)
        one = np.ones_like(t)
        return MapFactors(D, -k * D, share * (1 - D), share * k * D, A, -0.5 * k * A,
                          one, np.zeros_like(t))


@dataclass(frozen=True)
class Composite(ChannelSpec):
    """Sum of channels, each rate role supplied by at most one member."""

    members: tuple = field(default_factory=tuple)
    omega: float = 0.0
    kind = "composite"

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        seen = set()
        for m in self.members:
            if isinstance(m, Composite):
                raise ValueError("nested composites are not supported")
            clash = seen & m.roles
            if clash:
                raise ValueError(f"rate role(s) {sorted(clash)} supplied twice")
            seen |= m.roles

    @property
    def roles(self):
        return frozenset().union(*(m.roles for m in self.members)) if self.members else frozenset()

    @property
    def total_omega(self):
        return float(self.omega) + sum(m.omega for m in self.members)

    def rates(self, t):
        t = np.asarray(t, dtype=float)
        g1 = np.zeros_like(t)
        g2 = np.zeros_like(t)
        g3 = np.zeros_like(t)
        for m in self.members:
            a, b, c = m.rates(t)
            g1 = g1 + a
            g2 = g2 + b
            g3 = g3 + c
        return g1, g2, g3

    def factors(self, t):
        t = np.asarray(t, dtype=float)
        out = _identity_factors(t)
        for m in self.members:
            f = m.factors(t)
            if m.roles & {"g1", "g2"}:
                # roles are disjoint, so at most one member moves populations
                out = out._replace(D=f.D, dD=f.dD, I=f.I, dI=f.dI, A=f.A, dA=f.dA)
            out = out._replace(E=out.E * f.E, dE=out.dE * f.E + out.E * f.dE)
        return out

    def poles(self, t0, t1):
        return sorted(set().union(*(m.poles(t0, t1) for m in self.members))) if self.members else []

    def params(self):
        return {"members": [(m.kind, m.params()) for m in self.members], "omega": self.omega}


KINDS = {cls.kind: cls for cls in (NMAD, RTN, OUN, MOUN, Phenomenological, Eternal, GAD)}


def combine(*channels, omega=0.0):
    if len(channels) == 1 and omega == 0.0:
        return channels[0]
    return Composite(tuple(channels), omega=omega)


# ---------------------------------------------------------------------------
# Map evaluation
# ---------------------------------------------------------------------------

def rates_at(c, t):
    """Instantaneous ``(g1, g2, g3, omega)``; raises near rate poles."""
    if t < 0:
        raise ValueError("t must be >= 0")
    g1, g2, g3 = c.rates(np.array([float(t)]))
    return float(g1[0]), float(g2[0]), float(g3[0]), c.total_omega


def _coherence(c, f, t):
    phase = np.exp(2j * c.total_omega * t)
    coh = f.A * f.E * phase
    dcoh = (f.dA * f.E + f.A * f.dE + 2j * c.total_omega * f.A * f.E) * phase
    return coh, dcoh


def trajectory(c, s0, ts):
    """Vectorized evolution: ``(p1, alpha, dp1/dt, dalpha/dt)`` arrays on ``ts``.

    Derivatives come from the factor derivatives, so they are finite at
    rate poles.
    """
    ts = np.asarray(ts, dtype=float)
    f = c.factors(ts)
    coh, dcoh = _coherence(c, f, ts)
    p1 = f.I + f.D * s0.p1
    dp1 = f.dI + f.dD * s0.p1
    return p1, s0.alpha * coh, dp1, s0.alpha * dcoh


def evolve(c, s0, t):
    if t < 0:
        raise ValueError("t must be >= 0")
    p1, alpha, _, _ = trajectory(c, s0, np.array([float(t)]))
    return QubitState(float(p1[0]), complex(alpha[0]))


def _derivative_matrix(dp1, dalpha):
    return np.array([[-dp1, np.conj(dalpha)], [dalpha, dp1]], dtype=complex)


def evolve_derivative(c, s0, t):
    """drho/dt along the trajectory from ``s0``, as a 2x2 Hermitian matrix."""
    _, _, dp1, dalpha = trajectory(c, s0, np.array([float(t)]))
    return _derivative_matrix(dp1[0], dalpha[0])


def propagate(c, s, t0, t1):
    """Evolve a state given at time ``t0`` to time ``t1 >= t0``.

    Uses the intermediate map ``Phi_t1 Phi_t0^{-1}``; raises if the map at
    ``t0`` is not invertible (a zero of the decoherence function).
    """
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    f0 = c.factors(np.array([float(t0)]))
    f1 = c.factors(np.array([float(t1)]))
    d0 = float(f0.D[0])
    a0 = float(f0.A[0] * f0.E[0])
    if d0 == 0.0 or a0 == 0.0:
        raise SingularRateError(f"map at t={t0:.12g} is not invertible", pole=t0)
    ratio = float(f1.D[0]) / d0
    p1 = float(f1.I[0]) - ratio * float(f0.I[0]) + ratio * s.p1
    coh = float(f1.A[0] * f1.E[0]) / a0 * np.exp(2j * c.total_omega * (t1 - t0))
    return QubitState(p1, s.alpha * coh)


def propagate_trajectory(c, s, t0, ts):
    """Vectorized :func:`propagate` with time derivatives."""
    ts = np.asarray(ts, dtype=float)
    f0 = c.factors(np.array([float(t0)]))
    d0 = float(f0.D[0])
    a0 = float(f0.A[0] * f0.E[0])
    if d0 == 0.0 or a0 == 0.0:
        raise SingularRateError(f"map at t={t0:.12g} is not invertible", pole=t0)
    f = c.factors(ts)
    coh, dcoh = _coherence(c, f, ts)
    shift = np.exp(-2j * c.total_omega * t0) / a0
    p1 = f.I + f.D / d0 * (s.p1 - float(f0.I[0]))
    dp1 = f.dI + f.dD / d0 * (s.p1 - float(f0.I[0]))
    return p1, s.alpha * coh * shift, dp1, s.alpha * dcoh * shift


def generator_terms(g1, g2, g3, w, p1, alpha):
    """Right-hand side of the master equation on ``(p1, alpha)``."""
    dp1 = 0.5 * g2 * (1.0 - p1) - 0.5 * g1 * p1
    dalpha = (1j * w - 0.25 * (g1 + g2) - g3) * alpha
    return dp1, dalpha


def generator_apply(c, s, t):
    """drho/dt from the instantaneous rates applied to ``s`` at time ``t``."""
    g1, g2, g3, w = rates_at(c, t)
    dp1, dalpha = generator_terms(g1, g2, g3, w, s.p1, s.alpha)
    return _derivative_matrix(dp1, dalpha)


def map_integrals(c, t, method="auto"):
    """Accumulated integrals ``Gamma, G, Omega, GammaTilde`` at time ``t``.

    ``auto`` reads them off the factors (closed forms or logarithms of the
    decoherence functions; past a zero of a decoherence function this is the
    log-modulus continuation). ``quadrature`` integrates the rates directly
    and fails at rate poles.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    t = float(t)
    omega_int = 2.0 * c.total_omega * t
    if method == "auto":
        f = c.factors(np.array([t]))
        with np.errstate(divide="ignore"):
            gamma = -math.log(f.D[0]) if f.D[0] > 0 else math.inf
            gamma_tilde = -math.log(abs(f.E[0])) if f.E[0] != 0 else math.inf
        G = float(f.I[0] / f.D[0]) if f.D[0] > 0 else math.inf
        return MapIntegrals(gamma, G, omega_int, gamma_tilde)
    if method != "quadrature":
        raise ValueError(f"unknown method '{method}'")
    if t == 0.0:
        return MapIntegrals(0.0, 0.0, 0.0, 0.0)

    def half_loss(x):
        g1, g2, _ = c.rates(x)
        return 0.5 * (g1 + g2)

    def gamma_upto(x):
        return np.array([quadrature.integrate(half_loss, 0.0, xi, abs_tol=0.1 * MAP_TOL)
                         for xi in np.atleast_1d(x)])

    def inflow(x):
        _, g2, _ = c.rates(x)
        return np.exp(gamma_upto(x)) * 0.5 * g2

    gamma = quadrature.integrate(half_loss, 0.0, t, abs_tol=MAP_TOL)
    G = quadrature.integrate(inflow, 0.0, t, abs_tol=MAP_TOL)
    gamma_tilde = quadrature.integrate(lambda x: c.rates(x)[2], 0.0, t, abs_tol=MAP_TOL)
    return MapIntegrals(float(gamma), float(G), omega_int, float(gamma_tilde))


def decoherence_functions(c, t):
    """Value of the channel's decoherence function at ``t``."""
    lam, _ = c.decoherence(np.array([float(t)]))
    return float(lam[0])


def regime_of(c):
    """Markovianity label from the parameter conditions of each model."""
    if isinstance(c, Composite):
        labels = [regime_of(m) for m in c.members]
        for label in (NON_MARKOVIAN_INDIVISIBLE, NON_MARKOVIAN_DIVISIBLE):
            if label in labels:
                return label
        return MARKOVIAN
    if isinstance(c, NMAD):
        return NON_MARKOVIAN_INDIVISIBLE if c.l < 2 * c.kappa else MARKOVIAN
    if isinstance(c, RTN):
        if c.eta == 0:
            return NON_MARKOVIAN_INDIVISIBLE if c.alpha > 0 else MARKOVIAN
        return NON_MARKOVIAN_INDIVISIBLE if (2 * c.alpha / c.eta) ** 2 > 1 else MARKOVIAN
    if isinstance(c, OUN):
        return NON_MARKOVIAN_DIVISIBLE
    if isinstance(c, MOUN):
        return MARKOVIAN
    if isinstance(c, Eternal):
        return NON_MARKOVIAN_INDIVISIBLE if abs(c.b) < 1 else MARKOVIAN
    if isinstance(c, GAD):
        return MARKOVIAN
    if isinstance(c, Phenomenological):
        if c.R > 0.5:
            return NON_MARKOVIAN_INDIVISIBLE
        # critical Ohmic parameter: 2 at T = 0, 3 in the high-temperature limit
        if c.s > 3 or (c.T == 0 and c.s > 2):
            return NON_MARKOVIAN_INDIVISIBLE
        if c.s <= 2:
            return MARKOVIAN
        grid = np.linspace(0.0, 20.0 / c.omega_c, 201)[1:]
        return NON_MARKOVIAN_INDIVISIBLE if np.any(c.gamma3(grid) < 0) else MARKOVIAN
    raise PhaseCovError(f"unknown channel kind '{c.kind}'")
