"""Single-qubit states and the 2x2 matrix algebra used throughout.

A state is stored as the excited population ``p1`` and the coherence
``alpha`` of the density matrix::

    rho = [[1 - p1, conj(alpha)],
           [alpha,  p1        ]]

so ``p1`` sits in the lower-right entry and ``alpha`` below the diagonal.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError

POSITIVITY_TOL = 1e-12
CLAMP_TOL = 1e-9
PURITY_TOL = 1e-9


@dataclass(frozen=True)
class QubitState:
    p1: float
    alpha: complex = 0j

    def __post_init__(self):
        p1 = float(self.p1)
        alpha = complex(self.alpha)
        if not (math.isfinite(p1) and math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
            raise InvalidStateError(f"non-finite state entries p1={p1}, alpha={alpha}")
        if p1 < 0.0 or p1 > 1.0:
            if p1 < -CLAMP_TOL or p1 > 1.0 + CLAMP_TOL:
                raise InvalidStateError(f"population p1={p1} outside [0, 1]")
            p1 = min(max(p1, 0.0), 1.0)
        slack = p1 * (1.0 - p1) - abs(alpha) ** 2
        if slack < -POSITIVITY_TOL:
            if slack < -CLAMP_TOL:
                raise InvalidStateError(
                    f"state is not positive: p1(1-p1) - |alpha|^2 = {slack:.3e}")
            # round-off from quadrature: pull the coherence back onto the boundary
            alpha = alpha * math.sqrt(p1 * (1.0 - p1)) / abs(alpha)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "alpha", alpha)

    @property
    def matrix(self):
        return np.array([[1.0 - self.p1, self.alpha.conjugate()],
                         [self.alpha, self.p1]], dtype=complex)

    @property
    def purity(self):
        """tr(rho^2)."""
        return (1.0 - self.p1) ** 2 + self.p1 ** 2 + 2.0 * abs(self.alpha) ** 2

    @property
    def is_pure(self):
        return abs(1.0 - self.purity) <= PURITY_TOL

    def bloch(self):
        return BlochVector(2.0 * self.alpha.real, 2.0 * self.alpha.imag, 1.0 - 2.0 * self.p1)

    @classmethod
    def from_matrix(cls, rho, atol=1e-12):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (2, 2):
            raise InvalidStateError(f"expected a 2x2 matrix, got shape {rho.shape}")
        if not np.allclose(rho, rho.conj().T, atol=atol, rtol=0.0):
            raise InvalidStateError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > 1e-9:
            raise InvalidStateError(f"trace {np.trace(rho).real:.12g} != 1")
        return cls(rho[1, 1].real, rho[1, 0])


@dataclass(frozen=True)
class BlochVector:
    rx: float
    ry: float
    rz: float

    def __post_init__(self):
        if self.norm > 1.0 + CLAMP_TOL:
            raise InvalidStateError(f"Bloch vector norm {self.norm:.12g} exceeds 1")

    @property
    def norm(self):
        return math.sqrt(self.rx ** 2 + self.ry ** 2 + self.rz ** 2)


def state_from_theta(theta):
    """Pure state cos(theta/2)|0> + sin(theta/2)|1>."""
    s = math.sin(0.5 * theta)
    c = math.cos(0.5 * theta)
    return QubitState(s * s, s * c)


def state_from_r(r):
    """Pure state sqrt(r)|0> + sqrt(1-r)|1>, for r in [0, 1]."""
    if not 0.0 <= r <= 1.0:
        raise InvalidStateError(f"r={r} outside [0, 1]")
    return state_from_theta(2.0 * math.acos(math.sqrt(r)))


def state_from_bloch(v):
    if not isinstance(v, BlochVector):
        v = BlochVector(*v)
    return QubitState(0.5 * (1.0 - v.rz), complex(v.rx, v.ry) / 2.0)


MAXIMALLY_MIXED = QubitState(0.5, 0j)


def is_hermitian(m, atol=1e-12):
    m = np.asarray(m)
    return m.shape == (2, 2) and np.allclose(m, m.conj().T, atol=atol, rtol=0.0)


def eigvalsh2(m):
    """Eigenvalues of a Hermitian 2x2 matrix in closed form, ascending."""
    a = m[0, 0].real
    d = m[1, 1].real
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), abs(m[1, 0]))
    return mean - radius, mean + radius


def norms(m):
    """Operator, Hilbert-Schmidt and trace norms of a Hermitian 2x2 matrix.

    For Hermitian matrices the singular values are the moduli of the
    eigenvalues, which are computed from trace and determinant directly.
    """
    lo, hi = eigvalsh2(np.asarray(m))
    s1, s2 = abs(lo), abs(hi)
    return max(s1, s2), math.hypot(s1, s2), s1 + s2


def norms_batch(a, d, offdiag):
    """Vectorized :func:`norms` for Hermitian matrices ``[[a, conj(c)], [c, d]]``."""
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    mean = 0.5 * (a + d)
    radius = np.hypot(0.5 * (a - d), np.abs(offdiag))
    s1 = np.abs(mean - radius)
    s2 = np.abs(mean + radius)
    return np.maximum(s1, s2), np.hypot(s1, s2), s1 + s2


def purity_of(p1, alpha):
    return (1.0 - p1) ** 2 + p1 ** 2 + 2.0 * np.abs(alpha) ** 2


def super_fidelity(a, b):
    overlap = (1.0 - a.p1) * (1.0 - b.p1) + a.p1 * b.p1 \
        + 2.0 * (a.alpha.conjugate() * b.alpha).real
    mixed = max(0.0, 1.0 - a.purity) * max(0.0, 1.0 - b.purity)
    return min(1.0, max(0.0, overlap + math.sqrt(mixed)))


def overlap_pure(psi0, rho):
    """<psi0|rho|psi0> for a pure reference state; equals tr(psi0 rho)."""
    value = (1.0 - psi0.p1) * (1.0 - rho.p1) + psi0.p1 * rho.p1 \
        + 2.0 * (psi0.alpha.conjugate() * rho.alpha).real
    return min(1.0, max(0.0, value))


def bures_angle_pure(psi0, rho_t):
    if not psi0.is_pure:
        raise InvalidStateError(
            f"reference state must be pure (purity {psi0.purity:.12g})")
    return math.acos(math.sqrt(overlap_pure(psi0, rho_t)))


def bures_angle_mixed(a, b):
    """arccos of the super-fidelity (no square root, as used for mixed states)."""
    return math.acos(super_fidelity(a, b))


def coherence_l1(s):
    return 2.0 * abs(s.alpha)


def mixedness(s):
    return 2.0 * (1.0 - s.purity)


def tradeoff_mcl(s):
    """C_l1^2 + M_l, which for a qubit reduces to 4 p1 (1 - p1)."""
    return coherence_l1(s) ** 2 + mixedness(s)
