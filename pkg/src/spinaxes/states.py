"""State constructors: symmetric projections of qubit products and a PPT flag.

Covers the two families used throughout the examples and sweeps: the
symmetrized product of two (or N) spinors, and the two-beam mixed state
obtained by projecting a product of polarized qubits onto the triplet
(spin-1) subspace. Both are built in the frame whose z-axis bisects the two
constituent directions and whose x-axis lies in their plane (azimuths 0 and
pi), the standard choice in which the rank-1 components t[1,+-1] vanish.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .angular import HalfInt
from .errors import DomainError, ValidationError
from .tensors import DensityMatrix

__all__ = [
    "ChannelParams",
    "PptResult",
    "Spinor",
    "TRIPLET_ISOMETRY",
    "channel_mixed",
    "ppt_separable",
    "pure_two_spinor",
    "random_density_matrix",
    "symmetrize_pure",
]

# rows |1,1>, |1,0>, |1,-1> in the product basis up-up, up-down, down-up, down-down
TRIPLET_ISOMETRY = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0), 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)
TRIPLET_ISOMETRY.setflags(write=False)

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Spinor:
    """Single-qubit pure state by Bloch angles: (cos(theta/2), sin(theta/2) e^{i phi})."""

    theta: float
    phi: float

    def __post_init__(self):
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise DomainError(f"theta={self.theta} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(self.theta, 0.0), math.pi))
        object.__setattr__(self, "phi", self.phi % _TWO_PI)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array(
            [
                complex(math.cos(self.theta / 2.0)),
                math.sin(self.theta / 2.0) * complex(math.cos(self.phi), math.sin(self.phi)),
            ]
        )


@dataclass(frozen=True)
class ChannelParams:
    """Two polarized beams: magnitudes p1, p2 in [0,1] and the angle parameter two_theta.

    two_theta is the sum of the polar tilts of the two polarization directions
    from the frame z-axis (equal to their opening angle when it is <= pi); the
    closed-form literature writes everything in terms of the half-angle
    theta = two_theta / 2.
    """

    p1: float
    p2: float
    two_theta: float

    def __post_init__(self):
        for name, p in (("p1", self.p1), ("p2", self.p2)):
            if not 0.0 <= p <= 1.0:
                raise DomainError(f"{name}={p} outside [0, 1]")
        if not -1e-12 <= self.two_theta <= _TWO_PI + 1e-12:
            raise DomainError(f"two_theta={self.two_theta} outside [0, 2 pi]")

    @classmethod
    def equal(cls, p: float, two_theta: float) -> "ChannelParams":
        return cls(p, p, two_theta)


def symmetrize_pure(spinors) -> DensityMatrix:
    """Project a product of N spinors onto the symmetric (spin N/2) subspace.

    The Dicke-basis amplitudes are read off combinatorially: with
    |chi_i> = a_i |up> + b_i |down>, the coefficient of x^n in
    prod_i (a_i x + b_i) is the unnormalized amplitude on the n-up Dicke
    state, up to the binomial normalization. Scales to dozens of qubits
    without ever forming the 2^N product space.
    """
    spinors = list(spinors)
    n = len(spinors)
    if n < 1:
        raise DomainError("need at least one spinor")
    poly = np.array([1.0 + 0j])
    for sp in spinors:
        poly = np.convolve(poly, sp.amplitudes)
    # poly[i] multiplies x^(n-i); index i corresponds to m = j - i
    amps = poly / np.sqrt([math.comb(n, i) for i in range(n + 1)])
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if norm2 < 1e-14:
        raise ValidationError("symmetric component of the product state vanishes")
    vec = amps / math.sqrt(norm2)
    return DensityMatrix(np.outer(vec, vec.conj()), HalfInt(n))


def pure_two_spinor(two_theta: float) -> DensityMatrix:
    """Symmetrized two-spinor pure state in the bisector frame, as a spin-1 matrix.

    The spinors sit at polar angle theta = two_theta/2 with azimuths 0 and pi,
    giving amplitudes only on m = +1 and m = -1 with a relative minus sign.
    """
    if not -1e-12 <= two_theta <= _TWO_PI + 1e-12:
        raise DomainError(f"two_theta={two_theta} outside [0, 2 pi]")
    theta = two_theta / 2.0
    ch2 = math.cos(theta / 2.0) ** 2
    sh2 = math.sin(theta / 2.0) ** 2
    scale = 2.0 / (1.0 + math.cos(theta) ** 2)
    mat = scale * np.array(
        [
            [ch2 * ch2, 0.0, -sh2 * ch2],
            [0.0, 0.0, 0.0],
            [-sh2 * ch2, 0.0, sh2 * sh2],
        ]
    )
    return DensityMatrix(mat, HalfInt(2))


def _slf_polar_angles(p1: float, p2: float, two_theta: float) -> tuple[float, float]:
    """Polar tilts (alpha, beta) of the two beams, azimuths 0 and pi respectively.

    Chosen so the frame z-axis carries the whole rank-1 polarization:
    p1 sin(alpha) = p2 sin(beta) with alpha + beta = two_theta. For equal
    magnitudes this is the plain bisector alpha = beta = theta; the
    antiparallel equal-magnitude case (two_theta = pi) is degenerate and
    falls back to the same bisector convention.
    """
    y = p2 * math.sin(two_theta)
    x = p1 + p2 * math.cos(two_theta)
    if abs(y) < 1e-15 and abs(x) < 1e-15:
        half = two_theta / 2.0
        return (half, half)
    alpha = math.atan2(y, x) % math.pi
    if alpha < two_theta - math.pi - 1e-9:
        alpha += math.pi
    beta = two_theta - alpha
    alpha = min(max(alpha, 0.0), math.pi)
    beta = min(max(beta, 0.0), math.pi)
    return (alpha, beta)


def _polarized_qubit(p: float, polar: float, azimuth: float) -> np.ndarray:
    nx = p * math.sin(polar) * math.cos(azimuth)
    ny = p * math.sin(polar) * math.sin(azimuth)
    nz = p * math.cos(polar)
    return 0.5 * np.array([[1.0 + nz, nx - 1j * ny], [nx + 1j * ny, 1.0 - nz]])


def channel_mixed(params: ChannelParams) -> DensityMatrix:
    """Triplet projection of two polarized beams, renormalized to unit trace.

    The beams are placed in the xz-plane (azimuths 0 and pi) with polar tilts
    splitting two_theta so that the rank-1 polarization lies along z; the
    product state is then projected onto the spin-1 subspace. At p1 = p2 = 1
    this reduces exactly to :func:`pure_two_spinor`.
    """
    alpha, beta = _slf_polar_angles(params.p1, params.p2, params.two_theta)
    rho1 = _polarized_qubit(params.p1, alpha, 0.0)
    rho2 = _polarized_qubit(params.p2, beta, math.pi)
    combined = np.kron(rho1, rho2)
    projected = TRIPLET_ISOMETRY @ combined @ TRIPLET_ISOMETRY.conj().T
    trace = float(projected.trace().real)
    return DensityMatrix(projected / trace, HalfInt(2))


class PptResult(NamedTuple):
    separable: bool
    min_eigenvalue: float


def ppt_separable(rho: DensityMatrix, tol: float = 1e-10) -> PptResult:
    """Peres-Horodecki test for a spin-1 (triplet-embedded) state.

    Embeds the 3x3 matrix into the two-qubit space with zero singlet
    component, partial-transposes the second qubit, and reports the minimum
    eigenvalue; for 2x2 systems positivity of the partial transpose is exact
    for separability.
    """
    if rho.dim != 3:
        raise DomainError("PPT flag is implemented for spin-1 (3x3) states")
    four = TRIPLET_ISOMETRY.conj().T @ rho.matrix @ TRIPLET_ISOMETRY
    pt = four.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    eigenvalues = np.linalg.eigvalsh(pt)
    lowest = float(eigenvalues[0])
    return PptResult(separable=bool(lowest >= -tol), min_eigenvalue=lowest)


def random_density_matrix(j, rng: np.random.Generator, *, pure: bool = False) -> DensityMatrix:
    """Random unit-trace positive matrix (Ginibre construction) or random pure state."""
    dim = HalfInt.coerce(j).twice + 1
    if pure:
        vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        vec /= np.linalg.norm(vec)
        return DensityMatrix(np.outer(vec, vec.conj()), j)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    mat = g @ g.conj().T
    return DensityMatrix(mat / mat.trace().real, j)
