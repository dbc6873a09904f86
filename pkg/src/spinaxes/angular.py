"""Numerical angular momentum algebra.

Clebsch-Gordan coefficients and Wigner d/D rotation matrices are evaluated
from their exact finite-sum expressions with integer factorial arithmetic,
which keeps them accurate to a few ulp for the quantum numbers used here
(j up to ~10, far past catastrophic-cancellation territory for naive float
factorials). On top of these sit the irreducible tensor operators
normalized to ``Tr(tau[k,q]^dag tau[k',q']) = (2j+1) delta_kk' delta_qq'``,
spherical (rank-1) components of unit vectors, and Clebsch-Gordan coupling
of spherical tensors.

Conventions
-----------
* Half-integer quantum numbers are exact: :class:`HalfInt` stores twice the
  value as an integer.
* Matrix bases are ordered by descending projection, ``m = +j ... -j``.
* Component arrays of a rank-k spherical tensor are likewise ordered by
  descending projection, ``q = +k ... -k``.
* Euler angles ``(phi, theta, psi)`` follow the z-y-z convention with

  ``D[k][q',q](phi, theta, psi) = exp(-i q' phi) d[k][q',q](theta) exp(-i q psi)``

  so that the components of a tensor in a rotated frame are
  ``t'[q] = sum_q' D[k][q',q] t[q']`` (sum over the first index).
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "HalfInt",
    "SphericalVector",
    "clebsch_gordan",
    "couple",
    "euler_rotation_cartesian",
    "tensor_operator",
    "unit_vector_components",
    "wigner_D",
    "wigner_D_matrix",
    "wigner_d_small",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, order=True)
class HalfInt:
    """Exact integer or half-integer quantum number, stored as twice its value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, (int, np.integer)) or isinstance(self.twice, bool):
            raise DomainError(f"HalfInt stores an integer twice-value, got {self.twice!r}")

    @classmethod
    def coerce(cls, value) -> "HalfInt":
        """Accept a HalfInt, an int, an exactly half-integral float, or a string like '3/2'."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return cls(2 * int(value))
        if isinstance(value, float):
            twice = round(2.0 * value)
            if abs(2.0 * value - twice) > 1e-9:
                raise DomainError(f"{value!r} is not an integer or half-integer")
            return cls(twice)
        if isinstance(value, str):
            text = value.strip()
            if "/" in text:
                num, _, den = text.partition("/")
                if den.strip() != "2":
                    raise DomainError(f"cannot parse {value!r} as a half-integer")
                return cls(int(num))
            return cls.coerce(float(text))
        raise DomainError(f"cannot interpret {value!r} as a half-integer")

    @property
    def value(self) -> float:
        return self.twice / 2.0

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __float__(self) -> float:
        return self.twice / 2.0

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self.twice})"

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.coerce(other).twice)

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.coerce(other).twice)

    def __neg__(self):
        return HalfInt(-self.twice)


def _twice(value) -> int:
    return HalfInt.coerce(value).twice


def _check_projection(tj: int, tm: int, names: str = "m, j") -> None:
    if (tj + tm) % 2:
        raise DomainError(f"projection and momentum must differ by an integer ({names})")
    if abs(tm) > tj:
        raise DomainError(f"|projection| exceeds momentum ({names})")


@lru_cache(maxsize=None)
def _cg_exact(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> float:
    """Clebsch-Gordan coefficient from the Racah sum with exact rational arithmetic.

    Arguments are twice the quantum numbers. Selection-rule failures return 0;
    structurally invalid combinations raise DomainError.
    """
    if min(tj1, tj2, tj3) < 0:
        raise DomainError("angular momenta must be non-negative")
    if (tj1 + tj2 + tj3) % 2:
        raise DomainError("j1 + j2 + j3 must be an integer")
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        if (tj + tm) % 2:
            raise DomainError("each m must differ from its j by an integer")
    if tm1 + tm2 != tm3:
        return 0.0
    if not abs(tj1 - tj2) <= tj3 <= tj1 + tj2:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm3) > tj3:
        return 0.0

    f = math.factorial
    a = (tj1 + tj2 - tj3) // 2
    b = (tj1 - tj2 + tj3) // 2
    c = (-tj1 + tj2 + tj3) // 2
    pref2 = Fraction(
        (tj3 + 1)
        * f(a) * f(b) * f(c)
        * f((tj1 + tm1) // 2) * f((tj1 - tm1) // 2)
        * f((tj2 + tm2) // 2) * f((tj2 - tm2) // 2)
        * f((tj3 + tm3) // 2) * f((tj3 - tm3) // 2),
        f((tj1 + tj2 + tj3) // 2 + 1),
    )
    j1m1 = (tj1 - tm1) // 2
    j2pm2 = (tj2 + tm2) // 2
    d1 = (tj3 - tj2 + tm1) // 2
    d2 = (tj3 - tj1 - tm2) // 2
    total = Fraction(0)
    for z in range(max(0, -d1, -d2), min(a, j1m1, j2pm2) + 1):
        total += Fraction(
            (-1) ** z,
            f(z) * f(a - z) * f(j1m1 - z) * f(j2pm2 - z) * f(d1 + z) * f(d2 + z),
        )
    if total == 0:
        return 0.0
    return float(total) * math.sqrt(pref2)


def clebsch_gordan(j1, j2, j3, m1, m2, m3) -> float:
    """Clebsch-Gordan coefficient C(j1 j2 j3; m1 m2 m3) = <j1 m1 j2 m2 | j3 m3>.

    Evaluated via the Racah finite sum with exact integer factorials,
    converted to float only at the end. Returns 0 when the triangle rule
    or m3 = m1 + m2 fails; raises DomainError for structurally invalid
    half-integer combinations (e.g. j1 + j2 + j3 not an integer).
    """
    return _cg_exact(_twice(j1), _twice(j2), _twice(j3), _twice(m1), _twice(m2), _twice(m3))


def wigner_d_small(j, mp, m, theta: float) -> float:
    """Wigner small-d rotation matrix element d^j_{m',m}(theta) from the Wigner sum."""
    tj, tmp, tm = _twice(j), _twice(mp), _twice(m)
    _check_projection(tj, tmp, "m', j")
    _check_projection(tj, tm, "m, j")
    f = math.factorial
    jm, jmm = (tj + tm) // 2, (tj - tm) // 2
    jmp, jmmp = (tj + tmp) // 2, (tj - tmp) // 2
    mu = (tmp - tm) // 2  # m' - m
    pref = math.sqrt(f(jmp) * f(jmmp) * f(jm) * f(jmm))
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    total = 0.0
    for k in range(max(0, -mu), min(jm, jmmp) + 1):
        denom = f(jm - k) * f(k) * f(mu + k) * f(jmmp - k)
        total += ((-1) ** (mu + k)) * c ** (tj - mu - 2 * k) * s ** (mu + 2 * k) / denom
    return pref * total


def wigner_D(k, qp, q, phi: float, theta: float, psi: float) -> complex:
    """Wigner rotation matrix element D^k_{q',q}(phi, theta, psi).

    z-y-z convention: exp(-i q' phi) d^k_{q',q}(theta) exp(-i q psi).
    Accepts half-integer ranks so the same routine serves spin-j rotations.
    """
    d = wigner_d_small(k, qp, q, theta)
    return cmath.exp(-1j * float(HalfInt.coerce(qp)) * phi) * d * cmath.exp(
        -1j * float(HalfInt.coerce(q)) * psi
    )


def wigner_D_matrix(j, phi: float, theta: float, psi: float) -> np.ndarray:
    """Full (2j+1) x (2j+1) Wigner D matrix, rows/columns ordered m = +j ... -j."""
    tj = _twice(j)
    dim = tj + 1
    out = np.empty((dim, dim), dtype=complex)
    proj = [HalfInt(t) for t in range(tj, -tj - 2, -2)]
    for r, mp in enumerate(proj):
        for c, m in enumerate(proj):
            out[r, c] = wigner_D(HalfInt(tj), mp, m, phi, theta, psi)
    return out


@lru_cache(maxsize=None)
def _tensor_operator_cached(tj: int, k: int, q: int) -> np.ndarray:
    dim = tj + 1
    mat = np.zeros((dim, dim), dtype=complex)
    scale = math.sqrt(2 * k + 1)
    for col, tm in enumerate(range(tj, -tj - 2, -2)):
        tmp = tm + 2 * q
        if abs(tmp) > tj:
            continue
        row = (tj - tmp) // 2
        mat[row, col] = scale * _cg_exact(tj, 2 * k, tj, tm, 2 * q, tmp)
    mat.setflags(write=False)
    return mat


def tensor_operator(j, k: int, q: int) -> np.ndarray:
    """Irreducible tensor operator tau^k_q in the |j,m> basis (m = +j ... -j).

    Matrix elements <j m'|tau^k_q|j m> = sqrt(2k+1) C(j k j; m q m'), which
    yields Tr(tau^k_q^dag tau^k'_q') = (2j+1) delta_kk' delta_qq',
    tau^k_q^dag = (-1)^q tau^k_{-q}, and tau^0_0 = identity. The returned
    array is cached and read-only.
    """
    tj = _twice(j)
    if not isinstance(k, (int, np.integer)) or not isinstance(q, (int, np.integer)):
        raise DomainError("tensor rank k and projection q must be integers")
    if not 0 <= k <= tj:
        raise DomainError(f"rank k={k} outside 0 <= k <= 2j for j={HalfInt(tj)}")
    if abs(q) > k:
        raise DomainError(f"projection q={q} exceeds rank k={k}")
    return _tensor_operator_cached(tj, int(k), int(q))


def couple(a, b, rank: int) -> np.ndarray:
    """Clebsch-Gordan coupling of two spherical tensors to a tensor of the given rank.

    Input/output component arrays are ordered by descending projection.
    The q component of the output is sum_{q1+q2=q} C(k1 k2 K; q1 q2 q) a_q1 b_q2.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 1 or b.ndim != 1 or a.size % 2 == 0 or b.size % 2 == 0:
        raise DomainError("spherical tensor component arrays must be 1-d with odd length")
    k1 = (a.size - 1) // 2
    k2 = (b.size - 1) // 2
    if not abs(k1 - k2) <= rank <= k1 + k2:
        raise DomainError(f"rank {rank} violates the triangle rule for inputs of rank {k1}, {k2}")
    out = np.zeros(2 * rank + 1, dtype=complex)
    for i1 in range(a.size):
        q1 = k1 - i1
        for i2 in range(b.size):
            q2 = k2 - i2
            q = q1 + q2
            if abs(q) > rank:
                continue
            cg = _cg_exact(2 * k1, 2 * k2, 2 * rank, 2 * q1, 2 * q2, 2 * q)
            if cg:
                out[rank - q] += cg * a[i1] * b[i2]
    return out


def unit_vector_components(theta: float, phi: float) -> np.ndarray:
    """Spherical (rank-1) components of the unit vector at polar angles (theta, phi).

    Ordered (+1, 0, -1): Q_0 = cos(theta), Q_{+-1} = -+ sin(theta) exp(+-i phi) / sqrt(2),
    i.e. sqrt(4 pi / 3) Y_{1q}(theta, phi).
    """
    s = math.sin(theta)
    return np.array(
        [
            -s * cmath.exp(1j * phi) / math.sqrt(2.0),
            complex(math.cos(theta)),
            s * cmath.exp(-1j * phi) / math.sqrt(2.0),
        ]
    )


@dataclass(frozen=True)
class SphericalVector:
    """Unit vector on the sphere with its rank-1 spherical components."""

    theta: float
    phi: float

    def __post_init__(self):
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise DomainError(f"theta={self.theta} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(self.theta, 0.0), math.pi))
        phi = self.phi % _TWO_PI
        if _TWO_PI - phi < 1e-12:  # fp wraparound of azimuths a hair below zero
            phi = 0.0
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_cartesian(cls, vec) -> "SphericalVector":
        v = np.asarray(vec, dtype=float)
        norm = np.linalg.norm(v)
        if norm < 1e-300:
            raise DomainError("cannot normalize the zero vector")
        v = v / norm
        theta = math.acos(min(1.0, max(-1.0, v[2])))
        phi = math.atan2(v[1], v[0]) % _TWO_PI
        return cls(theta, phi)

    @property
    def components(self) -> np.ndarray:
        return unit_vector_components(self.theta, self.phi)

    @property
    def cartesian(self) -> np.ndarray:
        s = math.sin(self.theta)
        return np.array([s * math.cos(self.phi), s * math.sin(self.phi), math.cos(self.theta)])


def euler_rotation_cartesian(phi: float, theta: float, psi: float) -> np.ndarray:
    """3x3 rotation matrix Rz(phi) Ry(theta) Rz(psi) for the z-y-z Euler convention."""

    def rz(a):
        c, s = math.cos(a), math.sin(a)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    def ry(a):
        c, s = math.cos(a), math.sin(a)
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])

    return rz(phi) @ ry(theta) @ rz(psi)
