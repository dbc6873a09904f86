"""Density matrices and their statistical tensor components.

A spin-j density matrix expands in the irreducible tensor operator basis as

    rho = (1/(2j+1)) sum_{k,q} t[k,q] tau[k,q]^dag,   t[k,q] = Tr(rho tau[k,q]),

so the complex coefficients t[k,q] (statistical tensor parameters) carry the
same information as rho, organized by multipole rank k = 0 ... 2j. With the
unit-trace normalization used throughout this package, t[0,0] = 1, and
hermiticity of rho is equivalent to t[k,q]* = (-1)^q t[k,-q].
"""

import math

import numpy as np

from .angular import HalfInt, tensor_operator, wigner_D_matrix
from .errors import DomainError, ValidationError

__all__ = [
    "DensityMatrix",
    "TensorComponents",
    "from_tensor",
    "random_tensor_components",
    "rotate_density",
    "rotate_tensor",
    "to_tensor",
]

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
CONJUGATION_TOL = 1e-10


class DensityMatrix:
    """Validated (2j+1) x (2j+1) Hermitian unit-trace matrix, basis m = +j ... -j.

    Positivity is deliberately not enforced at construction, because the axial
    decomposition is well defined for any Hermitian unit-trace matrix; use
    :meth:`is_physical` or :meth:`min_eigenvalue` where positivity matters.
    The stored array is read-only.
    """

    __slots__ = ("j", "matrix")

    def __init__(self, matrix, j=None, *, tol: float = HERMITICITY_TOL):
        arr = np.array(matrix, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValidationError(f"expected a square matrix, got shape {arr.shape}")
        dim = arr.shape[0]
        jj = HalfInt(dim - 1) if j is None else HalfInt.coerce(j)
        if jj.twice + 1 != dim:
            raise ValidationError(f"matrix dimension {dim} does not match j={jj} (need {jj.twice + 1})")
        herm = float(np.max(np.abs(arr - arr.conj().T)))
        if herm > tol:
            raise ValidationError(f"matrix is not Hermitian (max deviation {herm:.3e})")
        trace = complex(arr.trace())
        if abs(trace - 1.0) > max(tol, TRACE_TOL):
            raise ValidationError(f"trace must be 1, got {trace:.12g}")
        arr.setflags(write=False)
        self.j = jj
        self.matrix = arr

    @property
    def dim(self) -> int:
        return self.j.twice + 1

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    def is_physical(self, tol: float = 1e-10) -> bool:
        return self.min_eigenvalue() >= -tol

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.matrix, self.matrix).real)

    @classmethod
    def maximally_mixed(cls, j) -> "DensityMatrix":
        jj = HalfInt.coerce(j)
        dim = jj.twice + 1
        return cls(np.eye(dim) / dim, jj)

    def __repr__(self) -> str:
        return f"DensityMatrix(j={self.j}, dim={self.dim})"


class TensorComponents:
    """Statistical tensor parameters t[k,q] for 0 <= k <= 2j, |q| <= k.

    Missing entries default to zero, except t[0,0] which defaults to 1
    (the unit-trace monopole). Component arrays returned by
    :meth:`rank_array` are ordered by descending projection q = +k ... -k.
    """

    __slots__ = ("j", "_c")

    def __init__(self, j, components=None):
        jj = HalfInt.coerce(j)
        tj = jj.twice
        data = {}
        for k in range(tj + 1):
            for q in range(-k, k + 1):
                data[(k, q)] = 0j
        data[(0, 0)] = 1.0 + 0j
        for key, value in (components or {}).items():
            k, q = key
            if not 0 <= k <= tj or abs(q) > k:
                raise DomainError(f"component (k={k}, q={q}) outside 0 <= k <= 2j, |q| <= k for j={jj}")
            data[(int(k), int(q))] = complex(value)
        self.j = jj
        self._c = data

    def __getitem__(self, key) -> complex:
        return self._c[key]

    def items(self):
        """Iterate ((k, q), value) with k ascending and q descending within each rank."""
        tj = self.j.twice
        for k in range(tj + 1):
            for q in range(k, -k - 1, -1):
                yield (k, q), self._c[(k, q)]

    def rank_array(self, k: int) -> np.ndarray:
        if not 0 <= k <= self.j.twice:
            raise DomainError(f"rank k={k} outside 0 <= k <= 2j for j={self.j}")
        return np.array([self._c[(k, q)] for q in range(k, -k - 1, -1)])

    def rank_norm2(self, k: int) -> float:
        return float(np.sum(np.abs(self.rank_array(k)) ** 2))

    def norm2(self) -> float:
        """Sum of |t[k,q]|^2 over every rank and projection."""
        return float(sum(abs(v) ** 2 for v in self._c.values()))

    def max_conjugation_defect(self) -> float:
        """Largest violation of t[k,q]* = (-1)^q t[k,-q]."""
        worst = 0.0
        for (k, q), v in self._c.items():
            if q < 0:
                continue
            defect = abs(v.conjugate() - (-1) ** q * self._c[(k, -q)])
            worst = max(worst, defect)
        return worst

    def validate(self, tol: float = CONJUGATION_TOL) -> None:
        """Raise ValidationError unless t[0,0] = 1 and conjugation symmetry holds within tol."""
        if abs(self._c[(0, 0)] - 1.0) > tol:
            raise ValidationError(f"t[0,0] must be 1 (unit trace), got {self._c[(0, 0)]:.12g}")
        defect = self.max_conjugation_defect()
        if defect > tol:
            raise ValidationError(f"conjugation symmetry violated by {defect:.3e} (tol {tol:.1e})")

    def __repr__(self) -> str:
        return f"TensorComponents(j={self.j})"


def to_tensor(rho) -> TensorComponents:
    """Extract every statistical tensor component t[k,q] = Tr(rho tau[k,q]).

    Accepts a DensityMatrix or anything convertible to one (validation errors
    propagate for non-Hermitian or wrongly sized input).
    """
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    tj = rho.j.twice
    comps = {}
    for k in range(tj + 1):
        for q in range(-k, k + 1):
            comps[(k, q)] = complex(np.einsum("ij,ji->", rho.matrix, tensor_operator(rho.j, k, q)))
    return TensorComponents(rho.j, comps)


def from_tensor(t: TensorComponents, *, conj_tol: float = 1e-8) -> DensityMatrix:
    """Rebuild the density matrix (1/(2j+1)) sum t[k,q] tau[k,q]^dag.

    Conjugation-symmetry violations beyond conj_tol raise ValidationError.
    Positivity is not checked; inspect DensityMatrix.min_eigenvalue() for that.
    """
    t.validate(conj_tol)
    dim = t.j.twice + 1
    acc = np.zeros((dim, dim), dtype=complex)
    for (k, q), value in t.items():
        if value != 0:
            acc += value * tensor_operator(t.j, k, q).conj().T
    return DensityMatrix(acc / dim, t.j, tol=max(conj_tol, HERMITICITY_TOL))


def rotate_tensor(t: TensorComponents, phi: float, theta: float, psi: float) -> TensorComponents:
    """Components of the same state in a frame rotated by the Euler angles.

    Each rank rotates independently: t'[k,q] = sum_q' D[k][q',q] t[k,q'],
    which preserves the per-rank norms sum_q |t[k,q]|^2.
    """
    comps = {}
    for k in range(t.j.twice + 1):
        vec = t.rank_array(k)
        if k == 0:
            comps[(0, 0)] = complex(vec[0])
            continue
        dmat = wigner_D_matrix(k, phi, theta, psi)
        new = dmat.T @ vec
        for i in range(2 * k + 1):
            comps[(k, k - i)] = complex(new[i])
    return TensorComponents(t.j, comps)


def rotate_density(rho: DensityMatrix, phi: float, theta: float, psi: float) -> DensityMatrix:
    """The density matrix as seen in the rotated frame: U^dag rho U with U = D^j.

    Consistent with :func:`rotate_tensor`:
    to_tensor(rotate_density(rho, ...)) == rotate_tensor(to_tensor(rho), ...).
    """
    u = wigner_D_matrix(rho.j, phi, theta, psi)
    return DensityMatrix(u.conj().T @ rho.matrix @ u, rho.j)


def random_tensor_components(j, rng: np.random.Generator, scale: float = 1.0) -> TensorComponents:
    """Random components satisfying the conjugation symmetry (not necessarily a positive state).

    Each rank k >= 1 gets independent complex Gaussians for q > 0, a real
    Gaussian for q = 0, and the mirrored values for q < 0.
    """
    jj = HalfInt.coerce(j)
    comps = {}
    for k in range(1, jj.twice + 1):
        comps[(k, 0)] = complex(rng.normal(scale=scale))
        for q in range(1, k + 1):
            v = complex(rng.normal(scale=scale), rng.normal(scale=scale))
            comps[(k, q)] = v
            comps[(k, -q)] = (-1) ** q * v.conjugate()
    return TensorComponents(jj, comps)
