"""Rotational (local-unitary) invariants of the axial decomposition.

The scale factors r_k and all pairwise scalar couplings
(Qi x Qj)^0_0 = -(Qi . Qj)/sqrt(3) of the axes are unchanged when the state
is rotated, giving C(M, 2) + (#ranks present) invariants for M axes; for a
full-rank spin-j state that is C(j(2j+1), 2) + 2j. Signed pairwise values
depend on the hemisphere convention used to pick axis representatives, so
the convention-free absolute cosines are carried alongside.
"""

import math
from dataclasses import dataclass

import numpy as np

from .angular import HalfInt, couple, euler_rotation_cartesian
from .axes import MultiaxialForm, decompose
from .errors import DomainError
from .tensors import DensityMatrix, rotate_tensor, to_tensor

__all__ = [
    "InvarianceReport",
    "InvariantSet",
    "enumerate_invariants",
    "invariant_count",
    "spin1_named",
    "verify_invariance",
]


@dataclass(frozen=True, eq=False)
class InvariantSet:
    """Scalars r_k plus every pairwise axis invariant, with labels (rank, index)."""

    j: HalfInt
    scalars: tuple            # ((k, r_k), ...)
    pairwise: tuple           # ((label_i, label_j, signed value), ...)
    abs_cosines: np.ndarray   # |Qi . Qj| over all axes, diagonal 1
    axis_labels: tuple
    count: int

    def pairwise_abs_sorted(self) -> np.ndarray:
        return np.sort(np.array([abs(v) for _, _, v in self.pairwise]))

    def get_pairwise(self, label_a, label_b) -> float:
        key = (min(label_a, label_b), max(label_a, label_b))
        for la, lb, v in self.pairwise:
            if (la, lb) == key:
                return v
        raise KeyError(f"no pairwise invariant for {label_a} x {label_b}")


def invariant_count(j) -> int:
    """C(j(2j+1), 2) + 2j, the invariant count for a full-rank spin-j state."""
    tj = HalfInt.coerce(j).twice
    if tj < 1:
        raise DomainError("j must be at least 1/2")
    n_axes = tj * (tj + 1) // 2  # j(2j+1) is always an integer
    return math.comb(n_axes, 2) + tj


def enumerate_invariants(form: MultiaxialForm) -> InvariantSet:
    """All invariants of a decomposition: r_k plus (Qi x Qj)^0_0 over every axis pair.

    Pairs span all ranks, intra-rank included. Axes of absent ranks contribute
    nothing, so the count reflects the axes actually present.
    """
    labeled = form.labeled_axes()
    labels = tuple(lbl for lbl, _ in labeled)
    pairwise = []
    n = len(labeled)
    abs_cos = np.eye(n)
    for a in range(n):
        la, ax_a = labeled[a]
        for b in range(a + 1, n):
            lb, ax_b = labeled[b]
            value = float(couple(ax_a.components, ax_b.components, 0)[0].real)
            pairwise.append((la, lb, value))
            abs_cos[a, b] = abs_cos[b, a] = abs(ax_a.dot(ax_b))
    scalars = form.scalars
    abs_cos.setflags(write=False)
    return InvariantSet(
        j=form.j,
        scalars=scalars,
        pairwise=tuple(pairwise),
        abs_cosines=abs_cos,
        axis_labels=labels,
        count=len(scalars) + len(pairwise),
    )


def spin1_named(inv: InvariantSet) -> dict:
    """The five classic spin-1 invariants keyed I1..I5; ``None`` where a rank is absent.

    I1 = r_1, I2 = r_2, I3 = (Q11 x Q21)^0_0, I4 = (Q11 x Q22)^0_0,
    I5 = (Q21 x Q22)^0_0, with Qki the i-th axis of rank k.
    """
    if inv.j != HalfInt(2):
        raise DomainError("named invariants I1..I5 are defined for spin-1 only")
    scal = dict(inv.scalars)
    pw = {(la, lb): v for la, lb, v in inv.pairwise}
    return {
        "I1": scal.get(1),
        "I2": scal.get(2),
        "I3": pw.get(((1, 0), (2, 0))),
        "I4": pw.get(((1, 0), (2, 1))),
        "I5": pw.get(((2, 0), (2, 1))),
    }


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of randomized rotation-invariance trials."""

    trials: int
    passed: bool
    max_scalar_dev: float
    max_pairwise_dev: float
    max_axis_dev: float
    failures: tuple


def _match_lines(expected: list[np.ndarray], actual: list[np.ndarray]) -> float:
    """Greedy +-line matching; returns the largest matched angle in radians."""
    worst = 0.0
    pool = list(actual)
    for e in expected:
        dots = [abs(float(np.dot(e, a))) for a in pool]
        best = int(np.argmax(dots))
        worst = max(worst, math.acos(min(1.0, dots[best])))
        pool.pop(best)
    return worst


def verify_invariance(
    rho: DensityMatrix,
    trials: int = 50,
    seed: int = 0,
    *,
    scalar_tol: float = 1e-8,
    pairwise_tol: float = 1e-8,
    axis_tol: float = 1e-7,
) -> InvarianceReport:
    """Compare the invariants of rho against those of randomly rotated copies.

    For each trial a random Euler triple rotates the tensor components; the
    r_k must match within scalar_tol, the multiset of |pairwise| values within
    pairwise_tol, and the axes (as unsigned lines, after rotating the
    originals along) within axis_tol. Signed pairwise values are
    convention-dependent and are compared at the absolute-value level.
    """
    rng = np.random.default_rng(seed)
    base_t = to_tensor(rho)
    base_form = decompose(base_t)
    base_inv = enumerate_invariants(base_form)
    base_scalars = dict(base_inv.scalars)
    base_abs = base_inv.pairwise_abs_sorted()

    max_scalar = 0.0
    max_pair = 0.0
    max_axis = 0.0
    failures = []
    for trial in range(trials):
        phi = rng.uniform(0.0, 2.0 * math.pi)
        theta = math.acos(rng.uniform(-1.0, 1.0))
        psi = rng.uniform(0.0, 2.0 * math.pi)
        rot_form = decompose(rotate_tensor(base_t, phi, theta, psi))
        rot_inv = enumerate_invariants(rot_form)
        if rot_form.present_ranks != base_form.present_ranks:
            failures.append(
                f"trial {trial}: rank structure changed under rotation "
                f"(phi={phi!r}, theta={theta!r}, psi={psi!r})"
            )
            continue
        for k, r in rot_inv.scalars:
            max_scalar = max(max_scalar, abs(r - base_scalars[k]))
        rot_abs = rot_inv.pairwise_abs_sorted()
        if rot_abs.size == base_abs.size and rot_abs.size:
            max_pair = max(max_pair, float(np.max(np.abs(rot_abs - base_abs))))
        mat = euler_rotation_cartesian(phi, theta, psi)
        for k in base_form.present_ranks:
            expected = [mat.T @ ax.cartesian for ax in base_form.rank(k).axes]
            actual = [ax.cartesian for ax in rot_form.rank(k).axes]
            max_axis = max(max_axis, _match_lines(expected, actual))
        if max_scalar > scalar_tol or max_pair > pairwise_tol or max_axis > axis_tol:
            failures.append(
                f"trial {trial}: deviation beyond tolerance at rotation "
                f"(phi={phi!r}, theta={theta!r}, psi={psi!r}): "
                f"scalar {max_scalar:.3e}, pairwise {max_pair:.3e}, axis {max_axis:.3e}"
            )
            break
    passed = not failures and max_scalar <= scalar_tol and max_pair <= pairwise_tol and max_axis <= axis_tol
    return InvarianceReport(
        trials=trials,
        passed=passed,
        max_scalar_dev=max_scalar,
        max_pairwise_dev=max_pair,
        max_axis_dev=max_axis,
        failures=tuple(failures),
    )
