"""Spin-1 spin-zero measurements on real density operators.

The squared spin component along a unit direction ``w`` is ``I - w w^T``.
Its 0-eigenspace projector ``w w^T`` (rank 1) gives outcome bit 0, the
complement ``I - w w^T`` (rank 2) gives outcome bit 1. For an orthonormal
frame the three squared components commute and sum to ``2 I``.

States are restricted to real symmetric matrices: every state reachable from
``I/3`` by these projectors is real.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import PreconditionError, StateValidationError
from .geometry import ORTH_TOL, UnitVector3

ALG_TOL = 1e-12
PSD_TOL = 1e-10
# below this a branch post-state is left undefined
BRANCH_EPS = 1e-14

IDENTITY = np.eye(3)


def check_bit(bit) -> int:
    if bit not in (0, 1) or isinstance(bit, bool):
        raise ValueError(f"outcome bit must be 0 or 1, got {bit!r}")
    return int(bit)


def _frozen(m) -> np.ndarray:
    arr = np.array(m, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (3, 3):
            raise StateValidationError(f"expected a 3x3 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise StateValidationError("non-finite matrix entries")
        if np.max(np.abs(m - m.T)) > ALG_TOL:
            raise StateValidationError("matrix is not symmetric")
        if abs(np.trace(m) - 1.0) > ALG_TOL:
            raise StateValidationError(f"trace {np.trace(m)!r} != 1")
        if np.linalg.eigvalsh(m).min() < -PSD_TOL:
            raise StateValidationError("matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def maximally_mixed(cls) -> DensityOperator:
        return _MAXIMALLY_MIXED

    @classmethod
    def _trusted(cls, matrix: np.ndarray) -> DensityOperator:
        # Lüders images of valid states; skips the eigenvalue check
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", _frozen(matrix))
        return obj


_MAXIMALLY_MIXED = DensityOperator(IDENTITY / 3.0)


@dataclass(frozen=True, eq=False)
class Projector:
    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def complement(self) -> Projector:
        return Projector(IDENTITY - self.matrix, 3 - self.rank)


def spin_zero_projector(w: UnitVector3) -> Projector:
    """Projector ``w w^T`` onto the spin-zero eigenspace along ``w``."""
    a = w.array
    return Projector(np.outer(a, a), 1)


def squared_spin(w: UnitVector3) -> np.ndarray:
    """Squared spin component ``I - w w^T`` along ``w``."""
    return IDENTITY - spin_zero_projector(w).matrix


def outcome_projector(w: UnitVector3, bit: int) -> Projector:
    p0 = spin_zero_projector(w)
    return p0 if check_bit(bit) == 0 else p0.complement


class Measurement(NamedTuple):
    prob0: float
    post0: Optional[DensityOperator]
    prob1: float
    post1: Optional[DensityOperator]

    def branch(self, bit: int) -> tuple[float, Optional[DensityOperator]]:
        return (self.prob0, self.post0) if check_bit(bit) == 0 else (self.prob1, self.post1)


def _luders(rho: np.ndarray, proj: np.ndarray) -> tuple[float, Optional[DensityOperator]]:
    prob = float(np.trace(proj @ rho))
    if prob <= BRANCH_EPS:
        return max(prob, 0.0), None
    post = proj @ rho @ proj
    # symmetrize and normalize by the post-state's own trace (equal to prob
    # in exact arithmetic) so small branches keep unit trace
    post = (post + post.T) / 2
    return prob, DensityOperator._trusted(post / np.trace(post))


def measure(rho: DensityOperator, w: UnitVector3) -> Measurement:
    """Spin-zero measurement along ``w`` with Lüders state update.

    A post-state is ``None`` when its branch probability is at most 1e-14.
    """
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    p0 = spin_zero_projector(w).matrix
    prob0, post0 = _luders(rho.matrix, p0)
    prob1, post1 = _luders(rho.matrix, IDENTITY - p0)
    return Measurement(prob0, post0, prob1, post1)


def sequential_prob(
    directions: list[UnitVector3], bits: list[int], rho: DensityOperator | None = None
) -> float:
    """Probability that successive measurements along ``directions`` give ``bits``."""
    state = DensityOperator.maximally_mixed() if rho is None else rho
    total = 1.0
    for w, bit in zip(directions, bits, strict=True):
        if state is None:
            return 0.0
        prob, state = _luders(state.matrix, outcome_projector(w, bit).matrix)
        total *= prob
    return total


def twinned_joint_prob(u: UnitVector3, i: int, v: UnitVector3, j: int) -> float:
    """Joint spin-zero statistics of a twinned pair measured along ``u`` and ``v``.

    Twinned particles answer identically in every direction, so the pair
    behaves like one maximally mixed particle measured first along ``u``
    and then along ``v``.
    """
    return sequential_prob([u, v], [check_bit(i), check_bit(j)])


def star_closed_form(u: UnitVector3, i: int, v: UnitVector3, j: int) -> float:
    """Closed form of :func:`twinned_joint_prob`.

    The (1, 1) entry is fixed by normalization of the four-outcome table.
    """
    x = u.dot(v) ** 2
    i, j = check_bit(i), check_bit(j)
    if (i, j) == (0, 0):
        return x / 3.0
    if i != j:
        return (1.0 - x) / 3.0
    return (1.0 + x) / 3.0


def joint_table(u: UnitVector3, v: UnitVector3) -> np.ndarray:
    return np.array([[twinned_joint_prob(u, i, v, j) for j in (0, 1)] for i in (0, 1)])


@dataclass(frozen=True)
class ResolutionReport:
    resolution_residual: float
    pattern_probs: dict[tuple[int, int, int], float]

    @property
    def ok(self) -> bool:
        perms = {(0, 1, 1), (1, 0, 1), (1, 1, 0)}
        return self.resolution_residual <= ALG_TOL and all(
            abs(p - (1 / 3 if pat in perms else 0.0)) <= ALG_TOL
            for pat, p in self.pattern_probs.items()
        )


def verify_101_resolution(triple: tuple[UnitVector3, UnitVector3, UnitVector3]) -> ResolutionReport:
    """Check that an orthonormal frame always answers 1, 0, 1 in some order.

    Every branch of the sequential measurement tree on ``I/3`` is enumerated;
    the probabilities of all eight bit patterns are reported.
    """
    if len(triple) != 3:
        raise PreconditionError("expected three directions")
    for p, q in itertools.combinations(triple, 2):
        if abs(p.dot(q)) > ORTH_TOL:
            raise PreconditionError(f"frame is not orthogonal: dot = {p.dot(q)!r}")
    total = sum(spin_zero_projector(w).matrix for w in triple)
    residual = float(np.max(np.abs(total - IDENTITY)))
    probs = {
        bits: sequential_prob(list(triple), list(bits))
        for bits in itertools.product((0, 1), repeat=3)
    }
    return ResolutionReport(residual, probs)


def spin_bit_entropy() -> float:
    """Shannon entropy in bits of one spin-zero answer on ``I/3``."""
    p0, p1 = 1.0 / 3.0, 2.0 / 3.0
    return -p1 * math.log2(p1) - p0 * math.log2(p0)
