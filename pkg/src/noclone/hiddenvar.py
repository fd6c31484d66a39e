"""Deterministic 1,0,1 value assignments and their mixtures.

A hidden-variable model assigns every direction a bit. On an orthonormal
frame (a triangle of the orthogonality graph) exactly one direction gets 0;
two orthogonal directions (an edge) are never both 0, but an edge outside a
triangle may have both endpoints at 1.

:func:`feasibility` asks whether some probability distribution over the
valid assignments reproduces a list of event probabilities. Infeasibility is
reported with a Farkas-style certificate: multipliers ``y`` over the
constraints such that the combined function ``sum_k y_k 1[event_k]`` is
nonnegative on every valid assignment while ``sum_k y_k p_k`` is negative.
For the three pairwise marginals used by the proof chain the multipliers are
``(+1, -1, +1)`` and the combination is exactly the indicator of
``{a=0, d=0, g=1}``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy.optimize import linprog, nnls

from .errors import PreconditionError, SchemaError, SizeError
from .geometry import Figure1Config, OrthoGraph
from .quantum import check_bit, twinned_joint_prob

MAX_NODES = 24
MATCH_TOL = 1e-9
CERT_TOL = 1e-12

Assignment = Mapping[str, int]


def is_valid(assignment: Assignment, graph: OrthoGraph) -> bool:
    unknown = set(assignment) - set(graph.nodes)
    if unknown:
        raise SchemaError(f"unknown labels {sorted(unknown)}")
    missing = set(graph.nodes) - set(assignment)
    if missing:
        raise SchemaError(f"assignment is missing labels {sorted(missing)}")
    for label in graph.nodes:
        check_bit(assignment[label])
    if any(assignment[p] == 0 and assignment[q] == 0 for p, q in graph.edges):
        return False
    return all(sum(assignment[x] == 0 for x in tri) == 1 for tri in graph.triangles)


def enumerate_valid(graph: OrthoGraph) -> list[dict[str, int]]:
    """All valid assignments, in lexicographic order of the bits in node order."""
    n = len(graph.nodes)
    if n > MAX_NODES:
        raise SizeError(f"{n} nodes exceeds the exhaustive limit of {MAX_NODES}")
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        cand = dict(zip(graph.nodes, bits))
        if is_valid(cand, graph):
            out.append(cand)
    return out


@dataclass(frozen=True)
class EventSpec:
    """Conjunction of ``label -> bit`` requirements; empty means the sure event."""

    terms: tuple[tuple[str, int], ...]

    def __post_init__(self):
        terms = tuple((str(lbl), check_bit(bit)) for lbl, bit in self.terms)
        labels = [lbl for lbl, _ in terms]
        if len(set(labels)) != len(labels):
            raise SchemaError(f"repeated label in event {terms}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, **required: int) -> EventSpec:
        return cls(tuple(required.items()))

    def holds(self, assignment: Assignment) -> bool:
        return all(assignment[lbl] == bit for lbl, bit in self.terms)

    def check_labels(self, labels: Iterable[str]) -> None:
        unknown = {lbl for lbl, _ in self.terms} - set(labels)
        if unknown:
            raise SchemaError(f"event references unknown labels {sorted(unknown)}")

    def __str__(self):
        if not self.terms:
            return "<sure>"
        return ",".join(f"{lbl}={bit}" for lbl, bit in self.terms)


Constraint = tuple[EventSpec, float]

# the three pairwise marginals whose signed sum is the mass of TARGET_EVENT
TARGET_EVENT = EventSpec.of(a=0, d=0, g=1)
CHAIN_EVENTS = (
    (EventSpec.of(a=0, d=0), +1.0),
    (EventSpec.of(e=1, g=0), -1.0),
    (EventSpec.of(b=0, g=0), +1.0),
)


@dataclass(frozen=True)
class IdentityReport:
    assignments: list[dict[str, int]]
    residuals: list[int]

    @property
    def ok(self) -> bool:
        return all(r == 0 for r in self.residuals)


def event_mass_identity(graph: OrthoGraph) -> IdentityReport:
    """Check ``1[a0 d0 g1] = 1[a0 d0] - 1[e1 g0] + 1[b0 g0]`` on every valid assignment."""
    if not graph.is_figure1():
        raise PreconditionError("event_mass_identity needs the seven-vector orthogonality graph")
    assignments = enumerate_valid(graph)
    residuals = []
    for asg in assignments:
        rhs = sum(int(sign) * int(ev.holds(asg)) for ev, sign in CHAIN_EVENTS)
        residuals.append(int(TARGET_EVENT.holds(asg)) - rhs)
    return IdentityReport(assignments, residuals)


def chain_constraints(config: Figure1Config) -> list[Constraint]:
    """Quantum pairwise marginals for the three chain events, from the config vectors."""
    v = config.vectors
    return [
        (EventSpec.of(a=0, d=0), twinned_joint_prob(v["a"], 0, v["d"], 0)),
        (EventSpec.of(e=1, g=0), twinned_joint_prob(v["e"], 1, v["g"], 0)),
        (EventSpec.of(b=0, g=0), twinned_joint_prob(v["b"], 0, v["g"], 0)),
    ]


@dataclass(frozen=True)
class Certificate:
    """Multipliers over the constraints (normalization last) proving infeasibility.

    ``combined`` lists ``sum_k y_k 1[event_k]`` on each valid assignment (all
    nonnegative); ``value`` is ``sum_k y_k p_k`` (negative).
    """

    multipliers: tuple[float, ...]
    value: float
    combined: tuple[float, ...]
    bounded_event: Optional[EventSpec] = None
    source: str = "chain"


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    assignments: list[dict[str, int]]
    witness: Optional[tuple[float, ...]] = None
    certificate: Optional[Certificate] = None
    max_residual: float = field(default=float("nan"))

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible"


def _event_matrix(assignments, constraints) -> tuple[np.ndarray, np.ndarray]:
    rows = [[float(ev.holds(a)) for a in assignments] for ev, _ in constraints]
    rows.append([1.0] * len(assignments))
    b = [float(p) for _, p in constraints] + [1.0]
    return np.array(rows), np.array(b)


def _chain_certificate(constraints, A, b) -> Optional[Certificate]:
    y = np.zeros(len(b))
    for ev, sign in CHAIN_EVENTS:
        idx = [k for k, (c, _) in enumerate(constraints) if set(c.terms) == set(ev.terms)]
        if not idx:
            return None
        y[idx[0]] = sign
    combined = y @ A
    value = float(y @ b)
    if combined.min() < 0 or value >= -CERT_TOL:
        return None
    return Certificate(tuple(y), value, tuple(combined), TARGET_EVENT, "chain")


def _farkas_certificate(A, b) -> Optional[Certificate]:
    # min b.y  s.t.  A^T y >= 0,  -1 <= y <= 1
    res = linprog(b, A_ub=-A.T, b_ub=np.zeros(A.shape[1]), bounds=[(-1, 1)] * len(b), method="highs")
    if res.status != 0:
        return None
    y = res.x
    combined = y @ A
    value = float(y @ b)
    if combined.min() < -CERT_TOL or value >= -CERT_TOL:
        return None
    return Certificate(tuple(y), value, tuple(np.maximum(combined, 0.0)), None, "lp")


def feasibility(graph: OrthoGraph, constraints: Sequence[Constraint]) -> FeasibilityResult:
    """Decide whether a mixture of valid assignments matches every constraint.

    Normalization is always appended as a final constraint. A witness must
    reproduce every probability within 1e-9. When the three chain events are
    present, their certificate is tried first, so any violation below -1e-12
    is reported as infeasible even if it lies inside the witness tolerance.
    """
    constraints = list(constraints)
    for ev, p in constraints:
        if not isinstance(ev, EventSpec):
            raise SchemaError(f"expected an EventSpec, got {ev!r}")
        ev.check_labels(graph.nodes)
        if not (0.0 <= p <= 1.0):
            raise SchemaError(f"probability {p!r} for {ev} outside [0, 1]")
    assignments = enumerate_valid(graph)
    A, b = _event_matrix(assignments, constraints)

    # an exact certificate is a proof and overrides the 1e-9 witness tolerance
    cert = _chain_certificate(constraints, A, b)
    if cert is not None:
        return FeasibilityResult(False, assignments, certificate=cert, max_residual=-cert.value)

    if assignments:
        x, _ = nnls(A, b)
        if x.sum() > 0:
            x = x / x.sum()
        resid = float(np.max(np.abs(A @ x - b)))
        if resid <= MATCH_TOL:
            return FeasibilityResult(True, assignments, witness=tuple(x), max_residual=resid)
    else:
        resid = 1.0

    cert = _farkas_certificate(A, b)
    if cert is None:
        raise PreconditionError(
            f"constraints are within {resid:.3g} of feasible but no certificate below "
            f"-{CERT_TOL} exists; tolerance too tight to decide"
        )
    return FeasibilityResult(False, assignments, certificate=cert, max_residual=resid)


def uniform_constraints(graph: OrthoGraph, events: Iterable[EventSpec]) -> list[Constraint]:
    """Event masses under the uniform distribution over valid assignments."""
    assignments = enumerate_valid(graph)
    n = len(assignments)
    return [(ev, sum(ev.holds(a) for a in assignments) / n) for ev in events]


def assignments_to_csv(assignments: Sequence[Assignment], labels: Sequence[str]) -> str:
    lines = [",".join(labels)]
    lines += [",".join(str(a[lbl]) for lbl in labels) for a in assignments]
    return "\n".join(lines) + "\n"
