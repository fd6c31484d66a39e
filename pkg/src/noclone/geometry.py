"""Seven-vector configuration and its orthogonality graph.

The configuration is generated from two angles ``theta`` and ``theta_prime``
in the open interval (0, pi/2)::

    b = (1, 0, 0)          e = (0, 1, 0)
    a = (c, 0, s)          c = (s, 0, -c)
    d = (0, c', s')        f = (0, s', -c')
    g = (t', t, t t') / D  with D**2 = t**2 + t'**2 + (t t')**2

where ``s, c, t`` are the sine, cosine and tangent of ``theta`` (primed: of
``theta_prime``). Orthogonal pairs are a-e, a-c, e-c, d-b, d-f, b-f, b-e,
g-c and g-f, so {a, e, c} and {d, b, f} are orthonormal frames. Only squared
dot products enter the probability calculus, so the sign conventions above
are fixed arbitrarily.

Graph export uses a restricted DOT grammar::

    graph <name> {
      <node>;            one line per node, in node order
      <u> -- <v>;        one line per edge, in canonical edge order
    }
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    DegenerateConfigurationError,
    DegenerateDirectionError,
    PreconditionError,
    SchemaError,
)

LABELS = ("a", "b", "c", "d", "e", "f", "g")

FIGURE1_EDGES = frozenset(
    frozenset(p)
    for p in [
        ("a", "e"), ("a", "c"), ("e", "c"),
        ("d", "b"), ("d", "f"), ("b", "f"),
        ("b", "e"), ("g", "c"), ("g", "f"),
    ]
)
FIGURE1_TRIANGLES = (("a", "c", "e"), ("b", "d", "f"))

NORM_TOL = 1e-12
ORTH_TOL = 1e-9


@dataclass(frozen=True)
class UnitVector3:
    """Measurement direction: a real 3-vector of unit norm."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n2 = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(n2 - 1.0) > NORM_TOL:
            raise DegenerateDirectionError(
                f"not a unit vector: |({self.x}, {self.y}, {self.z})|^2 = {n2!r}"
            )

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def dot(self, other: UnitVector3) -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __iter__(self):
        return iter((self.x, self.y, self.z))


def unit(x: float, y: float, z: float) -> UnitVector3:
    """Normalize ``(x, y, z)``; raises on a near-zero vector."""
    norm = math.sqrt(x * x + y * y + z * z)
    if not norm > NORM_TOL:
        raise DegenerateDirectionError(f"cannot normalize ({x}, {y}, {z}): norm {norm!r}")
    return UnitVector3(x / norm, y / norm, z / norm)


def complete_triple(u: UnitVector3, v: UnitVector3) -> UnitVector3:
    """Third member ``u x v`` of a right-handed orthonormal frame."""
    if abs(u.dot(v)) > ORTH_TOL:
        raise PreconditionError(f"directions are not orthogonal: u.v = {u.dot(v)!r}")
    w = np.cross(u.array, v.array)
    return unit(*w)


@dataclass(frozen=True)
class AngleParams:
    theta: float
    theta_prime: float

    def __post_init__(self):
        for name in ("theta", "theta_prime"):
            val = getattr(self, name)
            if not (0.0 < val < math.pi / 2):
                raise DegenerateConfigurationError(
                    f"{name} = {val!r} is outside the open interval (0, pi/2)"
                )

    @property
    def s(self) -> float:
        return math.sin(self.theta)

    @property
    def c(self) -> float:
        return math.cos(self.theta)

    @property
    def t(self) -> float:
        return math.tan(self.theta)

    @property
    def s_p(self) -> float:
        return math.sin(self.theta_prime)

    @property
    def c_p(self) -> float:
        return math.cos(self.theta_prime)

    @property
    def t_p(self) -> float:
        return math.tan(self.theta_prime)

    @property
    def D2(self) -> float:
        t, tp = self.t, self.t_p
        return t * t + tp * tp + (t * tp) ** 2

    @property
    def D(self) -> float:
        return math.sqrt(self.D2)

    @classmethod
    def from_degrees(cls, theta_deg: float, theta_prime_deg: float) -> AngleParams:
        return cls(math.radians(theta_deg), math.radians(theta_prime_deg))


@dataclass(frozen=True)
class Figure1Config:
    params: AngleParams
    vectors: Mapping[str, UnitVector3]

    def __getitem__(self, label: str) -> UnitVector3:
        return self.vectors[label]

    def dot(self, p: str, q: str) -> float:
        return self.vectors[p].dot(self.vectors[q])


def build_figure1(theta: float, theta_prime: float) -> Figure1Config:
    params = AngleParams(theta, theta_prime)
    s, c, t = params.s, params.c, params.t
    sp, cp, tp = params.s_p, params.c_p, params.t_p
    D = params.D
    vecs = {
        "a": unit(c, 0.0, s),
        "b": UnitVector3(1.0, 0.0, 0.0),
        "c": unit(s, 0.0, -c),
        "d": unit(0.0, cp, sp),
        "e": UnitVector3(0.0, 1.0, 0.0),
        "f": unit(0.0, sp, -cp),
        "g": unit(tp / D, t / D, t * tp / D),
    }
    return Figure1Config(params, MappingProxyType(vecs))


@dataclass(frozen=True)
class OrthoGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    triangles: tuple[tuple[str, str, str], ...] = field(default=())

    @property
    def edge_set(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(e) for e in self.edges)

    def degree(self, node: str) -> int:
        return sum(node in e for e in self.edges)

    def is_figure1(self) -> bool:
        return set(self.nodes) == set(LABELS) and self.edge_set == FIGURE1_EDGES


def graph_from_edges(nodes: Iterable[str], edges: Iterable[tuple[str, str]]) -> OrthoGraph:
    """Build an OrthoGraph with canonically ordered edges and computed triangles."""
    nodes = tuple(nodes)
    if len(set(nodes)) != len(nodes):
        raise SchemaError(f"duplicate node labels in {nodes}")
    pos = {n: i for i, n in enumerate(nodes)}
    canon = set()
    for p, q in edges:
        if p not in pos or q not in pos:
            raise SchemaError(f"edge ({p}, {q}) references an unknown node")
        if p == q:
            raise SchemaError(f"self-loop on {p}")
        canon.add(tuple(sorted((p, q), key=pos.__getitem__)))
    edge_list = tuple(sorted(canon, key=lambda e: (pos[e[0]], pos[e[1]])))
    adj = {n: set() for n in nodes}
    for p, q in edge_list:
        adj[p].add(q)
        adj[q].add(p)
    triangles = tuple(
        tri for tri in itertools.combinations(nodes, 3)
        if tri[1] in adj[tri[0]] and tri[2] in adj[tri[0]] and tri[2] in adj[tri[1]]
    )
    return OrthoGraph(nodes, edge_list, triangles)


def orthogonality_graph(
    config: Figure1Config | Mapping[str, UnitVector3], tol: float = ORTH_TOL
) -> OrthoGraph:
    """Join two directions when ``|u.v| <= tol``."""
    if not (0.0 < tol <= 1e-6):
        raise PreconditionError(f"tolerance {tol!r} outside (0, 1e-6]")
    vectors = config.vectors if isinstance(config, Figure1Config) else config
    nodes = tuple(vectors)
    edges = [
        (p, q) for p, q in itertools.combinations(nodes, 2)
        if abs(vectors[p].dot(vectors[q])) <= tol
    ]
    return graph_from_edges(nodes, edges)


def to_dot(graph: OrthoGraph, name: str = "ortho") -> str:
    lines = [f"graph {name} {{"]
    lines += [f"  {n};" for n in graph.nodes]
    lines += [f"  {p} -- {q};" for p, q in graph.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_HEAD = re.compile(r"^graph\s+(\w+)\s*\{$")
_DOT_NODE = re.compile(r"^(\w+);$")
_DOT_EDGE = re.compile(r"^(\w+)\s*--\s*(\w+);$")


def read_dot(text: str) -> OrthoGraph:
    """Parse the restricted DOT grammar written by :func:`to_dot`."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not _DOT_HEAD.match(lines[0]) or lines[-1] != "}":
        raise SchemaError("not a DOT undirected graph block")
    nodes, edges = [], []
    for ln in lines[1:-1]:
        if m := _DOT_EDGE.match(ln):
            edges.append((m.group(1), m.group(2)))
        elif m := _DOT_NODE.match(ln):
            nodes.append(m.group(1))
        else:
            raise SchemaError(f"unparseable DOT line: {ln!r}")
    return graph_from_edges(nodes, edges)
