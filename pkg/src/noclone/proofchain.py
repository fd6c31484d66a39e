"""Numerical evaluation of the proof chain for ``Pr(a->0, d->0, g->1)``.

Lines (1)-(3) of the chain involve triple events such as ``a->0, d->0,
g->0``. Quantum mechanics assigns no probability to such events for
incompatible directions; they only exist in the hypothetical hidden-variable
model. Those steps are therefore checked as exact indicator identities over
the valid 1,0,1 assignments (see :func:`noclone.hiddenvar.event_mass_identity`),
and only lines (4)-(6) are evaluated as numbers::

    L4 = (ss')^2/3 - (1/3 - t^2/(3 D^2)) + Pr(b->0, g->0)
    L5 = (ss')^2/3 - 1/3 + t^2/(3 D^2) + t'^2/(3 D^2)
    L6 = -(1/3) (ss'/D)^2

L4 uses pairwise probabilities from projector calculus on the actual
configuration vectors; L5 and L6 use trigonometric closed forms. Their
agreement validates the geometry as well as the algebra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import mpmath

from .errors import ConsistencyError, RangeError
from .geometry import AngleParams, Figure1Config, build_figure1, orthogonality_graph
from .hiddenvar import event_mass_identity
from .quantum import ALG_TOL, twinned_joint_prob


@dataclass(frozen=True)
class ChainReport:
    params: AngleParams
    # (a.d)^2 - (ss')^2, (e.g)^2 - t^2/D^2, (b.g)^2 - t'^2/D^2
    substitution_residuals: tuple[float, float, float]
    # projector-calculus pairwise probabilities minus their trig shortcuts
    pairwise_residuals: tuple[float, float, float]
    identity_ok: bool
    L4: float
    L5: float
    L6: float
    trig_residual: float

    @property
    def negative(self) -> bool:
        return self.L6 < 0

    def ok(self, tol: float = ALG_TOL) -> bool:
        return (
            self.identity_ok
            and self.negative
            and abs(self.L4 - self.L5) <= tol
            and abs(self.L5 - self.L6) <= tol
            and abs(self.L6 - final_value(self.params)) <= tol
            and self.trig_residual <= tol
            and all(abs(r) <= tol for r in self.substitution_residuals)
            and all(abs(r) <= tol for r in self.pairwise_residuals)
        )


def final_value(params: AngleParams) -> float:
    """Closed form ``-(1/3)(s s'/D)^2``; strictly negative on the open square."""
    ss = params.s * params.s_p
    return -(ss * ss) / (3.0 * params.D2)


def trig_identity_residual(params: AngleParams) -> float:
    """``|(ss')^2 (D^2 + 1) - (tt')^2|``, the identity taking L5 to L6.

    Holds because ``D^2 + 1 = (1 + t^2)(1 + t'^2) = 1/(cc')^2``. Both sides
    grow like ``(tt')^2`` (about 1.7e4 at 85 degrees), so a double-precision
    evaluation bottoms out at a few 1e-12 from rounding alone; the identity is
    evaluated at 40 significant digits from the exact binary angles instead.
    """
    with mpmath.workdps(40):
        th, thp = mpmath.mpf(params.theta), mpmath.mpf(params.theta_prime)
        t, tp = mpmath.tan(th), mpmath.tan(thp)
        ss = mpmath.sin(th) * mpmath.sin(thp)
        D2 = t * t + tp * tp + (t * tp) ** 2
        return float(abs(ss * ss * (D2 + 1) - (t * tp) ** 2))


def line_values(params: AngleParams, config: Figure1Config, orth_tol: float = 1e-9) -> ChainReport:
    if config.params != params:
        raise ConsistencyError(f"config was built from {config.params}, not {params}")
    reference = build_figure1(params.theta, params.theta_prime)
    for label, vec in config.vectors.items():
        if abs(vec.dot(reference[label]) - 1.0) > ALG_TOL:
            raise ConsistencyError(f"vector {label} does not match the angle parameters")

    s, t, tp = params.s * params.s_p, params.t, params.t_p
    D2 = params.D2
    v = config.vectors

    subs = (
        config.dot("a", "d") ** 2 - s * s,
        config.dot("e", "g") ** 2 - t * t / D2,
        config.dot("b", "g") ** 2 - tp * tp / D2,
    )
    p_ad = twinned_joint_prob(v["a"], 0, v["d"], 0)
    p_eg = twinned_joint_prob(v["e"], 1, v["g"], 0)
    p_bg = twinned_joint_prob(v["b"], 0, v["g"], 0)
    pairwise = (
        p_ad - s * s / 3.0,
        p_eg - (1.0 / 3.0 - t * t / (3.0 * D2)),
        p_bg - tp * tp / (3.0 * D2),
    )

    identity = event_mass_identity(orthogonality_graph(config, orth_tol))

    L4 = p_ad - p_eg + p_bg
    L5 = s * s / 3.0 - 1.0 / 3.0 + t * t / (3.0 * D2) + tp * tp / (3.0 * D2)
    L6 = final_value(params)
    return ChainReport(
        params=params,
        substitution_residuals=subs,
        pairwise_residuals=pairwise,
        identity_ok=identity.ok,
        L4=L4,
        L5=L5,
        L6=L6,
        trig_residual=trig_identity_residual(params),
    )


class ScanRow(NamedTuple):
    theta: float
    theta_prime: float
    L6: float
    chain_ok: bool


def scan(
    theta_grid: Sequence[float], theta_prime_grid: Sequence[float], tol: float = ALG_TOL
) -> list[ScanRow]:
    """Evaluate the chain on every grid cell, row-major over ``theta_grid``."""
    for val in list(theta_grid) + list(theta_prime_grid):
        if not (0.0 < val < math.pi / 2):
            raise RangeError(f"grid value {val!r} outside the open interval (0, pi/2)")
    rows = []
    for th in theta_grid:
        for thp in theta_prime_grid:
            params = AngleParams(th, thp)
            report = line_values(params, build_figure1(th, thp))
            rows.append(ScanRow(th, thp, report.L6, report.ok(tol)))
    return rows


def fmt17(x: float) -> str:
    return f"{x:.17g}"


def scan_to_csv(rows: Sequence[ScanRow]) -> str:
    lines = ["theta,theta_prime,L6,chain_ok"]
    lines += [
        f"{fmt17(r.theta)},{fmt17(r.theta_prime)},{fmt17(r.L6)},{str(r.chain_ok).lower()}"
        for r in rows
    ]
    return "\n".join(lines) + "\n"
