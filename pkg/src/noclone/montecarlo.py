"""Seeded sampling of sequential spin-zero measurements.

Random numbers come from numpy's Philox4x64-10 counter-based generator,
whose output stream for a given seed is fixed across platforms. Each
twinned-pair shot consumes exactly two doubles and each frame shot exactly
three, in order, so vectorized runs reproduce the shot-by-shot stream.
Branch probabilities are taken from Lüders updates in :mod:`noclone.quantum`.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import ConfigError, PreconditionError
from .geometry import ORTH_TOL, UnitVector3
from .quantum import DensityOperator, measure, star_closed_form

GENERATOR_ID = "numpy.random.Philox(4x64-10)/Generator.random"
SIGMA_BAND = 4.0
# branch probabilities this close to 0 or 1 are snapped to kill rounding leaks
SNAP_TOL = 1e-12

CELLS = ("00", "01", "10", "11")
FRAME_PERMUTATIONS = ((0, 1, 1), (1, 0, 1), (1, 1, 0))


@dataclass(frozen=True)
class SampleConfig:
    seed: int
    shots: int

    def __post_init__(self):
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not (isinstance(self.shots, int) and self.shots >= 1):
            raise ConfigError(f"shots must be a positive integer, got {self.shots!r}")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _snap(p: float) -> float:
    if p < SNAP_TOL:
        return 0.0
    if p > 1.0 - SNAP_TOL:
        return 1.0
    return p


def _zero_probs(rho: DensityOperator | None, w: UnitVector3) -> tuple[float, DensityOperator | None, DensityOperator | None]:
    """Pr(bit 0) along ``w`` and both post-states; an unreachable state gives 0."""
    if rho is None:
        return 0.0, None, None
    m = measure(rho, w)
    return _snap(m.prob0), m.post0, m.post1


def _pair_tree(u: UnitVector3, v: UnitVector3) -> tuple[float, float, float]:
    """Pr(first=0), Pr(second=0 | first=0), Pr(second=0 | first=1)."""
    p0, post0, post1 = _zero_probs(DensityOperator.maximally_mixed(), u)
    q0 = _zero_probs(post0, v)[0]
    q1 = _zero_probs(post1, v)[0]
    return p0, q0, q1


def sample_twinned_pair(u: UnitVector3, v: UnitVector3, rng: np.random.Generator) -> tuple[int, int]:
    p0, q0, q1 = _pair_tree(u, v)
    r = rng.random(2)
    i = 0 if r[0] < p0 else 1
    j = 0 if r[1] < (q0 if i == 0 else q1) else 1
    return i, j


def z_score(count: int, shots: int, p: float) -> float | None:
    """Standardized deviation of ``count/shots`` from ``p``; ``None`` marks an impossible count."""
    freq = count / shots
    if p <= 0.0 or p >= 1.0:
        return 0.0 if freq == p else None
    return (freq - p) / math.sqrt(p * (1.0 - p) / shots)


@dataclass(frozen=True)
class JointEstimate:
    u: UnitVector3
    v: UnitVector3
    cfg: SampleConfig
    counts: dict[str, int]
    expected: dict[str, float]
    z_scores: dict[str, float | None]

    @property
    def frequencies(self) -> np.ndarray:
        n = self.cfg.shots
        return np.array([[self.counts["00"], self.counts["01"]],
                         [self.counts["10"], self.counts["11"]]]) / n

    def within_band(self, sigma_band: float = SIGMA_BAND) -> bool:
        return all(z is not None and abs(z) <= sigma_band for z in self.z_scores.values())

    def to_dict(self, sigma_band: float = SIGMA_BAND) -> dict:
        return {
            "u": list(self.u),
            "v": list(self.v),
            "shots": self.cfg.shots,
            "seed": self.cfg.seed,
            "counts": self.counts,
            "expected": self.expected,
            "z_scores": self.z_scores,
            "sigma_band": sigma_band,
            "within_band": self.within_band(sigma_band),
            "generator": GENERATOR_ID,
            "version": __version__,
        }

    def to_json(self, sigma_band: float = SIGMA_BAND) -> str:
        return json.dumps(self.to_dict(sigma_band), indent=2) + "\n"


def estimate_joint(u: UnitVector3, v: UnitVector3, cfg: SampleConfig) -> JointEstimate:
    """Empirical 2x2 outcome table of ``cfg.shots`` twinned-pair shots."""
    if not isinstance(cfg, SampleConfig):
        raise ConfigError("cfg must be a SampleConfig")
    p0, q0, q1 = _pair_tree(u, v)
    r = make_rng(cfg.seed).random((cfg.shots, 2))
    first = (r[:, 0] >= p0).astype(np.int64)
    second = (r[:, 1] >= np.where(first == 0, q0, q1)).astype(np.int64)
    cell = np.bincount(2 * first + second, minlength=4)
    counts = {name: int(cell[k]) for k, name in enumerate(CELLS)}
    expected = {name: star_closed_form(u, int(name[0]), v, int(name[1])) for name in CELLS}
    z = {name: z_score(counts[name], cfg.shots, expected[name]) for name in CELLS}
    return JointEstimate(u, v, cfg, counts, expected, z)


@dataclass(frozen=True)
class FrameCounts:
    cfg: SampleConfig
    counts: dict[tuple[int, int, int], int]

    @property
    def invalid(self) -> int:
        return sum(n for pat, n in self.counts.items() if pat not in FRAME_PERMUTATIONS)

    def z_scores(self) -> dict[tuple[int, int, int], float | None]:
        return {pat: z_score(self.counts[pat], self.cfg.shots, 1 / 3) for pat in FRAME_PERMUTATIONS}

    def within_band(self, sigma_band: float = SIGMA_BAND) -> bool:
        return self.invalid == 0 and all(
            z is not None and abs(z) <= sigma_band for z in self.z_scores().values()
        )


def sample_frame(triple: tuple[UnitVector3, UnitVector3, UnitVector3], cfg: SampleConfig) -> FrameCounts:
    """Sequentially measure an orthonormal frame on ``I/3``; count all eight bit patterns."""
    if len(triple) != 3:
        raise PreconditionError("expected three directions")
    for p, q in itertools.combinations(triple, 2):
        if abs(p.dot(q)) > ORTH_TOL:
            raise PreconditionError(f"frame is not orthogonal: dot = {p.dot(q)!r}")
    u, v, w = triple
    p0, post_u0, post_u1 = _zero_probs(DensityOperator.maximally_mixed(), u)
    # second-level and third-level conditional probabilities of bit 0
    q = {}
    third = {}
    for i, post in ((0, post_u0), (1, post_u1)):
        qi, post0, post1 = _zero_probs(post, v)
        q[i] = qi
        third[(i, 0)] = _zero_probs(post0, w)[0]
        third[(i, 1)] = _zero_probs(post1, w)[0]

    r = make_rng(cfg.seed).random((cfg.shots, 3))
    b1 = (r[:, 0] >= p0).astype(np.int64)
    b2 = (r[:, 1] >= np.where(b1 == 0, q[0], q[1])).astype(np.int64)
    thr3 = np.select(
        [(b1 == i) & (b2 == j) for i, j in third],
        list(third.values()),
    )
    b3 = (r[:, 2] >= thr3).astype(np.int64)
    cell = np.bincount(4 * b1 + 2 * b2 + b3, minlength=8)
    counts = {pat: int(cell[4 * pat[0] + 2 * pat[1] + pat[2]])
              for pat in itertools.product((0, 1), repeat=3)}
    return FrameCounts(cfg, counts)
