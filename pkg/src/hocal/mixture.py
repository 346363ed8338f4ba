"""Finitely supported mixtures over the simplex.

A mixture stands in for any distribution over probability vectors: a
predicted second-order output, a ground-truth Bayes mixture for a
partition cell, or the distribution of normalized k-snapshot histograms.
The k-th order projection of a mixture is computed exactly (multinomial
masses, no sampling), which is what makes the lemma-level tests in this
package possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatch, InvalidDistribution
from .simplex import (
    DEFAULT_ENUM_CAP,
    LabelSpace,
    SimplexPoint,
    Snapshot,
    enumerate_snapshot_space,
    snapshot_to_point,
)

WEIGHT_SUM_TOL = 1e-9
MERGE_TOL = 1e-12


@dataclass(frozen=True)
class RngSeed:
    """Explicit 64-bit seed for a counter-based (Philox) generator.

    All randomness in the package flows through one of these; there is no
    ambient global state. `child` derives independent streams so parallel
    workers or repeated draws can partition the seed space.
    """

    seed: int

    def __post_init__(self):
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InvalidDistribution(f"seed must be a 64-bit unsigned int, got {self.seed!r}")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.seed))

    def child(self, index: int) -> "RngSeed":
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(index,))
        return RngSeed(int(ss.generate_state(1, dtype=np.uint64)[0]))


def _merge_support(pairs):
    """Deduplicate support points closer than MERGE_TOL in l1, summing weights.

    Exact duplicates are folded with a dict; near-duplicates are caught by
    a sorted sweep (two points within l1 tolerance cannot differ by more
    than the tolerance in their first coordinate). Kept representatives
    stay in sorted order, so the candidate window for each incoming point
    is the trailing run whose first coordinate is within tolerance; the
    distances over that window are computed vectorized, which keeps
    lattice-sized supports with heavy first-coordinate ties cheap.
    """
    acc = {}
    for point, weight in pairs:
        key = point.probs
        if key in acc:
            acc[key] = (acc[key][0], acc[key][1] + weight)
        else:
            acc[key] = (point, weight)
    reps = sorted(acc.values(), key=lambda pw: pw[0].probs)
    if not reps:
        return []
    buf = np.empty((len(reps), len(reps[0][0].probs)))
    kept = 0
    merged = []
    for point, weight in reps:
        row = np.asarray(point.probs, dtype=float)
        target = None
        lo = int(np.searchsorted(buf[:kept, 0], row[0] - MERGE_TOL, side="left"))
        if lo < kept:
            dist = np.abs(buf[lo:kept] - row).sum(axis=1)
            hits = np.flatnonzero(dist <= MERGE_TOL)
            if hits.size:
                target = lo + int(hits[-1])
        if target is None:
            merged.append((point, weight))
            buf[kept] = row
            kept += 1
        else:
            merged[target] = (merged[target][0], merged[target][1] + weight)
    return merged


@dataclass(frozen=True, eq=True)
class Mixture:
    """A finitely supported distribution over simplex points.

    Support points within l1 distance 1e-12 are merged on construction,
    weights must be positive and sum to 1 within 1e-9 (then renormalized),
    and the support is stored in sorted coordinate order so equal mixtures
    compare equal regardless of input order.
    """

    support: tuple
    space: LabelSpace

    def __post_init__(self):
        pairs = [(p, float(w)) for p, w in self.support]
        if not pairs:
            raise InvalidDistribution("a mixture needs at least one support point")
        for point, weight in pairs:
            if point.dim != self.space.num_labels:
                raise DimensionMismatch(
                    f"{point.dim}-label point in a {self.space.num_labels}-label mixture"
                )
            if weight <= 0:
                raise InvalidDistribution(f"non-positive weight {weight}")
        total = sum(w for _, w in pairs)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidDistribution(f"weights sum to {total}, expected 1")
        merged = _merge_support(pairs)
        if total != 1.0:
            merged = [(p, w / total) for p, w in merged]
        object.__setattr__(self, "support", tuple(merged))

    @property
    def size(self) -> int:
        return len(self.support)

    def points_array(self) -> np.ndarray:
        return np.array([p.probs for p, _ in self.support], dtype=float)

    def weights_array(self) -> np.ndarray:
        return np.array([w for _, w in self.support], dtype=float)


def mixture_from_arrays(points, weights, space: LabelSpace) -> Mixture:
    """Build a Mixture from parallel point/weight sequences."""
    support = tuple(
        (p if isinstance(p, SimplexPoint) else SimplexPoint(tuple(p)), w)
        for p, w in zip(points, weights)
    )
    return Mixture(support, space)


def centroid(m: Mixture) -> SimplexPoint:
    """The mean of the mixture, a single simplex point."""
    avg = m.weights_array() @ m.points_array()
    return SimplexPoint(tuple(avg))


@lru_cache(maxsize=128)
def _lattice(space: LabelSpace, k: int, cap: int):
    """Cached snapshot lattice with count matrix, points, and log multinomial coefficients."""
    snapshots = tuple(enumerate_snapshot_space(space, k, cap))
    counts = np.array([s.counts for s in snapshots], dtype=float)
    points = tuple(snapshot_to_point(s) for s in snapshots)
    logcoef = gammaln(k + 1) - gammaln(counts + 1.0).sum(axis=1)
    return snapshots, counts, points, logcoef


def project_k(m: Mixture, k: int, cap: int = DEFAULT_ENUM_CAP) -> Mixture:
    """Exact distribution of normalized k-snapshot histograms under m.

    The mass at count vector c is sum_i w_i * Multinomial(k; c) * prod_j p_ij^c_j,
    computed in log space. Zero-mass lattice points are dropped, so a
    deterministic component (a vertex) projects to a point mass at itself.
    """
    _, counts, points, logcoef = _lattice(m.space, k, cap)
    mass = np.zeros(len(counts))
    for point, weight in m.support:
        p = point.as_array()
        pos = p > 0.0
        logp = np.where(pos, np.log(np.where(pos, p, 1.0)), 0.0)
        logmass = logcoef + counts @ logp
        if not pos.all():
            # a zero-probability label with a positive count kills the term
            dead = (counts[:, ~pos] > 0).any(axis=1)
            logmass[dead] = -np.inf
        mass += weight * np.exp(logmass)
    keep = mass > 0.0
    support = tuple((points[i], mass[i]) for i in np.flatnonzero(keep))
    return Mixture(support, m.space)


def sample_snapshot(m: Mixture, k: int, rng: RngSeed) -> Snapshot:
    """One k-snapshot: draw a support point by weight, then k iid labels."""
    gen = rng.generator()
    idx = gen.choice(m.size, p=m.weights_array())
    counts = gen.multinomial(k, m.support[idx][0].probs)
    return Snapshot(tuple(int(c) for c in counts))


def sample_snapshots(m: Mixture, k: int, n: int, rng: RngSeed) -> list:
    """n independent k-snapshots under one seed (vectorized, own stream)."""
    gen = rng.generator()
    idx = gen.choice(m.size, size=n, p=m.weights_array())
    points = m.points_array()
    counts = np.empty((n, m.space.num_labels), dtype=np.int64)
    for comp in np.unique(idx):
        rows = idx == comp
        counts[rows] = gen.multinomial(k, points[comp], size=int(rows.sum()))
    return [Snapshot(tuple(int(c) for c in row)) for row in counts]


def empirical_mixture(points: list) -> Mixture:
    """Uniform mixture over observed points, with duplicates merged."""
    if not points:
        raise InvalidDistribution("cannot build a mixture from no points")
    space = LabelSpace(points[0].dim)
    n = len(points)
    return Mixture(tuple((p, 1.0 / n) for p in points), space)
