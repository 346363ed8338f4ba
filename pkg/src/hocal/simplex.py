"""Label spaces, points on the probability simplex, and k-snapshot histograms.

A snapshot records k labels drawn for a single instance as an order-free
count vector.  Normalizing the counts embeds the snapshot back into the
simplex, which is how every other module consumes it; the lattice of all
such normalized histograms has C(k+l-1, l-1) points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, DimensionMismatch, InvalidDistribution

SUM_TOL = 1e-9
DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class LabelSpace:
    """A finite label set of size num_labels >= 2."""

    num_labels: int

    def __post_init__(self):
        if not isinstance(self.num_labels, int) or self.num_labels < 2:
            raise InvalidDistribution(
                f"need an integer label count >= 2, got {self.num_labels!r}"
            )


@dataclass(frozen=True)
class SimplexPoint:
    """A probability vector over the labels of one LabelSpace.

    Entries must be non-negative and sum to 1 within 1e-9; the stored
    vector is renormalized exactly so downstream identities see mass 1.
    """

    probs: tuple

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        if len(probs) < 2:
            raise InvalidDistribution("a simplex point needs at least 2 entries")
        if any(p < -1e-12 for p in probs):
            raise InvalidDistribution(f"negative probability in {probs}")
        probs = tuple(max(p, 0.0) for p in probs)
        total = sum(probs)
        if abs(total - 1.0) > SUM_TOL:
            raise InvalidDistribution(f"probabilities sum to {total}, expected 1")
        if total != 1.0:
            probs = tuple(p / total for p in probs)
        object.__setattr__(self, "probs", probs)

    @property
    def dim(self) -> int:
        return len(self.probs)

    @property
    def bias(self) -> float:
        """Probability of label 1; only meaningful for binary spaces."""
        if self.dim != 2:
            raise DimensionMismatch("bias is a binary-space coordinate")
        return self.probs[1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)


@dataclass(frozen=True)
class Snapshot:
    """k labels for one instance, symmetrized into per-label counts."""

    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) < 2:
            raise InvalidDistribution("a snapshot needs at least 2 labels")
        if any(c < 0 for c in counts):
            raise InvalidDistribution(f"negative count in {counts}")
        if sum(counts) < 1:
            raise InvalidDistribution("a snapshot must contain at least one label")
        object.__setattr__(self, "counts", counts)

    @property
    def k(self) -> int:
        return sum(self.counts)

    @property
    def dim(self) -> int:
        return len(self.counts)


def l1_distance(a: SimplexPoint, b: SimplexPoint) -> float:
    """Sum of absolute coordinate differences; at most 2 on the simplex."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"{a.dim}-label point vs {b.dim}-label point")
    return float(sum(abs(x - y) for x, y in zip(a.probs, b.probs)))


def snapshot_to_point(s: Snapshot) -> SimplexPoint:
    """The normalized count histogram counts/k as a simplex point."""
    k = s.k
    return SimplexPoint(tuple(c / k for c in s.counts))


def snapshot_space_size(space: LabelSpace, k: int) -> int:
    return math.comb(k + space.num_labels - 1, space.num_labels - 1)


def enumerate_snapshot_space(
    space: LabelSpace, k: int, cap: int = DEFAULT_ENUM_CAP
) -> list:
    """All size-k count vectors over the label space, in a fixed order.

    The order is lexicographic with the first label's count descending,
    so for binary spaces the label-1 frequency increases along the list.
    Raises CapExceeded when C(k+l-1, l-1) exceeds `cap`.
    """
    if k < 1:
        raise InvalidDistribution(f"snapshot size must be >= 1, got {k}")
    size = snapshot_space_size(space, k)
    if size > cap:
        raise CapExceeded(
            f"snapshot space has {size} points, above the cap of {cap}"
        )

    def compositions(total, slots):
        if slots == 1:
            yield (total,)
            return
        for first in range(total, -1, -1):
            for rest in compositions(total - first, slots - 1):
                yield (first,) + rest

    return [Snapshot(c) for c in compositions(k, space.num_labels)]
