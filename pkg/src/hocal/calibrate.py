"""Post-hoc k-th order calibration from snapshot data.

Per partition, the calibrated predictor is simply the empirical mixture
of normalized snapshot histograms; with N at the level the sample-size
formula prescribes, that empirical mixture is within eps of the exact
k-th order projection of the cell's Bayes mixture with probability
1 - delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DimensionMismatch, DomainError, EmptyPartition, InvalidDistribution
from .mixture import Mixture, empirical_mixture, mixture_from_arrays
from .simplex import LabelSpace, Snapshot, snapshot_space_size, snapshot_to_point
from .transport import DEFAULT_SUPPORT_CAP, wasserstein1

LATTICE_TOL = 1e-9


@dataclass(frozen=True)
class SnapshotDataset:
    """(partition_id, snapshot) records, all snapshots of one size k."""

    records: tuple
    space: LabelSpace
    k: int

    def __post_init__(self):
        records = tuple((str(pid), snap) for pid, snap in self.records)
        for pid, snap in records:
            if snap.dim != self.space.num_labels:
                raise DimensionMismatch(
                    f"partition {pid!r}: snapshot over {snap.dim} labels in a "
                    f"{self.space.num_labels}-label dataset"
                )
            if snap.k != self.k:
                raise InvalidDistribution(
                    f"partition {pid!r}: snapshot of size {snap.k}, expected {self.k}"
                )
        object.__setattr__(self, "records", records)

    @property
    def partitions(self) -> list:
        seen = {}
        for pid, _ in self.records:
            seen[pid] = True
        return sorted(seen)


@dataclass(frozen=True)
class CalibrationTable:
    """Partition -> predicted mixture, every mixture on the size-k lattice.

    counts carries how many records built each entry (None for exact
    reference tables that were never estimated from data); downstream
    scoring uses it for the record-weighted mean.
    """

    entries: dict
    k: int
    space: LabelSpace
    counts: dict | None = None

    def __post_init__(self):
        for pid, mix in self.entries.items():
            if mix.space != self.space:
                raise DimensionMismatch(f"partition {pid!r}: mixture over a different label space")
            biases = mix.points_array() * self.k
            drift = abs(biases - biases.round()).max()
            if drift > LATTICE_TOL * self.k:
                raise InvalidDistribution(
                    f"partition {pid!r}: support off the size-{self.k} snapshot lattice"
                )

    @property
    def partitions(self) -> list:
        return sorted(self.entries)


@dataclass(frozen=True)
class CalibrationScore:
    """Per-partition Wasserstein errors with worst-case and weighted summaries."""

    per_partition: dict
    worst: float
    weighted_mean: float


def posthoc_calibrate(
    ds: SnapshotDataset,
    partitions: list | None = None,
    fill_missing: bool = False,
) -> CalibrationTable:
    """The empirical mixture of snapshot histograms, per partition.

    `partitions` optionally fixes the full key set the table must cover
    (e.g. the reference table's keys). A requested partition with no
    records is a hard error unless fill_missing is set, in which case it
    gets the uniform mixture over the label-space vertices.
    """
    if not ds.records:
        raise EmptyPartition("dataset has no records")
    groups = {}
    for pid, snap in ds.records:
        groups.setdefault(pid, []).append(snap)
    wanted = ds.partitions if partitions is None else sorted(dict.fromkeys(partitions))
    entries = {}
    counts = {}
    num_labels = ds.space.num_labels
    for pid in wanted:
        snaps = groups.get(pid, [])
        if snaps:
            entries[pid] = empirical_mixture([snapshot_to_point(s) for s in snaps])
            counts[pid] = len(snaps)
        elif fill_missing:
            vertices = [
                tuple(1.0 if j == i else 0.0 for j in range(num_labels))
                for i in range(num_labels)
            ]
            entries[pid] = mixture_from_arrays(
                vertices, [1.0 / num_labels] * num_labels, ds.space
            )
            counts[pid] = 0
        else:
            raise EmptyPartition(f"partition {pid!r} has no records")
    return CalibrationTable(entries=entries, k=ds.k, space=ds.space, counts=counts)


def koc_error(
    table: CalibrationTable,
    reference: CalibrationTable,
    support_cap: int = DEFAULT_SUPPORT_CAP,
) -> CalibrationScore:
    """Per-partition W1 between a table and a reference table.

    The weighted mean weights each partition by the table's record count
    when counts are available, else uniformly.
    """
    if table.k != reference.k:
        raise InvalidDistribution(f"table has k={table.k}, reference has k={reference.k}")
    if table.space != reference.space:
        raise DimensionMismatch("table and reference label spaces differ")
    if set(table.entries) != set(reference.entries):
        missing = set(reference.entries) ^ set(table.entries)
        raise InvalidDistribution(f"partition keys differ: {sorted(missing)}")
    per = {}
    for pid in table.partitions:
        per[pid], _ = wasserstein1(
            table.entries[pid], reference.entries[pid], support_cap=support_cap
        )
    if table.counts and sum(table.counts.get(p, 0) for p in per) > 0:
        weights = {p: table.counts.get(p, 0) for p in per}
    else:
        weights = {p: 1 for p in per}
    total = sum(weights.values())
    weighted = sum(per[p] * weights[p] for p in per) / total
    return CalibrationScore(
        per_partition=per,
        worst=max(per.values()),
        weighted_mean=float(weighted),
    )


def required_samples(space: LabelSpace, k: int, eps: float, delta: float) -> int:
    """Snapshots per partition that make the empirical mixture eps-close
    to the exact projection with probability 1 - delta.

    ceil(2 (|Y^(k)| ln 2 + ln(1/delta)) / eps^2) with |Y^(k)| the snapshot
    lattice size.
    """
    if not 0.0 < eps <= 1.0:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    size = snapshot_space_size(space, k)
    return math.ceil(2.0 * (size * math.log(2.0) + math.log(1.0 / delta)) / eps**2)


def hoc_bound(eps: float, space: LabelSpace, k: int) -> float:
    """Higher-order calibration error implied by k-th order error eps:
    eps + l / (2 sqrt(k))."""
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    return eps + space.num_labels / (2.0 * math.sqrt(k))