import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hocal.errors import InvalidDistribution
from hocal.mixture import (
    Mixture,
    RngSeed,
    centroid,
    empirical_mixture,
    mixture_from_arrays,
    project_k,
    sample_snapshot,
    sample_snapshots,
)
from hocal.simplex import LabelSpace, SimplexPoint, snapshot_to_point

BINARY = LabelSpace(2)
TERNARY = LabelSpace(3)


def test_rng_seed_validation():
    with pytest.raises(InvalidDistribution):
        RngSeed(-1)
    with pytest.raises(InvalidDistribution):
        RngSeed(2**64)
    RngSeed(0)
    RngSeed(2**64 - 1)


def test_rng_determinism_and_child_streams():
    a = RngSeed(42).generator().random(5)
    b = RngSeed(42).generator().random(5)
    assert np.array_equal(a, b)
    child0 = RngSeed(42).child(0)
    child1 = RngSeed(42).child(1)
    assert child0.seed != child1.seed
    assert child0.seed == RngSeed(42).child(0).seed


def test_mixture_weight_validation():
    with pytest.raises(InvalidDistribution):
        mixture_from_arrays([(0.5, 0.5)], [0.9], BINARY)
    with pytest.raises(InvalidDistribution):
        mixture_from_arrays([(0.5, 0.5), (0.2, 0.8)], [1.0, -0.0], BINARY)
    with pytest.raises(InvalidDistribution):
        Mixture((), BINARY)


def test_mixture_merges_duplicates():
    m = mixture_from_arrays([(0.5, 0.5), (0.5, 0.5)], [0.4, 0.6], BINARY)
    assert m.size == 1
    assert m.support[0][1] == pytest.approx(1.0, abs=0)


def test_mixture_merges_near_duplicates():
    m = mixture_from_arrays([(0.5, 0.5), (0.5 + 1e-13, 0.5 - 1e-13)], [0.4, 0.6], BINARY)
    assert m.size == 1


def test_mixture_support_order_is_canonical():
    m1 = mixture_from_arrays([(0.9, 0.1), (0.2, 0.8)], [0.3, 0.7], BINARY)
    m2 = mixture_from_arrays([(0.2, 0.8), (0.9, 0.1)], [0.7, 0.3], BINARY)
    assert m1 == m2
    assert [p.probs for p, _ in m1.support] == sorted(p.probs for p, _ in m1.support)


def test_centroid():
    m = mixture_from_arrays([(0.8, 0.2), (0.3, 0.7)], [0.5, 0.5], BINARY)
    assert centroid(m).probs == pytest.approx((0.55, 0.45), abs=1e-15)


def test_project_k_binomial_masses():
    # single component p = (0.7, 0.3), k = 2: masses 0.49, 0.42, 0.09
    m = mixture_from_arrays([(0.7, 0.3)], [1.0], BINARY)
    proj = project_k(m, 2)
    got = {p.probs: w for p, w in proj.support}
    assert got[(1.0, 0.0)] == pytest.approx(0.49, abs=1e-12)
    assert got[(0.5, 0.5)] == pytest.approx(0.42, abs=1e-12)
    assert got[(0.0, 1.0)] == pytest.approx(0.09, abs=1e-12)


def test_project_k_multinomial_masses_three_labels():
    m = mixture_from_arrays([(0.5, 0.3, 0.2)], [1.0], TERNARY)
    proj = project_k(m, 2)
    got = {p.probs: w for p, w in proj.support}
    assert got[(1.0, 0.0, 0.0)] == pytest.approx(0.25, abs=1e-12)
    assert got[(0.0, 1.0, 0.0)] == pytest.approx(0.09, abs=1e-12)
    assert got[(0.0, 0.0, 1.0)] == pytest.approx(0.04, abs=1e-12)
    assert got[(0.5, 0.5, 0.0)] == pytest.approx(0.30, abs=1e-12)
    assert got[(0.5, 0.0, 0.5)] == pytest.approx(0.20, abs=1e-12)
    assert got[(0.0, 0.5, 0.5)] == pytest.approx(0.12, abs=1e-12)


def test_project_k_keeps_vertices_fixed():
    m = mixture_from_arrays([(1.0, 0.0)], [1.0], BINARY)
    proj = project_k(m, 5)
    assert proj.size == 1
    assert proj.support[0][0].probs == (1.0, 0.0)


def test_project_k_weights_sum_to_one():
    m = mixture_from_arrays([(0.8, 0.2), (0.3, 0.7)], [0.5, 0.5], BINARY)
    proj = project_k(m, 7)
    assert float(proj.weights_array().sum()) == pytest.approx(1.0, abs=1e-12)


@settings(deadline=None, max_examples=40)
@given(
    st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=2, max_size=4),
    st.lists(st.floats(min_value=0.05, max_value=0.95), min_size=2, max_size=4),
    st.integers(min_value=1, max_value=9),
)
def test_project_k_preserves_the_centroid(raw_w, biases, k):
    # E[snapshot/k] = E[p]: the projection never moves the mean
    n = min(len(raw_w), len(biases))
    total = sum(raw_w[:n])
    pts = [(1.0 - b, b) for b in biases[:n]]
    m = mixture_from_arrays(pts, [w / total for w in raw_w[:n]], BINARY)
    proj = project_k(m, k)
    assert centroid(proj).probs == pytest.approx(centroid(m).probs, abs=1e-12)


def test_sampling_matches_exact_projection():
    # Monte Carlo check of project_k: empirical snapshot frequencies vs
    # the exact projection masses, fixed seed, 4-sigma-ish slack.
    m = mixture_from_arrays([(0.8, 0.2), (0.3, 0.7)], [0.5, 0.5], BINARY)
    k, n = 2, 40000
    proj = project_k(m, k)
    snaps = sample_snapshots(m, k, n, RngSeed(2024))
    freq = {}
    for s in snaps:
        p = snapshot_to_point(s).probs
        freq[p] = freq.get(p, 0) + 1.0 / n
    assert set(freq) <= {p.probs for p, _ in proj.support}
    tv = 0.5 * sum(abs(freq.get(p.probs, 0.0) - w) for p, w in proj.support)
    assert tv < 0.015


def test_sample_snapshot_single_draw_shape():
    m = mixture_from_arrays([(0.5, 0.5)], [1.0], BINARY)
    s = sample_snapshot(m, 6, RngSeed(1))
    assert s.k == 6
    assert s.dim == 2


def test_sample_snapshots_deterministic_under_seed():
    m = mixture_from_arrays([(0.6, 0.4), (0.1, 0.9)], [0.5, 0.5], BINARY)
    a = sample_snapshots(m, 3, 50, RngSeed(7))
    b = sample_snapshots(m, 3, 50, RngSeed(7))
    assert a == b


def test_empirical_mixture_merges_and_weights():
    pts = [SimplexPoint((1.0, 0.0)), SimplexPoint((1.0, 0.0)), SimplexPoint((0.0, 1.0))]
    m = empirical_mixture(pts)
    got = {p.probs: w for p, w in m.support}
    assert got[(1.0, 0.0)] == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert got[(0.0, 1.0)] == pytest.approx(1.0 / 3.0, abs=1e-15)
    with pytest.raises(InvalidDistribution):
        empirical_mixture([])