from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from segrd.errors import EmptyCloud, LengthMismatch, NegativeAlpha
from segrd.kitti import LabeledCloud, ScanPair
from segrd.metric import MetricConfig, delta, delta_human, evaluate_pair, evaluate_pairs, pair_labels
from segrd.spatial import NnMap

from conftest import random_cloud

REF = LabeledCloud.from_arrays([(0, 0, 0), (1, 0, 0), (5, 0, 0)], labels=[40, 40, 48])
DEG = LabeledCloud.from_arrays([(0.1, 0, 0), (5, 0, 0)], labels=[48, 48])
HAND_PAIRS = [(40, 48), (40, 48), (48, 48)]
HUMAN_PAIRS = [(30, 40), (30, 30), (40, 30)]


def brute_counts(pairs, lam, human=False):
    """Literal set construction over enumerated pair indices."""
    S = {i for i, (x, y) in enumerate(pairs) if x == lam or y == lam}
    E = {i for i in S if pairs[i][0] != pairs[i][1]}
    Eh = {i for i in S if pairs[i][0] == lam and pairs[i][1] != lam} if human else set()
    return len(S), len(E), len(Eh)


def test_pair_labels_hand_example():
    nn = NnMap(np.array([0, 0, 1]), np.array([0.1, 0.9, 0.0]))
    assert pair_labels(REF, DEG, nn).tolist() == [list(p) for p in HAND_PAIRS]


def test_pair_labels_identity():
    nn = NnMap(np.arange(3), np.zeros(3))
    assert all(a == b for a, b in pair_labels(REF, REF, nn))


def test_pair_labels_checks_lengths():
    with pytest.raises(LengthMismatch):
        pair_labels(REF, DEG, NnMap(np.array([0, 0]), np.zeros(2)))
    with pytest.raises(LengthMismatch):
        pair_labels(REF, DEG, NnMap(np.array([0, 0, 2]), np.zeros(3)))


def test_pair_labels_empty():
    empty = LabeledCloud.from_arrays(np.zeros((0, 3)))
    assert pair_labels(empty, DEG, NnMap(np.zeros(0, int), np.zeros(0))).shape == (0, 2)


@pytest.mark.parametrize(
    "label, s, e, expected",
    [(40, 2, 2, Fraction(1)), (48, 3, 2, Fraction(2, 3))],
)
def test_delta_hand_example(label, s, e, expected):
    assert brute_counts(HAND_PAIRS, label) == (s, e, 0)
    r = delta(HAND_PAIRS, label)
    assert (r.s_count, r.e_count, r.eh_count) == (s, e, 0)
    assert r.fraction == expected
    assert r.delta == float(expected)


def test_delta_absent_label():
    r = delta(HAND_PAIRS, 70)
    assert r.s_count == 0 and r.delta is None and r.fraction is None


def test_delta_identical_labels():
    pairs = [(10, 10), (40, 40), (40, 40)]
    assert delta(pairs, 40).delta == 0.0
    assert delta(pairs, 10).delta == 0.0


def test_delta_human_hand_example():
    assert brute_counts(HUMAN_PAIRS, 30, human=True) == (3, 2, 1)
    r = delta_human(HUMAN_PAIRS, 30, 1.0)
    assert (r.s_count, r.e_count, r.eh_count) == (3, 2, 1)
    assert r.fraction == Fraction(3, 4)
    assert r.delta == 0.75


def test_delta_human_alpha_zero_is_plain():
    r = delta_human(HUMAN_PAIRS, 30, 0.0)
    assert r.fraction == Fraction(2, 3)
    assert r.delta == delta(HUMAN_PAIRS, 30).delta


def test_delta_human_no_mismatch():
    for a in (0, 1, 7.5):
        assert delta_human([(30, 30)] * 4, 30, a).delta == 0.0


def test_delta_human_absent():
    assert delta_human([(40, 40)], 30, 1.0).delta is None


def test_negative_alpha():
    with pytest.raises(NegativeAlpha):
        delta_human(HUMAN_PAIRS, 30, -0.1)
    with pytest.raises(NegativeAlpha):
        MetricConfig(alpha=-1)


ALPHAS = [0, 0.5, 1, 2, 10]


def test_alpha_strictly_increasing_with_human_errors():
    values = [delta_human(HUMAN_PAIRS, 30, a).fraction for a in ALPHAS]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_alpha_constant_without_human_errors():
    pairs = [(40, 30), (30, 30), (40, 40)]  # a non-human point became human; E_h empty
    values = {delta_human(pairs, 30, a).fraction for a in ALPHAS}
    assert values == {Fraction(1, 2)}


def test_evaluate_pair_hand_example():
    results = {r.label: r for r in evaluate_pair(ScanPair(REF, DEG))}
    assert sorted(results) == [40, 48]
    assert results[40].fraction == 1
    assert results[48].fraction == Fraction(2, 3)


def test_evaluate_pair_identity(rng):
    cloud = random_cloud(rng, 300)
    assert all(r.delta == 0.0 for r in evaluate_pair(ScanPair(cloud, cloud)))


def test_erased_label_is_one():
    ref = LabeledCloud.from_arrays([(0, 0, 0), (1, 0, 0), (2, 0, 0)], labels=[10, 20, 20])
    deg = LabeledCloud.from_arrays([(0, 0, 0), (2, 0, 0)], labels=[20, 20])
    results = {r.label: r for r in evaluate_pair(ScanPair(ref, deg))}
    assert results[10].delta == 1.0


def test_evaluate_pair_human_uses_alpha():
    ref = LabeledCloud.from_arrays([(0, 0, 0), (1, 0, 0), (2, 0, 0)], labels=[30, 30, 40])
    deg = LabeledCloud.from_arrays([(0, 0, 0), (1, 0, 0), (2, 0, 0)], labels=[40, 30, 30])
    results = {r.label: r for r in evaluate_pair(ScanPair(ref, deg), MetricConfig(alpha=1.0))}
    assert results[30].fraction == Fraction(3, 4)
    assert results[40].fraction == 1
    other = {r.label: r for r in evaluate_pair(ScanPair(ref, deg), MetricConfig(1.0, {40}))}
    assert other[30].fraction == Fraction(2, 3)
    assert other[40].eh_count == 1


def test_evaluate_pair_empty():
    empty = LabeledCloud.from_arrays(np.zeros((0, 3)))
    with pytest.raises(EmptyCloud):
        evaluate_pair(ScanPair(empty, DEG))
    with pytest.raises(EmptyCloud):
        evaluate_pair(ScanPair(REF, empty))


label_pairs = st.lists(st.tuples(st.sampled_from([0, 10, 30, 40]), st.sampled_from([0, 10, 30, 40])), max_size=1000)


@settings(max_examples=100, deadline=None)
@given(label_pairs, st.floats(0, 20))
def test_counts_match_set_construction(pairs, alpha):
    results = {r.label: r for r in evaluate_pairs(pairs, MetricConfig(alpha, {30}))}
    labels = {x for p in pairs for x in p}
    assert set(results) == labels
    for lam, r in results.items():
        assert (r.s_count, r.e_count, r.eh_count) == brute_counts(pairs, lam, human=(lam == 30))
        assert 0 <= r.eh_count <= r.e_count <= r.s_count
        assert 0.0 <= r.delta <= 1.0


def test_extra_far_points_do_not_change_result(rng):
    ref = random_cloud(rng, 200, scale=5)
    deg = random_cloud(rng, 150, scale=5)
    far = random_cloud(rng, 100, scale=5)
    far = LabeledCloud.from_arrays(far.positions + 100, labels=far.labels)
    bigger = LabeledCloud.from_arrays(
        np.vstack([deg.positions, far.positions]), labels=np.concatenate([deg.labels, far.labels])
    )
    assert evaluate_pair(ScanPair(ref, deg)) == evaluate_pair(ScanPair(ref, bigger))


def test_rigid_motion_and_scale_invariance(rng):
    ref = random_cloud(rng, 400)
    deg = random_cloud(rng, 300)
    base = evaluate_pair(ScanPair(ref, deg))
    rot = Rotation.from_euler("zyx", [30, 10, -20], degrees=True).as_matrix()
    shift = np.array([12.0, -3.0, 1.5])

    def moved(c, f):
        return LabeledCloud.from_arrays(f(c.positions.astype(np.float64)), labels=c.labels)

    def rigid(p):
        return p @ rot.T + shift

    def scaled(p):
        return p * 3.7

    for f in (rigid, scaled):
        assert evaluate_pair(ScanPair(moved(ref, f), moved(deg, f))) == base
