"""Feature extraction against an independent brute-force oracle."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affectpipe.errors import DegeneratePairError, NoGeometryError, NumericError
from affectpipe.features import (
    extract_features,
    extract_session,
    feature_dimension,
    pair_angle,
    pair_distance,
)
from affectpipe.model import Frame, Modality, Point2
from conftest import make_session


def brute_force_vector(points):
    """Independent all-pairs recomputation: coords, distances, angles."""
    m = len(points)
    values = []
    for x, y in points:
        values.extend([x, y])
    for i in range(m):
        for j in range(i + 1, m):
            dx = points[j][0] - points[i][0]
            dy = points[j][1] - points[i][1]
            values.append(math.sqrt(dx * dx + dy * dy))
    for i in range(m):
        for j in range(i + 1, m):
            dx = points[j][0] - points[i][0]
            dy = points[j][1] - points[i][1]
            values.append(0.0 if dx == dy == 0.0 else math.atan2(dy, dx))
    return np.array(values)


def test_pair_distance_345():
    assert pair_distance(Point2(0, 0), Point2(3, 4)) == 5.0
    assert pair_distance(Point2(2, 7), Point2(2, 7)) == 0.0
    assert pair_distance(Point2(1, 1), Point2(4, 5)) == 5.0


def test_pair_distance_symmetric():
    p, q = Point2(1.5, -2.25), Point2(-4.0, 9.0)
    assert pair_distance(p, q) == pair_distance(q, p)


def test_pair_distance_non_finite():
    with pytest.raises(NumericError):
        pair_distance(Point2(float("nan"), 0), Point2(1, 1))


def test_pair_angle_quadrants():
    assert pair_angle(Point2(0, 0), Point2(1, 1)) == pytest.approx(math.pi / 4)
    assert pair_angle(Point2(0, 0), Point2(-1, 0)) == math.pi
    assert pair_angle(Point2(0, 0), Point2(0, -2)) == pytest.approx(-math.pi / 2)


def test_pair_angle_degenerate():
    with pytest.raises(DegeneratePairError):
        pair_angle(Point2(3, 3), Point2(3, 3))


def test_feature_dimensions():
    assert feature_dimension(Modality.FACE) == 3660
    assert feature_dimension(Modality.HEAD) == 156
    assert feature_dimension(Modality.HAND) == 72
    assert feature_dimension(Modality.BODY) == 210


@pytest.mark.parametrize("modality", [Modality.TEMPLATE, Modality.SPEECH])
def test_feature_dimension_no_geometry(modality):
    with pytest.raises(NoGeometryError):
        feature_dimension(modality)


def test_extract_hand_frame_length(rng):
    frame = Frame(index=0, points=rng.uniform(0, 640, size=(8, 2)))
    fv = extract_features(frame, Modality.HAND)
    assert len(fv) == 72
    assert fv.degenerate_pairs == ()


def test_extract_matches_brute_force_all_modalities(rng):
    for modality in (Modality.FACE, Modality.HEAD, Modality.HAND, Modality.BODY):
        m = modality.point_count
        pts = rng.uniform(0, 640, size=(m, 2))
        fv = extract_features(Frame(index=0, points=pts), modality)
        expected = brute_force_vector([tuple(p) for p in pts])
        assert fv.values.shape == expected.shape
        np.testing.assert_allclose(fv.values, expected, rtol=1e-12, atol=1e-12)


def test_translation_invariance(rng):
    pts = rng.uniform(0, 640, size=(12, 2))
    fv = extract_features(Frame(index=0, points=pts), Modality.HEAD)
    shifted = extract_features(Frame(index=0, points=pts + np.array([10.0, 10.0])), Modality.HEAD)
    m = 12
    coords = slice(0, 2 * m)
    rest = slice(2 * m, None)
    np.testing.assert_allclose(
        shifted.values[coords], fv.values[coords] + 10.0, rtol=0, atol=1e-9
    )
    np.testing.assert_allclose(shifted.values[rest], fv.values[rest], rtol=1e-9, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    dx=st.floats(-1000, 1000, allow_nan=False),
    dy=st.floats(-1000, 1000, allow_nan=False),
)
def test_translation_invariance_property(seed, dx, dy):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 640, size=(8, 2))
    base = extract_features(Frame(index=0, points=pts), Modality.HAND)
    moved = extract_features(Frame(index=0, points=pts + np.array([dx, dy])), Modality.HAND)
    np.testing.assert_allclose(moved.values[16:], base.values[16:], rtol=1e-9, atol=1e-9)


def test_distance_block_properties(rng):
    """Symmetry is structural (unordered pairs); check the triangle inequality."""
    pts = rng.uniform(0, 640, size=(8, 2))
    fv = extract_features(Frame(index=0, points=pts), Modality.HAND)
    m = 8
    n_pairs = m * (m - 1) // 2
    dist = fv.values[2 * m : 2 * m + n_pairs]
    lut = {}
    k = 0
    for i in range(m):
        for j in range(i + 1, m):
            lut[(i, j)] = dist[k]
            k += 1
    get = lambda a, b: lut[(min(a, b), max(a, b))]
    for a in range(m):
        for b in range(m):
            for c in range(m):
                if len({a, b, c}) == 3:
                    assert get(a, c) <= get(a, b) + get(b, c) + 1e-9


def test_degenerate_pair_flagged():
    pts = np.array([[1.0, 1.0], [1.0, 1.0]] + [[float(i), 0.0] for i in range(2, 8)])
    fv = extract_features(Frame(index=0, points=pts), Modality.HAND)
    assert (0, 1) in fv.degenerate_pairs
    # the degenerate angle slot is 0
    m = 8
    n_pairs = m * (m - 1) // 2
    angles = fv.values[2 * m + n_pairs :]
    assert angles[0] == 0.0
    assert fv.values[2 * m] == 0.0  # its distance too


def test_extract_session_order_and_purity():
    session = make_session(Modality.HAND, n_frames=100)
    vectors = extract_session(session)
    assert len(vectors) == 100
    assert [v.frame_index for v in vectors] == list(range(100))

    pts = np.arange(16, dtype=float).reshape(8, 2)
    frames = tuple(Frame(index=i, points=pts) for i in range(3))
    from affectpipe.model import Session

    same = Session(subject_id="s", modality=Modality.HAND, frames=frames)
    outs = extract_session(same)
    for v in outs[1:]:
        np.testing.assert_array_equal(v.values, outs[0].values)


def test_extract_empty_session():
    from affectpipe.model import Session

    session = Session(subject_id="s", modality=Modality.HAND, frames=())
    assert extract_session(session) == []
