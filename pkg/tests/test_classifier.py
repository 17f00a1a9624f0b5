"""Classifier tests: standardizer rules, deterministic training, Eq-style
session probabilities against a counting oracle, serialization."""
import numpy as np
import pytest

from affectpipe.classifier import (
    ClassifierModel,
    Standardizer,
    TrainConfig,
    fit_standardizer,
    load_model,
    predict_frame,
    predict_session,
    save_model,
    session_prediction_from_frames,
    standardize,
    train,
)
from affectpipe.errors import (
    DegenerateTrainingError,
    EmptySessionError,
    FormatError,
    ShapeError,
)
from affectpipe.model import Emotion, Modality


def two_cluster_data(rng, n=200, gap=10.0, dim=3):
    """Two classes separated by `gap` along the first coordinate."""
    half = n // 2
    a = rng.normal(0, 0.5, size=(half, dim))
    b = rng.normal(0, 0.5, size=(n - half, dim))
    b[:, 0] += gap
    x = np.vstack([a, b])
    y = [Emotion.ANGER] * half + [Emotion.HAPPINESS] * (n - half)
    return x, y


def nearest_centroid_accuracy(x_train, y_train, x_test, y_test):
    """Independent oracle: classify by closest class centroid."""
    classes = sorted({e.code for e in y_train})
    centroids = {
        c: x_train[[e.code == c for e in y_train]].mean(axis=0) for c in classes
    }
    hits = 0
    for vec, label in zip(x_test, y_test):
        dists = {c: np.linalg.norm(vec - mu) for c, mu in centroids.items()}
        pred = min(dists, key=dists.get)
        hits += pred == label.code
    return hits / len(y_test)


# --- standardizer ------------------------------------------------------------

def test_standardizer_two_points():
    stats = fit_standardizer(np.array([[0.0], [2.0]]))
    assert stats.mean[0] == 1.0
    assert stats.scale[0] == 1.0
    np.testing.assert_array_equal(
        standardize(np.array([[0.0], [2.0]]), stats), [[-1.0], [1.0]]
    )


def test_standardizer_constant_column():
    data = np.array([[5.0, 1.0], [5.0, 3.0], [5.0, 5.0]])
    stats = fit_standardizer(data)
    z = standardize(data, stats)
    np.testing.assert_array_equal(z[:, 0], np.zeros(3))


def test_standardize_mean_is_zero_vector(rng):
    data = rng.normal(size=(50, 4))
    stats = fit_standardizer(data)
    np.testing.assert_allclose(standardize(stats.mean, stats), np.zeros(4), atol=1e-12)


def test_standardize_dimension_mismatch():
    stats = fit_standardizer(np.zeros((3, 4)))
    with pytest.raises(ShapeError):
        standardize(np.zeros(5), stats)


# --- training ----------------------------------------------------------------

def test_train_separable_two_classes(rng):
    x, y = two_cluster_data(rng, n=200, gap=10.0)
    split = 150
    model = train(x[:split], y[:split], Modality.HAND, seed=3)
    preds = [predict_frame(model, v) for v in x[split:]]
    accuracy = np.mean([p == t for p, t in zip(preds, y[split:])])
    oracle = nearest_centroid_accuracy(x[:split], y[:split], x[split:], y[split:])
    assert oracle >= 0.99  # the corpus itself is easy
    assert accuracy >= 0.99


def test_train_deterministic(rng):
    x, y = two_cluster_data(rng)
    a = train(x, y, Modality.HAND, seed=11)
    b = train(x, y, Modality.HAND, seed=11)
    np.testing.assert_array_equal(a.weights, b.weights)
    np.testing.assert_array_equal(a.biases, b.biases)
    c = train(x, y, Modality.HAND, seed=12)
    assert not np.array_equal(a.weights, c.weights)


def test_train_single_class_fails(rng):
    x = rng.normal(size=(20, 3))
    with pytest.raises(DegenerateTrainingError):
        train(x, [Emotion.ANGER] * 20, Modality.HAND)


def test_train_label_count_mismatch(rng):
    x = rng.normal(size=(20, 3))
    with pytest.raises(ShapeError):
        train(x, [Emotion.ANGER] * 19, Modality.HAND)


# --- predict_frame -----------------------------------------------------------

def _zero_model(codes=(0, 1, 3), dim=4):
    n = len(codes)
    return ClassifierModel(
        modality=Modality.HAND,
        class_codes=codes,
        weights=np.zeros((n, dim)),
        biases=np.zeros(n),
        stats=Standardizer(mean=np.zeros(dim), scale=np.ones(dim)),
        config=TrainConfig(),
        seed=0,
    )


def test_predict_frame_tie_break_lowest_code():
    model = _zero_model(codes=(0, 1, 3))
    assert predict_frame(model, np.zeros(4)) is Emotion.ANGER
    model2 = _zero_model(codes=(2, 5))
    assert predict_frame(model2, np.zeros(4)) is Emotion.SURPRISE


def test_predict_frame_dimension_mismatch():
    model = _zero_model()
    with pytest.raises(ShapeError):
        predict_frame(model, np.zeros(5))


def test_predict_frame_inside_cluster(rng):
    x, y = two_cluster_data(rng, n=300, gap=10.0)
    model = train(x, y, Modality.HAND, seed=1)
    deep_anger = np.array([0.0, 0.0, 0.0])
    assert predict_frame(model, deep_anger) is Emotion.ANGER
    deep_happiness = np.array([10.0, 0.0, 0.0])
    assert predict_frame(model, deep_happiness) is Emotion.HAPPINESS


def test_scale_invariance_of_argmax(rng):
    """Multiplying every class score by one positive constant keeps the argmax."""
    x, y = two_cluster_data(rng)
    model = train(x, y, Modality.HAND, seed=5)
    scaled = ClassifierModel(
        modality=model.modality,
        class_codes=model.class_codes,
        weights=model.weights * 3.5,
        biases=model.biases * 3.5,
        stats=model.stats,
        config=model.config,
        seed=model.seed,
    )
    for v in x[:50]:
        assert predict_frame(model, v) == predict_frame(scaled, v)


# --- session prediction (Eq-style counting) -----------------------------------

def counting_oracle(frames):
    """Independent recount of P_e and argmax with lowest-code ties."""
    counts = {c: 0 for c in range(7)}
    for e in frames:
        counts[e.code] += 1
    n = len(frames)
    probs = {c: counts[c] / n for c in counts}
    best = max(probs.values())
    decided = min(c for c, p in probs.items() if p == best)
    return counts, probs, decided


def test_session_probabilities_60_40():
    frames = [Emotion.ANGER] * 60 + [Emotion.HAPPINESS] * 40
    pred = session_prediction_from_frames(frames)
    assert pred.probabilities[Emotion.ANGER.code] == 0.6
    assert pred.probabilities[Emotion.HAPPINESS.code] == 0.4
    assert pred.decided is Emotion.ANGER
    assert pred.counts.sum() == 100


def test_session_tie_goes_to_lowest_code():
    frames = [Emotion.ANGER] * 50 + [Emotion.HAPPINESS] * 50
    assert session_prediction_from_frames(frames).decided is Emotion.ANGER
    frames2 = [Emotion.SADNESS] * 10 + [Emotion.DISGUST] * 10
    assert session_prediction_from_frames(frames2).decided is Emotion.DISGUST


def test_session_probabilities_sum_to_one(rng):
    for _ in range(100):
        n = int(rng.integers(1, 300))
        frames = [Emotion(int(c)) for c in rng.integers(0, 7, size=n)]
        pred = session_prediction_from_frames(frames)
        assert pred.probabilities.sum() == pytest.approx(1.0, abs=1e-12)
        counts, probs, decided = counting_oracle(frames)
        for c in range(7):
            assert pred.counts[c] == counts[c]
            assert pred.probabilities[c] == probs[c]
        assert pred.decided.code == decided


def test_predict_session_empty():
    with pytest.raises(EmptySessionError):
        session_prediction_from_frames([])
    model = _zero_model()
    with pytest.raises(EmptySessionError):
        predict_session(model, np.zeros((0, 4)))


def test_predict_session_matches_per_frame(rng):
    x, y = two_cluster_data(rng)
    model = train(x, y, Modality.HAND, seed=2)
    session_vecs = x[:40]
    pred = predict_session(model, session_vecs)
    assert pred.n == 40
    per_frame = [predict_frame(model, v) for v in session_vecs]
    assert list(pred.frame_emotions) == per_frame


# --- serialization -----------------------------------------------------------

def test_model_round_trip(tmp_path, rng):
    x, y = two_cluster_data(rng)
    model = train(x, y, Modality.HAND, seed=9)
    path = tmp_path / "hand.model"
    save_model(model, path)
    back = load_model(path)
    assert back.modality is Modality.HAND
    assert back.class_codes == model.class_codes
    assert back.seed == 9
    assert back.config == model.config
    np.testing.assert_array_equal(back.weights, model.weights)
    np.testing.assert_array_equal(back.biases, model.biases)
    np.testing.assert_array_equal(back.stats.mean, model.stats.mean)
    np.testing.assert_array_equal(back.stats.scale, model.stats.scale)


def test_model_save_deterministic(tmp_path, rng):
    x, y = two_cluster_data(rng)
    p1, p2 = tmp_path / "a.model", tmp_path / "b.model"
    save_model(train(x, y, Modality.HAND, seed=9), p1)
    save_model(train(x, y, Modality.HAND, seed=9), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_model_rejects_truncated(tmp_path, rng):
    x, y = two_cluster_data(rng)
    path = tmp_path / "hand.model"
    save_model(train(x, y, Modality.HAND, seed=9), path)
    data = path.read_bytes()
    path.write_bytes(data[:-16])
    with pytest.raises(FormatError, match="payload"):
        load_model(path)


def test_model_rejects_garbage(tmp_path):
    path = tmp_path / "bad.model"
    path.write_bytes(b"\x00\x01\x02 not a model\n1234")
    with pytest.raises(FormatError):
        load_model(path)
