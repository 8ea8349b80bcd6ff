import json

import numpy as np
import pytest

from simpguard.ensemble import (
    MlpClassifier,
    MlpModel,
    TrainConfig,
    forward,
    gradient_check,
    init_mlp,
    load_model,
    model_digest,
    parameter_count,
    predict,
    save_model,
    train,
)
from simpguard.errors import ConfigError, DataError, TrainingError


def separable_data(n=200, seed=5):
    """8-dim points whose label is x0 > 0.5, kept at least 0.1 off the cut."""

    rng = np.random.default_rng(seed)
    X = rng.uniform(0.0, 1.0, size=(n, 8))
    signs = rng.integers(0, 2, size=n)
    X[:, 0] = np.where(signs, 0.6 + 0.4 * X[:, 0], 0.4 * X[:, 0])
    Y = signs.astype(float).reshape(-1, 1)
    return X, Y


class TestInit:
    def test_seeded_init_is_reproducible(self):
        a = init_mlp((8, 16, 8, 1), seed=42)
        b = init_mlp((8, 16, 8, 1), seed=42)
        for wa, wb in zip(a.weights, b.weights):
            assert np.array_equal(wa, wb)
        c = init_mlp((8, 16, 8, 1), seed=43)
        assert not np.array_equal(a.weights[0], c.weights[0])

    def test_xavier_bounds_and_zero_biases(self):
        model = init_mlp((8, 16, 8, 1), seed=0)
        for (fan_in, fan_out), w, b in zip(
            zip(model.dims, model.dims[1:]), model.weights, model.biases
        ):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            assert np.all(np.abs(w) <= bound)
            assert np.all(b == 0.0)

    def test_parameter_count(self):
        # 8*16+16 + 16*8+8 + 8*1+1
        assert parameter_count(init_mlp((8, 16, 8, 1), seed=0)) == 289

    def test_output_dim_restricted(self):
        init_mlp((4, 6, 15), seed=0)
        with pytest.raises(ConfigError, match="output dim"):
            init_mlp((4, 6, 3), seed=0)


class TestForward:
    def test_single_vector_and_batch(self):
        model = init_mlp((8, 4, 1), seed=1)
        x = np.linspace(0, 1, 8)
        single = forward(model, x)
        batch = forward(model, np.stack([x, x]))
        assert single.shape == (1,)
        assert batch.shape == (2, 1)
        assert batch[0, 0] == single[0]

    def test_outputs_are_probabilities(self):
        model = init_mlp((8, 6, 1), seed=2)
        out = forward(model, np.random.default_rng(0).normal(size=(50, 8)))
        assert np.all((out > 0.0) & (out < 1.0))

    def test_shape_mismatch_rejected(self):
        model = init_mlp((8, 4, 1), seed=1)
        with pytest.raises(ValueError):
            forward(model, np.zeros(5))

    def test_threshold_is_inclusive(self):
        # Zero weights and biases give sigmoid(0) = 0.5 exactly.
        dims = (4, 1)
        model = MlpModel(
            dims=dims, weights=(np.zeros((4, 1)),), biases=(np.zeros(1),)
        )
        outcome = predict(model, np.ones(4), threshold=0.5)
        assert outcome.scores == (0.5,)
        assert outcome.labels == (1,)


class TestTraining:
    def test_loss_trace_shape_and_descent(self):
        X, Y = separable_data()
        model, trace = train(
            init_mlp((8, 16, 8, 1), seed=42), X, Y, TrainConfig(epochs=50)
        )
        assert len(trace) == 51
        assert trace[-1] < trace[0]

    def test_separable_set_reaches_full_accuracy(self):
        X, Y = separable_data()
        model, _ = train(init_mlp((8, 16, 8, 1), seed=42), X, Y, TrainConfig())
        scores = forward(model, X)
        accuracy = float(np.mean((scores >= 0.5).astype(float) == Y))
        assert accuracy == 1.0

    def test_bitwise_determinism(self):
        X, Y = separable_data()
        config = TrainConfig(epochs=40)
        a, trace_a = train(init_mlp((8, 16, 8, 1), seed=42), X, Y, config)
        b, trace_b = train(init_mlp((8, 16, 8, 1), seed=42), X, Y, config)
        assert trace_a == trace_b
        for wa, wb in zip(a.weights, b.weights):
            assert np.array_equal(wa, wb)

    def test_divergence_raises_training_error(self):
        rng = np.random.default_rng(0)
        X = np.abs(rng.normal(size=(64, 8))) + 0.5
        Y = rng.integers(0, 2, size=(64, 1)).astype(float)
        with np.errstate(all="ignore"):
            with pytest.raises(TrainingError, match="non-finite"):
                train(
                    init_mlp((8, 16, 8, 1), seed=1), X, Y,
                    TrainConfig(learning_rate=1e150, epochs=10,
                                validation_fraction=0.0),
                )

    def test_class_weighting_changes_training(self):
        X, Y = separable_data(n=120)
        Y[:100] = 0.0
        plain, _ = train(init_mlp((8, 8, 1), seed=3), X, Y, TrainConfig(epochs=30))
        weighted, _ = train(
            init_mlp((8, 8, 1), seed=3), X, Y,
            TrainConfig(epochs=30, class_weighting=True),
        )
        assert not np.array_equal(plain.weights[0], weighted.weights[0])

    def test_bad_shapes_rejected(self):
        model = init_mlp((8, 4, 1), seed=0)
        with pytest.raises(TrainingError):
            train(model, np.zeros((10, 5)), np.zeros((10, 1)), TrainConfig())
        with pytest.raises(TrainingError):
            train(model, np.zeros((10, 8)), np.zeros((4, 1)), TrainConfig())


def kink_free(model, x, margin=1e-3):
    # central differences are invalid near a ReLU kink: a pre-activation
    # within the probe epsilon of zero flips the unit mid-probe
    h = np.asarray(x, dtype=float)
    for w, b in zip(model.weights[:-1], model.biases[:-1]):
        z = h @ w + b
        if np.abs(z).min() < margin:
            return False
        h = np.maximum(z, 0.0)
    return True


class TestGradientCheck:
    def test_random_models_pass(self):
        rng = np.random.default_rng(9)
        worst = 0.0
        for trial in range(20):
            hidden = [int(rng.integers(2, 9)) for _ in range(rng.integers(1, 3))]
            out = 1 if trial % 3 else 15
            dims = (int(rng.integers(2, 10)), *hidden, out)
            model = init_mlp(dims, seed=trial)
            while True:
                x = rng.normal(size=(4, dims[0]))
                if kink_free(model, x):
                    break
            y = rng.integers(0, 2, size=(4, out)).astype(float)
            worst = max(worst, gradient_check(model, x, y))
        assert worst < 1e-4


class TestPersistence:
    def test_round_trip_is_exact(self, tmp_path):
        model = init_mlp((8, 16, 8, 1), seed=42)
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.dims == model.dims
        for wa, wb in zip(model.weights, loaded.weights):
            assert np.array_equal(wa, wb)
        assert model_digest(loaded) == model_digest(model)

    def test_digest_tracks_parameters(self):
        a = init_mlp((8, 4, 1), seed=1)
        b = init_mlp((8, 4, 1), seed=2)
        assert model_digest(a) != model_digest(b)

    def test_corrupt_file_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("{broken")
        with pytest.raises(DataError):
            load_model(path)

    def test_wrong_format_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps({"format": "other", "dims": [2, 1]}))
        with pytest.raises(DataError):
            load_model(path)


class TestClassifierFacade:
    def test_params_round_trip(self):
        clf = MlpClassifier(epochs=12, learning_rate=0.1)
        params = clf.get_params()
        clone = MlpClassifier(**params)
        assert clone.get_params() == params
        clone.set_params(epochs=7)
        assert clone.get_params()["epochs"] == 7

    def test_set_params_rejects_unknown(self):
        with pytest.raises(ValueError):
            MlpClassifier().set_params(nonsense=1)

    def test_fit_predict_shapes(self):
        X, Y = separable_data(n=80)
        clf = MlpClassifier(epochs=60)
        clf.fit(X, Y.ravel())
        proba = clf.predict_proba(X)
        labels = clf.predict(X)
        assert proba.shape == (80,)
        assert labels.shape == (80,)
        assert set(np.unique(labels)) <= {0, 1}
        assert clf.model_ is not None
        assert len(clf.loss_trace_) == 61
