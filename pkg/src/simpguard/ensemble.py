"""From-scratch feed-forward meta-classifier.

Two hidden ReLU layers and a sigmoid output head, trained by mini-batch
gradient descent on binary cross-entropy. Everything is plain numpy and
seeded, so training is bit-reproducible; there is deliberately no autodiff
framework behind this, which is why gradient_check exists.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, DataError, TrainingError

log = logging.getLogger(__name__)

MODEL_SCHEMA_VERSION = 1
VALID_OUTPUT_DIMS = (1, 15)

DEFAULT_SPURIOUS_HIDDEN = (16, 8)
DEFAULT_DISTORTION_HIDDEN = (32, 16)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # tanh form is stable for large |z|
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _bce_from_logits(z: np.ndarray, y: np.ndarray, weights: np.ndarray | None) -> float:
    """Mean over samples of the summed per-output cross-entropy."""

    per_element = np.logaddexp(0.0, z) - y * z
    if weights is not None:
        per_element = per_element * weights
    return float(per_element.sum(axis=1).mean())


@dataclass(frozen=True, eq=False)
class MlpModel:
    """Immutable network parameters. ``weights[i]`` maps layer i to i+1
    with shape (fan_in, fan_out); biases start at zero."""

    dims: tuple[int, ...]
    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]
    hidden_activation: str = "relu"
    output_activation: str = "sigmoid"

    def __post_init__(self) -> None:
        if len(self.dims) < 2:
            raise ConfigError(f"need at least input and output dims, got {self.dims}")
        if any(d < 1 for d in self.dims):
            raise ConfigError(f"dims must be positive, got {self.dims}")
        if len(self.weights) != len(self.dims) - 1 or len(self.biases) != len(self.dims) - 1:
            raise ConfigError("parameter count does not match dims")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (self.dims[i], self.dims[i + 1]) or b.shape != (self.dims[i + 1],):
                raise ConfigError(
                    f"layer {i} shapes {w.shape}/{b.shape} do not chain {self.dims}"
                )
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ConfigError(f"layer {i} contains non-finite parameters")

    @property
    def in_dim(self) -> int:
        return self.dims[0]

    @property
    def out_dim(self) -> int:
        return self.dims[-1]


def parameter_count(model: MlpModel) -> int:
    return sum(w.size + b.size for w, b in zip(model.weights, model.biases))


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 300
    batch_size: int = 32
    seed: int = 42
    hidden_dims: tuple[int, ...] | None = None
    threshold: float = 0.5
    validation_fraction: float = 0.1
    class_weighting: bool = False

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0.0 <= self.validation_fraction < 1.0:
            raise ConfigError(
                f"validation_fraction must be in [0, 1), got {self.validation_fraction}"
            )
        if self.hidden_dims is not None and any(d < 1 for d in self.hidden_dims):
            raise ConfigError(f"hidden_dims must be positive, got {self.hidden_dims}")


def init_mlp(dims: Sequence[int], seed: int) -> MlpModel:
    """Seeded Xavier-uniform weights, zero biases; same seed, same bytes."""

    dims = tuple(int(d) for d in dims)
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise ConfigError(f"invalid dims {dims}")
    if dims[-1] not in VALID_OUTPUT_DIMS:
        raise ConfigError(
            f"output dim must be one of {VALID_OUTPUT_DIMS}, got {dims[-1]}"
        )
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(dims, dims[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(dims=dims, weights=tuple(weights), biases=tuple(biases))


def _as_batch(model: MlpModel, x: np.ndarray) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != model.in_dim:
        raise ValueError(
            f"input shape {x.shape} does not match model input dim {model.in_dim}"
        )
    return x, single


def _forward_pass(model: MlpModel, x: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Returns (activations per layer incl. input, pre-activations per layer)."""

    activations = [x]
    pre = []
    a = x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = a @ w + b
        pre.append(z)
        a = _sigmoid(z) if i == last else np.maximum(z, 0.0)
        activations.append(a)
    return activations, pre


def forward(model: MlpModel, x: Sequence[float] | np.ndarray) -> np.ndarray:
    """Output probabilities for one vector or a batch of rows."""

    batch, single = _as_batch(model, np.asarray(x, dtype=float))
    activations, _ = _forward_pass(model, batch)
    out = activations[-1]
    return out[0] if single else out


@dataclass(frozen=True)
class Prediction:
    scores: tuple[float, ...]
    labels: tuple[int, ...]


def predict(
    model: MlpModel, x: Sequence[float] | np.ndarray, threshold: float = 0.5
) -> Prediction:
    """Scores plus thresholded labels; a score equal to the threshold is positive."""

    scores = forward(model, x)
    if scores.ndim != 1:
        raise ValueError("predict takes a single feature vector; use forward for batches")
    labels = tuple(int(s >= threshold) for s in scores)
    return Prediction(scores=tuple(float(s) for s in scores), labels=labels)


def _gradients(
    model: MlpModel,
    x: np.ndarray,
    y: np.ndarray,
    weights: np.ndarray | None = None,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Analytic gradients of the mean summed cross-entropy."""

    n = x.shape[0]
    activations, pre = _forward_pass(model, x)
    delta = (_sigmoid(pre[-1]) - y) / n
    if weights is not None:
        delta = delta * weights
    grads_w: list[np.ndarray] = [np.empty(0)] * len(model.weights)
    grads_b: list[np.ndarray] = [np.empty(0)] * len(model.biases)
    for i in range(len(model.weights) - 1, -1, -1):
        grads_w[i] = activations[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ model.weights[i].T) * (pre[i - 1] > 0.0)
    return grads_w, grads_b


def _validate_training_data(
    model: MlpModel, X: np.ndarray, Y: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0] or X.shape[0] == 0:
        raise TrainingError(
            f"need matching non-empty X/Y, got shapes {X.shape} and {Y.shape}"
        )
    if X.shape[1] != model.in_dim or Y.shape[1] != model.out_dim:
        raise TrainingError(
            f"data shapes {X.shape}/{Y.shape} do not match model dims {model.dims}"
        )
    if not np.isfinite(X).all():
        raise TrainingError("X contains non-finite values")
    if not np.isin(Y, (0.0, 1.0)).all():
        raise TrainingError("labels must be 0 or 1 per output")
    return X, Y


def train(
    model: MlpModel, X: np.ndarray, Y: np.ndarray, config: TrainConfig
) -> tuple[MlpModel, list[float]]:
    """Mini-batch gradient descent; returns the trained model and loss trace.

    The trace starts with the pre-training loss, then one entry per epoch,
    all measured over the training split. A non-finite loss aborts with a
    hint rather than silently producing a NaN model.
    """

    X, Y = _validate_training_data(model, X, Y)
    rng = np.random.default_rng(config.seed)
    n = X.shape[0]
    n_val = int(n * config.validation_fraction)
    order = rng.permutation(n)
    if n_val and n_val < n:
        val_idx, train_idx = order[:n_val], order[n_val:]
    else:
        val_idx, train_idx = order[:0], order
    Xt, Yt = X[train_idx], Y[train_idx]
    Xv, Yv = X[val_idx], Y[val_idx]

    pos_weights: np.ndarray | None = None
    if config.class_weighting:
        pos = Yt.sum(axis=0)
        neg = Yt.shape[0] - pos
        ratio = np.where(pos > 0, neg / np.maximum(pos, 1.0), 1.0)
        pos_weights = ratio

    def element_weights(y: np.ndarray) -> np.ndarray | None:
        if pos_weights is None:
            return None
        return 1.0 + (pos_weights - 1.0) * y

    weights = [w.copy() for w in model.weights]
    biases = [b.copy() for b in model.biases]
    current = replace(model, weights=tuple(weights), biases=tuple(biases))

    def full_loss() -> float:
        _, pre = _forward_pass(current, Xt)
        return _bce_from_logits(pre[-1], Yt, element_weights(Yt))

    trace = [full_loss()]
    if not np.isfinite(trace[0]):
        raise TrainingError("initial loss is non-finite; check the input features")
    m = Xt.shape[0]
    for epoch in range(1, config.epochs + 1):
        perm = rng.permutation(m)
        for start in range(0, m, config.batch_size):
            batch = perm[start : start + config.batch_size]
            xb, yb = Xt[batch], Yt[batch]
            gw, gb = _gradients(current, xb, yb, element_weights(yb))
            for i in range(len(weights)):
                weights[i] -= config.learning_rate * gw[i]
                biases[i] -= config.learning_rate * gb[i]
        loss = full_loss()
        if not np.isfinite(loss):
            raise TrainingError(
                f"loss became non-finite at epoch {epoch}; "
                f"the learning rate {config.learning_rate} is likely too high"
            )
        trace.append(loss)
        if len(Xv) and (epoch % 50 == 0 or epoch == config.epochs):
            _, pre_v = _forward_pass(current, Xv)
            log.debug(
                "epoch %d train loss %.6f val loss %.6f",
                epoch,
                loss,
                _bce_from_logits(pre_v[-1], Yv, element_weights(Yv)),
            )
    return current, trace


def gradient_check(
    model: MlpModel,
    x: Sequence[float] | np.ndarray,
    y: Sequence[float] | np.ndarray,
    eps: float = 1e-5,
) -> float:
    """Max relative error between backprop and central finite differences.

    The denominator is guarded, so parameters with zero gradient on both
    sides (dead ReLU paths) compare as exactly equal instead of dividing
    by zero.
    """

    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    if x.shape[1] != model.in_dim or y.shape[1] != model.out_dim or x.shape[0] != y.shape[0]:
        raise ValueError(
            f"shapes {x.shape}/{y.shape} do not match model dims {model.dims}"
        )
    analytic_w, analytic_b = _gradients(model, x, y)

    def loss_with(params_w: list[np.ndarray], params_b: list[np.ndarray]) -> float:
        probe = replace(model, weights=tuple(params_w), biases=tuple(params_b))
        _, pre = _forward_pass(probe, x)
        return _bce_from_logits(pre[-1], y, None)

    worst = 0.0
    for layer in range(len(model.weights)):
        for kind, analytic in (("w", analytic_w[layer]), ("b", analytic_b[layer])):
            source = model.weights[layer] if kind == "w" else model.biases[layer]
            it = np.nditer(source, flags=["multi_index"])
            while not it.finished:
                idx = it.multi_index
                ws = [w.copy() for w in model.weights]
                bs = [b.copy() for b in model.biases]
                target = ws[layer] if kind == "w" else bs[layer]
                original = target[idx]
                target[idx] = original + eps
                plus = loss_with(ws, bs)
                target[idx] = original - eps
                minus = loss_with(ws, bs)
                numeric = (plus - minus) / (2.0 * eps)
                a = float(analytic[idx])
                rel = abs(a - numeric) / max(abs(a) + abs(numeric), 1e-12)
                worst = max(worst, rel)
                it.iternext()
    return worst


def save_model(model: MlpModel, path: str | Path) -> None:
    payload = {
        "format": "simpguard-mlp",
        "schema_version": MODEL_SCHEMA_VERSION,
        "dims": list(model.dims),
        "hidden_activation": model.hidden_activation,
        "output_activation": model.output_activation,
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> MlpModel:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise DataError(f"{path}: cannot read model file: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != "simpguard-mlp":
        raise DataError(f"{path}: not a model file")
    if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise DataError(
            f"{path}: model schema {payload.get('schema_version')} unsupported "
            f"(expected {MODEL_SCHEMA_VERSION})"
        )
    try:
        return MlpModel(
            dims=tuple(payload["dims"]),
            weights=tuple(np.asarray(w, dtype=float) for w in payload["weights"]),
            biases=tuple(np.asarray(b, dtype=float) for b in payload["biases"]),
            hidden_activation=payload["hidden_activation"],
            output_activation=payload["output_activation"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: malformed model payload: {exc}") from exc


def model_digest(model: MlpModel) -> str:
    """Stable content hash used for run-file provenance."""

    import hashlib

    payload = json.dumps(
        {
            "dims": list(model.dims),
            "weights": [w.tolist() for w in model.weights],
            "biases": [b.tolist() for b in model.biases],
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class MlpClassifier:
    """Estimator-style wrapper: fit/predict/predict_proba over numpy arrays.

    Hyperparameters mirror :class:`TrainConfig`; ``hidden_dims=None`` picks
    a default by output arity at fit time.
    """

    def __init__(
        self,
        hidden_dims: tuple[int, ...] | None = None,
        learning_rate: float = 0.05,
        epochs: int = 300,
        batch_size: int = 32,
        seed: int = 42,
        threshold: float = 0.5,
        validation_fraction: float = 0.1,
        class_weighting: bool = False,
    ) -> None:
        self.hidden_dims = hidden_dims
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.seed = seed
        self.threshold = threshold
        self.validation_fraction = validation_fraction
        self.class_weighting = class_weighting
        self.model_: MlpModel | None = None
        self.loss_trace_: list[float] | None = None

    _PARAM_NAMES = (
        "hidden_dims",
        "learning_rate",
        "epochs",
        "batch_size",
        "seed",
        "threshold",
        "validation_fraction",
        "class_weighting",
    )

    def get_params(self) -> dict:
        return {name: getattr(self, name) for name in self._PARAM_NAMES}

    def set_params(self, **params) -> "MlpClassifier":
        for name, value in params.items():
            if name not in self._PARAM_NAMES:
                raise ValueError(f"unknown parameter {name!r}")
            setattr(self, name, value)
        return self

    def _config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            epochs=self.epochs,
            batch_size=self.batch_size,
            seed=self.seed,
            hidden_dims=self.hidden_dims,
            threshold=self.threshold,
            validation_fraction=self.validation_fraction,
            class_weighting=self.class_weighting,
        )

    def fit(self, X: np.ndarray, y: np.ndarray) -> "MlpClassifier":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise TrainingError(f"X must be a non-empty 2-D array, got shape {X.shape}")
        out_dim = 1 if y.ndim == 1 else y.shape[1]
        hidden = self.hidden_dims
        if hidden is None:
            hidden = DEFAULT_SPURIOUS_HIDDEN if out_dim == 1 else DEFAULT_DISTORTION_HIDDEN
        dims = (X.shape[1], *hidden, out_dim)
        model = init_mlp(dims, self.seed)
        self.model_, self.loss_trace_ = train(model, X, y, self._config())
        return self

    def _fitted(self) -> MlpModel:
        if self.model_ is None:
            raise TrainingError("classifier is not fitted; call fit first")
        return self.model_

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Scores per row; binary models yield shape (n,), multilabel (n, 15)."""

        model = self._fitted()
        scores = forward(model, np.asarray(X, dtype=float))
        if scores.ndim == 2 and model.out_dim == 1:
            return scores[:, 0]
        return scores

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) >= self.threshold).astype(int)
