"""A small fully connected classifier, implemented directly on numpy.

ReLU hidden layers, softmax output, cross-entropy loss, plain SGD without
momentum. `loss_and_grads` returns the gradient of the summed batch loss
(duplicating a sample exactly doubles its contribution); the trainer
divides by the batch size so updates use the mean gradient.

Everything stochastic draws from named generator streams derived from the
config seed, so a full training run is reproducible bit for bit.
"""

from __future__ import annotations

import hashlib
import struct
import zlib
from dataclasses import dataclass

import numpy as np

from ..errors import ParamsFormatError, TrainingDiverged
from ..spikecore import ActivationTrace, TraceMeta
from .data import N_CLASSES

__all__ = [
    "DenseNetSpec",
    "TrainConfig",
    "NetParams",
    "init_network",
    "forward_capture",
    "loss_and_grads",
    "train",
    "accuracy",
    "gradient_check",
    "layer_digest",
    "save_params",
    "load_params",
]

_SALT_INIT = 2
_SALT_EPOCH = 3
_SALT_SPLIT = 7

_PARAMS_MAGIC = b"SSPM"
_PARAMS_VERSION = 1


@dataclass(frozen=True)
class DenseNetSpec:
    """Layer widths from input to output; output width is the class count."""

    layer_widths: tuple

    def __post_init__(self):
        widths = tuple(int(w) for w in self.layer_widths)
        if len(widths) < 3:
            raise ValueError("need input, at least one hidden, and output widths")
        if any(w < 1 for w in widths):
            raise ValueError(f"layer widths must be >= 1, got {widths}")
        if widths[-1] != N_CLASSES:
            raise ValueError(f"output width must be {N_CLASSES}, got {widths[-1]}")
        object.__setattr__(self, "layer_widths", widths)

    @property
    def n_weight_layers(self):
        return len(self.layer_widths) - 1

    @property
    def n_hidden(self):
        return len(self.layer_widths) - 2


@dataclass(frozen=True)
class TrainConfig:
    """SGD hyperparameters; defaults follow the reference recipe."""

    epochs: int
    learning_rate: float = 0.1
    batch_size: int = 256
    validation_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if self.learning_rate < 0.0:
            raise ValueError("learning_rate must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not (0.0 < self.validation_fraction < 1.0):
            raise ValueError("validation_fraction must be in (0, 1)")


class NetParams:
    """Mutable weight/bias stacks for one network."""

    def __init__(self, weights, biases):
        if len(weights) != len(biases):
            raise ValueError("weights and biases must pair up")
        for w, b in zip(weights, biases):
            if w.ndim != 2 or b.ndim != 1 or w.shape[1] != b.size:
                raise ValueError("layer shape mismatch")
        self.weights = [np.array(w, dtype=np.float64) for w in weights]
        self.biases = [np.array(b, dtype=np.float64) for b in biases]

    @property
    def n_weight_layers(self):
        return len(self.weights)

    @property
    def layer_widths(self):
        widths = [self.weights[0].shape[0]]
        widths.extend(w.shape[1] for w in self.weights)
        return tuple(widths)

    def copy(self):
        return NetParams(self.weights, self.biases)


def init_network(spec, seed):
    """Glorot-uniform weights, zero biases, drawn from stream [seed, init]."""
    rng = np.random.default_rng([seed, _SALT_INIT])
    weights, biases = [], []
    widths = spec.layer_widths
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return NetParams(weights, biases)


def _forward(params, x):
    hiddens = []
    h = x
    for w, b in zip(params.weights[:-1], params.biases[:-1]):
        h = np.maximum(h @ w + b, 0.0)
        hiddens.append(h)
    z = h @ params.weights[-1] + params.biases[-1]
    z = z - z.max(axis=1, keepdims=True)
    log_probs = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
    return np.exp(log_probs), log_probs, hiddens


def forward_capture(params, inputs, meta=None):
    """Forward pass returning class probabilities and the last hidden layer.

    The hidden activations come back as an `ActivationTrace` ready for
    binarization; pass `meta` to tag it.
    """
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != params.layer_widths[0]:
        raise ValueError(
            f"inputs must be (n, {params.layer_widths[0]}), got {x.shape}"
        )
    probs, _, hiddens = _forward(params, x)
    if meta is None:
        meta = TraceMeta(layer=f"hidden_{len(hiddens) - 1}")
    return probs, ActivationTrace(hiddens[-1], meta)


def loss_and_grads(params, inputs, targets):
    """Summed cross-entropy over the batch and its exact gradient.

    Returns (loss, weight_grads, bias_grads). The loss is a sum, not a
    mean: feeding the same sample twice doubles every gradient entry.
    ReLU uses the subgradient 0 at 0.
    """
    x = np.asarray(inputs, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    probs, log_probs, hiddens = _forward(params, x)
    loss = float(-(y * log_probs).sum())

    layer_inputs = [x] + hiddens
    weight_grads = [None] * params.n_weight_layers
    bias_grads = [None] * params.n_weight_layers
    delta = probs - y
    for i in range(params.n_weight_layers - 1, -1, -1):
        weight_grads[i] = layer_inputs[i].T @ delta
        bias_grads[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ params.weights[i].T) * (hiddens[i - 1] > 0.0)
    return loss, weight_grads, bias_grads


def _validation_split(n, cfg):
    # the held-out part is the tail of one fixed seeded shuffle
    n_val = max(1, int(round(n * cfg.validation_fraction)))
    if n_val >= n:
        raise ValueError(f"dataset of {n} samples is too small to split")
    order = np.random.default_rng([cfg.seed, _SALT_SPLIT]).permutation(n)
    return order[: n - n_val], order[n - n_val :]


def train(params, dataset, cfg, freeze_mask=None, after_batch=None):
    """Run epochs of mini-batch SGD; returns (new params, history).

    The input params are not touched; training mutates a copy. The final
    `validation_fraction` of a seeded shuffle of `dataset` is held out,
    and each epoch visits the remaining samples in a fresh seeded order
    (streams [seed, epoch-salt, epoch]). `freeze_mask[i]` pins weight
    layer i exactly: frozen arrays are never written.

    `after_batch(params, epoch, batch_index)` runs after every update;
    `history` holds one row per epoch with train/validation accuracy and
    the mean training loss. A non-finite batch loss aborts with
    `TrainingDiverged`.
    """
    if freeze_mask is None:
        freeze_mask = [False] * params.n_weight_layers
    freeze_mask = [bool(f) for f in freeze_mask]
    if len(freeze_mask) != params.n_weight_layers:
        raise ValueError(
            f"freeze mask needs {params.n_weight_layers} entries, "
            f"got {len(freeze_mask)}"
        )
    train_idx, val_idx = _validation_split(dataset.n_samples, cfg)
    x_train = dataset.inputs[train_idx]
    y_train = dataset.labels[train_idx]
    x_val = dataset.inputs[val_idx]
    y_val = dataset.labels[val_idx]

    params = params.copy()
    history = []
    n_train = x_train.shape[0]
    for epoch in range(cfg.epochs):
        order = np.random.default_rng([cfg.seed, _SALT_EPOCH, epoch]).permutation(
            n_train
        )
        # overflow during an epoch is not a warning condition: the
        # finiteness tests below turn it into a hard, located abort
        with np.errstate(over="ignore", invalid="ignore"):
            for batch_index, start in enumerate(
                range(0, n_train, cfg.batch_size)
            ):
                take = order[start : start + cfg.batch_size]
                loss, w_grads, b_grads = loss_and_grads(
                    params, x_train[take], y_train[take]
                )
                if not np.isfinite(loss):
                    raise TrainingDiverged(epoch=epoch, batch=batch_index)
                scale = cfg.learning_rate / take.size
                for i in range(params.n_weight_layers):
                    if freeze_mask[i]:
                        continue
                    params.weights[i] -= scale * w_grads[i]
                    params.biases[i] -= scale * b_grads[i]
                if after_batch is not None:
                    after_batch(params, epoch, batch_index)
            loss_sum, _, _ = loss_and_grads(params, x_train, y_train)
            if not np.isfinite(loss_sum):
                raise TrainingDiverged(epoch=epoch, batch=batch_index)
            history.append(
                {
                    "epoch": epoch,
                    "train_accuracy": _accuracy_arrays(params, x_train, y_train),
                    "validation_accuracy": _accuracy_arrays(params, x_val, y_val),
                    "mean_loss": loss_sum / n_train,
                }
            )
    return params, history


def _accuracy_arrays(params, x, y):
    probs, _, _ = _forward(params, x)
    return float((probs.argmax(axis=1) == y.argmax(axis=1)).mean())


def accuracy(params, dataset):
    """Fraction of samples whose argmax probability matches the label."""
    return _accuracy_arrays(params, dataset.inputs, dataset.labels)


def gradient_check(params, inputs, targets, epsilon=1e-5, n_checks=80, seed=0):
    """Central-difference audit of `loss_and_grads` on a small batch.

    Perturbs `n_checks` randomly chosen parameters by +-epsilon and
    compares the finite-difference slope of the summed loss against the
    analytic gradient. Returns the worst error relative to
    max(|analytic|, |numeric|, 1): the unit floor keeps coordinates whose
    true gradient sits at roundoff scale from reading as disagreement,
    while any structural backprop bug still surfaces at the size of the
    gradients themselves. Batches are capped at 8 samples so the summed
    loss stays small enough for sharp differences.
    """
    x = np.asarray(inputs, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if x.shape[0] > 8:
        raise ValueError(f"gradient check batch must be <= 8, got {x.shape[0]}")
    _, w_grads, b_grads = loss_and_grads(params, x, y)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_checks):
        layer = int(rng.integers(params.n_weight_layers))
        use_weight = bool(rng.integers(2))
        arr = params.weights[layer] if use_weight else params.biases[layer]
        grad = w_grads[layer] if use_weight else b_grads[layer]
        flat = int(rng.integers(arr.size))
        idx = np.unravel_index(flat, arr.shape)
        saved = arr[idx]
        arr[idx] = saved + epsilon
        plus, _, _ = loss_and_grads(params, x, y)
        arr[idx] = saved - epsilon
        minus, _, _ = loss_and_grads(params, x, y)
        arr[idx] = saved
        fd = (plus - minus) / (2.0 * epsilon)
        err = abs(grad[idx] - fd) / max(abs(grad[idx]), abs(fd), 1.0)
        worst = max(worst, err)
    return worst


def layer_digest(params, layer):
    """SHA-256 digest of one weight layer's bytes (weights then bias)."""
    h = hashlib.sha256()
    h.update(params.weights[layer].tobytes())
    h.update(params.biases[layer].tobytes())
    return h.hexdigest()


def save_params(params, path):
    """Write params in the versioned binary format (little-endian float64)."""
    widths = params.layer_widths
    body = bytearray()
    body += _PARAMS_MAGIC
    body += struct.pack("<II", _PARAMS_VERSION, len(widths))
    body += struct.pack(f"<{len(widths)}I", *widths)
    for w, b in zip(params.weights, params.biases):
        body += w.astype("<f8").tobytes()
        body += b.astype("<f8").tobytes()
    body += struct.pack("<I", zlib.crc32(bytes(body)))
    with open(path, "wb") as fh:
        fh.write(bytes(body))


def load_params(path):
    """Read a params file; rejects bad magic, version, size, or checksum."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 16:
        raise ParamsFormatError(f"{path}: file too short")
    if data[:4] != _PARAMS_MAGIC:
        raise ParamsFormatError(f"{path}: bad magic {data[:4]!r}")
    (stored_crc,) = struct.unpack("<I", data[-4:])
    if zlib.crc32(data[:-4]) != stored_crc:
        raise ParamsFormatError(f"{path}: checksum mismatch")
    version, n_widths = struct.unpack_from("<II", data, 4)
    if version != _PARAMS_VERSION:
        raise ParamsFormatError(f"{path}: unsupported version {version}")
    try:
        offset = 12
        widths = struct.unpack_from(f"<{n_widths}I", data, offset)
        offset += 4 * n_widths
        weights, biases = [], []
        for fan_in, fan_out in zip(widths[:-1], widths[1:]):
            n_w = fan_in * fan_out
            w = np.frombuffer(data, dtype="<f8", count=n_w, offset=offset)
            offset += 8 * n_w
            b = np.frombuffer(data, dtype="<f8", count=fan_out, offset=offset)
            offset += 8 * fan_out
            weights.append(w.reshape(fan_in, fan_out).copy())
            biases.append(b.copy())
    except (struct.error, ValueError) as exc:
        raise ParamsFormatError(f"{path}: {exc}") from None
    if offset != len(data) - 4:
        raise ParamsFormatError(f"{path}: size mismatch")
    return NetParams(weights, biases)
