"""The five training conditions and batch-wise firing-rate monitoring.

Conditions:

* Random: a freshly initialized network, never trained.
* Generalize: trained on the true labels.
* MemRetrainLast: starts from the Generalize weights, retrains on shuffled
  labels with only the last two weight layers free.
* MemRandomLast: same freeze pattern and shuffled labels, but starts from
  a fresh initialization.
* MemRetrainAll: starts from the Generalize weights, retrains everything
  on shuffled labels.

The two retrain variants require the Generalize artifacts of the same
cell; `run_condition` refuses to fabricate them. "Last two weight layers"
means the map into the observed hidden layer and the output map, so a
single-hidden-layer network has nothing left to freeze.

`monitor_training` replays the generalize-then-memorize schedule of one
network and probes the observed layer's mean firing rate after every
batch, on fixed probe subsets of both splits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from ..spikecore import TraceMeta, binarize
from .data import shuffle_labels
from .network import (
    TrainConfig,
    accuracy,
    forward_capture,
    init_network,
    train,
)

__all__ = [
    "Condition",
    "RunArtifacts",
    "freeze_for",
    "run_condition",
    "monitor_training",
]

_SALT_LABELS = 4
_SALT_PROBE = 5
_SALT_FRESH_INIT = 1009
_SALT_TRAIN_GEN = 21
_SALT_TRAIN_MEM = 22


class Condition(enum.Enum):
    RANDOM = "Random"
    GENERALIZE = "Generalize"
    MEM_RETRAIN_LAST = "MemRetrainLast"
    MEM_RANDOM_LAST = "MemRandomLast"
    MEM_RETRAIN_ALL = "MemRetrainAll"

    @property
    def memorizes(self):
        return self in (
            Condition.MEM_RETRAIN_LAST,
            Condition.MEM_RANDOM_LAST,
            Condition.MEM_RETRAIN_ALL,
        )

    @property
    def needs_generalize(self):
        return self in (Condition.MEM_RETRAIN_LAST, Condition.MEM_RETRAIN_ALL)


@dataclass(frozen=True)
class RunArtifacts:
    """Everything one condition run leaves behind."""

    condition: Condition
    spec: object
    seed: int
    params: object
    accuracies: dict
    history: list
    trace_train: object
    trace_test: object


def _child_seed(seed, *salts):
    return int(np.random.SeedSequence([seed, *salts]).generate_state(1)[0])


def freeze_for(condition, spec):
    """Freeze mask for a condition: True pins a weight layer.

    The retrain/random "last" variants keep only the final two weight
    layers free; everything else trains fully.
    """
    n = spec.n_weight_layers
    if condition in (Condition.MEM_RETRAIN_LAST, Condition.MEM_RANDOM_LAST):
        return [i < n - 2 for i in range(n)]
    return [False] * n


def _capture(params, dataset, condition, spec):
    meta = TraceMeta(
        dataset=dataset.name,
        split=dataset.split,
        condition=condition.value,
        layer=f"hidden_{spec.n_hidden - 1}",
    )
    _, trace = forward_capture(params, dataset.inputs, meta=meta)
    return trace


def run_condition(
    condition,
    spec,
    cfg,
    train_data,
    test_data,
    seed,
    generalize_artifacts=None,
):
    """Execute one condition end to end.

    Parameters
    ----------
    condition : Condition
    spec : DenseNetSpec
    cfg : TrainConfig
        Epochs, learning rate, batch size; its `seed` field is overridden
        by a stream derived from `seed` so a cell is fully determined by
        (condition, spec, cfg, data, seed).
    train_data, test_data : Dataset
    seed : int
        Cell seed; drives initialization, label shuffling, and batch order.
    generalize_artifacts : RunArtifacts, optional
        Prior Generalize run of the same cell; required by the retrain
        conditions, which start from (or are compared against) its weights.

    Returns
    -------
    RunArtifacts
    """
    if condition.needs_generalize:
        if generalize_artifacts is None:
            raise ValueError(
                f"{condition.value} requires the Generalize artifacts of this cell"
            )
        if generalize_artifacts.condition is not Condition.GENERALIZE:
            raise ValueError("generalize_artifacts must come from Generalize")

    freeze = freeze_for(condition, spec)
    history = []

    if condition is Condition.RANDOM:
        params = init_network(spec, seed)
    elif condition is Condition.GENERALIZE:
        params = init_network(spec, seed)
        cfg_run = replace(cfg, seed=_child_seed(seed, _SALT_TRAIN_GEN))
        params, history = train(params, train_data, cfg_run, freeze_mask=freeze)
    else:
        shuffled = shuffle_labels(train_data, _child_seed(seed, _SALT_LABELS))
        if condition is Condition.MEM_RANDOM_LAST:
            params = init_network(spec, _child_seed(seed, _SALT_FRESH_INIT))
        else:
            params = generalize_artifacts.params.copy()
        cfg_run = replace(cfg, seed=_child_seed(seed, _SALT_TRAIN_MEM))
        params, history = train(params, shuffled, cfg_run, freeze_mask=freeze)
        train_data = shuffled  # accuracies refer to the labels actually fit

    accuracies = {
        "train": accuracy(params, train_data),
        "test": accuracy(params, test_data),
    }
    if history:
        accuracies["validation"] = history[-1]["validation_accuracy"]
    return RunArtifacts(
        condition=condition,
        spec=spec,
        seed=seed,
        params=params,
        accuracies=accuracies,
        history=history,
        trace_train=_capture(params, train_data, condition, spec),
        trace_test=_capture(params, test_data, condition, spec),
    )


def monitor_training(
    spec,
    cfg,
    train_data,
    test_data,
    seed,
    probe_size=100,
    mem_epochs=None,
    threshold=0.0,
):
    """Track the observed layer's mean firing rate batch by batch.

    Trains one network through a generalize phase (`cfg.epochs` on true
    labels) followed by a memorize phase (`mem_epochs`, default the same,
    on shuffled labels), probing fixed sample subsets of both splits after
    every parameter update. Batch 0 is the untrained network.

    Returns a list of rows
    ``{"batch", "phase", "split", "mfr"}`` with two rows (train and test
    probes) per probed point; the phase column flips exactly at the first
    memorize update.
    """
    if probe_size < 1:
        raise ValueError("probe_size must be >= 1")
    if mem_epochs is None:
        mem_epochs = cfg.epochs
    if mem_epochs < 0:
        raise ValueError("mem_epochs must be >= 0")

    rng = np.random.default_rng([seed, _SALT_PROBE])
    probes = {}
    for split_name, data in (("train", train_data), ("test", test_data)):
        take = rng.permutation(data.n_samples)[: min(probe_size, data.n_samples)]
        probes[split_name] = data.inputs[take]

    rows = []
    counter = {"batch": 0}

    def probe(params, phase):
        for split_name, inputs in probes.items():
            _, trace = forward_capture(params, inputs)
            mfr = float(binarize(trace, threshold).spikes.mean())
            rows.append(
                {
                    "batch": counter["batch"],
                    "phase": phase,
                    "split": split_name,
                    "mfr": mfr,
                }
            )

    def hook(phase):
        def after_batch(params, epoch, batch_index):
            counter["batch"] += 1
            probe(params, phase)

        return after_batch

    params = init_network(spec, seed)
    probe(params, "generalize")

    cfg_gen = replace(cfg, seed=_child_seed(seed, _SALT_TRAIN_GEN))
    params, _ = train(params, train_data, cfg_gen, after_batch=hook("generalize"))

    shuffled = shuffle_labels(train_data, _child_seed(seed, _SALT_LABELS))
    cfg_mem = replace(
        cfg, epochs=mem_epochs, seed=_child_seed(seed, _SALT_TRAIN_MEM)
    )
    params, _ = train(params, shuffled, cfg_mem, after_batch=hook("memorize"))
    return rows
