"""Network lab: datasets, a compact numpy MLP, and training conditions."""

from .conditions import (
    Condition,
    RunArtifacts,
    freeze_for,
    monitor_training,
    run_condition,
)
from .data import (
    N_CLASSES,
    Dataset,
    load_idx,
    make_synthetic,
    shuffle_labels,
    write_idx_images,
    write_idx_labels,
)
from .network import (
    DenseNetSpec,
    NetParams,
    TrainConfig,
    accuracy,
    forward_capture,
    gradient_check,
    init_network,
    layer_digest,
    load_params,
    loss_and_grads,
    save_params,
    train,
)

__all__ = [
    "Condition",
    "RunArtifacts",
    "freeze_for",
    "monitor_training",
    "run_condition",
    "N_CLASSES",
    "Dataset",
    "load_idx",
    "make_synthetic",
    "shuffle_labels",
    "write_idx_images",
    "write_idx_labels",
    "DenseNetSpec",
    "NetParams",
    "TrainConfig",
    "accuracy",
    "forward_capture",
    "gradient_check",
    "init_network",
    "layer_digest",
    "load_params",
    "loss_and_grads",
    "save_params",
    "train",
]
