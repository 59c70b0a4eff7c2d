"""Datasets for the network lab: synthetic clusters and IDX files.

The synthetic generator draws ten class prototypes in [0, 1]^dim with a
sparse active-dimension pattern (most coordinates zero, the rest well away
from zero), then scatters Gaussian noise around them and clips back to the
unit box. Sparse prototypes keep the input mean small relative to its
spread, which concentrates the firing rates of freshly initialized layers
near one half; dense prototypes would fan the rates out.

Train and test splits share the prototype draw and differ only in the
noise stream, so they are disjoint samples of the same population.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from ..errors import IdxFormatError

__all__ = [
    "N_CLASSES",
    "Dataset",
    "make_synthetic",
    "shuffle_labels",
    "load_idx",
    "write_idx_images",
    "write_idx_labels",
]

N_CLASSES = 10

_IDX_MAGIC_IMAGES = 0x00000803
_IDX_MAGIC_LABELS = 0x00000801

# rng stream salts; every stream is default_rng([seed, salt, ...])
_SALT_CENTERS = 1
_SPLIT_SALTS = {"train": 161, "test": 178}


@dataclass(frozen=True)
class Dataset:
    """Inputs in [0, 1]^dim with one-hot labels over ten classes."""

    inputs: np.ndarray
    labels: np.ndarray
    name: str = "synthetic"
    split: str = "train"

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.float64)
        if inputs.ndim != 2 or inputs.shape[0] < 1:
            raise ValueError("inputs must be a non-empty (n, dim) matrix")
        if inputs.min() < 0.0 or inputs.max() > 1.0:
            raise ValueError("inputs must lie in [0, 1]")
        if labels.shape != (inputs.shape[0], N_CLASSES):
            raise ValueError(
                f"labels must have shape ({inputs.shape[0]}, {N_CLASSES})"
            )
        one_hot = np.isin(labels, (0.0, 1.0)).all() and (labels.sum(axis=1) == 1.0).all()
        if not one_hot:
            raise ValueError("labels must be one-hot rows")
        inputs.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self):
        return self.inputs.shape[0]

    @property
    def dim(self):
        return self.inputs.shape[1]

    def class_ids(self):
        return self.labels.argmax(axis=1)


def _split_salt(split):
    return _SPLIT_SALTS.get(split, zlib.crc32(split.encode("utf-8")))


def make_synthetic(n_per_class, dim, spread, seed, split="train", density=0.15):
    """Sample a balanced ten-class cluster dataset.

    Parameters
    ----------
    n_per_class : int
        Samples drawn per class.
    dim : int
        Input dimensionality, at least 2.
    spread : float
        Standard deviation of the Gaussian noise around each prototype.
    seed : int
        Seeds the prototype draw (shared across splits) and, combined with
        `split`, the noise stream.
    split : str
        "train" and "test" get distinct, fixed noise streams; other names
        hash to their own stream.
    density : float
        Fraction of dimensions active per prototype; active coordinates
        are drawn uniformly from [0.5, 1.0].

    Returns
    -------
    Dataset
    """
    if n_per_class < 1:
        raise ValueError("n_per_class must be >= 1")
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if spread < 0.0:
        raise ValueError("spread must be >= 0")
    if not (0.0 < density <= 1.0):
        raise ValueError("density must be in (0, 1]")

    rng_c = np.random.default_rng([seed, _SALT_CENTERS])
    mask = rng_c.random((N_CLASSES, dim)) < density
    centers = np.where(mask, rng_c.uniform(0.5, 1.0, (N_CLASSES, dim)), 0.0)

    rng = np.random.default_rng([seed, _split_salt(split)])
    blocks = []
    labels = []
    for c in range(N_CLASSES):
        pts = centers[c] + spread * rng.standard_normal((n_per_class, dim))
        blocks.append(np.clip(pts, 0.0, 1.0))
        labels.append(np.full(n_per_class, c))
    inputs = np.vstack(blocks)
    class_ids = np.concatenate(labels)
    perm = rng.permutation(inputs.shape[0])
    return Dataset(
        inputs=inputs[perm],
        labels=np.eye(N_CLASSES)[class_ids[perm]],
        name="synthetic",
        split=split,
    )


def shuffle_labels(dataset, seed):
    """Random label reassignment: permute the label rows, keep the inputs.

    The per-class counts are preserved exactly; with balanced classes the
    expected agreement with the original labeling is one tenth.
    """
    rng = np.random.default_rng(seed)
    perm = rng.permutation(dataset.n_samples)
    return Dataset(
        inputs=dataset.inputs,
        labels=dataset.labels[perm],
        name=dataset.name,
        split=dataset.split,
    )


def _read_exact(data, offset, count, path):
    if offset + count > len(data):
        raise IdxFormatError(
            f"{path}: truncated, needed {count} bytes", offset=len(data)
        )
    return data[offset : offset + count], offset + count


def load_idx(images_path, labels_path, name="idx", split="train"):
    """Load an IDX image/label file pair as a flattened [0, 1] dataset.

    Big-endian headers: magic 0x803 then (count, rows, cols) for images,
    magic 0x801 then (count) for labels. Pixels are scaled by 1/255 and
    flattened; labels must lie in 0..9 and are one-hot encoded.
    """
    with open(images_path, "rb") as fh:
        img_data = fh.read()
    with open(labels_path, "rb") as fh:
        lab_data = fh.read()

    head, offset = _read_exact(img_data, 0, 16, images_path)
    magic, n_img, rows, cols = struct.unpack(">IIII", head)
    if magic != _IDX_MAGIC_IMAGES:
        raise IdxFormatError(
            f"{images_path}: bad image magic {magic:#010x}", offset=0
        )
    pixels, offset = _read_exact(img_data, offset, n_img * rows * cols, images_path)
    if offset != len(img_data):
        raise IdxFormatError(
            f"{images_path}: {len(img_data) - offset} trailing bytes", offset=offset
        )

    head, offset = _read_exact(lab_data, 0, 8, labels_path)
    magic, n_lab = struct.unpack(">II", head)
    if magic != _IDX_MAGIC_LABELS:
        raise IdxFormatError(
            f"{labels_path}: bad label magic {magic:#010x}", offset=0
        )
    raw_labels, offset = _read_exact(lab_data, offset, n_lab, labels_path)
    if offset != len(lab_data):
        raise IdxFormatError(
            f"{labels_path}: {len(lab_data) - offset} trailing bytes", offset=offset
        )

    if n_img != n_lab:
        raise IdxFormatError(
            f"{n_img} images but {n_lab} labels", offset=4
        )
    if n_img < 1:
        raise IdxFormatError("empty IDX pair", offset=4)
    labels = np.frombuffer(raw_labels, dtype=np.uint8)
    if labels.max() >= N_CLASSES:
        bad = int(np.argmax(labels >= N_CLASSES))
        raise IdxFormatError(
            f"{labels_path}: label {labels[bad]} out of range at item {bad}",
            offset=8 + bad,
        )
    images = np.frombuffer(pixels, dtype=np.uint8).reshape(n_img, rows * cols)
    return Dataset(
        inputs=images.astype(np.float64) / 255.0,
        labels=np.eye(N_CLASSES)[labels],
        name=name,
        split=split,
    )


def write_idx_images(path, images):
    """Write a (n, rows, cols) uint8 array in IDX image format."""
    images = np.asarray(images, dtype=np.uint8)
    if images.ndim != 3:
        raise ValueError("images must be (n, rows, cols)")
    n, rows, cols = images.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack(">IIII", _IDX_MAGIC_IMAGES, n, rows, cols))
        fh.write(images.tobytes())


def write_idx_labels(path, labels):
    """Write a 1-D uint8 label array in IDX label format."""
    labels = np.asarray(labels, dtype=np.uint8)
    if labels.ndim != 1:
        raise ValueError("labels must be 1-D")
    with open(path, "wb") as fh:
        fh.write(struct.pack(">II", _IDX_MAGIC_LABELS, labels.size))
        fh.write(labels.tobytes())
