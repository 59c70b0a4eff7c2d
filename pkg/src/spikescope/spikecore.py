"""Activation traces, spike trains, and the trace CSV format.

An activation trace is a real matrix with one row per presented sample and
one column per node of an observed layer. Binarizing a trace (strictly
above a threshold) yields a spike matrix whose columns are per-node spike
trains indexed by discrete sample time. Downstream modules treat spikes as
arrivals of a point process, so this module also provides the counting-path
and interarrival views of a single train.

All container types copy their array argument and mark it read-only, so a
value can be shared between threads without locking.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .errors import TraceFormatError

__all__ = [
    "TraceMeta",
    "ActivationTrace",
    "SpikeMatrix",
    "SpikeTrain",
    "CountPath",
    "IsiSequence",
    "binarize",
    "cumulative_counts",
    "isi",
    "permute_samples",
    "read_trace",
    "write_trace",
    "read_spike_matrix",
    "write_spike_matrix",
]

_HEADER_PREFIX = "# spikescope-trace v1; "
_META_FIELDS = ("dataset", "split", "condition", "layer")


def _frozen_array(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TraceMeta:
    """Provenance tags carried alongside a trace through I/O and analysis."""

    dataset: str = "unknown"
    split: str = "unknown"
    condition: str = "unknown"
    layer: str = "unknown"
    threshold: float = 0.0

    def __post_init__(self):
        for name in _META_FIELDS:
            value = getattr(self, name)
            if ";" in value or "\n" in value or "=" in value:
                raise ValueError(
                    f"meta field {name!r} must not contain ';', '=', or newlines"
                )
        object.__setattr__(self, "threshold", float(self.threshold))


@dataclass(frozen=True)
class ActivationTrace:
    """Real-valued layer activations, shape (n_samples, n_nodes).

    Every entry must be finite; construction reports the first offending
    (sample, node) position otherwise.
    """

    values: np.ndarray
    meta: TraceMeta = field(default_factory=TraceMeta)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError(f"trace must be 2-D, got {values.ndim}-D")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"trace must be non-empty, got shape {values.shape}")
        bad = ~np.isfinite(values)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise ValueError(f"non-finite activation at sample {i}, node {j}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n_samples(self):
        return self.values.shape[0]

    @property
    def n_nodes(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class SpikeMatrix:
    """Binary spike indicators, shape (n_samples, n_nodes), entries 0/1."""

    spikes: np.ndarray
    meta: TraceMeta = field(default_factory=TraceMeta)

    def __post_init__(self):
        spikes = np.array(self.spikes)
        if spikes.ndim != 2:
            raise ValueError(f"spike matrix must be 2-D, got {spikes.ndim}-D")
        if spikes.shape[0] < 1 or spikes.shape[1] < 1:
            raise ValueError(f"spike matrix must be non-empty, got shape {spikes.shape}")
        if not np.isin(spikes, (0, 1)).all():
            raise ValueError("spike matrix entries must be 0 or 1")
        spikes = spikes.astype(np.uint8)
        spikes.flags.writeable = False
        object.__setattr__(self, "spikes", spikes)

    @property
    def n_samples(self):
        return self.spikes.shape[0]

    @property
    def n_nodes(self):
        return self.spikes.shape[1]

    def train(self, node):
        """Return the spike train of one node (a column view as a new train)."""
        if not 0 <= node < self.n_nodes:
            raise IndexError(f"node {node} out of range for {self.n_nodes} nodes")
        return SpikeTrain(self.spikes[:, node], node_id=int(node))

    def firing_rates(self):
        """Per-node empirical firing rate, spikes per sample."""
        return self.spikes.mean(axis=0)


@dataclass(frozen=True)
class SpikeTrain:
    """One node's binary spike indicators over discrete sample time."""

    bits: np.ndarray
    node_id: int = 0

    def __post_init__(self):
        bits = np.array(self.bits)
        if bits.ndim != 1:
            raise ValueError(f"spike train must be 1-D, got {bits.ndim}-D")
        if bits.size < 1:
            raise ValueError("spike train must be non-empty")
        if not np.isin(bits, (0, 1)).all():
            raise ValueError("spike train entries must be 0 or 1")
        bits = bits.astype(np.uint8)
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)

    @property
    def n(self):
        return self.bits.size

    @property
    def spike_count(self):
        return int(self.bits.sum())

    def spike_positions(self):
        """1-based sample positions of the spikes, in increasing order."""
        return np.flatnonzero(self.bits) + 1


@dataclass(frozen=True)
class CountPath:
    """Cumulative arrival counts N(t) for t = 1..n.

    The process starts at zero before the first sample, so the stored path
    begins at N(1) which is 0 or 1, never decreases, and steps by at most
    one per sample.
    """

    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size < 1:
            raise ValueError("count path must be a non-empty 1-D sequence")
        if counts[0] not in (0, 1):
            raise ValueError(f"count path must start at 0 or 1, got {counts[0]}")
        steps = np.diff(counts)
        if steps.size and not np.isin(steps, (0, 1)).all():
            raise ValueError("count path must be non-decreasing with unit steps")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def n(self):
        return self.counts.size

    @property
    def total(self):
        return int(self.counts[-1])


@dataclass(frozen=True)
class IsiSequence:
    """Interarrival intervals of a spike train, in whole samples.

    `spike_count` records how many spikes the source train had; fewer than
    two spikes leave the interval list empty and set `insufficient`.
    """

    intervals: np.ndarray
    spike_count: int

    def __post_init__(self):
        intervals = np.array(self.intervals, dtype=np.int64)
        if intervals.ndim != 1:
            raise ValueError("intervals must be 1-D")
        if intervals.size and intervals.min() < 1:
            raise ValueError("interarrival intervals must be >= 1 sample")
        if intervals.size != max(0, self.spike_count - 1):
            raise ValueError("interval count must be spike_count - 1")
        intervals.flags.writeable = False
        object.__setattr__(self, "intervals", intervals)

    @property
    def insufficient(self):
        return self.spike_count < 2


def binarize(trace, threshold=0.0):
    """Threshold a trace into a spike matrix.

    A node spikes on a sample when its activation is strictly greater than
    `threshold`; values equal to the threshold do not spike. The returned
    matrix carries the trace's meta with the threshold recorded.

    Parameters
    ----------
    trace : ActivationTrace
    threshold : float, default 0.0

    Returns
    -------
    SpikeMatrix
    """
    threshold = float(threshold)
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    spikes = (trace.values > threshold).astype(np.uint8)
    meta = dataclasses.replace(trace.meta, threshold=threshold)
    return SpikeMatrix(spikes, meta)


def cumulative_counts(train):
    """Counting-process view of a train: N(t) = spikes observed up to t."""
    return CountPath(np.cumsum(train.bits, dtype=np.int64))


def isi(train):
    """Interarrival intervals between consecutive spikes of a train.

    With spikes at 1-based positions p_1 < ... < p_k the intervals are
    p_{i+1} - p_i. Trains with fewer than two spikes yield an empty
    sequence flagged insufficient rather than an error, so callers can
    screen dead and near-dead nodes uniformly.
    """
    positions = train.spike_positions()
    return IsiSequence(np.diff(positions), spike_count=positions.size)


def permute_samples(trace, seed):
    """Shuffle the rows of a trace with a seeded generator.

    Destroys serial structure while preserving every per-node marginal;
    the permutation is drawn from ``numpy.random.default_rng(seed)``.
    """
    rng = np.random.default_rng(seed)
    perm = rng.permutation(trace.n_samples)
    return ActivationTrace(trace.values[perm], trace.meta)


def _format_header(meta):
    return (
        f"# spikescope-trace v1; dataset={meta.dataset}; split={meta.split}; "
        f"condition={meta.condition}; layer={meta.layer}; threshold={meta.threshold!r}"
    )


def _parse_header(line):
    if not line.startswith(_HEADER_PREFIX):
        raise TraceFormatError(
            f"expected header starting with {_HEADER_PREFIX!r}", line=1
        )
    fields = {}
    for part in line[len(_HEADER_PREFIX):].strip().split("; "):
        key, sep, value = part.partition("=")
        if not sep:
            raise TraceFormatError(f"malformed header field {part!r}", line=1)
        fields[key] = value
    missing = [k for k in (*_META_FIELDS, "threshold") if k not in fields]
    if missing:
        raise TraceFormatError(f"header missing fields {missing}", line=1)
    try:
        threshold = float(fields["threshold"])
    except ValueError:
        raise TraceFormatError(
            f"unreadable threshold {fields['threshold']!r}", line=1
        ) from None
    return TraceMeta(
        dataset=fields["dataset"],
        split=fields["split"],
        condition=fields["condition"],
        layer=fields["layer"],
        threshold=threshold,
    )


def _read_rows(path, converter):
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise TraceFormatError("empty file", line=1)
        meta = _parse_header(header.rstrip("\n"))
        rows = []
        width = None
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                raise TraceFormatError("blank data line", line=lineno)
            tokens = line.split(",")
            if width is None:
                width = len(tokens)
            elif len(tokens) != width:
                raise TraceFormatError(
                    f"expected {width} columns, got {len(tokens)}", line=lineno
                )
            try:
                rows.append([converter(tok) for tok in tokens])
            except ValueError as exc:
                raise TraceFormatError(str(exc), line=lineno) from None
        if not rows:
            raise TraceFormatError("no data rows", line=2)
    return meta, rows


def read_trace(path):
    """Read an activation trace written by `write_trace`.

    Raises `TraceFormatError` with the 1-based line number on any layout
    violation, including non-finite values smuggled in as tokens.
    """
    meta, rows = _read_rows(path, float)
    try:
        return ActivationTrace(np.array(rows, dtype=np.float64), meta)
    except ValueError as exc:
        raise TraceFormatError(str(exc)) from None


def write_trace(trace, path):
    """Write a trace as the v1 CSV: one header line, one row per sample.

    Values are written with `repr` so a read-back reproduces the matrix
    bit for bit.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_format_header(trace.meta) + "\n")
        for row in trace.values:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _bit(token):
    if token == "0":
        return 0
    if token == "1":
        return 1
    raise ValueError(f"spike entry must be 0 or 1, got {token!r}")


def read_spike_matrix(path):
    """Read a binarized spike matrix (same layout as a trace, entries 0/1)."""
    meta, rows = _read_rows(path, _bit)
    return SpikeMatrix(np.array(rows, dtype=np.uint8), meta)


def write_spike_matrix(matrix, path):
    """Write a spike matrix in the v1 CSV layout with 0/1 entries."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_format_header(matrix.meta) + "\n")
        for row in matrix.spikes:
            fh.write(",".join("1" if v else "0" for v in row) + "\n")
