"""Layer-level indicators and cross-condition comparisons.

Three numbers summarize a binarized layer: the mean firing rate (MFR)
across nodes, the mean Fano factor (MF) across nodes whose factor is
defined, and coefficients of variation for both. Networks that memorize
shuffled labels push MFR down and MF up relative to networks trained on
learnable structure, so the pair (MFR, MF) separates the two regimes; the
generalization-gap scatter rows pair those indicators with the accuracy
gap for plotting.

Cross-condition similarity is read through two-sample KS tests on the
per-node firing-rate populations, Bonferroni-corrected over however many
comparisons are made together. The canonical pairings carry card-suit
labels so reports stay compact: clubs = train vs test, diamonds =
memorize vs random, hearts = generalize vs random, spades = generalize
vs memorize. A pair is flagged similar when its p-value clears the
corrected threshold, i.e. when the test fails to tell the populations
apart.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, UndefinedStatistic
from .stattests import (
    bonferroni_threshold,
    fano_factor,
    ks_two_sample,
    window_counts,
)

__all__ = [
    "PAIR_SYMBOLS",
    "LayerIndicators",
    "ComparisonReport",
    "GapRecord",
    "layer_indicators",
    "compare_conditions",
    "gap_scatter",
    "write_gap_csv",
    "read_gap_csv",
    "mf_mfr_regression",
]

# canonical condition pairings and their report symbols
PAIR_SYMBOLS = {
    "clubs": ("train", "test"),
    "diamonds": ("memorize", "random"),
    "hearts": ("generalize", "random"),
    "spades": ("generalize", "memorize"),
}


@dataclass(frozen=True)
class LayerIndicators:
    """Per-layer firing and variability summary.

    ``fano_per_node`` is only meaningful where ``fano_excluded`` is False;
    excluded entries (dead nodes) are stored as NaN but never enter `mf`
    or `cv_f`. Fields that cannot be computed are None: `mf`/`cv_f` when
    every node is excluded, `cv_fr` when the layer is fully dead or has a
    single node.
    """

    fr_per_node: np.ndarray
    fano_per_node: np.ndarray
    fano_excluded: np.ndarray
    mfr: float
    mf: float | None
    cv_fr: float | None
    cv_f: float | None
    meta: dict

    @property
    def n_nodes(self):
        return self.fr_per_node.size

    @property
    def excluded_count(self):
        return int(self.fano_excluded.sum())

    def to_dict(self):
        """JSON-ready summary (per-node vectors included as lists)."""
        return {
            "mfr": self.mfr,
            "mf": self.mf,
            "cv_fr_percent": self.cv_fr,
            "cv_f_percent": self.cv_f,
            "excluded_node_count": self.excluded_count,
            "fr_per_node": [float(v) for v in self.fr_per_node],
            "fano_per_node": [
                None if e else float(v)
                for v, e in zip(self.fano_per_node, self.fano_excluded)
            ],
            "meta": dict(self.meta),
        }


def _cv_percent(values):
    # sample CV in percent; undefined for <2 values or zero mean
    if values.size < 2:
        return None
    mean = values.mean()
    if mean == 0.0:
        return None
    return float(100.0 * values.std(ddof=1) / mean)


def layer_indicators(matrix, window=100):
    """Compute MFR, MF, and their CVs for one spike matrix.

    Dead nodes keep their zero firing rate inside MFR but are excluded
    from MF, with the exclusion recorded per node. Requires at least two
    full Fano windows of samples.

    Parameters
    ----------
    matrix : SpikeMatrix
    window : int
        Fano window width in samples.

    Returns
    -------
    LayerIndicators
    """
    if matrix.n_samples < 2 * window:
        raise InsufficientData(
            f"need >= {2 * window} samples for window {window}, "
            f"got {matrix.n_samples}"
        )
    fr = matrix.firing_rates().astype(np.float64)
    fano = np.full(matrix.n_nodes, np.nan)
    excluded = np.zeros(matrix.n_nodes, dtype=bool)
    for j in range(matrix.n_nodes):
        try:
            fano[j] = fano_factor(window_counts(matrix.train(j), window))
        except UndefinedStatistic:
            excluded[j] = True

    valid = fano[~excluded]
    mf = float(valid.mean()) if valid.size else None
    cv_f = _cv_percent(valid) if valid.size else None
    meta = {
        "dataset": matrix.meta.dataset,
        "split": matrix.meta.split,
        "condition": matrix.meta.condition,
        "layer": matrix.meta.layer,
        "width": matrix.n_nodes,
        "window": int(window),
    }
    return LayerIndicators(
        fr_per_node=fr,
        fano_per_node=fano,
        fano_excluded=excluded,
        mfr=float(fr.mean()),
        mf=mf,
        cv_fr=_cv_percent(fr),
        cv_f=cv_f,
        meta=meta,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Bonferroni-corrected KS similarity verdicts for canonical pairs.

    ``pairs`` maps each computed symbol to the two role names, the KS
    statistic, its p-value, and the similarity flag (p above the corrected
    threshold). Roles missing from the input are listed in ``omitted``.
    """

    pairs: dict
    flagged: tuple
    omitted: tuple
    alpha: float
    comparisons: int
    threshold: float

    def to_dict(self):
        return {
            "legend": {
                symbol: f"{a} vs {b}" for symbol, (a, b) in PAIR_SYMBOLS.items()
            },
            "alpha": self.alpha,
            "comparisons": self.comparisons,
            "threshold": self.threshold,
            "pairs": {k: dict(v) for k, v in self.pairs.items()},
            "similar": list(self.flagged),
            "omitted": list(self.omitted),
        }


def compare_conditions(rate_vectors, alpha=0.05, comparisons=None):
    """KS-compare firing-rate populations across the canonical pairings.

    Parameters
    ----------
    rate_vectors : mapping
        Role name (train, test, random, generalize, memorize) to the
        per-node firing-rate vector of that condition.
    alpha : float
        Family-wise level before correction.
    comparisons : int, optional
        Denominator of the Bonferroni correction. Defaults to the number
        of pairs actually computed; pass the full family size when these
        verdicts are read alongside others.

    Returns
    -------
    ComparisonReport
    """
    available = {
        symbol: (a, b)
        for symbol, (a, b) in PAIR_SYMBOLS.items()
        if a in rate_vectors and b in rate_vectors
    }
    omitted = tuple(s for s in PAIR_SYMBOLS if s not in available)
    if not available:
        raise ValueError(
            "no canonical pair is covered by the given rate vectors"
        )
    m = len(available) if comparisons is None else int(comparisons)
    threshold = bonferroni_threshold(alpha, m)
    pairs = {}
    flagged = []
    for symbol, (a, b) in available.items():
        res = ks_two_sample(rate_vectors[a], rate_vectors[b])
        similar = bool(res.p_value > threshold)
        pairs[symbol] = {
            "a": a,
            "b": b,
            "statistic": res.statistic,
            "p_value": res.p_value,
            "similar": similar,
        }
        if similar:
            flagged.append(symbol)
    return ComparisonReport(
        pairs=pairs,
        flagged=tuple(flagged),
        omitted=omitted,
        alpha=float(alpha),
        comparisons=m,
        threshold=threshold,
    )


@dataclass(frozen=True)
class GapRecord:
    """One network's generalization gap paired with its layer indicators."""

    generalization_gap: float
    indicators: LayerIndicators

    def __post_init__(self):
        if not -1.0 <= self.generalization_gap <= 1.0:
            raise ValueError(
                f"gap must lie in [-1, 1], got {self.generalization_gap}"
            )

    @classmethod
    def from_accuracies(cls, train_accuracy, validation_accuracy, indicators):
        return cls(
            generalization_gap=float(train_accuracy) - float(validation_accuracy),
            indicators=indicators,
        )


_GAP_COLUMNS = (
    "gap",
    "mfr",
    "cv_fr_percent",
    "mf",
    "cv_f_percent",
    "condition",
    "dataset",
    "split",
    "width",
)


def gap_scatter(records):
    """Flatten gap records into plot-ready rows (one dict per record)."""
    records = list(records)
    if not records:
        raise ValueError("need at least one gap record")
    rows = []
    for rec in records:
        ind = rec.indicators
        rows.append(
            {
                "gap": rec.generalization_gap,
                "mfr": ind.mfr,
                "cv_fr_percent": ind.cv_fr,
                "mf": ind.mf,
                "cv_f_percent": ind.cv_f,
                "condition": ind.meta.get("condition", "unknown"),
                "dataset": ind.meta.get("dataset", "unknown"),
                "split": ind.meta.get("split", "unknown"),
                "width": ind.meta.get("width", ind.n_nodes),
            }
        )
    return rows


def write_gap_csv(rows, path):
    """Write gap-scatter rows as CSV; undefined entries become empty cells."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_GAP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(
                {k: ("" if row.get(k) is None else row.get(k)) for k in _GAP_COLUMNS}
            )


def read_gap_csv(path):
    """Read back rows written by `write_gap_csv` (numbers parsed, '' -> None)."""
    numeric = {"gap", "mfr", "cv_fr_percent", "mf", "cv_f_percent"}
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for key, value in row.items():
                if value == "":
                    parsed[key] = None
                elif key in numeric:
                    parsed[key] = float(value)
                elif key == "width":
                    parsed[key] = int(value)
                else:
                    parsed[key] = value
            rows.append(parsed)
    return rows


def mf_mfr_regression(points):
    """Least-squares line through (MFR, MF) points; returns slope, intercept, r2.

    Binary algebra ties the two indicators together: a near-Bernoulli node
    has Fano close to 1 - rate, so pooled points slope downward. Needs at
    least three points with spread in MFR.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array of (mfr, mf)")
    if pts.shape[0] < 3:
        raise ValueError(f"need at least 3 points, got {pts.shape[0]}")
    x, y = pts[:, 0], pts[:, 1]
    sxx = float(((x - x.mean()) ** 2).sum())
    if sxx == 0.0:
        raise ValueError("mfr values are all identical; slope undefined")
    slope = float(((x - x.mean()) * (y - y.mean())).sum() / sxx)
    intercept = float(y.mean() - slope * x.mean())
    sst = float(((y - y.mean()) ** 2).sum())
    if sst == 0.0:
        r2 = 1.0
    else:
        resid = y - (intercept + slope * x)
        r2 = float(1.0 - (resid @ resid) / sst)
    return slope, intercept, r2
