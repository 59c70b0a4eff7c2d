"""Statistical tests of the Poisson-arrival assumptions.

Each procedure checks one pillar of the model on observed spike data:

* `fano_factor` / `fano_gamma_test`: window counts of a Poisson stream have
  variance equal to their mean, so the variance-to-mean ratio should be 1.
* `ljung_box`: arrivals should be serially uncorrelated across samples;
  `combine_pvalues_pearson` pools the per-node p-values into one layer
  verdict.
* `adf_test`: the rate should be stationary over the trace.
* `ks_two_sample`: two firing-rate populations drawn from the same regime
  should be indistinguishable; `bonferroni_threshold` corrects the level
  when several such comparisons are read together.

Every test returns a `TestResult` with the statistic, a p-value, reject
decisions at fixed levels, and enough context to reproduce the call.
Statistics that do not exist for an input (a dead node, a constant series)
raise `UndefinedStatistic`; aggregations count those exclusions instead of
emitting NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as _sps

from .errors import InsufficientData, NumericalError, UndefinedStatistic

__all__ = [
    "TestResult",
    "WindowedCounts",
    "ADF_CRITICAL_CONSTANT",
    "window_counts",
    "window_count_sequence",
    "fano_factor",
    "fano_gamma_test",
    "ljung_box",
    "combine_pvalues_pearson",
    "adf_test",
    "ks_two_sample",
    "bonferroni_threshold",
    "assumption_battery",
]

# Asymptotic critical values for the unit-root t-ratio with a constant term
# (the 1%, 5%, 10% points of the Dickey-Fuller distribution).
ADF_CRITICAL_CONSTANT = {0.01: -3.43, 0.05: -2.86, 0.10: -2.57}

_DEFAULT_LEVELS = (0.01, 0.05)


@dataclass(frozen=True)
class TestResult:
    """Outcome of one hypothesis test.

    ``decision_at`` maps a significance level to True when the null is
    rejected at that level. ``context`` names the test and records the
    parameters that shaped it.
    """

    statistic: float
    p_value: float
    decision_at: dict
    context: dict

    def __post_init__(self):
        if not (0.0 <= self.p_value <= 1.0):
            raise ValueError(f"p-value must be in [0, 1], got {self.p_value}")


@dataclass(frozen=True)
class WindowedCounts:
    """Spike counts over consecutive fixed-width windows.

    Binary trains give counts bounded by the window width; count sequences
    built by superposition may exceed it.
    """

    window: int
    counts: np.ndarray

    def __post_init__(self):
        if self.window < 2:
            raise ValueError(f"window must be >= 2, got {self.window}")
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size < 2:
            raise ValueError("need at least 2 windows")
        if counts.min() < 0:
            raise ValueError("window counts must be non-negative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def n_windows(self):
        return self.counts.size


def _window_sums(values, window):
    if window < 2:
        raise ValueError(f"window must be >= 2, got {window}")
    n = values.size
    m = n // window
    if m < 2:
        raise InsufficientData(
            f"need at least 2 full windows of {window}, got {n} samples"
        )
    # trailing partial window is dropped
    sums = values[: m * window].reshape(m, window).sum(axis=1)
    return WindowedCounts(window=int(window), counts=sums.astype(np.int64))


def window_counts(train, window):
    """Per-window spike counts of a binary train; drops the partial tail."""
    return _window_sums(train.bits.astype(np.int64), window)


def window_count_sequence(counts, window):
    """Per-window arrival counts of a count sequence."""
    return _window_sums(counts.counts, window)


def fano_factor(windowed):
    """Variance-to-mean ratio of window counts (sample variance, ddof=1).

    Equals 1 in expectation for Poisson arrivals. Undefined when no window
    holds any arrival, which is the dead-node case.
    """
    counts = windowed.counts.astype(np.float64)
    mean = counts.mean()
    if mean == 0.0:
        raise UndefinedStatistic("no arrivals in any window")
    return float(counts.var(ddof=1) / mean)


def fano_gamma_test(fano, n_windows, levels=_DEFAULT_LEVELS):
    """Two-sided test of F = 1 using the null gamma law of the Fano factor.

    With M windows of a Poisson stream the Fano factor is approximately
    Gamma(shape=(M-1)/2, scale=2/(M-1)), mean 1. The p-value doubles the
    smaller tail, so a factor sitting exactly at the null median scores 1.
    """
    if n_windows < 2:
        raise ValueError(f"need at least 2 windows, got {n_windows}")
    fano = float(fano)
    if fano < 0.0:
        raise ValueError(f"fano factor must be >= 0, got {fano}")
    shape = (n_windows - 1) / 2.0
    scale = 2.0 / (n_windows - 1)
    cdf = float(_sps.gamma.cdf(fano, a=shape, scale=scale))
    p = min(1.0, 2.0 * min(cdf, 1.0 - cdf))
    return TestResult(
        statistic=fano,
        p_value=p,
        decision_at={lv: p < lv for lv in levels},
        context={"test": "fano-gamma", "windows": int(n_windows)},
    )


def ljung_box(series, lags=10, levels=_DEFAULT_LEVELS):
    """Portmanteau test for serial correlation up to `lags`.

    Q = n (n + 2) sum_k acf_k^2 / (n - k) with the biased autocorrelation
    estimator; under the white-noise null Q is chi-squared with `lags`
    degrees of freedom. A constant series has no autocorrelation to test
    and raises `UndefinedStatistic`.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("series must be 1-D")
    if lags < 1:
        raise ValueError(f"lags must be >= 1, got {lags}")
    n = x.size
    if n <= lags:
        raise InsufficientData(f"need more than {lags} observations, got {n}")
    xc = x - x.mean()
    denom = float(xc @ xc)
    if denom == 0.0:
        raise UndefinedStatistic("zero-variance series has no autocorrelation")
    q = 0.0
    for k in range(1, lags + 1):
        rho = float(xc[k:] @ xc[:-k]) / denom
        q += rho * rho / (n - k)
    q *= n * (n + 2.0)
    p = float(_sps.chi2.sf(q, df=lags))
    return TestResult(
        statistic=float(q),
        p_value=p,
        decision_at={lv: p < lv for lv in levels},
        context={"test": "ljung-box", "lags": int(lags), "n": int(n)},
    )


def combine_pvalues_pearson(pvalues, levels=_DEFAULT_LEVELS):
    """Pool p-values with Pearson's method.

    k = -2 sum log(1 - p_i), compared against the lower tail of
    chi-squared with 2m degrees of freedom: uniformly small inputs give a
    small k and a small combined p. Inputs equal to 1 are nudged to
    1 - 1e-15 so the log stays finite.
    """
    ps = np.asarray(pvalues, dtype=np.float64)
    if ps.ndim != 1 or ps.size < 1:
        raise ValueError("need a non-empty 1-D collection of p-values")
    if np.any(~np.isfinite(ps)) or ps.min() < 0.0 or ps.max() > 1.0:
        raise ValueError("p-values must lie in [0, 1]")
    clipped = np.minimum(ps, 1.0 - 1e-15)
    k = float(-2.0 * np.log1p(-clipped).sum())
    p = float(_sps.chi2.cdf(k, df=2 * ps.size))
    return TestResult(
        statistic=k,
        p_value=p,
        decision_at={lv: p < lv for lv in levels},
        context={"test": "pearson-combination", "m": int(ps.size)},
    )


def adf_test(series, lags=0):
    """Augmented Dickey-Fuller unit-root test with a constant term.

    Regresses the first difference on a constant, the lagged level, and
    `lags` lagged differences; the statistic is the t-ratio of the lagged
    level's coefficient. Rejection (statistic below a critical value)
    favors stationarity. The t-ratio's law is nonstandard, so the p-value
    is interval-coded against the asymptotic critical values in
    `ADF_CRITICAL_CONSTANT`: the reported number is the upper end of the
    bracket the statistic falls in, with the bracket spelled out in
    ``context["p_interval"]``.
    """
    y = np.asarray(series, dtype=np.float64)
    if y.ndim != 1:
        raise ValueError("series must be 1-D")
    if lags < 0:
        raise ValueError(f"lags must be >= 0, got {lags}")
    n = y.size
    if n < 20 + lags:
        raise InsufficientData(f"need at least {20 + lags} observations, got {n}")
    if np.ptp(y) == 0.0:
        raise UndefinedStatistic("constant series has no unit-root structure")

    dy = np.diff(y)
    rows = n - 1 - lags
    cols = [np.ones(rows), y[lags : n - 1]]
    for i in range(1, lags + 1):
        cols.append(dy[lags - i : n - 1 - i])
    x = np.column_stack(cols)
    resp = dy[lags:]

    beta, _, rank, _ = np.linalg.lstsq(x, resp, rcond=None)
    if rank < x.shape[1]:
        raise NumericalError("singular regression matrix")
    dof = rows - x.shape[1]
    if dof < 1:
        raise InsufficientData("no residual degrees of freedom")
    resid = resp - x @ beta
    s2 = float(resid @ resid) / dof
    xtx_inv = np.linalg.inv(x.T @ x)
    se = float(np.sqrt(s2 * xtx_inv[1, 1]))
    if se == 0.0 or not np.isfinite(se):
        raise NumericalError("degenerate standard error")
    stat = float(beta[1] / se)

    crit = ADF_CRITICAL_CONSTANT
    if stat < crit[0.01]:
        p, interval = 0.01, "p < 0.01"
    elif stat < crit[0.05]:
        p, interval = 0.05, "0.01 <= p < 0.05"
    elif stat < crit[0.10]:
        p, interval = 0.10, "0.05 <= p < 0.10"
    else:
        p, interval = 1.0, "p >= 0.10"
    return TestResult(
        statistic=stat,
        p_value=p,
        decision_at={lv: stat < cv for lv, cv in crit.items()},
        context={
            "test": "adf",
            "regression": "constant",
            "lags": int(lags),
            "n": int(n),
            "critical_values": dict(crit),
            "p_interval": interval,
        },
    )


def _kolmogorov_sf(lam):
    # Q_KS(lam) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 lam^2), truncated once
    # terms drop below 1e-12; exact limits Q(0+) = 1, Q(inf) = 0.
    if lam <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    for j in range(1, 100001):
        term = np.exp(-2.0 * j * j * lam * lam)
        total += sign * term
        if term < 1e-12:
            break
        sign = -sign
    return float(min(1.0, max(0.0, 2.0 * total)))


def ks_two_sample(a, b, levels=_DEFAULT_LEVELS):
    """Two-sample Kolmogorov-Smirnov test.

    The statistic is the largest gap between the two empirical CDFs; the
    p-value uses the asymptotic Kolmogorov law at sqrt(n_eff) * D with
    n_eff = n_a n_b / (n_a + n_b).
    """
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.ndim != 1 or b.ndim != 1 or a.size < 1 or b.size < 1:
        raise ValueError("both samples must be non-empty 1-D collections")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise ValueError("samples must be finite")
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    d = float(np.abs(cdf_a - cdf_b).max())
    n_eff = a.size * b.size / (a.size + b.size)
    p = _kolmogorov_sf(np.sqrt(n_eff) * d)
    return TestResult(
        statistic=d,
        p_value=p,
        decision_at={lv: p < lv for lv in levels},
        context={
            "test": "ks-two-sample",
            "n_a": int(a.size),
            "n_b": int(b.size),
            "effective_n": float(n_eff),
        },
    )


def bonferroni_threshold(alpha, m):
    """Per-comparison level alpha / m for m simultaneous comparisons."""
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if m < 1 or m != int(m):
        raise ValueError(f"m must be a positive integer, got {m}")
    return alpha / int(m)


def assumption_battery(matrix, window=100, lags=10, alpha=0.05):
    """Run the full per-node battery on a spike matrix.

    Per node: firing rate, Fano factor with its gamma-test p-value, and the
    Ljung-Box p-value on the raw indicator series. Per layer: the Pearson
    combination of the defined Ljung-Box p-values and a stationarity
    summary counting ADF rejections at each critical level. Nodes whose
    statistics are undefined (dead nodes, too-short traces) appear with
    nulls and are tallied, never silently dropped.

    Returns a JSON-ready dict of plain Python scalars, lists, and dicts.
    """
    node_rows = []
    lb_pvalues = []
    adf_rejections = {lv: 0 for lv in ADF_CRITICAL_CONSTANT}
    adf_tested = 0
    excluded = set()

    for j in range(matrix.n_nodes):
        train = matrix.train(j)
        row = {"node": j, "fr": float(train.bits.mean())}
        try:
            wc = window_counts(train, window)
            fano = fano_factor(wc)
            row["fano"] = fano
            row["fano_p"] = fano_gamma_test(fano, wc.n_windows).p_value
        except (UndefinedStatistic, InsufficientData):
            row["fano"] = None
            row["fano_p"] = None
            excluded.add(j)
        try:
            lb = ljung_box(train.bits.astype(np.float64), lags=lags)
            row["ljungbox_p"] = lb.p_value
            lb_pvalues.append(lb.p_value)
        except (UndefinedStatistic, InsufficientData):
            row["ljungbox_p"] = None
            excluded.add(j)
        try:
            adf = adf_test(train.bits.astype(np.float64), lags=0)
            adf_tested += 1
            for lv in adf_rejections:
                if adf.decision_at[lv]:
                    adf_rejections[lv] += 1
        except (UndefinedStatistic, InsufficientData):
            excluded.add(j)
        node_rows.append(row)

    combined = (
        combine_pvalues_pearson(lb_pvalues).p_value if lb_pvalues else None
    )
    return {
        "meta": {
            "dataset": matrix.meta.dataset,
            "split": matrix.meta.split,
            "condition": matrix.meta.condition,
            "layer": matrix.meta.layer,
            "threshold": matrix.meta.threshold,
        },
        "parameters": {
            "window": int(window),
            "lags": int(lags),
            "alpha": float(alpha),
            "n_samples": matrix.n_samples,
            "n_nodes": matrix.n_nodes,
        },
        "nodes": node_rows,
        "layer": {
            "combined_ljungbox_p": combined,
            "adf_summary": {
                "lags": 0,
                "critical_values": {str(k): v for k, v in ADF_CRITICAL_CONSTANT.items()},
                "n_tested": adf_tested,
                "n_excluded": matrix.n_nodes - adf_tested,
                "rejections": {str(k): v for k, v in adf_rejections.items()},
            },
            "excluded_node_count": len(excluded),
        },
    }
