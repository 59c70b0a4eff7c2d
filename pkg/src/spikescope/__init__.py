"""Poisson arrival-process statistics for thresholded network activations.

Binarize layer activations into spike trains, test the Poisson-process
assumptions (Fano factors, serial correlation, stationarity), summarize
layers with firing-rate and Fano indicators, and reproduce the training
conditions that separate generalizing networks from memorizing ones.
"""

from .errors import (
    ArrivalNotReached,
    IdxFormatError,
    InsufficientData,
    NumericalError,
    ParamsFormatError,
    SpikescopeError,
    TraceFormatError,
    TrainingDiverged,
    UndefinedStatistic,
)
from .indicators import (
    ComparisonReport,
    GapRecord,
    LayerIndicators,
    compare_conditions,
    gap_scatter,
    layer_indicators,
    mf_mfr_regression,
)
from .procsim import (
    CountSequence,
    PoissonModel,
    clip_to_binary,
    decompose,
    empirical_rate,
    fit_isi_geometric,
    fit_rate,
    kth_arrival_time,
    memoryless_check,
    poisson_pmf,
    simulate,
    simulate_counts,
    superpose,
)
from .spikecore import (
    ActivationTrace,
    CountPath,
    IsiSequence,
    SpikeMatrix,
    SpikeTrain,
    TraceMeta,
    binarize,
    cumulative_counts,
    isi,
    permute_samples,
    read_spike_matrix,
    read_trace,
    write_spike_matrix,
    write_trace,
)
from .stattests import (
    ADF_CRITICAL_CONSTANT,
    TestResult,
    WindowedCounts,
    adf_test,
    assumption_battery,
    bonferroni_threshold,
    combine_pvalues_pearson,
    fano_factor,
    fano_gamma_test,
    ks_two_sample,
    ljung_box,
    window_count_sequence,
    window_counts,
)

__version__ = "0.1.0"
