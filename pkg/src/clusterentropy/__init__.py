"""Moving-average cluster entropy for long-range dependent series."""

from ._errors import DataError, ParameterError
from .analysis import MdiTable, default_n_grid, horizon_curves, horizon_spread, mdi_table
from .entropy import (
    ClusterPdf,
    EntropyCurve,
    MdiResult,
    cluster_pdf,
    entropy_curve,
    fit_power_law,
    mdi,
    median_curve,
)
from .horizons import (
    TABLE1_LENGTHS,
    HorizonSet,
    HorizonSpec,
    build_horizon_spec,
    make_horizon_set,
    resample_horizon,
    scaled_spec,
)
from .io import TickSeries, ingest_ticks, read_series, write_series
from .partition import (
    AlignedPair,
    ClusterPartition,
    cluster_histogram,
    find_clusters,
    moving_average,
    partition,
)
from .presets import Preset, SweepConfig, generate_series, load_presets
from .series import (
    ArfimaParams,
    FbmParams,
    GbmParams,
    d_from_h,
    frac_diff_coeffs,
    gen_arfima,
    gen_fbm,
    gen_gbm,
    h_from_d,
    integrate,
    periodogram_slope,
)
from .stats import TestResult, align_curves, paired_t_test, ttest_table
from .sweep import SweepResult, run_sweep

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "ParameterError",
    "MdiTable",
    "default_n_grid",
    "horizon_curves",
    "horizon_spread",
    "mdi_table",
    "ClusterPdf",
    "EntropyCurve",
    "MdiResult",
    "cluster_pdf",
    "entropy_curve",
    "fit_power_law",
    "mdi",
    "median_curve",
    "TABLE1_LENGTHS",
    "HorizonSet",
    "HorizonSpec",
    "build_horizon_spec",
    "make_horizon_set",
    "resample_horizon",
    "scaled_spec",
    "TickSeries",
    "ingest_ticks",
    "read_series",
    "write_series",
    "AlignedPair",
    "ClusterPartition",
    "cluster_histogram",
    "find_clusters",
    "moving_average",
    "partition",
    "Preset",
    "SweepConfig",
    "generate_series",
    "load_presets",
    "ArfimaParams",
    "FbmParams",
    "GbmParams",
    "d_from_h",
    "frac_diff_coeffs",
    "gen_arfima",
    "gen_fbm",
    "gen_gbm",
    "h_from_d",
    "integrate",
    "periodogram_slope",
    "TestResult",
    "align_curves",
    "paired_t_test",
    "ttest_table",
    "SweepResult",
    "run_sweep",
]
