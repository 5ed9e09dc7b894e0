"""Mode decomposition, scale-wise regression, and frequency-domain causality.

The heavy lifting lives in the compiled extension; this package re-exports
its operations under stable names.
"""

from emdec._core import (
    ConfigError,
    DataError,
    NumericError,
    causality_spectrum,
    decompose,
    gen_tone_mix,
    kendall,
    mean_period,
    ols,
    omega_to_cycle,
    pearson,
    run,
    select_lag,
    summarize,
    two_sls,
)

__all__ = [
    "ConfigError",
    "DataError",
    "NumericError",
    "causality_spectrum",
    "decompose",
    "gen_tone_mix",
    "kendall",
    "mean_period",
    "ols",
    "omega_to_cycle",
    "pearson",
    "run",
    "select_lag",
    "summarize",
    "two_sls",
]

__version__ = "0.1.0"
