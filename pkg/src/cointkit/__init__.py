"""Unit-root, cointegration and cumulative-curve tools for annual macro series."""
from .errors import DataError, DegenerateError, InsufficientDataError, NumericalError, RankDeficientError
from .series import AnnualSeries, DescriptiveStats, align, change_rate, cumsum, describe, first_diff, lag, trailing_ma
from .regression import OlsFit, TestVerdict, arch_lm, breusch_godfrey, breusch_pagan, durbin_watson, jarque_bera, ols, ramsey_reset
from .unitroot import UnitRootResult, UnitRootSpec, adf_test, dfgls_test, residual_unit_root_battery
from .critical_values import critical_value
from .var import VarModel, lag_order_select, var_estimate, var_jarque_bera, var_lm_autocorr, var_stability
from .johansen import JohansenResult, VecmModel, johansen_trace, vecm_estimate
from .engle_granger import EngleGrangerResult, RelationCoefficients, build_predictor, engle_granger, residual_series
from .integral import CumulativeFitResult, cumulative_error_decomposition, cumulative_fit, rmsd, sterr, table8_compare
from .data import Dataset, derive, france_path, load, load_france, save
from .simulate import SimSpec, calibration_suite, normal_equations_oracle, simulate

__version__ = "0.1.0"

__all__ = [
    "DataError",
    "DegenerateError",
    "InsufficientDataError",
    "NumericalError",
    "RankDeficientError",
    "AnnualSeries",
    "DescriptiveStats",
    "align",
    "change_rate",
    "cumsum",
    "describe",
    "first_diff",
    "lag",
    "trailing_ma",
    "OlsFit",
    "TestVerdict",
    "arch_lm",
    "breusch_godfrey",
    "breusch_pagan",
    "durbin_watson",
    "jarque_bera",
    "ols",
    "ramsey_reset",
    "UnitRootResult",
    "UnitRootSpec",
    "adf_test",
    "dfgls_test",
    "residual_unit_root_battery",
    "critical_value",
    "VarModel",
    "lag_order_select",
    "var_estimate",
    "var_jarque_bera",
    "var_lm_autocorr",
    "var_stability",
    "JohansenResult",
    "VecmModel",
    "johansen_trace",
    "vecm_estimate",
    "EngleGrangerResult",
    "RelationCoefficients",
    "build_predictor",
    "engle_granger",
    "residual_series",
    "CumulativeFitResult",
    "cumulative_error_decomposition",
    "cumulative_fit",
    "rmsd",
    "sterr",
    "table8_compare",
    "Dataset",
    "derive",
    "france_path",
    "load",
    "load_france",
    "save",
    "SimSpec",
    "calibration_suite",
    "normal_equations_oracle",
    "simulate",
]
