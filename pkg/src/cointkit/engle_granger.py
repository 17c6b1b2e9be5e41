"""Predictor construction and the two-step Engle-Granger procedure."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DataError, DegenerateError
from .regression import OlsFit, ols, specification_battery
from .series import AnnualSeries, align, change_rate, lag, trailing_ma
from .unitroot import LEVELS, UnitRootResult, UnitRootSpec, adf_test, dfgls_test

EG_CAVEAT = ("residual tests use ordinary Dickey-Fuller critical values; "
             "Engle-Granger residual critical values are stricter")


@dataclass(frozen=True)
class RelationCoefficients:
    """pi(t) = a0 * UE(t - t0) + a1 * rate(t - t1) + a2."""

    a0: float = 0.0
    a1: float = 0.0
    a2: float = 0.0
    t0: int = 4
    t1: int = 4

    def __post_init__(self):
        if self.t0 < 0 or self.t1 < 0:
            raise DataError("lags must be nonnegative")

    def shifted(self, a2: float) -> "RelationCoefficients":
        return RelationCoefficients(self.a0, self.a1, a2, self.t0, self.t1)

    def as_tuple(self) -> tuple:
        return (self.a0, self.a1, self.a2)


def predictor_from_rate(rate: AnnualSeries, ue: Optional[AnnualSeries],
                        coeffs: RelationCoefficients, name: str = "predicted") -> AnnualSeries:
    terms = [lag(rate, coeffs.t1)]
    if ue is not None and coeffs.a0 != 0.0:
        terms.append(lag(ue, coeffs.t0))
    start, mat = align(terms)
    vals = coeffs.a1 * mat[:, 0] + coeffs.a2
    if mat.shape[1] == 2:
        vals = vals + coeffs.a0 * mat[:, 1]
    return AnnualSeries(name, start, vals, "rate")


def build_predictor(lf: AnnualSeries, ue: Optional[AnnualSeries],
                    coeffs: RelationCoefficients, name: str = "predicted") -> AnnualSeries:
    """Predicted series from labor-force *levels* and (optionally) unemployment."""
    return predictor_from_rate(change_rate(lf), ue, coeffs, name)


def residual_series(y: AnnualSeries, predictor: AnnualSeries, k: int = 1) -> AnnualSeries:
    """``y`` minus the trailing MA(k) of ``predictor`` (k = 1: raw difference)."""
    smooth = trailing_ma(predictor, k)
    start, mat = align([y, smooth])
    return AnnualSeries(f"diff{k}", start, mat[:, 0] - mat[:, 1], y.units)


@dataclass(frozen=True)
class EngleGrangerResult:
    first_stage: OlsFit
    residual_tests: tuple
    cointegrated_at: Optional[int]
    diagnostics: dict
    degenerate: bool = False
    notes: tuple = field(default_factory=lambda: (EG_CAVEAT,))


def _cointegrated_at(tests: Sequence[UnitRootResult]) -> Optional[int]:
    """Strictest level at which at least half of the residual tests reject."""
    if not tests:
        return None
    for lvl in LEVELS:
        if sum(t.rejects_at(lvl) for t in tests) * 2 >= len(tests):
            return lvl
    return None


def engle_granger(y: AnnualSeries, predictors: Sequence[AnnualSeries],
                  adf_lags=range(0, 4), dfgls_lags=range(1, 5),
                  deterministic: str = "constant",
                  window: Optional[tuple] = None,
                  diagnostics: bool = True) -> EngleGrangerResult:
    """First-stage OLS (with intercept), unit-root battery on its residuals, diagnostics.

    A perfect first-stage fit is reported with ``degenerate=True`` and no
    residual tests rather than as evidence of cointegration.
    """
    for s in predictors:
        if np.ptp(s.values) == 0:
            raise DegenerateError(f"predictor {s.name!r} has zero variance")
    fit = ols(y, predictors, intercept=True, window=window)
    e = fit.residuals
    scale = max(float(np.std(fit.y)), 1e-300)
    if float(np.max(np.abs(e.values))) <= 1e-10 * scale:
        return EngleGrangerResult(fit, (), None, {}, True,
                                  ("perfect first-stage fit: residuals are zero",))
    tests = [adf_test(e, UnitRootSpec(deterministic, p)) for p in adf_lags]
    tests += [dfgls_test(e, UnitRootSpec(deterministic, p)) for p in dfgls_lags]
    diag = specification_battery(fit) if diagnostics else {}
    return EngleGrangerResult(fit, tuple(tests), _cointegrated_at(tests), diag)
