"""Forecast error metrics, backtesting, and report/plot-data emission."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .features import FeatureMatrix, GrowthSeries, chronological_split
from .models import ForecasterSpec, fit_spec, forecast_arima, predict_with
from .models.arima import ArimaModel

__all__ = [
    "MetricError",
    "EvalRow",
    "EvalReport",
    "mse",
    "rmse",
    "theils_u",
    "backtest",
    "emit_report_csv",
    "emit_report_json",
    "emit_plot_csv",
]

REPORT_DECIMALS = 9


class MetricError(ValueError):
    """Bad metric inputs (length mismatch, empty, undefined denominator)."""


def _check_pair(actual, predicted):
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape or a.ndim != 1:
        raise MetricError(f"length mismatch: {a.shape} vs {p.shape}")
    if a.size == 0:
        raise MetricError("empty series")
    return a, p


def mse(actual, predicted) -> float:
    a, p = _check_pair(actual, predicted)
    return float(np.mean((a - p) ** 2))


def rmse(actual, predicted) -> float:
    return math.sqrt(mse(actual, predicted))


def theils_u(actual, predicted, variant: str = "U2", history: float | None = None) -> float:
    """Theil's U forecast-accuracy statistic.

    U1 = rmse / (sqrt(mean(actual^2)) + sqrt(mean(predicted^2))).
    U2 compares against the naive no-change forecast: with ``history`` h,
    sqrt(sum (p_t - a_t)^2) / sqrt(sum (a_t - a_{t-1})^2) over all t with
    a_0 = h; without history the first step is dropped from both sums.
    """
    a, p = _check_pair(actual, predicted)
    if variant == "U1":
        denom = math.sqrt(float(np.mean(a**2))) + math.sqrt(float(np.mean(p**2)))
        if denom == 0:
            raise MetricError("undefined U for constant/zero series")
        return rmse(a, p) / denom
    if variant == "U2":
        if history is not None:
            prev = np.concatenate([[history], a[:-1]])
            num = float(np.sum((p - a) ** 2))
            den = float(np.sum((a - prev) ** 2))
        else:
            if a.size < 2:
                raise MetricError("U2 needs a history value or at least 2 points")
            num = float(np.sum((p[1:] - a[1:]) ** 2))
            den = float(np.sum((a[1:] - a[:-1]) ** 2))
        if den == 0:
            if num == 0:
                return 0.0
            raise MetricError("undefined U for constant/zero series")
        return math.sqrt(num) / math.sqrt(den)
    raise MetricError(f"unknown Theil variant: {variant!r}")


@dataclass
class EvalRow:
    label: str
    mse: float
    rmse: float
    theils_u: float
    quarters: list = field(default_factory=list)
    actual: list = field(default_factory=list)
    predicted: list = field(default_factory=list)


@dataclass
class EvalReport:
    rows: list = field(default_factory=list)


def backtest(
    spec: ForecasterSpec,
    matrix: FeatureMatrix,
    split_ratio=(2, 1),
    growth: GrowthSeries | None = None,
    u_variant: str = "U2",
) -> EvalRow:
    """Fit on the chronological training prefix, score the held-out suffix.

    ARIMA specs train on the growth values aligned with the matrix rows (or
    on ``growth`` when given) and forecast the test quarters; feature models
    predict them from the test design matrix.
    """
    train, test = chronological_split(matrix, split_ratio)
    try:
        if spec.kind == "arima":
            if growth is not None:
                first_test = test.quarters[0]
                train_values = [v for q, v in zip(growth.quarters, growth.values) if q < first_test]
            else:
                train_values = train.y
            model = fit_spec(spec, np.asarray(train_values, dtype=float))
            predicted = forecast_arima(model, test.n_rows)
        else:
            model = fit_spec(spec, train)
            predicted = predict_with(model, test)
    except Exception as e:
        raise MetricError(f"model {spec.label!r} failed to fit: {e}") from e

    actual = test.y
    history = float(train.y[-1])
    return EvalRow(
        label=spec.label,
        mse=mse(actual, predicted),
        rmse=rmse(actual, predicted),
        theils_u=theils_u(actual, predicted, variant=u_variant, history=history),
        quarters=[str(q) for q in test.quarters],
        actual=[float(v) for v in actual],
        predicted=[float(v) for v in predicted],
    )


def _fmt(value: float) -> str:
    return f"{value:.{REPORT_DECIMALS}f}"


def emit_report_csv(report: EvalReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model", "mse", "rmse", "theils_u"])
    for row in report.rows:
        writer.writerow([row.label, _fmt(row.mse), _fmt(row.rmse), _fmt(row.theils_u)])
    return buf.getvalue().encode("utf-8")


def emit_report_json(report: EvalReport) -> bytes:
    obj = [
        {
            "model": row.label,
            "mse": round(row.mse, REPORT_DECIMALS),
            "rmse": round(row.rmse, REPORT_DECIMALS),
            "theils_u": round(row.theils_u, REPORT_DECIMALS),
            "quarters": row.quarters,
            "actual": [round(v, REPORT_DECIMALS) for v in row.actual],
            "predicted": [round(v, REPORT_DECIMALS) for v in row.predicted],
        }
        for row in report.rows
    ]
    return json.dumps(obj, indent=2).encode("utf-8")


def emit_plot_csv(report: EvalReport) -> bytes:
    """Actual-vs-predicted series: ``quarter,actual,<model labels...>``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    labels = [row.label for row in report.rows]
    writer.writerow(["quarter", "actual", *labels])
    if report.rows:
        quarters = report.rows[0].quarters
        for row in report.rows:
            if row.quarters != quarters:
                raise MetricError("plot data requires all rows to share test quarters")
        for i, q in enumerate(quarters):
            writer.writerow(
                [q, _fmt(report.rows[0].actual[i]), *(_fmt(r.predicted[i]) for r in report.rows)]
            )
    return buf.getvalue().encode("utf-8")
