"""Four forecasters behind one contract, plus grid search and serialization."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..features import FeatureMatrix, GrowthSeries, chronological_split
from .arima import ArimaModel, fit_arima, forecast_arima
from .linear import FitError, LinearModel, fit_lr, predict_lr
from .mlp import MlpModel, MlpSpec, fit_mlp, mlp_residual_fn
from .serialize import model_from_json, model_to_json
from .svr import SvrModel, SvrSpec, fit_nusvr, rbf_kernel

__all__ = [
    "ForecasterSpec",
    "FitError",
    "LinearModel",
    "MlpModel",
    "MlpSpec",
    "SvrModel",
    "SvrSpec",
    "ArimaModel",
    "fit_lr",
    "predict_lr",
    "fit_mlp",
    "fit_nusvr",
    "fit_arima",
    "forecast_arima",
    "fit_spec",
    "predict_with",
    "grid_search",
    "model_to_json",
    "model_from_json",
    "load_reference_model",
]

KINDS = ("lr", "mlp", "svr", "arima")


@dataclass(frozen=True)
class ForecasterSpec:
    """One model configuration: kind, label, kind-specific params, seed."""

    kind: str
    label: str = ""
    params: tuple = ()  # sorted (name, value) pairs, hashable
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FitError(f"unknown model kind: {self.kind!r}")
        if not self.label:
            object.__setattr__(self, "label", self.kind)

    @classmethod
    def make(cls, kind, label="", seed=0, **params):
        return cls(kind=kind, label=label, seed=seed, params=tuple(sorted(params.items())))

    def param_dict(self) -> dict:
        return dict(self.params)


def fit_spec(spec: ForecasterSpec, data):
    """Fit one spec on a FeatureMatrix (lr/mlp/svr) or growth values (arima)."""
    p = spec.param_dict()
    if spec.kind == "lr":
        return fit_lr(data, selection=p.get("selection", "all"), threshold=p.get("threshold", 0.3))
    if spec.kind == "mlp":
        mspec = MlpSpec(
            hidden_size=p.get("hidden_size", 10),
            max_epochs=p.get("max_epochs", 100),
            lambda0=p.get("lambda0", 1e-3),
            validation_patience=p.get("validation_patience", 6),
            seed=spec.seed,
        )
        return fit_mlp(data, mspec)
    if spec.kind == "svr":
        sspec = SvrSpec(gamma=p.get("gamma", 5.0), nu=p.get("nu", 0.5), C=p.get("C", 1.0))
        return fit_nusvr(data, sspec)
    if spec.kind == "arima":
        return fit_arima(data, tuple(p.get("orders", (1, 0, 0))))
    raise FitError(f"unknown model kind: {spec.kind!r}")


def predict_with(model, test: FeatureMatrix) -> np.ndarray:
    """Predictions aligned with the rows of ``test`` for any fitted model."""
    if isinstance(model, ArimaModel):
        return forecast_arima(model, test.n_rows)
    if isinstance(model, LinearModel):
        return model.predict(test)
    return model.predict(test)


def grid_search(specs, data, score_fn, split_ratio=(2, 1)):
    """Fit each spec, score on the held-out chronological tail, rank ascending.

    A spec that fails to fit is recorded with its error message and ranked
    after every successful one; ties keep input order.
    """
    if not specs:
        raise FitError("grid_search needs at least one spec")
    results = []
    for order, spec in enumerate(specs):
        try:
            if spec.kind == "arima":
                values = data.as_array() if isinstance(data, GrowthSeries) else np.asarray(data, float)
                n = len(values)
                import math

                n_train = min(math.ceil(n * split_ratio[0] / sum(split_ratio)), n - 1)
                model = fit_spec(spec, values[:n_train])
                predicted = forecast_arima(model, n - n_train)
                actual = values[n_train:]
            else:
                train, test = chronological_split(data, split_ratio)
                model = fit_spec(spec, train)
                predicted = predict_with(model, test)
                actual = test.y
            results.append((spec, float(score_fn(actual, predicted)), None, order))
        except Exception as e:  # ranked last, with the failure preserved
            results.append((spec, float("inf"), str(e), order))
    results.sort(key=lambda r: (r[1], r[3]))
    return [(spec, score, error) for spec, score, error, _ in results]


def load_reference_model(name: str) -> LinearModel:
    """Shipped fitted linear reference models: ``lr13`` or ``lr16``."""
    data = resources.files("aspectcast").joinpath(f"data/reference_models/{name}.json").read_bytes()
    model = model_from_json(data)
    if not isinstance(model, LinearModel):
        raise FitError(f"reference model {name!r} is not linear")
    return model
