"""Regression core: standardization, OLS, fit/predict dispatch, R²,
feature importance, grid search, and model (de)serialization.

Three regressor kinds are supported: ``mlr`` (ordinary least squares via a
minimum-norm orthogonal decomposition), ``mlp`` (see :mod:`wordsim.mlp`),
and ``ert`` (see :mod:`wordsim.ert`).
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NumericError, WordsimError
from .ert import ErtModel, ErtParams, Tree, fit_ert
from .mlp import MlpModel, MlpParams, fit_mlp

REGRESSOR_KINDS = ("mlr", "mlp", "ert")

MODEL_FILE_FORMAT = "wordsim-model"
MODEL_FILE_VERSION = 1


@dataclass
class DesignMatrix:
    """Feature rows, their names, the target vector, and row identifiers."""

    X: np.ndarray
    feature_names: list
    y: np.ndarray
    row_ids: list = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.X.ndim != 2 or len(self.X) != len(self.y):
            raise WordsimError("X must be 2-D with one target per row")
        if self.X.shape[1] != len(self.feature_names):
            raise WordsimError("feature_names must match X columns")
        if not self.row_ids:
            self.row_ids = list(range(len(self.y)))

    @property
    def n_rows(self):
        return len(self.y)


@dataclass
class StandardizationParams:
    """Population-convention column statistics (divide by n)."""

    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray
    y_mean: float
    y_std: float
    y_constant: bool


def standardize(dm):
    """Center and scale every column (and the target) to mean 0, std 1.

    Constant columns become all-zero and are flagged rather than divided
    by zero. Returns the new matrix plus the parameters used.
    """
    if dm.n_rows < 2:
        raise WordsimError("standardize needs at least 2 rows")
    mean = dm.X.mean(axis=0)
    std = dm.X.std(axis=0)
    constant = std == 0.0
    safe = np.where(constant, 1.0, std)
    X = (dm.X - mean) / safe
    X[:, constant] = 0.0

    y_mean = float(dm.y.mean())
    y_std = float(dm.y.std())
    y_constant = y_std == 0.0
    y = (dm.y - y_mean) / (y_std if not y_constant else 1.0)
    if y_constant:
        y = np.zeros_like(dm.y)

    params = StandardizationParams(
        mean=mean,
        std=std,
        constant=constant,
        y_mean=y_mean,
        y_std=y_std,
        y_constant=y_constant,
    )
    out = DesignMatrix(
        X=X, feature_names=list(dm.feature_names), y=y, row_ids=list(dm.row_ids)
    )
    return out, params


def apply_standardization(params, dm):
    """Apply previously fitted standardization to another matrix."""
    safe = np.where(params.constant, 1.0, params.std)
    X = (dm.X - params.mean) / safe
    X[:, params.constant] = 0.0
    y = dm.y - params.y_mean
    if not params.y_constant:
        y = y / params.y_std
    return DesignMatrix(
        X=X, feature_names=list(dm.feature_names), y=y, row_ids=list(dm.row_ids)
    )


class MlrModel:
    """Minimum-norm least squares with an explicit intercept column."""

    kind = "mlr"

    def __init__(self, coef, intercept, n_features, seed=0):
        self.coef = np.asarray(coef, dtype=float)
        self.intercept = float(intercept)
        self.n_features = n_features
        self.seed = seed

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise WordsimError(
                f"expected {self.n_features} feature columns, got {X.shape}"
            )
        return X @ self.coef + self.intercept


def fit_mlr(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise WordsimError("non-finite values in training data")
    augmented = np.hstack([X, np.ones((len(X), 1))])
    solution, *_ = np.linalg.lstsq(augmented, y, rcond=None)
    return MlrModel(
        coef=solution[:-1], intercept=solution[-1], n_features=X.shape[1]
    )


def fit(kind, X, y, params=None, seed=0):
    """Fit one regressor kind on (X, y); deterministic given the seed."""
    if kind == "mlr":
        return fit_mlr(X, y)
    if kind == "mlp":
        return fit_mlp(X, y, params=params, seed=seed)
    if kind == "ert":
        return fit_ert(X, y, params=params, seed=seed)
    raise WordsimError(f"unknown regressor kind {kind!r}")


def predict(model, X):
    return model.predict(X)


def r_squared(y, y_hat):
    """Coefficient of determination; may go negative on held-out data."""
    y = np.asarray(y, dtype=float)
    y_hat = np.asarray(y_hat, dtype=float)
    if y.shape != y_hat.shape or y.ndim != 1 or len(y) < 2:
        raise WordsimError("need two equal-length vectors with >= 2 entries")
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise NumericError("R^2 undefined: target has zero variance")
    ss_res = float(np.sum((y - y_hat) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass
class ImportanceReport:
    method: str
    values: dict

    def ranked(self):
        return sorted(self.values.items(), key=lambda kv: (-kv[1], kv[0]))

    def top(self, threshold=0.1):
        return [(name, v) for name, v in self.ranked() if v > threshold]


def importance(
    model, X, y, method="impurity", seed=0, feature_names=None, n_shuffles=10
):
    """Feature importances.

    ``impurity`` (ERT only) distributes the forest's summed variance
    reduction over features, normalized to 1. ``permutation`` measures the
    mean R² drop over ``n_shuffles`` reshuffles of one column at a time and
    works for any model; values can be negative.
    """
    X = np.asarray(X, dtype=float)
    if feature_names is None:
        feature_names = [f"x{i}" for i in range(X.shape[1])]
    if method == "impurity":
        if model.kind != "ert":
            raise WordsimError("impurity importance requires an ERT model")
        values = model.impurity_importance()
        return ImportanceReport(
            method="impurity",
            values={n: float(v) for n, v in zip(feature_names, values)},
        )
    if method != "permutation":
        raise WordsimError(f"unknown importance method {method!r}")

    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(seed)
    base = r_squared(y, model.predict(X))
    values = {}
    for j, name in enumerate(feature_names):
        drop = 0.0
        for _ in range(n_shuffles):
            shuffled = X.copy()
            shuffled[:, j] = shuffled[rng.permutation(len(X)), j]
            drop += base - r_squared(y, model.predict(shuffled))
        values[name] = drop / n_shuffles
    return ImportanceReport(method="permutation", values=values)


@dataclass
class GridSearchResult:
    best_params: dict
    best_score: float
    evaluations: list  # (params, score) in enumeration order


def grid_search(kind, X, y, grid, objective="train_r2", seed=0, cv_folds=5):
    """Exhaustive search over the Cartesian product of ``grid`` values.

    The default objective fits on the entire dataset and scores training
    R², which is optimistic; a ``cv`` objective (k-fold mean test R²) is
    available. Ties keep the first candidate in enumeration order.
    """
    if not grid:
        raise WordsimError("empty grid")
    names = list(grid)
    if objective == "train_r2":
        warnings.warn(
            "grid_search objective 'train_r2' scores candidates on the "
            "full training data; prefer objective='cv' for honest tuning",
            stacklevel=2,
        )
    elif objective != "cv":
        raise WordsimError(f"unknown objective {objective!r}")

    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    evaluations = []
    best_params, best_score = None, -np.inf
    for combo in itertools.product(*(grid[n] for n in names)):
        params = dict(zip(names, combo))
        if objective == "train_r2":
            model = _fit_with_params(kind, X, y, params, seed)
            score = r_squared(y, model.predict(X))
        else:
            score = _cv_score(kind, X, y, params, seed, cv_folds)
        evaluations.append((params, score))
        if score > best_score:
            best_params, best_score = params, score
    return GridSearchResult(
        best_params=best_params, best_score=best_score, evaluations=evaluations
    )


def _fit_with_params(kind, X, y, params, seed):
    if kind == "mlr":
        return fit_mlr(X, y)
    if kind == "mlp":
        return fit_mlp(X, y, params=MlpParams(**params), seed=seed)
    if kind == "ert":
        return fit_ert(X, y, params=ErtParams(**params), seed=seed)
    raise WordsimError(f"unknown regressor kind {kind!r}")


def _cv_score(kind, X, y, params, seed, folds):
    n = len(y)
    if folds < 2 or n < folds:
        raise WordsimError("need at least 2 folds and n >= folds")
    perm = np.random.default_rng(seed).permutation(n)
    scores = []
    bounds = np.linspace(0, n, folds + 1).astype(int)
    for f in range(folds):
        test = perm[bounds[f] : bounds[f + 1]]
        train = np.concatenate([perm[: bounds[f]], perm[bounds[f + 1] :]])
        model = _fit_with_params(kind, X[train], y[train], params, seed)
        scores.append(r_squared(y[test], model.predict(X[test])))
    return float(np.mean(scores))


def _params_to_dict(params):
    out = {}
    for name, value in vars(params).items():
        out[name] = list(value) if isinstance(value, tuple) else value
    return out


def model_to_payload(model):
    if model.kind == "mlr":
        return {
            "coef": model.coef.tolist(),
            "intercept": model.intercept,
            "n_features": model.n_features,
        }
    if model.kind == "mlp":
        return {
            "layers": [[w.tolist(), b.tolist()] for w, b in model.layers],
            "n_features": model.n_features,
            "params": _params_to_dict(model.params),
            "n_epochs": model.n_epochs,
            "converged": model.converged,
        }
    if model.kind == "ert":
        return {
            "trees": [
                {
                    "feature": list(t.feature),
                    "threshold": list(t.threshold),
                    "left": list(t.left),
                    "right": list(t.right),
                    "value": list(t.value),
                }
                for t in model.trees
            ],
            "feature_decreases": model.feature_decreases.tolist(),
            "n_features": model.n_features,
            "y_min": model.y_min,
            "y_max": model.y_max,
            "params": _params_to_dict(model.params),
        }
    raise WordsimError(f"cannot serialize model kind {model.kind!r}")


def model_from_payload(kind, payload, seed=0):
    if kind == "mlr":
        return MlrModel(
            coef=payload["coef"],
            intercept=payload["intercept"],
            n_features=payload["n_features"],
            seed=seed,
        )
    if kind == "mlp":
        params = dict(payload["params"])
        params["hidden"] = tuple(params["hidden"])
        return MlpModel(
            layers=[
                (np.array(w, dtype=float), np.array(b, dtype=float))
                for w, b in payload["layers"]
            ],
            n_features=payload["n_features"],
            params=MlpParams(**params),
            seed=seed,
            n_epochs=payload["n_epochs"],
            converged=payload["converged"],
        )
    if kind == "ert":
        trees = [
            Tree(
                feature=list(t["feature"]),
                threshold=[float(v) for v in t["threshold"]],
                left=list(t["left"]),
                right=list(t["right"]),
                value=[float(v) for v in t["value"]],
            )
            for t in payload["trees"]
        ]
        return ErtModel(
            trees=trees,
            decreases=np.array(payload["feature_decreases"], dtype=float),
            n_features=payload["n_features"],
            y_min=payload["y_min"],
            y_max=payload["y_max"],
            params=ErtParams(**payload["params"]),
            seed=seed,
        )
    raise WordsimError(f"unknown model kind {kind!r}")


def save_model(model, path):
    """Write a model as self-describing JSON; floats round-trip exactly."""
    document = {
        "format": MODEL_FILE_FORMAT,
        "version": MODEL_FILE_VERSION,
        "kind": model.kind,
        "seed": getattr(model, "seed", 0),
        "payload": model_to_payload(model),
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=1)
        handle.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as handle:
        document = json.load(handle)
    if document.get("format") != MODEL_FILE_FORMAT:
        raise WordsimError(f"{path}: not a model file")
    if document.get("version") != MODEL_FILE_VERSION:
        raise WordsimError(
            f"{path}: unsupported model file version {document.get('version')}"
        )
    return model_from_payload(
        document["kind"], document["payload"], seed=document.get("seed", 0)
    )
