"""Dataset ingestion, design-matrix assembly, the cross-validated
experiment loop, and report emission.

The experiment protocol: standardize the assembled matrix once (before
splitting, which leaks test statistics into scaling but mirrors the
benchmarking convention; a split-aware mode is one flag away), then for
each iteration draw a disjoint train/test split of fixed sizes, fit each
regressor, and record train/test R². Everything is a pure function of the
input files, the config, and the master seed.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import platform
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import NumericError, ParseError, WordsimError
from .ert import ErtParams
from .mlp import MlpParams
from .qna import pair_features
from .regress import (
    DesignMatrix,
    apply_standardization,
    fit,
    grid_search,
    importance,
    r_squared,
    standardize,
)

POLICIES = ("drop-row", "mean-impute")
IMPORTANCE_THRESHOLD = 0.1


@dataclass(frozen=True)
class RatingPair:
    word1: str
    word2: str
    pos: str  # N or V
    rating: float


@dataclass
class RatingDataset:
    pairs: list
    source: str = ""

    def __len__(self):
        return len(self.pairs)


def load_simlex(path):
    """Load a tab-separated rating file with word1/word2/POS/SimLex999
    columns. Adjective rows are dropped; duplicates are an error."""
    with open(path, encoding="utf-8") as handle:
        reader = csv.DictReader(handle, delimiter="\t")
        header = reader.fieldnames or []
        required = ("word1", "word2", "POS", "SimLex999")
        missing = [col for col in required if col not in header]
        if missing:
            raise ParseError(
                f"missing column(s) {missing}; header is {header}", path=path
            )
        pairs = []
        seen = set()
        for lineno, row in enumerate(reader, start=2):
            pos = (row["POS"] or "").strip().upper()
            if pos == "A":
                continue
            if pos not in ("N", "V"):
                raise ParseError(
                    f"unknown POS {row['POS']!r}", path=path, line=lineno
                )
            try:
                rating = float(row["SimLex999"])
            except (TypeError, ValueError):
                raise ParseError(
                    f"unparseable rating {row['SimLex999']!r}",
                    path=path,
                    line=lineno,
                ) from None
            if not math.isfinite(rating):
                raise ParseError("non-finite rating", path=path, line=lineno)
            w1 = row["word1"].strip().lower()
            w2 = row["word2"].strip().lower()
            key = (w1, w2, pos)
            if key in seen:
                raise ParseError(
                    f"duplicate pair {w1!r}/{w2!r}/{pos}", path=path, line=lineno
                )
            seen.add(key)
            pairs.append(RatingPair(w1, w2, pos, rating))
    return RatingDataset(pairs=pairs, source=os.fspath(path))


@dataclass
class ExperimentConfig:
    train_size: int = 666
    test_size: int = 222
    iterations: int = 1000
    master_seed: int = 0
    missing_policy: str = "drop-row"
    standardize_before_split: bool = True

    def __post_init__(self):
        if self.train_size < 2 or self.test_size < 2:
            raise WordsimError("train and test sizes must each be >= 2")
        if self.iterations < 1:
            raise WordsimError("iterations must be >= 1")
        if self.master_seed < 0:
            raise WordsimError("master_seed must be non-negative")
        if self.missing_policy not in POLICIES:
            raise WordsimError(
                f"missing_policy must be one of {POLICIES}, "
                f"got {self.missing_policy!r}"
            )


@dataclass
class CoverageStats:
    rows_total: int
    rows_retained: int
    per_feature: dict
    dropped_features: list


def assemble_design_matrix(dataset, spec, providers, policy="drop-row"):
    """One row per pair, one column per feature source in the spec.

    Pair-level scores (metrics, cosines) enter unchanged; word features
    enter as absolute differences. Features with zero coverage are dropped
    from the matrix (and reported); remaining missing cells are handled by
    the policy: ``drop-row`` removes the row, ``mean-impute`` fills with
    the column mean of observed rows.
    """
    if policy not in POLICIES:
        raise WordsimError(f"unknown policy {policy!r}")
    pos_tag = {"N": "n", "V": "v"}
    names = list(spec.features)
    rows = np.full((len(dataset.pairs), len(names)), np.nan)
    ids = []
    for i, pair in enumerate(dataset.pairs):
        scorers = providers.pair_scorers(pos_tag[pair.pos])
        vec = pair_features(
            pair.word1,
            pair.word2,
            names,
            providers.extractor.features,
            pair_scores={k: v for k, v in scorers.items() if k in names},
        )
        rows[i] = [vec.values[name] for name in names]
        ids.append(f"{pair.word1}:{pair.word2}:{pair.pos}")

    observed = np.sum(~np.isnan(rows), axis=0)
    per_feature = {name: int(n) for name, n in zip(names, observed)}
    keep_cols = observed > 0
    dropped = [n for n, k in zip(names, keep_cols) if not k]
    names = [n for n, k in zip(names, keep_cols) if k]
    rows = rows[:, keep_cols]
    if not names:
        raise WordsimError(
            f"model {spec.id} ({spec.name}): no feature has any coverage"
        )

    y = np.array([p.rating for p in dataset.pairs], dtype=float)
    if policy == "drop-row":
        keep_rows = ~np.isnan(rows).any(axis=1)
        rows = rows[keep_rows]
        y = y[keep_rows]
        ids = [pid for pid, k in zip(ids, keep_rows) if k]
    else:
        means = np.nanmean(rows, axis=0)
        holes = np.isnan(rows)
        rows[holes] = np.take(means, np.nonzero(holes)[1])

    coverage = CoverageStats(
        rows_total=len(dataset.pairs),
        rows_retained=len(y),
        per_feature=per_feature,
        dropped_features=dropped,
    )
    dm = DesignMatrix(X=rows, feature_names=names, y=y, row_ids=ids)
    return dm, coverage


@dataclass
class RegressorResult:
    regressor: str
    r2_train_mean: float
    r2_train_sd: float
    r2_test_mean: float
    r2_test_sd: float
    params: dict = field(default_factory=dict)


@dataclass
class SpecResult:
    spec_id: int
    name: str
    features: list
    regressors: list
    status: str  # ok | skipped
    skip_reason: str = ""
    coverage: CoverageStats = None
    results: list = field(default_factory=list)
    best_regressor: str = None
    importance: dict = None  # {"method", "values", "top"}
    scatter: dict = None  # {"regressor", "predicted", "observed"}


@dataclass
class ExperimentReport:
    config: dict
    environment: dict
    specs: list


def _environment_stamp(config):
    return {
        "package": f"wordsim {__version__}",
        "python": platform.python_version(),
        "numpy": np.__version__,
        "master_seed": config.master_seed,
        "standardize_before_split": config.standardize_before_split,
    }


def _iteration_rng(master_seed, spec_id, iteration):
    return np.random.default_rng(
        np.random.SeedSequence([master_seed, spec_id, iteration])
    )


def _fit_seed(master_seed, spec_id, iteration, regressor_index):
    seq = np.random.SeedSequence(
        [master_seed, spec_id, iteration, regressor_index]
    )
    return int(seq.generate_state(1)[0])


def _regressor_params(spec, kind):
    kwargs = spec.params.get(kind, {})
    if kind == "mlp":
        kwargs = dict(kwargs)
        if "hidden" in kwargs:
            kwargs["hidden"] = tuple(kwargs["hidden"])
        return MlpParams(**kwargs)
    if kind == "ert":
        return ErtParams(**kwargs)
    return None


def _resolve_grid(spec, kind, X, y, master_seed):
    """Whole-dataset grid search when the spec carries a grid."""
    grid = spec.grid.get(kind)
    if not grid:
        return _regressor_params(spec, kind), {}
    result = grid_search(
        kind, X, y, grid, objective="train_r2", seed=master_seed
    )
    chosen = dict(spec.params.get(kind, {}))
    chosen.update(result.best_params)
    probe = ModelSpecParamsView(spec, kind, chosen)
    return _regressor_params(probe, kind), chosen


class ModelSpecParamsView:
    """Lightweight stand-in exposing merged params for one regressor."""

    def __init__(self, spec, kind, merged):
        self.params = {kind: merged}


def run_experiment(dataset, specs, config, providers):
    """Run every spec for ``config.iterations`` train/test resamples."""
    spec_results = []
    for spec in specs:
        if spec.skipped:
            spec_results.append(
                SpecResult(
                    spec_id=spec.id,
                    name=spec.name,
                    features=list(spec.features),
                    regressors=list(spec.regressors),
                    status="skipped",
                    skip_reason=spec.skip_reason,
                )
            )
            continue
        spec_results.append(_run_spec(dataset, spec, config, providers))
    return ExperimentReport(
        config=asdict(config),
        environment=_environment_stamp(config),
        specs=spec_results,
    )


def _run_spec(dataset, spec, config, providers):
    dm, coverage = assemble_design_matrix(
        dataset, spec, providers, policy=config.missing_policy
    )
    n = dm.n_rows
    need = config.train_size + config.test_size
    if n < need:
        raise WordsimError(
            f"model {spec.id} ({spec.name}): {n} rows retained but "
            f"train+test needs {need}"
        )

    if config.standardize_before_split:
        dm_std, _ = standardize(dm)
    else:
        dm_std = dm

    per_regressor = {}  # kind -> (params_obj, chosen_dict)
    for kind in spec.regressors:
        per_regressor[kind] = _resolve_grid(
            spec, kind, dm_std.X, dm_std.y, config.master_seed
        )

    X_full, y_full = dm_std.X, dm_std.y
    train_scores = {k: [] for k in spec.regressors}
    test_scores = {k: [] for k in spec.regressors}
    split_cache = None
    for it in range(config.iterations):
        rng = _iteration_rng(config.master_seed, spec.id, it)
        perm = rng.permutation(n)
        train_idx = perm[: config.train_size]
        test_idx = perm[config.train_size : need]
        if it == 0:
            split_cache = (train_idx.copy(), test_idx.copy())
        if config.standardize_before_split:
            X_tr, y_tr = X_full[train_idx], y_full[train_idx]
            X_te, y_te = X_full[test_idx], y_full[test_idx]
        else:
            sub = DesignMatrix(
                X=dm.X[train_idx],
                feature_names=list(dm.feature_names),
                y=dm.y[train_idx],
            )
            sub_std, sparams = standardize(sub)
            X_tr, y_tr = sub_std.X, sub_std.y
            held = DesignMatrix(
                X=dm.X[test_idx],
                feature_names=list(dm.feature_names),
                y=dm.y[test_idx],
            )
            held_std = apply_standardization(sparams, held)
            X_te, y_te = held_std.X, held_std.y
        for r_idx, kind in enumerate(spec.regressors):
            params, _chosen = per_regressor[kind]
            seed = _fit_seed(config.master_seed, spec.id, it, r_idx)
            model = fit(kind, X_tr, y_tr, params=params, seed=seed)
            train_scores[kind].append(r_squared(y_tr, model.predict(X_tr)))
            test_scores[kind].append(r_squared(y_te, model.predict(X_te)))

    results = []
    for kind in spec.regressors:
        tr = np.array(train_scores[kind])
        te = np.array(test_scores[kind])
        results.append(
            RegressorResult(
                regressor=kind,
                r2_train_mean=float(tr.mean()),
                r2_train_sd=float(tr.std()),
                r2_test_mean=float(te.mean()),
                r2_test_sd=float(te.std()),
                params=per_regressor[kind][1],
            )
        )

    best = max(results, key=lambda r: r.r2_test_mean)
    best_idx = spec.regressors.index(best.regressor)

    full_seed = _fit_seed(
        config.master_seed, spec.id, config.iterations, best_idx
    )
    full_model = fit(
        best.regressor,
        X_full,
        y_full,
        params=per_regressor[best.regressor][0],
        seed=full_seed,
    )
    method = "impurity" if best.regressor == "ert" else "permutation"
    report = importance(
        full_model,
        X_full,
        y_full,
        method=method,
        seed=full_seed,
        feature_names=dm_std.feature_names,
    )
    importance_block = {
        "method": report.method,
        "values": {k: float(v) for k, v in report.values.items()},
        "top": [[n, float(v)] for n, v in report.top(IMPORTANCE_THRESHOLD)],
    }

    # Scatter data: the best regressor's predictions on iteration 0's
    # held-out split, refit exactly as in the loop.
    train_idx, test_idx = split_cache
    seed0 = _fit_seed(config.master_seed, spec.id, 0, best_idx)
    if config.standardize_before_split:
        X_tr, y_tr = X_full[train_idx], y_full[train_idx]
        X_te, y_te = X_full[test_idx], y_full[test_idx]
    else:
        sub = DesignMatrix(
            X=dm.X[train_idx],
            feature_names=list(dm.feature_names),
            y=dm.y[train_idx],
        )
        sub_std, sparams = standardize(sub)
        X_tr, y_tr = sub_std.X, sub_std.y
        held = DesignMatrix(
            X=dm.X[test_idx],
            feature_names=list(dm.feature_names),
            y=dm.y[test_idx],
        )
        held_std = apply_standardization(sparams, held)
        X_te, y_te = held_std.X, held_std.y
    model0 = fit(
        best.regressor,
        X_tr,
        y_tr,
        params=per_regressor[best.regressor][0],
        seed=seed0,
    )
    scatter = {
        "regressor": best.regressor,
        "predicted": [float(v) for v in model0.predict(X_te)],
        "observed": [float(v) for v in y_te],
    }

    return SpecResult(
        spec_id=spec.id,
        name=spec.name,
        features=list(spec.features),
        regressors=list(spec.regressors),
        status="ok",
        coverage=coverage,
        results=results,
        best_regressor=best.regressor,
        importance=importance_block,
        scatter=scatter,
    )


def report_to_dict(report):
    doc = {
        "format": "wordsim-report",
        "version": 1,
        "config": report.config,
        "environment": report.environment,
        "specs": [],
    }
    for sr in report.specs:
        entry = {
            "id": sr.spec_id,
            "name": sr.name,
            "features": list(sr.features),
            "regressors": list(sr.regressors),
            "status": sr.status,
            "skip_reason": sr.skip_reason,
            "coverage": asdict(sr.coverage) if sr.coverage else None,
            "results": [asdict(r) for r in sr.results],
            "best_regressor": sr.best_regressor,
            "importance": sr.importance,
            "scatter": sr.scatter,
        }
        doc["specs"].append(entry)
    return doc


def report_from_dict(doc):
    if doc.get("format") != "wordsim-report":
        raise WordsimError("not a report document")
    specs = []
    for entry in doc["specs"]:
        coverage = None
        if entry.get("coverage"):
            coverage = CoverageStats(**entry["coverage"])
        specs.append(
            SpecResult(
                spec_id=entry["id"],
                name=entry["name"],
                features=list(entry["features"]),
                regressors=list(entry["regressors"]),
                status=entry["status"],
                skip_reason=entry.get("skip_reason", ""),
                coverage=coverage,
                results=[RegressorResult(**r) for r in entry["results"]],
                best_regressor=entry.get("best_regressor"),
                importance=entry.get("importance"),
                scatter=entry.get("scatter"),
            )
        )
    return ExperimentReport(
        config=doc["config"], environment=doc["environment"], specs=specs
    )


def _format_top(importance_block):
    if not importance_block:
        return ""
    return ";".join(f"{name}={value!r}" for name, value in importance_block["top"])


def render_csv(report):
    """One row per model x regressor; skipped specs keep their rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        [
            "id",
            "name",
            "regressor",
            "status",
            "r2_train_mean",
            "r2_train_sd",
            "r2_test_mean",
            "r2_test_sd",
            "top_features",
            "rows_retained",
        ]
    )
    for sr in report.specs:
        if sr.status == "skipped":
            for kind in sr.regressors:
                writer.writerow(
                    [sr.spec_id, sr.name, kind, "skipped", "", "", "", "", "", ""]
                )
            continue
        for rr in sr.results:
            writer.writerow(
                [
                    sr.spec_id,
                    sr.name,
                    rr.regressor,
                    "ok",
                    repr(rr.r2_train_mean),
                    repr(rr.r2_train_sd),
                    repr(rr.r2_test_mean),
                    repr(rr.r2_test_sd),
                    _format_top(sr.importance),
                    sr.coverage.rows_retained,
                ]
            )
    return buffer.getvalue()


def render_scatter_csv(report, spec_id):
    for sr in report.specs:
        if sr.spec_id == spec_id:
            if sr.status != "ok" or not sr.scatter:
                raise WordsimError(
                    f"model {spec_id} has no scatter data (status {sr.status})"
                )
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(["predicted", "observed"])
            for p, o in zip(sr.scatter["predicted"], sr.scatter["observed"]):
                writer.writerow([repr(p), repr(o)])
            return buffer.getvalue()
    raise WordsimError(f"unknown model id {spec_id} in report")


def emit_report(report, formats, out_dir, scatter=None):
    """Write the requested renderings; returns the created paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt == "csv":
            path = os.path.join(out_dir, "report.csv")
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(render_csv(report))
        elif fmt == "json":
            path = os.path.join(out_dir, "report.json")
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(report_to_dict(report), handle, indent=1)
                handle.write("\n")
        else:
            raise WordsimError(f"unknown report format {fmt!r}")
        written.append(path)
    if scatter is not None:
        path = os.path.join(out_dir, f"scatter_{scatter}.csv")
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(render_scatter_csv(report, scatter))
        written.append(path)
    return written
