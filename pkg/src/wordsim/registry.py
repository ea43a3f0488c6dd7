"""The benchmark registry: 28 standard model configurations.

Feature columns come in three flavors: taxonomy metric scores (pair-level),
embedding cosines (pair-level), and lexical feature differences. Models
1-6 and 8-11 are single-feature and use plain linear regression; every
combined model runs all three regressors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import WordsimError

TAXONOMY_FEATURES = (
    "wn-path", "wn-lch", "wn-wup", "wn-res", "wn-jcn", "wn-lin",
)
VSM_FEATURES = ("cos-lsa-small", "cos-lsa-large", "cos-sgns", "cos-pretrained")
SURFACE_SET = ("nlet", "logfZ", "cvq", "on", "nsyl")
AFFECTIVE_SET = ("val", "aro", "ima", "dom", "conc", "dist")
AESTHETIC_SET = ("logfZ", "val", "sc", "ap")

ALL_REGRESSORS = ("ert", "mlp", "mlr")

# Resource keys each feature needs before a spec naming it can run.
FEATURE_REQUIREMENTS = {
    "wn-path": ("taxonomy",),
    "wn-lch": ("taxonomy",),
    "wn-wup": ("taxonomy",),
    "wn-res": ("taxonomy", "counts"),
    "wn-jcn": ("taxonomy", "counts"),
    "wn-lin": ("taxonomy", "counts"),
    "cos-lsa-small": ("corpus",),
    "cos-lsa-large": ("corpus",),
    "cos-sgns": ("corpus",),
    "cos-pretrained": ("pretrained",),
    "nlet": (),
    "nsyl": (),
    "cvq": (),
    "sc": (),
    "on": ("reference",),
    "logfZ": ("frequency",),
    "val": ("norms",),
    "aro": ("norms",),
    "ima": ("norms",),
    "dom": ("norms",),
    "conc": ("norms",),
    # dist is defined against an embedding vocabulary, but degrades to a
    # masked column when no space is loaded, so it skips with its group
    # (norms) rather than with the VSM models.
    "dist": ("norms",),
    "ap": ("norms",),
}


@dataclass
class ModelSpec:
    """One registry entry: a feature list crossed with its regressors."""

    id: int
    name: str
    features: list
    regressors: list
    params: dict = field(default_factory=dict)  # regressor kind -> kwargs
    grid: dict = field(default_factory=dict)  # regressor kind -> value lists
    skipped: bool = False
    skip_reason: str = ""

    def __post_init__(self):
        if not self.features:
            raise WordsimError(f"model {self.id}: empty feature list")
        for r in self.regressors:
            if r not in ALL_REGRESSORS:
                raise WordsimError(f"model {self.id}: unknown regressor {r!r}")


def _union(*groups):
    seen = dict.fromkeys(f for group in groups for f in group)
    return list(seen)


_REGISTRY_ROWS = (
    (1, "wn-path", ["wn-path"], ("mlr",)),
    (2, "wn-lch", ["wn-lch"], ("mlr",)),
    (3, "wn-wup", ["wn-wup"], ("mlr",)),
    (4, "wn-res", ["wn-res"], ("mlr",)),
    (5, "wn-jcn", ["wn-jcn"], ("mlr",)),
    (6, "wn-lin", ["wn-lin"], ("mlr",)),
    (7, "taxonomy-all", list(TAXONOMY_FEATURES), ALL_REGRESSORS),
    (8, "lsa-small", ["cos-lsa-small"], ("mlr",)),
    (9, "lsa-large", ["cos-lsa-large"], ("mlr",)),
    (10, "sgns", ["cos-sgns"], ("mlr",)),
    (11, "pretrained", ["cos-pretrained"], ("mlr",)),
    (12, "vsm-all", list(VSM_FEATURES), ALL_REGRESSORS),
    (13, "surface", list(SURFACE_SET), ALL_REGRESSORS),
    (14, "affective", list(AFFECTIVE_SET), ALL_REGRESSORS),
    (15, "aesthetic", list(AESTHETIC_SET), ALL_REGRESSORS),
    (16, "surface+affective", _union(SURFACE_SET, AFFECTIVE_SET), ALL_REGRESSORS),
    (17, "surface+aesthetic", _union(SURFACE_SET, AESTHETIC_SET), ALL_REGRESSORS),
    (18, "affective+aesthetic", _union(AFFECTIVE_SET, AESTHETIC_SET), ALL_REGRESSORS),
    (19, "qna-all", _union(SURFACE_SET, AFFECTIVE_SET, AESTHETIC_SET), ALL_REGRESSORS),
    (20, "taxonomy+surface", _union(TAXONOMY_FEATURES, SURFACE_SET), ALL_REGRESSORS),
    (21, "taxonomy+affective", _union(TAXONOMY_FEATURES, AFFECTIVE_SET), ALL_REGRESSORS),
    (
        22,
        "taxonomy+surface+affective",
        _union(TAXONOMY_FEATURES, SURFACE_SET, AFFECTIVE_SET),
        ALL_REGRESSORS,
    ),
    (
        23,
        "taxonomy+qna-all",
        _union(TAXONOMY_FEATURES, SURFACE_SET, AFFECTIVE_SET, AESTHETIC_SET),
        ALL_REGRESSORS,
    ),
    (24, "vsm+surface", _union(VSM_FEATURES, SURFACE_SET), ALL_REGRESSORS),
    (25, "vsm+affective", _union(VSM_FEATURES, AFFECTIVE_SET), ALL_REGRESSORS),
    (
        26,
        "vsm+surface+affective",
        _union(VSM_FEATURES, SURFACE_SET, AFFECTIVE_SET),
        ALL_REGRESSORS,
    ),
    (
        27,
        "vsm+qna-all",
        _union(VSM_FEATURES, SURFACE_SET, AFFECTIVE_SET, AESTHETIC_SET),
        ALL_REGRESSORS,
    ),
    (
        28,
        "all-features",
        _union(
            TAXONOMY_FEATURES,
            VSM_FEATURES,
            SURFACE_SET,
            AFFECTIVE_SET,
            AESTHETIC_SET,
        ),
        ALL_REGRESSORS,
    ),
)


def missing_requirements(features, available):
    """Resource keys required by ``features`` but absent from ``available``."""
    missing = []
    for f in features:
        if f not in FEATURE_REQUIREMENTS:
            raise WordsimError(f"unknown feature {f!r}")
        for req in FEATURE_REQUIREMENTS[f]:
            if req not in available and req not in missing:
                missing.append(req)
    return missing


def build_registry(available, regressors_override=None):
    """Instantiate the 28 standard specs against available resources.

    ``available`` is the set of resource keys that can be resolved
    (``taxonomy``, ``counts``, ``corpus``, ``pretrained``, ``frequency``,
    ``norms``, ``reference``). Specs whose requirements are unmet are
    returned marked skipped, never dropped. ``regressors_override`` forces
    the same regressor list onto every spec.
    """
    available = set(available)
    specs = []
    for mid, name, features, regressors in _REGISTRY_ROWS:
        if regressors_override is not None:
            regressors = tuple(regressors_override)
        missing = missing_requirements(features, available)
        specs.append(
            ModelSpec(
                id=mid,
                name=name,
                features=list(features),
                regressors=list(regressors),
                skipped=bool(missing),
                skip_reason=(
                    f"missing resources: {', '.join(missing)}" if missing else ""
                ),
            )
        )
    return specs


def spec_from_dict(entry, available):
    """Build a custom :class:`ModelSpec` from a config mapping."""
    try:
        features = list(entry["features"])
        spec = ModelSpec(
            id=int(entry["id"]),
            name=str(entry.get("name", f"custom-{entry['id']}")),
            features=features,
            regressors=list(entry.get("regressors", ["mlr"])),
            params={k: dict(v) for k, v in entry.get("params", {}).items()},
            grid={k: dict(v) for k, v in entry.get("grid", {}).items()},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise WordsimError(f"bad custom model spec: {exc}") from exc
    missing = missing_requirements(features, set(available))
    if missing:
        spec.skipped = True
        spec.skip_reason = f"missing resources: {', '.join(missing)}"
    return spec
