"""Extremely randomized trees for regression.

Every tree sees the full sample (no bootstrap by default). At each node one
uniform-random cut-point is drawn per candidate feature inside the node's
[min, max]; the cut with the greatest variance reduction wins, ties going to
the lowest feature index. All features are candidates at every node.
Per-tree RNGs are spawned from the master seed, so a forest grown tree by
tree is identical no matter how the trees are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import WordsimError


@dataclass
class ErtParams:
    n_trees: int = 50
    min_samples_split: int = 3
    min_samples_leaf: int = 1
    max_depth: int | None = None
    bootstrap: bool = False

    def __post_init__(self):
        if self.n_trees < 1 or self.min_samples_split < 2:
            raise WordsimError("need n_trees >= 1 and min_samples_split >= 2")
        if self.min_samples_leaf < 1:
            raise WordsimError("min_samples_leaf must be >= 1")


@dataclass
class Tree:
    """Flat array representation; feature -1 marks a leaf."""

    feature: list
    threshold: list
    left: list
    right: list
    value: list

    def predict_one(self, row):
        node = 0
        while self.feature[node] >= 0:
            if row[self.feature[node]] < self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return self.value[node]

    def predict(self, X):
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        value = np.asarray(self.value)
        node = np.zeros(len(X), dtype=int)
        active = np.flatnonzero(feature[node] >= 0)
        while len(active):
            cur = node[active]
            go_left = X[active, feature[cur]] < threshold[cur]
            node[active] = np.where(go_left, left[cur], right[cur])
            active = active[feature[node[active]] >= 0]
        return value[node]


def split_scores(x_col, y, thresholds):
    """Variance-reduction score of each threshold on one feature column.

    Score is ``ss(parent) - ss(left) - ss(right)`` (total squared error
    around child means), computed for a `x < t` / `x >= t` partition.
    Invalid cuts (an empty side) score -inf.
    """
    x_col = np.asarray(x_col, dtype=float)
    y = np.asarray(y, dtype=float)
    thresholds = np.atleast_1d(np.asarray(thresholds, dtype=float))
    n = len(y)
    total_sum = y.sum()
    total_sumsq = float(y @ y)
    parent_ss = total_sumsq - total_sum**2 / n

    mask = x_col[:, None] < thresholds[None, :]
    n_left = mask.sum(axis=0)
    sum_left = y @ mask
    sumsq_left = (y * y) @ mask
    scores = np.full(len(thresholds), -np.inf)
    valid = (n_left > 0) & (n_left < n)
    nl = n_left[valid]
    nr = n - nl
    ss_left = sumsq_left[valid] - sum_left[valid] ** 2 / nl
    sum_right = total_sum - sum_left[valid]
    ss_right = (total_sumsq - sumsq_left[valid]) - sum_right**2 / nr
    scores[valid] = parent_ss - ss_left - ss_right
    return scores


def _build_tree(X, y, params, rng):
    n_samples, n_features = X.shape
    tree = Tree([], [], [], [], [])
    decreases = np.zeros(n_features)

    def new_node():
        tree.feature.append(-1)
        tree.threshold.append(0.0)
        tree.left.append(-1)
        tree.right.append(-1)
        tree.value.append(0.0)
        return len(tree.feature) - 1

    root = new_node()
    stack = [(root, np.arange(n_samples), 0)]
    while stack:
        node, idx, depth = stack.pop()
        y_node = y[idx]
        n = len(idx)
        tree.value[node] = float(y_node.mean())

        node_ss = float(y_node @ y_node) - y_node.sum() ** 2 / n
        at_cap = params.max_depth is not None and depth >= params.max_depth
        if n < params.min_samples_split or node_ss <= 0.0 or at_cap:
            continue

        X_node = X[idx]
        lo = X_node.min(axis=0)
        hi = X_node.max(axis=0)
        cuts = rng.uniform(lo, hi)

        mask = X_node < cuts[None, :]
        n_left = mask.sum(axis=0)
        sums = y_node @ mask
        sumsqs = (y_node * y_node) @ mask
        total_sum = y_node.sum()
        total_sumsq = float(y_node @ y_node)

        scores = np.full(n_features, -np.inf)
        valid = (n_left >= params.min_samples_leaf) & (
            n - n_left >= params.min_samples_leaf
        )
        if valid.any():
            nl = n_left[valid]
            nr = n - nl
            ss_l = sumsqs[valid] - sums[valid] ** 2 / nl
            sum_r = total_sum - sums[valid]
            ss_r = (total_sumsq - sumsqs[valid]) - sum_r**2 / nr
            scores[valid] = node_ss - ss_l - ss_r
        best = int(np.argmax(scores))
        if not np.isfinite(scores[best]) or scores[best] <= 0.0:
            continue

        go_left = mask[:, best]
        left_idx = idx[go_left]
        right_idx = idx[~go_left]
        tree.feature[node] = best
        tree.threshold[node] = float(cuts[best])
        decreases[best] += scores[best] / n_samples

        left = new_node()
        right = new_node()
        tree.left[node] = left
        tree.right[node] = right
        stack.append((right, right_idx, depth + 1))
        stack.append((left, left_idx, depth + 1))
    return tree, decreases


class ErtModel:
    """A fitted forest: trees, per-feature impurity decreases, target range."""

    kind = "ert"

    def __init__(self, trees, decreases, n_features, y_min, y_max, params, seed):
        self.trees = trees
        self.feature_decreases = decreases
        self.n_features = n_features
        self.y_min = y_min
        self.y_max = y_max
        self.params = params
        self.seed = seed

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise WordsimError(
                f"expected {self.n_features} feature columns, got {X.shape}"
            )
        out = np.zeros(len(X))
        for tree in self.trees:
            out += tree.predict(X)
        return out / len(self.trees)

    def impurity_importance(self):
        total = self.feature_decreases.sum()
        if total <= 0:
            return np.zeros_like(self.feature_decreases)
        return self.feature_decreases / total


def fit_ert(X, y, params=None, seed=0):
    params = params or ErtParams()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise WordsimError("non-finite values in training data")
    if X.ndim != 2 or len(X) != len(y) or len(y) == 0:
        raise WordsimError("X must be 2-D with one target per row")

    seeds = np.random.SeedSequence(seed).spawn(params.n_trees)
    trees = []
    decreases = np.zeros(X.shape[1])
    for tree_seed in seeds:
        rng = np.random.default_rng(tree_seed)
        if params.bootstrap:
            idx = rng.integers(0, len(X), size=len(X))
            Xt, yt = X[idx], y[idx]
        else:
            Xt, yt = X, y
        tree, dec = _build_tree(Xt, yt, params, rng)
        trees.append(tree)
        decreases += dec
    return ErtModel(
        trees=trees,
        decreases=decreases,
        n_features=X.shape[1],
        y_min=float(y.min()),
        y_max=float(y.max()),
        params=params,
        seed=seed,
    )
