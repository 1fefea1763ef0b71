"""Single CART trees and the two tree ensembles."""

from __future__ import annotations

import numpy as np

from ..rng import stream
from .base import LearnerSpec, TrainedModel, resolve_max_features
from .tree import (
    GrowParams,
    TreeNode,
    grow_exhaustive_tree_batched,
    grow_random_tree_batched,
    grow_tree,
    tree_apply,
)


class CartModel(TrainedModel):
    def __init__(self, spec, n_features_in, tree: TreeNode):
        super().__init__(spec, n_features_in)
        self.tree = tree

    def _proba(self, X):
        return tree_apply(self.tree, X)

    def params_payload(self):
        return {"tree": self.tree.to_dict()}

    @classmethod
    def from_payload(cls, spec, n_features_in, payload):
        return cls(spec, n_features_in, TreeNode.from_dict(payload["tree"]))


def fit_cart(spec: LearnerSpec, X, y) -> CartModel:
    p = spec.resolved()
    max_features = resolve_max_features(p["max_features"], X.shape[1])
    params = GrowParams(
        criterion=p["criterion"],
        max_depth=p["max_depth"],
        min_samples_split=p["min_samples_split"],
        feature_subsample=max_features,
    )
    rng = stream(spec.seed, "cart") if max_features is not None else None
    return CartModel(spec, X.shape[1], grow_tree(X, y, params, rng))


class ForestModel(TrainedModel):
    """Averaged trees; label = thresholded mean of leaf probabilities,
    which is the probability-weighted majority vote."""

    def __init__(self, spec, n_features_in, trees: list[TreeNode]):
        super().__init__(spec, n_features_in)
        self.trees = trees

    def _proba(self, X):
        total = np.zeros(X.shape[0])
        for tree in self.trees:
            total += tree_apply(tree, X)
        return total / len(self.trees)

    def staged_proba(self, X, checkpoints: list[int]) -> list[np.ndarray]:
        """Mean leaf probability using only the first c trees, for each c.

        Identical to fitting a smaller ensemble because tree t's random
        stream depends only on (seed, t).
        """
        X = self._prepare(X)
        out = []
        total = np.zeros(X.shape[0])
        done = 0
        for c in sorted(checkpoints):
            while done < c:
                total += tree_apply(self.trees[done], X)
                done += 1
            out.append(np.clip(total / done, 0.0, 1.0))
        return out

    def params_payload(self):
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_payload(cls, spec, n_features_in, payload):
        return cls(spec, n_features_in, [TreeNode.from_dict(t) for t in payload["trees"]])


def fit_random_forest(spec: LearnerSpec, X, y) -> ForestModel:
    """Bootstrap-resampled trees with per-node feature subsampling."""
    return _fit_forest(spec, X, y, bootstrap=True, candidate_mode="exhaustive")


def fit_extra_trees(spec: LearnerSpec, X, y) -> ForestModel:
    """Full-sample trees with one random threshold per candidate feature."""
    return _fit_forest(spec, X, y, bootstrap=False, candidate_mode="random_threshold")


def _fit_forest(spec, X, y, bootstrap: bool, candidate_mode: str) -> ForestModel:
    p = spec.resolved()
    n, d = X.shape
    params = GrowParams(
        criterion=p["criterion"],
        max_depth=p["max_depth"],
        min_samples_split=p["min_samples_split"],
        feature_subsample=resolve_max_features(p["max_features"], d),
        candidate_mode=candidate_mode,
    )
    trees = []
    for t in range(p["n_estimators"]):
        rng = stream(spec.seed, "tree", t)
        if bootstrap:
            rows = rng.integers(0, n, size=n)
            # Collapsing resample duplicates into row weights grows the
            # identical tree on ~40% fewer rows.
            unique, counts = np.unique(rows, return_counts=True)
            trees.append(grow_exhaustive_tree_batched(
                X[unique], y[unique], params, rng, w=counts.astype(np.float64)))
        else:
            # Same node-level semantics as grow_tree in random mode, grown
            # level-wise for speed.
            trees.append(grow_random_tree_batched(X, y, params, rng))
    return ForestModel(spec, d, trees)
