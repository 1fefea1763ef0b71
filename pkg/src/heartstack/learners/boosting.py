"""Boosted ensembles: first-order GBM, second-order boosting, AdaBoost."""

from __future__ import annotations

import math

import numpy as np

from ..errors import FitError
from .base import LearnerSpec, TrainedModel, sigmoid
from .tree import GrowParams, TreeNode, grow_tree, tree_apply

# Stumps with weighted error at or above chance end AdaBoost; a perfect
# stump gets its weight from this floored error instead of infinity.
_ADA_EPS = 1e-10


class GbmModel(TrainedModel):
    """Stagewise additive model under logistic loss.

    Each stage fits a variance-reduction regression tree to the negative
    gradient (label minus predicted probability) and is added with
    shrinkage; the initial score is the log-odds of the training rate.
    """

    def __init__(self, spec, n_features_in, init_score: float, learning_rate: float,
                 trees: list[TreeNode]):
        super().__init__(spec, n_features_in)
        self.init_score = init_score
        self.learning_rate = learning_rate
        self.trees = trees

    def decision(self, X) -> np.ndarray:
        margin = np.full(X.shape[0], self.init_score)
        for tree in self.trees:
            margin += self.learning_rate * tree_apply(tree, X)
        return margin

    def _proba(self, X):
        return sigmoid(self.decision(X))

    def staged_proba(self, X, checkpoints: list[int]) -> list[np.ndarray]:
        X = self._prepare(X)
        out = []
        margin = np.full(X.shape[0], self.init_score)
        done = 0
        for c in sorted(checkpoints):
            while done < c:
                margin += self.learning_rate * tree_apply(self.trees[done], X)
                done += 1
            out.append(sigmoid(margin))
        return out

    def params_payload(self):
        return {
            "init_score": self.init_score,
            "learning_rate": self.learning_rate,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_payload(cls, spec, n_features_in, payload):
        return cls(spec, n_features_in, payload["init_score"], payload["learning_rate"],
                   [TreeNode.from_dict(t) for t in payload["trees"]])


def fit_gbm(spec: LearnerSpec, X, y) -> GbmModel:
    p = spec.resolved()
    rate = float(y.mean())
    init_score = math.log(rate / (1.0 - rate))
    params = GrowParams(
        max_depth=p["max_depth"],
        min_samples_split=p["min_samples_split"],
        target_kind="regression_residual",
    )
    lr = p["learning_rate"]
    margin = np.full(X.shape[0], init_score)
    trees = []
    for _ in range(p["n_estimators"]):
        residual = y - sigmoid(margin)
        tree = grow_tree(X, residual, params)
        trees.append(tree)
        margin += lr * tree_apply(tree, X)
    return GbmModel(spec, X.shape[1], init_score, lr, trees)


class XgbModel(TrainedModel):
    """Second-order boosting: leaf weight -G/(H + lambda), split gain from
    the regularized score with a per-leaf penalty gamma."""

    def __init__(self, spec, n_features_in, learning_rate: float, trees: list[TreeNode]):
        super().__init__(spec, n_features_in)
        self.learning_rate = learning_rate
        self.trees = trees

    def decision(self, X) -> np.ndarray:
        margin = np.zeros(X.shape[0])
        for tree in self.trees:
            margin += self.learning_rate * tree_apply(tree, X)
        return margin

    def _proba(self, X):
        return sigmoid(self.decision(X))

    def staged_proba(self, X, checkpoints: list[int]) -> list[np.ndarray]:
        X = self._prepare(X)
        out = []
        margin = np.zeros(X.shape[0])
        done = 0
        for c in sorted(checkpoints):
            while done < c:
                margin += self.learning_rate * tree_apply(self.trees[done], X)
                done += 1
            out.append(sigmoid(margin))
        return out

    def params_payload(self):
        return {"learning_rate": self.learning_rate,
                "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_payload(cls, spec, n_features_in, payload):
        return cls(spec, n_features_in, payload["learning_rate"],
                   [TreeNode.from_dict(t) for t in payload["trees"]])


def leaf_weight(g_sum: float, h_sum: float, reg_lambda: float) -> float:
    return -g_sum / (h_sum + reg_lambda)


def _xgb_best_split(X, g, h, reg_lambda, gamma):
    """Maximize 0.5*(GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l)) - gamma over all
    midpoint cuts of all features; None when the best gain is not positive."""
    order = np.argsort(X, axis=0)
    Xs = np.take_along_axis(X, order, axis=0)
    cum_g = np.cumsum(g[order], axis=0)
    cum_h = np.cumsum(h[order], axis=0)
    G, H = cum_g[-1, 0], cum_h[-1, 0]
    gl, hl = cum_g[:-1], cum_h[:-1]
    gr, hr = G - gl, H - hl
    parent_score = G * G / (H + reg_lambda)
    gain = 0.5 * (gl * gl / (hl + reg_lambda) + gr * gr / (hr + reg_lambda) - parent_score) - gamma
    gain[Xs[1:] == Xs[:-1]] = -np.inf

    flat = np.argmax(gain.T)
    feature, cut = divmod(flat, gain.shape[0])
    if not gain[cut, feature] > 0.0:
        return None
    threshold = (Xs[cut, feature] + Xs[cut + 1, feature]) / 2.0
    return int(feature), float(threshold)


def _grow_xgb_tree(X, g, h, max_depth, min_samples_split, reg_lambda, gamma) -> TreeNode:
    root = TreeNode()
    stack = [(root, np.arange(X.shape[0]), 0)]
    while stack:
        node, rows, depth = stack.pop()
        split = None
        if (max_depth is None or depth < max_depth) and len(rows) >= min_samples_split:
            split = _xgb_best_split(X[rows], g[rows], h[rows], reg_lambda, gamma)
        if split is None:
            node.value = leaf_weight(g[rows].sum(), h[rows].sum(), reg_lambda)
            node.counts = (float(len(rows)),)
            continue
        node.feature, node.threshold = split
        node.left = TreeNode()
        node.right = TreeNode()
        go_left = X[rows, node.feature] <= node.threshold
        stack.append((node.right, rows[~go_left], depth + 1))
        stack.append((node.left, rows[go_left], depth + 1))
    return root


def fit_xgb(spec: LearnerSpec, X, y) -> XgbModel:
    p = spec.resolved()
    lr = p["learning_rate"]
    margin = np.zeros(X.shape[0])
    trees = []
    for _ in range(p["n_estimators"]):
        prob = sigmoid(margin)
        g = prob - y
        h = prob * (1.0 - prob)
        tree = _grow_xgb_tree(X, g, h, p["max_depth"], p["min_samples_split"],
                              p["reg_lambda"], p["gamma"])
        trees.append(tree)
        margin += lr * tree_apply(tree, X)
    return XgbModel(spec, X.shape[1], lr, trees)


class AdaboostModel(TrainedModel):
    """Reweighted depth-1 stumps with a weighted-majority output.

    The probability is sigmoid(2 * s) where s is the alpha-weighted mean
    vote in [-1, 1], so thresholding at 0.5 reproduces the weighted
    majority label.
    """

    def __init__(self, spec, n_features_in, stumps: list[TreeNode], alphas: list[float]):
        super().__init__(spec, n_features_in)
        self.stumps = stumps
        self.alphas = alphas

    def decision(self, X) -> np.ndarray:
        total = np.zeros(X.shape[0])
        alpha_sum = sum(self.alphas)
        if alpha_sum == 0.0:
            return total
        for stump, alpha in zip(self.stumps, self.alphas):
            votes = np.where(tree_apply(stump, X) >= 0.5, 1.0, -1.0)
            total += alpha * votes
        return total / alpha_sum

    def _proba(self, X):
        return sigmoid(2.0 * self.decision(X))

    def params_payload(self):
        return {"stumps": [s.to_dict() for s in self.stumps], "alphas": list(self.alphas)}

    @classmethod
    def from_payload(cls, spec, n_features_in, payload):
        return cls(spec, n_features_in,
                   [TreeNode.from_dict(s) for s in payload["stumps"]],
                   list(payload["alphas"]))


def fit_adaboost(spec: LearnerSpec, X, y) -> AdaboostModel:
    p = spec.resolved()
    n = X.shape[0]
    w = np.full(n, 1.0 / n)
    params = GrowParams(criterion="gini", max_depth=1)
    stumps: list[TreeNode] = []
    alphas: list[float] = []
    for _ in range(p["n_estimators"]):
        stump = grow_tree(X, y, params, w=w)
        pred = (tree_apply(stump, X) >= 0.5).astype(np.int64)
        err = float(w[pred != y].sum())
        if err >= 0.5:
            if not stumps:
                raise FitError("adaboost: no stump beats chance on this data")
            break
        err = max(err, _ADA_EPS)
        alpha = math.log((1.0 - err) / err)
        stumps.append(stump)
        alphas.append(alpha)
        if err <= _ADA_EPS:
            break  # perfect stump; further rounds cannot change the vote
        w *= np.exp(alpha * (pred != y))
        w /= w.sum()
    return AdaboostModel(spec, X.shape[1], stumps, alphas)
