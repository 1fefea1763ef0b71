"""k-fold plans, cross-validation and grid search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DataError
from .learners import STAGEABLE, LearnerSpec, fit
from .parallel import run_tasks
from .rng import stream


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray  # row index -> fold id
    seed: int
    stratified: bool

    def __post_init__(self):
        a = np.asarray(self.assignments, dtype=np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "assignments", a)

    @property
    def n(self) -> int:
        return self.assignments.shape[0]

    def test_rows(self, fold: int) -> np.ndarray:
        return np.nonzero(self.assignments == fold)[0]

    def train_rows(self, fold: int) -> np.ndarray:
        return np.nonzero(self.assignments != fold)[0]

    def to_dict(self) -> dict:
        return {"k": self.k, "seed": self.seed, "stratified": self.stratified,
                "assignments": self.assignments.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "FoldPlan":
        return cls(d["k"], np.array(d["assignments"], dtype=np.int64), d["seed"],
                   d["stratified"])


def k_fold_plan(n: int, k: int, seed: int, stratify_by=None) -> FoldPlan:
    """Assign each row to one of k folds.

    Fold sizes differ by at most one; with stratification the same holds
    per class. Deterministic for a fixed seed.
    """
    if k < 2:
        raise DataError("need at least 2 folds")
    if k > n:
        raise DataError(f"cannot make {k} folds from {n} rows")
    assignments = np.empty(n, dtype=np.int64)
    if stratify_by is None:
        order = stream(seed, "folds").permutation(n)
        sizes = np.full(k, n // k)
        sizes[: n % k] += 1
        start = 0
        for fold, size in enumerate(sizes):
            assignments[order[start:start + size]] = fold
            start += size
        return FoldPlan(k, assignments, seed, stratified=False)

    labels = np.asarray(stratify_by)
    if labels.shape != (n,):
        raise DataError("stratify_by length must match n")
    totals = np.zeros(k, dtype=np.int64)
    for cls in np.unique(labels):
        rows = np.nonzero(labels == cls)[0]
        rows = rows[stream(seed, "folds", int(cls)).permutation(len(rows))]
        base, extra = divmod(len(rows), k)
        sizes = np.full(k, base)
        # Extra rows go to the currently smallest folds, lowest id first.
        for fold in np.lexsort((np.arange(k), totals))[:extra]:
            sizes[fold] += 1
        start = 0
        for fold in range(k):
            assignments[rows[start:start + sizes[fold]]] = fold
            start += sizes[fold]
        totals += sizes
    return FoldPlan(k, assignments, seed, stratified=True)


@dataclass(frozen=True)
class CvScores:
    per_fold: tuple[float, ...]

    @property
    def mean(self) -> float:
        return float(np.mean(self.per_fold))


def _fold_accuracy(task) -> float:
    spec, X_train, y_train, X_test, y_test = task
    model = fit(spec, X_train, y_train)
    return float((model.predict(X_test) == y_test).mean())


def cross_validate(spec: LearnerSpec, X, y, plan: FoldPlan) -> CvScores:
    """Accuracy of the spec on each held-out fold; any standardization is
    refit inside each training fold (it lives inside fit()). Folds may run
    in parallel; scores equal the sequential ones exactly."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if plan.n != X.shape[0]:
        raise DataError("fold plan does not cover this dataset")
    tasks = []
    for fold in range(plan.k):
        train, test = plan.train_rows(fold), plan.test_rows(fold)
        tasks.append((spec, X[train], y[train], X[test], y[test]))
    return CvScores(tuple(run_tasks(_fold_accuracy, tasks)))


@dataclass(frozen=True)
class GridPoint:
    params: dict
    per_fold: tuple[float, ...]

    @property
    def mean(self) -> float:
        return float(np.mean(self.per_fold))


@dataclass(frozen=True)
class GridSearchResult:
    points: tuple[GridPoint, ...]
    best: GridPoint
    best_spec: LearnerSpec

    def to_dict(self) -> dict:
        return {
            "points": [{"params": p.params, "mean": p.mean, "per_fold": list(p.per_fold)}
                       for p in self.points],
            "best_params": self.best.params,
            "best_mean": self.best.mean,
        }


def grid_search(spec_template: LearnerSpec, grid: dict[str, list], X, y,
                plan: FoldPlan) -> GridSearchResult:
    """Cross-validate every point of the Cartesian product of the grid.

    The best point attains the maximum mean accuracy; ties go to the
    smallest hyperparameter values in declaration order. Pure-n_estimators
    grids over stageable ensembles are evaluated by staged prediction of
    one maximal fit per fold, which yields identical scores to refitting.
    """
    if not grid:
        raise ConfigError("grid must contain at least one dimension")
    for name, values in grid.items():
        if not values:
            raise ConfigError(f"grid dimension {name!r} is empty")

    names = list(grid)
    combos = [dict(zip(names, values)) for values in itertools.product(*grid.values())]
    if names == ["n_estimators"] and spec_template.algorithm in STAGEABLE:
        per_fold_by_combo = _staged_n_estimators_cv(spec_template, grid["n_estimators"],
                                                    X, y, plan)
    else:
        per_fold_by_combo = [
            cross_validate(_with_params(spec_template, combo), X, y, plan).per_fold
            for combo in combos
        ]

    points = tuple(GridPoint(combo, per_fold)
                   for combo, per_fold in zip(combos, per_fold_by_combo))
    best = points[0]
    for point in points[1:]:
        key = tuple(point.params[n] for n in names)
        best_key = tuple(best.params[n] for n in names)
        if point.mean > best.mean or (point.mean == best.mean and key < best_key):
            best = point
    return GridSearchResult(points, best, _with_params(spec_template, best.params))


def _with_params(template: LearnerSpec, params: dict) -> LearnerSpec:
    merged = {**template.hyperparameters, **params}
    return replace(template, hyperparameters=merged)


def _staged_fold(task):
    spec, checkpoints, X_train, y_train, X_test, y_test = task
    model = fit(spec, X_train, y_train)
    return [float(((proba >= 0.5).astype(np.int64) == y_test).mean())
            for proba in model.staged_proba(X_test, checkpoints)]


def _staged_n_estimators_cv(template, sizes, X, y, plan):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    checkpoints = sorted(set(int(s) for s in sizes))
    full_spec = _with_params(template, {"n_estimators": max(checkpoints)})
    tasks = []
    for fold in range(plan.k):
        train, test = plan.train_rows(fold), plan.test_rows(fold)
        tasks.append((full_spec, checkpoints, X[train], y[train], X[test], y[test]))
    per_fold = run_tasks(_staged_fold, tasks)
    by_size = {size: tuple(fold_scores[i] for fold_scores in per_fold)
               for i, size in enumerate(checkpoints)}
    return [by_size[int(s)] for s in sizes]
