"""Stacked generalization: base-learner selection, out-of-fold meta-features
and the meta-level classifier.

The meta model never sees a base prediction for a row that the producing
base model was trained on: fold f's column entries come from the model
fitted with fold f held out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .learners import LearnerSpec, TrainedModel, fit
from .model_selection import FoldPlan, k_fold_plan
from .parallel import run_tasks
from .rng import stream


@dataclass(frozen=True)
class StackingConfig:
    candidates: tuple[LearnerSpec, ...]
    top_n: int = 4
    meta: LearnerSpec = field(default_factory=lambda: LearnerSpec("sgd_logistic"))
    oof_folds: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.top_n < 1:
            raise ConfigError("top_n must be at least 1")
        if self.top_n > len(self.candidates):
            raise ConfigError(
                f"top_n={self.top_n} exceeds the {len(self.candidates)} candidates"
            )
        if self.oof_folds < 2:
            raise ConfigError("stacking needs at least 2 out-of-fold folds")


@dataclass(frozen=True)
class BaseSelectionReport:
    entries: tuple[tuple[LearnerSpec, float], ...]  # candidate order preserved
    selected: tuple[LearnerSpec, ...]
    rejected: tuple[LearnerSpec, ...]

    def to_dict(self) -> dict:
        return {
            "candidates": [
                {"algorithm": s.algorithm, "mean_cv_accuracy": acc,
                 "selected": any(s is t for t in self.selected)}
                for s, acc in self.entries
            ],
            "selected": [s.algorithm for s in self.selected],
            "rejected": [s.algorithm for s in self.rejected],
        }


def select_base_learners(cv_results, top_n: int) -> BaseSelectionReport:
    """Keep the top_n candidates by mean CV accuracy.

    ``cv_results`` is an ordered sequence of (spec, mean_accuracy); ties are
    broken by declaration order, i.e. earlier entries win.
    """
    entries = tuple((spec, float(acc)) for spec, acc in cv_results)
    if top_n > len(entries):
        raise ConfigError(f"top_n={top_n} exceeds the {len(entries)} candidates")
    ranked = sorted(range(len(entries)), key=lambda i: (-entries[i][1], i))
    chosen = set(ranked[:top_n])
    selected = tuple(entries[i][0] for i in range(len(entries)) if i in chosen)
    rejected = tuple(entries[i][0] for i in range(len(entries)) if i not in chosen)
    return BaseSelectionReport(entries, selected, rejected)


class StackedModel:
    """Selected base models refit on the full training data, plus the meta
    classifier that combines their class-1 probabilities."""

    def __init__(self, bases: list[TrainedModel], meta: TrainedModel,
                 selection: BaseSelectionReport, fold_plan: FoldPlan):
        self.bases = bases
        self.meta = meta
        self.selection = selection
        self.fold_plan = fold_plan

    @property
    def n_features_in(self) -> int:
        return self.bases[0].n_features_in

    def base_probabilities(self, X) -> np.ndarray:
        return np.column_stack([b.predict_proba(X) for b in self.bases])

    def predict_proba(self, X) -> np.ndarray:
        return self.meta.predict_proba(self.base_probabilities(X))

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)


def _oof_fold(task) -> np.ndarray:
    spec, X_train, y_train, X_test = task
    model = fit(spec, X_train, y_train)
    return model.predict_proba(X_test)


def out_of_fold_probabilities(spec: LearnerSpec, X, y, plan: FoldPlan) -> tuple[np.ndarray, tuple[float, ...]]:
    """OOF class-1 probabilities for one candidate plus its fold accuracies.

    Row i's entry comes from the model trained with fold(i) held out.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    tasks = []
    for fold in range(plan.k):
        train, test = plan.train_rows(fold), plan.test_rows(fold)
        tasks.append((spec, X[train], y[train], X[test]))
    probas = run_tasks(_oof_fold, tasks)
    oof = np.empty(X.shape[0])
    scores = []
    for fold, proba in enumerate(probas):
        test = plan.test_rows(fold)
        oof[test] = proba
        scores.append(float(((proba >= 0.5).astype(np.int64) == y[test]).mean()))
    return oof, tuple(scores)


def fit_stack(config: StackingConfig, X, y) -> StackedModel:
    """Cross-validate all candidates on a shared fold plan, select the top_n,
    train the meta classifier on their out-of-fold probabilities, then refit
    the selected bases on the full training data."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    plan = k_fold_plan(X.shape[0], config.oof_folds,
                       int(stream(config.seed, "oof").integers(2**31)), stratify_by=y)

    oof_columns: list[np.ndarray] = []
    cv_results: list[tuple[LearnerSpec, float]] = []
    for spec in config.candidates:
        oof, scores = out_of_fold_probabilities(spec, X, y, plan)
        oof_columns.append(oof)
        cv_results.append((spec, float(np.mean(scores))))

    selection = select_base_learners(cv_results, config.top_n)
    selected_idx = [i for i, (spec, _) in enumerate(cv_results)
                    if any(spec is s for s in selection.selected)]
    meta_features = np.column_stack([oof_columns[i] for i in selected_idx])
    meta = fit(config.meta, meta_features, y)
    bases = [fit(config.candidates[i], X, y) for i in selected_idx]
    return StackedModel(bases, meta, selection, plan)


def predict_stack(model: StackedModel, X) -> tuple[np.ndarray, np.ndarray]:
    proba = model.predict_proba(X)
    return (proba >= 0.5).astype(np.int64), proba
