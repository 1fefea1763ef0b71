"""Binary-classification metrics, ROC and precision-recall curves.

Scalar metrics come in two flavours of "AUC": ``balanced_auc`` is the
single-threshold formula (sensitivity + specificity) / 2 used by the
evaluation tables, while ``RocCurve.area`` is the usual trapezoidal area
under the threshold-swept curve. Both are reported, labelled distinctly.

Percentages in report tables are truncated (not rounded) to two decimals;
full precision is kept internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

from .errors import DataError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            v = getattr(self, name)
            if v < 0 or v != int(v):
                raise DataError(f"{name} must be a non-negative integer, got {v}")
        if self.total < 1:
            raise DataError("confusion matrix must count at least one row")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def confusion_matrix(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise DataError("label vectors must be 1-D and of equal length")
    if y_true.size < 1:
        raise DataError("need at least one scored row")
    for arr, name in ((y_true, "y_true"), (y_pred, "y_pred")):
        if not np.isin(arr, (0, 1)).all():
            raise DataError(f"{name} contains non-binary labels")
    return ConfusionMatrix(
        tp=int(((y_true == 1) & (y_pred == 1)).sum()),
        tn=int(((y_true == 0) & (y_pred == 0)).sum()),
        fp=int(((y_true == 0) & (y_pred == 1)).sum()),
        fn=int(((y_true == 1) & (y_pred == 0)).sum()),
    )


METRIC_NAMES = ("accuracy", "precision", "sensitivity", "specificity", "f1", "balanced_auc", "mcc")


@dataclass(frozen=True)
class MetricReport:
    accuracy: float | None
    precision: float | None
    sensitivity: float | None
    specificity: float | None
    f1: float | None
    balanced_auc: float | None
    mcc: float | None
    undefined: frozenset[str]

    def to_dict(self) -> dict:
        d = {name: getattr(self, name) for name in METRIC_NAMES}
        d["undefined"] = sorted(self.undefined)
        return d

    def display_row(self) -> dict[str, str]:
        """Two-decimal percentage strings (truncated), '-' when undefined."""
        out = {}
        for name in METRIC_NAMES:
            v = getattr(self, name)
            out[name] = "-" if v is None else f"{truncate_percent(v):.2f}"
        return out


def truncate_percent(value: float, decimals: int = 2) -> float:
    """100*value truncated to `decimals` places (report-table convention)."""
    scale = 10 ** decimals
    return math.floor(value * 100 * scale + 1e-9) / scale


def _ratio(num: int, den: int) -> float | None:
    return None if den == 0 else num / den


def metric_report(cm: ConfusionMatrix) -> MetricReport:
    """Evaluate the scalar metric suite; zero denominators are flagged
    undefined instead of raising."""
    tp, tn, fp, fn = cm.tp, cm.tn, cm.fp, cm.fn
    sensitivity = _ratio(tp, tp + fn)
    specificity = _ratio(tn, tn + fp)
    accuracy = (tp + tn) / cm.total
    precision = _ratio(tp, tp + fp)
    if precision is not None and sensitivity is not None and precision + sensitivity > 0:
        f1 = 2 * precision * sensitivity / (precision + sensitivity)
    else:
        f1 = None
    if sensitivity is not None and specificity is not None:
        balanced_auc = (sensitivity + specificity) / 2
    else:
        balanced_auc = None
    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    mcc = None if denom == 0 else (tp * tn - fp * fn) / math.sqrt(denom)

    values = {
        "accuracy": accuracy, "precision": precision, "sensitivity": sensitivity,
        "specificity": specificity, "f1": f1, "balanced_auc": balanced_auc, "mcc": mcc,
    }
    undefined = frozenset(k for k, v in values.items() if v is None)
    return MetricReport(undefined=undefined, **values)


@dataclass(frozen=True)
class RocCurve:
    points: tuple[tuple[float, float], ...]  # (fpr, tpr), threshold descending
    area: float


@dataclass(frozen=True)
class PrCurve:
    points: tuple[tuple[float, float], ...]  # (recall, precision), threshold descending
    area: float
    average_precision: float


def _check_scores(y_true, scores):
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=np.float64)
    if y_true.shape != scores.shape or y_true.ndim != 1 or y_true.size == 0:
        raise DataError("labels and scores must be equal-length 1-D vectors")
    if not np.isin(y_true, (0, 1)).all():
        raise DataError("labels must be binary")
    if (scores < 0).any() or (scores > 1).any():
        raise DataError("scores must lie in [0, 1]")
    return y_true, scores


def roc_curve(y_true, scores) -> RocCurve:
    """Operating points swept over unique scores descending, with (0,0) and
    (1,1) sentinels; tied scores collapse to one point. Trapezoidal area."""
    y_true, scores = _check_scores(y_true, scores)
    pos = int((y_true == 1).sum())
    neg = y_true.size - pos
    if pos == 0 or neg == 0:
        raise DataError("ROC needs both classes present")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_y = y_true[order]
    cum_tp = np.cumsum(sorted_y == 1)
    cum_fp = np.cumsum(sorted_y == 0)
    # Keep only the last index of each tied-score run.
    last_of_run = np.nonzero(np.append(sorted_scores[1:] != sorted_scores[:-1], True))[0]

    points = [(0.0, 0.0)]
    for i in last_of_run:
        points.append((cum_fp[i] / neg, cum_tp[i] / pos))
    if points[-1] != (1.0, 1.0):
        points.append((1.0, 1.0))
    pts = np.array(points)
    area = float(_trapezoid(pts[:, 1], pts[:, 0]))
    return RocCurve(tuple((float(a), float(b)) for a, b in points), area)


def pr_curve(y_true, scores) -> PrCurve:
    """Precision-recall points at each unique descending threshold.

    average_precision is the step-sum over recall increments; area is the
    trapezoid over the swept points.
    """
    y_true, scores = _check_scores(y_true, scores)
    pos = int((y_true == 1).sum())
    if pos == 0:
        raise DataError("PR curve needs at least one positive row")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_y = y_true[order]
    cum_tp = np.cumsum(sorted_y == 1)
    predicted = np.arange(1, y_true.size + 1)
    last_of_run = np.nonzero(np.append(sorted_scores[1:] != sorted_scores[:-1], True))[0]

    points = []
    ap = 0.0
    prev_recall = 0.0
    for i in last_of_run:
        recall = cum_tp[i] / pos
        precision = cum_tp[i] / predicted[i]
        points.append((float(recall), float(precision)))
        ap += (recall - prev_recall) * precision
        prev_recall = recall
    pts = np.array(points)
    if len(points) > 1:
        area = float(_trapezoid(pts[:, 1], pts[:, 0]))
    else:
        area = float(points[0][1])
    return PrCurve(tuple(points), area, float(ap))
