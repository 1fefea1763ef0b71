"""Descriptive statistics: correlations with the target and data summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .schema import FEATURE_NAMES, FEATURE_SPECS, NOMINAL, NUMERIC

DEFAULT_BINS = 20


@dataclass(frozen=True)
class CorrelationTable:
    entries: dict[str, float]
    undefined: frozenset[str]

    def to_dict(self) -> dict:
        return {
            "entries": {k: (None if k in self.undefined else v) for k, v in self.entries.items()},
            "undefined": sorted(self.undefined),
        }


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Plain Pearson coefficient; NaN when either side is constant."""
    xd = x - x.mean()
    yd = y - y.mean()
    denom = np.sqrt((xd * xd).sum() * (yd * yd).sum())
    if denom == 0.0:
        return float("nan")
    return float((xd * yd).sum() / denom)


def correlation_with_target(ds: Dataset) -> CorrelationTable:
    """Pearson coefficient of every feature against the 0/1 target.

    Nominal codes are treated as plain integers. Meant to run on the raw,
    pre-cleaning table. Constant columns are flagged undefined.
    """
    y = ds.y.astype(np.float64)
    entries: dict[str, float] = {}
    undefined = set()
    for idx, name in enumerate(FEATURE_NAMES):
        r = _pearson(ds.X[:, idx], y)
        entries[name] = r
        if np.isnan(r):
            undefined.add(name)
    return CorrelationTable(entries, frozenset(undefined))


def correlation_matrix(ds: Dataset) -> tuple[tuple[str, ...], np.ndarray]:
    """Symmetric Pearson matrix over the 11 features plus the target.

    Unit diagonal by definition; undefined entries (a constant column) are
    NaN off the diagonal.
    """
    names = FEATURE_NAMES + ("target",)
    cols = np.column_stack([ds.X, ds.y.astype(np.float64)])
    k = cols.shape[1]
    M = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            M[i, j] = M[j, i] = _pearson(cols[:, i], cols[:, j])
    return names, M


@dataclass(frozen=True)
class Histogram:
    edges: tuple[float, ...]
    counts_by_class: dict[int, tuple[int, ...]]


@dataclass(frozen=True)
class SummaryReport:
    n_rows: int
    class_counts: dict[int, int]
    nominal_counts: dict[str, dict[int, dict[int, int]]]  # feature -> code -> class -> count
    histograms: dict[str, Histogram]
    slope_by_age_decade: dict[int, dict[int, dict[int, int]]]  # decade -> slope -> class -> count

    def to_dict(self) -> dict:
        return {
            "n_rows": self.n_rows,
            "class_counts": {str(k): v for k, v in self.class_counts.items()},
            "nominal_counts": {
                f: {str(code): {str(c): n for c, n in by_class.items()}
                    for code, by_class in codes.items()}
                for f, codes in self.nominal_counts.items()
            },
            "histograms": {
                f: {"edges": list(h.edges),
                    "counts": {str(c): list(v) for c, v in h.counts_by_class.items()}}
                for f, h in self.histograms.items()
            },
            "slope_by_age_decade": {
                str(d): {str(s): {str(c): n for c, n in by_class.items()}
                         for s, by_class in slopes.items()}
                for d, slopes in self.slope_by_age_decade.items()
            },
        }


def summarize(ds: Dataset, bins: int = DEFAULT_BINS) -> SummaryReport:
    """Class counts, per-class nominal code counts, per-class histograms of
    numeric features, and the st_slope-by-target table per age decade."""
    y = ds.y
    classes = (0, 1)
    class_counts = {c: int((y == c).sum()) for c in classes}

    nominal_counts: dict[str, dict[int, dict[int, int]]] = {}
    histograms: dict[str, Histogram] = {}
    for idx, spec in enumerate(FEATURE_SPECS):
        col = ds.X[:, idx]
        if spec.kind == NOMINAL:
            table: dict[int, dict[int, int]] = {}
            for code in sorted({int(v) for v in col}):
                table[code] = {c: int(((col == code) & (y == c)).sum()) for c in classes}
            nominal_counts[spec.name] = table
        elif spec.kind == NUMERIC:
            lo, hi = float(col.min()), float(col.max())
            if lo == hi:
                edges = np.array([lo, lo + 1.0])
            else:
                edges = np.linspace(lo, hi, bins + 1)
            counts = {
                c: tuple(int(v) for v in np.histogram(col[y == c], bins=edges)[0])
                for c in classes
            }
            histograms[spec.name] = Histogram(tuple(float(e) for e in edges), counts)

    slope = ds.column("st_slope").astype(int)
    decade = (ds.column("age") // 10).astype(int) * 10
    slope_by_decade: dict[int, dict[int, dict[int, int]]] = {}
    for d in sorted(set(decade.tolist())):
        per_slope: dict[int, dict[int, int]] = {}
        for s in sorted(set(slope.tolist())):
            sel = (decade == d) & (slope == s)
            per_slope[s] = {c: int((sel & (y == c)).sum()) for c in classes}
        slope_by_decade[d] = per_slope

    return SummaryReport(ds.n_rows, class_counts, nominal_counts, histograms, slope_by_decade)
