"""Confusion counts, macro-averaged P/R/F1, and the k-fold CV driver.

Metrics are computed per class and averaged unweighted (macro).  All
0/0 ratios are defined as 0.  Report cells follow the ``NN.NN(+/- N.NN)``
convention: percent scale, two decimals, sample standard deviation
across folds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from postsift.corpus import Dataset, FoldPlan
from postsift.pipeline import Pipeline

_METRICS = ("macro_precision", "macro_recall", "macro_f1")


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 counts indexed [true][predicted]; class 1 = Informative."""

    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def confusion(y_true: Sequence[int], y_pred: Sequence[int]) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError(
            f"length mismatch: {y_true.shape[0]} true vs {y_pred.shape[0]} predicted")
    if y_true.size == 0:
        raise ValueError("cannot build a confusion matrix from zero records")
    counts = np.zeros((2, 2), dtype=np.int64)
    for t, p in ((0, 0), (0, 1), (1, 0), (1, 1)):
        counts[t, p] = int(np.sum((y_true == t) & (y_pred == p)))
    return ConfusionMatrix(counts)


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


@dataclass(frozen=True)
class MacroMetrics:
    """Per-class and macro-averaged precision/recall/F1."""

    precision: tuple[float, float]  # (class 0, class 1)
    recall: tuple[float, float]
    f1: tuple[float, float]
    macro_precision: float
    macro_recall: float
    macro_f1: float

    def value(self, metric: str) -> float:
        return getattr(self, metric)


def macro_metrics(cm: ConfusionMatrix) -> MacroMetrics:
    if cm.total == 0:
        raise ValueError("empty confusion matrix")
    precision, recall, f1 = [], [], []
    for c in (0, 1):
        tp = float(cm.counts[c, c])
        fp = float(cm.counts[1 - c, c])
        fn = float(cm.counts[c, 1 - c])
        p = _ratio(tp, tp + fp)
        r = _ratio(tp, tp + fn)
        precision.append(p)
        recall.append(r)
        f1.append(_ratio(2.0 * p * r, p + r))
    return MacroMetrics(
        precision=tuple(precision), recall=tuple(recall), f1=tuple(f1),
        macro_precision=(precision[0] + precision[1]) / 2.0,
        macro_recall=(recall[0] + recall[1]) / 2.0,
        macro_f1=(f1[0] + f1[1]) / 2.0)


@dataclass
class CVReport:
    """Per-fold macro metrics plus aggregation and run metadata."""

    pipeline: str
    dataset: str
    k: int
    seed: int
    fold_metrics: list[MacroMetrics]
    failures: list[tuple[int, str]] = field(default_factory=list)

    def values(self, metric: str) -> np.ndarray:
        return np.array([m.value(metric) for m in self.fold_metrics])

    def mean(self, metric: str) -> float:
        vals = self.values(metric)
        return float(np.mean(vals)) if len(vals) else float("nan")

    def std(self, metric: str) -> float:
        """Sample standard deviation; 0 when fewer than two folds."""
        vals = self.values(metric)
        return float(np.std(vals, ddof=1)) if len(vals) >= 2 else 0.0

    def cell(self, metric: str = "macro_f1") -> str:
        return format_cell(self.mean(metric), self.std(metric))


def format_cell(mean: float, std: float) -> str:
    """Percent-scale report cell: ``84.41(+/- 0.01)``."""
    return f"{100.0 * mean:.2f}(+/- {100.0 * std:.2f})"


def cross_validate(dataset: Dataset, fold_plan: FoldPlan,
                   pipeline: Pipeline, seed: int = 0) -> CVReport:
    """Train on k-1 folds and evaluate the held-out fold, k times.

    A fold whose training portion holds a single class is recorded as a
    failure and excluded from the aggregates.
    """
    prepared = pipeline.prepare(dataset)
    y = prepared.y
    fold_metrics: list[MacroMetrics] = []
    failures: list[tuple[int, str]] = []
    for fold in range(fold_plan.k):
        train_idx = fold_plan.train_indices(fold)
        eval_idx = fold_plan.fold_indices(fold)
        if len(np.unique(y[train_idx])) < 2:
            failures.append((fold, "single-class training folds"))
            continue
        try:
            y_pred = pipeline.run_fold(prepared, train_idx, eval_idx)
        except ValueError as exc:
            failures.append((fold, str(exc)))
            continue
        fold_metrics.append(macro_metrics(confusion(y[eval_idx], y_pred)))
    return CVReport(pipeline=pipeline.name, dataset=dataset.name,
                    k=fold_plan.k, seed=seed, fold_metrics=fold_metrics,
                    failures=failures)


# -- report files ---------------------------------------------------------

def write_report(path: str | Path, report: CVReport) -> None:
    """Machine-readable TSV: pipeline, dataset, metric, mean, std, folds."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#cvreport k={report.k} seed={report.seed}\n")
        for fold, reason in report.failures:
            fh.write(f"#failed fold={fold} reason={reason}\n")
        fh.write("pipeline\tdataset\tmetric\tmean\tstd\tfolds\n")
        for metric in _METRICS:
            folds = ",".join(format(v, ".17g") for v in report.values(metric))
            fh.write(f"{report.pipeline}\t{report.dataset}\t{metric}\t"
                     f"{format(report.mean(metric), '.17g')}\t"
                     f"{format(report.std(metric), '.17g')}\t{folds}\n")


@dataclass(frozen=True)
class ReportRow:
    """One metric row parsed back from a report file."""

    pipeline: str
    dataset: str
    metric: str
    mean: float
    std: float
    folds: tuple[float, ...]


def read_report(path: str | Path) -> list[ReportRow]:
    path = Path(path)
    rows: list[ReportRow] = []
    with open(path, encoding="utf-8") as fh:
        saw_header = False
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if not saw_header:
                if parts != ["pipeline", "dataset", "metric", "mean", "std", "folds"]:
                    raise ValueError(f"{path}:{lineno}: not a report header")
                saw_header = True
                continue
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 columns")
            try:
                folds = tuple(float(v) for v in parts[5].split(",")) \
                    if parts[5] else ()
                rows.append(ReportRow(parts[0], parts[1], parts[2],
                                      float(parts[3]), float(parts[4]), folds))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric cell") from None
    if not rows:
        raise ValueError(f"{path}: no report rows found")
    return rows


def render_report(rows: Sequence[ReportRow], metric: str = "macro_f1") -> str:
    """Aligned table: pipelines as rows, datasets as columns, metric cells.

    Conflicting duplicate (pipeline, dataset) entries raise; exact
    duplicates collapse.
    """
    if not rows:
        raise ValueError("no reports to render")
    cells: dict[tuple[str, str], str] = {}
    for row in rows:
        if row.metric != metric:
            continue
        key = (row.pipeline, row.dataset)
        cell = format_cell(row.mean, row.std)
        if key in cells and cells[key] != cell:
            raise ValueError(
                f"conflicting report cells for pipeline={row.pipeline!r} "
                f"dataset={row.dataset!r}")
        cells[key] = cell
    if not cells:
        raise ValueError(f"no rows carry metric {metric!r}")
    pipelines = sorted({p for p, _ in cells})
    datasets = sorted({d for _, d in cells})
    headers = ["pipeline"] + datasets
    table = [headers]
    for pipe in pipelines:
        table.append([pipe] + [cells.get((pipe, ds), "-") for ds in datasets])
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    lines = []
    for r, row_cells in enumerate(table):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row_cells, widths)).rstrip())
        if r == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
