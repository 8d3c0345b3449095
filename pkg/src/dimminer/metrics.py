"""Clustering evaluation: accuracy, the Adjusted Rand Index, and the
supervised cross-validation reference point.

Accuracy for two clusters is the better of the two cluster-to-class
bijections, as a percentage. ARI is the chance-corrected Rand index
computed from the contingency table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

import numpy as np

from .cluster import ClusterRun, Partition
from .corpus import Corpus
from .dimension import train_margin_classifier
from .errors import MetricError


def accuracy(p: Partition, gold: dict[str, int], subset=None) -> float:
    """Percent agreement with `gold` under the best cluster/class bijection.

    `gold` maps document ids to one of exactly two class labels; when
    `subset` is given only those documents are scored.
    """
    scope = list(subset) if subset is not None else list(p.ids)
    if not scope:
        raise MetricError("empty evaluation scope")
    missing = [d for d in scope if d not in gold]
    if missing:
        raise MetricError(f"missing gold labels for {len(missing)} documents (first: {missing[0]})")
    classes = sorted(set(gold[d] for d in scope))
    if len(classes) > 2:
        raise MetricError(f"accuracy is defined for 2 gold classes, found {len(classes)}")
    counts = np.zeros((2, 2))
    class_pos = {c: k for k, c in enumerate(classes)}
    for d in scope:
        counts[p.label_of(d), class_pos[gold[d]]] += 1
    straight = counts[0, 0] + (counts[1, 1] if len(classes) == 2 else 0)
    crossed = (counts[0, 1] if len(classes) == 2 else 0) + counts[1, 0]
    return 100.0 * max(straight, crossed) / len(scope)


def ari(u: Partition, v: Partition) -> float:
    """Adjusted Rand Index between two partitions of the same documents."""
    if set(u.ids) != set(v.ids):
        raise MetricError("partitions cover different document sets")
    pairs = [(u.label_of(d), v.label_of(d)) for d in u.ids]
    u_labels = sorted(set(a for a, _ in pairs))
    v_labels = sorted(set(b for _, b in pairs))
    table = np.zeros((len(u_labels), len(v_labels)), dtype=np.int64)
    u_pos = {c: k for k, c in enumerate(u_labels)}
    v_pos = {c: k for k, c in enumerate(v_labels)}
    for a, b in pairs:
        table[u_pos[a], v_pos[b]] += 1
    n = len(pairs)
    sum_cells = sum(comb(int(c), 2) for c in table.ravel())
    sum_a = sum(comb(int(c), 2) for c in table.sum(axis=1))
    sum_b = sum(comb(int(c), 2) for c in table.sum(axis=0))
    total = comb(n, 2)
    # scale by 2*total so numerator and denominator stay exact integers
    numerator = 2 * total * sum_cells - 2 * sum_a * sum_b
    denominator = total * (sum_a + sum_b) - 2 * sum_a * sum_b
    if denominator == 0:
        return 1.0
    return numerator / denominator


@dataclass
class MetricReport:
    """Accuracy/ARI, optionally aggregated over several clustering runs."""

    accuracy_percent: float
    ari: float
    subset: tuple[str, ...] | None = None
    runs_aggregated: int = 1
    per_run_accuracy: list[float] | None = None
    per_run_ari: list[float] | None = None

    def to_json(self) -> dict:
        return {
            "accuracy_percent": self.accuracy_percent,
            "ari": self.ari,
            "subset_size": len(self.subset) if self.subset is not None else None,
            "runs_aggregated": self.runs_aggregated,
            "per_run_accuracy": self.per_run_accuracy,
            "per_run_ari": self.per_run_ari,
        }

    def to_table(self) -> str:
        rows = [
            ("accuracy (%)", f"{self.accuracy_percent:.2f}"),
            ("ARI", f"{self.ari:.4f}"),
            ("runs aggregated", str(self.runs_aggregated)),
        ]
        if self.subset is not None:
            rows.append(("subset size", str(len(self.subset))))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def gold_partition(gold: dict[str, int]) -> Partition:
    """Wrap a two-class gold labeling as a Partition for ARI computations."""
    ids = tuple(sorted(gold))
    classes = sorted(set(gold.values()))
    if len(classes) != 2:
        raise MetricError(f"expected 2 gold classes, found {len(classes)}")
    assign = np.array([classes.index(gold[d]) for d in ids], dtype=np.int8)
    return Partition(ids=ids, assign=assign, provenance="gold labels")


def report_from_run(run: ClusterRun, gold: dict[str, int], subset=None) -> MetricReport:
    """Mean per-run accuracy/ARI against `gold` (the usual reporting protocol)."""
    gp = gold_partition({d: g for d, g in gold.items() if subset is None or d in set(subset)})
    accs, aris = [], []
    for p in run.per_run_partitions:
        accs.append(accuracy(p, gold, subset=subset))
        if subset is None:
            aris.append(ari(p, gp))
        else:
            sub = set(subset)
            restricted = Partition(
                ids=tuple(d for d in p.ids if d in sub),
                assign=np.array([p.label_of(d) for d in p.ids if d in sub], dtype=np.int8),
                provenance=p.provenance + " (subset)",
            )
            aris.append(ari(restricted, gp))
    return MetricReport(
        accuracy_percent=float(np.mean(accs)),
        ari=float(np.mean(aris)),
        subset=tuple(subset) if subset is not None else None,
        runs_aggregated=run.runs,
        per_run_accuracy=accs,
        per_run_ari=aris,
    )


def supervised_cv(corpus: Corpus, folds: int = 10, c_param: float = 1.0, seed: int = 0) -> float:
    """Mean stratified k-fold accuracy of the margin classifier, in percent."""
    if folds < 2:
        raise MetricError(f"folds must be >= 2, got {folds}")
    gold = corpus.gold_by_id()
    if len(gold) != corpus.n:
        raise MetricError("supervised cross-validation needs gold labels on every document")
    classes = sorted(set(gold.values()))
    if len(classes) != 2:
        raise MetricError(f"expected 2 gold classes, found {len(classes)}")
    sign_of = {classes[0]: -1.0, classes[1]: 1.0}

    rng = np.random.default_rng(seed)
    fold_of = np.empty(corpus.n, dtype=np.int64)
    for cls in classes:
        rows = np.array([corpus.row_of(d) for d in sorted(gold) if gold[d] == cls])
        rng.shuffle(rows)
        fold_of[rows] = np.arange(rows.size) % folds
    y = np.array([sign_of[gold[d]] for d in corpus.ids])

    fold_acc = []
    for f in range(folds):
        test = fold_of == f
        train = ~test
        if not test.any():
            raise MetricError(f"fold {f} is empty; too many folds for {corpus.n} documents")
        y_train = y[train]
        if (y_train == 1.0).all() or (y_train == -1.0).all():
            raise MetricError(f"a class is absent from the training split of fold {f}")
        model = train_margin_classifier(corpus.vectors[train], y_train, c_param=c_param)
        preds = model.predict(corpus.vectors[test])
        fold_acc.append(100.0 * float((preds == y[test]).mean()))
    return float(np.mean(fold_acc))
