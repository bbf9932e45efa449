"""Ordinal aggregation: order-weighted recursion and equivalence-class weights.

Preferences are plain term indices.  Aggregation sorts them in descending
order (weights travel with their preference), then folds pairs from the
right: at every level the head index is combined with the aggregate of the
tail, the head carrying its renormalised weight share and the tail the
remainder.  A two-index combination resolves to

    i_low + round(((w_high - w_low + 1) / 2) * (i_high - i_low))

capped at the highest valid term index, with round(x) = floor(x + 0.5).

The rough-set variant derives the weights instead of asking for them:
voters giving the same term form an equivalence class, every class gets an
equal share, and members split their class's share evenly.
"""

from __future__ import annotations

import math

from .errors import EmptyInput, LengthMismatch
from .terms import TermSet, check_indices

WEIGHT_SUM_TOL = 1e-9


def round_half_up(x: float) -> int:
    """floor(x + 0.5); used everywhere an index is rounded."""
    return math.floor(x + 0.5)


def sort_preferences(prefs) -> list[int]:
    """Stable descending sort of term indices."""
    if len(prefs) == 0:
        raise EmptyInput("no preferences given")
    return sorted((int(p) for p in prefs), reverse=True)


def sort_with_weights(prefs, weights) -> tuple[list[int], list[float]]:
    """Descending sort of (preference, weight) pairs, stable on ties."""
    if len(prefs) == 0:
        raise EmptyInput("no preferences given")
    if len(prefs) != len(weights):
        raise LengthMismatch(f"{len(prefs)} preferences vs {len(weights)} weights")
    order = sorted(range(len(prefs)), key=lambda k: -prefs[k])
    return [int(prefs[k]) for k in order], [float(weights[k]) for k in order]


def check_weights(weights, n):
    if len(weights) != n:
        raise LengthMismatch(f"{n} preferences vs {len(weights)} weights")
    weights = [float(w) for w in weights]
    if any(w < 0 or w > 1 for w in weights):
        raise ValueError("weights must lie in [0, 1]")
    if abs(sum(weights) - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must sum to 1, got {sum(weights)}")
    return weights


def aggregate_pair(i_high: int, i_low: int, w_high: float, w_low: float, g: int) -> int:
    """Combine two term indices into one, weighting the displacement."""
    if i_high < i_low:
        raise ValueError("i_high must not be below i_low")
    shift = round_half_up(((w_high - w_low + 1.0) / 2.0) * (i_high - i_low))
    return min(g, i_low + shift)


def smcm_aggregate(sorted_prefs, weights, ts: TermSet) -> int:
    """Right-fold of the order-weighted recursion over pre-sorted indices.

    `weights` must be aligned with `sorted_prefs` and sum to 1.  Each fold
    step renormalises the remaining suffix mass, so the head weight at
    every level is w_k divided by the suffix sum from k on.
    """
    idx = check_indices(sorted_prefs, ts)
    if any(idx[k] < idx[k + 1] for k in range(len(idx) - 1)):
        raise ValueError("preferences must be sorted in descending order")
    w = check_weights(weights, len(idx))

    acc = idx[-1]
    suffix = w[-1]
    for k in range(len(idx) - 2, -1, -1):
        suffix += w[k]
        if suffix > 0:
            head = w[k] / suffix
        else:
            head = 1.0 / (len(idx) - k)  # zero-mass suffix: fall back to uniform
        acc = aggregate_pair(idx[k], acc, head, 1.0 - head, ts.g)
    return acc


def smcm_run(prefs, weights, ts: TermSet) -> int:
    """Sort preferences (weights travel along) and aggregate."""
    sp, sw = sort_with_weights(prefs, weights)
    return smcm_aggregate(sp, sw, ts)


def rscm_partition(prefs) -> list[tuple[int, int]]:
    """Equivalence classes (term index, count) in first-appearance order."""
    if len(prefs) == 0:
        raise EmptyInput("no preferences given")
    counts: dict[int, int] = {}
    for p in prefs:
        counts[int(p)] = counts.get(int(p), 0) + 1
    return list(counts.items())


def rscm_weights(prefs) -> list[float]:
    """Weight 1/(n_classes * class_size) per voter, aligned with `prefs`."""
    classes = dict(rscm_partition(prefs))
    n = len(classes)
    return [1.0 / (n * classes[int(p)]) for p in prefs]


def rscm_aggregate(prefs, ts: TermSet) -> int:
    """Full rough-set pipeline: derive weights, sort, aggregate."""
    return smcm_run(prefs, rscm_weights(prefs), ts)
