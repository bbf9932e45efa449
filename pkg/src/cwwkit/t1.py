"""Triangular-T1 group decision pipelines.

Three pipelines share the translate/manipulate/retranslate skeleton:

* plain mean of the voters' tri-tuples,
* weighted variant that multiplies each tri-tuple by a linguistic
  weight tri-tuple before averaging,
* paired-channel variant that carries a non-membership tri-tuple next
  to every membership tri-tuple and retranslates both channels.

Retranslation picks the term whose tri-tuple minimises the weighted
Euclidean distance over the three defining points; exact ties resolve
to the smallest index so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, IndexOutOfTermSet, LengthMismatch
from .terms import (
    RetranslationWeights,
    TermSet,
    TriTuple,
    check_indices,
    tri_product,
    uniform_partition,
)


@dataclass(frozen=True)
class IfsTriPair:
    """Membership and non-membership tri-tuples of one linguistic value."""

    membership: TriTuple
    non_membership: TriTuple


def epcm_translate(prefs, ts: TermSet) -> list[TriTuple]:
    """Map term indices to their tri-tuples on `ts`'s uniform partition."""
    if len(prefs) == 0:
        raise EmptyInput("no preferences given")
    idx = check_indices(prefs, ts)
    part = uniform_partition(ts)
    return [part[k] for k in idx]


def epcm_manipulate(tuples) -> TriTuple:
    """Component-wise arithmetic mean of tri-tuples."""
    if len(tuples) == 0:
        raise EmptyInput("nothing to aggregate")
    arr = np.array([t.as_array() for t in tuples])
    l, m, r = arr.mean(axis=0)
    return TriTuple(float(l), float(m), float(r))


def euclidean_retranslate(c: TriTuple, ts: TermSet, w: RetranslationWeights | None = None) -> int:
    """Index of the term closest to `c` under the weighted Euclidean distance.

    Distances weight the (l, m, r) components by (P1, P2, P3).  The
    collective tri-tuple may lie outside the scale (weighted pipelines can
    push it there); distances are still taken as-is.
    """
    w = w or RetranslationWeights()
    part = uniform_partition(ts)
    dists = [
        w.p1 * (t.l - c.l) ** 2 + w.p2 * (t.m - c.m) ** 2 + w.p3 * (t.r - c.r) ** 2
        for t in part
    ]
    return int(np.argmin(dists))


def epcm_run(prefs, ts: TermSet, w: RetranslationWeights | None = None) -> int:
    """Full unweighted pipeline: translate, average, retranslate."""
    return euclidean_retranslate(epcm_manipulate(epcm_translate(prefs, ts)), ts, w)


def aepcm_run(
    prefs,
    weights,
    ts: TermSet,
    w: RetranslationWeights | None = None,
    weight_ts: TermSet | None = None,
) -> int:
    """Weighted pipeline: per-voter tri-tuple product, mean, retranslate.

    `weights` are term indices; their tri-tuples come from the uniform
    partition of `weight_ts` when given, else of `ts` itself.  Weights are
    not renormalised: the mean divides by the voter count.
    """
    c = aepcm_collective(prefs, weights, ts, weight_ts)
    return euclidean_retranslate(c, ts, w)


def aepcm_collective(prefs, weights, ts, weight_ts=None) -> TriTuple:
    if len(prefs) == 0:
        raise EmptyInput("no preferences given")
    if len(prefs) != len(weights):
        raise LengthMismatch(f"{len(prefs)} preferences vs {len(weights)} weights")
    pref_tuples = epcm_translate(prefs, ts)
    weight_tuples = epcm_translate(weights, weight_ts or ts)
    products = [tri_product(p, q) for p, q in zip(pref_tuples, weight_tuples)]
    return epcm_manipulate(products)


def ifs_nonmembership(idx: int, ts: TermSet) -> TriTuple:
    """Non-membership tri-tuple of term `idx`: mean of all other terms."""
    if not 0 <= idx <= ts.g:
        raise IndexOutOfTermSet(f"index {idx} outside term set")
    part = uniform_partition(ts)
    others = [t for j, t in enumerate(part) if j != idx]
    return epcm_manipulate(others)


def ifs_pair(idx: int, ts: TermSet) -> IfsTriPair:
    part = uniform_partition(ts)
    return IfsTriPair(part[idx], ifs_nonmembership(idx, ts))


def ifscm_run(
    prefs,
    weights,
    ts: TermSet,
    w: RetranslationWeights | None = None,
    weight_ts: TermSet | None = None,
) -> tuple[int, int]:
    """Paired-channel weighted pipeline.

    Each preference and each weight turns into a membership/non-membership
    tri-tuple pair; the channels are multiplied, averaged and retranslated
    independently.  Returns (membership term, non-membership term).
    """
    c_mem, c_non = ifscm_collective(prefs, weights, ts, weight_ts)
    return euclidean_retranslate(c_mem, ts, w), euclidean_retranslate(c_non, ts, w)


def ifscm_collective(prefs, weights, ts, weight_ts=None) -> tuple[TriTuple, TriTuple]:
    if len(prefs) == 0:
        raise EmptyInput("no preferences given")
    if len(prefs) != len(weights):
        raise LengthMismatch(f"{len(prefs)} preferences vs {len(weights)} weights")
    wts = weight_ts or ts
    pref_idx = check_indices(prefs, ts)
    weight_idx = check_indices(weights, wts, what="weight")
    pref_pairs = [ifs_pair(i, ts) for i in pref_idx]
    weight_pairs = [ifs_pair(i, wts) for i in weight_idx]
    mem = [tri_product(p.membership, q.membership) for p, q in zip(pref_pairs, weight_pairs)]
    non = [
        tri_product(p.non_membership, q.non_membership)
        for p, q in zip(pref_pairs, weight_pairs)
    ]
    return epcm_manipulate(mem), epcm_manipulate(non)
