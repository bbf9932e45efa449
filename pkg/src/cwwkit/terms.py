"""Linguistic term sets and triangular type-1 membership machinery.

A term set places g+1 ordered labels on a bounded numeric scale [p, q].
Each label is modelled by a triangular membership function stored as the
tri-tuple (l, m, r) of its support ends and apex.  Apexes are equally
spaced, adjacent triangles share support endpoints and cross at
membership 0.5; the outermost labels degenerate into shoulders (l == m
and m == r respectively).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfTermSet, NegativeOperand


@dataclass(frozen=True)
class TermSet:
    """Ordered linguistic labels t_0..t_g on the scale [scale_min, scale_max]."""

    labels: tuple
    scale_min: float = 0.0
    scale_max: float = 10.0

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise ValueError("term set needs at least two labels")
        if len(set(labels)) != len(labels) or any(not s for s in labels):
            raise ValueError("labels must be distinct and non-empty")
        if not self.scale_min < self.scale_max:
            raise ValueError("scale_min must be below scale_max")

    @property
    def g(self) -> int:
        """Highest term index (cardinality minus one)."""
        return len(self.labels) - 1

    def to_json(self):
        return {"labels": list(self.labels), "scale": [self.scale_min, self.scale_max]}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["labels"]), float(obj["scale"][0]), float(obj["scale"][1]))

    @classmethod
    def numbered(cls, count, scale_min=0.0, scale_max=10.0, prefix="t"):
        """Convenience set with labels t0..t{count-1}."""
        return cls(tuple(f"{prefix}{j}" for j in range(count)), scale_min, scale_max)


@dataclass(frozen=True)
class TriTuple:
    """Support ends and apex (l, m, r) of a triangular T1 membership function."""

    l: float
    m: float
    r: float

    def __post_init__(self):
        if not (self.l <= self.m <= self.r):
            raise ValueError(f"tri-tuple out of order: {self}")

    def as_array(self):
        return np.array([self.l, self.m, self.r], dtype=float)


@dataclass(frozen=True)
class RetranslationWeights:
    """Component weights (P1, P2, P3) of the retranslation distance."""

    p1: float = 0.2
    p2: float = 0.6
    p3: float = 0.2

    def __post_init__(self):
        if self.p1 < 0 or self.p2 < 0 or self.p3 < 0:
            raise ValueError("weights must be non-negative")
        if self.p1 == self.p2 == self.p3 == 0:
            raise ValueError("weights must not all be zero")


def uniform_partition(term_set: TermSet) -> list[TriTuple]:
    """Triangular tri-tuples for every label of `term_set`.

    Apexes m_j are equally spaced from scale_min to scale_max; each
    triangle's support ends at the neighbouring apexes, so adjacent
    functions cross at membership 0.5.
    """
    apexes = np.linspace(term_set.scale_min, term_set.scale_max, term_set.g + 1)
    out = []
    for j, m in enumerate(apexes):
        l = apexes[j - 1] if j > 0 else term_set.scale_min
        r = apexes[j + 1] if j < term_set.g else term_set.scale_max
        out.append(TriTuple(float(l), float(m), float(r)))
    return out


def membership(mf: TriTuple, x: float) -> float:
    """Membership of `x` in the triangular function `mf`, in [0, 1]."""
    if x < mf.l or x > mf.r:
        return 0.0
    if x == mf.m:
        return 1.0
    if x < mf.m:
        return (x - mf.l) / (mf.m - mf.l)
    return (mf.r - x) / (mf.r - mf.m)


def alpha_cut(mf: TriTuple, alpha: float) -> tuple[float, float]:
    """Closed interval where membership in `mf` is at least `alpha`."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    lo = mf.l + alpha * (mf.m - mf.l)
    hi = mf.r - alpha * (mf.r - mf.m)
    # guard the hi >= lo contract against last-ulp rounding at alpha ~ 1
    return lo, max(lo, hi)


def tri_product(a: TriTuple, b: TriTuple) -> TriTuple:
    """Component-wise product of two non-negative tri-tuples."""
    if a.l < 0 or b.l < 0:
        raise NegativeOperand(f"tri_product needs non-negative operands: {a}, {b}")
    return TriTuple(a.l * b.l, a.m * b.m, a.r * b.r)


def check_indices(entries, term_set: TermSet, what="preference"):
    """Validate a sequence of term indices against `term_set`; returns a list."""
    entries = list(entries)
    for k, idx in enumerate(entries):
        if int(idx) != idx:
            raise IndexOutOfTermSet(f"{what} {k} is not an integer index: {idx!r}")
        if not 0 <= idx <= term_set.g:
            raise IndexOutOfTermSet(
                f"{what} {k} = {idx} outside term set of cardinality {term_set.g + 1}"
            )
    return [int(i) for i in entries]
