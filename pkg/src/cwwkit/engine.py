"""Aggregation engine and decoder of the perceptual computer.

Operands may be crisp numbers, closed intervals, triangular T1 sets or
IT2 word models.  The richest operand kind picks the operator: plain
intervals aggregate with the interval weighted average, any T1 operand
promotes the computation to the fuzzy weighted average (the IWA applied
per alpha level), and any IT2 operand promotes it to the linguistic
weighted average (one FWA for the upper envelope, one for the lower).

The LWA output is refitted to a nine-parameter word model by least
squares over the alpha-level corners so it can be decoded; the raw
level envelopes stay attached for loss auditing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codebook import Codebook
from .errors import EmptyInput, LengthMismatch, ZeroWeightMass
from .it2 import (
    INTERIOR,
    It2Fou,
    LEFT_SHOULDER,
    RIGHT_SHOULDER,
    Trapezoid,
    jaccard_similarity,
    rank_by_centroid,
    weighted_average_bounds,
)
from .terms import TriTuple, alpha_cut

IWA, FWA, LWA = "IWA", "FWA", "LWA"

DEFAULT_LEVELS = 11


def _kind(op) -> str:
    if isinstance(op, It2Fou):
        return "it2"
    if isinstance(op, TriTuple):
        return "t1"
    if isinstance(op, (int, float)):
        return "interval"
    if isinstance(op, (tuple, list)) and len(op) == 2:
        return "interval"
    raise TypeError(f"unsupported operand: {op!r}")


@dataclass(frozen=True)
class AggregationInput:
    values: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "weights", tuple(self.weights))
        if len(self.values) == 0:
            raise EmptyInput("no operands")
        if len(self.values) != len(self.weights):
            raise LengthMismatch(f"{len(self.values)} values vs {len(self.weights)} weights")
        for op in self.values + self.weights:
            _kind(op)


def select_operator(inp: AggregationInput) -> str:
    """Pick IWA, FWA or LWA from the richest operand kind present."""
    kinds = {_kind(op) for op in inp.values + inp.weights}
    if "it2" in kinds:
        return LWA
    if "t1" in kinds:
        return FWA
    return IWA


def _as_interval(op):
    if isinstance(op, (int, float)):
        return float(op), float(op)
    lo, hi = float(op[0]), float(op[1])
    if lo > hi:
        raise ValueError(f"interval reversed: {op!r}")
    return lo, hi


def iwa(values, weights, algorithm: str = "eiasc") -> tuple[float, float]:
    """Tight range of the weighted average over interval operands."""
    if len(values) == 0:
        raise EmptyInput("no operands")
    if len(values) != len(weights):
        raise LengthMismatch(f"{len(values)} values vs {len(weights)} weights")
    x = [_as_interval(v) for v in values]
    w = [_as_interval(v) for v in weights]
    w_lo = np.array([p[0] for p in w])
    w_hi = np.array([p[1] for p in w])
    if np.any(w_lo < 0):
        raise ValueError("weight intervals must be non-negative")
    if w_hi.sum() <= 0:
        raise ZeroWeightMass("all weight intervals are zero")
    x_lo = np.array([p[0] for p in x])
    x_hi = np.array([p[1] for p in x])
    y_l = weighted_average_bounds(x_lo, w_lo, w_hi, algorithm)[0]
    y_r = weighted_average_bounds(x_hi, w_lo, w_hi, algorithm)[1]
    return y_l, y_r


@dataclass(frozen=True)
class AlphaProfile:
    """Interval-valued function of the membership level (a sampled T1 set)."""

    levels: tuple
    los: tuple
    his: tuple
    height: float = 1.0

    def cuts(self):
        return list(zip(self.levels, self.los, self.his))


def _t1_cut(op, alpha):
    if isinstance(op, TriTuple):
        return alpha_cut(op, alpha)
    return _as_interval(op)


def fwa(values, weights, levels: int = DEFAULT_LEVELS, algorithm: str = "eiasc") -> AlphaProfile:
    """Fuzzy weighted average: IWA applied per alpha level."""
    if len(values) == 0:
        raise EmptyInput("no operands")
    if len(values) != len(weights):
        raise LengthMismatch(f"{len(values)} values vs {len(weights)} weights")
    grid = np.linspace(0.0, 1.0, levels)
    los, his = [], []
    for alpha in grid:
        vv = [_t1_cut(v, alpha) for v in values]
        ww = [_t1_cut(w, alpha) for w in weights]
        lo, hi = iwa(vv, ww, algorithm)
        los.append(lo)
        his.append(hi)
    return AlphaProfile(tuple(grid.tolist()), tuple(los), tuple(his), 1.0)


def _fit_trapezoid(profile: AlphaProfile) -> Trapezoid:
    t = np.asarray(profile.levels) / profile.height
    lo = np.asarray(profile.los)
    hi = np.asarray(profile.his)
    slope_lo, a = np.polyfit(t, lo, 1)
    slope_hi, d = np.polyfit(t, hi, 1)
    b = a + slope_lo
    c = d + slope_hi
    b = min(max(a, b), d)
    c = max(min(c, d), a)
    if b > c:
        b = c = 0.5 * (b + c)
    return Trapezoid(float(a), float(b), float(c), float(d), profile.height)


def _result_class(umf: Trapezoid) -> str:
    if umf.a == umf.b and umf.c < umf.d:
        return LEFT_SHOULDER
    if umf.c == umf.d and umf.a < umf.b:
        return RIGHT_SHOULDER
    return INTERIOR


def _as_fou(op) -> It2Fou:
    if isinstance(op, It2Fou):
        return op
    if isinstance(op, TriTuple):
        return It2Fou.type1(op.l, op.m, op.m, op.r)
    lo, hi = _as_interval(op)
    return It2Fou.type1(lo, lo, hi, hi)


@dataclass(frozen=True)
class LwaResult:
    """Fitted word model plus the raw level envelopes it was fitted to."""

    fou: It2Fou
    umf_profile: AlphaProfile
    lmf_profile: AlphaProfile


def lwa(values, weights, levels: int = DEFAULT_LEVELS, algorithm: str = "eiasc") -> LwaResult:
    """Linguistic weighted average of IT2 operands.

    Upper envelope: FWA of the operand UMFs with the weight UMFs; lower
    envelope likewise from the LMFs, sampled up to the smallest LMF
    height.  Weight supports must be strictly positive so the quotient
    is defined at every level.
    """
    if len(values) == 0:
        raise EmptyInput("no operands")
    if len(values) != len(weights):
        raise LengthMismatch(f"{len(values)} values vs {len(weights)} weights")
    vals = [_as_fou(v) for v in values]
    wts = [_as_fou(w) for w in weights]
    for w in wts:
        if w.umf.a <= 0:
            raise ZeroWeightMass("weight FOU supports must be strictly positive")

    h_min = min(f.lmf.height for f in vals + wts)
    u_levels = np.linspace(0.0, 1.0, levels)
    l_levels = np.linspace(0.0, h_min, levels)

    def profile(level_grid, pick):
        los, his = [], []
        for lv in level_grid:
            vv = [pick(f).cut(lv) for f in vals]
            ww = [pick(f).cut(lv) for f in wts]
            lo, hi = iwa(vv, ww, algorithm)
            los.append(lo)
            his.append(hi)
        height = float(level_grid[-1]) if level_grid[-1] > 0 else 1.0
        return AlphaProfile(tuple(level_grid.tolist()), tuple(los), tuple(his), height)

    umf_profile = profile(u_levels, lambda f: f.umf)
    lmf_profile = profile(l_levels, lambda f: f.lmf)

    umf = _fit_trapezoid(umf_profile)
    lmf = _fit_trapezoid(lmf_profile)
    fou = _assemble(umf, lmf)
    return LwaResult(fou, umf_profile, lmf_profile)


def _assemble(umf: Trapezoid, lmf: Trapezoid) -> It2Fou:
    # clamp the fitted LMF into the fitted UMF, then shrink fractionally
    # if leg wobble from the least-squares fit still crosses the UMF
    e = max(lmf.a, umf.a)
    h2 = min(lmf.d, umf.d)
    f = min(max(lmf.b, e), h2)
    g2 = max(min(lmf.c, h2), f)
    height = lmf.height
    for shrink in (0.0, 1e-9, 1e-6, 1e-3):
        try:
            cand = Trapezoid(
                e + shrink * (f - e),
                f,
                g2,
                h2 - shrink * (h2 - g2),
                max(height * (1.0 - shrink), 1e-12),
            )
            return It2Fou(umf, cand, _result_class(umf))
        except ValueError:
            continue
    raise ValueError("could not assemble a valid word model from the fitted envelopes")


@dataclass(frozen=True)
class DecodeResult:
    word: str
    scores: tuple  # (word, similarity) per codebook entry, codebook order
    low_confidence: bool


def decode_word(y: It2Fou, cb: Codebook, n_grid: int = 200) -> DecodeResult:
    """Most similar codebook word; the full score vector is returned too."""
    entries = cb.valid_entries()
    if not entries:
        raise EmptyInput("codebook has no decodable entries")
    scores = tuple((e.word, jaccard_similarity(y, e.fou, n_grid)) for e in entries)
    best = max(range(len(scores)), key=lambda i: (scores[i][1], -i))
    return DecodeResult(scores[best][0], scores, low_confidence=scores[best][1] == 0.0)


def decode_rank(fous, n_grid: int = 200) -> list[int]:
    """Ranking recommendation: indices by descending centroid mean."""
    return rank_by_centroid(fous, n_grid)


def aggregate(inp: AggregationInput, levels: int = DEFAULT_LEVELS, algorithm: str = "eiasc"):
    """Dispatch to the operator `select_operator` picks for `inp`."""
    op = select_operator(inp)
    if op == IWA:
        return op, iwa(inp.values, inp.weights, algorithm)
    if op == FWA:
        return op, fwa(inp.values, inp.weights, levels, algorithm)
    return op, lwa(inp.values, inp.weights, levels, algorithm)
