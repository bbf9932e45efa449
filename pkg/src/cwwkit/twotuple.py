"""Two-tuple linguistic values: a term index plus a symbolic translation.

A value beta on the index axis is written as (term, alpha) where term is
the nearest index (half-up rounding, shared with the ordinal module) and
alpha = beta - term lies in [-0.5, 0.5).  Weighted aggregation averages
the betas and converts back, so nothing is lost to rounding mid-pipeline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import BetaOutOfRange, EmptyInput, LengthMismatch, ZeroWeightMass
from .ordinal import round_half_up
from .terms import TermSet

_LITERAL = re.compile(r"^s(\d+)(?:([+-]\d+(?:\.\d+)?))?$")


@dataclass(frozen=True)
class TwoTuple:
    term_index: int
    alpha: float = 0.0

    def __post_init__(self):
        if self.term_index < 0 or int(self.term_index) != self.term_index:
            raise ValueError(f"term_index must be a non-negative integer: {self.term_index!r}")
        if not -0.5 <= self.alpha < 0.5:
            raise ValueError(f"alpha must lie in [-0.5, 0.5): {self.alpha}")

    def literal(self) -> str:
        """Compact text form, e.g. 's3+0.2'."""
        return f"s{self.term_index}{self.alpha:+g}"


def delta(beta: float, ts: TermSet) -> TwoTuple:
    """Two-tuple for the index-axis value `beta` on term set `ts`."""
    if not -0.5 <= beta < ts.g + 0.5:
        raise BetaOutOfRange(f"beta {beta} outside [-0.5, {ts.g + 0.5})")
    term = round_half_up(beta)
    return TwoTuple(term, beta - term)


def delta_inv(t: TwoTuple) -> float:
    """Index-axis value represented by the two-tuple."""
    return t.term_index + t.alpha


def twotuple_aggregate(prefs, weights, ts: TermSet) -> TwoTuple:
    """Weighted mean of the preferences' betas, weights taken as betas too."""
    if len(prefs) == 0:
        raise EmptyInput("no preferences given")
    if len(prefs) != len(weights):
        raise LengthMismatch(f"{len(prefs)} preferences vs {len(weights)} weights")
    for t in list(prefs) + list(weights):
        if t.term_index > ts.g:
            raise BetaOutOfRange(f"term index {t.term_index} outside term set")
    mass = sum(delta_inv(w) for w in weights)
    if abs(mass) < 1e-12:
        raise ZeroWeightMass("weights have zero total magnitude")
    beta = sum(delta_inv(w) * delta_inv(t) for w, t in zip(weights, prefs)) / mass
    return delta(beta, ts)


def parse_literal(text: str) -> TwoTuple:
    """Parse 's3+0.2' / 's4-0.2' / bare 's2' into a two-tuple."""
    m = _LITERAL.match(text.strip())
    if m is None:
        raise ValueError(f"not a two-tuple literal: {text!r}")
    alpha = float(m.group(2)) if m.group(2) else 0.0
    return TwoTuple(int(m.group(1)), alpha)
