"""Interval type-2 word models and centroid type reduction.

A word model is a nine-parameter footprint of uncertainty: a trapezoidal
upper membership function of height 1 and a trapezoidal lower membership
function of height hl in (0, 1] lying inside it.  The centroid of such a
model is an interval [c_l, c_r]; both ends are weighted averages of grid
points whose weights may sit anywhere between the lower and upper
membership values, and the optimum switches from one bound to the other
at a single grid index.  Three equivalent switch-point searches are
provided (km, ekm, eiasc); they must agree to within numerical noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFou, EmptyInput

LEFT_SHOULDER = "left"
INTERIOR = "interior"
RIGHT_SHOULDER = "right"
FOU_CLASSES = (LEFT_SHOULDER, INTERIOR, RIGHT_SHOULDER)

DEFAULT_GRID = 200
_AUDIT_POINTS = 64
_AUDIT_TOL = 1e-6


@dataclass(frozen=True)
class Trapezoid:
    """Trapezoidal membership function with a flat top at `height`."""

    a: float
    b: float
    c: float
    d: float
    height: float = 1.0

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoid corners out of order: {self}")
        if not 0.0 < self.height <= 1.0:
            raise ValueError(f"trapezoid height must be in (0, 1]: {self.height}")

    def mu(self, x):
        """Membership at `x` (scalar or array)."""
        arr = np.asarray(x, dtype=float)
        out = np.zeros_like(arr)
        core = (arr >= self.b) & (arr <= self.c)
        out[core] = self.height
        if self.b > self.a:
            left = (arr >= self.a) & (arr < self.b)
            out[left] = self.height * (arr[left] - self.a) / (self.b - self.a)
        if self.d > self.c:
            right = (arr > self.c) & (arr <= self.d)
            out[right] = self.height * (self.d - arr[right]) / (self.d - self.c)
        return float(out) if np.isscalar(x) else out

    def cut(self, level):
        """Horizontal slice [lo, hi] at membership `level` <= height."""
        if level < 0 or level > self.height + 1e-12:
            raise ValueError(f"cut level {level} above trapezoid height {self.height}")
        frac = min(level / self.height, 1.0)
        lo = self.a + frac * (self.b - self.a)
        hi = self.d - frac * (self.d - self.c)
        return lo, max(lo, hi)

    def corners(self):
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class It2Fou:
    """Nine-parameter interval type-2 word model (UMF, sub-normal LMF, class tag)."""

    umf: Trapezoid
    lmf: Trapezoid
    fou_class: str = INTERIOR

    def __post_init__(self):
        if self.fou_class not in FOU_CLASSES:
            raise ValueError(f"unknown FOU class: {self.fou_class!r}")
        if self.umf.height != 1.0:
            raise ValueError("UMF must have height 1")
        if self.lmf.a < self.umf.a or self.lmf.d > self.umf.d:
            raise ValueError("LMF support must lie inside UMF support")
        grid = np.linspace(self.umf.a, self.umf.d, _AUDIT_POINTS)
        if np.any(self.lmf.mu(grid) > self.umf.mu(grid) + _AUDIT_TOL):
            raise ValueError("LMF exceeds UMF on the audit grid")

    @property
    def support(self):
        return (self.umf.a, self.umf.d)

    def membership_bounds(self, x):
        """(lower, upper) membership at `x`."""
        return self.lmf.mu(x), self.umf.mu(x)

    @classmethod
    def type1(cls, a, b, c, d, fou_class=INTERIOR):
        """Degenerate model whose LMF equals its UMF."""
        t = Trapezoid(a, b, c, d, 1.0)
        return cls(t, t, fou_class)

    @classmethod
    def crisp(cls, x):
        """Point model, useful as a degenerate operand."""
        return cls.type1(x, x, x, x)


@dataclass(frozen=True)
class CentroidInterval:
    c_l: float
    c_r: float
    grid_size: int

    def __post_init__(self):
        if self.c_l > self.c_r:
            raise ValueError(f"centroid interval reversed: {self}")


def fou_membership_bounds(fou: It2Fou, x):
    return fou.membership_bounds(x)


# --- switch-point searches over ascending grid points ------------------
#
# All take ascending x with per-point weight bounds [lo_i, hi_i] and
# return the min (or max) of sum(x*w)/sum(w) over the box of weights.
# The minimiser uses hi weights left of the switch and lo right of it;
# the maximiser mirrors that.


def _dot_at_switch(x, lo, hi, k, minimise):
    if minimise:
        num = np.dot(x[:k], hi[:k]) + np.dot(x[k:], lo[k:])
        den = hi[:k].sum() + lo[k:].sum()
    else:
        num = np.dot(x[:k], lo[:k]) + np.dot(x[k:], hi[k:])
        den = lo[:k].sum() + hi[k:].sum()
    return num, den

def _nonzero_switch(x, lo, hi, k, minimise):
    # nudge the switch until the weight mass is positive (sum(hi) > 0
    # guarantees this terminates at one of the extremes)
    n = len(x)
    for kk in list(range(k, n + 1)) + list(range(k - 1, -1, -1)):
        num, den = _dot_at_switch(x, lo, hi, kk, minimise)
        if den > 0:
            return kk, num, den
    raise DegenerateFou("no positive weight mass")


def _km(x, lo, hi, minimise):
    n = len(x)
    theta = (lo + hi) / 2.0
    mass = theta.sum()
    if mass <= 0:
        raise DegenerateFou("membership mass is zero")
    y = float(np.dot(x, theta) / mass)
    k_prev = -1
    for _ in range(n + 2):
        k = int(np.clip(np.searchsorted(x, y, side="right"), 1, n - 1)) if n > 1 else 0
        if k == k_prev:
            break
        k, num, den = _nonzero_switch(x, lo, hi, k, minimise)
        y_new = float(num / den)
        if y_new == y:
            break
        y, k_prev = y_new, k
    return y


def _ekm(x, lo, hi, minimise):
    n = len(x)
    if n == 1:
        return float(x[0])
    k = int(np.clip(round(n / 2.4 if minimise else n / 1.7), 1, n - 1))
    k, num, den = _nonzero_switch(x, lo, hi, k, minimise)
    y = num / den
    for _ in range(n + 2):
        k_new = int(np.clip(np.searchsorted(x, y, side="right"), 1, n - 1))
        if k_new == k:
            break
        sl = slice(min(k, k_new), max(k, k_new))
        sign = 1.0 if k_new > k else -1.0
        if not minimise:
            sign = -sign
        diff = hi[sl] - lo[sl]
        num += sign * np.dot(x[sl], diff)
        den += sign * diff.sum()
        if den <= 0:
            k_new, num, den = _nonzero_switch(x, lo, hi, k_new, minimise)
        y, k = num / den, k_new
    # one clean evaluation at the final switch kills incremental drift
    _, num, den = _nonzero_switch(x, lo, hi, k, minimise)
    return float(num / den)


def _eiasc(x, lo, hi, minimise):
    n = len(x)
    num = float(np.dot(x, lo))
    den = float(lo.sum())
    if minimise:
        for i in range(n):
            d = hi[i] - lo[i]
            num += x[i] * d
            den += d
            if den > 0:
                y = num / den
                if i + 1 >= n or y <= x[i + 1]:
                    return y
    else:
        for i in range(n - 1, -1, -1):
            d = hi[i] - lo[i]
            num += x[i] * d
            den += d
            if den > 0:
                y = num / den
                if i == 0 or y >= x[i - 1]:
                    return y
    raise DegenerateFou("no positive weight mass")


_ALGORITHMS = {"km": _km, "ekm": _ekm, "eiasc": _eiasc}


def weighted_average_bounds(x, lo, hi, algorithm="eiasc"):
    """Interval of sum(x*w)/sum(w) over weight boxes [lo, hi].

    `x` need not be sorted; ties are fine.  Raises DegenerateFou when all
    upper weights are zero.
    """
    x = np.asarray(x, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if np.any(lo < 0) or np.any(hi < lo):
        raise ValueError("weight bounds must satisfy 0 <= lo <= hi")
    if hi.sum() <= 0:
        raise DegenerateFou("all weight upper bounds are zero")
    order = np.argsort(x, kind="stable")
    xs, los, his = x[order], lo[order], hi[order]
    try:
        fn = _ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; pick from {sorted(_ALGORITHMS)}")
    return float(fn(xs, los, his, True)), float(fn(xs, los, his, False))


def centroid_bounds(fou: It2Fou, n_grid: int = DEFAULT_GRID, algorithm: str = "eiasc") -> CentroidInterval:
    """Centroid interval [c_l, c_r] of `fou` on an n_grid discretisation."""
    if n_grid < 16:
        raise ValueError("n_grid must be at least 16")
    a, d = fou.support
    if d == a:
        return CentroidInterval(a, a, n_grid)
    x = np.linspace(a, d, n_grid)
    lower, upper = fou.membership_bounds(x)
    if upper.sum() <= 0:
        raise DegenerateFou("FOU has zero membership mass")
    c_l, c_r = weighted_average_bounds(x, lower, upper, algorithm)
    return CentroidInterval(c_l, c_r, n_grid)


def centroid_mean(ci: CentroidInterval) -> float:
    return 0.5 * (ci.c_l + ci.c_r)


def jaccard_similarity(a: It2Fou, b: It2Fou, n_grid: int = DEFAULT_GRID) -> float:
    """Similarity in [0, 1]: summed min over summed max of both envelopes."""
    lo = min(a.umf.a, b.umf.a)
    hi = max(a.umf.d, b.umf.d)
    if hi == lo:
        return 1.0
    x = np.linspace(lo, hi, n_grid)
    la, ua = a.membership_bounds(x)
    lb, ub = b.membership_bounds(x)
    num = np.minimum(ua, ub).sum() + np.minimum(la, lb).sum()
    den = np.maximum(ua, ub).sum() + np.maximum(la, lb).sum()
    if den <= 0:
        raise DegenerateFou("both FOUs have zero membership mass")
    return float(num / den)


def rank_by_centroid(fous, n_grid: int = DEFAULT_GRID) -> list[int]:
    """Indices sorted by descending centroid mean; stable on ties."""
    if len(fous) == 0:
        raise EmptyInput("nothing to rank")
    means = [centroid_mean(centroid_bounds(f, n_grid)) for f in fous]
    return sorted(range(len(fous)), key=lambda i: -means[i])
