"""Word-model elicitation from endpoint-interval survey data.

Subjects answer "where do the endpoints of this word lie on the 0..M
scale?" giving one data interval each.  A data part filters the intervals
(bad data, box-and-whisker outliers, tolerance limits, reasonable-interval
overlap) and a FS part maps the survivors into a nine-parameter IT2 word
model.  Three method variants are supported:

* IA   - classic pipeline; one joint pass per filtering stage.
* EIA  - stricter bad-data rule (length < M), endpoint and length
         sub-passes in the outlier and tolerance stages, tightened
         reasonable-interval bounds, and a discrete lower-envelope apex
         for interior models.
* HMA  - EIA data part, then an overlap-removal FS part whose UMF and
         LMF both reach height 1.

Every stage records its survivor count; the counts are non-increasing.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats as sps

from .codebook import Codebook, CodebookEntry
from .errors import (
    AllEmbeddedInadmissible,
    AllIntervalsEliminated,
    CwwError,
    EmptyInput,
    EmptyInterval,
    EmptyOverlap,
    InsufficientSurvivors,
    ParseError,
)
from .it2 import INTERIOR, LEFT_SHOULDER, RIGHT_SHOULDER, It2Fou, Trapezoid

_SQRT2 = math.sqrt(2.0)
_SQRT6 = math.sqrt(6.0)
_SQRT12 = math.sqrt(12.0)

# absolute slack for mean-based band tests; identical inputs must never
# be rejected because a float mean is off by one ulp
_BAND_SLACK = 1e-9


@dataclass(frozen=True)
class DataInterval:
    """One subject's endpoint interval [a, b]."""

    a: float
    b: float
    subject_id: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"interval endpoints must be finite: {self}")

    @property
    def length(self):
        return self.b - self.a


def make_intervals(pairs):
    """Build DataIntervals from (a, b) pairs; subjects are numbered."""
    return [DataInterval(float(a), float(b), f"s{i}") for i, (a, b) in enumerate(pairs)]


@dataclass(frozen=True)
class IntervalStats:
    """Means and sample standard deviations of ends and lengths."""

    m_a: float
    s_a: float
    m_b: float
    s_b: float
    m_l: float
    s_l: float

    @classmethod
    def from_intervals(cls, intervals):
        a = np.array([iv.a for iv in intervals], dtype=float)
        b = np.array([iv.b for iv in intervals], dtype=float)
        length = b - a
        sd = (lambda v: float(v.std(ddof=1))) if len(intervals) > 1 else (lambda v: 0.0)
        return cls(float(a.mean()), sd(a), float(b.mean()), sd(b), float(length.mean()), sd(length))


@dataclass(frozen=True)
class IntervalSummary:
    """Per-survivor midpoint mean and uniform-distribution spread."""

    mean: float
    std: float

    @classmethod
    def of(cls, iv: DataInterval):
        return cls(0.5 * (iv.a + iv.b), iv.length / _SQRT12)


@dataclass(frozen=True)
class SurvivorTrace:
    """Interval counts after each pipeline stage."""

    total: int
    after_bad_data: int
    after_outliers: int
    after_tolerance: int
    after_reasonable: int
    admissible: int | None = None

    def __post_init__(self):
        seq = self.as_list()
        if any(seq[i] < seq[i + 1] for i in range(len(seq) - 1)):
            raise ValueError(f"survivor counts must be non-increasing: {seq}")

    def as_list(self):
        seq = [
            self.total,
            self.after_bad_data,
            self.after_outliers,
            self.after_tolerance,
            self.after_reasonable,
        ]
        if self.admissible is not None:
            seq.append(self.admissible)
        return seq

    def with_admissible(self, count: int):
        return replace(self, admissible=count)


@dataclass(frozen=True)
class EncoderConfig:
    method: str = "EIA"
    tolerance_gamma: float = 0.05
    tolerance_alpha: float = 0.05
    outlier_lower_factor: float = 1.25
    outlier_upper_factor: float = 1.5
    rng_seed: int = 0
    scale_max: float = 10.0

    def __post_init__(self):
        object.__setattr__(self, "method", self.method.upper())
        if self.method not in ("IA", "EIA", "HMA"):
            raise ValueError(f"method must be IA, EIA or HMA: {self.method!r}")
        if not (0 < self.tolerance_gamma < 1 and 0 < self.tolerance_alpha < 1):
            raise ValueError("tolerance_gamma and tolerance_alpha must lie in (0, 1)")
        if self.outlier_lower_factor <= 0 or self.outlier_upper_factor <= 0:
            raise ValueError("outlier whisker factors must be positive")
        if self.scale_max <= 0:
            raise ValueError("scale_max must be positive")


@dataclass(frozen=True)
class DataPartResult:
    survivors: list
    summaries: list
    stats: IntervalStats
    trace: SurvivorTrace


# --- tolerance factors ---------------------------------------------------


def two_sided_tolerance_factor(n: int, gamma: float = 0.05, alpha: float = 0.05) -> float:
    """Howe's approximation of the two-sided normal tolerance factor.

    With confidence 100(1-gamma)% the band mean +/- k*sd covers at least
    100(1-alpha)% of the population.  Returns 0 for n < 2 (no spread to
    bound).
    """
    if n < 2:
        return 0.0
    z = sps.norm.ppf(1.0 - alpha / 2.0)
    chi = sps.chi2.ppf(gamma, n - 1)
    return float(z * math.sqrt((n - 1) * (1.0 + 1.0 / n) / chi))


def one_sided_tolerance_factor(n: int, gamma: float = 0.05, alpha: float = 0.05) -> float:
    """Exact one-sided normal tolerance factor via the noncentral t."""
    if n < 2:
        return 0.0
    z = sps.norm.ppf(1.0 - alpha)
    return float(sps.nct.ppf(1.0 - gamma, df=n - 1, nc=z * math.sqrt(n)) / math.sqrt(n))


# --- person FOU ----------------------------------------------------------


def person_fou_expand(left, right, n: int = 50, seed: int = 0):
    """Synthesise `n` virtual subject intervals from one person's ranges.

    `left` and `right` are (lo, hi) ranges for the word's two endpoints;
    `n` uniform draws in each are paired up in draw order.
    """
    (l_lo, l_hi), (r_lo, r_hi) = left, right
    if l_lo > l_hi or r_lo > r_hi:
        raise EmptyInterval(f"endpoint ranges must be non-empty: {left}, {right}")
    rng = np.random.default_rng(seed)
    lefts = rng.uniform(l_lo, l_hi, n) if l_hi > l_lo else np.full(n, float(l_lo))
    rights = rng.uniform(r_lo, r_hi, n) if r_hi > r_lo else np.full(n, float(r_lo))
    return [DataInterval(float(a), float(b), f"virtual{i}") for i, (a, b) in enumerate(zip(lefts, rights))]


def word_seed(base_seed: int, word: str) -> int:
    """Stable per-word seed so parallel word order cannot change draws."""
    digest = hashlib.sha256(word.encode("utf-8")).digest()
    return (int(base_seed) ^ int.from_bytes(digest[:8], "big")) % (2**63)


def expand_person_surveys(ranges, n: int = 50, seed: int = 0):
    """Person-FOU expansion for a whole vocabulary: word -> interval list."""
    return {
        word: person_fou_expand(left, right, n, word_seed(seed, word))
        for word, (left, right) in ranges.items()
    }


# --- data parts ----------------------------------------------------------


def _endpoints(intervals):
    a = np.array([iv.a for iv in intervals], dtype=float)
    b = np.array([iv.b for iv in intervals], dtype=float)
    return a, b


def _apply(intervals, mask, stage):
    kept = [iv for iv, ok in zip(intervals, mask) if ok]
    if not kept:
        raise AllIntervalsEliminated(stage)
    return kept


def _whisker_mask(values, cfg):
    q1, q3 = np.percentile(values, [25, 75])
    iqr = q3 - q1
    return (values >= q1 - cfg.outlier_lower_factor * iqr) & (
        values <= q3 + cfg.outlier_upper_factor * iqr
    )


def _tolerance_mask(values, k):
    mean = values.mean()
    sd = values.std(ddof=1) if len(values) > 1 else 0.0
    return np.abs(values - mean) <= k * sd + _BAND_SLACK


def reasonable_threshold(m_a, s_a, m_b, s_b):
    """Optimal split point between left and right endpoint populations.

    Closed form from equating the two normal densities; the root lying in
    [m_a, m_b] is taken, falling back to the one closest to the midpoint.
    Degenerate spreads use the continuity limits.
    """
    if s_a == s_b:
        return 0.5 * (m_a + m_b)
    if s_a == 0.0:
        return m_a
    if s_b == 0.0:
        return m_b
    va, vb = s_a**2, s_b**2
    disc = (m_a - m_b) ** 2 + 2.0 * (va - vb) * math.log(s_a / s_b)
    root = s_a * s_b * math.sqrt(max(disc, 0.0))
    base = m_b * va - m_a * vb
    cands = [(base + root) / (va - vb), (base - root) / (va - vb)]
    inside = [c for c in cands if m_a <= c <= m_b]
    if len(inside) == 1:
        return inside[0]
    mid = 0.5 * (m_a + m_b)
    pool = inside if inside else cands
    return min(pool, key=lambda c: abs(c - mid))


def _finish_data_part(intervals, survivors, counts):
    trace = SurvivorTrace(*counts)
    summaries = [IntervalSummary.of(iv) for iv in survivors]
    return DataPartResult(survivors, summaries, IntervalStats.from_intervals(survivors), trace)


def ia_data_part(intervals, cfg: EncoderConfig) -> DataPartResult:
    """Classic data part: four filters, then per-survivor statistics."""
    if len(intervals) == 0:
        raise EmptyInput("no data intervals")
    n = len(intervals)
    M = cfg.scale_max

    kept = [iv for iv in intervals if 0 <= iv.a < iv.b <= M]
    if not kept:
        raise AllIntervalsEliminated("bad data")
    n1 = len(kept)

    a, b = _endpoints(kept)
    mask = _whisker_mask(a, cfg) & _whisker_mask(b, cfg) & _whisker_mask(b - a, cfg)
    kept = _apply(kept, mask, "outliers")
    m1 = len(kept)

    a, b = _endpoints(kept)
    k = two_sided_tolerance_factor(len(kept), cfg.tolerance_gamma, cfg.tolerance_alpha)
    mask = _tolerance_mask(a, k) & _tolerance_mask(b, k) & _tolerance_mask(b - a, k)
    kept = _apply(kept, mask, "tolerance limits")
    m2 = len(kept)

    stats = IntervalStats.from_intervals(kept)
    eps = reasonable_threshold(stats.m_a, stats.s_a, stats.m_b, stats.s_b)
    kept = _apply([iv for iv in kept], [iv.a < eps < iv.b for iv in kept], "reasonable interval")
    m = len(kept)

    return _finish_data_part(intervals, kept, (n, n1, m1, m2, m))


def eia_data_part(intervals, cfg: EncoderConfig) -> DataPartResult:
    """Enhanced data part with endpoint/length sub-passes per stage."""
    if len(intervals) == 0:
        raise EmptyInput("no data intervals")
    n = len(intervals)
    M = cfg.scale_max

    kept = [iv for iv in intervals if 0 <= iv.a < iv.b <= M and iv.length < M]
    if not kept:
        raise AllIntervalsEliminated("bad data")
    n1 = len(kept)

    a, b = _endpoints(kept)
    kept = _apply(kept, _whisker_mask(a, cfg) & _whisker_mask(b, cfg), "endpoint outliers")
    a, b = _endpoints(kept)
    kept = _apply(kept, _whisker_mask(b - a, cfg), "length outliers")
    m1 = len(kept)

    a, b = _endpoints(kept)
    k = two_sided_tolerance_factor(len(kept), cfg.tolerance_gamma, cfg.tolerance_alpha)
    kept = _apply(kept, _tolerance_mask(a, k) & _tolerance_mask(b, k), "endpoint tolerance")

    lengths = np.array([iv.length for iv in kept])
    s_l = lengths.std(ddof=1) if len(kept) > 1 else 0.0
    if s_l > 0:
        # clip the confidence factor so the band stays inside what the
        # scale can support: not too small, not too large intervals
        k1 = two_sided_tolerance_factor(len(kept), cfg.tolerance_gamma, cfg.tolerance_alpha)
        m_l = lengths.mean()
        k_prime = min(k1, m_l / s_l, (M - m_l) / s_l)
        kept = _apply(kept, _tolerance_mask(lengths, k_prime), "length tolerance")
    m2 = len(kept)

    stats = IntervalStats.from_intervals(kept)
    eps = reasonable_threshold(stats.m_a, stats.s_a, stats.m_b, stats.s_b)
    mask = [
        iv.a < eps < iv.b and 2 * stats.m_a - eps <= iv.a + _BAND_SLACK
        and iv.b <= 2 * stats.m_b - eps + _BAND_SLACK
        for iv in kept
    ]
    kept = _apply(kept, mask, "reasonable interval")
    m = len(kept)

    return _finish_data_part(intervals, kept, (n, n1, m1, m2, m))


# --- FS parts ------------------------------------------------------------


def classify_fou(stats: IntervalStats, count: int, cfg: EncoderConfig) -> str:
    """Shoulder-or-interior decision from one-sided tolerance bounds."""
    k = one_sided_tolerance_factor(count, cfg.tolerance_gamma, cfg.tolerance_alpha)
    if stats.m_a - k * stats.s_a <= 0:
        return LEFT_SHOULDER
    if stats.m_b + k * stats.s_b >= cfg.scale_max:
        return RIGHT_SHOULDER
    return INTERIOR


def embedded_t1_sets(survivors, fou_class: str, scale_max: float):
    """Embedded T1 support parameters (a_mf, b_mf) for every survivor."""
    out = []
    M = scale_max
    for iv in survivors:
        a, b = iv.a, iv.b
        if fou_class == INTERIOR:
            a_mf = 0.5 * ((a + b) - _SQRT2 * (b - a))
            b_mf = 0.5 * ((a + b) + _SQRT2 * (b - a))
        elif fou_class == LEFT_SHOULDER:
            a_mf = 0.5 * (a + b) - (b - a) / _SQRT6
            b_mf = 0.5 * (a + b) + _SQRT6 * (b - a) / 3.0
        else:
            ap, bp = M - b, M - a
            a_mf = M - 0.5 * (ap + bp) - _SQRT6 * (bp - ap) / 3.0
            b_mf = M - 0.5 * (ap + bp) + (bp - ap) / _SQRT6
        out.append((a_mf, b_mf))
    return out


def admissible_embedded(survivors, fou_class: str, scale_max: float):
    emb = embedded_t1_sets(survivors, fou_class, scale_max)
    kept = [(a, b) for a, b in emb if a >= 0 and b <= scale_max]
    if not kept:
        raise AllEmbeddedInadmissible("every embedded T1 set leaves the scale")
    return kept


def _interior_lmf(a_max, b_min, c_left, c_right):
    # crossing of the leg rising from (a_max, 0) to (c_left, 1) with the
    # leg falling from (c_right, 1) to (b_min, 0)
    run_l = c_left - a_max
    run_r = b_min - c_right
    denom = run_l + run_r
    if denom <= 0:
        return Trapezoid(a_max, a_max, b_min, b_min, 1.0)
    mu = (b_min - a_max) / denom
    if mu >= 1.0:
        return Trapezoid(a_max, c_left, c_right, b_min, 1.0)
    p = (run_l * b_min + run_r * a_max) / denom
    return Trapezoid(a_max, p, p, b_min, mu)


def _envelope_fou(embedded, fou_class, scale_max, discrete_apex):
    a_arr = np.array([e[0] for e in embedded])
    b_arr = np.array([e[1] for e in embedded])
    M = scale_max
    if fou_class == LEFT_SHOULDER:
        umf = Trapezoid(0.0, 0.0, float(a_arr.max()), float(b_arr.max()))
        lmf = Trapezoid(0.0, 0.0, float(a_arr.min()), float(b_arr.min()))
    elif fou_class == RIGHT_SHOULDER:
        umf = Trapezoid(float(a_arr.min()), float(b_arr.min()), M, M)
        lmf = Trapezoid(float(a_arr.max()), float(b_arr.max()), M, M)
    else:
        c_arr = 0.5 * (a_arr + b_arr)
        umf = Trapezoid(float(a_arr.min()), float(c_arr.min()), float(c_arr.max()), float(b_arr.max()))
        a_max, b_min = float(a_arr.max()), float(b_arr.min())
        if discrete_apex:
            # lowest crossing of the actual embedded legs: the left leg
            # ending right-most and the right leg starting left-most
            c_left = float(c_arr[a_arr == a_arr.max()].max())
            c_right = float(c_arr[b_arr == b_arr.min()].min())
        else:
            c_left = float(c_arr.max())
            c_right = float(c_arr.min())
        lmf = _interior_lmf(a_max, b_min, c_left, c_right)
    return It2Fou(umf, lmf, fou_class)


def ia_fs_part(survivors, stats: IntervalStats, cfg: EncoderConfig) -> It2Fou:
    """Classify, build embedded sets, take the filled-family envelope."""
    if len(survivors) == 0:
        raise EmptyInput("no survivors")
    fou_class = classify_fou(stats, len(survivors), cfg)
    embedded = admissible_embedded(survivors, fou_class, cfg.scale_max)
    return _envelope_fou(embedded, fou_class, cfg.scale_max, discrete_apex=False)


def eia_fs_part(survivors, stats: IntervalStats, cfg: EncoderConfig) -> It2Fou:
    """As ia_fs_part, but interior LMF height from the discrete envelope."""
    if len(survivors) == 0:
        raise EmptyInput("no survivors")
    fou_class = classify_fou(stats, len(survivors), cfg)
    embedded = admissible_embedded(survivors, fou_class, cfg.scale_max)
    return _envelope_fou(embedded, fou_class, cfg.scale_max, discrete_apex=True)


def hma_overlap(survivors, fou_class: str, scale_max: float):
    """Interval shared by all survivors, clipped to the class's fixed end."""
    a, b = _endpoints(survivors)
    if fou_class == LEFT_SHOULDER:
        return 0.0, float(b.min())
    if fou_class == RIGHT_SHOULDER:
        return float(a.max()), scale_max
    o_a, o_b = float(a.max()), float(b.min())
    if o_a > o_b:
        raise EmptyOverlap(f"survivors do not all intersect: max a = {o_a} > min b = {o_b}")
    return o_a, o_b


def hma_fs_part(survivors, cfg: EncoderConfig) -> It2Fou:
    """Overlap-removal FS part; UMF and LMF both reach height 1.

    The overlap is the certain core; the residual endpoint spans become
    the UMF transition bands, and the LMF covers exactly the core.
    """
    if len(survivors) < 2:
        raise InsufficientSurvivors("HMA needs at least two survivors")
    stats = IntervalStats.from_intervals(survivors)
    fou_class = classify_fou(stats, len(survivors), cfg)
    o_a, o_b = hma_overlap(survivors, fou_class, cfg.scale_max)
    a, b = _endpoints(survivors)
    M = cfg.scale_max
    if fou_class == LEFT_SHOULDER:
        umf = Trapezoid(0.0, 0.0, o_b, float(b.max()))
        lmf = Trapezoid(0.0, 0.0, o_b, o_b)
    elif fou_class == RIGHT_SHOULDER:
        umf = Trapezoid(float(a.min()), o_a, M, M)
        lmf = Trapezoid(o_a, o_a, M, M)
    else:
        umf = Trapezoid(float(a.min()), o_a, o_b, float(b.max()))
        lmf = Trapezoid(o_a, o_a, o_b, o_b)
    return It2Fou(umf, lmf, fou_class)


# --- whole-word pipeline -------------------------------------------------


def encode_word(word: str, intervals, cfg: EncoderConfig):
    """Run the configured data part and FS part; returns (fou, trace)."""
    if cfg.method == "IA":
        res = ia_data_part(intervals, cfg)
        fou = ia_fs_part(res.survivors, res.stats, cfg)
        fou_class = fou.fou_class
        m_star = len(admissible_embedded(res.survivors, fou_class, cfg.scale_max))
    elif cfg.method == "EIA":
        res = eia_data_part(intervals, cfg)
        fou = eia_fs_part(res.survivors, res.stats, cfg)
        m_star = len(admissible_embedded(res.survivors, fou.fou_class, cfg.scale_max))
    else:
        res = eia_data_part(intervals, cfg)
        fou = hma_fs_part(res.survivors, cfg)
        m_star = len(res.survivors)
    return fou, res.trace.with_admissible(m_star)


def build_codebook(surveys, cfg: EncoderConfig) -> Codebook:
    """Encode every word independently; failures keep their slot."""
    if len(surveys) == 0:
        raise EmptyInput("no words to encode")
    entries = []
    for word, intervals in surveys.items():
        try:
            fou, trace = encode_word(word, intervals, cfg)
            entries.append(CodebookEntry(word, fou, tuple(trace.as_list())))
        except CwwError as exc:
            entries.append(CodebookEntry(word, None, (), f"{type(exc).__name__}: {exc}"))
    return Codebook(tuple(entries))


def read_survey_csv(path):
    """Parse the survey CSV (word,subject,left,right) into word -> intervals."""
    surveys: dict[str, list[DataInterval]] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["word", "subject", "left", "right"]:
            raise ParseError("expected header 'word,subject,left,right'", line=1)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 4:
                raise ParseError(f"expected 4 fields, got {len(row)}", line=lineno)
            word, subject, left, right = (cell.strip() for cell in row)
            if not word:
                raise ParseError("empty word", line=lineno, column=1)
            try:
                a = float(left)
            except ValueError:
                raise ParseError(f"left endpoint is not a number: {left!r}", line=lineno, column=3)
            try:
                b = float(right)
            except ValueError:
                raise ParseError(f"right endpoint is not a number: {right!r}", line=lineno, column=4)
            surveys.setdefault(word, []).append(DataInterval(a, b, subject))
    if not surveys:
        raise ParseError("survey file has no data rows", line=2)
    return surveys
