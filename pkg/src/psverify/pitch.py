"""Pitch detection by half-peak inventory, polarity selection and
threshold-driven pitch-period marking.

The signal is split into maximal runs of strictly positive / strictly
negative samples ("halves"; zero samples belong to no half). Each half
contributes its peak and an MPD, the larger absolute difference between
that peak and the peaks of the neighbouring halves of the same polarity.
The polarity whose MPDs are more consistent is scanned in time order:
starting from the first half, the next mark lands on the peak of the first
half whose magnitude reaches a threshold derived from the previously
marked peak, subject to period bounds.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .signal_io import SampleBuffer

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True)
class HalfPeak:
    polarity: str
    peak_index: int
    peak_value: float
    mpd: float

    def __post_init__(self):
        if self.polarity == POSITIVE and self.peak_value <= 0:
            raise ValueError("positive half with non-positive peak")
        if self.polarity == NEGATIVE and self.peak_value >= 0:
            raise ValueError("negative half with non-negative peak")
        if self.mpd < 0:
            raise ValueError("MPD must be non-negative")


@dataclass(frozen=True)
class PitchStats:
    """Per-polarity mean / spread / maximum of the MPDs."""

    ampv_pos: float
    ampv_neg: float
    max_mpd_pos: float
    max_mpd_neg: float
    std_mpd_pos: float
    std_mpd_neg: float


@dataclass(frozen=True, eq=False)
class PitchMarks:
    """Strictly increasing pitch-cycle start indices."""

    mark_indices: np.ndarray
    polarity_used: str

    def __post_init__(self):
        arr = np.asarray(self.mark_indices, dtype=np.int64)
        object.__setattr__(self, "mark_indices", arr)
        if arr.size < 2:
            raise ValueError("need at least two pitch marks")
        if np.any(np.diff(arr) <= 0):
            raise ValueError("pitch marks must be strictly increasing")
        if self.polarity_used not in (POSITIVE, NEGATIVE):
            raise ValueError(f"unknown polarity {self.polarity_used!r}")


def extract_half_peaks(buffer: SampleBuffer) -> list[HalfPeak]:
    """One HalfPeak per half, in time order.

    The MPD of a half compares its peak against the previous and next halves
    of the same polarity; a missing neighbour contributes 0, so a lone half
    of one polarity gets MPD 0.
    """
    pol, idx, val = _kernels.half_peaks(buffer.samples)
    if not (np.any(pol > 0) and np.any(pol < 0)):
        raise ValueError("unvoiced or degenerate signal: no sign alternation")
    peaks = []
    for sign, polarity in ((1, POSITIVE), (-1, NEGATIVE)):
        sel = np.nonzero(pol == sign)[0]
        values = val[sel]
        if values.size == 1:
            mpds = np.zeros(1)
        else:
            diffs = np.abs(np.diff(values))
            mpds = np.maximum(
                np.concatenate((np.zeros(1), diffs)),
                np.concatenate((diffs, np.zeros(1))),
            )
        for j, run_i in enumerate(sel):
            peaks.append(HalfPeak(polarity, int(idx[run_i]), float(val[run_i]), float(mpds[j])))
    peaks.sort(key=lambda p: p.peak_index)
    return peaks


def compute_stats(peaks) -> PitchStats:
    """AMPV (mean MPD), spread and maximum per polarity."""
    pos = np.array([p.mpd for p in peaks if p.polarity == POSITIVE])
    neg = np.array([p.mpd for p in peaks if p.polarity == NEGATIVE])
    if pos.size == 0 or neg.size == 0:
        raise ValueError("need at least one half of each polarity")
    return PitchStats(
        ampv_pos=float(pos.mean()),
        ampv_neg=float(neg.mean()),
        max_mpd_pos=float(pos.max()),
        max_mpd_neg=float(neg.max()),
        std_mpd_pos=float(pos.std()),
        std_mpd_neg=float(neg.std()),
    )


def choose_polarity(stats: PitchStats) -> str:
    """Polarity with the smaller coefficient of variation of its MPDs.

    Ties and degenerate (zero-mean) cases fall back to positive.
    """
    if stats.ampv_pos == 0.0 or stats.ampv_neg == 0.0:
        return POSITIVE
    cv_pos = stats.std_mpd_pos / stats.ampv_pos
    cv_neg = stats.std_mpd_neg / stats.ampv_neg
    return POSITIVE if cv_pos <= cv_neg else NEGATIVE


def _interval_x(mpd: float, ampv: float, max_mpd: float) -> int:
    # x in 1..10 partitions [0, AMPV]; 11..20 partitions (AMPV, max MPD].
    if mpd <= ampv:
        if ampv <= 0.0:
            return 1
        return min(int(mpd * 10.0 / ampv) + 1, 10)
    span = max_mpd - ampv
    if span <= 0.0:  # unreachable when max_mpd >= mpd > ampv
        return 20
    step = int(np.ceil((mpd - ampv) * 10.0 / span))
    return 10 + min(max(step, 1), 10)


def threshold_for_peak(peak: HalfPeak, stats: PitchStats) -> float:
    """Signed threshold the next same-polarity peak must reach (by magnitude).

    threshold = peak - (x/100) * peak, where x indexes the ten intervals of
    [0, AMPV] (x = 1..10) or the ten intervals of (AMPV, max MPD]
    (x = 11..20) that the half's MPD falls in. Larger x means a more
    permissive (lower-magnitude) threshold.
    """
    if peak.polarity == POSITIVE:
        ampv, max_mpd = stats.ampv_pos, stats.max_mpd_pos
    else:
        ampv, max_mpd = stats.ampv_neg, stats.max_mpd_neg
    x = _interval_x(peak.mpd, ampv, max_mpd)
    return peak.peak_value * (1.0 - x / 100.0)


def mark_pitch_periods(
    buffer: SampleBuffer,
    peaks,
    stats: PitchStats,
    polarity: str,
    min_period: int,
    max_period: int,
) -> PitchMarks:
    """Scan the chosen-polarity halves and place pitch marks at their peaks.

    The first chosen half seeds the scan. A later half is marked when its
    peak magnitude is at or above the threshold derived from the previously
    marked half and its distance from the previous mark lies in
    [min_period, max_period]; candidates outside the bounds are skipped.
    """
    if not 0 < min_period < max_period:
        raise ValueError(f"need 0 < min_period < max_period, got {min_period}/{max_period}")
    n = buffer.samples.size
    chosen = [p for p in peaks if p.polarity == polarity]
    if len(chosen) < 2:
        raise ValueError("pitch not detected: fewer than two candidate halves")
    marks = [chosen[0].peak_index]
    threshold = abs(threshold_for_peak(chosen[0], stats))
    for half in chosen[1:]:
        if half.peak_index >= n:
            raise ValueError("peak index beyond buffer")
        gap = half.peak_index - marks[-1]
        if gap < min_period or gap > max_period:
            continue
        if abs(half.peak_value) >= threshold:
            marks.append(half.peak_index)
            threshold = abs(threshold_for_peak(half, stats))
    if len(marks) < 2:
        raise ValueError("pitch not detected")
    return PitchMarks(np.asarray(marks, dtype=np.int64), polarity)


def periods_from_marks(marks: PitchMarks) -> list[tuple[int, int]]:
    """Consecutive marks delimit periods: [(start, length), ...]."""
    idx = marks.mark_indices
    return [(int(idx[i]), int(idx[i + 1] - idx[i])) for i in range(idx.size - 1)]
