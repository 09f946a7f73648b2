"""The 16-dimensional utterance feature vector.

Four intrapitch temporal features (average crest/trough counts per pitch
period, keyed by the sign of the 3-sample window centre) plus 12 cepstral
coefficients from order-12 LPC over sliding frames of three consecutive
pitch periods, averaged over at most 18 frames.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .pitch import PitchMarks, periods_from_marks
from .signal_io import SampleBuffer

VOWELS = ("a", "e", "i", "o", "u")
LPC_ORDER = 12
MAX_CEPSTRAL_FRAMES = 18
REGION_PERIODS_BEFORE = 10
REGION_PERIODS_AFTER = 9  # peak period itself plus 9 more: 20 in total


@dataclass(frozen=True)
class TemporalFeatures:
    """Average extrema counts per pitch period over the steady-state region."""

    poc: float
    pot: float
    nec: float
    net: float

    def __post_init__(self):
        for name in ("poc", "pot", "nec", "net"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {v}")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.poc, self.pot, self.nec, self.net])


@dataclass(frozen=True, eq=False)
class CepstralVector:
    c: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=np.float64)
        object.__setattr__(self, "c", arr)
        if arr.shape != (LPC_ORDER,):
            raise ValueError(f"expected {LPC_ORDER} cepstral coefficients, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("cepstral coefficients must be finite")


@dataclass(frozen=True)
class SteadyStateRegion:
    """Contiguous run of pitch periods around the amplitude peak.

    `periods` holds (start, length) pairs; `peak_offset` is the index within
    `periods` of the period containing the global amplitude peak.
    """

    periods: tuple
    peak_offset: int

    def __post_init__(self):
        if not 1 <= len(self.periods) <= REGION_PERIODS_BEFORE + REGION_PERIODS_AFTER + 1:
            raise ValueError(f"region must hold 1..20 periods, got {len(self.periods)}")
        if not 0 <= self.peak_offset < len(self.periods):
            raise ValueError("peak period must lie inside the region")

    def __len__(self):
        return len(self.periods)


@dataclass(frozen=True)
class UtteranceFeatures:
    temporal: TemporalFeatures
    cepstral: CepstralVector
    vowel: str

    def __post_init__(self):
        if self.vowel not in VOWELS:
            raise ValueError(f"unknown vowel {self.vowel!r}")

    @property
    def vector(self) -> np.ndarray:
        """Fixed layout: poc, pot, nec, net, c1..c12."""
        return np.concatenate((self.temporal.vector, self.cepstral.c))


def select_steady_state(buffer: SampleBuffer, periods) -> SteadyStateRegion:
    """Up to 20 periods centred on the one containing the amplitude peak.

    The window spans 10 periods before through 9 after the peak period and
    is clipped at the ends, so fewer periods are used near the edges.
    """
    n = len(periods)
    if n < 3:
        raise ValueError(f"need at least 3 pitch periods, got {n}")
    peak_idx = int(np.argmax(np.abs(buffer.samples)))
    starts = np.array([start for start, _ in periods])
    p = int(np.clip(np.searchsorted(starts, peak_idx, side="right") - 1, 0, n - 1))
    lo = max(0, p - REGION_PERIODS_BEFORE)
    hi = min(n - 1, p + REGION_PERIODS_AFTER)
    return SteadyStateRegion(tuple(periods[lo : hi + 1]), p - lo)


def count_extrema(buffer: SampleBuffer, period) -> tuple[int, int, int, int]:
    """Slide a 3-sample window across one period and count strict extrema.

    Centre > 0: a strict local max counts as a positive crest (poc), a
    strict local min as a positive trough (pot). Centre <= 0: max counts as
    a negative crest (nec), min as a negative trough (net). Plateaus count
    nothing.
    """
    start, length = period
    if length < 3:
        raise ValueError(f"period of {length} samples is shorter than one window")
    return _kernels.extrema_counts(buffer.samples, start, start + length)


def temporal_features(buffer: SampleBuffer, region: SteadyStateRegion) -> TemporalFeatures:
    """Sum the four counters over the region's N periods and divide by N."""
    totals = np.zeros(4)
    for period in region.periods:
        totals += count_extrema(buffer, period)
    totals /= len(region)
    return TemporalFeatures(*totals)


def autocorrelation(frame, max_lag: int = LPC_ORDER) -> np.ndarray:
    """R[k] = sum_n frame[n] * frame[n+k] for k = 0..max_lag, no tapering."""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.size <= max_lag:
        raise ValueError(f"frame of {frame.size} samples too short for lag {max_lag}")
    r = _kernels.autocorr(frame, max_lag)
    if r[0] <= 0.0:
        raise ValueError("all-zero frame has no autocorrelation")
    return r


def levinson_durbin(r, order: int | None = None):
    """Solve the Toeplitz normal equations order-recursively.

    Predictor convention s[n] ~ sum_j a[j] s[n-j].

    Returns
    -------
    a : ndarray
        Predictor coefficients a1..a_order.
    k : ndarray
        Reflection coefficients k1..k_order.
    err : ndarray
        Residual energies E0..E_order (non-increasing, positive).
    """
    r = np.asarray(r, dtype=np.float64)
    if order is None:
        order = r.size - 1
    if r.size < order + 1:
        raise ValueError(f"need {order + 1} autocorrelation lags, got {r.size}")
    if r[0] <= 0.0:
        raise ValueError("ill-conditioned autocorrelation: R[0] <= 0")
    a = np.zeros(order)
    k = np.zeros(order)
    err = np.empty(order + 1)
    err[0] = r[0]
    for i in range(1, order + 1):
        e_prev = err[i - 1]
        if e_prev <= 0.0:
            raise ValueError("ill-conditioned autocorrelation: vanishing residual")
        ki = (r[i] - a[: i - 1] @ r[i - 1 : 0 : -1]) / e_prev
        if abs(ki) >= 1.0:
            raise ValueError("ill-conditioned autocorrelation: |reflection| >= 1")
        head = a[: i - 1].copy()
        a[: i - 1] = head - ki * head[::-1]
        a[i - 1] = ki
        k[i - 1] = ki
        err[i] = (1.0 - ki * ki) * e_prev
    return a, k, err


def lpc_to_cepstral(a) -> CepstralVector:
    """Cepstrum of the all-pole model via the standard recursion.

    c_n = a_n + sum_{k=1}^{n-1} (k/n) c_k a_{n-k}; no c0, no liftering.
    """
    a = np.asarray(a, dtype=np.float64)
    p = a.size
    c = np.zeros(p)
    for n in range(1, p + 1):
        acc = a[n - 1]
        for j in range(1, n):
            acc += (j / n) * c[j - 1] * a[n - j - 1]
        c[n - 1] = acc
    return CepstralVector(c)


def pitch_synchronous_cepstra(
    buffer: SampleBuffer,
    region: SteadyStateRegion,
    order: int = LPC_ORDER,
    max_frames: int = MAX_CEPSTRAL_FRAMES,
) -> CepstralVector:
    """Average cepstra over sliding frames of three consecutive periods.

    Frame i spans region periods i, i+1, i+2; each iteration drops the
    first period and appends the next, for min(N-2, max_frames) frames.
    """
    n = len(region)
    if n < 3:
        raise ValueError(f"region too short: {n} periods, need 3")
    n_frames = min(n - 2, max_frames)
    x = buffer.samples
    acc = np.zeros(order)
    for i in range(n_frames):
        start = region.periods[i][0]
        last_start, last_len = region.periods[i + 2]
        frame = x[start : last_start + last_len]
        r = autocorrelation(frame, order)
        a, _, _ = levinson_durbin(r, order)
        acc += lpc_to_cepstral(a).c
    return CepstralVector(acc / n_frames)


def extract_utterance_features(buffer: SampleBuffer, marks: PitchMarks, vowel: str) -> UtteranceFeatures:
    """Compose region selection, temporal counts and cepstra into 16 values."""
    periods = periods_from_marks(marks)
    region = select_steady_state(buffer, periods)
    return UtteranceFeatures(
        temporal=temporal_features(buffer, region),
        cepstral=pitch_synchronous_cepstra(buffer, region),
        vowel=vowel,
    )
