"""Hot inner-loop kernels, compiled with numba when available.

Every kernel has a pure-numpy twin. The compiled path is the default;
set PSVERIFY_NUMBA=0 to force the numpy fallback (baseline for
benchmarks/bench_kernels.py, and a safety hatch on platforms where numba
is broken). Both paths agree to float rounding; repeated runs on one path
are bit-identical.
"""

import os

import numpy as np


def _env_wants_numba() -> bool:
    flag = os.environ.get("PSVERIFY_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


# ---------------------------------------------------------------------------
# pure-numpy implementations

def half_peaks_numpy(x):
    """Extremum of every maximal same-sign run of x.

    Returns (signs, indices, values): int8 run sign (+1/-1), index of the
    first sample attaining the run extremum, and its value. Zero samples
    belong to no run.
    """
    s = np.sign(x).astype(np.int8)
    change = np.nonzero(s[1:] != s[:-1])[0] + 1
    starts = np.concatenate((np.zeros(1, np.int64), change)).astype(np.int64)
    ends = np.concatenate((change, np.array([x.shape[0]]))).astype(np.int64)
    run_signs = s[starts]
    keep = np.nonzero(run_signs != 0)[0]
    pol = np.empty(keep.shape[0], np.int8)
    idx = np.empty(keep.shape[0], np.int64)
    val = np.empty(keep.shape[0], np.float64)
    for out_i, run_i in enumerate(keep):
        a, b = starts[run_i], ends[run_i]
        seg = x[a:b]
        j = int(np.argmax(seg)) if run_signs[run_i] > 0 else int(np.argmin(seg))
        pol[out_i] = run_signs[run_i]
        idx[out_i] = a + j
        val[out_i] = seg[j]
    return pol, idx, val


def extrema_counts_numpy(x, start, stop):
    """Strict 3-sample-window extrema counts over x[start:stop].

    Returns (poc, pot, nec, net): crest/trough counts keyed by the sign of
    the window centre (centre > 0 feeds poc/pot, centre <= 0 feeds nec/net).
    """
    seg = x[start:stop]
    a, c, b = seg[:-2], seg[1:-1], seg[2:]
    crest = (a < c) & (c > b)
    trough = (a > c) & (c < b)
    pos = c > 0.0
    return (
        int(np.count_nonzero(crest & pos)),
        int(np.count_nonzero(trough & pos)),
        int(np.count_nonzero(crest & ~pos)),
        int(np.count_nonzero(trough & ~pos)),
    )


def autocorr_numpy(frame, max_lag):
    """Rectangular-window autocorrelation R[0..max_lag] of one frame."""
    n = frame.shape[0]
    out = np.empty(max_lag + 1, np.float64)
    for k in range(max_lag + 1):
        out[k] = frame[: n - k] @ frame[k:]
    return out


# ---------------------------------------------------------------------------
# loop kernels (njit targets)

def _half_peaks_loop(x):
    n = x.shape[0]
    pol = np.empty(n, np.int8)
    idx = np.empty(n, np.int64)
    val = np.empty(n, np.float64)
    count = 0
    run_sign = 0
    best_i = -1
    best_v = 0.0
    for i in range(n):
        v = x[i]
        s = 0
        if v > 0.0:
            s = 1
        elif v < 0.0:
            s = -1
        if s != run_sign:
            if run_sign != 0:
                pol[count] = run_sign
                idx[count] = best_i
                val[count] = best_v
                count += 1
            run_sign = s
            best_i = i
            best_v = v
        elif s > 0:
            if v > best_v:
                best_v = v
                best_i = i
        elif s < 0:
            if v < best_v:
                best_v = v
                best_i = i
    if run_sign != 0:
        pol[count] = run_sign
        idx[count] = best_i
        val[count] = best_v
        count += 1
    return pol[:count].copy(), idx[:count].copy(), val[:count].copy()


def _extrema_counts_loop(x, start, stop):
    poc = 0
    pot = 0
    nec = 0
    net = 0
    for i in range(start + 1, stop - 1):
        c = x[i]
        a = x[i - 1]
        b = x[i + 1]
        if a < c and c > b:
            if c > 0.0:
                poc += 1
            else:
                nec += 1
        elif a > c and c < b:
            if c > 0.0:
                pot += 1
            else:
                net += 1
    return poc, pot, nec, net


def _autocorr_loop(frame, max_lag):
    n = frame.shape[0]
    out = np.empty(max_lag + 1, np.float64)
    for k in range(max_lag + 1):
        acc = 0.0
        for i in range(n - k):
            acc += frame[i] * frame[i + k]
        out[k] = acc
    return out


NUMBA_ENABLED = False
half_peaks_compiled = None
extrema_counts_compiled = None
autocorr_compiled = None

if _env_wants_numba():
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        half_peaks_compiled = njit(cache=True)(_half_peaks_loop)
        extrema_counts_compiled = njit(cache=True)(_extrema_counts_loop)
        autocorr_compiled = njit(cache=True)(_autocorr_loop)
        NUMBA_ENABLED = True

if NUMBA_ENABLED:
    half_peaks = half_peaks_compiled
    extrema_counts = extrema_counts_compiled
    autocorr = autocorr_compiled
else:
    half_peaks = half_peaks_numpy
    extrema_counts = extrema_counts_numpy
    autocorr = autocorr_numpy
