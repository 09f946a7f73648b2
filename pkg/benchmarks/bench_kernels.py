#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against the pure-numpy fallbacks.

Run: python3 benchmarks/bench_kernels.py
(The active pipeline path follows PSVERIFY_NUMBA; this script times both
implementations directly regardless of the flag.)
"""

import time

import numpy as np

from psverify import _kernels
from psverify.evaluation import VOWEL_FORMANTS, synth_vowel
from psverify.pipeline import PipelineConfig, detect_marks, preprocess_signal


def best_of(fn, repeats=7):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def fmt(seconds):
    return f"{seconds * 1e3:8.3f} ms"


def bench_pair(name, numpy_fn, compiled_fn):
    t_numpy = best_of(numpy_fn)
    if compiled_fn is None:
        print(f"{name:<22} numpy {fmt(t_numpy)}   compiled: unavailable")
        return
    compiled_fn()  # JIT warmup
    t_compiled = best_of(compiled_fn)
    print(
        f"{name:<22} numpy {fmt(t_numpy)}   numba {fmt(t_compiled)}   "
        f"speedup x{t_numpy / t_compiled:.1f}"
    )


def main():
    print(f"numba active in pipeline: {_kernels.NUMBA_ENABLED}")
    signal = synth_vowel(120.0, VOWEL_FORMANTS["a"], 4.0, 16000, seed=1).samples
    frame = signal[: 3 * 133]
    starts = np.arange(0, len(signal) - 160, 133)

    bench_pair(
        "half_peaks",
        lambda: _kernels.half_peaks_numpy(signal),
        (lambda: _kernels.half_peaks_compiled(signal)) if _kernels.half_peaks_compiled else None,
    )
    bench_pair(
        "extrema_counts",
        lambda: [_kernels.extrema_counts_numpy(signal, int(s), int(s) + 133) for s in starts],
        (lambda: [_kernels.extrema_counts_compiled(signal, int(s), int(s) + 133) for s in starts])
        if _kernels.extrema_counts_compiled else None,
    )
    bench_pair(
        "autocorr (lag 12)",
        lambda: [_kernels.autocorr_numpy(frame, 12) for _ in range(100)],
        (lambda: [_kernels.autocorr_compiled(frame, 12) for _ in range(100)])
        if _kernels.autocorr_compiled else None,
    )

    cfg = PipelineConfig()
    utterance = synth_vowel(120.0, VOWEL_FORMANTS["a"], 0.9, 16000, seed=2, silence_pad_s=0.05)
    detect_marks(preprocess_signal(utterance, cfg), cfg)  # warmup
    t = best_of(lambda: detect_marks(preprocess_signal(utterance, cfg), cfg))
    print(f"{'pipeline (1s vowel)':<22} active path {fmt(t)}")


if __name__ == "__main__":
    main()
