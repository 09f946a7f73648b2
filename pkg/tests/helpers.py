"""Independent oracles used by the tests; deliberately take different
routes than the library code they check."""

import numpy as np


def brute_extrema(x):
    """Classify every interior sample as strict local max/min, binned by
    the sign of the centre sample."""
    poc = pot = nec = net = 0
    for i in range(1, len(x) - 1):
        if x[i - 1] < x[i] > x[i + 1]:
            if x[i] > 0:
                poc += 1
            else:
                nec += 1
        elif x[i - 1] > x[i] < x[i + 1]:
            if x[i] > 0:
                pot += 1
            else:
                net += 1
    return poc, pot, nec, net


def toeplitz_lpc(r, order):
    """Dense solve of the Toeplitz normal equations."""
    r = np.asarray(r, dtype=np.float64)
    t = np.empty((order, order))
    for i in range(order):
        for j in range(order):
            t[i, j] = r[abs(i - j)]
    return np.linalg.solve(t, r[1 : order + 1])


def spectral_cepstra(a, n_ceps, n_fft=1 << 18):
    """Cepstrum of log|1/A| by dense FFT quadrature of the log spectrum."""
    a = np.asarray(a, dtype=np.float64)
    poly = np.zeros(n_fft)
    poly[0] = 1.0
    poly[1 : a.size + 1] = -a
    log_mag = -np.log(np.abs(np.fft.rfft(poly)))
    ceps = np.fft.irfft(log_mag, n_fft)
    return 2.0 * ceps[1 : n_ceps + 1]


def lpc_from_reflection(ks):
    """Step-up recursion: reflection coefficients to a stable predictor."""
    a = np.zeros(0)
    for k in ks:
        grown = np.empty(a.size + 1)
        grown[: a.size] = a - k * a[::-1]
        grown[a.size] = k
        a = grown
    return a


def random_stable_predictor(rng, order=12, max_pole_modulus=0.98):
    """Stable random predictor with pole moduli bounded away from 1.

    The bound keeps log|A| resolvable by the FFT quadrature in
    spectral_cepstra; poles within ~1e-5 of the unit circle would need an
    impractically dense grid to reach 1e-6 accuracy.
    """
    while True:
        a = lpc_from_reflection(rng.uniform(-0.9, 0.9, order))
        poles = np.roots(np.concatenate(([1.0], -a)))
        if np.max(np.abs(poles)) <= max_pole_modulus:
            return a


def brute_argmin(distances):
    """Smallest distance, ties to the lexicographically smallest id."""
    return min(distances, key=lambda sid: (distances[sid], sid))


def autocorr_period(x, min_lag, max_lag):
    """Lag of the autocorrelation peak inside [min_lag, max_lag]."""
    x = np.asarray(x, dtype=np.float64)
    acf = np.array([x[: x.size - k] @ x[k:] for k in range(max_lag + 1)])
    return min_lag + int(np.argmax(acf[min_lag : max_lag + 1]))
