"""Load and store speech signals: plain-text sample files and 16-bit PCM WAV."""

import warnings
import wave
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_SAMPLE_RATE_HZ = 16000


@dataclass(frozen=True, eq=False)
class SampleBuffer:
    """A mono speech signal: real-valued samples at a fixed rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", arr)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("empty signal")
        if not np.all(np.isfinite(arr)):
            raise ValueError("signal contains non-finite amplitudes")
        if self.sample_rate_hz <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate_hz}")

    def __len__(self):
        return self.samples.size


def load_text_samples(path, sample_rate_hz=DEFAULT_SAMPLE_RATE_HZ) -> SampleBuffer:
    """Read a one-number-per-line text signal (the Cool Edit export format).

    Blank lines are ignored; anything else that does not parse as a decimal
    number is reported with its 1-based line number. The format carries no
    header, so the sample rate is supplied by the caller.
    """
    path = Path(path)
    with open(path, encoding="utf-8-sig") as fh:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # loadtxt warns on empty input
                arr = np.loadtxt(fh, dtype=np.float64, comments=None, ndmin=1)
        except ValueError:
            arr = None
    if arr is None or arr.ndim != 1:
        # slow path only to produce a precise diagnostic
        values = []
        with open(path, encoding="utf-8-sig") as fh:
            for lineno, raw in enumerate(fh, 1):
                text = raw.strip()
                if not text:
                    continue
                try:
                    values.append(float(text))
                except ValueError:
                    raise ValueError(
                        f"{path}: line {lineno}: not a number: {text!r}"
                    ) from None
        arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError(f"{path}: empty signal")
    return SampleBuffer(arr, sample_rate_hz)


def load_wav_pcm16(path) -> SampleBuffer:
    """Read a RIFF/WAVE file; only 16-bit PCM mono is accepted."""
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as wav:
            if wav.getcomptype() != "NONE":
                raise ValueError(f"{path}: PCM required, got {wav.getcomptype()}")
            if wav.getnchannels() != 1:
                raise ValueError(f"{path}: mono required, got {wav.getnchannels()} channels")
            if wav.getsampwidth() != 2:
                raise ValueError(f"{path}: 16-bit required, got {8 * wav.getsampwidth()}-bit")
            rate = wav.getframerate()
            data = wav.readframes(wav.getnframes())
    except wave.Error as exc:
        raise ValueError(f"{path}: not a readable PCM WAV file ({exc})") from None
    samples = np.frombuffer(data, dtype="<i2").astype(np.float64)
    if samples.size == 0:
        raise ValueError(f"{path}: empty signal")
    return SampleBuffer(samples, rate)


def load_signal(path, sample_rate_hz=DEFAULT_SAMPLE_RATE_HZ) -> SampleBuffer:
    """Dispatch on extension: .wav/.wave to the WAV reader, else text."""
    if Path(path).suffix.lower() in (".wav", ".wave"):
        return load_wav_pcm16(path)
    return load_text_samples(path, sample_rate_hz)


def write_text_samples(buffer: SampleBuffer, path) -> None:
    """Write one sample per line; round-trips through load_text_samples to 1e-6."""
    np.savetxt(path, buffer.samples, fmt="%.12g")
