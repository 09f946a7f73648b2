"""Speaker models: per-(speaker, vowel) mean feature vectors and their
line-oriented persistence format."""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .features import UtteranceFeatures, VOWELS

MODEL_DIM = 16
FORMAT_HEADER = "PSV-MODELS v1"


def _check_speaker_id(speaker_id: str) -> None:
    if not speaker_id or any(ch.isspace() for ch in speaker_id):
        raise ValueError(f"speaker id must be non-empty and contain no whitespace: {speaker_id!r}")


@dataclass(frozen=True, eq=False)
class SpeakerModel:
    speaker_id: str
    vowel: str
    mean_features: np.ndarray
    n_utterances: int

    def __post_init__(self):
        _check_speaker_id(self.speaker_id)
        if self.vowel not in VOWELS:
            raise ValueError(f"unknown vowel {self.vowel!r}")
        arr = np.asarray(self.mean_features, dtype=np.float64)
        object.__setattr__(self, "mean_features", arr)
        if arr.shape != (MODEL_DIM,):
            raise ValueError(f"model must hold {MODEL_DIM} values, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("model values must be finite")
        if self.n_utterances < 1:
            raise ValueError("model needs at least one utterance")

    @property
    def temporal(self) -> np.ndarray:
        return self.mean_features[:4]

    @property
    def cepstral(self) -> np.ndarray:
        return self.mean_features[4:]


@dataclass
class ModelSet:
    models: dict = field(default_factory=dict)
    version: str = FORMAT_HEADER

    def add(self, model: SpeakerModel) -> None:
        key = (model.speaker_id, model.vowel)
        if key in self.models:
            raise ValueError(f"duplicate model for {key}")
        self.models[key] = model

    def speakers(self) -> list[str]:
        return sorted({sid for sid, _ in self.models})

    def for_vowel(self, vowel: str) -> list[SpeakerModel]:
        return [m for (sid, v), m in sorted(self.models.items()) if v == vowel]


def build_model(speaker_id: str, vowel: str, features) -> SpeakerModel:
    """Coordinate-wise mean of the utterances' 16-value vectors."""
    features = list(features)
    if not features:
        raise ValueError("cannot build a model from zero utterances")
    for f in features:
        if not isinstance(f, UtteranceFeatures):
            raise TypeError("expected UtteranceFeatures")
        if f.vowel != vowel:
            raise ValueError(f"mixed vowels: model is {vowel!r}, utterance is {f.vowel!r}")
    mean = np.mean([f.vector for f in features], axis=0)
    return SpeakerModel(speaker_id, vowel, mean, len(features))


def save_models(model_set: ModelSet, path) -> None:
    """Write the v1 text format, one model per line, sorted by (speaker, vowel)."""
    lines = [FORMAT_HEADER]
    for (sid, vowel), model in sorted(model_set.models.items()):
        values = " ".join(format(v, ".12g") for v in model.mean_features)
        lines.append(f"{sid} {vowel} {model.n_utterances} {values}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_models(path) -> ModelSet:
    """Read the v1 text format back, validating layout and key uniqueness."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise ValueError(f"{path}: expected header {FORMAT_HEADER!r}")
    model_set = ModelSet()
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        tokens = line.split()
        if len(tokens) != 3 + MODEL_DIM:
            raise ValueError(
                f"{path}: line {lineno}: expected {3 + MODEL_DIM} fields, got {len(tokens)}"
            )
        sid, vowel, n_text = tokens[:3]
        try:
            n = int(n_text)
            values = np.array([float(t) for t in tokens[3:]])
        except ValueError:
            raise ValueError(f"{path}: line {lineno}: malformed number") from None
        if (sid, vowel) in model_set.models:
            raise ValueError(f"{path}: line {lineno}: duplicate model for ({sid}, {vowel})")
        model_set.add(SpeakerModel(sid, vowel, values, n))
    return model_set
