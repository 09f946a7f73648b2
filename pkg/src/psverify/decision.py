"""Tokhura-distance matching and the agree-or-reject fusion rule.

Cepstral and temporal distances are minimized separately; a trial is
accepted only when both nearest speakers coincide, otherwise it is
rejected (and, in a verification setting, the speaker is asked to repeat).
"""

from dataclasses import dataclass, field

import numpy as np

from .features import UtteranceFeatures
from .modeling import ModelSet

# Classical Tokhura weight table; the temporal block defaults to plain
# squared Euclidean. Both are overridable configuration, not claims.
TOKHURA_CEPSTRAL_WEIGHTS = (1.0, 3.0, 7.0, 13.0, 19.0, 22.0, 25.0, 33.0, 42.0, 50.0, 56.0, 61.0)
DEFAULT_TEMPORAL_WEIGHTS = (1.0, 1.0, 1.0, 1.0)

VERIFIED = "verified"
IMPOSTOR = "impostor"
RETRY = "retry"


@dataclass(frozen=True, eq=False)
class DistanceWeights:
    cepstral_weights: np.ndarray = field(default_factory=lambda: np.array(TOKHURA_CEPSTRAL_WEIGHTS))
    temporal_weights: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_TEMPORAL_WEIGHTS))

    def __post_init__(self):
        cep = np.asarray(self.cepstral_weights, dtype=np.float64)
        tem = np.asarray(self.temporal_weights, dtype=np.float64)
        object.__setattr__(self, "cepstral_weights", cep)
        object.__setattr__(self, "temporal_weights", tem)
        if cep.shape != (12,) or tem.shape != (4,):
            raise ValueError("need 12 cepstral and 4 temporal weights")
        if np.any(cep <= 0) or np.any(tem <= 0):
            raise ValueError("all distance weights must be positive")


@dataclass(frozen=True)
class DistanceReport:
    """Per-speaker distances for one test utterance, one family at a time."""

    cepstral_distances: dict
    temporal_distances: dict
    argmin_cepstral: str
    argmin_temporal: str


@dataclass(frozen=True)
class VerificationOutcome:
    accepted: bool
    speaker_id: str | None = None

    def __post_init__(self):
        if self.accepted and not self.speaker_id:
            raise ValueError("accepted outcome needs a speaker id")
        if not self.accepted and self.speaker_id is not None:
            raise ValueError("rejected outcome carries no speaker id")


def weighted_distance(x, y, w) -> float:
    """Tokhura's weighted squared-Euclidean distance: sum_i w_i (x_i - y_i)^2."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if x.shape != y.shape or x.shape != w.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape} vs {w.shape}")
    d = x - y
    return float(w @ (d * d))


def _argmin(distances: dict) -> str:
    # ties break towards the lexicographically smallest speaker id
    best = None
    for sid in sorted(distances):
        if best is None or distances[sid] < distances[best]:
            best = sid
    return best


def score_against_models(
    features: UtteranceFeatures,
    model_set: ModelSet,
    weights: DistanceWeights | None = None,
) -> DistanceReport:
    """Distances from the test vector to every same-vowel speaker model.

    The 12-dimensional cepstral distance and the 4-dimensional temporal
    distance are computed and minimized independently.
    """
    if weights is None:
        weights = DistanceWeights()
    models = model_set.for_vowel(features.vowel)
    if not models:
        raise ValueError(f"no enrolled model for vowel {features.vowel!r}")
    cep = {}
    tem = {}
    for model in models:
        cep[model.speaker_id] = weighted_distance(
            features.cepstral.c, model.cepstral, weights.cepstral_weights
        )
        tem[model.speaker_id] = weighted_distance(
            features.temporal.vector, model.temporal, weights.temporal_weights
        )
    return DistanceReport(cep, tem, _argmin(cep), _argmin(tem))


def identify_combined(report: DistanceReport) -> VerificationOutcome:
    """Accept only when the cepstral and temporal nearest speakers agree."""
    if report.argmin_cepstral == report.argmin_temporal:
        return VerificationOutcome(True, report.argmin_cepstral)
    return VerificationOutcome(False)


def verify_claim(report: DistanceReport, claimed: str) -> str:
    """Check an identity claim: 'verified', 'impostor', or 'retry'.

    A rejected (disagreeing) trial is a retry: the speaker is asked to
    speak once more.
    """
    if claimed not in report.cepstral_distances:
        raise ValueError(f"unknown claimed speaker {claimed!r}")
    outcome = identify_combined(report)
    if not outcome.accepted:
        return RETRY
    return VERIFIED if outcome.speaker_id == claimed else IMPOSTOR
