"""Rule-based lexicon sentiment scoring with punctuation/caps/negation heuristics.

Scores a text from per-token valences in [-4, 4], adjusted for capitalization
emphasis, degree modifiers, negation, and the contrastive conjunction "but",
then normalizes the summed valence to a compound score in [-1, 1].
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, replace, fields
from importlib import resources

__all__ = [
    "SentimentLexicon",
    "SentimentScores",
    "HeuristicConfig",
    "LexiconError",
    "load_lexicon",
    "default_lexicon",
    "normalize_valence_sum",
    "analyze",
]


class LexiconError(ValueError):
    """Bad lexicon file content."""


SentimentLexicon = dict  # lowercase token -> valence in [-4, 4]


@dataclass(frozen=True)
class SentimentScores:
    positive: float
    neutral: float
    negative: float
    compound: float


@dataclass(frozen=True)
class HeuristicConfig:
    exclamation_boost: float = 0.292   # per "!", capped
    exclamation_cap: int = 4
    question_step: float = 0.18        # per "?" beyond the first, up to question_max
    question_max: float = 0.96
    caps_boost: float = 0.733
    degree_increment: float = 0.293
    negation_factor: float = -0.74
    negation_window: int = 3
    but_weight_before: float = 0.5
    but_weight_after: float = 1.5
    alpha: float = 15.0                # compound normalization constant

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.negation_window < 1:
            raise ValueError("negation window must be >= 1")

    @classmethod
    def from_json(cls, data: bytes) -> "HeuristicConfig":
        """Default config with fields overridden from a JSON object."""
        overrides = json.loads(data.decode("utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown heuristic fields: {sorted(unknown)}")
        return replace(cls(), **overrides)


def load_lexicon(data: bytes) -> SentimentLexicon:
    """Load a tab-separated ``token<TAB>valence`` lexicon; extra columns ignored."""
    lexicon: SentimentLexicon = {}
    for idx, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise LexiconError(f"line {idx}: expected token<TAB>valence")
        token = parts[0].strip().lower()
        try:
            valence = float(parts[1])
        except ValueError:
            raise LexiconError(f"line {idx}: non-numeric valence {parts[1]!r}") from None
        if not -4.0 <= valence <= 4.0:
            raise LexiconError(f"line {idx}: valence out of range [-4, 4]: {valence}")
        lexicon[token] = valence
    return lexicon


def default_lexicon() -> SentimentLexicon:
    data = resources.files("aspectcast").joinpath("data").joinpath("sentiment_lexicon.txt").read_bytes()
    return load_lexicon(data)


# Degree modifiers: boosters raise the following sentiment token's magnitude,
# dampeners lower it. Sign is applied relative to the token's valence sign.
_BOOSTERS = {
    "very", "really", "extremely", "absolutely", "completely", "incredibly",
    "totally", "highly", "hugely", "remarkably", "exceptionally", "especially",
    "particularly", "truly", "unbelievably", "so",
}
_DAMPENERS = {
    "slightly", "somewhat", "barely", "hardly", "marginally", "kinda",
    "fairly", "moderately", "partly", "occasionally", "sort", "kind",
}
_NEGATIONS = {
    "not", "no", "never", "none", "neither", "nor", "cannot", "cant",
    "dont", "doesnt", "didnt", "isnt", "wasnt", "arent", "werent", "wont",
    "wouldnt", "couldnt", "shouldnt", "aint", "without", "lack", "lacking",
}
# Scaling of a degree modifier's effect by distance from the sentiment token.
_DISTANCE_DECAY = (1.0, 0.95, 0.9)

_WORD_CLEAN_RE = re.compile(r"^\W+|\W+$")


def _clean(token: str) -> str:
    return _WORD_CLEAN_RE.sub("", token).replace("'", "")


def _punctuation_emphasis(text: str, cfg: HeuristicConfig) -> float:
    excl = min(text.count("!"), cfg.exclamation_cap)
    emphasis = excl * cfg.exclamation_boost
    qm = text.count("?")
    if qm > 1:
        emphasis += min((qm - 1) * cfg.question_step, cfg.question_max)
    return emphasis


def normalize_valence_sum(total: float, alpha: float = 15.0) -> float:
    """Map a summed valence onto [-1, 1]: total / sqrt(total^2 + alpha)."""
    return max(-1.0, min(1.0, total / math.sqrt(total * total + alpha)))


def analyze(text: str, lexicon: SentimentLexicon, config: HeuristicConfig | None = None) -> SentimentScores:
    """Score one text; unknown tokens are neutral, empty text scores all zeros."""
    cfg = config or HeuristicConfig()
    raw_tokens = text.split()
    words = [_clean(t) for t in raw_tokens]
    keep = [i for i, w in enumerate(words) if w]
    if not keep:
        return SentimentScores(0.0, 0.0, 0.0, 0.0)
    raw_tokens = [raw_tokens[i] for i in keep]
    words = [words[i] for i in keep]
    lowered = [w.lower() for w in words]

    is_caps = [w.isupper() and any(c.isalpha() for c in w) for w in words]
    letter_flags = [c for c, w in zip(is_caps, words) if any(ch.isalpha() for ch in w)]
    # caps emphasis only applies when the text is mixed-case (not shouting throughout)
    mixed_case = bool(letter_flags) and not all(letter_flags)

    valences = []
    for i, word in enumerate(lowered):
        v = lexicon.get(word, 0.0)
        if v != 0.0:
            sign = 1.0 if v > 0 else -1.0
            if mixed_case and is_caps[i]:
                v += sign * cfg.caps_boost
            # degree modifiers in the few tokens before this one
            for dist in range(1, min(3, i) + 1):
                prev = lowered[i - dist]
                scalar = 0.0
                if prev in _BOOSTERS:
                    scalar = cfg.degree_increment
                elif prev in _DAMPENERS:
                    scalar = -cfg.degree_increment
                if scalar != 0.0:
                    scalar *= _DISTANCE_DECAY[dist - 1]
                    if mixed_case and is_caps[i - dist]:
                        scalar += math.copysign(cfg.caps_boost * 0.25, scalar)
                    v += sign * scalar
            # negation within the window before this token
            lo = max(0, i - cfg.negation_window)
            if any(lowered[j] in _NEGATIONS for j in range(lo, i)):
                v *= cfg.negation_factor
        valences.append(v)

    if "but" in lowered:
        pivot = lowered.index("but")
        valences = [
            v * (cfg.but_weight_before if i < pivot else cfg.but_weight_after if i > pivot else 1.0)
            for i, v in enumerate(valences)
        ]

    total = sum(valences)
    emphasis = _punctuation_emphasis(text, cfg)
    if total > 0:
        total += emphasis
    elif total < 0:
        total -= emphasis

    compound = normalize_valence_sum(total, cfg.alpha)

    # proportions: each token contributes mass |v| + 1 to its pole, neutral
    # tokens mass 1; punctuation emphasis is credited to the dominant pole
    pos_mass = sum(v + 1.0 for v in valences if v > 0)
    neg_mass = sum(-v + 1.0 for v in valences if v < 0)
    neu_mass = float(sum(1 for v in valences if v == 0))
    if total > 0:
        pos_mass += emphasis
    elif total < 0:
        neg_mass += emphasis
    denom = pos_mass + neg_mass + neu_mass
    if denom == 0:
        return SentimentScores(0.0, 0.0, 0.0, compound)
    return SentimentScores(pos_mass / denom, neu_mass / denom, neg_mass / denom, compound)
