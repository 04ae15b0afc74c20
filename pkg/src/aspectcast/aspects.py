"""The 16 cloud aspects, keyword vocabularies, and phrase-based review matching."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .corpus import Review

__all__ = [
    "Aspect",
    "AspectVocabulary",
    "AspectMatch",
    "VocabularyError",
    "builtin_aspects",
    "aspect_ids",
    "load_vocabulary",
    "default_vocabulary",
    "match_aspects",
    "term_frequencies",
    "ASPECT_SET_13",
    "ASPECT_SET_16",
]


class VocabularyError(ValueError):
    """Bad vocabulary file content."""


@dataclass(frozen=True)
class Aspect:
    id: str
    name: str
    description: str


# Table order: the 13 product/service-quality drivers first, then the three
# added ones (after-sales, responsiveness, execution).
_ASPECTS = [
    ("greater_scalability", "Greater scalability", "Flexible to either up-scale or down-scale"),
    ("faster_access_to_infrastructure", "Faster access to infrastructure",
     "Easy access to infrastructure without having to purchase it"),
    ("managing_multiple_services", "Managing multiple services",
     "Overheads and difficulty in managing multiple services"),
    ("security_concerns", "Security concerns",
     "Concerns over data breaches, privacy, access control"),
    ("cost_savings", "Cost savings", "Cost saved by transfer to cloud infrastructure"),
    ("higher_availability", "Higher availability", "High availability of cloud services"),
    ("lack_of_control", "Lack of control",
     "Uncertainty of data location, legal issues, and dispute resolution"),
    ("higher_performance", "Higher performance",
     "Higher performance of cloud compared to on-premise infrastructure"),
    ("lack_of_expertise", "Lack of expertise/resources",
     "Lack of specialised people or sufficient resources for managing cloud services"),
    ("it_staff_efficiency", "IT staff efficiency", "Increase of productivity"),
    ("provider_lock_in", "Provider lock-in",
     "Difficulties with changing cloud computing service provider"),
    ("business_continuity", "Business continuity",
     "Ability to continually operate even through disasters"),
    ("capex_to_opex", "Move from CapEx to OpEx",
     "Changing from capital expenditure to operating expense"),
    ("after_sales_experience", "After-sales experience",
     "Ability to provide acceptable customer services"),
    ("market_responsiveness", "Market responsiveness",
     "Ability to enhance the products' after sales"),
    ("marketing_execution", "Marketing execution",
     "Ability to deliver the product that the customer expected"),
]

ASPECT_SET_16 = [a[0] for a in _ASPECTS]
ASPECT_SET_13 = ASPECT_SET_16[:13]


def builtin_aspects() -> list[Aspect]:
    """All 16 aspects in table order."""
    return [Aspect(*row) for row in _ASPECTS]


def aspect_ids() -> list[str]:
    return list(ASPECT_SET_16)


def _normalize_phrase(phrase: str) -> str:
    return " ".join(phrase.lower().split())


@dataclass(frozen=True)
class AspectVocabulary:
    """Per-aspect phrase sets, lowercase and single-space normalized."""

    phrases: dict  # aspect-id -> frozenset of phrases

    def for_aspect(self, aspect_id: str) -> frozenset:
        return self.phrases.get(aspect_id, frozenset())


@dataclass(frozen=True)
class AspectMatch:
    review_id: str
    aspect_id: str
    matched_phrases: frozenset


def load_vocabulary(data: bytes) -> AspectVocabulary:
    """Load a JSON vocabulary mapping aspect ids to phrase arrays."""
    try:
        obj = json.loads(data.decode("utf-8"))
    except json.JSONDecodeError as e:
        raise VocabularyError(f"malformed vocabulary JSON: {e.msg}") from None
    if not isinstance(obj, dict):
        raise VocabularyError("vocabulary must be a JSON object")
    known = set(ASPECT_SET_16)
    phrases = {}
    for aspect_id, entries in obj.items():
        if aspect_id not in known:
            raise VocabularyError(f"unknown aspect id: {aspect_id!r}")
        if not isinstance(entries, list) or not entries:
            raise VocabularyError(f"empty phrase list for aspect {aspect_id!r}")
        normalized = frozenset(_normalize_phrase(str(p)) for p in entries)
        if "" in normalized:
            raise VocabularyError(f"blank phrase for aspect {aspect_id!r}")
        phrases[aspect_id] = normalized
    return AspectVocabulary(phrases=phrases)


def default_vocabulary() -> AspectVocabulary:
    """The bundled vocabulary covering all 16 aspects."""
    data = resources.files("aspectcast").joinpath("data").joinpath("default_vocabulary.json").read_bytes()
    return load_vocabulary(data)


_TOKEN_RE = re.compile(r"[a-z0-9]+")


def _tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def match_aspects(review: Review, vocab: AspectVocabulary) -> list[AspectMatch]:
    """Aspects whose vocabulary phrases occur in the review on token boundaries.

    A k-token phrase matches k consecutive review tokens; a review may match
    several aspects or none.
    """
    tokens = _tokenize(review.text)
    joined = " " + " ".join(tokens) + " "
    matches = []
    for aspect_id in ASPECT_SET_16:
        hits = {p for p in vocab.for_aspect(aspect_id) if f" {p} " in joined}
        if hits:
            matches.append(AspectMatch(review.id, aspect_id, frozenset(hits)))
    return matches


def _default_stopwords() -> frozenset:
    data = resources.files("aspectcast").joinpath("data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in data.splitlines() if w.strip())


def term_frequencies(reviews: list[Review], top_n: int, stopwords=None) -> list[tuple[str, int]]:
    """Most frequent tokens across reviews, stop-words excluded.

    Descending by count, ties broken lexicographically, truncated to top_n.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    if stopwords is None:
        stopwords = _default_stopwords()
    counts = Counter()
    for review in reviews:
        counts.update(t for t in _tokenize(review.text) if t not in stopwords)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n]
