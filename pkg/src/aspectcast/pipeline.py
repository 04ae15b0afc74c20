"""End-to-end orchestration: ingest -> sentiment -> features -> fit -> evaluate."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import aspects as aspects_mod
from . import corpus as corpus_mod
from . import features as features_mod
from . import sentiment as sentiment_mod
from .evaluation import EvalReport, backtest
from .features import FeatureMatrix, GrowthSeries
from .models import ForecasterSpec

__all__ = ["PipelineConfig", "StageError", "load_inputs", "score_reviews",
           "build_perceptions", "build_matrix", "run_pipeline", "DEFAULT_MODELS"]


class StageError(RuntimeError):
    """Failure attributed to one named pipeline stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


# Table-3-shaped default: the objective baseline plus each subjective model
# on the 13- and 16-aspect sets.
DEFAULT_MODELS = [
    {"kind": "arima", "label": "ARIMA", "orders": [1, 0, 0]},
    {"kind": "lr", "label": "LR-13", "aspects": 13},
    {"kind": "lr", "label": "LR-16", "aspects": 16},
    {"kind": "mlp", "label": "ANN-13", "aspects": 13},
    {"kind": "mlp", "label": "ANN-16", "aspects": 16},
    {"kind": "svr", "label": "SVM-13", "aspects": 13},
    {"kind": "svr", "label": "SVM-16", "aspects": 16},
]


def _bundled(name: str) -> Path:
    return Path(str(resources.files("aspectcast").joinpath(f"data/{name}")))


@dataclass
class PipelineConfig:
    reviews_path: Path
    revenue_path: Path
    vocabulary_path: Path | None = None
    lexicon_path: Path | None = None
    heuristics_path: Path | None = None
    aspect_set: object = 16           # 13, 16, or an explicit id list
    include_lag: bool = True
    split_ratio: tuple = (2, 1)
    seed: int = 0
    models: list = field(default_factory=lambda: [dict(m) for m in DEFAULT_MODELS])
    out_dir: Path = Path("out")

    @classmethod
    def from_file(cls, path, overrides: dict | None = None) -> "PipelineConfig":
        try:
            obj = json.loads(Path(path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise StageError("config", f"{path}: {e}") from None
        return cls.from_dict(obj, overrides, base=Path(path).parent)

    @classmethod
    def from_dict(cls, obj: dict, overrides: dict | None = None, base: Path | None = None) -> "PipelineConfig":
        merged = dict(obj)
        for key, value in (overrides or {}).items():
            if value is not None:
                merged[key] = value

        def resolve(key, default=None):
            value = merged.get(key, default)
            if value is None:
                return None
            p = Path(value)
            if base is not None and not p.is_absolute():
                p = base / p
            return p

        reviews = resolve("reviews") or _bundled("synthetic/reviews.jsonl")
        revenue = resolve("revenue") or _bundled("synthetic/revenue.csv")
        return cls(
            reviews_path=reviews,
            revenue_path=revenue,
            vocabulary_path=resolve("vocabulary"),
            lexicon_path=resolve("lexicon"),
            heuristics_path=resolve("heuristics"),
            aspect_set=merged.get("aspects", 16),
            include_lag=bool(merged.get("include_lag", True)),
            split_ratio=tuple(merged.get("split_ratio", (2, 1))),
            seed=int(merged.get("seed", 0)),
            models=[dict(m) for m in merged.get("models", DEFAULT_MODELS)],
            out_dir=Path(merged.get("out", "out")),
        )

    @classmethod
    def defaults(cls, **overrides) -> "PipelineConfig":
        return cls.from_dict({}, overrides)


def resolve_aspect_set(value) -> list:
    if value in (13, "13"):
        return list(aspects_mod.ASPECT_SET_13)
    if value in (16, "16"):
        return list(aspects_mod.ASPECT_SET_16)
    if isinstance(value, (list, tuple)):
        unknown = [a for a in value if a not in aspects_mod.ASPECT_SET_16]
        if unknown:
            raise StageError("config", f"unknown aspect ids: {unknown}")
        return list(value)
    raise StageError("config", f"bad aspect set: {value!r}")


def load_inputs(cfg: PipelineConfig):
    """Parse reviews, revenue, vocabulary, lexicon, and heuristics per config."""
    try:
        reviews = corpus_mod.parse_reviews(Path(cfg.reviews_path).read_bytes(), "jsonl")
    except (OSError, corpus_mod.CorpusError) as e:
        raise StageError("ingest", f"{cfg.reviews_path}: {e}") from None
    try:
        revenue = corpus_mod.parse_revenue(Path(cfg.revenue_path).read_bytes())
    except (OSError, corpus_mod.CorpusError) as e:
        raise StageError("ingest", f"{cfg.revenue_path}: {e}") from None
    try:
        if cfg.vocabulary_path:
            vocab = aspects_mod.load_vocabulary(Path(cfg.vocabulary_path).read_bytes())
        else:
            vocab = aspects_mod.default_vocabulary()
    except (OSError, aspects_mod.VocabularyError) as e:
        raise StageError("ingest", f"vocabulary: {e}") from None
    try:
        if cfg.lexicon_path:
            lexicon = sentiment_mod.load_lexicon(Path(cfg.lexicon_path).read_bytes())
        else:
            lexicon = sentiment_mod.default_lexicon()
        if cfg.heuristics_path:
            heuristics = sentiment_mod.HeuristicConfig.from_json(Path(cfg.heuristics_path).read_bytes())
        else:
            heuristics = sentiment_mod.HeuristicConfig()
    except (OSError, ValueError) as e:
        raise StageError("ingest", f"lexicon/heuristics: {e}") from None
    return reviews, revenue, vocab, lexicon, heuristics


def score_reviews(reviews, lexicon, heuristics):
    """Sentiment scores per review, in input order."""
    return [sentiment_mod.analyze(r.text, lexicon, heuristics) for r in reviews]


def build_perceptions(reviews, scores, vocab):
    """Per-(aspect, quarter) perception records over the matched reviews."""
    compound_by_review = {r.id: s.compound for r, s in zip(reviews, scores)}
    buckets: dict = {}
    for review in reviews:
        for match in aspects_mod.match_aspects(review, vocab):
            buckets.setdefault((match.aspect_id, review.quarter), []).append(
                compound_by_review[review.id]
            )
    return [
        features_mod.perception(aspect_id, quarter, compounds)
        for (aspect_id, quarter), compounds in sorted(
            buckets.items(), key=lambda kv: (kv[0][0], kv[0][1])
        )
    ]


def build_matrix(cfg: PipelineConfig, reviews, revenue, vocab, lexicon, heuristics,
                 aspect_set=None) -> tuple[FeatureMatrix, GrowthSeries]:
    aspect_ids = resolve_aspect_set(aspect_set if aspect_set is not None else cfg.aspect_set)
    try:
        growth = features_mod.revenue_growth(revenue)
        scores = score_reviews(reviews, lexicon, heuristics)
        perceptions = build_perceptions(reviews, scores, vocab)
        matrix = features_mod.assemble(perceptions, growth, aspect_ids, cfg.include_lag)
    except (features_mod.FeatureError, ValueError) as e:
        raise StageError("features", str(e)) from None
    return matrix, growth


def run_pipeline(cfg: PipelineConfig) -> EvalReport:
    """Full experiment: every configured model backtested on the same split."""
    reviews, revenue, vocab, lexicon, heuristics = load_inputs(cfg)
    growth = features_mod.revenue_growth(revenue)
    scores = score_reviews(reviews, lexicon, heuristics)
    perceptions = build_perceptions(reviews, scores, vocab)

    matrices: dict = {}

    def matrix_for(aspect_value) -> FeatureMatrix:
        key = json.dumps(aspect_value)
        if key not in matrices:
            aspect_ids = resolve_aspect_set(aspect_value)
            try:
                matrices[key] = features_mod.assemble(
                    perceptions, growth, aspect_ids, cfg.include_lag
                )
            except features_mod.FeatureError as e:
                raise StageError("features", str(e)) from None
        return matrices[key]

    report = EvalReport()
    for entry in cfg.models:
        entry = dict(entry)
        kind = entry.pop("kind")
        label = entry.pop("label", kind)
        aspect_value = entry.pop("aspects", cfg.aspect_set)
        seed = int(entry.pop("seed", cfg.seed))
        spec = ForecasterSpec.make(kind, label=label, seed=seed, **entry)
        matrix = matrix_for(aspect_value)
        try:
            row = backtest(spec, matrix, cfg.split_ratio, growth=growth)
        except Exception as e:
            raise StageError("fit", f"model {label!r}: {e}") from None
        report.rows.append(row)
    return report
