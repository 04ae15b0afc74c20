"""Regenerate the bundled synthetic review corpus and revenue series.

Deterministic (fixed seed). Run from the repo root after an editable install:

    python scripts/make_synthetic_corpus.py
"""

import json
import random
from pathlib import Path

from aspectcast.aspects import ASPECT_SET_16, default_vocabulary
from aspectcast.corpus import Quarter

OUT = Path(__file__).resolve().parent.parent / "src" / "aspectcast" / "data" / "synthetic"

POSITIVE_TEMPLATES = [
    "The {phrase} has been great for our team",
    "Really happy with the {phrase}, works as expected",
    "Excellent {phrase}, we are very satisfied!",
    "The {phrase} is reliable and easy to manage",
    "Good experience overall, the {phrase} impressed us",
    "We love the {phrase} and recommend it",
]
NEGATIVE_TEMPLATES = [
    "The {phrase} is a constant problem for us",
    "Disappointed with the {phrase}, too many issues",
    "The {phrase} caused real trouble last month",
    "Not happy with the {phrase} at all",
    "Terrible {phrase}, we struggled for weeks",
    "The {phrase} is frustrating and slow to fix",
]
NEUTRAL_TEMPLATES = [
    "We evaluated the {phrase} this quarter",
    "Our department reviewed the {phrase} in detail",
]


def pick_phrase(rng, vocab, aspect_id):
    return rng.choice(sorted(vocab.for_aspect(aspect_id)))


def main():
    rng = random.Random(42)
    vocab = default_vocabulary()
    OUT.mkdir(parents=True, exist_ok=True)

    # revenue: 2010Q4 .. 2018Q4 (33 quarters), noisy upward drift
    quarters = [Quarter(2010, 4)]
    while quarters[-1] != Quarter(2018, 4):
        quarters.append(quarters[-1].next())
    revenue = [1000.0]
    for _ in quarters[1:]:
        growth = rng.uniform(0.02, 0.14) - (0.05 if rng.random() < 0.15 else 0.0)
        revenue.append(round(revenue[-1] * (1.0 + growth), 3))
    with open(OUT / "revenue.csv", "w", encoding="utf-8") as fh:
        fh.write("quarter,revenue\n")
        for q, v in zip(quarters, revenue):
            fh.write(f"{q},{v}\n")

    # reviews: 7 per quarter from 2011Q1 on (224 total)
    review_quarters = quarters[1:]
    lines = []
    counter = 0
    for q in review_quarters:
        for _ in range(7):
            counter += 1
            n_aspects = 1 if rng.random() < 0.6 else 2
            chosen = rng.sample(ASPECT_SET_16, n_aspects)
            parts = []
            for aspect_id in chosen:
                phrase = pick_phrase(rng, vocab, aspect_id)
                roll = rng.random()
                if roll < 0.55:
                    template = rng.choice(POSITIVE_TEMPLATES)
                elif roll < 0.85:
                    template = rng.choice(NEGATIVE_TEMPLATES)
                else:
                    template = rng.choice(NEUTRAL_TEMPLATES)
                parts.append(template.format(phrase=phrase))
            text = ". ".join(parts)
            lines.append(json.dumps(
                {"id": f"r{counter:04d}", "quarter": str(q), "text": text, "source": "synthetic"}
            ))
    (OUT / "reviews.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} reviews, {len(quarters)} revenue quarters to {OUT}")


if __name__ == "__main__":
    main()
