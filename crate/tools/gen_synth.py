#!/usr/bin/env python3
"""Generates the committed 200-document synthetic corpus (synth200.jsonl).

Three blocs (EU, Japan, USA) with group-biased word and reference
distributions so that the transmission values are comfortably non-zero.
Deterministic: fixed seed, run once, output committed.
"""

import json
import random

SEED = 19960401
N_DOCS = 200

WORDS = [f"topic{i:02d}" for i in range(90)]
REFS = [
    f"AUTHOR{i:03d} A, 19{80 + i % 18}, J SYNTH RES, V{i + 1}, P{3 * i + 1}"
    for i in range(140)
]

BLOC_ADDRESSES = {
    "EU": [
        "UNIV AMSTERDAM, AMSTERDAM, NETHERLANDS",
        "CNRS, PARIS, FRANCE",
        "MAX PLANCK INST, MUNICH, GERMANY",
        "UNIV CAMBRIDGE, CAMBRIDGE, ENGLAND",
        "UNIV BOLOGNA, BOLOGNA, ITALY",
    ],
    "Japan": [
        "UNIV TOKYO, TOKYO, JAPAN",
        "KYOTO UNIV, KYOTO, JAPAN",
        "OSAKA UNIV, OSAKA, JAPAN",
    ],
    "USA": [
        "MIT, CAMBRIDGE, MA 02139, USA",
        "STANFORD UNIV, STANFORD, CA 94305, USA",
        "UNIV WISCONSIN, MADISON, WI 53706, USA",
    ],
}
BLOCS = ["EU", "Japan", "USA"]


def biased_weights(n, offset, sharpness=1.3):
    # Zipf-like weights rotated per group so the groups specialize.
    return [1.0 / ((1 + (i + offset) % n) ** sharpness) for i in range(n)]


def main():
    rng = random.Random(SEED)
    word_w = {b: biased_weights(len(WORDS), 30 * k) for k, b in enumerate(BLOCS)}
    ref_w = {b: biased_weights(len(REFS), 47 * k) for k, b in enumerate(BLOCS)}

    lines = []
    for i in range(N_DOCS):
        bloc = BLOCS[i % 3]
        addresses = [rng.choice(BLOC_ADDRESSES[bloc])]
        if rng.random() < 0.12:
            other = rng.choice([b for b in BLOCS if b != bloc])
            addresses.append(rng.choice(BLOC_ADDRESSES[other]))
        title_words = rng.choices(WORDS, weights=word_w[bloc], k=rng.randint(5, 8))
        title = " ".join(title_words).capitalize()
        refs = sorted(set(rng.choices(REFS, weights=ref_w[bloc], k=rng.randint(6, 12))))
        lines.append(
            json.dumps(
                {
                    "id": f"s{i:04d}",
                    "year": 1996,
                    "title": title,
                    "journal": "J SYNTH RES",
                    "addresses": addresses,
                    "references": refs,
                },
                separators=(",", ":"),
            )
        )
    print("\n".join(lines))


if __name__ == "__main__":
    main()
