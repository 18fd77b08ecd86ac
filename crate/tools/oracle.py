#!/usr/bin/env python3
"""Brute-force oracle for the entropy/transmission pipeline.

Recomputes everything straight from the definitions (probabilities as
relative frequencies, H = -sum p log2 p, T as entropy sums), sharing no
code with the library. Used to freeze golden fixtures for the test suite.

Usage:
  oracle.py --input corpus.jsonl --scheme scheme.tsv --countries countries.tsv \
            --stopwords stopwords.txt [--top-words N] [--top-refs N] [--min-token-len K]

Prints a JSON document with the cube, the between-group decomposition and
the transmission values.
"""

import argparse
import json
import math
import re
import sys


def read_tsv(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, value = line.split("\t")
            rows.append((key.strip(), value.strip()))
    return rows


def read_stopwords(path):
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return words


def tokenize(title, stopwords, min_len):
    tokens = re.split(r"[^0-9a-z\-]+", title.lower())
    return [t for t in tokens if len(t) >= min_len and t not in stopwords]


def normalize_reference(raw):
    collapsed = " ".join(raw.strip().upper().split())
    key = collapsed.rstrip("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~").rstrip()
    return key or None


def countries_of(address, table):
    last = address.rsplit(",", 1)[-1].strip().rstrip(".").upper()
    code = table.get(last)
    return [code] if code else []


def top_n(counts, n):
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [label for label, _ in ordered[:n]]


def entropy(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--input", required=True)
    ap.add_argument("--scheme", required=True)
    ap.add_argument("--countries", required=True)
    ap.add_argument("--stopwords", required=True)
    ap.add_argument("--top-words", type=int, default=250)
    ap.add_argument("--top-refs", type=int, default=250)
    ap.add_argument("--min-token-len", type=int, default=2)
    args = ap.parse_args()

    country_table = {alias.upper(): code for alias, code in read_tsv(args.countries)}
    scheme = dict(read_tsv(args.scheme))
    stopwords = read_stopwords(args.stopwords)

    docs = []
    with open(args.input, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                docs.append(json.loads(line))

    word_counts, ref_counts = {}, {}
    prepared = []
    for doc in docs:
        words = tokenize(doc.get("title", ""), stopwords, args.min_token_len)
        refs = [k for k in (normalize_reference(r) for r in doc.get("references", [])) if k]
        groups = set()
        for address in doc.get("addresses", []):
            for code in countries_of(address, country_table):
                if code in scheme:
                    groups.add(scheme[code])
        for w in words:
            word_counts[w] = word_counts.get(w, 0) + 1
        for r in refs:
            ref_counts[r] = ref_counts.get(r, 0) + 1
        prepared.append((words, refs, groups))

    x_labels = top_n(ref_counts, args.top_refs)
    y_labels = top_n(word_counts, args.top_words)
    z_labels = sorted({g for _, _, groups in prepared for g in groups})
    x_index = {l: i for i, l in enumerate(x_labels)}
    y_index = {l: i for i, l in enumerate(y_labels)}
    z_index = {l: i for i, l in enumerate(z_labels)}

    counts = {}
    for words, refs, groups in prepared:
        xs = sorted({x_index[r] for r in refs if r in x_index})
        ys = sorted({y_index[w] for w in words if w in y_index})
        for x in xs:
            for y in ys:
                for g in groups:
                    key = (x, y, z_index[g])
                    counts[key] = counts.get(key, 0) + 1
    total = sum(counts.values())
    if total == 0:
        sys.exit("degenerate cube: no co-occurrences")

    # Full-cube entropy and marginals, straight from the definition.
    def marginal_entropy(project):
        masses = {}
        for key, c in counts.items():
            k = project(key)
            masses[k] = masses.get(k, 0) + c
        return entropy([m / total for m in masses.values()])

    h_xyz = entropy([c / total for c in counts.values()])
    h_x = marginal_entropy(lambda k: k[0])
    h_y = marginal_entropy(lambda k: k[1])
    h_z = marginal_entropy(lambda k: k[2])
    h_xy = marginal_entropy(lambda k: (k[0], k[1]))
    h_xz = marginal_entropy(lambda k: (k[0], k[2]))
    h_yz = marginal_entropy(lambda k: (k[1], k[2]))

    groups_out = []
    sigma_h = 0.0
    for label in z_labels:
        z = z_index[label]
        slice_counts = {k[:2]: c for k, c in counts.items() if k[2] == z}
        mass = sum(slice_counts.values())
        weight = mass / total
        h_g = entropy([c / mass for c in slice_counts.values()]) if mass else 0.0
        sigma_h += weight * h_g
        groups_out.append({"label": label, "weight": weight, "entropy": h_g})
    h0 = h_xyz - sigma_h

    result = {
        "cube": {
            "x_labels": x_labels,
            "y_labels": y_labels,
            "z_labels": z_labels,
            "total": total,
            "cells": [[x, y, z, c] for (x, y, z), c in sorted(counts.items())],
        },
        "decomposition": {
            "h_total": h_xyz,
            "groups": groups_out,
            "sigma_h": sigma_h,
            "h0": h0,
            "pct_h0": 100.0 * h0 / h_xyz if h_xyz else 0.0,
        },
        "transmission": {
            "h_x": h_x,
            "h_y": h_y,
            "h_z": h_z,
            "h_xy": h_xy,
            "h_xz": h_xz,
            "h_yz": h_yz,
            "h_xyz": h_xyz,
            "t_xy": h_x + h_y - h_xy,
            "t_xz": h_x + h_z - h_xz,
            "t_yz": h_y + h_z - h_yz,
            "t_xyz": h_x + h_y + h_z - h_xyz,
        },
    }
    json.dump(result, sys.stdout, indent=2)
    print()


if __name__ == "__main__":
    main()
