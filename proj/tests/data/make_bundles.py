#!/usr/bin/env python3
"""Regenerates the JSONL bundles used by the end-to-end tests.

The outputs are committed; rerun only when changing a bundle on purpose:

    python3 tests/data/make_bundles.py
"""
import json
import math
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def sample(text, embedding, logprobs):
    return {"text": text, "token_logprobs": [float(x) for x in logprobs],
            "embedding": [float(x) for x in embedding]}


def record(rid, tag, greedy, samples, reference):
    return {"v": 1, "id": rid, "prompt": f"Question {rid}?",
            "greedy": {"text": greedy, "token_logprobs": [-0.1, -0.2]},
            "samples": samples, "references": [reference], "dataset_tag": tag,
            "correctness_mode": "exact_match"}


def write(name, rows):
    with open(HERE / name, "w") as f:
        for r in rows:
            f.write(json.dumps(r) + "\n")


# ---------------------------------------------------------------- AUROC bundles
#
# Ten prompts, six samples each in R^4. Correct prompts get a tight cluster
# around a random direction; incorrect prompts split their samples between
# two antipodal directions.


def detection_bundle(rng, invert):
    rows = []
    for k in range(10):
        correct = k % 2 == 0
        base = unit(rng.normal(size=4))
        embs = []
        for i in range(6):
            if correct:
                embs.append(unit(base + 0.05 * rng.normal(size=4)))
            elif invert and k == 1:
                embs.append(base.copy())  # identical samples: rds = rds_w = 0
            else:
                sign = 1.0 if i % 2 == 0 else -1.0
                embs.append(unit(sign * base + 0.05 * rng.normal(size=4)))
        lps = [list(-rng.uniform(0.05, 0.6, size=3)) for _ in range(6)]
        answer = "12" if correct else "13"
        samples = [sample(f"It is {answer}.", e, lp) for e, lp in zip(embs, lps)]
        rows.append(record(f"q{k:02d}", "alpha" if k < 5 else "beta", f"The answer is {answer}.",
                           samples, "12"))
    return rows


# --------------------------------------------------------------- best-of-N
#
# Eight prompts, four samples each. Embeddings are points on a circle in the
# (x, y) plane given by angles in degrees. Columns: answers, angles, token
# log-probabilities. The reference answer is always "5".
BESTOFN = [
    ("b1", ["5", "5", "5", "9"], [10, 20, 30, 150], [[-0.5, -0.5], [-0.4, -0.4, -0.4], [-0.6], [-0.1] * 4]),
    ("b2", ["9", "5", "9", "5"], [0, 35, 100, 140], [[-0.9], [-0.9], [-0.9], [-0.05]]),
    ("b3", ["5", "8", "8", "7"], [0, 60, 70, 80], [[-0.2], [-1.0, -1.0], [-0.8], [-0.7, -0.7]]),
    ("b4", ["4", "4", "5", "5"], [0, 50, 55, 200], [[-0.3, -0.3], [-0.2], [-1.5], [-0.25, -0.25, -0.25]]),
    ("b5", ["5", "5", "5", "5"], [0, 5, 10, 25], [[-0.1], [-0.2], [-0.3], [-0.4]]),
    ("b6", ["1", "2", "3", "4"], [0, 80, 190, 260], [[-0.1], [-0.2], [-0.3], [-0.4]]),
    ("b7", ["6", "5", "6", "6"], [0, 45, 90, 95], [[-0.6, -0.6, -0.6], [-0.3, -0.3, -0.3, -0.3], [-1.2], [-0.9]]),
    ("b8", ["5", "3", "3", "5"], [20, 25, 170, 30], [[-0.4], [-0.05], [-0.3, -0.3], [-0.35, -0.35]]),
]


def bestofn_rows():
    rows = []
    for idx, (rid, answers, angles, lps) in enumerate(BESTOFN):
        embs = [np.array([math.cos(math.radians(a)), math.sin(math.radians(a)), 0.0]) for a in angles]
        samples = [sample(f"So the result is {a}.", e, lp) for a, e, lp in zip(answers, embs, lps)]
        rows.append(record(rid, "even" if idx % 2 else "odd", f"So the result is {answers[0]}.", samples, "5"))
    return rows


def oracle_selections(rows):
    picks = {m: [] for m in ("rds_s", "rds_w_s", "anll", "nll", "sc")}
    margins = []
    for r in rows:
        u = np.array([s["embedding"] for s in r["samples"]])
        lps = [np.array(s["token_logprobs"]) for s in r["samples"]]
        anll = np.array([-x.mean() for x in lps])
        nll = np.array([-x.sum() for x in lps])
        p = np.exp(-(anll - anll.min()))
        p /= p.sum()
        rds_s = np.abs(u - u.mean(axis=0)).sum(axis=1)
        rds_w_s = np.abs(u - p @ u).sum(axis=1)
        answers = [s["text"].split()[-1].rstrip(".") for s in r["samples"]]
        sc = np.array([1 - answers.count(a) / len(answers) for a in answers])
        for m, v in (("rds_s", rds_s), ("rds_w_s", rds_w_s), ("anll", anll), ("nll", nll)):
            srt = np.sort(v)
            margins.append((r["id"], m, srt[1] - srt[0]))
            picks[m].append(int(np.argmin(v)))
        picks["sc"].append(int(np.argmin(sc)))
    return picks, margins


def main():
    rng = np.random.default_rng(20240611)
    write("detect_separable.jsonl", detection_bundle(rng, invert=False))
    write("detect_inverted.jsonl", detection_bundle(rng, invert=True))

    rows = bestofn_rows()
    write("bestofn_8.jsonl", rows)
    picks, margins = oracle_selections(rows)
    for rid, m, gap in margins:
        if gap < 1e-3:
            print(f"warning: narrow margin {gap:.2e} for {rid}/{m}")
    correct = [[a == "5" for a in answers] for _, answers, _, _ in BESTOFN]
    expected = {}
    for m, sel in picks.items():
        hits = sum(correct[i][j] for i, j in enumerate(sel))
        print(f"{m:8s} picks={sel} accuracy={hits}/8")
        expected[m] = {"picks": sel, "correct": hits, "accuracy": hits / 8}
    with open(HERE / "bestofn_8.expected.json", "w") as f:
        json.dump(expected, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
