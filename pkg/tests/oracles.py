"""Independent reference computations used as test oracles.

Written without reusing any package code paths.
"""

from __future__ import annotations

import csv
from pathlib import Path


def ubi_literal(received_bids, ubi=0):
    # straight transcription of the pseudocode, iterative form
    seq = list(received_bids)
    while True:
        half = len(seq) // 2
        left, right = seq[:half], seq[half:]
        len_left = len({tuple(b) for b in left})
        len_right = len({tuple(b) for b in right})
        if len_left > 0 and len_right > 0 and len_left < len_right:
            ubi += 1
            seq = right
        else:
            return ubi


def aui_literal(received_utils, aui=0):
    seq = list(received_utils)
    while True:
        half = len(seq) // 2
        left, right = seq[:half], seq[half:]
        if len(left) > 0 and len(right) > 0:
            mean_left = sum(left) / len(left)
            mean_right = sum(right) / len(right)
            if mean_left < mean_right:
                aui += 1
                seq = right
                continue
        return aui


def weighted_sum(weights, scores):
    total = 0.0
    for w, s in zip(weights, scores):
        total += w * s
    return total


def read_transcript(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def undersell_rows(rows: list[dict], agent: str) -> list[dict]:
    """Offers by ``agent`` below the best own utility it has received so far."""
    best = float("-inf")
    bad = []
    for row in rows:
        if row["actor"] != agent and row["action"] == "offer":
            best = max(best, float(row["utility_opponent_true"]))
        elif row["actor"] == agent and row["action"] == "offer":
            if float(row["utility_self"]) < best:
                bad.append(row)
    return bad


def bad_rejection_rows(rows: list[dict], agent: str) -> list[dict]:
    """Turns where ``agent`` rejected an offer worth at least the bid it proposed."""
    bad = []
    pending = None
    for row in rows:
        if row["action"] != "offer":
            continue
        if row["actor"] == agent and pending is not None:
            if pending >= float(row["utility_self"]):
                bad.append(row)
        pending = float(row["utility_opponent_true"]) if row["actor"] != agent else None
    return bad
