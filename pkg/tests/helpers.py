"""Independent brute-force oracles used by the unit and acceptance tests.

These deliberately share no code with the library: plateau scanning,
suppression, and matching are re-derived from their definitions so the
library implementations are checked against a second, exhaustive path.
"""

from itertools import groupby

import numpy as np


def brute_maf(x, window):
    """Trailing windowed mean computed sample by sample."""
    return np.array([x[max(0, i - window + 1) : i + 1].mean() for i in range(len(x))])


def oracle_candidates(x, threshold):
    """Local maxima at/above threshold; first index of each maximal plateau."""
    runs = []
    pos = 0
    for value, group in groupby(x):
        length = len(list(group))
        runs.append((pos, pos + length - 1, value))
        pos += length
    cands = []
    for r, (start, end, value) in enumerate(runs):
        left_ok = r == 0 or runs[r - 1][2] < value
        right_ok = r == len(runs) - 1 or runs[r + 1][2] < value
        if left_ok and right_ok and value >= threshold:
            cands.append(start)
    return cands


def oracle_detect(x, threshold, min_distance):
    """Exhaustive suppression: among all maximal valid candidate subsets,
    pick the one whose (-amplitude, index) key sequence is lexicographically
    smallest. Returns sorted sample indices."""
    cands = oracle_candidates(x, threshold)
    m = len(cands)
    assert m <= 20, "oracle is exponential; keep candidate counts small"

    def valid(subset):
        return all(
            abs(a - b) >= min_distance for i, a in enumerate(subset) for b in subset[i + 1 :]
        )

    best_key = None
    best = None
    for mask in range(1 << m):
        subset = [cands[i] for i in range(m) if mask >> i & 1]
        if not valid(subset):
            continue
        # maximality: no remaining candidate could still be added
        if any(
            c not in subset and valid(subset + [c])
            for c in cands
        ):
            continue
        key = tuple(sorted((-x[i], i) for i in subset))
        if best_key is None or key < best_key:
            best_key, best = key, subset
    return sorted(best) if best is not None else []


def oracle_max_matching(truth_times, det_times, tolerance):
    """Maximum-cardinality matching between truths and detections."""

    def rec(i, used):
        if i == len(truth_times):
            return 0
        best = rec(i + 1, used)
        for j, d in enumerate(det_times):
            if j not in used and abs(d - truth_times[i]) <= tolerance:
                best = max(best, 1 + rec(i + 1, used | {j}))
        return best

    return rec(0, frozenset())
