"""String similarity kernels shared by all metrics.

Sequences are compared at the level of Unicode scalar values, i.e. plain
Python strings act as the token sequences.
"""

from __future__ import annotations

import re
import unicodedata

_WS_RUN = re.compile(r"\s+")


def levenshtein(a: str, b: str) -> int:
    """Minimum number of insertions, deletions and substitutions turning ``a`` into ``b``."""
    if a == b:
        return 0
    # Keep the DP row as short as possible.
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def norm_lev(a: str, b: str) -> float:
    """Levenshtein distance normalized by the longer input, as a cost in [0, 1].

    Two empty strings are a perfect (zero-cost) match.
    """
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return levenshtein(a, b) / longest


def lcs_len(a: str, b: str) -> int:
    """Length of the longest common subsequence of ``a`` and ``b``."""
    if not a or not b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def lcs_sim(a: str, b: str) -> float:
    """Longest-common-subsequence similarity 2*|LCS| / (|a|+|b|), in [0, 1].

    Two empty strings are fully similar.
    """
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    return 2.0 * lcs_len(a, b) / total


def normalize_text(s: str) -> str:
    """Canonical text form: Unicode NFC, whitespace runs collapsed to one space, trimmed.

    Case is preserved; lowercasing, where a metric wants it, is the metric's job.
    """
    return _WS_RUN.sub(" ", unicodedata.normalize("NFC", s)).strip()
