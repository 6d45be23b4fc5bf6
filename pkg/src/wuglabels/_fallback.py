"""Pure-Python kernels, used when the compiled _speedups module is absent.

Both implementations must stay bit-for-bit equivalent; tests/test_kernels.py
checks parity whenever the extension is importable.
"""

from __future__ import annotations

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def lcs_length(a, b) -> int:
    """Length of the longest common subsequence of two int sequences."""
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0
    if lb > la:  # roll over the shorter side
        a, b = b, a
        la, lb = lb, la
    prev = [0] * (lb + 1)
    cur = [0] * (lb + 1)
    for i in range(la):
        ai = a[i]
        for j in range(lb):
            if ai == b[j]:
                cur[j + 1] = prev[j] + 1
            else:
                pj = prev[j + 1]
                cj = cur[j]
                cur[j + 1] = pj if pj >= cj else cj
        prev, cur = cur, prev
    return prev[lb]


def _fnv1a(codepoints, seed: int) -> int:
    h = (_FNV_OFFSET ^ (seed & _MASK64)) & _MASK64
    for cp in codepoints:
        for shift in (0, 8, 16, 24):
            h ^= (cp >> shift) & 0xFF
            h = (h * _FNV_PRIME) & _MASK64
    return h


def hash_ngram_counts(text: str, dim: int, ngram: int, seed: int) -> list[float]:
    """Fold character n-gram counts of `text` into `dim` hash buckets."""
    counts = [0.0] * dim
    cps = [ord(c) for c in text]
    n = len(cps)
    if n == 0:
        return counts
    if n < ngram:
        counts[_fnv1a(cps, seed) % dim] += 1.0
        return counts
    for i in range(n - ngram + 1):
        counts[_fnv1a(cps[i:i + ngram], seed) % dim] += 1.0
    return counts
