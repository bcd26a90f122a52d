"""Rank computations over Q and over the reals."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


def _integer_rows(matrix):
    rows = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        scale = math.lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * scale) for x in row])
    return rows


def exact_rank(matrix) -> int:
    """Rank over the rationals by fraction-free Gaussian elimination.

    Entries may be ints or Fractions; every row is scaled to integers first
    and kept primitive (content divided out) as elimination proceeds.
    """
    rows = [r for r in _integer_rows(matrix) if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank]
        pc = p[col]
        for i in range(rank + 1, len(rows)):
            r = rows[i]
            rc = r[col]
            if not rc:
                continue
            new = [pc * a - rc * b for a, b in zip(r, p)]
            g = math.gcd(*new)
            rows[i] = [a // g for a in new] if g > 1 else new
        rank += 1
        if rank == len(rows):
            break
    return rank


def numeric_rank(matrix, rel_cutoff: float = 1e-8) -> int:
    """Number of singular values above ``rel_cutoff * sigma_max``."""
    a = np.asarray(matrix, dtype=float)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rel_cutoff * s[0]))
