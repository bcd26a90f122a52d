"""Conference matrices and the affine families built from them.

Symmetric conference matrices give complex Hadamard matrices ``I + iC``;
skew-symmetric ones give real Hadamard matrices ``I - C``.  In a dephased
symmetric form of ``I + iC`` a pair of rows whose entries agree up to sign
(apart from the two diagonal columns) carries a free phase: the opposite
entries of the two rows are multiplied by ``exp(it)`` and the matching
opposite entries of the two columns by ``exp(-it)``.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, NotDephasedError, UnsuitablePairError, VerificationError
from .phase import HALF, AffineEntry, AffinePhaseMatrix, Phase, family_is_hadamard

_I = Phase(1, 4)
_MINUS_I = Phase(3, 4)


@dataclass(frozen=True)
class ConferenceMatrix:
    """Zero diagonal, off-diagonal entries +-1 and ``C C^T = C^T C = (N-1) I``."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionError("conference matrix is not square")
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                if i == j and x != 0:
                    raise ValueError(f"diagonal entry ({i}, {i}) is {x}, expected 0")
                if i != j and x not in (1, -1):
                    raise ValueError(f"off-diagonal entry ({i}, {j}) is {x}, expected +-1")
        c = np.array(rows, dtype=np.int64).reshape(n, n)
        target = (n - 1) * np.eye(n, dtype=np.int64)
        if not (np.array_equal(c @ c.T, target) and np.array_equal(c.T @ c, target)):
            raise ValueError("C C^T != (N-1) I")
        object.__setattr__(self, "entries", rows)

    @property
    def order(self):
        return len(self.entries)

    def is_symmetric(self):
        n = self.order
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def is_skew(self):
        n = self.order
        return all(self.entries[i][j] == -self.entries[j][i] for i in range(n) for j in range(i))


def _sum_of_two_squares(m: int) -> tuple[int, int] | None:
    for a in range(math.isqrt(m) + 1):
        b2 = m - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            return a, b
    return None


def symmetric_conference_order_feasible(n: int) -> tuple[bool, str]:
    """Necessary conditions for a symmetric conference matrix of order ``n``:
    ``n = 2 mod 4`` and ``n - 1`` a sum of two squares."""
    if n < 2:
        raise ValueError("order must be at least 2")
    if n % 4 != 2:
        return False, f"{n} is not 2 mod 4"
    squares = _sum_of_two_squares(n - 1)
    if squares is None:
        return False, f"{n - 1} is not a sum of two squares"
    a, b = squares
    return True, f"{n} = 2 mod 4 and {n - 1} = {a}^2 + {b}^2"


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, math.isqrt(q) + 1))


def paley_conference(q: int) -> ConferenceMatrix:
    """Paley conference matrix of order ``q + 1`` for an odd prime ``q``.

    The core is ``chi(j - i)`` with ``chi`` the quadratic character mod q;
    the result is symmetric for ``q = 1 mod 4`` and skew for ``q = 3 mod 4``.
    """
    if q < 3 or q % 2 == 0 or not _is_prime(q):
        raise ValueError(f"q must be an odd prime, got {q}")

    def chi(x):
        x %= q
        if x == 0:
            return 0
        return 1 if pow(x, (q - 1) // 2, q) == 1 else -1

    border = 1 if q % 4 == 1 else -1
    n = q + 1
    rows = [[0] * n for _ in range(n)]
    for j in range(1, n):
        rows[0][j] = 1
        rows[j][0] = border
    for i in range(1, n):
        for j in range(1, n):
            rows[i][j] = chi(j - i)
    return ConferenceMatrix(tuple(tuple(r) for r in rows))


def conference_to_hadamard(C: ConferenceMatrix) -> AffinePhaseMatrix:
    """``I + iC`` for symmetric ``C``, ``I - C`` for skew ``C``."""
    n = C.order
    if C.is_symmetric():
        grid = [[0 if i == j else (_I if C.entries[i][j] == 1 else _MINUS_I) for j in range(n)]
                for i in range(n)]
    elif C.is_skew():
        grid = [[0 if i == j or C.entries[i][j] == -1 else HALF for j in range(n)]
                for i in range(n)]
    else:
        raise ValueError("conference matrix is neither symmetric nor skew-symmetric")
    return AffinePhaseMatrix.from_phases(grid)


def hadamard_to_conference(D: AffinePhaseMatrix) -> ConferenceMatrix:
    """Recover ``C`` from ``D = I + iC`` or from a dephased form of it.

    A dephased form has core diagonal -1 and +-i elsewhere; multiplying every
    row and column except the first by ``i`` brings it back to ``I + iC``.
    """
    if D.param_count:
        raise DimensionError("expected a parameter-free matrix")
    ph = D.phases()
    n = D.order
    if D.is_dephased() and all(ph[k][k] == HALF for k in range(1, n)):
        ph = [[q + (_I if i else 0) + (_I if j else 0) for j, q in enumerate(row)]
              for i, row in enumerate(ph)]
    grid = []
    for i in range(n):
        row = []
        for j in range(n):
            q = ph[i][j]
            if i == j:
                if q != 0:
                    raise ValueError(f"diagonal entry ({i}, {i}) is not 1")
                row.append(0)
            elif q == _I:
                row.append(1)
            elif q == _MINUS_I:
                row.append(-1)
            else:
                raise ValueError(f"entry ({i}, {j}) is not +-i")
        grid.append(tuple(row))
    return ConferenceMatrix(tuple(grid))


# ------------------------------------------------------------------ parameters

def _opposite(a: AffineEntry, b: AffineEntry) -> bool:
    return a.form == b.form and a.base - b.base == HALF


def _check_conference_form(D: AffinePhaseMatrix):
    n = D.order
    if not D.is_dephased():
        raise NotDephasedError("expected a dephased matrix")
    base = D.base_matrix()
    if not base.is_symmetric():
        raise ValueError("expected a symmetric matrix")
    ph = base.phases()
    for i in range(1, n):
        for j in range(1, n):
            q = ph[i][j]
            if (i == j and q != HALF) or (i != j and q not in (_I, _MINUS_I)):
                raise ValueError("matrix is not a dephased conference-construction matrix")


def _add_parameter(F: AffinePhaseMatrix, r: int, s: int, name: str) -> AffinePhaseMatrix:
    """Introduce ``name`` on the row pair (r, s) and the matching column pair."""
    n = F.order
    ents = F.entries
    forms = [[list(e.form) + [0] for e in row] for row in ents]
    for c in range(n):
        if c in (r, s):
            continue
        if _opposite(ents[r][c], ents[s][c]):
            forms[r][c][-1] += 1
            forms[s][c][-1] += 1
        if _opposite(ents[c][r], ents[c][s]):
            forms[c][r][-1] -= 1
            forms[c][s][-1] -= 1
    return F.with_forms(forms, F.params + (name,))


def conference_parametrize(D: AffinePhaseMatrix, rows: tuple[int, int] = (1, 2),
                         name: str = "t") -> AffinePhaseMatrix:
    """One-parameter affine family through a dephased symmetric ``I + iC`` matrix.

    ``rows`` are 0-based; the default is the second and third row.
    """
    if D.param_count:
        raise DimensionError("expected a parameter-free matrix")
    _check_conference_form(D)
    n = D.order
    if n % 4 != 2 or n < 6:
        raise ValueError(f"order must be 2 mod 4 and at least 6, got {n}")
    r, s = rows
    if r == s or not (0 < r < n and 0 < s < n):
        raise ValueError(f"invalid row pair {rows}")
    opposite = [c for c in range(n) if c not in (r, s) and _opposite(D[r, c], D[s, c])]
    if len(opposite) != (n - 2) // 2:
        raise ValueError(f"rows {rows} differ by sign in {len(opposite)} places, "
                         f"expected {(n - 2) // 2}")
    family = _add_parameter(D, r, s, name)
    check = family_is_hadamard(family)
    if not check:
        raise VerificationError(f"parametrized family is not Hadamard at rows {check.rows}",
                                check)
    return family


@dataclass(frozen=True)
class SuitablePair:
    """A row pair fit for a new parameter.

    ``columns`` classifies every column as ``"identical"``, ``"opposite"`` or
    ``"diagonal"`` (the two columns holding the pair's -1 entries).
    """

    rows: tuple[int, int]
    columns: tuple[str, ...]

    @property
    def fresh_columns(self):
        return tuple(c for c, kind in enumerate(self.columns) if kind == "opposite")


def _classify_pair(F: AffinePhaseMatrix, r: int, s: int) -> SuitablePair | None:
    ents = F.entries
    kinds = []
    fresh = False
    for c in range(F.order):
        a, b = ents[r][c], ents[s][c]
        if c in (r, s):
            kinds.append("diagonal")
        elif a == b:
            kinds.append("identical")
        elif _opposite(a, b):
            kinds.append("opposite")
            if not any(a.form) and {a.base, b.base} == {_I, _MINUS_I}:
                fresh = True
        else:
            return None
    if not fresh:
        return None
    return SuitablePair((r, s), tuple(kinds))


def find_suitable_pairs(F: AffinePhaseMatrix) -> list[SuitablePair]:
    """Row pairs (0-based, lexicographic) meeting both suitability conditions.

    (i) every vertical pair outside the diagonal columns is identical or
    exactly opposite, forms included; (ii) some opposite vertical pair is
    ``(i, -i)`` or ``(-i, i)`` with both forms zero.
    """
    n = F.order
    out = []
    for r in range(n):
        for s in range(r + 1, n):
            pair = _classify_pair(F, r, s)
            if pair is not None:
                out.append(pair)
    return out


def _param_names(count):
    names = list(string.ascii_lowercase)
    return names[:count] if count <= 26 else [f"t{k + 1}" for k in range(count)]


def iterative_parametrize(D: AffinePhaseMatrix, pairs: Sequence[tuple[int, int]] | None = None,
                  names: Sequence[str] | None = None, on_step=None) -> AffinePhaseMatrix:
    """Iteratively add parameters on suitable row pairs, verifying every step.

    ``pairs`` (0-based) fixes the order; without it the lexicographically
    first suitable pair is taken until none remains.  Each intermediate family
    must pass :func:`family_is_hadamard` and gain one dimension, otherwise
    :class:`VerificationError` is raised.  ``on_step(step, pair, family)`` is
    called after every accepted step.
    """
    from .affine import family_dimension

    if D.param_count:
        raise DimensionError("expected a parameter-free matrix")
    _check_conference_form(D)
    n = D.order
    ceiling = n // 2 - 1
    if pairs is not None and len(pairs) > ceiling:
        raise ValueError(f"at most {ceiling} parameters can be introduced at order {n}")
    limit = len(pairs) if pairs is not None else ceiling
    names = list(names) if names is not None else _param_names(max(limit, 1))
    F = D
    step = 0
    while step < limit:
        suitable = {p.rows: p for p in find_suitable_pairs(F)}
        if pairs is not None:
            r, s = sorted(pairs[step])
            if (r, s) not in suitable:
                raise UnsuitablePairError(f"row pair {(r, s)} is not suitable at step {step + 1}")
        else:
            if not suitable:
                break
            r, s = min(suitable)
        candidate = _add_parameter(F, r, s, names[step])
        check = family_is_hadamard(candidate)
        if not check:
            raise VerificationError(
                f"step {step + 1} on rows {(r, s)}: rows {check.rows} are not orthogonal "
                f"for coefficient difference {check.coeffs}", check)
        if family_dimension(candidate) != step + 1:
            raise VerificationError(f"step {step + 1} on rows {(r, s)}: new parameter is dependent")
        F = candidate
        step += 1
        if on_step is not None:
            on_step(step, (r, s), F)
    return F
