"""Affine orbits through Hadamard matrices with equal-or-opposite column pairs.

If two columns ``u``, ``v`` of a dephased Hadamard matrix satisfy
``u_i = v_i`` or ``u_i = -v_i`` for every row, multiplying both entries of
each opposite row by ``exp(it)`` keeps every row pair orthogonal.  Real
Hadamard matrices have this property for every column pair, which yields an
``N/2 + 1`` parameter family after a suitable normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionError, NotDephasedError, NotHadamardError, VerificationError
from .linalg import exact_rank
from .ops import EquivalenceOp, apply_equivalence, dephase, is_hadamard
from .phase import HALF, AffinePhaseMatrix, family_is_hadamard


@dataclass(frozen=True)
class PairPattern:
    u: int
    v: int
    opposite_rows: tuple[int, ...]
    equal_rows: tuple[int, ...]

    def to_dict(self):
        return {"columns": [self.u, self.v], "opposite_rows": list(self.opposite_rows),
                "equal_rows": list(self.equal_rows)}


def family_dimension(F: AffinePhaseMatrix) -> int:
    """Rank over Q of the stacked entry coefficient vectors."""
    if F.param_count == 0:
        return 0
    return exact_rank([e.form for row in F.entries for e in row if any(e.form)])


def _pattern(ph, u, v) -> PairPattern | None:
    opposite, equal = [], []
    for i, row in enumerate(ph):
        d = row[u] - row[v]
        if d == 0:
            equal.append(i)
        elif d == HALF:
            opposite.append(i)
        else:
            return None
    return PairPattern(u, v, tuple(opposite), tuple(equal))


def find_pair_patterns(H: AffinePhaseMatrix) -> list[PairPattern]:
    """All column pairs ``u < v`` whose entries are row-wise equal or opposite."""
    if H.param_count:
        raise DimensionError("expected a parameter-free matrix")
    ph = H.phases()
    n = H.order
    out = []
    for u in range(n):
        for v in range(u + 1, n):
            p = _pattern(ph, u, v)
            if p is not None:
                out.append(p)
    return out


def parametrize_pair(H: AffinePhaseMatrix, pattern: PairPattern, name: str = "t") -> AffinePhaseMatrix:
    """One-parameter affine family through dephased ``H`` along a column pair."""
    if H.param_count:
        raise DimensionError("expected a parameter-free matrix")
    n = H.order
    if n < 4:
        raise ValueError("order must be at least 4")
    if not H.is_dephased():
        raise NotDephasedError("expected a dephased matrix")
    u, v = sorted((pattern.u, pattern.v))
    actual = _pattern(H.phases(), u, v)
    if actual is None or set(actual.opposite_rows) != set(pattern.opposite_rows):
        raise ValueError(f"columns {(u, v)} do not have the stated equal/opposite pattern")
    forms = [[[0] for _ in range(n)] for _ in range(n)]
    for i in actual.opposite_rows:
        forms[i][u][0] += 1
        forms[i][v][0] += 1
    if u == 0:
        # the first column picked up the parameter: undo it row by row
        for i in actual.opposite_rows:
            for k in range(n):
                forms[i][k][0] -= 1
    family = H.with_forms(forms, (name,))
    check = family_is_hadamard(family)
    if not check:
        raise VerificationError(f"rows {check.rows} lost orthogonality", check)
    if family_dimension(family) != 1:
        raise VerificationError("the parameter vanished after dephasing")
    return family


def _require_real_hadamard(H: AffinePhaseMatrix):
    if H.param_count:
        raise DimensionError("expected a parameter-free matrix")
    if any(q not in (0, HALF) for row in H.phases() for q in row):
        raise ValueError("matrix is not real (+-1)")
    n = H.order
    if n < 12 or n % 4:
        raise ValueError(f"order must be a multiple of 4 and at least 12, got {n}")
    if not is_hadamard(H):
        raise NotHadamardError("matrix is not Hadamard")


def canonicalize_real(H: AffinePhaseMatrix) -> tuple[AffinePhaseMatrix, EquivalenceOp]:
    """Bring a real Hadamard matrix to the normal form used by :func:`parametrize_real`.

    Dephased; row 2 is ``N/2`` ones followed by ``N/2`` minus ones; row 3 has
    ``-1`` in column 2, ``1`` in columns 3 and 4, ``-1`` in the last two
    columns (1-based).  Only permutations and sign changes are used; the
    column permutation is the lexicographically least one that works.
    """
    _require_real_hadamard(H)
    n = H.order
    half = n // 2
    D, op = dephase(H)
    ph = D.phases()
    r, s = 1, 2

    def wanted(pos):
        first = 0 if pos < half else HALF
        if pos == 1 or pos >= n - 2:
            second = HALF
        elif pos in (0, 2, 3):
            second = 0
        else:
            second = None
        return first, second

    def feasible(start, available):
        for first in (0, HALF):
            slots = [wanted(p)[1] for p in range(start, n) if wanted(p)[0] == first]
            cols = [ph[s][c] for c in available if ph[r][c] == first]
            if len(slots) != len(cols):
                return False
            if slots.count(0) > cols.count(0) or slots.count(HALF) > cols.count(HALF):
                return False
        return True

    available = set(range(n))
    perm = []
    for pos in range(n):
        first, second = wanted(pos)
        for c in sorted(available):
            if ph[r][c] != first or (second is not None and ph[s][c] != second):
                continue
            if feasible(pos + 1, available - {c}):
                perm.append(c)
                available.discard(c)
                break
        else:
            raise ValueError("no column permutation reaches the canonical form")
    colop = EquivalenceOp(tuple(range(n)), tuple(perm), (0,) * n, (0,) * n)
    full = op.then(colop)
    return apply_equivalence(H, full), full


def parametrize_real(H: AffinePhaseMatrix, pairs=None) -> AffinePhaseMatrix:
    """``N/2 + 1`` parameter affine family through a real Hadamard matrix.

    The base of the returned family is :func:`canonicalize_real` of ``H``.
    Parameters ``x1 .. x{N/2}`` live on the column pairs ``pairs`` (default
    ``(0,1), (2,3), ...``); ``x{N/2+1}`` comes from the first two rows, which
    stay parameter free after the first stage.
    """
    C, _ = canonicalize_real(H)
    n = C.order
    m = n // 2
    if pairs is None:
        pairs = [(2 * i, 2 * i + 1) for i in range(m)]
    if len(pairs) != m:
        raise ValueError(f"expected {m} column pairs")
    ph = C.phases()
    P = m + 1
    forms = [[[0] * P for _ in range(n)] for _ in range(n)]
    for idx, (u, v) in enumerate(pairs):
        for i in range(n):
            if ph[i][u] != ph[i][v]:
                forms[i][u][idx] += 1
                forms[i][v][idx] += 1
    for i in range(n):
        shift = list(forms[i][0])
        if any(shift):
            for k in range(n):
                forms[i][k] = [a - b for a, b in zip(forms[i][k], shift)]
    for row in forms:
        for f in row:
            f[0] = -f[0]
    if any(any(f) for i in (0, 1) for f in forms[i]):
        raise VerificationError("the first two rows picked up parameters; choose other pairs")
    last = m  # index of x_{N/2+1}
    for i in (0, 1):
        for k in range(n):
            if ph[0][k] != ph[1][k]:
                forms[i][k][last] -= 1
    for k in range(n):
        if ph[0][k] != ph[1][k]:
            for i in range(n):
                forms[i][k][last] += 1
    family = C.with_forms(forms, tuple(f"x{k + 1}" for k in range(P)))
    if not family.is_dephased():
        raise VerificationError("family is not dephased")
    check = family_is_hadamard(family)
    if not check:
        raise VerificationError(f"rows {check.rows} lost orthogonality", check)
    return family
