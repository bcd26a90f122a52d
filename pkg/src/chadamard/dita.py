"""Diţă-type block structure: composition and detection.

A Diţă composition of a Hadamard ``M`` of order k with blocks ``N_1..N_k`` of
order n has block (p, q) equal to ``m_pq * N_q``.  In log form this leaves a
trace that survives permutations and diagonal scalings: the columns split
into k sets of size n and the rows into n groups of size k such that any two
rows of a group differ by a constant on each column set.  :func:`dita_detect`
searches for that structure exhaustively.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionError, NotDephasedError, NotHadamardError
from .ops import EquivalenceOp, apply_equivalence, dephase, is_hadamard
from .phase import AffinePhaseMatrix

NOT_DITA = "not-dita"
INCONCLUSIVE = "inconclusive"
DEFAULT_BUDGET = 10**8


def _phases(L):
    if not isinstance(L, AffinePhaseMatrix):
        raise TypeError("expected an exact phase matrix")
    if L.param_count:
        raise DimensionError("expected a parameter-free matrix")
    return L.phases()


def dita_compose(M: AffinePhaseMatrix, blocks) -> AffinePhaseMatrix:
    """Block matrix with block (p, q) equal to ``M[p, q] * blocks[q]``."""
    k = M.order
    blocks = list(blocks)
    if len(blocks) != k:
        raise DimensionError(f"need {k} blocks, got {len(blocks)}")
    n = blocks[0].order
    if any(b.order != n for b in blocks):
        raise DimensionError("blocks must share one order")
    if not is_hadamard(M) or not all(is_hadamard(b) for b in blocks):
        raise NotHadamardError("Diţă composition needs Hadamard inputs")
    m = M.phases()
    bs = [b.phases() for b in blocks]
    size = n * k
    return AffinePhaseMatrix.from_phases(
        [[m[r // n][c // n] + bs[c // n][r % n][c % n] for c in range(size)] for r in range(size)]
    )


def rows_I_equivalent(L: AffinePhaseMatrix, r: int, s: int, index_set) -> bool:
    """True iff ``L[r, i] - L[s, i] mod 1`` takes one value over ``index_set``."""
    ph = _phases(L)
    n = len(ph)
    index_set = list(index_set)
    if not index_set:
        raise ValueError("index set must be nonempty")
    for x in [r, s, *index_set]:
        if not 0 <= x < n:
            raise IndexError(f"index {x} out of range for order {n}")
    return len({ph[r][i] - ph[s][i] for i in index_set}) == 1


def dn_equivalent(L: AffinePhaseMatrix, r: int, s: int, d: int, n: int):
    """Whether rows r, s agree in differences on d disjoint n-element column sets.

    Columns with the same difference are interchangeable, so it is enough to
    count ``floor(size / n)`` per difference class.  Returns
    ``(verdict, witness_sets)``.
    """
    ph = _phases(L)
    size = len(ph)
    if d < 1 or n < 1 or d * n > size:
        raise ValueError(f"invalid (d, n) = ({d}, {n}) for order {size}")
    for x in (r, s):
        if not 0 <= x < size:
            raise IndexError(f"row {x} out of range for order {size}")
    classes: dict = {}
    for c in range(size):
        classes.setdefault(ph[r][c] - ph[s][c], []).append(c)
    sets = []
    for value in sorted(classes):
        cols = classes[value]
        for start in range(0, len(cols) - n + 1, n):
            sets.append(tuple(cols[start:start + n]))
    if len(sets) < d:
        return False, ()
    return True, tuple(sets[:d])


def quick_non_dita(H: AffinePhaseMatrix) -> str:
    """``"not-dita"`` when the core of dephased ``H`` contains no 1."""
    ph = _phases(H)
    if not H.is_dephased():
        raise NotDephasedError("expected a dephased matrix")
    n = len(ph)
    if any(ph[i][j] == 0 for i in range(1, n) for j in range(1, n)):
        return INCONCLUSIVE
    return NOT_DITA


@dataclass(frozen=True)
class DitaCertificate:
    """Column sets and row groups witnessing Diţă structure.

    The structure holds in ``apply_equivalence(H, realizing_op)`` (the
    dephased form) when the op is set, else in ``H`` itself.  When ``transposed`` is set the structure was found on the transpose, so
    ``column_partition`` indexes rows of the original matrix and
    ``row_grouping`` indexes its columns.
    """

    n: int
    k: int
    column_partition: tuple[tuple[int, ...], ...]
    row_grouping: tuple[tuple[int, ...], ...]
    transposed: bool = False
    realizing_op: EquivalenceOp | None = None

    def validate(self, H: AffinePhaseMatrix) -> bool:
        if self.realizing_op is not None:
            H = apply_equivalence(H, self.realizing_op)
        L = H.transpose() if self.transposed else H
        N = L.order
        if self.n * self.k != N or self.n < 2 or self.k < 2:
            return False
        cols = sorted(c for part in self.column_partition for c in part)
        rows = sorted(r for group in self.row_grouping for r in group)
        if cols != list(range(N)) or rows != list(range(N)):
            return False
        if any(len(p) != self.n for p in self.column_partition) or len(self.column_partition) != self.k:
            return False
        if any(len(g) != self.k for g in self.row_grouping) or len(self.row_grouping) != self.n:
            return False
        return all(
            rows_I_equivalent(L, g[0], other, part)
            for g in self.row_grouping
            for other in g[1:]
            for part in self.column_partition
        )

    def to_dict(self):
        return {
            "n": self.n,
            "k": self.k,
            "column_partition": [list(p) for p in self.column_partition],
            "row_grouping": [list(g) for g in self.row_grouping],
            "transposed": self.transposed,
            "realizing_op": self.realizing_op.to_dict() if self.realizing_op else None,
        }


@dataclass(frozen=True)
class DitaVerdict:
    status: str  # "certificate", "refuted" or "budget-exhausted"
    certificate: DitaCertificate | None = None
    cases_examined: tuple[tuple[int, int], ...] = ()
    search_nodes: int = 0
    reason: str = ""

    def to_dict(self):
        return {
            "status": self.status,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "cases_examined": [list(c) for c in self.cases_examined],
            "search_nodes": self.search_nodes,
            "reason": self.reason,
        }


class _BudgetExhausted(Exception):
    pass


def _search_case(A, mod, n, k, budget):
    """Backtracking over row groupings for one factorisation N = n * k.

    Rows are grouped leader-first (the lowest unassigned row leads, members in
    increasing order).  Each member refines the column partition by its
    difference vector to the leader; a class smaller than n can never be
    split into n-sets, which prunes the branch.  A complete grouping succeeds
    when every class size is a multiple of n.

    Returns ``(groups, labels, nodes)`` with ``groups`` None on refutation;
    raises ``_BudgetExhausted`` past ``budget`` nodes.
    """
    N = len(A)
    diff = [[tuple((A[r][c] - A[s][c]) % mod for c in range(N)) for s in range(N)]
            for r in range(N)]

    def level_sizes(vec):
        counts = {}
        for v in vec:
            counts[v] = counts.get(v, 0) + 1
        return counts.values()

    compat = [[all(c % n == 0 for c in level_sizes(diff[r][s])) for s in range(N)]
              for r in range(N)]
    assigned = [False] * N
    groups = []
    nodes = 0

    def refine(labels, vec):
        ids = {}
        out = tuple(ids.setdefault((lab, v), len(ids)) for lab, v in zip(labels, vec))
        sizes = [0] * len(ids)
        for x in out:
            sizes[x] += 1
        return out, min(sizes)

    def place(labels):
        try:
            r = assigned.index(False)
        except ValueError:
            counts = {}
            for lab in labels:
                counts[lab] = counts.get(lab, 0) + 1
            return labels if all(c % n == 0 for c in counts.values()) else None
        assigned[r] = True
        found = extend([r], labels, r + 1)
        assigned[r] = False
        return found

    def extend(group, labels, start):
        nonlocal nodes
        if len(group) == k:
            groups.append(tuple(group))
            found = place(labels)
            if found is None:
                groups.pop()
            return found
        leader = group[0]
        need = k - len(group)
        free = [s for s in range(start, N) if not assigned[s] and compat[leader][s]]
        for idx, s in enumerate(free):
            if len(free) - idx < need:
                break
            nodes += 1
            if nodes > budget:
                raise _BudgetExhausted
            new, smallest = refine(labels, diff[leader][s])
            if smallest < n:
                continue
            assigned[s] = True
            group.append(s)
            found = extend(group, new, s + 1)
            group.pop()
            assigned[s] = False
            if found is not None:
                return found
        return None

    try:
        labels = place((0,) * N)
    except _BudgetExhausted:
        return None, None, nodes, True
    if labels is None:
        return None, None, nodes, False
    return tuple(groups), labels, nodes, False


def _partition_from_labels(labels, n):
    classes = {}
    for c, lab in enumerate(labels):
        classes.setdefault(lab, []).append(c)
    parts = []
    for cols in sorted(classes.values()):
        parts.extend(tuple(cols[i:i + n]) for i in range(0, len(cols), n))
    return tuple(sorted(parts))


def _run_case(task):
    A, mod, n, k, budget, transposed = task
    groups, labels, nodes, exhausted = _search_case(A, mod, n, k, budget)
    cert = None
    if groups is not None:
        cert = DitaCertificate(n, k, _partition_from_labels(labels, n), groups, transposed)
    return cert, nodes, exhausted


def _factorizations(N):
    return [(n, N // n) for n in range(2, N // 2 + 1) if N % n == 0 and N // n >= 2]


def _int_grid(H: AffinePhaseMatrix):
    ph = H.phases()
    mod = math.lcm(*(q.denominator for row in ph for q in row))
    return [[q.numerator * (mod // q.denominator) for q in row] for row in ph], mod


def dita_detect(H: AffinePhaseMatrix, budget: int = DEFAULT_BUDGET, shortcut: bool = True,
                jobs: int = 1) -> DitaVerdict:
    """Search the dephased form of ``H`` and its transpose for Diţă structure.

    Cases N = n * k run in increasing n, each on H then on its transpose;
    the first certificate wins.  ``budget`` caps the search nodes per case
    and orientation.  ``jobs > 1`` runs the cases in worker processes with
    the same deterministic result.
    """
    D, op = dephase(H)
    N = D.order
    cases = _factorizations(N)
    if not cases:
        return DitaVerdict("refuted", None, (), 0, f"order {N} admits no factorisation n*k with n, k >= 2")
    if shortcut and quick_non_dita(D) == NOT_DITA:
        return DitaVerdict("refuted", None, tuple(cases), 0, "core has no 1")
    A, mod = _int_grid(D)
    At = [list(col) for col in zip(*A)]
    tasks = [(grid, mod, n, k, budget, t) for n, k in cases for grid, t in ((A, False), (At, True))]
    total = 0
    exhausted_any = False
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_case, tasks))
    else:
        results = (_run_case(t) for t in tasks)
    for task, (cert, nodes, exhausted) in zip(tasks, results):
        total += nodes
        exhausted_any |= exhausted
        if cert is not None:
            cert = replace(cert, realizing_op=op)
            examined = tuple(c for c in cases if c[0] <= cert.n)
            return DitaVerdict("certificate", cert, examined, total)
    if exhausted_any:
        return DitaVerdict("budget-exhausted", None, tuple(cases), total,
                           f"node budget {budget} exhausted")
    return DitaVerdict("refuted", None, tuple(cases), total, "exhaustive search")


def extension_rows(p: int) -> np.ndarray:
    """The four +-1 rows of length 4p built from p-blocks (sign patterns ++++, ++--, +-+-, +--+)."""
    signs = [(1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)]
    return np.array([np.repeat(s, p) for s in signs], dtype=np.int64)


def count_orthogonal_rows(rows) -> int:
    """Number of +-1 rows orthogonal to every row of ``rows`` (brute force, width <= 24)."""
    rows = np.asarray(rows)
    width = rows.shape[1]
    if width > 24:
        raise ValueError("brute force is limited to width 24")
    masks = [sum(1 << c for c in range(width) if row[c] < 0) for row in rows]
    w = np.arange(1 << width, dtype=np.uint64)
    orthogonal = np.ones(w.shape, dtype=bool)
    for mask in masks:
        # orthogonal to a +-1 row iff the two differ in exactly half the places
        orthogonal &= np.bitwise_count(w ^ np.uint64(mask)) * 2 == width
    return int(orthogonal.sum())


def no_orthogonal_extension(p: int) -> bool:
    """True iff no +-1 row is orthogonal to all four :func:`extension_rows` (all 2**(4p) tried)."""
    if p % 2 == 0 or p < 3:
        raise ValueError(f"p must be odd and at least 3, got {p}")
    if p > 5:
        raise ValueError("brute force is limited to p <= 5")
    return count_orthogonal_rows(extension_rows(p)) == 0
