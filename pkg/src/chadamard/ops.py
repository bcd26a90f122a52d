"""Single-matrix operations: verification, dephasing, equivalence,
the Haagerup invariant set and the defect."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionError, NotHadamardError
from .linalg import exact_rank, numeric_rank
from .phase import (
    DEFAULT_MAX_DENOMINATOR,
    NUMERIC_ZERO_TOL,
    AffineEntry,
    AffinePhaseMatrix,
    Phase,
    vanishing_root_sum,
)

HAAGERUP_MERGE_TOL = 1e-9
DEFECT_SV_CUTOFF = 1e-8


def _exact(H) -> AffinePhaseMatrix | None:
    if isinstance(H, AffinePhaseMatrix):
        if H.param_count:
            raise DimensionError("expected a parameter-free matrix; evaluate the family first")
        return H
    return None


def _numeric(H) -> np.ndarray:
    if isinstance(H, AffinePhaseMatrix):
        return H.to_complex()
    a = np.asarray(H, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def hadamard_residual(H) -> float:
    """max |H H* - N I| over all entries."""
    a = _numeric(H)
    n = a.shape[0]
    return float(np.max(np.abs(a @ a.conj().T - n * np.eye(n))))


def is_hadamard(H, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> bool:
    """Exact check for phase matrices, 1e-9 numeric check for complex arrays."""
    exact = _exact(H)
    if exact is None:
        a = _numeric(H)
        if not np.allclose(np.abs(a), 1.0, atol=NUMERIC_ZERO_TOL):
            return False
        return hadamard_residual(a) < NUMERIC_ZERO_TOL
    ph = exact.phases()
    n = exact.order
    return all(
        vanishing_root_sum([a - b for a, b in zip(ph[i], ph[j])], max_denominator)
        for i in range(n)
        for j in range(i + 1, n)
    )


@dataclass(frozen=True)
class EquivalenceOp:
    """``out[i][j] = left[i] + H[row_perm[i]][col_perm[j]] + right[j]`` in phases.

    In multiplicative terms this is ``D1 P1 H P2 D2`` with ``D1 = diag(left)``,
    ``D2 = diag(right)``.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    left: tuple[Phase, ...]
    right: tuple[Phase, ...]

    def __post_init__(self):
        n = len(self.row_perm)
        for name in ("row_perm", "col_perm"):
            perm = tuple(int(p) for p in getattr(self, name))
            if sorted(perm) != list(range(n)):
                raise ValueError(f"{name} is not a permutation of 0..{n - 1}")
            object.__setattr__(self, name, perm)
        for name in ("left", "right"):
            diag = tuple(Phase(q) for q in getattr(self, name))
            if len(diag) != n:
                raise DimensionError(f"{name} has length {len(diag)}, expected {n}")
            object.__setattr__(self, name, diag)

    @property
    def order(self):
        return len(self.row_perm)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)), tuple(range(n)), (0,) * n, (0,) * n)

    @classmethod
    def random(cls, n, rng: random.Random | None = None, denominator: int = 8):
        rng = rng or random.Random()
        rows, cols = list(range(n)), list(range(n))
        rng.shuffle(rows)
        rng.shuffle(cols)
        left = [Fraction(rng.randrange(denominator), denominator) for _ in range(n)]
        right = [Fraction(rng.randrange(denominator), denominator) for _ in range(n)]
        return cls(tuple(rows), tuple(cols), tuple(left), tuple(right))

    def is_identity(self):
        n = self.order
        return (self.row_perm == tuple(range(n)) and self.col_perm == tuple(range(n))
                and not any(self.left) and not any(self.right))

    def inverse(self) -> "EquivalenceOp":
        n = self.order
        pinv = [0] * n
        qinv = [0] * n
        for i, p in enumerate(self.row_perm):
            pinv[p] = i
        for j, q in enumerate(self.col_perm):
            qinv[q] = j
        return EquivalenceOp(
            tuple(pinv),
            tuple(qinv),
            tuple(-self.left[pinv[a]] for a in range(n)),
            tuple(-self.right[qinv[b]] for b in range(n)),
        )

    def then(self, other: "EquivalenceOp") -> "EquivalenceOp":
        """The op that applies ``self`` first and ``other`` second."""
        if other.order != self.order:
            raise DimensionError("cannot compose ops of different orders")
        n = self.order
        p1, q1, p2, q2 = self.row_perm, self.col_perm, other.row_perm, other.col_perm
        return EquivalenceOp(
            tuple(p1[p2[i]] for i in range(n)),
            tuple(q1[q2[j]] for j in range(n)),
            tuple(other.left[i] + self.left[p2[i]] for i in range(n)),
            tuple(self.right[q2[j]] + other.right[j] for j in range(n)),
        )

    def to_dict(self):
        return {
            "row_perm": list(self.row_perm),
            "col_perm": list(self.col_perm),
            "left": [str(q) for q in self.left],
            "right": [str(q) for q in self.right],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["row_perm"]), tuple(d["col_perm"]),
                   tuple(Fraction(q) for q in d["left"]), tuple(Fraction(q) for q in d["right"]))


def apply_equivalence(H, op: EquivalenceOp):
    """Apply ``op``; works on families (forms follow their entries) and arrays."""
    if isinstance(H, AffinePhaseMatrix):
        if H.order != op.order:
            raise DimensionError(f"op of order {op.order} applied to matrix of order {H.order}")
        ents = H.entries
        rows = tuple(
            tuple(
                AffineEntry(op.left[i] + ents[op.row_perm[i]][op.col_perm[j]].base + op.right[j],
                            ents[op.row_perm[i]][op.col_perm[j]].form)
                for j in range(H.order)
            )
            for i in range(H.order)
        )
        return AffinePhaseMatrix(rows, H.params)
    a = _numeric(H)
    if a.shape[0] != op.order:
        raise DimensionError(f"op of order {op.order} applied to matrix of order {a.shape[0]}")
    left = np.array([q.to_complex() for q in op.left])
    right = np.array([q.to_complex() for q in op.right])
    return left[:, None] * a[np.ix_(op.row_perm, op.col_perm)] * right[None, :]


def dephase(H: AffinePhaseMatrix) -> tuple[AffinePhaseMatrix, EquivalenceOp]:
    """Divide each row by its first entry, then each column by its first-row entry."""
    exact = _exact(H)
    if exact is None:
        raise TypeError("dephase needs an exact phase matrix")
    ph = exact.phases()
    n = exact.order
    left = tuple(-ph[i][0] for i in range(n))
    right = tuple(-(ph[0][j] - ph[0][0]) for j in range(n))
    op = EquivalenceOp(tuple(range(n)), tuple(range(n)), left, right)
    return apply_equivalence(exact, op), op


def transpose_op(op: EquivalenceOp) -> EquivalenceOp:
    """The op acting on transposes: ``apply(H.T, transpose_op(op)) == apply(H, op).T``."""
    return EquivalenceOp(op.col_perm, op.row_perm, op.right, op.left)


@dataclass(frozen=True)
class HaagerupSet:
    """The set of all ``h_ij h_kl conj(h_kj) conj(h_il)``.

    Exact sets hold sorted :class:`Phase` values; numeric sets hold complex
    numbers merged at 1e-9.
    """

    elements: tuple
    exact: bool

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item):
        if self.exact and isinstance(item, (int, Fraction)):
            return Phase(item) in self.elements
        z = item.to_complex() if isinstance(item, Phase) else complex(item)
        return any(abs(z - w) < HAAGERUP_MERGE_TOL for w in self.complex_values())

    def complex_values(self):
        if self.exact:
            return [q.to_complex() for q in self.elements]
        return list(self.elements)

    def labels(self):
        if self.exact:
            return [str(q) for q in self.elements]
        return [[z.real, z.imag] for z in self.elements]

    def is_conjugation_closed(self):
        if self.exact:
            s = set(self.elements)
            return all(-q in s for q in s)
        return all(z.conjugate() in self for z in self.elements)


def _merge_angles(values: np.ndarray) -> tuple[complex, ...]:
    ang = np.sort(np.mod(np.angle(values), 2 * np.pi))
    kept = []
    for a in ang:
        if kept and abs(a - kept[-1]) < HAAGERUP_MERGE_TOL:
            continue
        kept.append(a)
    if len(kept) > 1 and abs(kept[0] + 2 * np.pi - kept[-1]) < HAAGERUP_MERGE_TOL:
        kept.pop()
    return tuple(complex(np.exp(1j * a)) for a in kept)


def haagerup_set(H) -> HaagerupSet:
    exact = _exact(H)
    if exact is not None:
        ph = exact.phases()
        denom = math.lcm(*(q.denominator for row in ph for q in row))
        A = np.array([[q.numerator * (denom // q.denominator) for q in row] for row in ph],
                     dtype=np.int64)
        # prod[i, j, k, l] = A[i,j] + A[k,l] - A[k,j] - A[i,l]
        prod = (A[:, :, None, None] + A[None, None, :, :]
                - A.T[None, :, :, None] - A[:, None, None, :])
        vals = np.unique(np.mod(prod, denom))
        return HaagerupSet(tuple(Phase(int(v), denom) for v in vals), True)
    a = _numeric(H)
    prod = (a[:, :, None, None] * a[None, None, :, :]
            * a.T.conj()[None, :, :, None] * a.conj()[:, None, None, :])
    return HaagerupSet(_merge_angles(prod.ravel()), False)


@dataclass(frozen=True)
class Distinction:
    verdict: str  # "inequivalent" or "inconclusive"
    witness: object = None

    def to_dict(self):
        w = self.witness
        if isinstance(w, Phase):
            w = str(w)
        elif isinstance(w, complex):
            w = [w.real, w.imag]
        return {"verdict": self.verdict, "witness": w}


def lambda_distinguish(H1, H2) -> Distinction:
    """Certify inequivalence when the Haagerup sets differ.

    Equal sets never prove equivalence, so the negative answer is
    ``"inconclusive"``.
    """
    n1 = H1.order if isinstance(H1, AffinePhaseMatrix) else _numeric(H1).shape[0]
    n2 = H2.order if isinstance(H2, AffinePhaseMatrix) else _numeric(H2).shape[0]
    if n1 != n2:
        raise DimensionError(f"orders differ: {n1} vs {n2}")
    s1, s2 = haagerup_set(H1), haagerup_set(H2)
    if s1.exact and s2.exact:
        diff = sorted(set(s1.elements) ^ set(s2.elements))
        if diff:
            return Distinction("inequivalent", diff[0])
        return Distinction("inconclusive")
    for z in s1.complex_values():
        if z not in s2:
            return Distinction("inequivalent", z)
    for z in s2.complex_values():
        if z not in s1:
            return Distinction("inequivalent", z)
    return Distinction("inconclusive")


_QUARTER_INT = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}


def defect_report(H, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> dict:
    """Defect with diagnostics (system size, rank, nullity, method).

    Unknowns are the real phase perturbations ``R_ik`` with the first row and
    first column pinned to zero.  Each row pair ``i < j`` contributes the real
    and imaginary parts of ``sum_k H_ik conj(H_jk) (R_ik - R_jk) = 0``.
    """
    exact = _exact(H)
    if exact is not None:
        if not is_hadamard(exact, max_denominator):
            raise NotHadamardError("defect is defined for complex Hadamard matrices only")
        D, _ = dephase(exact)
        a = None
        ph = D.phases()
        quarter = all(4 % q.denominator == 0 for row in ph for q in row)
    else:
        a = _numeric(H)
        if not is_hadamard(a):
            raise NotHadamardError("defect is defined for complex Hadamard matrices only")
        a = a / a[:, :1]
        a = a / a[:1, :]
        quarter = False
    n = exact.order if exact is not None else a.shape[0]
    m = n - 1
    nvars = m * m

    def var(i, k):
        return (i - 1) * m + (k - 1)

    equations = []
    for i in range(n):
        for j in range(i + 1, n):
            re = [0] * nvars
            im = [0] * nvars
            for k in range(n):
                if quarter:
                    q = ph[i][k] - ph[j][k]
                    cr, ci = _QUARTER_INT[q.numerator * 4 // q.denominator]
                elif exact is not None:
                    z = (ph[i][k] - ph[j][k]).to_complex()
                    cr, ci = z.real, z.imag
                else:
                    z = a[i, k] * np.conj(a[j, k])
                    cr, ci = z.real, z.imag
                if k == 0:
                    continue
                if i > 0:
                    re[var(i, k)] += cr
                    im[var(i, k)] += ci
                if j > 0:
                    re[var(j, k)] -= cr
                    im[var(j, k)] -= ci
            equations.append(re)
            equations.append(im)
    if quarter:
        rank = exact_rank(equations)
        method = "exact"
    else:
        rank = numeric_rank(equations, DEFECT_SV_CUTOFF)
        method = "numeric"
    return {
        "order": n,
        "unknowns": nvars,
        "equations": len(equations),
        "rank": rank,
        "nullity": nvars - rank,
        "defect": nvars - rank,
        "method": method,
    }


def defect(H) -> int:
    return defect_report(H)["defect"]


def kron(A: AffinePhaseMatrix, B: AffinePhaseMatrix) -> AffinePhaseMatrix:
    """Tensor product of two parameter-free phase matrices."""
    a, b = A.phases(), B.phases()
    n = B.order
    size = A.order * n
    return AffinePhaseMatrix.from_phases(
        [[a[r // n][c // n] + b[r % n][c % n] for c in range(size)] for r in range(size)]
    )


def as_phase_matrix(rows: Sequence[Sequence[complex]], max_denominator: int = 24) -> AffinePhaseMatrix:
    """Recognise a complex matrix whose entries are roots of unity of small order."""
    grid = []
    for row in rows:
        out = []
        for z in row:
            z = complex(z)
            if abs(abs(z) - 1) > 1e-9:
                raise ValueError(f"entry {z} is not unimodular")
            q = Fraction(math.atan2(z.imag, z.real) / (2 * math.pi)).limit_denominator(max_denominator)
            if abs(Phase(q).to_complex() - z) > 1e-9:
                raise ValueError(f"entry {z} is not a root of unity of order <= {max_denominator}")
            out.append(q)
        grid.append(out)
    return AffinePhaseMatrix.from_phases(grid)
