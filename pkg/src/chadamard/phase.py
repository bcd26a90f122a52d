"""Exact phases, affine phase families and the vanishing-sum test.

A phase ``q`` stands for the unimodular number ``exp(2*pi*i*q)`` and is kept
as a reduced fraction in ``[0, 1)``.  An affine family attaches to every entry
an integer coefficient vector over the family's parameters, so the entry at a
parameter point ``x`` (radians) is ``exp(i*(2*pi*base + form.x))``.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionError

DEFAULT_MAX_DENOMINATOR = 360
NUMERIC_ZERO_TOL = 1e-9

_QUARTER_VALUES = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}


class Phase(Fraction):
    """A rational number reduced modulo 1.

    Addition, subtraction, negation and integer scaling stay modulo 1.
    Equality and hashing are inherited from :class:`fractions.Fraction`,
    so ``Phase(1, 2) == Fraction(1, 2)``.
    """

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        value = Fraction(numerator, denominator) % 1
        return super().__new__(cls, value.numerator, value.denominator)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return Phase(Fraction(self) + other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Phase(Fraction(self) - other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Phase(other - Fraction(self))
        return NotImplemented

    def __neg__(self):
        return Phase(-Fraction(self))

    def __mul__(self, other):
        if isinstance(other, int):
            return Phase(Fraction(self) * other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"Phase('{self}')"

    def to_complex(self) -> complex:
        if 4 % self.denominator == 0:
            return _QUARTER_VALUES[self.numerator * 4 // self.denominator]
        return cmath.exp(2j * math.pi * self.numerator / self.denominator)


ZERO = Phase(0)
HALF = Phase(1, 2)


class AffineEntry(NamedTuple):
    base: Phase
    form: tuple[int, ...] = ()


def entry_value(e: AffineEntry, x: Sequence[float] = ()) -> complex:
    """Numeric value ``exp(i*(2*pi*base + form.x))`` of one entry."""
    if len(x) != len(e.form):
        raise DimensionError(f"entry has {len(e.form)} parameters, got {len(x)} values")
    angle = 2 * math.pi * float(e.base) + sum(c * xi for c, xi in zip(e.form, x))
    return cmath.exp(1j * angle)


@dataclass(frozen=True)
class AffinePhaseMatrix:
    """Square grid of affine entries sharing one parameter list.

    With no parameters this is an exact complex Hadamard candidate written in
    log form.
    """

    entries: tuple[tuple[AffineEntry, ...], ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        params = tuple(self.params)
        rows = []
        for row in self.entries:
            cells = []
            for cell in row:
                if isinstance(cell, AffineEntry):
                    base, form = cell
                elif isinstance(cell, tuple) and len(cell) == 2 and isinstance(cell[1], (tuple, list)):
                    base, form = cell
                else:
                    base, form = cell, (0,) * len(params)
                form = tuple(int(c) for c in form)
                if len(form) != len(params):
                    raise DimensionError(
                        f"linear form {form} does not match {len(params)} parameters"
                    )
                cells.append(AffineEntry(Phase(base), form))
            rows.append(tuple(cells))
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionError("matrix is not square")
        if len(set(params)) != len(params):
            raise ValueError(f"duplicate parameter names in {params}")
        object.__setattr__(self, "entries", tuple(rows))
        object.__setattr__(self, "params", params)

    @classmethod
    def from_phases(cls, grid, params=(), forms=None):
        """Build from a grid of phases and an optional grid of linear forms."""
        params = tuple(params)
        if forms is None:
            return cls(tuple(tuple(AffineEntry(Phase(q), (0,) * len(params)) for q in row)
                             for row in grid), params)
        return cls(tuple(tuple(AffineEntry(Phase(q), tuple(f)) for q, f in zip(row, frow))
                         for row, frow in zip(grid, forms)), params)

    @property
    def order(self) -> int:
        return len(self.entries)

    @property
    def param_count(self) -> int:
        return len(self.params)

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def phases(self) -> list[list[Phase]]:
        return [[e.base for e in row] for row in self.entries]

    def forms(self) -> list[list[tuple[int, ...]]]:
        return [[e.form for e in row] for row in self.entries]

    def base_matrix(self) -> "AffinePhaseMatrix":
        """The family at the zero parameter point, as a parameter-free matrix."""
        return AffinePhaseMatrix.from_phases(self.phases())

    def transpose(self) -> "AffinePhaseMatrix":
        return AffinePhaseMatrix(tuple(zip(*self.entries)), self.params)

    def is_dephased(self) -> bool:
        zero = (0,) * self.param_count
        return all(e.base == 0 and e.form == zero for e in self.entries[0]) and all(
            row[0].base == 0 and row[0].form == zero for row in self.entries
        )

    def is_symmetric(self) -> bool:
        n = self.order
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def to_complex(self, x: Sequence[float] | None = None) -> np.ndarray:
        """Evaluate numerically; ``x`` defaults to the zero point."""
        if x is None:
            x = (0.0,) * self.param_count
        if len(x) != self.param_count:
            raise DimensionError(f"family has {self.param_count} parameters, got {len(x)} values")
        base = np.array([[float(e.base) for e in row] for row in self.entries])
        if self.param_count:
            coeffs = np.array([[e.form for e in row] for row in self.entries], dtype=float)
            angle = 2 * np.pi * base + coeffs @ np.asarray(x, dtype=float)
        else:
            angle = 2 * np.pi * base
        return np.exp(1j * angle)

    def with_forms(self, forms, params) -> "AffinePhaseMatrix":
        return AffinePhaseMatrix.from_phases(self.phases(), params, forms)


def _poly_divmod_monic(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # coefficient lists are low -> high; den must be monic
    num = list(num)
    m = len(den) - 1
    if len(num) <= m:
        return [0], num
    quot = [0] * (len(num) - m)
    for shift in range(len(num) - 1 - m, -1, -1):
        c = num[shift + m]
        if c:
            quot[shift] = c
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    return quot, num[:m]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_monic(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


def vanishing_root_sum(terms, max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> bool:
    """True iff the sum of ``exp(2*pi*i*q)`` over ``terms`` is exactly zero.

    The sum is written as an integer polynomial in a primitive L-th root of
    unity (L the lcm of the denominators) and reduced modulo the L-th
    cyclotomic polynomial.  When L exceeds ``max_denominator`` the test falls
    back to ``|sum| < 1e-9``.
    """
    terms = [Phase(t) for t in terms]
    if not terms:
        return True
    lcm = math.lcm(*(t.denominator for t in terms))
    if lcm > max_denominator:
        return abs(sum(t.to_complex() for t in terms)) < NUMERIC_ZERO_TOL
    coeffs = [0] * lcm
    for t in terms:
        coeffs[t.numerator * (lcm // t.denominator)] += 1
    _, rem = _poly_divmod_monic(coeffs, list(cyclotomic_polynomial(lcm)))
    return not any(rem)


@dataclass(frozen=True)
class FamilyCheck:
    """Outcome of :func:`family_is_hadamard`; falsy on failure.

    ``rows`` and ``coeffs`` name the first row pair and parameter-difference
    vector whose grouped terms do not cancel.
    """

    ok: bool
    rows: tuple[int, int] | None = None
    coeffs: tuple[int, ...] | None = None

    def __bool__(self):
        return self.ok


def family_is_hadamard(F: AffinePhaseMatrix,
                       max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> FamilyCheck:
    """Check that ``F`` is Hadamard for every value of its parameters.

    For each row pair the inner product is a sum of ``exp(i*d.x)`` times a
    constant sum of roots of unity, one per distinct coefficient difference
    ``d``; the family is Hadamard identically iff every such constant vanishes.
    """
    n = F.order
    ents = F.entries
    for i in range(n):
        for j in range(i + 1, n):
            groups = defaultdict(list)
            for a, b in zip(ents[i], ents[j]):
                key = tuple(x - y for x, y in zip(a.form, b.form))
                groups[key].append(a.base - b.base)
            for key, group in groups.items():
                if not vanishing_root_sum(group, max_denominator):
                    return FamilyCheck(False, (i, j), key)
    return FamilyCheck(True)


def family_eval(F: AffinePhaseMatrix, x: Sequence[float]):
    """Specialise ``F`` at ``x``.

    The zero point returns the exact base matrix; any other point returns a
    complex numpy array.
    """
    if len(x) != F.param_count:
        raise DimensionError(f"family has {F.param_count} parameters, got {len(x)} values")
    if not any(x):
        return F.base_matrix()
    return F.to_complex(x)


def fourier(n: int) -> AffinePhaseMatrix:
    return AffinePhaseMatrix.from_phases([[Fraction(j * k, n) for k in range(n)] for j in range(n)])
