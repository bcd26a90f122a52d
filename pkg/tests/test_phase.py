import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chadamard import (AffineEntry, AffinePhaseMatrix, DimensionError, Phase,
                       cyclotomic_polynomial, family_eval, family_is_hadamard, fourier,
                       vanishing_root_sum)
from chadamard.linalg import exact_rank, numeric_rank
from chadamard.phase import entry_value

phases = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 24))


def numeric_sum(terms):
    return sum(cmath.exp(2j * math.pi * float(t)) for t in terms)


# ----------------------------------------------------------------- Phase

def test_phase_reduces_mod_one():
    assert Phase(5, 4) == Fraction(1, 4)
    assert Phase(-1, 4) == Fraction(3, 4)
    assert Phase(1) == 0
    assert repr(Phase(3, 8)) == "Phase('3/8')"


@given(phases, phases)
def test_phase_arithmetic_stays_in_unit_interval(a, b):
    for v in (Phase(a) + b, Phase(a) - b, -Phase(a), Phase(a) * 3):
        assert isinstance(v, Phase)
        assert 0 <= v < 1
    assert Phase(a) + Phase(b) == Phase(a + b)


@pytest.mark.parametrize("q, z", [(0, 1), (Fraction(1, 4), 1j), (Fraction(1, 2), -1), (Fraction(3, 4), -1j)])
def test_quarter_turns_are_exact(q, z):
    assert Phase(q).to_complex() == z


@given(phases)
def test_to_complex_matches_exp(q):
    assert abs(Phase(q).to_complex() - cmath.exp(2j * math.pi * float(q))) < 1e-12


# ----------------------------------------------------------------- cyclotomic / vanishing

@pytest.mark.parametrize("n, coeffs", [
    (1, (-1, 1)),
    (2, (1, 1)),
    (3, (1, 1, 1)),
    (4, (1, 0, 1)),
    (6, (1, -1, 1)),
    (8, (1, 0, 0, 0, 1)),
    (12, (1, 0, -1, 0, 1)),
])
def test_cyclotomic_small(n, coeffs):
    assert cyclotomic_polynomial(n) == coeffs


@pytest.mark.parametrize("n", [5, 9, 10, 15, 18, 24, 30, 36])
def test_cyclotomic_degree_and_roots(n):
    poly = cyclotomic_polynomial(n)
    phi = sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
    assert len(poly) - 1 == phi
    for k in range(1, n + 1):
        z = cmath.exp(2j * math.pi * k / n)
        value = sum(c * z**e for e, c in enumerate(poly))
        assert (abs(value) < 1e-8) == (math.gcd(k, n) == 1)


@pytest.mark.parametrize("terms, expected", [
    ([0, Fraction(1, 2)], True),
    ([0, Fraction(1, 3), Fraction(2, 3)], True),
    ([0, Fraction(1, 4)], False),
    ([Fraction(1, 6), Fraction(1, 2), Fraction(5, 6)], True),
    ([0, Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5)], True),
    ([0, Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(5, 6), Fraction(1, 6)], True),
    ([], True),
])
def test_vanishing_examples(terms, expected):
    assert vanishing_root_sum(terms) is expected


@settings(max_examples=300)
@given(st.lists(phases, max_size=8))
def test_vanishing_agrees_with_numeric_oracle(terms):
    assert vanishing_root_sum(terms) == (abs(numeric_sum(terms)) < 1e-9)


@given(st.lists(phases, min_size=1, max_size=6))
def test_terms_plus_negatives_vanish(terms):
    assert vanishing_root_sum(terms + [t + Fraction(1, 2) for t in terms])


def test_large_denominator_falls_back_to_numeric():
    p = 401
    assert vanishing_root_sum([Fraction(k, p) for k in range(p)])
    assert not vanishing_root_sum([Fraction(1, p), 0])


# ----------------------------------------------------------------- AffinePhaseMatrix

def test_matrix_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        AffinePhaseMatrix.from_phases([[0, 0], [0]])
    with pytest.raises(DimensionError):
        AffinePhaseMatrix(((AffineEntry(Phase(0), (1,)),),), ())
    with pytest.raises(ValueError):
        AffinePhaseMatrix.from_phases([[0]], params=("a", "a"), forms=[[(0, 0)]])


def test_fourier_entries():
    F = fourier(3)
    assert F.phases()[1][2] == Fraction(2, 3)
    assert F.is_dephased()
    assert F.is_symmetric()
    assert np.allclose(F.to_complex(), np.exp(2j * np.pi * np.outer(range(3), range(3)) / 3))


def test_entry_value_uses_radians():
    e = AffineEntry(Phase(1, 4), (1, -2))
    assert abs(entry_value(e, [0.3, 0.1]) - cmath.exp(1j * (math.pi / 2 + 0.1))) < 1e-12
    with pytest.raises(DimensionError):
        entry_value(e, [0.3])


def one_param_f4():
    # rows 2 and 4 of F4 carry t on columns 2 and 4
    F = fourier(4)
    forms = [[(0,)] * 4 for _ in range(4)]
    forms[1] = [(0,), (1,), (0,), (1,)]
    forms[3] = [(0,), (1,), (0,), (1,)]
    return F.with_forms(forms, ("t",))


def test_family_is_hadamard_on_f4_family():
    assert family_is_hadamard(one_param_f4())


def test_family_check_reports_failure():
    F = fourier(4)
    forms = [[(0,)] * 4 for _ in range(4)]
    forms[1][1] = (1,)
    check = family_is_hadamard(F.with_forms(forms, ("t",)))
    assert not check
    assert check.rows is not None and 1 in check.rows


@settings(max_examples=50)
@given(st.floats(-7, 7, allow_nan=False))
def test_family_symbolic_check_matches_numeric(t):
    M = one_param_f4().to_complex([t])
    assert np.abs(M @ M.conj().T - 4 * np.eye(4)).max() < 1e-9


def test_family_eval_at_zero_is_exact_base():
    F = one_param_f4()
    assert family_eval(F, [0.0]) == F.base_matrix()
    with pytest.raises(DimensionError):
        family_eval(F, [0.0, 1.0])


# ----------------------------------------------------------------- rank

@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=6))
def test_exact_rank_matches_numpy(rows):
    assert exact_rank(rows) == np.linalg.matrix_rank(np.array(rows, dtype=float))


def test_exact_rank_fractions_and_dependence():
    assert exact_rank([[Fraction(1, 2), 1], [1, 2]]) == 1
    assert exact_rank([[0, 0], [0, 0]]) == 0
    assert numeric_rank([[1.0, 0.0], [0.0, 1e-12]]) == 1
