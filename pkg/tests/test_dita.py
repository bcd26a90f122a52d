import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from chadamard import (AffinePhaseMatrix, DimensionError, EquivalenceOp, NotDephasedError,
                       NotHadamardError, apply_equivalence, catalogue, dephase, dita_compose,
                       dita_detect, dn_equivalent, fourier, is_hadamard, kron,
                       no_orthogonal_extension, quick_non_dita, rows_I_equivalent)
from chadamard.dita import NOT_DITA, count_orthogonal_rows, extension_rows


def cat(id):
    return catalogue.get(id).object


def equal_partitions(items, size):
    """All partitions of ``items`` into blocks of ``size`` (block order ignored)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for mates in itertools.combinations(rest, size - 1):
        left = [x for x in rest if x not in mates]
        for tail in equal_partitions(left, size):
            yield [(first, *mates)] + tail


def brute_force_structure(L, n, k):
    """Try every row grouping and every column partition."""
    N = L.order
    for groups in equal_partitions(range(N), k):
        for parts in equal_partitions(range(N), n):
            if all(rows_I_equivalent(L, g[0], r, part)
                   for g in groups for r in g[1:] for part in parts):
                return True
    return False


def meet_criterion(L, n, k):
    """Every row grouping; a grouping works iff the common refinement of the
    difference vectors inside each group has class sizes divisible by n."""
    ph = L.phases()
    N = L.order
    A = np.array([[q.numerator * 360 // q.denominator for q in row] for row in ph])
    for groups in equal_partitions(range(N), k):
        diffs = np.array([(A[g[0]] - A[r]) % 360 for g in groups for r in g[1:]])
        _, counts = np.unique(diffs, axis=1, return_counts=True)
        if np.all(counts % n == 0):
            return True
    return False


def oracle_is_dita(H, structure=brute_force_structure):
    D, _ = dephase(H)
    N = D.order
    cases = [(n, N // n) for n in range(2, N) if N % n == 0 and N // n >= 2]
    return any(structure(L, n, k) for n, k in cases for L in (D, D.transpose()))


def random_hadamard(base, rng):
    return apply_equivalence(base, EquivalenceOp.random(base.order, rng))


def random_composition(k, n, rng):
    M = random_hadamard(fourier(k), rng)
    blocks = [random_hadamard(fourier(n), rng) for _ in range(k)]
    K = dita_compose(M, blocks)
    return apply_equivalence(K, EquivalenceOp.random(K.order, rng))


# ----------------------------------------------------------------- composition

def test_compose_tensor_special_case():
    F2 = fourier(2)
    assert dita_compose(F2, [F2, F2]) == kron(F2, F2)


def test_compose_with_scaled_block():
    F2 = fourier(2)
    scaled = AffinePhaseMatrix.from_phases([[0, 0], [Fraction(1, 4), Fraction(3, 4)]])
    assert is_hadamard(dita_compose(F2, [F2, scaled]))


def test_compose_order_six():
    K = dita_compose(fourier(3), [fourier(2)] * 3)
    assert K.order == 6 and is_hadamard(K)


def test_compose_errors():
    F2 = fourier(2)
    with pytest.raises(DimensionError):
        dita_compose(F2, [F2])
    with pytest.raises(DimensionError):
        dita_compose(F2, [F2, fourier(3)])
    with pytest.raises(NotHadamardError):
        dita_compose(F2, [F2, AffinePhaseMatrix.from_phases([[0, 0], [0, 0]])])


# ----------------------------------------------------------------- I-equivalence

def test_rows_I_equivalent_examples():
    # standard Kronecker layout: rows 0 and 2 of F2 (x) F2 differ by (0, 0, 1/2, 1/2)
    H4 = kron(fourier(2), fourier(2))
    assert rows_I_equivalent(H4, 2, 2, [0, 3])
    assert not rows_I_equivalent(fourier(2), 0, 1, [0, 1])
    assert rows_I_equivalent(H4, 0, 2, [0, 1])
    assert not rows_I_equivalent(H4, 0, 1, [0, 1])
    with pytest.raises(IndexError):
        rows_I_equivalent(H4, 0, 4, [0])
    with pytest.raises(ValueError):
        rows_I_equivalent(H4, 0, 1, [])


def test_dn_equivalent_examples():
    H4 = kron(fourier(2), fourier(2))
    ok, sets = dn_equivalent(H4, 0, 0, 2, 2)
    assert ok
    ok, sets = dn_equivalent(H4, 0, 2, 2, 2)
    assert ok and sets == ((0, 1), (2, 3))
    ok, sets = dn_equivalent(H4, 0, 1, 2, 2)
    assert ok and sets == ((0, 2), (1, 3))
    assert not dn_equivalent(fourier(2), 0, 1, 1, 2)[0]
    with pytest.raises(ValueError):
        dn_equivalent(H4, 0, 1, 3, 2)


def test_dn_equivalent_witness_is_valid():
    H = cat("H12")
    for r, s in itertools.combinations(range(12), 2):
        for d, n in [(1, 4), (2, 3), (3, 2), (2, 2)]:
            ok, sets = dn_equivalent(H, r, s, d, n)
            if ok:
                assert len(sets) == d and all(len(x) == n for x in sets)
                assert len({c for x in sets for c in x}) == d * n
                assert all(rows_I_equivalent(H, r, s, x) for x in sets)


def test_dn_equivalent_matches_subset_search():
    H = cat("D6")
    for r, s in itertools.combinations(range(6), 2):
        for d, n in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)]:
            brute = any(
                all(rows_I_equivalent(H, r, s, part) for part in parts)
                for cols in itertools.combinations(range(6), d * n)
                for parts in equal_partitions(cols, n)
            )
            assert dn_equivalent(H, r, s, d, n)[0] == brute


@pytest.mark.parametrize("id", catalogue.matrices())
def test_dn_equivalent_invariant_under_permutations_and_shifts(id):
    H = cat(id)
    N = H.order
    rng = random.Random(id)
    params = [(d, n) for n in (2, 3) for d in (1, 2, N // (2 * n)) if 1 <= d and d * n <= N]
    for _ in range(20):
        op = EquivalenceOp.random(N, rng)
        G = apply_equivalence(H, op)
        for i, j in rng.sample(list(itertools.combinations(range(N), 2)), min(10, N * (N - 1) // 2)):
            for d, n in params:
                assert dn_equivalent(G, i, j, d, n)[0] == \
                    dn_equivalent(H, op.row_perm[i], op.row_perm[j], d, n)[0]


# ----------------------------------------------------------------- quick test

@pytest.mark.parametrize("id", ["D10", "D14", "D6"])
def test_quick_non_dita_fires_on_conference_matrices(id):
    assert quick_non_dita(cat(id)) == NOT_DITA


def test_quick_non_dita_inconclusive_and_errors():
    assert quick_non_dita(cat("H4")) == "inconclusive"
    with pytest.raises(NotDephasedError):
        quick_non_dita(apply_equivalence(cat("H4"), EquivalenceOp.random(4, random.Random(1))))


# ----------------------------------------------------------------- detection

def test_detect_h4_certificate():
    v = dita_detect(cat("H4"))
    assert v.status == "certificate"
    assert (v.certificate.n, v.certificate.k) == (2, 2)
    assert v.certificate.validate(cat("H4"))


def test_detect_h12_refutes_all_cases():
    v = dita_detect(cat("H12"))
    assert v.status == "refuted"
    assert v.cases_examined == ((2, 6), (3, 4), (4, 3), (6, 2))


def test_h12_refutation_matches_unpruned_enumeration():
    assert not oracle_is_dita(cat("H12"), meet_criterion)


def test_detect_d10_without_shortcut_still_refutes():
    assert dita_detect(cat("D10"), shortcut=False).status == "refuted"
    assert dita_detect(cat("D10")).reason == "core has no 1"


@pytest.mark.parametrize("id", ["F5", "F7", "F1"])
def test_prime_orders_refuted_without_cases(id):
    v = dita_detect(cat(id))
    assert v.status == "refuted" and v.cases_examined == ()


@pytest.mark.parametrize("seed", range(10))
def test_detect_finds_random_compositions(seed):
    rng = random.Random(seed)
    k, n = rng.choice([(2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3), (2, 5), (2, 6), (3, 4), (4, 3), (6, 2)])
    H = random_composition(k, n, rng)
    v = dita_detect(H)
    assert v.status == "certificate"
    assert v.certificate.validate(H)


@pytest.mark.parametrize("seed", range(8))
def test_detect_agrees_with_brute_force_at_order_six(seed):
    rng = random.Random(100 + seed)
    pool = [cat("D6"), fourier(6), random_composition(3, 2, rng), random_composition(2, 3, rng)]
    H = random_hadamard(pool[seed % 4], rng)
    v = dita_detect(H, shortcut=False)
    assert (v.status == "certificate") == oracle_is_dita(H)
    if v.certificate:
        assert v.certificate.validate(H)


def test_certificates_revalidate_on_transposed_structure():
    rng = random.Random(7)
    H = random_composition(2, 3, rng).transpose()
    v = dita_detect(H)
    assert v.status == "certificate" and v.certificate.validate(H)


def test_budget_exhaustion_is_distinct():
    v = dita_detect(cat("H12"), budget=5)
    assert v.status == "budget-exhausted"
    assert v.to_dict()["status"] == "budget-exhausted"


def test_parallel_cases_match_sequential():
    for id in ("H12", "H8"):
        seq = dita_detect(cat(id))
        par = dita_detect(cat(id), jobs=2)
        assert seq.to_dict() == par.to_dict()


def test_verdict_serialises():
    d = dita_detect(cat("H8")).to_dict()
    assert d["certificate"]["n"] * d["certificate"]["k"] == 8
    assert d["certificate"]["realizing_op"] is not None


# ----------------------------------------------------------------- extension check

def test_extension_rows_pairwise_orthogonal():
    rows = extension_rows(3)
    assert np.array_equal(rows @ rows.T, 12 * np.eye(4, dtype=int))


@pytest.mark.parametrize("p", [1, 2, 3])
def test_orthogonal_row_count_matches_enumeration(p):
    rows = extension_rows(p)
    cands = np.array(list(itertools.product((1, -1), repeat=4 * p)))
    expected = int(np.all(cands @ rows.T == 0, axis=1).sum())
    assert count_orthogonal_rows(rows) == expected


def test_even_block_rows_do_extend():
    # with p = 2 the four rows sit inside a Hadamard matrix of order 8
    assert count_orthogonal_rows(extension_rows(2)) > 0


@pytest.mark.parametrize("p", [3, 5])
def test_no_orthogonal_extension(p):
    assert no_orthogonal_extension(p)


@pytest.mark.parametrize("p", [1, 2, 4, 7])
def test_extension_check_rejects_bad_p(p):
    with pytest.raises(ValueError):
        no_orthogonal_extension(p)
