"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from chadamard import (EquivalenceOp, apply_equivalence, catalogue, defect, dephase, dita_detect,
                       dn_equivalent, family_dimension, family_is_hadamard, haagerup_set,
                       is_hadamard, iterative_parametrize, kron, fourier, no_orthogonal_extension,
                       paley_conference, parametrize_real, quick_non_dita,
                       symmetric_conference_order_feasible)
from chadamard.dita import NOT_DITA


def cat(id):
    return catalogue.get(id).object


def report(capsys, number, title, checks, elapsed, limit):
    """Print the verdict line, then fail listing every failed check."""
    timing_ok = elapsed < limit
    ok = all(v for _, v in checks) and timing_ok
    failed = [name for name, v in checks if not v] + ([] if timing_ok else [f"time {elapsed:.2f}s >= {limit}s"])
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({elapsed:.2f}s, limit {limit}s)"
    if failed:
        line += " -- failed: " + "; ".join(failed)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_1_catalogue_verification(capsys):
    catalogue.get.cache_clear()
    t = time.perf_counter()
    checks = [(f"{id} is Hadamard", is_hadamard(cat(id))) for id in ("H12", "D10", "D14")]
    checks += [(f"{id} is a Hadamard family", bool(family_is_hadamard(cat(id))))
               for id in ("H12_7", "D10_3", "D14_6")]
    elapsed = time.perf_counter() - t
    report(capsys, 1, "catalogue matrices and families verify exactly", checks, elapsed, 1.0)


def test_criterion_2_haagerup(capsys):
    t = time.perf_counter()
    lam_h12 = haagerup_set(cat("H12"))
    lam_f12 = haagerup_set(cat("F12"))
    elapsed = time.perf_counter() - t
    checks = [("Lambda(H12) = {1, -1}", set(lam_h12.elements) == {0, Fraction(1, 2)})]
    # the e^{2 pi i/8} membership claim for F12 is contradicted by enumeration;
    # the gate is H12 only and the enumerated F12 set is frozen here
    in_f12 = Fraction(1, 8) in lam_f12
    checks.append(("Lambda(F12) = twelfth roots of unity",
                   set(lam_f12.elements) == {Fraction(k, 12) for k in range(12)}))
    with capsys.disabled():
        print(f"\n    note: exp(2*pi*i/8) in Lambda(F12): {in_f12} (membership claim contradicted)")
    report(capsys, 2, "Haagerup set of H12 is {1, -1}", checks, elapsed, 5.0)


def test_criterion_3_defect(capsys):
    t = time.perf_counter()
    d10, d14 = defect(cat("D10")), defect(cat("D14"))
    elapsed = time.perf_counter() - t
    report(capsys, 3, f"defect(D10) = {d10}, defect(D14) = {d14}",
           [("defect(D10) = 16", d10 == 16), ("defect(D14) = 36", d14 == 36)], elapsed, 10.0)


def test_criterion_4_dita(capsys):
    t = time.perf_counter()
    v = dita_detect(cat("H12"))
    elapsed = time.perf_counter() - t
    h4 = dita_detect(kron(fourier(2), fourier(2)))
    checks = [
        ("H12 refuted", v.status == "refuted"),
        ("H12 cases (2,6),(3,4),(4,3),(6,2)", v.cases_examined == ((2, 6), (3, 4), (4, 3), (6, 2))),
        ("F2 (x) F2 certificate", h4.status == "certificate"
         and h4.certificate.validate(kron(fourier(2), fourier(2)))),
        ("quick test on D10", quick_non_dita(dephase(cat("D10"))[0]) == NOT_DITA),
        ("quick test on D14", quick_non_dita(dephase(cat("D14"))[0]) == NOT_DITA),
    ]
    report(capsys, 4, f"Diţă detection (H12: {v.search_nodes} nodes)", checks, elapsed, 60.0)


def test_criterion_5_extension(capsys):
    t = time.perf_counter()
    p3 = no_orthogonal_extension(3)
    t3 = time.perf_counter() - t
    t = time.perf_counter()
    p5 = no_orthogonal_extension(5)
    t5 = time.perf_counter() - t
    checks = [("p=3 has no extension", p3), ("p=5 has no extension", p5),
              (f"p=3 within 0.1s ({t3:.3f}s)", t3 < 0.1)]
    report(capsys, 5, "four block rows admit no orthogonal +-1 row (p = 3, 5)", checks, t5, 10.0)


@pytest.mark.parametrize("id, dim", [("H12", 7), ("H16", 9)])
def test_criterion_6_real_parametrization(capsys, id, dim):
    t = time.perf_counter()
    F = parametrize_real(cat(id))
    ok = bool(family_is_hadamard(F))
    d = family_dimension(F)
    elapsed = time.perf_counter() - t
    report(capsys, 6, f"{id}: {d}-parameter affine family", [("verifies", ok), (f"dimension {dim}", d == dim)],
           elapsed, 5.0)


def test_criterion_7_conference_parametrization(capsys):
    t = time.perf_counter()
    checks = []
    for id, script, ref in [
        ("D10", [(2, 10), (3, 9), (5, 7)], "D10_3"),
        ("D14", [(2, 3), (4, 5), (6, 9), (7, 13), (8, 12), (11, 14)], "D14_6"),
    ]:
        steps = []
        F = iterative_parametrize(cat(id), [(r - 1, s - 1) for r, s in script],
                                  on_step=lambda k, pair, G: steps.append(bool(family_is_hadamard(G))))
        checks.append((f"{id}: every step verifies", len(steps) == len(script) and all(steps)))
        checks.append((f"{id}: P = {len(script)}", F.param_count == family_dimension(F) == len(script)))
        checks.append((f"{id}: base and Lambda match {ref}",
                       F.base_matrix() == cat(ref).base_matrix()
                       and haagerup_set(F.base_matrix()) == haagerup_set(cat(ref).base_matrix())))
    D6, _ = dephase(cat("D6"))
    checks.append(("D6 yields exactly 1 parameter", iterative_parametrize(D6).param_count == 1))
    elapsed = time.perf_counter() - t
    report(capsys, 7, "iterative conference parametrization of D10, D14, D6", checks, elapsed, 10.0)


def test_criterion_8_property_suites(capsys):
    t = time.perf_counter()
    rng = random.Random(8)
    lam_ok = True
    dn_ok = True
    for id in catalogue.matrices():
        H = cat(id)
        base = haagerup_set(H)
        N = H.order
        for _ in range(50):
            lam_ok &= haagerup_set(apply_equivalence(H, EquivalenceOp.random(N, rng))) == base
        for _ in range(20):
            op = EquivalenceOp.random(N, rng)
            G = apply_equivalence(H, op)
            i, j = rng.sample(range(N), 2) if N > 1 else (0, 0)
            for d, n in [(1, 2), (2, 2), (1, 3)]:
                if d * n <= N:
                    dn_ok &= dn_equivalent(G, i, j, d, n)[0] == \
                        dn_equivalent(H, op.row_perm[i], op.row_perm[j], d, n)[0]
    dim_ok = all(family_dimension(cat(id)) <= defect(cat(id).base_matrix()) for id in catalogue.families())
    conf_ok = True
    for q in (5, 11, 13, 17):
        c = np.array(paley_conference(q).entries)
        conf_ok &= np.array_equal(c @ c.T, q * np.eye(q + 1))
    feas_ok = (not any(symmetric_conference_order_feasible(n)[0] for n in (22, 34))
               and all(symmetric_conference_order_feasible(n)[0] for n in (6, 10, 14, 18, 26)))
    elapsed = time.perf_counter() - t
    checks = [("Lambda invariance (50 ops per matrix)", lam_ok),
              ("dn-equivalence invariance (20 ops per matrix)", dn_ok),
              ("family dimension <= defect", dim_ok),
              ("Paley C C^T = (N-1) I", conf_ok),
              ("order feasibility 22, 34 false; 6, 10, 14, 18, 26 true", feas_ok)]
    report(capsys, 8, "property suites", checks, elapsed, 120.0)


def test_criterion_9_numeric_agreement(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(9)
    worst = 0.0
    for id in catalogue.families():
        F = cat(id)
        n = F.order
        for _ in range(100):
            M = F.to_complex(rng.uniform(-np.pi, np.pi, F.param_count))
            worst = max(worst, float(np.abs(M @ M.conj().T - n * np.eye(n)).max()))
    elapsed = time.perf_counter() - t
    report(capsys, 9, f"100 random evaluations per family, max residual {worst:.2e}",
           [("residual < 1e-9", worst < 1e-9)], elapsed, 60.0)
