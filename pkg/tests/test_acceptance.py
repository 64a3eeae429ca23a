"""Exit criteria: one test per criterion, each printing a PASS/FAIL line."""

import time

import numpy as np
import pytest

from identent import (
    ClassificationConflict,
    Symmetry,
    Verdict,
    antisymmetrize_product,
    classify,
    from_coefficients,
    reduced_density,
    schmidt_form,
    slater_decompose,
    slater_form,
    symmetrize_product,
    takagi,
    von_neumann_entropy,
    witness_search,
    youla,
)
from identent.oracle import (
    DEFAULT_CONFIG,
    complex_normal,
    make_rng,
    overlap_theorem_check,
    random_slater_coefficients,
    random_state,
    random_unitary,
    random_vector,
    run_sweep,
    witness_grid_d2,
)

from conftest import ACCEPTANCE_REPORT, e

pytestmark = pytest.mark.acceptance


class Criterion:
    """Collects checks for one criterion and reports a single line."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failures = []
        self.start = time.perf_counter()

    def check(self, ok, message):
        if not ok:
            self.failures.append(message)

    def finish(self, budget_s, elapsed=None):
        elapsed = time.perf_counter() - self.start if elapsed is None else elapsed
        self.check(elapsed < budget_s, f"runtime {elapsed:.3f}s >= {budget_s}s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"[{status}] criterion {self.number}: {self.title} ({elapsed:.3f}s)"
        if self.failures:
            line += f" -- {len(self.failures)} check(s) failed, first: {self.failures[0]}"
        ACCEPTANCE_REPORT.append(line)
        print(line)
        assert not self.failures, "\n".join(self.failures[:10])


def entropy(state):
    return von_neumann_entropy(reduced_density(state))


def test_criterion_1_singlet_pipeline():
    c = Criterion(1, "singlet pipeline")

    def pipeline():
        s = antisymmetrize_product(e(2, 0), e(2, 1))
        rho = reduced_density(s)
        cls = classify(s)
        w = witness_search(s)
        return s, rho, cls, w

    pipeline()
    timings = []
    for _ in range(5):
        t0 = time.perf_counter()
        s, rho, cls, w = pipeline()
        timings.append(time.perf_counter() - t0)
    c.check(slater_decompose(s).effective_rank == 1, "Slater number != 1")
    c.check(np.max(np.abs(rho.matrix - np.eye(2) / 2)) <= 1e-12, "rho != I/2")
    c.check(abs(cls.entropy - 1.0) <= 1e-10, f"S = {cls.entropy!r}")
    c.check(cls.verdict is Verdict.NON_ENTANGLED_SLATER_ONE, f"verdict {cls.verdict}")
    c.check(abs(w.expectation - 1.0) <= 1e-8, f"witness {w.expectation!r}")
    c.finish(0.010, elapsed=min(timings))


def test_criterion_2_fermion_entropy_law():
    c = Criterion(2, "fermion entropy law, 200 states")
    rng = make_rng(2002)
    for k in range(200):
        d = (4, 6, 8)[k % 3]
        a = random_slater_coefficients(rng, d, min_coeff=0.05)
        phases = np.exp(2j * np.pi * rng.uniform(size=a.size))
        s = slater_form(a * phases, random_unitary(rng, d))
        p = a[a > 0] ** 2
        formula = 1 - np.sum(p * np.log2(p))
        S = entropy(s)
        c.check(abs(S - formula) <= 1e-10, f"state {k}: S={S!r} formula={formula!r}")
        c.check(S > 1 + 1e-6, f"state {k}: S={S!r} not > 1")
    c.finish(5.0)


def test_criterion_3_boson_trichotomy():
    c = Criterion(3, "boson trichotomy")
    rng = make_rng(3003)
    for d in range(2, 7):
        phi = random_vector(rng, d)
        cls = classify(symmetrize_product(phi, phi))
        c.check(cls.entropy <= 1e-12, f"product d={d}: S={cls.entropy!r}")
        c.check(cls.verdict is Verdict.NON_ENTANGLED_PRODUCT, f"product d={d}: {cls.verdict}")

        chi = random_vector(rng, d)
        chi = chi - phi * np.vdot(phi, chi)
        cls = classify(symmetrize_product(phi, chi))
        c.check(cls.rank_count == 2, f"orthogonal pair d={d}: Schmidt {cls.rank_count}")
        c.check(abs(cls.entropy - 1) <= 1e-8, f"orthogonal pair d={d}: S={cls.entropy!r}")
        c.check(cls.verdict is Verdict.NON_ENTANGLED_SYMMETRIZED_ORTHOGONAL,
                f"orthogonal pair d={d}: {cls.verdict}")

    s08 = schmidt_form([np.sqrt(0.8), np.sqrt(0.2)])
    cls = classify(s08)
    formula = -0.8 * np.log2(0.8) - 0.2 * np.log2(0.2)
    c.check(abs(cls.entropy - formula) <= 1e-6, f"b1^2=0.8: S={cls.entropy!r}")
    c.check(abs(cls.entropy - 0.721928) <= 1e-6, f"b1^2=0.8: S={cls.entropy!r}")
    c.check(cls.verdict is Verdict.ENTANGLED, f"b1^2=0.8: {cls.verdict}")

    s3 = schmidt_form(np.sqrt([0.5, 0.3, 0.2]))
    cls = classify(s3)
    c.check(reduced_density(s3).rank >= 3, "Schmidt-3: rho rank < 3")
    c.check(cls.verdict is Verdict.ENTANGLED, f"Schmidt-3: {cls.verdict}")
    c.finish(1.0)


def test_criterion_4_orthogonality_equivalence():
    c = Criterion(4, "orthogonality equivalence, 500 pairs")
    rng = make_rng(4004)
    counterexamples = 0
    for k in range(500):
        d = 2 + k % 5
        phi, chi = random_vector(rng, d), random_vector(rng, d)
        if k % 2 == 0:
            chi = chi - phi * np.vdot(phi, chi)
        r = overlap_theorem_check(phi, chi, tol=1e-10)
        if not r.consistent:
            counterexamples += 1
    c.check(counterexamples == 0, f"{counterexamples} counterexamples")
    c.finish(10.0)


def test_criterion_5_factorization_reconstruction():
    c = Criterion(5, "Takagi/Youla reconstruction, 1000 per d and class")
    rng = make_rng(5005)
    worst = {"rec": 0.0, "orth": 0.0, "val": 0.0}
    for d in range(2, 9):
        eye = np.eye(d)
        for _ in range(1000):
            M = complex_normal(rng, (d, d))
            S = (M + M.T) / 2
            A = (M - M.T) / 2
            S /= np.linalg.norm(S)
            A /= np.linalg.norm(A)
            t, y = takagi(S), youla(A)
            sv_s = np.linalg.svd(S, compute_uv=False)
            sv_a = np.linalg.svd(A, compute_uv=False)
            doubled = np.sort(np.r_[np.repeat(y.block_values, 2), np.zeros(d % 2)])[::-1]
            worst["rec"] = max(worst["rec"], np.linalg.norm(t.reconstruct() - S),
                               np.linalg.norm(y.reconstruct() - A))
            worst["orth"] = max(worst["orth"],
                                np.linalg.norm(t.modes.conj().T @ t.modes - eye),
                                np.linalg.norm(y.modes.conj().T @ y.modes - eye))
            worst["val"] = max(worst["val"], np.max(np.abs(t.values - sv_s)),
                               np.max(np.abs(doubled - sv_a)))
    for key, value in worst.items():
        c.check(value <= 1e-10, f"worst {key} residual {value:.3e}")
    c.finish(60.0)


def _non_entangled_corpus(rng):
    states = [antisymmetrize_product(e(2, 0), e(2, 1)),
              symmetrize_product(e(2, 0), e(2, 1)),
              symmetrize_product(e(2, 0), e(2, 0))]
    for d in range(2, 7):
        for _ in range(4):
            phi, chi = random_vector(rng, d), random_vector(rng, d)
            perp = chi - phi * np.vdot(phi, chi)
            states += [antisymmetrize_product(phi, chi), symmetrize_product(phi, perp),
                       symmetrize_product(phi, phi),
                       from_coefficients(np.outer(phi, chi))]
    return states


def test_criterion_6_witness_coherence():
    c = Criterion(6, "witness coherence")
    rng = make_rng(6006)
    for k, s in enumerate(_non_entangled_corpus(rng)):
        c.check(not classify(s).entangled, f"corpus state {k} classified entangled")
        w = witness_search(s, seed=k)
        c.check(w.expectation >= 1 - 1e-8, f"non-entangled state {k}: witness {w.expectation!r}")

    cases = [(b1sq, rotated) for b1sq in (0.55, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99)
             for rotated in (False, True)]
    for k, (b1sq, rotated) in enumerate(cases):
        b = np.sqrt([b1sq, 1 - b1sq])
        assert abs(b[0] - b[1]) >= 0.05
        U = random_unitary(rng, 2) if rotated else np.eye(2)
        s = schmidt_form(b, U)
        assert classify(s).verdict is Verdict.ENTANGLED
        found = witness_search(s, seed=k).expectation
        grid = witness_grid_d2(s)
        c.check(abs(found - grid) <= 1e-6,
                f"b1^2={b1sq} rotated={rotated}: search {found!r} vs grid {grid!r}")
        c.check(grid <= 1 - 1e-4, f"b1^2={b1sq} rotated={rotated}: grid max {grid!r} > 1 - 1e-4")
    c.finish(120.0)


def test_criterion_7_basis_invariance():
    c = Criterion(7, "basis invariance, 200 pairs")
    rng = make_rng(7007)
    symmetries = [Symmetry.FERMION, Symmetry.BOSON, Symmetry.DISTINGUISHABLE]
    for k in range(200):
        d = 2 + k % 5
        symmetry = symmetries[k % 3]
        if k % 4 == 0 and symmetry is Symmetry.BOSON:
            phi, chi = random_vector(rng, d), random_vector(rng, d)
            s = symmetrize_product(phi, chi - phi * np.vdot(phi, chi))
        elif k % 4 == 0 and symmetry is Symmetry.FERMION:
            s = antisymmetrize_product(random_vector(rng, d), random_vector(rng, d))
        else:
            s = random_state(symmetry, d, 70_000 + k)
        U = random_unitary(rng, d)
        t = from_coefficients(U @ s.entries @ U.T, symmetry)
        a, b = classify(s), classify(t)
        c.check(a.verdict is b.verdict, f"pair {k}: {a.verdict} vs {b.verdict}")
        c.check(a.rank_count == b.rank_count, f"pair {k}: rank {a.rank_count} vs {b.rank_count}")
        c.check(abs(a.entropy - b.entropy) <= 1e-10,
                f"pair {k}: entropy {a.entropy!r} vs {b.entropy!r}")
    c.finish(10.0)


def test_criterion_8_dual_criterion_consistency():
    c = Criterion(8, "dual-criterion consistency")
    records = list(run_sweep({**DEFAULT_CONFIG, "witness": False}))
    conflicts = [r for r in records if r["verdict"] == "conflict"]
    c.check(len(records) > 0, "empty sweep corpus")
    c.check(not conflicts, f"{len(conflicts)} conflicts on the sweep corpus")
    bad = [r for r in records if r["failures"]]
    c.check(not bad, f"{len(bad)} sweep records violate invariants")
    try:
        classify(schmidt_form([1.0, 2e-9]))
    except ClassificationConflict:
        pass
    else:
        c.check(False, "near-threshold fixture did not raise ClassificationConflict")
    c.finish(60.0)
