import numpy as np
import pytest
from numpy.testing import assert_allclose

from identent import (
    DecompositionKind,
    Symmetry,
    SymmetryViolation,
    antisymmetrize_product,
    from_coefficients,
    reconstruct,
    schmidt_decompose_boson,
    schmidt_decompose_general,
    schmidt_form,
    slater_decompose,
    slater_form,
    symmetrize_product,
)
from identent.decomposition import RANK_TOL, decompose, reconstruction_residual
from identent.oracle import make_rng, random_state, random_unitary, random_vector

from conftest import SQ2, e, phase_distance


def rotate(state, U):
    return from_coefficients(U @ state.entries @ U.T, state.symmetry)


class TestSlater:
    def test_singlet(self, singlet):
        r = slater_decompose(singlet)
        assert r.kind is DecompositionKind.SLATER
        assert_allclose(r.coefficients, [1.0], atol=1e-15)
        assert r.effective_rank == 1

    def test_two_equal_terms(self):
        r = slater_decompose(slater_form([1 / SQ2, 1 / SQ2]))
        assert_allclose(r.coefficients, [1 / SQ2, 1 / SQ2], atol=1e-15)
        assert r.effective_rank == 2

    @pytest.mark.parametrize("seed", range(25))
    def test_antisymmetrized_products_have_slater_number_one(self, seed):
        rng = make_rng(seed)
        d = 2 + seed % 7
        s = antisymmetrize_product(random_vector(rng, d), random_vector(rng, d))
        assert slater_decompose(s).effective_rank == 1

    def test_requires_fermion(self, boson_08):
        with pytest.raises(SymmetryViolation):
            slater_decompose(boson_08)

    def test_complex_coefficients_become_moduli(self, rng):
        a = np.array([0.6j, -0.8])
        U = random_unitary(rng, 4)
        r = slater_decompose(slater_form(a, U))
        assert_allclose(r.coefficients, [0.8, 0.6], atol=1e-14)


class TestSchmidtBoson:
    def test_product(self):
        r = schmidt_decompose_boson(symmetrize_product(e(2, 0), e(2, 0)))
        assert_allclose(r.coefficients, [1, 0], atol=1e-15)
        assert r.effective_rank == 1

    def test_symmetrized_orthogonal(self, boson_equal):
        r = schmidt_decompose_boson(boson_equal)
        assert_allclose(r.coefficients, [1 / SQ2, 1 / SQ2], atol=1e-15)
        assert r.effective_rank == 2

    def test_own_schmidt_form(self, boson_08):
        r = schmidt_decompose_boson(boson_08)
        assert_allclose(r.coefficients, np.sqrt([0.8, 0.2]), atol=1e-15)
        assert r.effective_rank == 2

    def test_non_orthogonal_pair(self):
        # (e1 chi^T + chi e1^T)/2 with chi = (e1+e2)/sqrt2 is proportional to
        # [[2, 1], [1, 0]], eigenvalues 1 +- sqrt2, normalized by sqrt6
        r = schmidt_decompose_boson(symmetrize_product(e(2, 0), (e(2, 0) + e(2, 1)) / SQ2))
        expected = np.array([1 + SQ2, SQ2 - 1]) / np.sqrt(6)
        assert_allclose(r.coefficients, expected, atol=1e-15)


class TestSchmidtGeneral:
    def test_product(self, rng):
        s = from_coefficients(np.outer(random_vector(rng, 3), random_vector(rng, 3)))
        assert schmidt_decompose_general(s).effective_rank == 1

    def test_singlet_as_distinguishable(self, singlet):
        r = schmidt_decompose_general(singlet)
        assert_allclose(r.coefficients, [1 / SQ2, 1 / SQ2], atol=1e-15)
        assert r.effective_rank == 2

    def test_diagonal(self):
        r = schmidt_decompose_general(from_coefficients(np.diag(np.sqrt([0.5, 0.3, 0.2]))))
        assert r.effective_rank == 3

    @pytest.mark.parametrize("seed", range(30))
    def test_fermion_svd_rank_is_twice_slater_number(self, seed):
        d = 2 + seed % 7
        s = random_state(Symmetry.FERMION, d, seed)
        assert schmidt_decompose_general(s).effective_rank == 2 * slater_decompose(s).effective_rank


class TestReconstruct:
    def test_singlet(self, singlet):
        back = reconstruct(slater_decompose(singlet))
        assert phase_distance(back.entries, singlet.entries) <= 1e-15
        assert back.symmetry is Symmetry.FERMION

    def test_product(self):
        s = symmetrize_product(e(2, 0), e(2, 0))
        assert_allclose(reconstruct(schmidt_decompose_boson(s)).entries, s.entries)

    @pytest.mark.parametrize("symmetry", list(Symmetry))
    @pytest.mark.parametrize("d", range(2, 9))
    def test_round_trip(self, symmetry, d):
        for seed in range(40):
            s = random_state(symmetry, d, 1000 * d + seed)
            r = decompose(s)
            assert reconstruction_residual(s, r) <= 1e-10
            assert abs(np.sum(r.coefficients ** 2) - 1) <= 1e-10
            assert np.all(np.diff(r.coefficients) <= 0)


class TestInvariance:
    @pytest.mark.parametrize("symmetry", [Symmetry.FERMION, Symmetry.BOSON])
    @pytest.mark.parametrize("seed", range(20))
    def test_unitary_basis_change(self, symmetry, seed):
        rng = make_rng(seed)
        d = 2 + seed % 6
        s = random_state(symmetry, d, seed)
        t = rotate(s, random_unitary(rng, d))
        a, b = decompose(s), decompose(t)
        assert a.effective_rank == b.effective_rank
        assert_allclose(a.coefficients, b.coefficients, atol=1e-10)

    def test_rank_stable_under_small_perturbation(self, rng):
        for seed in range(20):
            base = schmidt_form([0.8, 0.5, 0.3], random_unitary(rng, 4))
            noise = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            noise = noise + noise.T
            noise *= (RANK_TOL / 20) / np.linalg.norm(noise)
            pert = from_coefficients(base.entries + noise, Symmetry.BOSON)
            assert decompose(pert).effective_rank == decompose(base).effective_rank == 3


class TestNearThreshold:
    def test_flagged(self):
        r = decompose(schmidt_form([1.0, 2e-9]))
        assert r.near_threshold
        assert r.effective_rank == 2

    def test_not_flagged_when_gapped(self, boson_08):
        assert not decompose(boson_08).near_threshold

    def test_exact_zero_not_flagged(self):
        assert not decompose(schmidt_form([1.0, 0.0])).near_threshold
