import numpy as np
import pytest

import snaptf
from snaptf import numkit

from conftest import random_affine_model, random_partition, random_poly_model


CASE_STUDY_PART = snaptf.partition_from_values(
    [0.5, 1.5, 2.0, 4.0], [0.5, 1.5], [2.0, 4.0]
)


class TestXiMatrix:
    def test_k0_is_zero(self):
        xi = snaptf.xi_matrix(0, CASE_STUDY_PART, 4, 4)
        assert not np.any(xi)
        assert numkit.numerical_rank(numkit.singular_values(xi)) == 0

    def test_k1_is_ones(self):
        xi = snaptf.xi_matrix(1, CASE_STUDY_PART, 4, 4)
        assert np.array_equal(xi, np.ones((8, 8)))
        assert numkit.numerical_rank(numkit.singular_values(xi)) == 1

    def test_k2_block_values(self):
        xi = snaptf.xi_matrix(2, CASE_STUDY_PART, 1, 1)
        assert np.array_equal(xi, [[2.5, 4.5], [3.5, 5.5]])
        assert numkit.numerical_rank(numkit.singular_values(xi)) == 2

    def test_blocks_are_constant(self):
        xi = snaptf.xi_matrix(3, CASE_STUDY_PART, 4, 4)
        for i in range(2):
            for j in range(2):
                block = xi[4 * i:4 * i + 4, 4 * j:4 * j + 4]
                assert np.all(block == block[0, 0])

    def test_divided_difference_value(self):
        # (pi^k - phi^k) / (pi - phi) without cancellation.
        part = snaptf.partition_from_values([3.0, 5.0], [3.0], [5.0])
        xi = snaptf.xi_matrix(4, part, 1, 1)
        assert xi[0, 0] == pytest.approx((3.0**4 - 5.0**4) / (3.0 - 5.0))

    def test_rank_at_most_k(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            part = random_partition(rng)
            for k in range(1, 6):
                xi = snaptf.xi_matrix(k, part, 2, 3)
                assert numkit.numerical_rank(numkit.singular_values(xi)) <= k

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            snaptf.xi_matrix(-1, CASE_STUDY_PART, 1, 1)


class TestAffineBounds:
    def test_toy_case_study(self):
        report = snaptf.affine_bounds(snaptf.builtin("toy"), CASE_STUDY_PART)
        assert report.rank_L == 2
        assert report.rank_Ls == 6
        assert report.rank_gamma == (4, 2)
        assert report.rank_xi == (0, 1, 2)
        assert report.bound_L == 2
        assert report.bound_Ls == 8
        assert report.holds == (True, True)

    def test_modified_toy_case_study(self):
        report = snaptf.affine_bounds(snaptf.builtin("toy_modified"), CASE_STUDY_PART)
        assert report.rank_L == 3
        assert report.rank_Ls == 6
        assert report.rank_gamma == (4, 3)
        assert report.bound_Ls == 10
        assert report.holds == (True, True)

    def test_scalar_affine(self):
        model = snaptf.ParametricModel(
            n=0, n_i=1, n_o=1, gamma=(np.zeros((1, 1)), np.ones((1, 1)))
        )
        part = snaptf.partition_from_values(
            [1.0, 2.0, 3.0, 4.0], [1.0, 3.0], [2.0, 4.0]
        )
        report = snaptf.affine_bounds(model, part)
        assert report.rank_L == 1
        assert report.bound_Ls == 0 + 1 * 2
        assert report.rank_Ls <= report.bound_Ls

    def test_wrong_degree_redirects(self):
        with pytest.raises(ValueError, match="poly_bounds"):
            snaptf.affine_bounds(snaptf.builtin("polynomial"), CASE_STUDY_PART)

    def test_random_models_satisfy_equality(self):
        rng = np.random.default_rng(2024)
        for _ in range(15):
            model = random_affine_model(rng)
            report = snaptf.affine_bounds(model, random_partition(rng))
            assert report.rank_L == report.rank_gamma[1] == report.bound_L
            assert report.holds == (True, True)


class TestPolyBounds:
    def test_polynomial_case_study(self):
        part = snaptf.partition_from_values(
            [0.5, 1.5, 2.5, 3.5, 2.0, 4.0, 6.0, 8.0],
            [0.5, 1.5, 2.5, 3.5],
            [2.0, 4.0, 6.0, 8.0],
        )
        report = snaptf.poly_bounds(snaptf.builtin("polynomial"), part)
        assert report.rank_L == 8
        assert report.rank_Ls == 11
        assert report.rank_gamma == (4, 2, 3, 2)
        assert report.rank_xi == (0, 1, 2, 3, 4)
        assert report.bound_L == 2 * 1 + 3 * 2 + 2 * 3  # 14
        assert report.bound_Ls == 4 * 1 + 2 * 2 + 3 * 3 + 2 * 4  # 25
        assert report.holds == (True, True)

    def test_reduces_to_affine_for_degree_one(self):
        toy = snaptf.builtin("toy")
        affine = snaptf.affine_bounds(toy, CASE_STUDY_PART)
        poly = snaptf.poly_bounds(toy, CASE_STUDY_PART)
        assert poly.bound_L == affine.bound_L
        assert poly.bound_Ls == affine.bound_Ls
        assert (poly.rank_L, poly.rank_Ls) == (affine.rank_L, affine.rank_Ls)

    def test_constant_model_gives_zero_pencil(self):
        model = snaptf.ParametricModel(
            n=1, n_i=1, n_o=1, gamma=(np.array([[1.0, 2.0], [3.0, 4.0]]),)
        )
        part = snaptf.partition_from_values([1.0, 2.0], [1.0], [2.0])
        report = snaptf.poly_bounds(model, part)
        assert report.bound_L == 0
        assert report.rank_L == 0
        assert report.holds == (True, True)

    def test_random_models_satisfy_inequalities(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            model = random_poly_model(rng)
            report = snaptf.poly_bounds(model, random_partition(rng))
            assert report.holds == (True, True)

    def test_json_shape(self):
        report = snaptf.affine_bounds(snaptf.builtin("toy"), CASE_STUDY_PART)
        d = report.to_json_dict()
        assert d == {
            "rank_L": 2,
            "rank_Ls": 6,
            "bounds": {"L": 2, "Ls": 8},
            "per_gamma": [4, 2],
            "per_xi": [0, 1, 2],
            "holds": [True, True],
        }
