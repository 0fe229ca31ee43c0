import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gensamp import bases
from gensamp.bases import (
    BasisIndexError,
    decode_haar,
    eval_fourier,
    eval_point,
    fourier_exponentials,
    fourier_oracle,
    haar_count_below_level,
    haar_system,
    legendre,
)
from gensamp.solver import gauss_grid

HAAR = haar_system()
LEG = legendre()


class TestHaarOrdering:
    def test_first_functions(self):
        got = [decode_haar(l) for l in range(1, 5)]
        assert got[0].kind == "scaling" and got[0].shift == 0
        assert [(g.level, g.shift) for g in got[1:]] == [(0, 0), (1, 0), (1, 1)]

    @given(st.integers(1, 12))
    def test_power_of_two_covers_whole_levels(self, J):
        n = 2**J
        assert haar_count_below_level(J) == n
        assert decode_haar(n).level == J - 1
        assert decode_haar(n + 1).level == J

    def test_wider_support_needs_negative_shifts(self):
        idx = [decode_haar(l, a=2) for l in range(1, 4)]
        assert all(i.kind == "scaling" for i in idx[:3])
        assert sorted(i.shift for i in idx[:3]) == [-1, 0, 1]

    def test_index_zero_rejected(self):
        with pytest.raises(BasisIndexError):
            eval_point(HAAR, 0, 0.3)


class TestPointValues:
    def test_scaling_indicator(self):
        assert eval_point(HAAR, 1, 0.3) == 1

    def test_fine_wavelet(self):
        assert eval_point(HAAR, 4, 0.6) == pytest.approx(math.sqrt(2))

    def test_half_open_breakpoints(self):
        assert eval_point(HAAR, 2, 0.0) == 1
        assert eval_point(HAAR, 2, 0.5) == -1
        assert eval_point(HAAR, 2, 1.0) == 0

    def test_legendre_linear_endpoint(self):
        assert eval_point(LEG, 2, 1.0) == pytest.approx(math.sqrt(1.5))

    def test_exponential_basis(self):
        fam = fourier_exponentials(0.5)
        assert eval_point(fam, 2, 0.25) == pytest.approx(math.sqrt(0.5) * np.exp(2j * np.pi * 0.5 * 0.25))
        assert eval_point(fam, 2, 1.5) == 0


class TestTransforms:
    def test_haar_scaling_at_zero(self):
        assert eval_fourier(HAAR, 1, 0.0) == 1

    def test_haar_wavelet_at_zero(self):
        assert eval_fourier(HAAR, 2, 0.0) == 0

    def test_haar_scaling_at_half(self):
        assert eval_fourier(HAAR, 1, 0.5) == pytest.approx(-2j / math.pi, abs=1e-15)

    def test_legendre_odd_at_zero(self):
        assert abs(eval_fourier(LEG, 2, 0.0)) < 1e-15

    @pytest.mark.parametrize("l", [1, 2, 7])
    @pytest.mark.parametrize("factor", [-1.1, -0.5, 0.3, 0.99, 1.01, 3.0])
    def test_accurate_across_series_band(self, l, factor):
        w = factor * bases.SERIES_BAND
        assert abs(eval_fourier(HAAR, l, w) - fourier_oracle(HAAR, l, w)) < 1e-13

    def test_exponential_grid_values(self):
        eps = 0.5
        fam = fourier_exponentials(eps)
        grid = bases.rho(np.arange(1, 8), eps)
        for l in range(1, 8):
            vals = eval_fourier(fam, l, grid)
            expected = np.where(np.arange(1, 8) == l, 1 / math.sqrt(eps), 0.0)
            assert np.array_equal(vals, expected)

    def test_vector_and_scalar_agree(self):
        w = np.array([-3.3, 0.0, 0.25, 17.0])
        vec = eval_fourier(HAAR, 9, w)
        assert np.allclose(vec, [eval_fourier(HAAR, 9, x) for x in w], atol=0, rtol=0)


class TestOracle:
    def test_haar_scaling_at_zero(self):
        assert abs(fourier_oracle(HAAR, 1, 0.0) - 1) < 1e-12

    def test_legendre_constant_at_zero(self):
        assert abs(fourier_oracle(LEG, 1, 0.0) - math.sqrt(2)) < 1e-12

    @pytest.mark.parametrize(
        "family,max_l",
        [(HAAR, 256), (haar_system(2.0), 64), (LEG, 30), (fourier_exponentials(0.5), 41)],
        ids=["haar", "haar-wide", "legendre", "exponentials"],
    )
    def test_closed_forms_match_oracle(self, family, max_l):
        rng = np.random.default_rng(7)
        ls = rng.integers(1, max_l + 1, size=250)
        ws = rng.uniform(-100, 100, size=250)
        ws[:5] = 0.0
        for l, w in zip(ls, ws):
            assert abs(eval_fourier(family, int(l), w) - fourier_oracle(family, int(l), w)) < 1e-10


class TestProperties:
    def test_haar_orthonormal(self):
        x, w = gauss_grid(0.0, 1.0, pieces=64, nodes=4)
        phi = bases.point_matrix(HAAR, 64, x)
        gram = phi.T @ (w[:, None] * phi)
        assert np.abs(gram - np.eye(64)).max() < 1e-10

    def test_legendre_orthonormal(self):
        x, w = gauss_grid(-1.0, 1.0, pieces=8, nodes=32)
        phi = bases.point_matrix(LEG, 20, x)
        assert np.abs(phi.T @ (w[:, None] * phi) - np.eye(20)).max() < 1e-12

    @given(st.floats(0.1, 1e4) , st.booleans())
    def test_haar_decay(self, w, negative):
        w = -w if negative else w
        assert abs(eval_fourier(HAAR, 1, w)) <= 2 / abs(w) + 1e-15
        assert abs(eval_fourier(HAAR, 2, w)) <= 2 / abs(w) + 1e-15

    @pytest.mark.parametrize("l", range(1, 17))
    def test_parseval_column_sums(self, l):
        eps = 0.5
        w = eps * np.arange(-100_000, 100_001)
        total = eps * np.sum(np.abs(eval_fourier(HAAR, l, w)) ** 2)
        assert 1 - 1e-3 <= total <= 1

    @given(st.integers(1, 200), st.floats(-50, 50))
    def test_real_functions_have_hermitian_transforms(self, l, w):
        assert eval_fourier(HAAR, l, -w) == pytest.approx(np.conj(eval_fourier(HAAR, l, w)), abs=1e-14)
