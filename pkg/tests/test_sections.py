import math
import threading

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gensamp import numerics, sections
from gensamp.bases import eval_fourier, fourier_exponentials, haar_mother_ft, haar_system, legendre, rho
from gensamp.sections import NyquistError, SamplingScheme, build_section, build_square_section

HAAR = haar_system()
HALF = SamplingScheme(0.5)


class TestRho:
    @pytest.mark.parametrize("i,eps,expected", [(1, 0.5, 0.0), (4, 0.5, 1.0), (5, 0.25, -0.5), (2, 0.5, 0.5), (3, 0.5, -0.5)])
    def test_values(self, i, eps, expected):
        assert rho(i, eps) == expected

    def test_zero_index_rejected(self):
        with pytest.raises(IndexError):
            rho(0, 0.5)

    @given(st.integers(1, 10_000))
    def test_bijection_onto_integers(self, m):
        ks = np.round(rho(np.arange(1, m + 1), 1.0)).astype(int)
        assert len(set(ks)) == m
        if m % 2:
            assert sorted(ks) == list(range(-(m // 2), m // 2 + 1))


class TestScheme:
    def test_spacing_range(self):
        for bad in (0.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                SamplingScheme(bad)

    def test_nyquist_violation_is_an_error(self):
        with pytest.raises(NyquistError):
            build_section(legendre(), SamplingScheme(0.75), 3, 2)

    def test_legendre_at_half_is_allowed(self):
        assert build_section(legendre(), HALF, 3, 2).shape == (3, 2)

    def test_unit_interval_support_allows_unit_spacing(self):
        assert SamplingScheme(1.0).nyquist_ok(HAAR)
        assert not SamplingScheme(1.0).nyquist_ok(haar_system(2.0))


class TestBuildSection:
    def test_exponentials_give_scaled_permutation(self):
        block = build_section(fourier_exponentials(0.5), HALF, 5, 5).block
        assert np.array_equal(block != 0, np.eye(5, dtype=bool))
        assert np.allclose(np.diag(block), math.sqrt(2), rtol=1e-15, atol=0)

    @pytest.mark.parametrize("eps", [1.0, 0.5, 0.125])
    def test_single_entry(self, eps):
        assert build_section(HAAR, SamplingScheme(eps), 1, 1).block[0, 0] == 1

    def test_wavelet_column(self):
        col = build_section(HAAR, HALF, 3, 2).block[:, 1]
        expected = (1 - np.exp(-0.5j * np.pi)) ** 2 / (1j * np.pi)
        assert col[0] == 0
        assert col[1] == pytest.approx(expected, abs=1e-15)
        assert col[2] == pytest.approx(np.conj(expected), abs=1e-15)

    def test_entries_follow_provenance(self):
        sec = build_section(HAAR, HALF, 40, 6, col_offset=10)
        for j in range(6):
            expected = eval_fourier(HAAR, 11 + j, rho(np.arange(1, 41), 0.5))
            assert np.allclose(sec.block[:, j], expected, atol=1e-15)

    def test_square_wrapper(self):
        a = build_square_section(HAAR, HALF, 4).block
        assert np.array_equal(a, build_section(HAAR, HALF, 4, 4).block)
        assert numerics.min_singular_value(a) > 0

    def test_blocks_are_read_only(self):
        with pytest.raises(ValueError):
            build_section(HAAR, HALF, 4, 4).block[0, 0] = 0

    def test_negative_sizes_rejected(self):
        with pytest.raises(ValueError):
            build_section(HAAR, HALF, -1, 2)


class TestInvariants:
    @given(st.integers(1, 1200), st.integers(1, 40), st.integers(0, 300), st.integers(0, 20))
    def test_nesting_is_bit_exact(self, m, n, dm, dn):
        small = build_section(HAAR, HALF, m, n).block
        big = build_section(HAAR, HALF, m + dm, n + dn).block
        assert np.array_equal(big[:m, :n], small)

    def test_nesting_survives_cache_clear(self):
        before = build_section(HAAR, HALF, 700, 9).block.copy()
        sections.clear_cache()
        assert np.array_equal(build_section(HAAR, HALF, 1100, 12).block[:700, :9], before)

    @pytest.mark.parametrize("family", [HAAR, legendre()], ids=["haar", "legendre"])
    def test_conjugate_symmetry(self, family):
        block = build_section(family, HALF, 201, 12).block
        plus, minus = block[1::2], block[2::2]
        assert np.allclose(minus, plus.conj(), atol=1e-15)

    def test_gram_converges_to_scaled_identity(self):
        eps = 0.5
        values = []
        for m in (64, 256, 1024, 4096):
            g = numerics.gram(build_section(HAAR, HALF, m, 16).block)
            values.append(numerics.operator_norm(eps * g - np.eye(16)))
        assert all(b < a for a, b in zip(values, values[1:]))
        assert values[-1] < 0.05

    def test_concurrent_builds_agree(self):
        sections.clear_cache()
        results = [None] * 6

        def work(k):
            results[k] = build_section(HAAR, HALF, 900, 30).block

        threads = [threading.Thread(target=work, args=(k,)) for k in range(6)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(np.array_equal(results[0], r) for r in results[1:])


def test_mother_wavelet_closed_form():
    w = np.array([0.5, -0.5, 3.25])
    direct = (1 - np.exp(-1j * np.pi * w)) ** 2 / (2j * np.pi * w)
    assert np.allclose(haar_mother_ft(w), direct, atol=1e-15)
