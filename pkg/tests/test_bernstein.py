from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from regcheck import bernstein

unit = st.floats(0.0, 1.0, allow_nan=False)


class TestBinomials:
    def test_table_is_exact(self):
        for n in range(bernstein.MAX_BINOMIAL_N + 1):
            assert list(bernstein.BINOMIALS.row(n)) == [comb(n, k) for k in range(n + 1)]

    def test_float_view_exact(self):
        t = bernstein.BINOMIALS.as_float
        assert t[32, 16] == comb(32, 16)
        assert not t.flags.writeable

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            bernstein.BINOMIALS(3, 4)
        with pytest.raises(ValueError):
            bernstein.BINOMIALS(40, 1)
        assert bernstein.binomial(40, 20) == comb(40, 20)


class TestBasis:
    @given(st.integers(0, 12), unit, st.data())
    def test_matches_recurrence(self, n, t, data):
        i = data.draw(st.integers(0, n))
        assert bernstein.bernstein_eval(n, i, t) == pytest.approx(oracles.basis_recurrence(n, i, t), abs=1e-14)

    @given(st.integers(0, 15), unit)
    def test_partition_of_unity(self, n, t):
        assert bernstein.bernstein_matrix(n, [t]).sum() == pytest.approx(1.0, abs=1e-13)

    def test_endpoints(self):
        assert bernstein.bernstein_eval(4, 0, 0.0) == 1.0
        assert bernstein.bernstein_eval(4, 4, 1.0) == 1.0
        assert bernstein.bernstein_eval(4, 2, 0.0) == 0.0

    @pytest.mark.parametrize("n,i,t", [(3, 4, 0.5), (3, -1, 0.5), (2, 1, 1.5), (2, 1, -0.1)])
    def test_bad_arguments(self, n, i, t):
        with pytest.raises(ValueError):
            bernstein.bernstein_eval(n, i, t)


class TestCoefficientWeight:
    def test_matches_exact_rationals(self):
        degs = (2, 3, 1)
        nu, nv, nw = degs
        for dec in product(range(nu), range(nv + 1), range(nw + 1), range(nu + 1), range(nv), range(nw + 1), range(nu + 1), range(nv + 1), range(nw)):
            exact = oracles.weight_exact(degs, dec)
            assert bernstein.coefficient_weight(degs, dec) == pytest.approx(float(exact), rel=1e-15)

    def test_known_value(self):
        # nu=nv=nw=1, everything zero: each direction gives 1/C(2,0) = 1
        assert bernstein.coefficient_weight((1, 1, 1), (0,) * 9) == 1.0
        # u: C(0,0) C(1,1) C(1,1) / C(2,2) = 1
        assert bernstein.coefficient_weight((1, 1, 1), (0, 0, 0, 1, 0, 0, 1, 0, 0)) == 1.0
        # u: C(0,0) C(1,1) C(1,0) / C(2,1) = 1/2
        assert bernstein.coefficient_weight((1, 1, 1), (0, 0, 0, 1, 0, 0, 0, 0, 0)) == 0.5

    def test_bounds_checked(self):
        with pytest.raises(ValueError):
            bernstein.coefficient_weight((1, 1, 1), (1, 0, 0, 0, 0, 0, 0, 0, 0))

    def test_weights_sum_to_one_per_direction(self):
        # sum over decompositions of fixed p of C(..)C(..)C(..) equals C(3n-1, p)
        for n in range(1, 6):
            w = bernstein.direction_weights(n, 0)
            sums = np.zeros(3 * n)
            for a, b, c in np.ndindex(w.shape):
                sums[a + b + c] += w[a, b, c]
            ref = [sum(Fraction(comb(n - 1, a) * comb(n, b) * comb(n, p - a - b), comb(3 * n - 1, p))
                       for a in range(n) for b in range(n + 1) if 0 <= p - a - b <= n) for p in range(3 * n)]
            assert np.allclose(sums, [float(x) for x in ref], rtol=1e-14)

    def test_decomposition_table_groups_by_sum(self):
        start, idx, weight = bernstein.decomposition_table(3, 1)
        w = bernstein.direction_weights(3, 1)
        assert start[-1] == w.size
        for p in range(9):
            for row in range(start[p], start[p + 1]):
                a, bc = idx[row]
                b, c = divmod(bc, w.shape[2])
                assert a + b + c == p
                assert weight[row] == w[a, b, c]


class TestOperations:
    @given(st.integers(1, 6), st.integers(0, 4), unit)
    @settings(max_examples=50)
    def test_elevation_preserves_values(self, n, extra, t):
        c = np.random.default_rng(n).normal(size=(n + 1, 3))
        e = bernstein.elevate(c, 0, n + extra)
        assert np.allclose(bernstein.decasteljau(e, t), bernstein.decasteljau(c, t), atol=1e-13)

    def test_elevate_down_rejected(self):
        with pytest.raises(ValueError):
            bernstein.elevate(np.zeros((4, 3)), 0, 2)

    @given(st.floats(0.05, 0.95), unit)
    @settings(max_examples=50)
    def test_split_pieces(self, t, s):
        c = np.random.default_rng(7).normal(size=(5, 2))
        left, right = bernstein.split(c, t, 0)
        assert np.allclose(bernstein.decasteljau(left, s), bernstein.decasteljau(c, s * t), atol=1e-13)
        assert np.allclose(bernstein.decasteljau(right, s), bernstein.decasteljau(c, t + s * (1 - t)), atol=1e-13)

    def test_decasteljau_matches_basis_sum(self, rng):
        c = rng.normal(size=6)
        for t in np.linspace(0, 1, 11):
            ref = sum(c[i] * oracles.basis_recurrence(5, i, t) for i in range(6))
            assert bernstein.decasteljau(c, t) == pytest.approx(ref, abs=1e-13)

    def test_hodograph_against_differences(self, rng):
        c = rng.normal(size=5)
        h = 1e-6
        for t in (0.2, 0.5, 0.8):
            fd = (bernstein.decasteljau(c, t + h) - bernstein.decasteljau(c, t - h)) / (2 * h)
            assert bernstein.decasteljau(bernstein.hodograph(c, 0), t) == pytest.approx(fd, abs=1e-7)

    def test_multiply_pointwise(self, rng):
        a = rng.normal(size=(3, 2))
        b = rng.normal(size=(4, 3))
        prod = bernstein.multiply(a, b, 2)
        assert prod.shape == (6, 4)
        for s, t in rng.uniform(0, 1, (10, 2)):
            lhs = bernstein.decasteljau(bernstein.decasteljau(prod, t, 1), s)
            rhs = bernstein.decasteljau(bernstein.decasteljau(a, t, 1), s) * bernstein.decasteljau(bernstein.decasteljau(b, t, 1), s)
            assert lhs == pytest.approx(rhs, abs=1e-12)
