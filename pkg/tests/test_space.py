import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from lorentzkit.space import (
    FiniteVector,
    SpaceParams,
    YVector,
    decreasing_rearrangement,
    disjoint_supports,
    lorentz_norm,
    lorentz_norm_runlength,
    lorentz_pnorm_pow,
    lorentz_pnorm_pow_runlength,
    lp_norm,
    y_norm,
    y_pnorm_pow,
)
from lorentzkit.weights import WeightSequence

import _oracles as oracle


@pytest.fixture(scope="module")
def half():
    return WeightSequence(0.5)


class TestFiniteVector:
    def test_from_dense_drops_zeros(self):
        v = FiniteVector.from_dense([1.0, 0.0, 2.0, 0.0])
        assert list(v.indices) == [1, 3]
        assert list(v.values) == [1.0, 2.0]

    def test_from_pairs_sorted(self):
        v = FiniteVector.from_pairs([(5, 2.0), (2, -1.0)])
        assert list(v.indices) == [2, 5]
        assert list(v.values) == [-1.0, 2.0]

    def test_duplicate_indices_rejected(self):
        with pytest.raises(ValueError):
            FiniteVector.from_pairs([(1, 1.0), (1, 2.0)])

    def test_indices_start_at_one(self):
        with pytest.raises(ValueError):
            FiniteVector.from_pairs([(0, 1.0)])

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            FiniteVector.from_pairs([(1, math.inf)])
        with pytest.raises(ValueError):
            FiniteVector.from_pairs([(1, math.nan)])

    def test_arrays_readonly(self):
        v = FiniteVector.from_dense([1.0, 2.0])
        with pytest.raises(ValueError):
            v.values[0] = 9.0

    def test_add_merges_supports(self):
        x = FiniteVector.from_pairs([(1, 1.0), (3, 2.0)])
        y = FiniteVector.from_pairs([(3, -2.0), (4, 5.0)])
        s = x + y
        assert list(s.indices) == [1, 4]  # index 3 cancelled exactly
        assert list(s.values) == [1.0, 5.0]

    def test_scaling(self):
        v = FiniteVector.from_dense([1.0, -2.0])
        w = v * -2.0
        assert list(w.values) == [-2.0, 4.0]
        assert (0.0 * v) == FiniteVector.empty()

    def test_get(self):
        v = FiniteVector.from_pairs([(2, 3.0)])
        assert v.get(2) == 3.0
        assert v.get(7) == 0.0

    def test_eq_and_hash(self):
        a = FiniteVector.from_dense([1.0, 2.0])
        b = FiniteVector.from_pairs([(2, 2.0), (1, 1.0)])
        assert a == b
        assert hash(a) == hash(b)

    def test_disjoint_supports(self):
        x = FiniteVector.from_pairs([(1, 1.0), (3, 1.0)])
        y = FiniteVector.from_pairs([(2, 1.0)])
        z = FiniteVector.from_pairs([(3, 1.0)])
        assert disjoint_supports(x, y)
        assert not disjoint_supports(x, z)


class TestRearrangement:
    def test_sorted_magnitudes(self):
        v = FiniteVector.from_dense([-3.0, 1.0, 2.0])
        assert list(decreasing_rearrangement(v)) == [3.0, 2.0, 1.0]

    def test_empty(self):
        assert decreasing_rearrangement(FiniteVector.empty()).size == 0


class TestNorms:
    def test_matches_oracle_p1(self, half):
        params = SpaceParams(p=1.0, weights=half)
        v = FiniteVector.from_dense([3.0, 1.0, 2.0])
        assert lorentz_norm(v, params) == pytest.approx(4.991563831562721, rel=1e-14)

    def test_matches_oracle_p2(self, half):
        params = SpaceParams(p=2.0, weights=half)
        v = FiniteVector.from_dense([3.0, 1.0, 2.0])
        assert lorentz_norm(v, params) == pytest.approx(3.5221836116159273, rel=1e-14)

    def test_single_coordinate_norm_is_magnitude(self, half):
        params = SpaceParams(p=2.0, weights=half)
        v = FiniteVector.from_pairs([(17, -4.0)])
        assert lorentz_norm(v, params) == pytest.approx(4.0, rel=1e-15)

    def test_constant_vector_identity(self, half):
        # n equal entries of size c: norm = c * W_n^(1/p)
        params = SpaceParams(p=2.0, weights=half)
        v = FiniteVector.from_dense([1.5] * 12)
        want = 1.5 * half.partial_sum(12) ** 0.5
        assert lorentz_norm(v, params) == pytest.approx(want, rel=1e-14)

    def test_empty_vector_norm_zero(self, half):
        assert lorentz_norm(FiniteVector.empty(), SpaceParams(1.0, half)) == 0.0

    def test_lp_norm(self):
        v = FiniteVector.from_dense([3.0, -4.0])
        assert lp_norm(v, 2.0) == pytest.approx(5.0, rel=1e-15)
        assert lp_norm(v, 1.0) == pytest.approx(7.0, rel=1e-15)

    def test_p_below_one_rejected(self, half):
        with pytest.raises(ValueError):
            SpaceParams(p=0.5, weights=half)

    def test_norm_dominated_by_lp(self, half):
        # weights are <= 1, so the weighted norm never exceeds the plain one
        rng = np.random.default_rng(42)
        params = SpaceParams(p=2.0, weights=half)
        for _ in range(50):
            vals = rng.standard_normal(rng.integers(1, 30))
            v = FiniteVector.from_dense(vals)
            assert lorentz_norm(v, params) <= lp_norm(v, 2.0) + 1e-12


class TestNormProperties:
    @given(
        values=st.lists(
            st.floats(-100, 100, allow_nan=False, width=64), min_size=1, max_size=24
        ),
        p=st.sampled_from([1.0, 1.5, 2.0, 3.0]),
        theta=st.sampled_from([0.25, 0.5, 0.75]),
    )
    @settings(max_examples=120, deadline=None)
    def test_permutation_and_sign_invariance(self, values, p, theta):
        params = SpaceParams(p=p, weights=WeightSequence(theta))
        v = FiniteVector.from_dense(values)
        rng = np.random.default_rng(7)
        perm = rng.permutation(len(values))
        signs = rng.choice([-1.0, 1.0], size=len(values))
        shuffled = FiniteVector.from_dense(
            [values[perm[i]] * signs[i] for i in range(len(values))]
        )
        assert lorentz_norm(shuffled, params) == pytest.approx(
            lorentz_norm(v, params), rel=1e-12, abs=1e-300
        )

    @given(
        xs=st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=16),
        ys=st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=16),
        p=st.sampled_from([1.0, 2.0]),
    )
    @settings(max_examples=120, deadline=None)
    def test_triangle_inequality(self, xs, ys, p):
        params = SpaceParams(p=p, weights=WeightSequence(0.5))
        n = max(len(xs), len(ys))
        xs = xs + [0.0] * (n - len(xs))
        ys = ys + [0.0] * (n - len(ys))
        x = FiniteVector.from_dense(xs)
        y = FiniteVector.from_dense(ys)
        lhs = lorentz_norm(x + y, params)
        assert lhs <= lorentz_norm(x, params) + lorentz_norm(y, params) + 1e-9

    @given(
        values=st.lists(
            st.one_of(
                st.just(0.0),
                st.floats(1e-6, 10, allow_nan=False),
                st.floats(-10, -1e-6, allow_nan=False),
            ),
            min_size=1,
            max_size=16,
        ),
        scale=st.one_of(
            st.just(0.0),
            st.floats(1e-3, 5, allow_nan=False),
            st.floats(-5, -1e-3, allow_nan=False),
        ),
    )
    @settings(max_examples=80, deadline=None)
    def test_homogeneity(self, values, scale):
        # magnitudes bounded away from the subnormal range: squaring in the
        # p = 2 norm would otherwise underflow before the root is taken
        params = SpaceParams(p=2.0, weights=WeightSequence(0.5))
        v = FiniteVector.from_dense(values)
        assert lorentz_norm(v * scale, params) == pytest.approx(
            abs(scale) * lorentz_norm(v, params), rel=1e-12, abs=0.0
        )


class TestRunLengthNorm:
    def test_matches_materialized(self, half):
        params = SpaceParams(p=2.0, weights=half)
        values = np.array([0.5, 2.0, 1.0])
        lengths = np.array([3, 2, 4])
        dense = np.concatenate([np.full(l, v) for v, l in zip(values, lengths)])
        want = lorentz_pnorm_pow(FiniteVector.from_dense(dense), params)
        got = lorentz_pnorm_pow_runlength(values, lengths, params)
        assert got == pytest.approx(want, rel=1e-13)

    def test_norm_root(self, half):
        params = SpaceParams(p=2.0, weights=half)
        got = lorentz_norm_runlength(np.array([1.0]), np.array([4]), params)
        assert got == pytest.approx(half.partial_sum(4) ** 0.5, rel=1e-14)

    def test_zero_blocks_dropped(self, half):
        params = SpaceParams(p=1.0, weights=half)
        got = lorentz_pnorm_pow_runlength(
            np.array([0.0, 2.0]), np.array([5, 2]), params
        )
        want = 2.0 * half.partial_sum(2)
        assert got == pytest.approx(want, rel=1e-14)

    def test_negative_values_use_magnitude(self, half):
        params = SpaceParams(p=1.0, weights=half)
        a = lorentz_pnorm_pow_runlength(np.array([-2.0]), np.array([3]), params)
        b = lorentz_pnorm_pow_runlength(np.array([2.0]), np.array([3]), params)
        assert a == b

    def test_bad_lengths_rejected(self, half):
        params = SpaceParams(p=1.0, weights=half)
        with pytest.raises(ValueError):
            lorentz_pnorm_pow_runlength(np.array([1.0]), np.array([0]), params)


class TestYVector:
    def test_component_norms_accumulate(self, half):
        params = SpaceParams(p=2.0, weights=half)
        y = YVector([(3, np.array([1.0, 0.5])), (5, np.array([2.0]))])
        assert y.components[0][0] == 3
        w2 = half.weight(2)
        want = math.sqrt(1.0 + 0.25 * w2 + 4.0)
        assert y_norm(y, params) == pytest.approx(want, rel=1e-14)

    def test_two_unit_components_p1(self, half):
        params = SpaceParams(p=1.0, weights=half)
        y = YVector([(1, np.array([1.0])), (4, np.array([1.0]))])
        assert y_norm(y, params) == pytest.approx(2.0, rel=1e-15)

    def test_component_rearranged_before_weighting(self, half):
        params = SpaceParams(p=1.0, weights=half)
        y = YVector([(2, np.array([3.0, -1.0]))])
        want = 3.0 + 1.0 * half.weight(2)
        assert y_pnorm_pow(y, params) == pytest.approx(want, rel=1e-15)

    def test_mixed_components_oracle(self, half):
        # ((1,1) and (1)) at p=2: squares sum to W_2 + 1
        params = SpaceParams(p=2.0, weights=half)
        y = YVector([(2, np.array([1.0, 1.0])), (1, np.array([1.0]))])
        assert y_norm(y, params) == pytest.approx(1.6453287760160726, rel=1e-14)

    def test_too_many_coefficients_rejected(self):
        with pytest.raises(ValueError):
            YVector([(2, np.array([1.0, 1.0, 1.0]))])

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            YVector([(2, np.array([np.inf]))])
