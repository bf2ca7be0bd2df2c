import math

import pytest
from hypothesis import given, strategies as st

from socialspace import (
    TrustParams,
    co_rate_update,
    hat_transform,
    path_trust,
    response_weights,
    trust_value,
)

P = TrustParams()  # gamma 0.7, beta 1.0, clamp 0.01


class TestParams:
    def test_defaults(self):
        assert P.gamma == 0.7 and P.beta == 1.0 and P.clamp_epsilon == 0.01

    @pytest.mark.parametrize("kwargs", [
        {"gamma": 0.0}, {"gamma": 1.0}, {"beta": -0.1}, {"beta": 1.5},
        {"clamp_epsilon": 0.0}, {"clamp_epsilon": 0.5},
    ])
    def test_rejects_out_of_range(self, kwargs):
        with pytest.raises(ValueError):
            TrustParams(**kwargs)


class TestCoRateUpdate:
    def test_agreement_from_zero(self):
        # hand evaluation: 0.7*0 + 0.3*1
        assert co_rate_update(0.0, 1, 1, P) == pytest.approx(0.3)

    def test_disagreement_from_zero(self):
        # hand evaluation: 0.3*0 + 0.7*(-1)
        assert co_rate_update(0.0, 1, -1, P) == pytest.approx(-0.7)

    def test_full_trust_is_fixed_point_of_agreement(self):
        for gamma in (0.55, 0.7, 0.95):
            out = co_rate_update(1.0, -1, -1, TrustParams(gamma=gamma))
            assert out == pytest.approx(1.0)

    def test_rejects_zero_rate(self):
        with pytest.raises(ValueError):
            co_rate_update(0.0, 0, 1, P)

    @given(
        t=st.floats(-1, 1),
        gamma=st.floats(0.01, 0.99, exclude_min=True, exclude_max=True),
        r_i=st.sampled_from([-1, 1]),
        r_j=st.sampled_from([-1, 1]),
    )
    def test_closure(self, t, gamma, r_i, r_j):
        out = co_rate_update(t, r_i, r_j, TrustParams(gamma=gamma))
        assert -1.0 <= out <= 1.0

    @given(t=st.floats(0, 1), gamma=st.floats(0.51, 0.99))
    def test_rises_slowly_falls_quickly(self, t, gamma):
        params = TrustParams(gamma=gamma)
        up = abs(co_rate_update(t, 1, 1, params) - t)
        down = abs(co_rate_update(t, 1, -1, params) - t)
        assert down > up


class TestTrustValue:
    def test_midpoint(self):
        assert trust_value(0.0) == 0.5

    def test_affine(self):
        assert trust_value(0.3) == pytest.approx(0.65)

    def test_endpoints(self):
        assert trust_value(-1.0) == 0.0
        assert trust_value(1.0) == 1.0


class TestPathTrust:
    def test_product(self):
        assert path_trust([0.8, 0.5]) == pytest.approx(0.4)

    def test_self_path_is_full_trust(self):
        assert path_trust([]) == 1.0

    def test_single_edge(self):
        assert path_trust([0.37]) == 0.37

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=8))
    def test_never_exceeds_minimum_edge(self, trusts):
        assert path_trust(trusts) <= min(trusts) + 1e-12


class TestHatTransform:
    def test_neutral_is_zero(self):
        assert hat_transform(0.5, P) == 0.0

    def test_three_quarters(self):
        assert hat_transform(0.75, P) == pytest.approx(0.5 * math.log(3), abs=1e-12)

    def test_clamped_endpoint(self):
        # clamp to 0.99 first, then evaluate
        assert hat_transform(1.0, P) == pytest.approx(2.2975599250672945, abs=1e-12)
        assert hat_transform(1.0, P) == hat_transform(0.99, P)

    @given(x=st.floats(0, 0.49))
    def test_odd_symmetry(self, x):
        assert hat_transform(0.5 + x, P) == pytest.approx(
            -hat_transform(0.5 - x, P), abs=1e-12
        )


class TestResponseWeights:
    def test_beta_zero_uniform(self):
        params = TrustParams(beta=0.0)
        assert response_weights([0.9, 0.1, 0.5, 0.7], params) == [0.25] * 4

    def test_two_responses(self):
        w = response_weights([0.75, 0.5], P)
        root3 = math.sqrt(3)
        assert w[0] == pytest.approx(root3 / (1 + root3), abs=1e-12)
        assert w[1] == pytest.approx(1 / (1 + root3), abs=1e-12)

    def test_single_response(self):
        assert response_weights([0.42], P) == [1.0]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            response_weights([], P)

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=20),
           st.floats(0, 1))
    def test_sum_and_ordering(self, trusts, beta):
        params = TrustParams(beta=beta)
        w = response_weights(trusts, params)
        assert sum(w) == pytest.approx(1.0, abs=1e-12)
        # order-preserving: higher trust never gets a lower weight
        for (t1, w1) in zip(trusts, w):
            for (t2, w2) in zip(trusts, w):
                if t1 > t2:
                    assert w1 >= w2 - 1e-12

    def test_permutation_equivariant(self):
        trusts = [0.9, 0.2, 0.5, 0.7]
        w = response_weights(trusts, P)
        perm = [2, 0, 3, 1]
        w_perm = response_weights([trusts[i] for i in perm], P)
        for k, i in enumerate(perm):
            assert w_perm[k] == pytest.approx(w[i], abs=1e-12)

    def test_argmax_matches_trust_argmax(self):
        trusts = [0.3, 0.8, 0.55]
        w = response_weights(trusts, TrustParams(beta=0.7))
        assert w.index(max(w)) == trusts.index(max(trusts))

    def test_shift_invariance_of_transformed_scores(self):
        # adding a constant to all transformed trusts leaves weights unchanged
        import numpy as np

        z = np.array([hat_transform(t, P) for t in (0.2, 0.5, 0.9)])
        for shift in (0.0, 1.0, -3.0, 17.0):
            shifted = z + shift
            w = np.exp(shifted - shifted.max())
            w /= w.sum()
            base = np.exp(z - z.max())
            base /= base.sum()
            assert np.allclose(w, base, atol=1e-12)
