import itertools

import numpy as np
import pytest

from kposi.classify import (
    NOT_SR,
    SR_NOT_SSR,
    SSR,
    classify_all,
    classify_order,
    sample_sign_pattern_vector,
    verify_vdp,
)
from kposi.core import compound
from kposi.errors import DimensionError
from kposi.generators import fixture, gen_ssr_k_only, gen_totally_positive
from kposi.signvar import s_minus, s_plus


def brute_minors(A, k):
    n, m = A.shape
    return np.array([np.linalg.det(A[np.ix_(r, c)])
                     for r in itertools.combinations(range(n), k)
                     for c in itertools.combinations(range(m), k)])


def test_intro_matrix():
    rep = classify_all(fixture("intro4"))
    assert [c.verdict for c in rep.classifications] == [SR_NOT_SSR, NOT_SR, SSR, SSR]
    assert rep.order(1).signature == 1
    c2 = rep.order(2)
    assert c2.witness_positive.to_dict() == {"rows": [1, 2], "cols": [1, 2], "value": 1.0}
    assert c2.witness_negative.to_dict() == {"rows": [1, 4], "cols": [1, 2], "value": -2.0}
    assert rep.order(3).signature == 1 and rep.order(4).signature == 1
    assert rep.nonsingular and not rep.is_SR


def test_scalar_matrix():
    c = classify_order(np.array([[5.0]]), 1)
    assert c.verdict == SSR and c.signature == 1
    assert classify_order(np.array([[-2.0]]), 1).signature == -1


def test_all_zero_order():
    c = classify_order(np.zeros((3, 3)), 2)
    assert c.verdict == SR_NOT_SSR and c.signature is None and c.zero_minors == 9


def test_rectangular_and_order_range():
    rep = classify_all(np.ones((2, 4)))
    assert len(rep.classifications) == 2 and rep.nonsingular is None
    with pytest.raises(DimensionError):
        classify_order(np.ones((2, 4)), 3)


def test_tiny_minor_counts_as_zero():
    A = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-13]])
    assert classify_order(A, 2).verdict == SR_NOT_SSR
    assert classify_all(A).nonsingular is False


def test_verdict_agrees_with_compound_signs(rng):
    for _ in range(60):
        n = int(rng.integers(2, 6))
        A = rng.standard_normal((n, n)) if rng.random() < 0.5 else rng.uniform(0.1, 1.0, (n, n))
        for k in range(1, n + 1):
            m = brute_minors(A, k)
            np.testing.assert_allclose(np.sort(compound(A, k).ravel()), np.sort(m), atol=1e-10)
            c = classify_order(A, k)
            if np.all(m > 1e-6):
                assert c.verdict == SSR and c.signature == 1
            elif np.all(m < -1e-6):
                assert c.verdict == SSR and c.signature == -1
            elif m.max() > 1e-6 and m.min() < -1e-6:
                assert c.verdict == NOT_SR


def test_scaling_invariance(rng):
    for seed in range(20):
        A, _ = gen_ssr_k_only(4, 2, rng_seed=seed)
        D1 = np.diag(rng.uniform(0.5, 2.0, 4))
        D2 = np.diag(rng.uniform(0.5, 2.0, 4))
        assert classify_order(D1 @ A @ D2, 2).verdict == SSR
        for c in (3.0, -0.5):
            cs = classify_order(c * A, 2)
            assert cs.verdict == SSR
            assert cs.signature == classify_order(A, 2).signature * int(np.sign(c)) ** 2


def test_product_closure():
    for seed in range(25):
        A, ra = gen_ssr_k_only(4, 3, rng_seed=seed)
        B, rb = gen_ssr_k_only(4, 3, rng_seed=1000 + seed)
        c = classify_order(A @ B, 3)
        assert c.verdict == SSR
        assert c.signature == ra.order(3).signature * rb.order(3).signature


def _vector_in_P_minus(n, k, rng):
    x = sample_sign_pattern_vector(n, rng, variations=int(rng.integers(0, k)))
    # zeros may be inserted anywhere without increasing s_minus
    x[rng.random(n) < 0.2] = 0.0
    if not np.any(x):
        x[0] = 1.0
    return x


def test_ssr_k_maps_P_minus_into_P_plus(rng):
    for seed in range(40):
        n = int(rng.integers(3, 6))
        k = int(rng.integers(1, n))
        A, _ = gen_ssr_k_only(n, k, rng_seed=seed)
        for _ in range(50):
            x = _vector_in_P_minus(n, k, rng)
            assert s_minus(x) <= k - 1
            assert s_plus(A @ x) <= k - 1


def test_counterexample_vector():
    A = fixture("counter3")
    x = np.array([19.0, -6.0, -2.0])
    y = A @ x
    np.testing.assert_array_equal(y, [164.0, -1.0, 2.0])
    assert (s_minus(x), s_minus(y)) == (1, 2)
    rep = verify_vdp(A, mode="weak", vectors=[x])
    assert not rep.passed and not rep.precondition_met
    assert rep.counterexample == x.tolist() and rep.image == y.tolist()


def test_strong_vdp_for_tp(rng):
    for seed in range(10):
        A = gen_totally_positive(int(rng.integers(2, 7)), rng_seed=seed)
        rep = verify_vdp(A, samples=300, rng_seed=seed)
        assert rep.precondition_met and rep.passed and rep.samples == 300


def test_weak_vdp_runs_on_sampled_vectors():
    A = fixture("counter3")
    rep = verify_vdp(A, samples=2000, mode="weak", rng_seed=3)
    assert not rep.passed
    assert s_minus(rep.image) > s_minus(rep.counterexample)


def test_sampled_vectors_have_requested_variations(rng):
    for v in range(6):
        x = sample_sign_pattern_vector(6, rng, variations=v)
        assert s_minus(x) == v and np.all(x != 0)


def test_vdp_mode_check():
    with pytest.raises(ValueError):
        verify_vdp(np.eye(2), mode="medium")
