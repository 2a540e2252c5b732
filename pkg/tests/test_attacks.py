import numpy as np
import pytest
from hypothesis import given, strategies as st

from trustpso.attacks import (
    AttackModel,
    AttackSpec,
    apply_injection,
    inject,
    select_attackers,
    should_attack,
)

INJECTING = [m for m in AttackModel if m is not AttackModel.NONE]


def test_select_attackers_empty_and_full():
    rng = np.random.default_rng(0)
    spec = AttackSpec(AttackModel.ZERO_DISTANCE, attacker_count_min=0, attacker_count_max=0)
    assert len(select_attackers(100, spec, rng)) == 0
    spec = AttackSpec(AttackModel.ZERO_DISTANCE, attacker_count_min=20, attacker_count_max=20)
    np.testing.assert_array_equal(select_attackers(20, spec, rng), np.arange(20))


def test_select_attackers_none_model_is_empty():
    assert len(select_attackers(100, AttackSpec(AttackModel.NONE), np.random.default_rng(0))) == 0


def test_select_attackers_too_many():
    with pytest.raises(ValueError):
        select_attackers(5, AttackSpec(AttackModel.ZERO_DISTANCE), np.random.default_rng(0))


def test_attacker_count_is_uniform_on_3_to_10():
    rng = np.random.default_rng(1)
    spec = AttackSpec(AttackModel.ZERO_DISTANCE)
    sizes = [len(select_attackers(100, spec, rng)) for _ in range(10_000)]
    counts = np.bincount(sizes, minlength=11)[3:11] / len(sizes)
    assert set(sizes) <= set(range(3, 11))
    assert np.all(np.abs(counts - 1 / 8) < 0.02)


def test_attacker_members_distinct():
    sel = select_attackers(100, AttackSpec(AttackModel.ZERO_DISTANCE), np.random.default_rng(3))
    assert len(set(sel.tolist())) == len(sel)


def test_should_attack_rate_one():
    assert should_attack(1.0, np.random.default_rng(0), 1000).all()


@pytest.mark.parametrize("rate", [0.5, 0.1])
def test_should_attack_frequency(rate):
    hits = should_attack(rate, np.random.default_rng(7), 100_000)
    assert abs(hits.mean() - rate) < 0.01


def test_zero_distance_is_exactly_zero():
    assert inject(AttackModel.ZERO_DISTANCE, 1.0, 37.5, np.random.default_rng(0)) == 0.0


def test_biased_distance_floors_at_zero():
    assert apply_injection(AttackModel.BIASED_DISTANCE, 5.0, -7.0) == 0.0


def test_extra_distance_error_divides():
    assert apply_injection(AttackModel.EXTRA_DISTANCE_ERROR, 20.0, 10.0) == pytest.approx(2.0)


def test_random_distance_uniform_on_inverse_theta():
    out = inject(AttackModel.RANDOM_DISTANCE, 1.0, np.full(10_000, 25.0), np.random.default_rng(4))
    assert out.min() >= 0 and out.max() <= 1
    assert abs(out.mean() - 0.5) < 0.02


def test_none_model_never_injects():
    with pytest.raises(ValueError):
        inject(AttackModel.NONE, 1.0, 3.0, np.random.default_rng(0))


@given(st.sampled_from(INJECTING), st.floats(0, 1e4), st.floats(0.01, 100), st.integers(0, 2**32))
def test_inject_never_negative(model, d_raw, theta, seed):
    assert inject(model, theta, d_raw, np.random.default_rng(seed)) >= 0


@given(st.floats(0, 1e4), st.floats(0.01, 100), st.integers(0, 2**32))
def test_biased_never_exceeds_raw(d_raw, theta, seed):
    assert inject(AttackModel.BIASED_DISTANCE, theta, d_raw, np.random.default_rng(seed)) <= d_raw


@pytest.mark.parametrize("kw", [{"rate": 0}, {"rate": 1.5}, {"theta": 0},
                                {"attacker_count_min": 5, "attacker_count_max": 4}])
def test_attack_spec_validation(kw):
    with pytest.raises(ValueError):
        AttackSpec(AttackModel.ZERO_DISTANCE, **kw)
