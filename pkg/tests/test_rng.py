import numpy as np
import pytest

from paritycat.rng import MASK, SplitMix64, mix64


def test_reference_outputs():
    # reference values of SplitMix64 seeded with 0 and 1234567
    g = SplitMix64(0)
    assert [g.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    g = SplitMix64(1234567)
    assert [g.next_u64() for _ in range(2)] == [6457827717110365317, 3203168211198807973]


def test_uniform_range_and_mean():
    g = SplitMix64(3)
    u = np.array([g.uniform() for _ in range(20000)])
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01


def test_normal_moments():
    g = SplitMix64(11)
    x = np.array([g.normal() for _ in range(20000)])
    assert abs(x.mean()) < 0.03 and abs(x.var() - 1.0) < 0.05


def test_randint_inclusive():
    g = SplitMix64(5)
    vals = {g.randint(1, 5) for _ in range(500)}
    assert vals == {1, 2, 3, 4, 5}


def test_sample_streams_are_order_free():
    a = [SplitMix64.for_sample(42, i).uniform() for i in range(10)]
    b = [SplitMix64.for_sample(42, i).uniform() for i in reversed(range(10))][::-1]
    assert a == b
    assert len(set(a)) == 10
    # the sample seed is the i-th output of the parent stream
    parent = SplitMix64(42)
    seeds = [parent.next_u64() for _ in range(3)]
    assert [SplitMix64.for_sample(42, i).state for i in range(3)] == seeds


def test_mix64_is_masked():
    assert 0 <= mix64(MASK) <= MASK
