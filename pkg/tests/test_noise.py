import numpy as np
import pytest

from qslide import gf2, noise
from qslide.gf2 import BinaryMatrix, BinaryVector


def test_params_range_checked():
    noise.NoiseParams(0.0)
    noise.NoiseParams(1.0)
    with pytest.raises(ValueError):
        noise.NoiseParams(-0.1)
    with pytest.raises(ValueError):
        noise.NoiseParams(1.5)


def test_sample_round_extremes():
    rng = noise.round_rng(0, 0, 0)
    s = noise.sample_round(50, 30, noise.NoiseParams(0.0), rng)
    assert s.e.is_zero and s.u.is_zero
    s = noise.sample_round(50, 30, noise.NoiseParams(1.0), rng)
    assert s.e.weight == 50 and s.u.weight == 30


def test_sample_round_concentration():
    # 10^5 rounds of 100 bits at p=0.1: empirical rate within 3 sigma
    p, n, rounds = 0.1, 100, 10**5
    total = 0
    rng = noise.round_rng(7, 0, 0)
    draws = rng.random((rounds, n)) < p
    total = int(draws.sum())
    rate = total / (rounds * n)
    assert abs(rate - p) < 0.003


def test_round_rng_reproducible():
    a = noise.sample_round(64, 32, noise.NoiseParams(0.3), noise.round_rng(5, 2, 9))
    b = noise.sample_round(64, 32, noise.NoiseParams(0.3), noise.round_rng(5, 2, 9))
    assert a.e == b.e and a.u == b.u


def test_round_rng_streams_differ():
    base = noise.sample_round(64, 32, noise.NoiseParams(0.3), noise.round_rng(5, 2, 9))
    for key in [(6, 2, 9), (5, 3, 9), (5, 2, 10)]:
        other = noise.sample_round(64, 32, noise.NoiseParams(0.3), noise.round_rng(*key))
        assert (other.e, other.u) != (base.e, base.u)


def test_synthesize_syndrome_trivial():
    H = BinaryMatrix.from_bits([[1, 1, 0], [0, 1, 1]])
    zero3, zero2 = BinaryVector.zeros(3), BinaryVector.zeros(2)
    assert noise.synthesize_syndrome(H, zero3, zero2).is_zero
    e = BinaryVector.from_bits([1, 0, 1])
    assert noise.synthesize_syndrome(H, e, zero2) == gf2.mat_vec(H, e)


def test_synthesize_syndrome_dense_oracle():
    rng = np.random.default_rng(3)
    H = BinaryMatrix.from_bits(rng.integers(0, 2, (6, 8)))
    e = BinaryVector.from_bits(rng.integers(0, 2, 8))
    u = BinaryVector.from_bits(rng.integers(0, 2, 6))
    want = (H.to_bits() @ e.to_bits() + u.to_bits()) % 2
    assert np.array_equal(noise.synthesize_syndrome(H, e, u).to_bits(), want)


def test_synthesize_syndrome_linearity():
    rng = np.random.default_rng(4)
    H = BinaryMatrix.from_bits(rng.integers(0, 2, (5, 9)))
    a = BinaryVector.from_bits(rng.integers(0, 2, 9))
    b = BinaryVector.from_bits(rng.integers(0, 2, 9))
    u = BinaryVector.from_bits(rng.integers(0, 2, 5))
    lhs = noise.synthesize_syndrome(H, a ^ b, u)
    rhs = noise.synthesize_syndrome(H, a, BinaryVector.zeros(5)) ^ noise.synthesize_syndrome(H, b, u)
    assert lhs == rhs


def test_synthesize_syndrome_dimension_mismatch():
    H = BinaryMatrix.from_bits([[1, 1, 0]])
    with pytest.raises(ValueError):
        noise.synthesize_syndrome(H, BinaryVector.zeros(3), BinaryVector.zeros(2))
