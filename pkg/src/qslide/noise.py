"""Phenomenological noise: iid X flips on data qubits and iid flips on the
measured syndrome bits each round, at a shared rate p."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .gf2 import BinaryMatrix, BinaryVector

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class NoiseParams:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"flip probability must lie in [0,1], got {self.p}")


@dataclass(frozen=True)
class RoundSample:
    e: BinaryVector  # data-qubit flips this round
    u: BinaryVector  # syndrome-bit flips this round


def round_rng(master_seed: int, trial: int, round_index: int) -> np.random.Generator:
    """Counter-based stream keyed by (master seed, trial, round).

    Every round of every trial gets its own Philox stream, so samples are
    reproducible no matter how trials are scheduled across workers.
    """
    key = np.array([master_seed & _MASK64, trial & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, 0, round_index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def sample_round(n: int, m: int, params: NoiseParams, rng: np.random.Generator) -> RoundSample:
    """Draw one round of iid flips: n data bits and m syndrome bits at rate p."""
    draws = rng.random(n + m)
    flips = draws < params.p
    return RoundSample(
        e=BinaryVector.from_bits(flips[:n]),
        u=BinaryVector.from_bits(flips[n:]),
    )


def synthesize_syndrome(
    H: BinaryMatrix, cumulative_error: BinaryVector, u_t: BinaryVector
) -> BinaryVector:
    """Measured syndrome sigma_t = H * (sum of errors so far) + u_t."""
    if u_t.length != H.rows:
        raise ValueError(f"u length {u_t.length} != check count {H.rows}")
    return gf2.mat_vec(H, cumulative_error) ^ u_t
