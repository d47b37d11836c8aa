"""Monte Carlo memory-lifetime benchmark.

A trial feeds noisy syndrome rounds through sliding-window decoding cycle by
cycle. After each cycle the committed residual r (true error on committed
rounds plus all committed corrections) is handed to an ideal decoder, which
decodes the noiseless syndrome H*r at small uniform priors over the data
qubits alone; the trial fails at the first cycle N where r plus the ideal
estimate acts nontrivially on a logical, and the lifetime is T = (N-1)*F.
Trials that survive max_cycles cycles are censored, never silently dropped.

Every round of every trial draws from its own counter-based stream keyed by
(master_seed, trial, round), so estimates are bit-identical no matter how
trials are scheduled across workers.
"""

from __future__ import annotations

import multiprocessing
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import bposd, codes, gf2, noise, window
from .bposd import DecoderConfig
from .codes import CssCode
from .gf2 import BinaryVector
from .window import WindowConfig

IDEAL_PRIOR = 1e-2


@dataclass(frozen=True)
class TrialOutcome:
    """One trial's verdict.

    ``failed_at_cycle`` is the first cycle N whose committed residual fails
    the ideal-decoder test, or None when the trial was censored at
    max_cycles. ``lifetime`` is (N-1)*F for failures; for censored trials it
    holds the lower bound max_cycles*F (the true lifetime is at least that).
    ``rounds_simulated`` counts committed rounds at the stopping point:
    N*F on failure, max_cycles*F when censored.
    """

    failed_at_cycle: int | None
    lifetime: int
    censored: bool
    rounds_simulated: int
    seed_key: tuple

    def __post_init__(self):
        if self.censored != (self.failed_at_cycle is None):
            raise ValueError("censored outcomes carry no failure cycle")


@dataclass(frozen=True)
class LifetimeEstimate:
    """Aggregate of run_trial over independent seed keys.

    mean_T and std_error are computed over the uncensored lifetimes only;
    censoring shows up in censored_count and, when any trial was censored,
    in the lower_bound flag (the uncensored mean understates the true mean).
    With zero uncensored trials mean_T falls back to the censoring bound
    max_cycles*F. Remaining fields echo the run parameters.
    """

    mean_T: float
    std_error: float
    trials: int
    censored_count: int
    lower_bound: bool
    warnings: tuple
    code_name: str
    n: int
    k: int
    p: float
    W: int
    F: int
    max_cycles: int
    master_seed: int
    decoder_config: DecoderConfig


def decoding_volume(W: int, n: int, k: int) -> int:
    """Per-window decoding volume W*(n-k)/2.

    The halving assumes the X and Z check counts split n-k evenly, as they
    do for hypergraph products; an odd n-k has no such split and is
    rejected.
    """
    if W < 1:
        raise ValueError(f"window width must be >= 1, got {W}")
    if n <= k:
        raise ValueError(f"need n > k, got n = {n}, k = {k}")
    if (n - k) % 2:
        raise ValueError(f"n - k = {n - k} is odd; volume needs equal check counts")
    return W * (n - k) // 2


def ideal_verdict(
    code: CssCode,
    r: BinaryVector,
    decoder_config: DecoderConfig,
    ideal_prior: float = IDEAL_PRIOR,
) -> bool:
    """Ideal-decoder failure test for a residual r.

    Decodes the noiseless syndrome H*r with uniform priors over the n data
    variables only, then reports whether r plus the estimate is a nontrivial
    logical. Deterministic: the same r always yields the same verdict.
    """
    syn = gf2.mat_vec(code.h_z, r)
    result = bposd.decode(code.h_z, syn, ideal_prior, decoder_config)
    return codes.is_logical_failure(code, r ^ result.estimate)


def run_trial(
    code: CssCode,
    p: float,
    window_config: WindowConfig,
    decoder_config: DecoderConfig,
    seed_key: tuple,
    max_cycles: int,
    ideal_prior: float = IDEAL_PRIOR,
) -> TrialOutcome:
    """Simulate one memory trial until logical failure or censoring.

    Each cycle samples fresh rounds (W on the first cycle, F after), feeds
    the measured syndromes through window.cycle, and applies the ideal
    failure test to the committed residual. Round randomness comes from
    noise.round_rng(master_seed, trial, round_index) with round_index
    counting sampled rounds from zero.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if max_cycles < 1:
        raise ValueError(f"max_cycles must be >= 1, got {max_cycles}")
    master_seed, trial = seed_key
    params = noise.NoiseParams(p)
    H = code.h_z
    n, m = code.n, H.rows
    W, F = window_config.W, window_config.F
    state = window.initial_state(code, window_config)
    cumulative_error = BinaryVector.zeros(n)
    committed_error = BinaryVector.zeros(n)
    pending = deque()  # sampled e vectors not yet represented in a commit
    round_index = 0
    for cycle_number in range(1, max_cycles + 1):
        fresh = W if round_index == 0 else F
        syndromes = []
        for _ in range(fresh):
            rng = noise.round_rng(master_seed, trial, round_index)
            round_index += 1
            sample = noise.sample_round(n, m, params, rng)
            cumulative_error = cumulative_error ^ sample.e
            pending.append(sample.e)
            syndromes.append(noise.synthesize_syndrome(H, cumulative_error, sample.u))
        _, state = window.cycle(state, syndromes, p, decoder_config)
        for _ in range(F):
            committed_error = committed_error ^ pending.popleft()
        r = committed_error ^ state.cumulative_correction
        if ideal_verdict(code, r, decoder_config, ideal_prior):
            return TrialOutcome(
                failed_at_cycle=cycle_number,
                lifetime=(cycle_number - 1) * F,
                censored=False,
                rounds_simulated=cycle_number * F,
                seed_key=(master_seed, trial),
            )
    return TrialOutcome(
        failed_at_cycle=None,
        lifetime=max_cycles * F,
        censored=True,
        rounds_simulated=max_cycles * F,
        seed_key=(master_seed, trial),
    )


# Worker-pool plumbing. The pool is initialized once with the shared trial
# parameters; tasks are bare trial indices, so per-task pickling stays tiny.

_POOL_CTX = {}


def _pool_init(code, p, window_config, decoder_config, max_cycles, master_seed, ideal_prior):
    _POOL_CTX.update(
        code=code,
        p=p,
        window_config=window_config,
        decoder_config=decoder_config,
        max_cycles=max_cycles,
        master_seed=master_seed,
        ideal_prior=ideal_prior,
    )


def _pool_trial(trial: int) -> TrialOutcome:
    c = _POOL_CTX
    return run_trial(
        c["code"],
        c["p"],
        c["window_config"],
        c["decoder_config"],
        (c["master_seed"], trial),
        c["max_cycles"],
        c["ideal_prior"],
    )


def run_trials(
    code: CssCode,
    p: float,
    window_config: WindowConfig,
    decoder_config: DecoderConfig,
    trials: int,
    master_seed: int,
    max_cycles: int,
    workers: int = 1,
    ideal_prior: float = IDEAL_PRIOR,
    progress=None,
) -> list:
    """run_trial over seed keys (master_seed, 0..trials-1), in trial order.

    workers > 1 fans trials out to a fork-based pool; ordered imap plus the
    per-trial seed keys make the outcome list bit-identical for any worker
    count. progress(done, total) is called after each finished trial.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    args = (code, p, window_config, decoder_config, max_cycles, master_seed, ideal_prior)
    outcomes = []
    if workers == 1:
        for t in range(trials):
            outcomes.append(
                run_trial(
                    code, p, window_config, decoder_config,
                    (master_seed, t), max_cycles, ideal_prior,
                )
            )
            if progress is not None:
                progress(len(outcomes), trials)
        return outcomes
    ctx = multiprocessing.get_context("fork")
    chunk = max(1, trials // (workers * 8))
    with ctx.Pool(workers, initializer=_pool_init, initargs=args) as pool:
        for outcome in pool.imap(_pool_trial, range(trials), chunksize=chunk):
            outcomes.append(outcome)
            if progress is not None:
                progress(len(outcomes), trials)
    return outcomes


def estimate_from_outcomes(
    outcomes,
    code: CssCode,
    p: float,
    window_config: WindowConfig,
    decoder_config: DecoderConfig,
    master_seed: int,
    max_cycles: int,
) -> LifetimeEstimate:
    """Aggregate a list of TrialOutcomes into a LifetimeEstimate."""
    trials = len(outcomes)
    observed = np.array([o.lifetime for o in outcomes if not o.censored], dtype=float)
    censored_count = trials - observed.size
    warnings = []
    if observed.size == 0:
        mean_T = float(max_cycles * window_config.F)
        std_error = 0.0
        warnings.append("all trials censored; mean_T is the censoring bound max_cycles*F")
    else:
        mean_T = float(observed.mean())
        if observed.size >= 2:
            std_error = float(observed.std(ddof=1) / np.sqrt(observed.size))
        else:
            std_error = 0.0
            warnings.append("single uncensored trial; std_error is zero by convention")
    return LifetimeEstimate(
        mean_T=mean_T,
        std_error=std_error,
        trials=trials,
        censored_count=censored_count,
        lower_bound=censored_count > 0,
        warnings=tuple(warnings),
        code_name=code.name,
        n=code.n,
        k=code.k,
        p=p,
        W=window_config.W,
        F=window_config.F,
        max_cycles=max_cycles,
        master_seed=master_seed,
        decoder_config=decoder_config,
    )


def estimate_lifetime(
    code: CssCode,
    p: float,
    window_config: WindowConfig,
    decoder_config: DecoderConfig,
    trials: int,
    master_seed: int,
    max_cycles: int,
    workers: int = 1,
    ideal_prior: float = IDEAL_PRIOR,
    progress=None,
) -> LifetimeEstimate:
    """Mean lifetime with standard error over `trials` independent trials."""
    outcomes = run_trials(
        code,
        p,
        window_config,
        decoder_config,
        trials,
        master_seed,
        max_cycles,
        workers=workers,
        ideal_prior=ideal_prior,
        progress=progress,
    )
    return estimate_from_outcomes(
        outcomes, code, p, window_config, decoder_config, master_seed, max_cycles
    )
