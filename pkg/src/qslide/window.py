"""Sliding-window syndrome decoding with width W and commit offset F.

Each cycle decodes W rounds of differenced syndromes against the windowed
check matrix H_win = [I_W (x) H | B (x) I_m] (B lower bidiagonal), commits
the first F estimated error rounds as a correction xi, and carries the
remaining W-F syndromes forward after adding H*xi. Corrections live in a
software Pauli frame: nothing is applied to the data, and syndromes entering
a window are shifted by H * cumulative_correction so the decoder always sees
the history as if every committed correction had been applied physically.

Consecutive windows cover the round intervals (0, W], (F, F+W], (2F, 2F+W]
and so on; (W, F) = (1, 1) reduces to single-shot decoding against [H | I].
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from . import bposd, gf2
from .bposd import DecoderConfig
from .codes import CssCode
from .gf2 import BinaryMatrix, BinaryVector


@dataclass(frozen=True)
class WindowConfig:
    """Window width W (rounds per decode) and offset F (rounds committed)."""

    W: int
    F: int

    def __post_init__(self):
        if not 1 <= self.F <= self.W:
            raise ValueError(f"need 1 <= F <= W, got (W, F) = ({self.W}, {self.F})")


@dataclass(frozen=True)
class WindowMatrix:
    """H_win together with its block layout.

    Columns 0..W*n-1 hold the data-error rounds e_1..e_W (round-major),
    columns W*n..W*(n+m)-1 the measurement-error rounds u_1..u_W.
    """

    h_win: BinaryMatrix
    width: int
    n: int
    m: int

    def error_round(self, estimate: BinaryVector, j: int) -> BinaryVector:
        """The e_j block (1-based round index) of a window estimate."""
        if not 1 <= j <= self.width:
            raise ValueError(f"round index {j} outside 1..{self.width}")
        return estimate.slice((j - 1) * self.n, j * self.n)

    def measurement_round(self, estimate: BinaryVector, j: int) -> BinaryVector:
        """The u_j block (1-based round index) of a window estimate."""
        if not 1 <= j <= self.width:
            raise ValueError(f"round index {j} outside 1..{self.width}")
        off = self.width * self.n
        return estimate.slice(off + (j - 1) * self.m, off + j * self.m)


@dataclass(frozen=True)
class WindowState:
    """Per-trial decoding state; advanced functionally by cycle()."""

    code: CssCode
    config: WindowConfig
    buffered_syndromes: tuple
    cumulative_correction: BinaryVector
    rounds_elapsed: int = 0


def initial_state(code: CssCode, config: WindowConfig) -> WindowState:
    return WindowState(
        code=code,
        config=config,
        buffered_syndromes=(),
        cumulative_correction=BinaryVector.zeros(code.n),
    )


@functools.lru_cache(maxsize=32)
def build_window_matrix(H: BinaryMatrix, W: int) -> WindowMatrix:
    """[I_W (x) H | B (x) I_m] with B_ij = 1 iff i = j or i = j + 1.

    The u-block is invertible (lower bidiagonal), so H_win has full row rank
    and every syndrome is decodable.
    """
    if W < 1:
        raise ValueError("window width must be >= 1")
    B = BinaryMatrix.from_row_supports(
        W, W, [[i - 1, i] if i else [0] for i in range(W)]
    )
    h_win = gf2.hstack([
        gf2.kron(BinaryMatrix.identity(W), H),
        gf2.kron(B, BinaryMatrix.identity(H.rows)),
    ])
    return WindowMatrix(h_win=h_win, width=W, n=H.cols, m=H.rows)


def diff_syndromes(sigmas) -> list:
    """(sigma_1, sigma_2 + sigma_1, ..., sigma_W + sigma_{W-1}) over GF(2)."""
    sigmas = list(sigmas)
    if not sigmas:
        return []
    m = sigmas[0].length
    for s in sigmas:
        if s.length != m:
            raise ValueError("syndromes differ in length")
    return [sigmas[0]] + [b ^ a for a, b in zip(sigmas, sigmas[1:])]


def cycle(
    state: WindowState, new_syndromes, p: float, decoder_config: DecoderConfig
):
    """Run one (W, F) decoding cycle; returns (commit, advanced state).

    The first cycle takes W raw syndromes, later cycles take F. Inside the
    window the decoder sees uniform priors p on every e and u variable; its
    iteration budget therefore defaults to W*(n+m).
    """
    cfg = state.config
    W, F = cfg.W, cfg.F
    H = state.code.h_z
    m, n = H.rows, H.cols
    first = state.rounds_elapsed == 0
    expected = W if first else F
    new_syndromes = list(new_syndromes)
    if len(new_syndromes) != expected:
        raise ValueError(
            f"cycle expected {expected} syndromes "
            f"({'first fill' if first else 'steady state'}), got {len(new_syndromes)}"
        )
    for s in new_syndromes:
        if s.length != m:
            raise ValueError(f"syndrome length {s.length} != check count {m}")
    frame = gf2.mat_vec(H, state.cumulative_correction)
    window = list(state.buffered_syndromes) + [s ^ frame for s in new_syndromes]
    wm = build_window_matrix(H, W)
    result = bposd.decode(
        wm.h_win, gf2.concat_vectors(diff_syndromes(window)), p, decoder_config
    )
    xi = BinaryVector.zeros(n)
    for j in range(1, F + 1):
        xi = xi ^ wm.error_round(result.estimate, j)
    h_xi = gf2.mat_vec(H, xi)
    advanced = WindowState(
        code=state.code,
        config=cfg,
        buffered_syndromes=tuple(s ^ h_xi for s in window[F:]),
        cumulative_correction=state.cumulative_correction ^ xi,
        rounds_elapsed=state.rounds_elapsed + F,
    )
    return xi, advanced


def residual_error(state: WindowState, true_error_history) -> BinaryVector:
    """Committed-round data errors plus all committed corrections.

    `true_error_history` must hold exactly one length-n error vector per
    committed round (rounds 1..rounds_elapsed); errors in rounds still
    buffered belong to future commits and are excluded.
    """
    history = list(true_error_history)
    if len(history) != state.rounds_elapsed:
        raise ValueError(
            f"history covers {len(history)} rounds, state committed {state.rounds_elapsed}"
        )
    r = state.cumulative_correction
    for e in history:
        r = r ^ e
    return r
