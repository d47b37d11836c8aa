"""End-to-end acceptance criteria.

Every test prints one PASS/FAIL line straight to the terminal (bypassing
capture) and asserts the same verdict. Criteria 1-7 are exact; 8-12 are
statistical orderings of memory lifetimes on hypergraph-product codes at
p = 0.007 with fixed master seeds. Mind the runtime: the exhaustive
weight-3 sweep takes ~11 minutes and the statistical block several hours
on one core; lifetimes computed once are reused across criteria.
"""

import itertools

import numpy as np
import pytest

from qslide import bposd, codes, gf2, lifetime, noise, window
from qslide.bposd import DecoderConfig
from qslide.cli import main as cli_main
from qslide.gf2 import BinaryMatrix, BinaryVector
from qslide.window import WindowConfig

pytestmark = pytest.mark.acceptance

P_STAT = 0.007
STAT_DCFG = DecoderConfig(max_iterations=100)

_ESTIMATES = {}
_OUTCOMES = {}


def report(capsys, num, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")


def stat_estimate(code_name, W, F, trials, seed, max_cycles):
    key = (code_name, W, F, trials, seed, max_cycles)
    if key not in _ESTIMATES:
        code = codes.load_code(code_name)
        _ESTIMATES[key] = lifetime.estimate_lifetime(
            code, P_STAT, WindowConfig(W, F), STAT_DCFG,
            trials=trials, master_seed=seed, max_cycles=max_cycles,
        )
    return _ESTIMATES[key]


def stat_outcomes(code_name, W, F, trials, seed, max_cycles):
    key = (code_name, W, F, trials, seed, max_cycles)
    if key not in _OUTCOMES:
        code = codes.load_code(code_name)
        _OUTCOMES[key] = lifetime.run_trials(
            code, P_STAT, WindowConfig(W, F), STAT_DCFG,
            trials=trials, master_seed=seed, max_cycles=max_cycles,
        )
    return _OUTCOMES[key]


# Per-point runtime control. Caps are identical on both sides of every
# comparison; a capped trial enters the estimate as censored (dropped from
# the mean), which biases both sides of an equivalence test the same way
# and only ever shrinks the favored side of an ordering test.
CAP_LONG = 100000
CAP_PLATEAU = 30000
CAP_COPIES = 20000


def describe(label, est):
    return f"{label} {est.mean_T:.0f}+-{est.std_error:.0f}"


def test_criterion_01_fixture_css_parameters(capsys):
    expected = {
        "hgp_625": (625, 25),
        "hgp_900": (900, 36),
        "hgp_1225": (1225, 49),
        "hgp_1600": (1600, 64),
        "hgp_2500": (2500, 100),
    }
    bad = []
    for name, nk in expected.items():
        code = codes.load_code(name)
        if not codes.validate_css(code.h_x, code.h_z) or (code.n, code.k) != nk:
            bad.append(name)
    ok = not bad
    report(capsys, 1, ok, "all five fixtures CSS-valid with expected (n, k)"
           if ok else f"violations: {bad}")
    assert ok


def test_criterion_02_window_matrix_oracle(capsys):
    rng = np.random.default_rng(202)
    mismatches = 0
    for _ in range(100):
        m = int(rng.integers(2, 7))
        n = int(rng.integers(2, 9))
        W = int(rng.integers(1, 6))
        h_bits = rng.integers(0, 2, size=(m, n), dtype=np.uint8)
        e = rng.integers(0, 2, size=(W, n), dtype=np.uint8)
        u = rng.integers(0, 2, size=(W, m), dtype=np.uint8)
        # oracle: synthesize measured syndromes from scratch, then difference
        cum_e = np.cumsum(e, axis=0) % 2
        sigma = (cum_e @ h_bits.T + u) % 2
        diff = np.vstack([sigma[:1], (sigma[1:] + sigma[:-1]) % 2])
        wm = window.build_window_matrix(BinaryMatrix.from_bits(h_bits), W)
        stacked = BinaryVector.from_bits(np.concatenate([e.ravel(), u.ravel()]))
        got = gf2.mat_vec(wm.h_win, stacked)
        if got != BinaryVector.from_bits(diff.ravel()):
            mismatches += 1
    ok = mismatches == 0
    report(capsys, 2, ok, f"100 random (H, W<=5, e, u) instances, {mismatches} mismatches")
    assert ok


def test_criterion_03_single_shot_equivalence(capsys):
    code = codes.load_code("hgp_625")
    H = code.h_z
    dcfg = DecoderConfig()
    single_shot = gf2.hstack([H, BinaryMatrix.identity(H.rows)])
    params = noise.NoiseParams(0.01)
    mismatches = 0
    for seed in range(1000):
        sample = noise.sample_round(code.n, H.rows, params, noise.round_rng(seed, 0, 0))
        syn = noise.synthesize_syndrome(H, sample.e, sample.u)
        state = window.initial_state(code, WindowConfig(1, 1))
        xi, _ = window.cycle(state, [syn], 0.01, dcfg)
        est = bposd.decode(single_shot, syn, 0.01, dcfg).estimate
        if xi != est.slice(0, code.n):
            mismatches += 1
    ok = mismatches == 0
    report(capsys, 3, ok, f"1000 seeded instances on hgp_625, {mismatches} differing corrections")
    assert ok


def _coset_minima(h_bits):
    """Minimum coset weight per syndrome, by exhausting all 2^n vectors."""
    n = h_bits.shape[1]
    best = {}
    for bits in itertools.product((0, 1), repeat=n):
        arr = np.array(bits, dtype=np.uint8)
        key = ((h_bits @ arr) % 2).tobytes()
        w = int(arr.sum())
        if w < best.get(key, n + 1):
            best[key] = w
    return best


def test_criterion_04_minimum_weight_coset_solutions(capsys):
    cases = [
        codes.hgp(BinaryMatrix.from_bits(np.array([[1, 1]], dtype=np.uint8)), name="hgp([1 1])"),
        codes.hgp(BinaryMatrix.from_bits(np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)),
                  name="13-qubit product"),
    ]
    dcfg = DecoderConfig()
    checked = 0
    failures = []
    for code in cases:
        h_bits = code.h_z.to_bits()
        minima = _coset_minima(h_bits)
        supports = [()] + [(i,) for i in range(code.n)] + list(
            itertools.combinations(range(code.n), 2)
        )
        for sup in supports:
            e = BinaryVector.from_support(code.n, list(sup))
            syn = gf2.mat_vec(code.h_z, e)
            result = bposd.decode(code.h_z, syn, 0.01, dcfg)
            checked += 1
            if result.estimate.weight != minima[syn.to_bits().tobytes()]:
                failures.append((code.name, sup))
    ok = not failures
    report(capsys, 4, ok,
           f"{checked} weight<=2 syndromes across {len(cases)} small products, "
           f"{len(failures)} non-minimal solutions")
    assert ok, failures[:5]


def test_criterion_05_exhaustive_weight3_correctability(capsys):
    code = codes.load_code("hgp_625")
    rep = bposd.exhaustive_correctability(
        code.h_z, code.logical_z, max_weight=3, prior=1e-3
    )
    n = code.n
    expected = n + n * (n - 1) // 2 + n * (n - 1) * (n - 2) // 6
    ok = rep.failures == 0 and rep.cases == expected
    report(capsys, 5, ok,
           f"{rep.cases} error patterns of weight <= 3 on hgp_625, {rep.failures} logical failures")
    assert ok, rep


def test_criterion_06_decoding_volume_identities(capsys):
    v625 = lifetime.decoding_volume(4, 625, 25)
    v2500 = lifetime.decoding_volume(1, 2500, 100)
    ok = v625 == v2500 == 1200
    report(capsys, 6, ok, f"V(4, [[625,25]]) = {v625}, V(1, [[2500,100]]) = {v2500}")
    assert ok


def test_criterion_07_worker_count_determinism(capsys, tmp_path):
    texts = []
    for workers in (1, 2, 3):
        out = tmp_path / f"w{workers}.csv"
        rc = cli_main([
            "lifetime", "--code", "hgp_625", "--p", "0.02", "--windows", "2:1",
            "--trials", "10", "--max-cycles", "500", "--seed", "707",
            "--workers", str(workers), "--output", str(out),
        ])
        assert rc == 0
        texts.append(out.read_text())
    ok = texts[0] == texts[1] == texts[2]
    report(capsys, 7, ok, "identical sweep rows for worker counts 1, 2, 3")
    assert ok


def test_criterion_08_statistical_window_gain(capsys):
    base = stat_estimate("hgp_625", 1, 1, 200, 811, CAP_LONG)
    windowed = stat_estimate("hgp_625", 3, 1, 200, 831, CAP_LONG)
    gap = windowed.mean_T - base.mean_T
    combined = float(np.hypot(base.std_error, windowed.std_error))
    ok = gap >= 3.0 * combined
    report(capsys, 8, ok,
           f"{describe('(3,1)', windowed)} vs {describe('(1,1)', base)}, "
           f"gap {gap:.0f} vs 3 SE = {3 * combined:.0f} "
           f"(censored {windowed.censored_count}/{base.censored_count})")
    assert ok


def test_criterion_09_statistical_commit_ratio(capsys):
    windowed = stat_estimate("hgp_625", 3, 1, 200, 831, CAP_LONG)
    bulk = stat_estimate("hgp_625", 16, 16, 100, 816, CAP_LONG)
    ratio = windowed.mean_T / bulk.mean_T
    ok = 4.0 <= ratio <= 25.0
    report(capsys, 9, ok,
           f"{describe('(3,1)', windowed)} / {describe('(16,16)', bulk)} = {ratio:.1f}, "
           f"band [4, 25]")
    assert ok


def test_criterion_10_statistical_width_plateau(capsys):
    five = stat_estimate("hgp_625", 5, 1, 40, 851, CAP_PLATEAU)
    ten = stat_estimate("hgp_625", 10, 1, 30, 8101, CAP_PLATEAU)
    gap = abs(five.mean_T - ten.mean_T)
    combined = float(np.hypot(five.std_error, ten.std_error))
    ok = gap <= 2.0 * combined
    report(capsys, 10, ok,
           f"{describe('(5,1)', five)} vs {describe('(10,1)', ten)}, "
           f"|gap| {gap:.0f} vs 2 SE = {2 * combined:.0f}")
    assert ok


def test_criterion_11_statistical_single_shot_degradation(capsys):
    small = stat_estimate("hgp_625", 1, 1, 200, 811, CAP_LONG)
    large = stat_estimate("hgp_900", 1, 1, 100, 8911, CAP_LONG)
    gap = abs(small.mean_T - large.mean_T)
    combined = float(np.hypot(small.std_error, large.std_error))
    ok = gap <= 2.0 * combined
    report(capsys, 11, ok,
           f"{describe('hgp_625', small)} vs {describe('hgp_900', large)}, "
           f"|gap| {gap:.0f} vs 2 SE = {2 * combined:.0f}")
    assert ok


def test_criterion_12_statistical_copies_vs_block(capsys):
    copies = stat_outcomes("hgp_625", 4, 1, 240, 841, CAP_COPIES)
    grouped = [
        min(o.lifetime for o in copies[i:i + 4]) for i in range(0, len(copies), 4)
    ]
    mean4 = float(np.mean(grouped))
    se4 = float(np.std(grouped, ddof=1) / np.sqrt(len(grouped)))
    censored4 = sum(o.censored for o in copies)
    block = stat_estimate("hgp_2500", 1, 1, 150, 8251, CAP_LONG)
    ok = mean4 > block.mean_T
    report(capsys, 12, ok,
           f"4x[[625,25]] (4,1) min-of-4 {mean4:.0f}+-{se4:.0f} vs "
           f"{describe('[[2500,100]] (1,1)', block)} (censored {censored4}/"
           f"{block.censored_count})")
    assert ok
