import itertools

import numpy as np
import pytest

from qslide import codes, gf2
from qslide.codes import CssCode
from qslide.gf2 import BinaryMatrix, BinaryVector


@pytest.fixture(scope="module")
def tiny():
    # product of the single parity check [1 1]: 5 qubits, 1 logical
    return codes.hgp(BinaryMatrix.from_bits([[1, 1]]), name="tiny")


@pytest.fixture(scope="module")
def hgp625():
    return codes.load_code("hgp_625")


# ---------------------------------------------------------------------------
# hgp construction
# ---------------------------------------------------------------------------


def test_hgp_tiny_parameters(tiny):
    assert tiny.n == 5 and tiny.k == 1
    assert codes.validate_css(tiny.h_x, tiny.h_z)


def test_hgp_fixture_parameters(hgp625):
    assert (hgp625.n, hgp625.k) == (625, 25)
    c900 = codes.load_code("hgp_900")
    assert (c900.n, c900.k) == (900, 36)


def test_hgp_block_shapes(tiny):
    assert tiny.h_x.shape == (2, 5)
    assert tiny.h_z.shape == (2, 5)
    assert np.array_equal(tiny.h_z.to_bits(), [[1, 1, 0, 0, 1], [0, 0, 1, 1, 1]])
    assert np.array_equal(tiny.h_x.to_bits(), [[1, 0, 1, 0, 1], [0, 1, 0, 1, 1]])


def test_hgp_k_formula(hgp625):
    assert hgp625.k == hgp625.n - gf2.rank(hgp625.h_x) - gf2.rank(hgp625.h_z)


def test_hgp_check_weights_are_seven(hgp625):
    # (3,4)-regular base: every product check touches 4 + 3 qubits
    assert set(hgp625.h_x.row_weights().tolist()) == {7}
    assert set(hgp625.h_z.row_weights().tolist()) == {7}


def test_hgp_rejects_zero_base():
    with pytest.raises(ValueError):
        codes.hgp(BinaryMatrix.zeros(2, 3))


# ---------------------------------------------------------------------------
# validate_css
# ---------------------------------------------------------------------------


def test_validate_css_accepts_self_orthogonal_row():
    H = BinaryMatrix.from_bits([[1, 1, 0]])
    assert codes.validate_css(H, H)


def test_validate_css_rejects_odd_overlap():
    assert not codes.validate_css(
        BinaryMatrix.from_bits([[1, 0, 0]]), BinaryMatrix.from_bits([[1, 1, 0]])
    )


def test_validate_css_dimension_mismatch():
    with pytest.raises(ValueError):
        codes.validate_css(BinaryMatrix.zeros(1, 3), BinaryMatrix.zeros(1, 4))


def test_from_checks_reports_offending_rows():
    with pytest.raises(ValueError, match="row 0"):
        CssCode.from_checks(
            BinaryMatrix.from_bits([[1, 0, 0]]), BinaryMatrix.from_bits([[1, 1, 0]])
        )


# ---------------------------------------------------------------------------
# logical operators
# ---------------------------------------------------------------------------


def test_logical_basis_empty_for_k0():
    H = BinaryMatrix.from_bits([[1, 1]])
    L = codes.logical_z_basis(H, H)
    assert L.rows == 0 and L.cols == 2


def test_logical_basis_tiny_membership(tiny):
    assert tiny.logical_z.rows == 1
    ell = tiny.logical_z.row(0)
    assert gf2.mat_vec(tiny.h_x, ell).is_zero
    # exhaustive: ell must differ from every element of rowspace(H_Z)
    rows = [tiny.h_z.row(i) for i in range(tiny.h_z.rows)]
    span = set()
    for picks in itertools.product([0, 1], repeat=len(rows)):
        v = BinaryVector.zeros(tiny.n)
        for c, r in zip(picks, rows):
            if c:
                v = v ^ r
        span.add(v)
    assert ell not in span


def test_logical_basis_fixture_sanity(hgp625):
    assert hgp625.logical_z.rows == 25
    for i in range(25):
        assert gf2.mat_vec(hgp625.h_x, hgp625.logical_z.row(i)).is_zero
    # jointly independent of the stabilizer rows
    stacked = gf2.vstack([hgp625.h_z, hgp625.logical_z])
    assert gf2.rank(stacked) == gf2.rank(hgp625.h_z) + 25


def test_is_logical_failure_trivial_cases(hgp625):
    assert not codes.is_logical_failure(hgp625, BinaryVector.zeros(hgp625.n))
    assert not codes.is_logical_failure(hgp625, hgp625.h_x.row(3))


def test_is_logical_failure_detects_x_logicals(hgp625):
    logical_x = codes.logical_z_basis(hgp625.h_z, hgp625.h_x)
    assert logical_x.rows == 25
    for i in range(25):
        assert codes.is_logical_failure(hgp625, logical_x.row(i))


def test_is_logical_failure_rejects_syndrome(hgp625):
    v = BinaryVector.from_support(hgp625.n, [0])
    with pytest.raises(ValueError):
        codes.is_logical_failure(hgp625, v)


def test_is_logical_failure_stabilizer_invariance(hgp625):
    rng = np.random.default_rng(21)
    ker = gf2.kernel_basis(hgp625.h_z)
    for _ in range(25):
        x = BinaryVector.zeros(hgp625.n)
        for i in rng.integers(0, len(ker), size=5):
            x = x ^ ker[i]
        s = BinaryVector.zeros(hgp625.n)
        for i in rng.integers(0, hgp625.h_x.rows, size=4):
            s = s ^ hgp625.h_x.row(i)
        assert codes.is_logical_failure(hgp625, x) == codes.is_logical_failure(hgp625, x ^ s)


# ---------------------------------------------------------------------------
# random regular base codes
# ---------------------------------------------------------------------------


def test_generate_regular_weights():
    b = codes.generate_regular_ldpc(15, 20, 3, 4, seed=11)
    assert np.all(b.matrix.col_weights() == 3)
    assert np.all(b.matrix.row_weights() == 4)


def test_generate_regular_forced_cases():
    assert codes.generate_regular_ldpc(1, 1, 1, 1, seed=0).matrix.to_bits().tolist() == [[1]]
    allones = codes.generate_regular_ldpc(3, 4, 3, 4, seed=5)
    assert np.all(allones.matrix.to_bits() == 1)


def test_generate_regular_deterministic():
    a = codes.generate_regular_ldpc(15, 20, 3, 4, seed=42)
    b = codes.generate_regular_ldpc(15, 20, 3, 4, seed=42)
    c = codes.generate_regular_ldpc(15, 20, 3, 4, seed=43)
    assert a.matrix == b.matrix
    assert a.matrix != c.matrix


def test_generate_regular_configuration_branch():
    # m not divisible by col weight exercises socket matching
    b = codes.generate_regular_ldpc(5, 10, 2, 4, seed=9)
    assert np.all(b.matrix.col_weights() == 2)
    assert np.all(b.matrix.row_weights() == 4)


def test_generate_regular_infeasible():
    with pytest.raises(ValueError):
        codes.generate_regular_ldpc(10, 20, 3, 4, seed=0)


def test_generate_regular_four_cycle_rejection():
    # (5,10,2,4) is the K_5 edge incidence: the unique simple outcome is 4-cycle-free
    b = codes.generate_regular_ldpc(5, 10, 2, 4, seed=1, reject_four_cycles=True)
    bits = b.matrix.to_bits().astype(int)
    overlap = bits @ bits.T
    np.fill_diagonal(overlap, 0)
    assert overlap.max() <= 1
    # the all-ones matrix is forced and full of 4-cycles
    with pytest.raises(RuntimeError):
        codes.generate_regular_ldpc(3, 4, 3, 4, seed=0, reject_four_cycles=True, max_retries=10)


# ---------------------------------------------------------------------------
# distance probing
# ---------------------------------------------------------------------------


def exhaustive_min_logical_weight(code):
    best = code.n + 1
    for mask in range(1, 2**code.n):
        v = BinaryVector.from_support(code.n, [i for i in range(code.n) if mask >> i & 1])
        if gf2.mat_vec(code.h_z, v).is_zero and codes.is_logical_failure(code, v):
            best = min(best, v.weight)
        if gf2.mat_vec(code.h_x, v).is_zero:
            if not gf2.mat_vec(codes.logical_z_basis(code.h_z, code.h_x), v).is_zero:
                best = min(best, v.weight)
    return best


def test_distance_bound_tiny_exhaustive(tiny):
    true_d = exhaustive_min_logical_weight(tiny)
    assert true_d == 2
    got = codes.distance_upper_bound(tiny, trials=20, seed=0)
    assert got >= true_d
    assert got == 2


def test_distance_bound_single_trial_is_upper_bound(tiny):
    assert codes.distance_upper_bound(tiny, trials=1, seed=123) >= 2


def test_distance_bound_fixture_matches_label(hgp625):
    assert codes.distance_upper_bound(hgp625, trials=60, seed=7) == 8


def test_distance_bound_rejects_bad_args(tiny):
    with pytest.raises(ValueError):
        codes.distance_upper_bound(tiny, trials=0, seed=0)


# ---------------------------------------------------------------------------
# fixtures and persistence
# ---------------------------------------------------------------------------


def test_fixture_bases_are_34_regular():
    for name in codes.FIXTURE_NAMES:
        base = codes.fixture_base(name)
        assert np.all(base.matrix.col_weights() == 3)
        assert np.all(base.matrix.row_weights() == 4)
        assert base.matrix.cols * 3 == base.matrix.rows * 4


def test_fixture_registry_names():
    assert codes.FIXTURE_NAMES == ("hgp_625", "hgp_900", "hgp_1225", "hgp_1600", "hgp_2500")
    with pytest.raises(KeyError):
        codes.fixture_base("hgp_9000")


def test_store_load_round_trip(tmp_path):
    base = codes.generate_regular_ldpc(6, 8, 3, 4, seed=2)
    code = codes.hgp(base.matrix)
    prefix = tmp_path / "roundtrip"
    codes.store_code(code, prefix)
    again = codes.load_code(prefix)
    assert again == code


def test_load_code_explicit_pair(tmp_path, tiny):
    gf2.write_alist(tmp_path / "x.alist", tiny.h_x)
    gf2.write_alist(tmp_path / "z.alist", tiny.h_z)
    got = codes.load_code((tmp_path / "x.alist", tmp_path / "z.alist"))
    assert got == tiny


def test_load_code_rejects_css_violation(tmp_path):
    gf2.write_alist(tmp_path / "bad.hx.alist", BinaryMatrix.from_bits([[1, 0, 0]]))
    gf2.write_alist(tmp_path / "bad.hz.alist", BinaryMatrix.from_bits([[1, 1, 0]]))
    with pytest.raises(ValueError, match="CSS violation"):
        codes.load_code(tmp_path / "bad")
