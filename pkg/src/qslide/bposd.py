"""Belief propagation with ordered-statistics post-processing over GF(2).

Message passing runs in the log domain with a flooding schedule (all checks
updated, then all variables, ascending index). The decoder is deterministic:
fixed input gives bit-identical output. Two exactness mechanisms matter for
reproducibility:

* early stop fires as soon as the hard decision matches the syndrome;
* when the message state becomes exactly periodic (period 1 or 2, which is
  what saturated trapping sets produce), the remaining iterations are
  skipped after aligning to the phase the full budget would have ended on,
  so the output is bit-identical to running max_iterations out.

OSD ranks columns most-likely-error-first (ascending posterior LLR, ties by
column index), row-reduces in that order, and solves on the pivot set;
combination sweep additionally tries every weight-1 flip of a non-pivot
coordinate and every weight-2 flip within the first ``sweep_depth``
non-pivots, keeping the minimum-total-weight candidate (ties: first in
sweep order).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from numba import njit

from . import gf2
from .gf2 import BinaryMatrix, BinaryVector

_PROD_GUARD = 1.0 - 1e-15


@dataclass(frozen=True)
class DecoderConfig:
    """Knobs for the BP-OSD pipeline.

    max_iterations=None resolves to the variable count of the matrix being
    decoded (the number of error coordinates in the decoding problem).
    """

    max_iterations: int | None = None
    bp_variant: str = "product-sum"
    min_sum_scale: float = 1.0
    osd_mode: str = "combination-sweep"
    sweep_depth: int = 40
    llr_clamp: float = 30.0

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1 (or None for the variable count)")
        if self.bp_variant not in ("product-sum", "min-sum"):
            raise ValueError(f"unknown bp_variant {self.bp_variant!r}")
        if not 0.0 < self.min_sum_scale <= 1.0:
            raise ValueError("min_sum_scale must be in (0, 1]")
        if self.osd_mode not in ("off", "osd0", "combination-sweep"):
            raise ValueError(f"unknown osd_mode {self.osd_mode!r}")
        if self.sweep_depth < 0:
            raise ValueError("sweep_depth must be >= 0")
        if not self.llr_clamp > 0:
            raise ValueError("llr_clamp must be positive")

    def resolve_iterations(self, n_variables: int) -> int:
        return self.max_iterations if self.max_iterations is not None else max(1, n_variables)


@dataclass(frozen=True)
class DecodeResult:
    """Decoder output. bp_iterations counts message-passing iterations that
    actually ran; on non-convergent inputs this can sit below the budget when
    an exact message cycle let the remainder be skipped."""

    estimate: BinaryVector
    syndrome_consistent: bool
    bp_converged: bool
    reliabilities: np.ndarray
    bp_iterations: int = 0


@functools.lru_cache(maxsize=64)
def _tanner(H: BinaryMatrix):
    """CSR-style edge arrays: edges sorted by (check, variable)."""
    sups = H.row_supports()
    deg = np.array([s.size for s in sups], dtype=np.int64)
    chk_ptr = np.zeros(H.rows + 1, dtype=np.int64)
    np.cumsum(deg, out=chk_ptr[1:])
    edge_var = (
        np.concatenate(sups).astype(np.int64) if chk_ptr[-1] else np.zeros(0, np.int64)
    )
    # edges regrouped by variable; stable sort keeps checks ascending per var
    var_edge = np.argsort(edge_var, kind="stable").astype(np.int64)
    var_ptr = np.zeros(H.cols + 1, dtype=np.int64)
    np.cumsum(np.bincount(edge_var, minlength=H.cols), out=var_ptr[1:])
    for a in (chk_ptr, edge_var, var_edge, var_ptr):
        a.flags.writeable = False
    return chk_ptr, edge_var, var_ptr, var_edge


@njit(cache=True)
def _syndrome_matches(chk_ptr, edge_var, hard, syn):  # pragma: no cover - jitted
    for i in range(chk_ptr.size - 1):
        par = 0
        for e in range(chk_ptr[i], chk_ptr[i + 1]):
            par ^= hard[edge_var[e]]
        if par != syn[i]:
            return False
    return True


@njit(cache=True)
def _states_equal(a, b):  # pragma: no cover - jitted
    for i in range(a.size):
        if a[i] != b[i]:
            return False
    return True


@njit(cache=True)
def _bp_iteration(
    chk_ptr, edge_var, var_ptr, var_edge, syn, llr0,
    product_sum, ms_scale, clamp, msg_v2c, msg_c2v, post, work, th,
):  # pragma: no cover - jitted
    m = chk_ptr.size - 1
    n = var_ptr.size - 1
    for i in range(m):
        lo, hi = chk_ptr[i], chk_ptr[i + 1]
        sgn_syn = -1.0 if syn[i] else 1.0
        if product_sum:
            # exclusion products via prefix/suffix of tanh(msg/2)
            for e in range(lo, hi):
                th[e] = np.tanh(0.5 * msg_v2c[e])
            acc = 1.0
            for e in range(lo, hi):
                work[e] = acc
                acc *= th[e]
            acc = 1.0
            for e in range(hi - 1, lo - 1, -1):
                prod = work[e] * acc
                if prod > _PROD_GUARD:
                    prod = _PROD_GUARD
                elif prod < -_PROD_GUARD:
                    prod = -_PROD_GUARD
                msg_c2v[e] = sgn_syn * 2.0 * np.arctanh(prod)
                acc *= th[e]
        else:
            # scaled min-sum: exclusion min via the two smallest magnitudes
            min1 = np.inf
            min2 = np.inf
            argmin = -1
            sign_all = 1.0
            for e in range(lo, hi):
                v = msg_v2c[e]
                if v < 0.0:
                    sign_all = -sign_all
                    v = -v
                if v < min1:
                    min2 = min1
                    min1 = v
                    argmin = e
                elif v < min2:
                    min2 = v
            for e in range(lo, hi):
                v = msg_v2c[e]
                sign_e = sign_all if v >= 0.0 else -sign_all
                mag = min2 if e == argmin else min1
                if mag == np.inf:
                    mag = 0.0
                msg_c2v[e] = sgn_syn * sign_e * ms_scale * mag
    for j in range(n):
        s = llr0[j]
        for k in range(var_ptr[j], var_ptr[j + 1]):
            s += msg_c2v[var_edge[k]]
        post[j] = s
        for k in range(var_ptr[j], var_ptr[j + 1]):
            e = var_edge[k]
            v = s - msg_c2v[e]
            if v > clamp:
                v = clamp
            elif v < -clamp:
                v = -clamp
            msg_v2c[e] = v


@njit(cache=True)
def _bp_core(
    chk_ptr, edge_var, var_ptr, var_edge, syn, llr0, max_iter,
    product_sum, ms_scale, clamp,
    msg_v2c, msg_c2v, post, hard, work, th, prev1, prev2,
):  # pragma: no cover - jitted
    n = var_ptr.size - 1
    for j in range(n):
        post[j] = llr0[j]
        hard[j] = 1 if llr0[j] < 0.0 else 0
    if _syndrome_matches(chk_ptr, edge_var, hard, syn):
        return True, 0
    for e in range(edge_var.size):
        msg_v2c[e] = llr0[edge_var[e]]
    have1 = False
    have2 = False
    it = 0
    while it < max_iter:
        it += 1
        _bp_iteration(chk_ptr, edge_var, var_ptr, var_edge, syn, llr0,
                      product_sum, ms_scale, clamp, msg_v2c, msg_c2v, post, work, th)
        for j in range(n):
            hard[j] = 1 if post[j] < 0.0 else 0
        if _syndrome_matches(chk_ptr, edge_var, hard, syn):
            return True, it
        if it == max_iter:
            break
        # exact periodicity: the v2c state determines everything downstream
        if have1 and _states_equal(msg_v2c, prev1):
            break
        if have2 and _states_equal(msg_v2c, prev2):
            if (max_iter - it) % 2 == 1:
                # land on the phase the full budget would have ended on
                _bp_iteration(chk_ptr, edge_var, var_ptr, var_edge, syn, llr0,
                              product_sum, ms_scale, clamp, msg_v2c, msg_c2v, post, work, th)
                for j in range(n):
                    hard[j] = 1 if post[j] < 0.0 else 0
                it += 1
            break
        prev2[:] = prev1
        prev1[:] = msg_v2c
        have2 = have1
        have1 = True
    return False, it


@njit(cache=True)
def _stable_argsort(values):  # pragma: no cover - jitted
    """Merge sort of indices by (value, index); numba lacks a stable argsort."""
    n = values.size
    idx = np.arange(n)
    buf = np.empty(n, dtype=idx.dtype)
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            a, b, k = lo, mid, lo
            while a < mid and b < hi:
                ia, ib = idx[a], idx[b]
                if values[ia] < values[ib] or (values[ia] == values[ib] and ia < ib):
                    buf[k] = ia
                    a += 1
                else:
                    buf[k] = ib
                    b += 1
                k += 1
            while a < mid:
                buf[k] = idx[a]
                a += 1
                k += 1
            while b < hi:
                buf[k] = idx[b]
                b += 1
                k += 1
        idx, buf = buf, idx
        width *= 2
    return idx


@njit(cache=True)
def _osd_core(h_words, m, n, syn, order, do_sweep, lam):  # pragma: no cover - jitted
    """Row-reduce in reliability order and solve; returns (estimate, ok)."""
    nw = (n + 63) >> 6
    R = np.zeros((m, nw + 1), dtype=np.uint64)
    R[:, :nw] = h_words
    for i in range(m):
        if syn[i]:
            R[i, nw] = np.uint64(1)
    pivots = gf2._eliminate(R, order, m)
    rank = pivots.size
    estimate = np.zeros(n, dtype=np.uint8)
    one = np.uint64(1)
    for r in range(rank, m):
        if R[r, nw] & one:
            return estimate, False
    # packed pivot-part of the OSD-0 solution, one bit per pivot row
    rw = (rank + 63) >> 6 if rank else 1
    s0 = np.zeros(rw, dtype=np.uint64)
    for i in range(rank):
        if R[i, nw] & one:
            s0[i >> 6] |= one << np.uint64(i & 63)
    best_w = 0
    for w in range(rw):
        best_w += int(gf2._popcount64(s0[w]))
    best_a = -1
    best_b = -1
    if do_sweep and rank < n:
        is_pivot = np.zeros(n, dtype=np.uint8)
        for i in range(rank):
            is_pivot[pivots[i]] = 1
        n_np = n - rank
        nonpiv = np.empty(n_np, dtype=np.int64)
        t = 0
        for oi in range(n):
            c = order[oi]
            if not is_pivot[c]:
                nonpiv[t] = c
                t += 1
        # reduced columns of the non-pivots, packed over the rank rows
        cols = np.zeros((n_np, rw), dtype=np.uint64)
        for t in range(n_np):
            c = nonpiv[t]
            wc = c >> 6
            bc = np.uint64(c & 63)
            for i in range(rank):
                if (R[i, wc] >> bc) & one:
                    cols[t, i >> 6] |= one << np.uint64(i & 63)
        for t in range(n_np):
            w = 1
            for wd in range(rw):
                w += int(gf2._popcount64(s0[wd] ^ cols[t, wd]))
            if w < best_w:
                best_w = w
                best_a = t
                best_b = -1
        depth = lam if lam < n_np else n_np
        for t1 in range(depth):
            for t2 in range(t1 + 1, depth):
                w = 2
                for wd in range(rw):
                    w += int(gf2._popcount64(s0[wd] ^ cols[t1, wd] ^ cols[t2, wd]))
                if w < best_w:
                    best_w = w
                    best_a = t1
                    best_b = t2
        if best_a >= 0:
            estimate[nonpiv[best_a]] = 1
            for wd in range(rw):
                s0[wd] ^= cols[best_a, wd]
        if best_b >= 0:
            estimate[nonpiv[best_b]] = 1
            for wd in range(rw):
                s0[wd] ^= cols[best_b, wd]
    for i in range(rank):
        if (s0[i >> 6] >> np.uint64(i & 63)) & one:
            estimate[pivots[i]] = 1
    return estimate, True


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def _check_inputs(H: BinaryMatrix, syndrome: BinaryVector, priors) -> np.ndarray:
    if syndrome.length != H.rows:
        raise ValueError(f"syndrome length {syndrome.length} != check count {H.rows}")
    pr = np.asarray(priors, dtype=np.float64)
    if pr.ndim == 0:
        pr = np.full(H.cols, float(pr))
    if pr.shape != (H.cols,):
        raise ValueError(f"priors must have length {H.cols}")
    if np.any(pr <= 0.0) or np.any(pr >= 1.0):
        raise ValueError("priors must lie strictly inside (0, 1)")
    return pr


def _prior_llrs(priors: np.ndarray, clamp: float) -> np.ndarray:
    return np.clip(np.log((1.0 - priors) / priors), -clamp, clamp)


def bp_decode(
    H: BinaryMatrix, syndrome: BinaryVector, priors, config: DecoderConfig
) -> DecodeResult:
    """Belief propagation alone; non-convergence is reported, not raised."""
    pr = _check_inputs(H, syndrome, priors)
    chk_ptr, edge_var, var_ptr, var_edge = _tanner(H)
    E = edge_var.size
    llr0 = _prior_llrs(pr, config.llr_clamp)
    syn = syndrome.to_bits()
    post = np.empty(H.cols)
    hard = np.empty(H.cols, dtype=np.uint8)
    converged, iters = _bp_core(
        chk_ptr, edge_var, var_ptr, var_edge, syn, llr0,
        config.resolve_iterations(H.cols),
        config.bp_variant == "product-sum", config.min_sum_scale, config.llr_clamp,
        np.empty(E), np.empty(E), post, hard, np.empty(E), np.empty(E),
        np.empty(E), np.empty(E),
    )
    post.flags.writeable = False
    return DecodeResult(
        estimate=BinaryVector.from_bits(hard),
        syndrome_consistent=converged,
        bp_converged=converged,
        reliabilities=post,
        bp_iterations=iters,
    )


def osd_post_process(
    H: BinaryMatrix, syndrome: BinaryVector, reliabilities, config: DecoderConfig
) -> DecodeResult:
    """Solve the syndrome exactly on the most-likely-error information set."""
    if config.osd_mode == "off":
        raise ValueError("osd_post_process called with osd_mode='off'")
    rel = np.ascontiguousarray(reliabilities, dtype=np.float64)
    if rel.shape != (H.cols,):
        raise ValueError(f"reliabilities must have length {H.cols}")
    if syndrome.length != H.rows:
        raise ValueError(f"syndrome length {syndrome.length} != check count {H.rows}")
    order = np.argsort(rel, kind="stable").astype(np.int64)
    est, ok = _osd_core(
        H.words, H.rows, H.cols, syndrome.to_bits(), order,
        config.osd_mode == "combination-sweep", config.sweep_depth,
    )
    if not ok:
        raise ValueError("syndrome lies outside the column space of H")
    rel = rel.copy()
    rel.flags.writeable = False
    return DecodeResult(
        estimate=BinaryVector.from_bits(est),
        syndrome_consistent=True,
        bp_converged=False,
        reliabilities=rel,
    )


def decode(
    H: BinaryMatrix, syndrome: BinaryVector, priors, config: DecoderConfig
) -> DecodeResult:
    """BP first; on non-convergence, OSD over the BP soft output."""
    bp = bp_decode(H, syndrome, priors, config)
    if bp.syndrome_consistent or config.osd_mode == "off":
        return bp
    osd = osd_post_process(H, syndrome, bp.reliabilities, config)
    return DecodeResult(
        estimate=osd.estimate,
        syndrome_consistent=True,
        bp_converged=False,
        reliabilities=bp.reliabilities,
        bp_iterations=bp.bp_iterations,
    )


# ---------------------------------------------------------------------------
# exhaustive low-weight sweep
# ---------------------------------------------------------------------------
#
# Decoding every weight <= 3 error through the Python API costs hours; the
# driver below stays inside compiled code. Most low-weight errors are spread
# out enough that BP's hard decision already matches the syndrome after one
# iteration, and with uniform priors that first iteration is fully
# determined by one number per edge (the check-to-variable message on a
# zero-syndrome check; syndrome-1 checks send its exact negation). The fast
# path replays that iteration locally around the syndrome, in the kernel's
# own summation order, so its output is bit-identical to bp_decode; anything
# that does not settle in one iteration goes through the real kernels.


@dataclass(frozen=True)
class SweepReport:
    """Outcome of an exhaustive low-weight error sweep."""

    cases: int
    failures: int
    fast_path_cases: int
    fallback_cases: int
    failing_supports: tuple = ()


@njit(cache=True)
def _case_fast(
    sup, w, chk_ptr, edge_var, var_ptr, var_edge, chk_of, L0, c1, Lbits,
    seen, par, clist, vseen, vlist, candv, seen2, par2, clist2, rmark, rlist,
):  # pragma: no cover - jitted
    """Replay BP iteration 1 around the syndrome of the error `sup[:w]`.

    Returns 0 (decoded, no logical failure), 1 (logical failure), or
    2 (hard decision not syndrome-consistent after one iteration: caller
    must run the full pipeline). Scratch arrays must arrive zeroed in their
    mark slots and are restored before returning.
    """
    nc = 0
    for t in range(w):
        v = sup[t]
        for k in range(var_ptr[v], var_ptr[v + 1]):
            c = chk_of[var_edge[k]]
            if seen[c]:
                par[c] ^= 1
            else:
                seen[c] = 1
                par[c] = 1
                clist[nc] = c
                nc += 1
    any_syn = False
    for t in range(nc):
        if par[clist[t]]:
            any_syn = True
            break
    nv = 0
    if not any_syn:
        # prior hard decision (all zeros) already matches: residual = error
        status = 0
        for l in range(Lbits.shape[0]):
            p = 0
            for t in range(w):
                p ^= Lbits[l, sup[t]]
            if p:
                status = 1
                break
    else:
        for t in range(nc):
            c = clist[t]
            if not par[c]:
                continue
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                v = edge_var[e]
                if not vseen[v]:
                    vseen[v] = 1
                    vlist[nv] = v
                    nv += 1
        # posterior of each touched variable, summed in the kernel's order;
        # untouched variables only ever add positive terms to L0 > 0
        ncand = 0
        for t in range(nv):
            v = vlist[t]
            s = L0
            for k in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[k]
                c = chk_of[e]
                if seen[c] and par[c]:
                    s -= c1[e]
                else:
                    s += c1[e]
            if s < 0.0:
                candv[ncand] = v
                ncand += 1
        n2 = 0
        for t in range(ncand):
            v = candv[t]
            for k in range(var_ptr[v], var_ptr[v + 1]):
                c = chk_of[var_edge[k]]
                if seen2[c]:
                    par2[c] ^= 1
                else:
                    seen2[c] = 1
                    par2[c] = 1
                    clist2[n2] = c
                    n2 += 1
        ok = True
        for t in range(n2):
            c = clist2[t]
            want = par[c] if seen[c] else 0
            if par2[c] != want:
                ok = False
                break
        if ok:
            for t in range(nc):
                c = clist[t]
                if par[c] and not seen2[c]:
                    ok = False
                    break
        for t in range(n2):
            seen2[clist2[t]] = 0
        if not ok:
            status = 2
        else:
            # residual = candidate xor error; duplicates cancel their mark
            nr = 0
            for t in range(ncand):
                v = candv[t]
                rmark[v] ^= 1
                rlist[nr] = v
                nr += 1
            for t in range(w):
                v = sup[t]
                rmark[v] ^= 1
                rlist[nr] = v
                nr += 1
            status = 0
            for l in range(Lbits.shape[0]):
                p = 0
                for t in range(nr):
                    v = rlist[t]
                    if rmark[v]:
                        p ^= Lbits[l, v]
                if p:
                    status = 1
                    break
            for t in range(nr):
                rmark[rlist[t]] = 0
    for t in range(nc):
        seen[clist[t]] = 0
    for t in range(nv):
        vseen[vlist[t]] = 0
    return status


@njit(cache=True)
def _case_full(
    sup, w, chk_ptr, edge_var, var_ptr, var_edge, chk_of, llr0,
    max_iter, product_sum, ms_scale, clamp, do_sweep, lam, h_words, Lbits,
    f_syn, msg_v2c, msg_c2v, post, hard, work, th, prev1, prev2,
):  # pragma: no cover - jitted
    """Full BP(-OSD) pipeline for the error `sup[:w]`; 0 success, 1 failure."""
    m = chk_ptr.size - 1
    n = var_ptr.size - 1
    for t in range(w):
        v = sup[t]
        for k in range(var_ptr[v], var_ptr[v + 1]):
            f_syn[chk_of[var_edge[k]]] ^= 1
    converged, _ = _bp_core(
        chk_ptr, edge_var, var_ptr, var_edge, f_syn, llr0, max_iter,
        product_sum, ms_scale, clamp,
        msg_v2c, msg_c2v, post, hard, work, th, prev1, prev2,
    )
    if converged:
        est = hard
    else:
        order = _stable_argsort(post)
        est, ok = _osd_core(h_words, m, n, f_syn, order, do_sweep, lam)
        if not ok:
            raise ValueError("syndrome of a data error left the column space")
    for t in range(w):
        est[sup[t]] ^= 1
    rlist = np.empty(n, np.int64)
    nr = 0
    for v in range(n):
        if est[v]:
            rlist[nr] = v
            nr += 1
    status = 0
    for l in range(Lbits.shape[0]):
        p = 0
        for t in range(nr):
            p ^= Lbits[l, rlist[t]]
        if p:
            status = 1
            break
    for t in range(w):
        v = sup[t]
        for k in range(var_ptr[v], var_ptr[v + 1]):
            f_syn[chk_of[var_edge[k]]] ^= 1
    return status


@njit(cache=True)
def _sweep_chunk(
    i, max_weight, chk_ptr, edge_var, var_ptr, var_edge, chk_of, L0, c1, llr0,
    max_iter, product_sum, ms_scale, clamp, do_sweep, lam, h_words, Lbits,
    fail_buf, nfail,
):  # pragma: no cover - jitted
    """All error supports whose smallest index is i; returns tallies."""
    m = chk_ptr.size - 1
    n = var_ptr.size - 1
    E = edge_var.size
    seen = np.zeros(m, np.uint8)
    par = np.zeros(m, np.uint8)
    clist = np.empty(m, np.int64)
    vseen = np.zeros(n, np.uint8)
    vlist = np.empty(n, np.int64)
    candv = np.empty(n, np.int64)
    seen2 = np.zeros(m, np.uint8)
    par2 = np.zeros(m, np.uint8)
    clist2 = np.empty(m, np.int64)
    rmark = np.zeros(n, np.uint8)
    rlist = np.empty(2 * n + 3, np.int64)
    f_syn = np.zeros(m, np.uint8)
    msg_v2c = np.empty(E)
    msg_c2v = np.empty(E)
    work = np.empty(E)
    th = np.empty(E)
    prev1 = np.empty(E)
    prev2 = np.empty(E)
    post = np.empty(n)
    hard = np.empty(n, np.uint8)
    sup = np.empty(3, np.int64)
    cases = 0
    failures = 0
    fast = 0
    fell = 0
    sup[0] = i
    st = _case_fast(sup, 1, chk_ptr, edge_var, var_ptr, var_edge, chk_of,
                    L0, c1, Lbits, seen, par, clist, vseen, vlist, candv,
                    seen2, par2, clist2, rmark, rlist)
    if st == 2:
        fell += 1
        st = _case_full(sup, 1, chk_ptr, edge_var, var_ptr, var_edge, chk_of,
                        llr0, max_iter, product_sum, ms_scale, clamp,
                        do_sweep, lam, h_words, Lbits, f_syn,
                        msg_v2c, msg_c2v, post, hard, work, th, prev1, prev2)
    else:
        fast += 1
    cases += 1
    if st == 1:
        failures += 1
        if nfail < fail_buf.shape[0]:
            fail_buf[nfail, 0] = i
            fail_buf[nfail, 1] = -1
            fail_buf[nfail, 2] = -1
            nfail += 1
    if max_weight >= 2:
        for j in range(i + 1, n):
            sup[1] = j
            st = _case_fast(sup, 2, chk_ptr, edge_var, var_ptr, var_edge,
                            chk_of, L0, c1, Lbits, seen, par, clist, vseen,
                            vlist, candv, seen2, par2, clist2, rmark, rlist)
            if st == 2:
                fell += 1
                st = _case_full(sup, 2, chk_ptr, edge_var, var_ptr, var_edge,
                                chk_of, llr0, max_iter, product_sum, ms_scale,
                                clamp, do_sweep, lam, h_words, Lbits, f_syn,
                                msg_v2c, msg_c2v, post, hard, work, th,
                                prev1, prev2)
            else:
                fast += 1
            cases += 1
            if st == 1:
                failures += 1
                if nfail < fail_buf.shape[0]:
                    fail_buf[nfail, 0] = i
                    fail_buf[nfail, 1] = j
                    fail_buf[nfail, 2] = -1
                    nfail += 1
            if max_weight >= 3:
                for k in range(j + 1, n):
                    sup[2] = k
                    st = _case_fast(sup, 3, chk_ptr, edge_var, var_ptr,
                                    var_edge, chk_of, L0, c1, Lbits, seen,
                                    par, clist, vseen, vlist, candv, seen2,
                                    par2, clist2, rmark, rlist)
                    if st == 2:
                        fell += 1
                        st = _case_full(sup, 3, chk_ptr, edge_var, var_ptr,
                                        var_edge, chk_of, llr0, max_iter,
                                        product_sum, ms_scale, clamp,
                                        do_sweep, lam, h_words, Lbits, f_syn,
                                        msg_v2c, msg_c2v, post, hard, work,
                                        th, prev1, prev2)
                    else:
                        fast += 1
                    cases += 1
                    if st == 1:
                        failures += 1
                        if nfail < fail_buf.shape[0]:
                            fail_buf[nfail, 0] = i
                            fail_buf[nfail, 1] = j
                            fail_buf[nfail, 2] = k
                            nfail += 1
    return cases, failures, fast, fell, nfail


def _iteration_one_messages(H, llr0, config):
    """Per-edge c2v messages after BP iteration 1 on the zero syndrome.

    Verifies, against one run of the real kernel per syndrome polarity, that
    with uniform positive priors the iteration-1 message of an edge is this
    value on a syndrome-0 check and its exact negation on a syndrome-1 check.
    """
    chk_ptr, edge_var, var_ptr, var_edge = _tanner(H)
    E = edge_var.size
    product_sum = config.bp_variant == "product-sum"
    c1 = None
    for syn_bit in (0, 1):
        syn = np.full(H.rows, syn_bit, dtype=np.uint8)
        msg_v2c = llr0[edge_var].copy()
        msg_c2v = np.empty(E)
        _bp_iteration(chk_ptr, edge_var, var_ptr, var_edge, syn, llr0,
                      product_sum, config.min_sum_scale, config.llr_clamp,
                      msg_v2c, msg_c2v, np.empty(H.cols), np.empty(E),
                      np.empty(E))
        if syn_bit == 0:
            c1 = msg_c2v.copy()
        elif not np.array_equal(-c1, msg_c2v):
            raise RuntimeError("iteration-1 messages are not syndrome-antisymmetric")
    if not np.all(c1 >= 0.0):
        raise RuntimeError("iteration-1 messages are not nonnegative")
    return c1


def exhaustive_correctability(
    H: BinaryMatrix,
    logicals: BinaryMatrix,
    max_weight: int = 3,
    prior: float = 0.01,
    config: DecoderConfig | None = None,
    progress=None,
) -> SweepReport:
    """Decode every data error of weight 1..max_weight at noiseless syndromes.

    A case fails when the residual (estimate xor error) has odd overlap with
    some row of `logicals`. Estimates are bit-identical to decode() with
    uniform `prior`. `progress(done, total, cases, failures)` is called after
    each outer index when given. Only supports counting, not enumeration of
    every failure: the first 64 failing supports are reported.
    """
    if config is None:
        config = DecoderConfig()
    if config.osd_mode == "off":
        raise ValueError("the sweep needs an OSD fallback; osd_mode='off' unsupported")
    if not 1 <= max_weight <= 3:
        raise ValueError("max_weight must be between 1 and 3")
    if logicals.cols != H.cols:
        raise ValueError("logicals and H must share the column count")
    pr = _check_inputs(H, BinaryVector.zeros(H.rows), prior)
    if np.any(pr != pr[0]):
        raise ValueError("the sweep needs a uniform prior")
    llr0 = _prior_llrs(pr, config.llr_clamp)
    if llr0[0] <= 0.0:
        raise ValueError("the sweep needs a prior below 1/2")
    chk_ptr, edge_var, var_ptr, var_edge = _tanner(H)
    chk_of = np.repeat(np.arange(H.rows, dtype=np.int64), np.diff(chk_ptr))
    c1 = _iteration_one_messages(H, llr0, config)
    Lbits = logicals.to_bits()
    fail_buf = np.empty((64, 3), dtype=np.int64)
    n = H.cols
    totals = [0, n, n * (n - 1) // 2, n * (n - 1) * (n - 2) // 6]
    total_cases = sum(totals[1:max_weight + 1])
    cases = failures = fast = fell = nfail = 0
    for i in range(n):
        dc, df, dfast, dfell, nfail = _sweep_chunk(
            i, max_weight, chk_ptr, edge_var, var_ptr, var_edge, chk_of,
            llr0[0], c1, llr0, config.resolve_iterations(n),
            config.bp_variant == "product-sum", config.min_sum_scale,
            config.llr_clamp, config.osd_mode == "combination-sweep",
            config.sweep_depth, H.words, Lbits, fail_buf, nfail,
        )
        cases += dc
        failures += df
        fast += dfast
        fell += dfell
        if progress is not None:
            progress(i + 1, n, cases, failures)
    if cases != total_cases:
        raise RuntimeError(f"enumerated {cases} cases, expected {total_cases}")
    failing = tuple(
        tuple(int(x) for x in row if x >= 0) for row in fail_buf[:nfail]
    )
    return SweepReport(
        cases=cases,
        failures=failures,
        fast_path_cases=fast,
        fallback_cases=fell,
        failing_supports=failing,
    )
