"""Command-line front end.

Subcommands: gen-hgp (random regular base plus hypergraph product, written as
alist files), code-info (parameters of a fixture or stored code), decode-once
(a single window decode with intermediate dumps), lifetime (Monte Carlo
sweeps over a (p, W, F) grid), and volume (decoding-volume table).

Sweep results go to CSV or JSON-lines. CSV rows carry exactly the header
fields below, formatted deterministically, so a rerun with the same master
seed produces byte-identical rows for any worker count; JSON-lines mirrors
the same fields plus wall_time_seconds. Every run needs an explicit master
seed; there is no time-based fallback.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import bposd, codes, gf2, lifetime, noise, window
from .bposd import DecoderConfig
from .gf2 import BinaryVector
from .window import WindowConfig

CSV_HEADER = "code,n,k,p,W,F,trials,censored,mean_T,std_err,volume,seed,config_hash"


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


def _fmt(x: float) -> str:
    return format(x, ".10g")


@dataclass(frozen=True)
class RunConfig:
    """A lifetime sweep: one code, a (p, W, F) grid, and run parameters."""

    code: str
    p_values: tuple
    windows: tuple
    trials: int
    master_seed: int
    max_cycles: int
    output: str
    format: str = "csv"
    workers: int = 1
    ideal_prior: float = lifetime.IDEAL_PRIOR
    decoder: DecoderConfig = DecoderConfig()

    def __post_init__(self):
        if not self.code:
            raise ConfigError("code: required")
        if not self.p_values:
            raise ConfigError("p: at least one value required")
        for v in self.p_values:
            if not 0.0 < v < 1.0:
                raise ConfigError(f"p: values must lie in (0, 1), got {_fmt(v)}")
        if not self.windows:
            raise ConfigError("windows: at least one W:F pair required")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if self.master_seed < 0:
            raise ConfigError(f"seed: must be a nonnegative integer, got {self.master_seed}")
        if self.max_cycles < 1:
            raise ConfigError(f"max_cycles: must be >= 1, got {self.max_cycles}")
        if not self.output:
            raise ConfigError("output: required")
        if self.format not in ("csv", "jsonl"):
            raise ConfigError(f"format: expected 'csv' or 'jsonl', got {self.format!r}")
        if self.workers < 1:
            raise ConfigError(f"workers: must be >= 1, got {self.workers}")
        if not 0.0 < self.ideal_prior < 0.5:
            raise ConfigError(f"ideal_prior: must lie in (0, 0.5), got {_fmt(self.ideal_prior)}")


def config_hash(cfg: RunConfig) -> str:
    """Truncated sha256 over the fields that shape the data.

    Plumbing (output path, format, worker count) is excluded on purpose:
    rerunning the same science to a different file or with a different pool
    size must reproduce the same rows, hash included.
    """
    d = cfg.decoder
    parts = [
        f"code={cfg.code}",
        "p=" + ",".join(_fmt(v) for v in cfg.p_values),
        "windows=" + ",".join(f"{w.W}:{w.F}" for w in cfg.windows),
        f"trials={cfg.trials}",
        f"max_cycles={cfg.max_cycles}",
        f"seed={cfg.master_seed}",
        f"ideal_prior={_fmt(cfg.ideal_prior)}",
        f"max_iterations={d.max_iterations}",
        f"bp_variant={d.bp_variant}",
        f"min_sum_scale={_fmt(d.min_sum_scale)}",
        f"osd_mode={d.osd_mode}",
        f"sweep_depth={d.sweep_depth}",
        f"llr_clamp={_fmt(d.llr_clamp)}",
    ]
    return hashlib.sha256(";".join(parts).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class ResultRecord:
    """One (code, p, W, F) data point, self-describing for re-runs."""

    code: str
    n: int
    k: int
    p: float
    W: int
    F: int
    trials: int
    censored: int
    mean_T: float
    std_err: float
    volume: int
    seed: int
    config_hash: str
    wall_time_seconds: float

    def csv_row(self) -> str:
        return ",".join(
            [
                self.code,
                str(self.n),
                str(self.k),
                _fmt(self.p),
                str(self.W),
                str(self.F),
                str(self.trials),
                str(self.censored),
                _fmt(self.mean_T),
                _fmt(self.std_err),
                str(self.volume),
                str(self.seed),
                self.config_hash,
            ]
        )

    def json_obj(self) -> dict:
        return {
            "code": self.code,
            "n": self.n,
            "k": self.k,
            "p": self.p,
            "W": self.W,
            "F": self.F,
            "trials": self.trials,
            "censored": self.censored,
            "mean_T": self.mean_T,
            "std_err": self.std_err,
            "volume": self.volume,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "wall_time_seconds": self.wall_time_seconds,
        }


# ---------------------------------------------------------------------------
# flat key = value configuration files
# ---------------------------------------------------------------------------

_CONFIG_KEYS = (
    "code", "p", "windows", "trials", "max_cycles", "seed", "output", "format",
    "workers", "ideal_prior", "max_iterations", "bp_variant", "min_sum_scale",
    "osd_mode", "sweep_depth", "llr_clamp",
)


def parse_config_text(text: str) -> dict:
    """key = value lines; # starts a comment; later keys override earlier."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{key}: unknown configuration key (line {lineno})")
        raw[key] = value
    return raw


def _parse_int(raw: dict, key: str) -> int:
    try:
        return int(raw[key])
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw[key]!r}") from None


def _parse_float(raw: dict, key: str) -> float:
    try:
        return float(raw[key])
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw[key]!r}") from None


def _parse_windows(value: str) -> tuple:
    pairs = []
    for item in value.split(","):
        item = item.strip()
        try:
            w_str, f_str = item.split(":")
            pair = WindowConfig(int(w_str), int(f_str))
        except ValueError as e:
            raise ConfigError(f"windows: bad entry {item!r} ({e})") from None
        pairs.append(pair)
    return tuple(pairs)


def _parse_p_list(value: str) -> tuple:
    out = []
    for item in value.split(","):
        try:
            out.append(float(item.strip()))
        except ValueError:
            raise ConfigError(f"p: could not parse {item.strip()!r}") from None
    return tuple(out)


def config_from_mapping(raw: dict) -> RunConfig:
    """Build and validate a RunConfig from raw string values."""
    for key in ("code", "p", "windows", "trials", "output"):
        if key not in raw:
            raise ConfigError(f"{key}: required")
    if "seed" not in raw:
        raise ConfigError("seed: required; randomness never falls back to the clock")
    decoder_kwargs = {}
    if "max_iterations" in raw:
        v = raw["max_iterations"].lower()
        decoder_kwargs["max_iterations"] = None if v == "none" else _parse_int(raw, "max_iterations")
    if "bp_variant" in raw:
        decoder_kwargs["bp_variant"] = raw["bp_variant"]
    if "min_sum_scale" in raw:
        decoder_kwargs["min_sum_scale"] = _parse_float(raw, "min_sum_scale")
    if "osd_mode" in raw:
        decoder_kwargs["osd_mode"] = raw["osd_mode"]
    if "sweep_depth" in raw:
        decoder_kwargs["sweep_depth"] = _parse_int(raw, "sweep_depth")
    if "llr_clamp" in raw:
        decoder_kwargs["llr_clamp"] = _parse_float(raw, "llr_clamp")
    try:
        decoder = DecoderConfig(**decoder_kwargs)
    except ValueError as e:
        raise ConfigError(f"decoder: {e}") from None
    return RunConfig(
        code=raw["code"],
        p_values=_parse_p_list(raw["p"]),
        windows=_parse_windows(raw["windows"]),
        trials=_parse_int(raw, "trials"),
        master_seed=_parse_int(raw, "seed"),
        max_cycles=_parse_int(raw, "max_cycles") if "max_cycles" in raw else 1000,
        output=raw["output"],
        format=raw.get("format", "csv"),
        workers=_parse_int(raw, "workers") if "workers" in raw else 1,
        ideal_prior=_parse_float(raw, "ideal_prior") if "ideal_prior" in raw else lifetime.IDEAL_PRIOR,
        decoder=decoder,
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _resolve_code(source: str):
    return codes.load_code(source, name=source)


def cmd_gen_hgp(args) -> int:
    base = codes.generate_regular_ldpc(
        args.rows,
        args.cols,
        args.col_weight,
        args.row_weight,
        args.seed,
        reject_four_cycles=args.reject_four_cycles,
    )
    code = codes.hgp(base.matrix, name=args.out)
    gf2.write_alist(args.out + ".a.alist", base.matrix)
    codes.store_code(code, args.out)
    bound = codes.distance_upper_bound(code, trials=args.distance_trials, seed=args.seed)
    print(f"[[{code.n}, {code.k}]]  d <= {bound}")
    print(f"wrote {args.out}.a.alist, {args.out}.hx.alist, {args.out}.hz.alist")
    return 0


def _weight_range(h) -> str:
    row = h.row_weights()
    col = gf2.transpose(h).row_weights()
    return (
        f"{h.rows} checks, row weight {int(row.min())}..{int(row.max())}, "
        f"column weight {int(col.min())}..{int(col.max())}"
    )


def cmd_code_info(args) -> int:
    code = _resolve_code(args.source)
    print(f"{code.name}: [[{code.n}, {code.k}]]")
    print(f"H_X: {_weight_range(code.h_x)}")
    print(f"H_Z: {_weight_range(code.h_z)}")
    print(f"single-shot decoding volume: {lifetime.decoding_volume(1, code.n, code.k)}")
    if args.distance_trials:
        bound = codes.distance_upper_bound(code, trials=args.distance_trials, seed=args.seed)
        print(f"distance upper bound ({args.distance_trials} trials): {bound}")
    return 0


def _decode_once_syndromes(code, args):
    """Raw syndromes for one window: sampled, injected, or all zero."""
    H = code.h_z
    n, m = code.n, H.rows
    if args.inject is not None:
        qubits = [int(q) for q in args.inject.split(",") if q.strip()]
        e1 = BinaryVector.from_support(n, qubits)
        syn = gf2.mat_vec(H, e1)
        return [syn] * args.W, f"injected data error on qubits {qubits} in round 1"
    if args.p is not None:
        params = noise.NoiseParams(args.p)
        cumulative = BinaryVector.zeros(n)
        out = []
        for t in range(args.W):
            rng = noise.round_rng(args.seed, 0, t)
            sample = noise.sample_round(n, m, params, rng)
            cumulative = cumulative ^ sample.e
            out.append(noise.synthesize_syndrome(H, cumulative, sample.u))
        return out, f"sampled {args.W} rounds at p = {_fmt(args.p)} (seed {args.seed})"
    return [BinaryVector.zeros(m)] * args.W, "all-zero syndromes"


def cmd_decode_once(args) -> int:
    code = _resolve_code(args.code)
    wcfg = WindowConfig(args.W, args.F)
    raw, source = _decode_once_syndromes(code, args)
    prior = args.p if args.p is not None else args.prior
    dcfg = DecoderConfig()
    wm = window.build_window_matrix(code.h_z, wcfg.W)
    diffed = window.diff_syndromes(raw)
    result = bposd.decode(wm.h_win, gf2.concat_vectors(diffed), prior, dcfg)
    xi = BinaryVector.zeros(code.n)
    for j in range(1, wcfg.F + 1):
        xi = xi ^ wm.error_round(result.estimate, j)
    e_rounds = [
        tuple(int(i) for i in wm.error_round(result.estimate, j).support)
        for j in range(1, wcfg.W + 1)
    ]
    u_rounds = [
        tuple(int(i) for i in wm.measurement_round(result.estimate, j).support)
        for j in range(1, wcfg.W + 1)
    ]
    report = {
        "code": code.name,
        "W": wcfg.W,
        "F": wcfg.F,
        "source": source,
        "raw_syndrome_weights": [s.weight for s in raw],
        "diff_syndrome_weights": [s.weight for s in diffed],
        "bp_converged": result.bp_converged,
        "bp_iterations": result.bp_iterations,
        "iteration_budget": dcfg.resolve_iterations(wm.h_win.cols),
        "syndrome_consistent": result.syndrome_consistent,
        "osd_engaged": not result.bp_converged and dcfg.osd_mode != "off",
        "estimated_data_rounds": e_rounds,
        "estimated_measurement_rounds": u_rounds,
        "commit_support": tuple(int(i) for i in xi.support),
    }
    if args.json:
        print(json.dumps(report))
        return 0
    print(f"window (W, F) = ({wcfg.W}, {wcfg.F}) on {code.name}: "
          f"{wm.h_win.cols} variables, {wm.h_win.rows} checks")
    print(f"instance: {source}")
    print(f"raw syndrome weights: {report['raw_syndrome_weights']}")
    print(f"differenced syndrome weights: {report['diff_syndrome_weights']}")
    print(f"BP converged: {result.bp_converged} after {result.bp_iterations} iterations "
          f"(budget {report['iteration_budget']})")
    print(f"syndrome consistent: {result.syndrome_consistent}")
    if report["osd_engaged"]:
        order = np.argsort(result.reliabilities, kind="stable")
        head = ", ".join(str(int(i)) for i in order[:10])
        print(f"OSD engaged; least reliable variables: {head}")
    else:
        print("OSD engaged: False")
    for j, (ej, uj) in enumerate(zip(e_rounds, u_rounds), start=1):
        print(f"round {j}: data {list(ej)}, measurement {list(uj)}")
    print(f"commit xi support: {list(report['commit_support'])}")
    return 0


def _run_sweep(cfg: RunConfig, out_stream) -> list:
    code = _resolve_code(cfg.code)
    digest = config_hash(cfg)
    records = []
    points = [(p, w) for p in cfg.p_values for w in cfg.windows]
    if cfg.format == "csv":
        print(CSV_HEADER, file=out_stream, flush=True)
    for idx, (p, wcfg) in enumerate(points, start=1):
        label = f"[{idx}/{len(points)}] {cfg.code} p={_fmt(p)} (W,F)=({wcfg.W},{wcfg.F})"
        step = max(1, cfg.trials // 20)

        def progress(done, total):
            if done % step == 0 or done == total:
                print(f"\r{label}: trial {done}/{total}", end="", file=sys.stderr, flush=True)

        start = time.monotonic()
        est = lifetime.estimate_lifetime(
            code,
            p,
            wcfg,
            cfg.decoder,
            trials=cfg.trials,
            master_seed=cfg.master_seed,
            max_cycles=cfg.max_cycles,
            workers=cfg.workers,
            ideal_prior=cfg.ideal_prior,
            progress=progress,
        )
        wall = time.monotonic() - start
        record = ResultRecord(
            code=cfg.code,
            n=code.n,
            k=code.k,
            p=p,
            W=wcfg.W,
            F=wcfg.F,
            trials=cfg.trials,
            censored=est.censored_count,
            mean_T=est.mean_T,
            std_err=est.std_error,
            volume=lifetime.decoding_volume(wcfg.W, code.n, code.k),
            seed=cfg.master_seed,
            config_hash=digest,
            wall_time_seconds=round(wall, 3),
        )
        records.append(record)
        print(
            f"\r{label}: mean_T = {_fmt(est.mean_T)} +- {_fmt(est.std_error)}"
            f" ({est.censored_count} censored, {wall:.1f}s)",
            file=sys.stderr,
            flush=True,
        )
        for w in est.warnings:
            print(f"  warning: {w}", file=sys.stderr)
        if cfg.format == "csv":
            print(record.csv_row(), file=out_stream, flush=True)
        else:
            print(json.dumps(record.json_obj()), file=out_stream, flush=True)
    return records


def cmd_lifetime(args) -> int:
    if args.config:
        with open(args.config) as fh:
            raw = parse_config_text(fh.read())
    else:
        raw = {}
    for key in ("code", "p", "windows", "trials", "max_cycles", "seed", "output",
                "format", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = str(value)
    cfg = config_from_mapping(raw)
    with open(cfg.output, "w") as fh:
        _run_sweep(cfg, fh)
    print(f"wrote {cfg.output}", file=sys.stderr)
    return 0


def cmd_volume(args) -> int:
    widths = [int(w) for w in args.W.split(",")]
    rows = []
    for source in args.codes.split(","):
        code = _resolve_code(source.strip())
        for w in widths:
            rows.append((source.strip(), code.n, code.k, w,
                         lifetime.decoding_volume(w, code.n, code.k)))
    print(f"{'code':<16}{'n':>6}{'k':>6}{'W':>5}{'volume':>9}")
    for source, n, k, w, v in rows:
        print(f"{source:<16}{n:>6}{k:>6}{w:>5}{v:>9}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qslide",
        description="sliding-window BP-OSD decoding and memory-lifetime benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-hgp", help="generate a regular base code and its hypergraph product")
    g.add_argument("--rows", type=int, required=True, help="base check count m")
    g.add_argument("--cols", type=int, required=True, help="base bit count n")
    g.add_argument("--col-weight", type=int, required=True)
    g.add_argument("--row-weight", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True, help="output path prefix for alist files")
    g.add_argument("--reject-four-cycles", action="store_true")
    g.add_argument("--distance-trials", type=int, default=200)
    g.set_defaults(func=cmd_gen_hgp)

    c = sub.add_parser("code-info", help="print code parameters")
    c.add_argument("source", help="fixture name or alist path prefix")
    c.add_argument("--distance-trials", type=int, default=0)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_code_info)

    d = sub.add_parser("decode-once", help="run one window decode with a trace")
    d.add_argument("--code", required=True)
    d.add_argument("--W", type=int, required=True)
    d.add_argument("--F", type=int, required=True)
    d.add_argument("--p", type=float, default=None, help="sample one window of noise at rate p")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--inject", default=None, help="comma-separated data qubits flipped in round 1")
    d.add_argument("--prior", type=float, default=1e-2, help="decoder prior when not sampling")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_decode_once)

    l = sub.add_parser("lifetime", help="Monte Carlo lifetime sweep over a (p, W, F) grid")
    l.add_argument("--config", default=None, help="flat key = value configuration file")
    l.add_argument("--code", default=None)
    l.add_argument("--p", default=None, help="comma-separated error rates")
    l.add_argument("--windows", default=None, help="comma-separated W:F pairs")
    l.add_argument("--trials", type=int, default=None)
    l.add_argument("--max-cycles", type=int, dest="max_cycles", default=None)
    l.add_argument("--seed", type=int, default=None)
    l.add_argument("--output", default=None)
    l.add_argument("--format", choices=("csv", "jsonl"), default=None)
    l.add_argument("--workers", type=int, default=None)
    l.set_defaults(func=cmd_lifetime)

    v = sub.add_parser("volume", help="decoding volume table")
    v.add_argument("--codes", required=True, help="comma-separated fixtures or prefixes")
    v.add_argument("--W", required=True, help="comma-separated window widths")
    v.set_defaults(func=cmd_volume)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
