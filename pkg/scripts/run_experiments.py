#!/usr/bin/env python3
"""Drive the memory-lifetime experiment grids and write one CSV per figure.

Each experiment is a config handed to the qslide CLI, so everything here is
reproducible from the emitted files alone. Defaults are desk-scale; raise
--trials for smoother curves.

  window-comparison   (W,F) in {(1,1),(2,1),(3,1),(16,16)} on hgp_625 over a p grid
  offset-plateau      (5,1) vs (10,1) on hgp_625
  code-comparison     single-shot hgp_625 vs hgp_900
  copies-vs-block     4 x hgp_625 under (4,1) vs hgp_2500 under (1,1)
"""

import argparse
import sys
from pathlib import Path

from qslide import cli

EXPERIMENTS = {
    "window-comparison": dict(
        code="hgp_625",
        p="0.004, 0.005, 0.006, 0.007",
        windows="1:1, 2:1, 3:1, 16:16",
    ),
    "offset-plateau": dict(
        code="hgp_625",
        p="0.005, 0.007",
        windows="5:1, 10:1",
    ),
    "code-comparison-625": dict(code="hgp_625", p="0.005, 0.006, 0.007", windows="1:1"),
    "code-comparison-900": dict(code="hgp_900", p="0.005, 0.006, 0.007", windows="1:1"),
    "copies-vs-block-625": dict(code="hgp_625", p="0.007", windows="4:1"),
    "copies-vs-block-2500": dict(code="hgp_2500", p="0.007", windows="1:1"),
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("experiment", choices=sorted(EXPERIMENTS) + ["all"])
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--max-cycles", type=int, default=100000)
    parser.add_argument("--seed", type=int, default=20260815)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--max-iterations", type=int, default=100)
    parser.add_argument("--out-dir", default="results")
    args = parser.parse_args(argv)

    names = sorted(EXPERIMENTS) if args.experiment == "all" else [args.experiment]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in names:
        spec = EXPERIMENTS[name]
        out = out_dir / f"{name}.csv"
        cfg = out_dir / f"{name}.cfg"
        cfg.write_text(
            "".join(
                f"{k} = {v}\n"
                for k, v in dict(
                    spec,
                    trials=args.trials,
                    max_cycles=args.max_cycles,
                    seed=args.seed,
                    workers=args.workers,
                    max_iterations=args.max_iterations,
                    output=out,
                ).items()
            )
        )
        print(f"== {name} -> {out}", file=sys.stderr)
        rc = cli.main(["lifetime", "--config", str(cfg)])
        if rc != 0:
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
