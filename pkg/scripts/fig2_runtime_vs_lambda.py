"""Single-draw wall time of the naive and fast samplers across Poisson rates.

Each trial draws one partition; the fast sampler pays for its tables every
time. The shifted Poisson with rate lam has mean lam + 1, so 1/u_n grows
roughly linearly in lam for the rejection baseline.

    python scripts/fig2_runtime_vs_lambda.py --out runtime.csv
"""

import argparse
import sys
from dataclasses import dataclass, field

from escgen import ClusterSizeSpec
from escgen.bench import run_bench, write_csv


@dataclass
class RuntimeConfig:
    n: int = 500
    lams: list[float] = field(default_factory=lambda: [1.0, 2.0, 4.0, 6.0, 8.0, 12.0, 16.0])
    samples: int = 1
    trials: int = 20
    seed: int = 20230601


def collect(cfg: RuntimeConfig):
    records = []
    for lam in cfg.lams:
        records += run_bench(ClusterSizeSpec.shifted_poisson(lam), cfg.n, cfg.samples, cfg.trials, cfg.seed)
    return records


def parse_args(cfg_cls=RuntimeConfig, argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=cfg_cls.n)
    ap.add_argument("--lams", type=float, nargs="+", default=None)
    ap.add_argument("--samples", type=int, default=cfg_cls.samples)
    ap.add_argument("--trials", type=int, default=cfg_cls.trials)
    ap.add_argument("--seed", type=int, default=cfg_cls.seed)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    cfg = cfg_cls(n=args.n, samples=args.samples, trials=args.trials, seed=args.seed)
    if args.lams:
        cfg.lams = args.lams
    return cfg, args.out


def main(cfg_cls=RuntimeConfig):
    cfg, out = parse_args(cfg_cls)
    records = collect(cfg)
    if out:
        with open(out, "w", newline="") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)


if __name__ == "__main__":
    main()
