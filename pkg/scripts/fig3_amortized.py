"""Amortized version of the runtime sweep: 200 draws per trial.

The fast sampler builds its tables once per trial and reuses them for every
draw, so its cost per partition falls while the baseline's does not.

    python scripts/fig3_amortized.py --out amortized.csv
"""

from dataclasses import dataclass

from fig2_runtime_vs_lambda import RuntimeConfig, main


@dataclass
class AmortizedConfig(RuntimeConfig):
    samples: int = 200


if __name__ == "__main__":
    main(AmortizedConfig)
