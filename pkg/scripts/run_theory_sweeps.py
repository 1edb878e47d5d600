#!/usr/bin/env python3
"""Write the exact measure curves of the two theoretical three-node systems.

Produces the synergy-to-redundancy transition curves: the static sweep varies
the S1->S2 copy probability (alpha in [0.5, 1], gamma = 1.5 - alpha, beta 0.9),
the dynamic sweep varies the S1->S2 coupling (a in [0, 1], c = 1 - a, b = 1).
Output: two CSVs with per-link IS/cIS/nIS/B columns.
"""
import argparse
from pathlib import Path

from hoinet.cli import main as hoinet_main


def run(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    hoinet_main(["theory", "three-node", "--kind", "static", "--sweep",
                 "--output", str(outdir / "three_node_static_sweep.csv")])
    hoinet_main(["theory", "three-node", "--kind", "dynamic", "--sweep",
                 "--output", str(outdir / "three_node_dynamic_sweep.csv")])


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=Path, default=Path("results"))
    args = parser.parse_args()
    run(args.outdir)
