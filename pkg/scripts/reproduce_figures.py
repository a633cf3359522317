"""Write every reference table and curve dataset as CSV into one directory.

Usage: python3 scripts/reproduce_figures.py [OUT_DIR]   (default: results/)
"""

from __future__ import annotations

import argparse
from pathlib import Path

from beam_misalignment.cli import run

BEAMS = "1:128"
SPEEDS = (1, 2, 4, 8)


def jobs() -> dict[str, list[str]]:
    out = {
        "effective_ssbs.csv": ["table1"],
        "sweep_time_vs_nreq.csv": [
            "sweep-curve",
            "--configs",
            "D/a/dl,D/a/dl+s,D/b/dl,D/b/dl+s,F/a/dl,G/a/dl",
            "--n-req",
            "1:256",
        ],
        "duration_vs_nbs.csv": ["duration-curve", "--values", BEAMS],
    }
    for v in SPEEDS:
        out[f"fraction_vs_nbs_v{v}.csv"] = ["fraction-curve", "--speed", str(v), "--values", BEAMS]
        out[f"gain_vs_nbs_v{v}.csv"] = ["gain-curve", "--speed", str(v), "--values", BEAMS, "--db"]
    out["simulate_default.csv"] = ["simulate", "--seed", "42"]
    return out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out_dir", nargs="?", default="results", type=Path)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for name, argv in jobs().items():
        path = args.out_dir / name
        code = run(argv + ["--out", str(path)])
        print(f"{'ok ' if code == 0 else 'ERR'} {path}")


if __name__ == "__main__":
    main()
