"""Certified qutrit-qubit region from the numerical resolution search.

Prints the largest certified global noise level and, for a sweep of qutrit
noise q1, the largest certified qubit noise q2 next to the exact boundary
q2 = (2/q1 + 1)/9.
"""

import argparse
from pathlib import Path

import numpy as np

from ea_atlas import depolarizing_ea as dep
from ea_atlas.cli import format_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--resolution", type=float, default=1e-3)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    q = dep.max_certified_q(args.resolution)
    print(f"global 3x2: certified up to q = {q:.5f} (exact bound 0.25)")
    rows = []
    for q1 in np.linspace(0.25, 1.0, args.points):
        q2 = dep.max_certified_q2_3x2(float(q1), args.resolution)
        exact = min(1.0, (2 / q1 + 1) / 9)
        rows.append({"q1": float(q1), "q2_certified": q2 if q2 is not None else float("nan"),
                     "q2_exact": exact})
        print(f"q1 = {q1:.4f}: q2 certified {rows[-1]['q2_certified']:.4f}, exact {exact:.4f}")
    (args.out_dir / "optimizer_3x2.csv").write_text(
        format_rows(rows, "csv", [f"max_certified_q={q!r}"]))


if __name__ == "__main__":
    main()
