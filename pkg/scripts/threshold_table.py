"""Closed-form noise thresholds for d = 2..N as a Markdown table."""

import argparse

from ea_atlas import depolarizing_ea as dep

COLS = ("q_EA_local", "q_nEA_local", "q_MES_local", "q_EA_global", "q_nEA_global", "q_MES_global")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d-max", type=int, default=8)
    args = ap.parse_args()
    print("| d | " + " | ".join(COLS) + " |")
    print("|---" * (len(COLS) + 1) + "|")
    for d in range(2, args.d_max + 1):
        t = dep.thresholds(d).to_dict()
        print(f"| {d} | " + " | ".join(f"{t[c]:.6f}" for c in COLS) + " |")


if __name__ == "__main__":
    main()
