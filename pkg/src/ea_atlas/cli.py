"""``ea-atlas`` command line.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import depolarizing_ea as dep
from .channels import ChannelFormatError, cp_range, load_channel
from .criteria import (
    BlockPositiveWitnessSearch,
    Classification,
    Criterion,
    NotAChannelError,
    Status,
    _jsonable,
    ea_status,
    eb_status,
    is_cp,
    is_tp,
    is_unital,
    pea_witness_search,
    positivity_status,
    search_input_witness,
)
from .linalg import ConvergenceError, DimPair
from .qubit_unital import LambdaTriple, classify

SCHEMA = "# ea-atlas scan schema v1"
EXIT_INPUT, EXIT_NUMERIC = 2, 3


class InputError(ValueError):
    pass


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from None
    if not lo <= hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _dims(text: str) -> DimPair:
    try:
        return DimPair.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


@dataclass(frozen=True)
class ScanConfig:
    dims: DimPair
    grid: int
    q1_range: tuple[float, float]
    q2_range: tuple[float, float] | None
    seed: int = 0
    out: str | None = None
    format: str = "csv"
    threads: int = 1
    constructive: bool = False
    search: bool = False

    def __post_init__(self):
        if self.grid < 2:
            raise InputError("--grid must be >= 2")
        global_scan = self.q2_range is None
        axes = [(self.q1_range, self.dims.total if global_scan else self.dims.dA)]
        if not global_scan:
            axes.append((self.q2_range, self.dims.dB))
        for (lo, hi), d in axes:
            clo, chi = cp_range(d)
            if lo < clo - 1e-12 or hi > chi + 1e-12:
                raise InputError(f"range {lo}:{hi} leaves the CP range [{clo:.6g}, 1] for d={d}")


def _cell_seed(seed: int, *index) -> int:
    return int(np.random.SeedSequence([seed, *index]).generate_state(1)[0])


def _scan_cell(cfg: ScanConfig, index, q1, q2):
    if cfg.q2_range is None:
        verdict = dep.classify_global(cfg.dims, q1, cfg.constructive)
    else:
        verdict = dep.classify_local(cfg.dims, q1, q2, cfg.constructive)
    if verdict.status is Status.UNKNOWN and cfg.search:
        ch = (dep.depolarizing_global(cfg.dims, q1) if cfg.q2_range is None
              else dep.depolarizing_local(cfg.dims, q1, q2))
        found = search_input_witness(ch, BlockPositiveWitnessSearch(seed=_cell_seed(cfg.seed, *index)))
        if found is not None:
            verdict = Classification(Criterion.EA, Status.CERTIFIED_NO, found.certificate,
                                     found.tolerance, "witness_no", found.seed)
    return verdict


def run_scan(cfg: ScanConfig) -> list[dict]:
    """Classify every grid cell; rows come back in grid order."""
    q1s = np.linspace(*cfg.q1_range, cfg.grid)
    if cfg.q2_range is None:
        cells = [((i,), float(q), None) for i, q in enumerate(q1s)]
    else:
        q2s = np.linspace(*cfg.q2_range, cfg.grid)
        cells = [((i, j), float(a), float(b)) for i, a in enumerate(q1s) for j, b in enumerate(q2s)]
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        verdicts = list(pool.map(lambda c: _scan_cell(cfg, *c), cells))
    rows = []
    for (_, a, b), v in zip(cells, verdicts):
        row = {"q": a} if b is None else {"q1": a, "q2": b}
        row.update(status=v.status.value, method=v.method)
        rows.append(row)
    return rows


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def format_rows(rows: list[dict], fmt: str, header_lines=()) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(SCHEMA + "\n")
    for line in header_lines:
        buf.write(f"# {line}\n")
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


# -- commands --------------------------------------------------------------

def cmd_check(args) -> int:
    try:
        ch = load_channel(args.channel)
    except FileNotFoundError as exc:
        raise InputError(f"cannot read {args.channel}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.channel}: invalid JSON ({exc})") from None
    except ChannelFormatError:
        raise
    except ValueError as exc:
        raise InputError(f"{args.channel}: {exc}") from None
    cfg = BlockPositiveWitnessSearch(seed=args.seed)
    report = {"dims_in": list(ch.dims_in), "dims_out": list(ch.dims_out)}
    verdicts = [is_cp(ch), is_tp(ch), is_unital(ch), eb_status(ch)]
    if ch.d_in == ch.d_out:
        verdicts.append(positivity_status(ch, cfg))
    bipartite = len(ch.dims_in) == 2 and len(ch.dims_out) == 2
    if bipartite and ch.dims_out[0] == ch.dims_in[0]:
        verdicts.append(pea_witness_search(ch, seed=args.seed))
    if bipartite:
        try:
            verdicts.append(ea_status(ch, cfg, search=args.search))
        except NotAChannelError as exc:
            report["EA"] = {"criterion": "EA", "status": "NOT_APPLICABLE", "reason": str(exc)}
    for v in verdicts:
        report[v.criterion.value] = v.to_dict()
    _emit(json.dumps(_jsonable(report), indent=1) + "\n", args.out)
    return 0


def _scan_config(args, global_scan: bool) -> ScanConfig:
    return ScanConfig(
        dims=args.dims,
        grid=args.grid,
        q1_range=args.q_range if global_scan else args.q1_range,
        q2_range=None if global_scan else args.q2_range,
        seed=args.seed,
        out=args.out,
        format=args.format,
        threads=args.threads,
        constructive=args.constructive,
        search=args.search,
    )


def cmd_scan(args, global_scan: bool) -> int:
    cfg = _scan_config(args, global_scan)
    rows = run_scan(cfg)
    header = [f"dims={cfg.dims} grid={cfg.grid} seed={cfg.seed} "
              f"constructive={int(cfg.constructive)} search={int(cfg.search)}"]
    _emit(format_rows(rows, cfg.format, header), cfg.out)
    return 0


def cmd_thresholds(args) -> int:
    if args.d_min < 2 or args.d_max < args.d_min:
        raise InputError("need 2 <= --d-min <= --d-max")
    table = {str(d): dep.thresholds(d).to_dict() for d in range(args.d_min, args.d_max + 1)}
    _emit(json.dumps(table, indent=1) + "\n", args.out)
    return 0


def cmd_robustness(args) -> int:
    if args.d < 2 or args.q_steps < 2:
        raise InputError("need --d >= 2 and --q-steps >= 2")
    qs = np.linspace(0.0, 1.0, args.q_steps)
    rows = []
    for q in qs:
        point = dep.robustness_curves(args.d, float(q))
        rows.append({"q": float(q), **{f"{c}_pt_min": getattr(point, f"{c}_pt_min") for c in dep.CURVES}})
    crossings = [f"crossing {c} {dep.crossing(c, args.d)!r}" for c in dep.CURVES]
    _emit(format_rows(rows, args.format, [f"d={args.d}"] + crossings), args.out)
    return 0


def cmd_optimize_3x2(args) -> int:
    search = dep.MatchingSearch(grid=args.grid)
    q = dep.max_certified_q(args.resolution, search)
    res = dep.global_resolution_3x2(q, search)
    report = {
        "max_certified_q": q,
        "exact_bound": 0.25,
        "bisection_resolution": args.resolution,
        "grid": args.grid,
        "resolution": res.summary(),
        "residual": res.residual(),
    }
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return 0


def cmd_qubit(args) -> int:
    t = LambdaTriple(*args.triple)
    _emit(json.dumps({"triple": list(t), **classify(t).to_dict()}, indent=1) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ea-atlas", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--out", help="write here instead of stdout")
        if fmt:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    c = sub.add_parser("check", help="classify a channel stored as JSON")
    c.add_argument("channel")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--no-search", dest="search", action="store_false",
                   help="skip the see-saw input search for EA")
    common(c, fmt=False)

    for name, global_scan in (("scan-local", False), ("scan-global", True)):
        s = sub.add_parser(name, help=f"{'global' if global_scan else 'local'} depolarizing region scan")
        s.add_argument("--dims", type=_dims, default=DimPair(2, 2))
        s.add_argument("--grid", type=int, default=50)
        if global_scan:
            s.add_argument("--q-range", type=_range, default=(0.0, 1.0))
        else:
            s.add_argument("--q1-range", type=_range, default=(0.0, 1.0))
            s.add_argument("--q2-range", type=_range, default=(0.0, 1.0))
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--threads", type=int, default=os.cpu_count() or 1)
        s.add_argument("--constructive", action="store_true",
                       help="ignore exact formulas; report constructive certificates only")
        s.add_argument("--search", action="store_true",
                       help="run the see-saw witness search on UNKNOWN cells")
        common(s)
        s.set_defaults(global_scan=global_scan)

    t = sub.add_parser("thresholds", help="closed-form threshold table as JSON")
    t.add_argument("--d-min", type=int, default=2)
    t.add_argument("--d-max", type=int, default=8)
    common(t, fmt=False)

    r = sub.add_parser("robustness", help="PT-minimal eigenvalue curves")
    r.add_argument("--d", type=int, default=3)
    r.add_argument("--q-steps", type=int, default=101)
    common(r)

    o = sub.add_parser("optimize-3x2", help="largest certified global qutrit-qubit noise")
    o.add_argument("--resolution", type=float, default=1e-3)
    o.add_argument("--grid", type=int, default=61)
    common(o, fmt=False)

    q = sub.add_parser("qubit", help="closed-form classification of a unital qubit triple")
    q.add_argument("triple", type=float, nargs=3)
    common(q, fmt=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "check": cmd_check,
        "scan-local": lambda a: cmd_scan(a, False),
        "scan-global": lambda a: cmd_scan(a, True),
        "thresholds": cmd_thresholds,
        "robustness": cmd_robustness,
        "optimize-3x2": cmd_optimize_3x2,
        "qubit": cmd_qubit,
    }
    try:
        return handlers[args.command](args)
    except (InputError, ChannelFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
