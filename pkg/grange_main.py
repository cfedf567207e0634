#!/usr/bin/env python3
# grange_main.py
"""
Command-line entry point.

  python grange_main.py range    [--config F] [--graph S] [--pair S] [--angles S] [--theta R] [--out D] [--format L]
  python grange_main.py spectrum [same flags]
  python grange_main.py eigvec   [same flags] [--k K] [--operator S|R]
  python grange_main.py verify   [same flags] [--samples N] [--seed N]
  python grange_main.py graph    [same flags]

Exit codes: 0 success, 1 validation failure (bad input, failed checks),
2 I/O error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
from typing import Callable, Dict, List, Optional

from scripts import cmd_eigvec, cmd_graph, cmd_range, cmd_spectrum, cmd_verify
from utils.errors import EXIT_OK, GraphRangeError, exit_code_for
from utils.logger import log, set_level
from utils.params import RunConfig

COMMANDS: Dict[str, Callable[[RunConfig], List[str]]] = {
    "range": cmd_range.run,
    "spectrum": cmd_spectrum.run,
    "eigvec": cmd_eigvec.run,
    "verify": cmd_verify.run,
    "graph": cmd_graph.run,
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI config file ([graph], [pair], [angles], [run])")
    p.add_argument("--graph", help="sensor:n,R,seed | fixture:bipartite|k4|path4 | csv:PATH | edges:PATH | PATH")
    p.add_argument("--radius", type=float, help="connection radius for csv point clouds")
    p.add_argument("--pair", help="auto | kind[:key=value,...]")
    p.add_argument("--angles", help="uniform:K | adaptive:tol,Kmax")
    p.add_argument("--theta", type=float, help="angle of R(theta) in radians")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", dest="formats", help="comma list of svg,csv,json")
    p.add_argument("--workers", type=int, help="threads for support-line evaluation")
    p.add_argument("--log-level", help="DEBUG, INFO, WARNING, ...")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grange", description="Uncertainty regions of graph localization operators")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        if name == "eigvec":
            p.add_argument("--k", type=int, help="1-based eigenvector index")
            p.add_argument("--operator", choices=("S", "R"), help="S or R(theta)")
        if name == "verify":
            p.add_argument("--samples", type=int, help="Monte-Carlo signals")
            p.add_argument("--seed", type=int, help="Monte-Carlo seed")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_level(args.log_level)
    overrides = {
        "graph": args.graph,
        "radius": args.radius,
        "pair": args.pair,
        "angles": args.angles,
        "theta": args.theta,
        "out": args.out,
        "formats": args.formats,
        "workers": args.workers,
        "k": getattr(args, "k", None),
        "operator": getattr(args, "operator", None),
        "samples": getattr(args, "samples", None),
        "seed": getattr(args, "seed", None),
    }
    try:
        cfg = RunConfig.resolve(args.config, **overrides)
        written = COMMANDS[args.command](cfg)
    except GraphRangeError as e:
        log.error(f"{args.command}: {e}")
        return e.exit_code
    except OSError as e:
        log.error(f"{args.command}: {e}")
        return exit_code_for(e)
    for path in written:
        log.info(f"wrote {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
