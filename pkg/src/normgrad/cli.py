"""Command line entry point.

    normgrad run --problem h2 --optimizer ngd --lr 0.05 --iters 1000 --out h2_ngd.csv
    normgrad run --config experiment.ini --optimizer ngdm --m 3 --out run.csv
    normgrad summarize h2_gd.csv h2_ngd.csv --threshold -0.25
    normgrad ground hamiltonian.txt

Failures exit nonzero after printing one JSON line ``{"error": ..., "message": ...}``
to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .pauli import ground_energy_exact, load_hamiltonian
from .runner import RunConfig, load_config, read_csv, run, summarize, write_csv

# CLI flag -> RunConfig field
_OVERRIDES = {
    "problem": "problem",
    "optimizer": "optimizer",
    "lr": "lr",
    "iters": "iters",
    "m": "m",
    "k": "k",
    "qubits": "qubits",
    "depth": "depth",
    "entanglement": "entanglement",
    "angle": "angle",
    "param_order": "param_order",
    "hamiltonian": "hamiltonian",
    "init": "init",
    "momentum": "momentum",
    "seed": "seed",
    "out": "out",
    "tolerance": "norm_tolerance",
}


def _error_line(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _error_line("UsageError", f"{self.prog}: {message}")
        self.exit(2)


def _parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="normgrad", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="optimize one problem and write the trace CSV")
    p.add_argument("--config", help="INI file with [problem], [optimizer], [run] sections")
    p.add_argument("--problem", choices=["narrow_gorge", "h2", "tfim", "file"])
    p.add_argument("--optimizer", help="gd, momentum, nag, adam, ngd, nnag, ngdm, ngd<m>")
    p.add_argument("--lr", type=float)
    p.add_argument("--iters", type=int)
    p.add_argument("--m", type=int, help="history length for ngdm")
    p.add_argument("--k", type=float, help="lower bound of the learning-rate QP")
    p.add_argument("--qubits", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--entanglement", choices=["linear", "full"])
    p.add_argument("--angle", choices=["half", "full"],
                   help="RY(theta) = exp(-i theta Y / 2) (half) or exp(-i theta Y) (full)")
    p.add_argument("--param-order", dest="param_order", choices=["layer", "qubit"],
                   help="number RY slots layer by layer or along each qubit's wire")
    p.add_argument("--hamiltonian", help="Pauli-list Hamiltonian file")
    p.add_argument("--init", help="zeros, pi/2, random or a comma-separated list")
    p.add_argument("--momentum", type=float)
    p.add_argument("--tolerance", type=float, help="gradient-norm tolerance")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--record-gradient-norm", action="store_true", default=None)
    p.add_argument("--timing", action="store_true", default=None,
                   help="fill the ms column with wall-clock time (breaks byte-identical reruns)")
    p.add_argument("--quiet", action="store_true")

    s = sub.add_parser("summarize", help="report final/best energies of trace CSVs")
    s.add_argument("csv", nargs="+")
    s.add_argument("--threshold", type=float, action="append", default=[])

    g = sub.add_parser("ground", help="exact ground energy of a Hamiltonian file")
    g.add_argument("hamiltonian")
    return parser


def _config_from_args(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    updates = {
        field: getattr(args, flag)
        for flag, field in _OVERRIDES.items()
        if getattr(args, flag) is not None
    }
    if args.record_gradient_norm:
        updates["record_gradient_norm"] = True
    if args.timing:
        updates["record_time"] = True
    config = dataclasses.replace(config, **updates).validate()
    if not config.out:
        raise ValueError("an output path is required (--out)")
    return config


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    trace = run(config)
    write_csv(trace, config.out)
    if not args.quiet:
        print(summarize([trace]), end="")
    return 0


def _cmd_summarize(args) -> int:
    traces = []
    for path in args.csv:
        trace = read_csv(path)
        trace.label = Path(path).stem
        traces.append(trace)
    print(summarize(traces, args.threshold), end="")
    return 0


def _cmd_ground(args) -> int:
    print(repr(ground_energy_exact(load_hamiltonian(args.hamiltonian))))
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    handler = {"run": _cmd_run, "summarize": _cmd_summarize, "ground": _cmd_ground}
    try:
        return handler[args.command](args)
    except Exception as exc:  # reported as one machine-readable line
        _error_line(type(exc).__name__, str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
