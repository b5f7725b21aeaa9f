"""Command-line front end.

    causalprobe curve    --d 2 --n 1 --n-max 12 --strategy classical --strategy reference
    causalprobe verify   [--tolerance 1e-6]
    causalprobe simulate --d 2 --n 2 --trials 1000000 --seed 7
    causalprobe claim    --d 2 --threshold 1e-6
    causalprobe info     --d 2 --n 4

Data go to ``--out`` (``-`` is standard output); diagnostics go to stderr.
Exit codes: 0 success, 1 verification failure, 2 usage or feasibility error.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field

from . import __version__
from . import formulas as fm
from .combinat import multiplicity, partition_count
from .discrimination import check_classical_feasible, classical_error_for_inputs, monte_carlo_classical
from .quantum import Rng
from .verify import FAULTS, Checker

STRATEGIES = ("classical", "coherent", "singlet", "reference", "seq_bound", "indefinite_bound")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    d: int = 2
    n_min: int = 1
    n_max: int = 1
    n_step: int = 1
    strategies: list = field(default_factory=list)
    seed: int = 0
    trials: int = 100_000
    output_path: str = "-"
    threshold: float = 1e-6
    tolerance: float | None = None
    fault: str | None = None

    @property
    def n_range(self) -> range:
        return range(self.n_min, self.n_max + 1, self.n_step)


def fmt(x) -> str:
    """Shortest round-trip representation of a float."""
    x = float(x)
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return repr(x)


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.output_path == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


_CURVE = {
    "classical": (fm.p_classical, fm.log2_p_classical),
    "coherent": (fm.p_coherent, fm.log2_p_coherent),
    "singlet": (fm.p_singlet, fm.log2_p_singlet),
    "reference": (fm.p_reference, fm.log2_p_reference),
    "seq_bound": (fm.seq_lower_bound, fm.log2_seq_lower_bound),
    "indefinite_bound": (fm.indefinite_lower_bound, fm.log2_indefinite_lower_bound),
}


def cmd_curve(cfg: RunConfig) -> int:
    strategies = cfg.strategies or list(STRATEGIES)
    for s in strategies:
        if s not in _CURVE:
            raise UsageError(f"unknown strategy {s!r}; choose from {', '.join(STRATEGIES)}")
    out = io.StringIO()
    out.write("n,d,strategy,p_err,log2_p_err\n")
    for s in sorted(set(strategies)):
        p_fn, log_fn = _CURVE[s]
        for n in cfg.n_range:
            try:
                p, lp = p_fn(n, cfg.d), log_fn(n, cfg.d)
            except ValueError as exc:
                _warn(f"{s} omitted at n={n}: {exc}")
                continue
            out.write(f"{n},{cfg.d},{s},{fmt(p)},{fmt(lp)}\n")
    _write(cfg, out.getvalue())
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    checker = Checker(tolerance=cfg.tolerance, fault=cfg.fault, seed=cfg.seed)
    out = io.StringIO()
    failed = 0
    for check in checker.run():
        out.write(check.line() + "\n")
        failed += not check.passed
    out.write(f"{'ALL PASS' if not failed else f'{failed} FAILED'}\n")
    _write(cfg, out.getvalue())
    return 0 if not failed else 1


def cmd_simulate(cfg: RunConfig) -> int:
    if cfg.trials < 100:
        raise UsageError("simulate needs --trials >= 100")
    out = io.StringIO()
    out.write("n,d,inputs_pattern,trials,p_hat,std_err,p_closed_form,z_score\n")
    root = Rng(cfg.seed)
    for n in cfg.n_range:
        try:
            check_classical_feasible(cfg.d, n)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        inputs = (0,) * n
        r = monte_carlo_classical(cfg.d, n, inputs, cfg.trials, root.fork(n))
        exact = float(classical_error_for_inputs(inputs, cfg.d))
        se = r.diagnostics["std_err"]
        diff = r.error_probability - exact
        z = diff / se if se > 0 else (0.0 if diff == 0 else math.copysign(math.inf, diff))
        pattern = "_".join(map(str, inputs))
        out.write(f"{n},{cfg.d},{pattern},{cfg.trials},{fmt(r.error_probability)},{fmt(se)},"
                  f"{fmt(exact)},{fmt(z)}\n")
    _write(cfg, out.getvalue())
    return 0


def claim_numbers(d: int, threshold: float) -> dict:
    q, pq = fm.min_interrogations(fm.log2_p_reference_padded, d, threshold)
    c, pc = fm.min_interrogations(fm.log2_p_classical, d, threshold)
    return {"quantum_n": q, "quantum_p": pq, "classical_n": c, "classical_p": pc}


def cmd_claim(cfg: RunConfig) -> int:
    r = claim_numbers(cfg.d, cfg.threshold)
    text = (f"d={cfg.d} threshold={fmt(cfg.threshold)}\n"
            f"quantum_n={r['quantum_n']} p_err={fmt(r['quantum_p'])}\n"
            f"classical_n={r['classical_n']} p_err={fmt(r['classical_p'])}\n")
    _write(cfg, text)
    return 0


def cmd_info(cfg: RunConfig) -> int:
    lines = [f"causalprobe {__version__}", f"d={cfg.d}",
             f"rate classical={fmt(fm.decay_rate_closed('classical', cfg.d))}",
             f"rate reference={fmt(fm.decay_rate_closed('reference', cfg.d))}"]
    for n in cfg.n_range:
        if n % cfg.d == 0:
            lines.append(f"n={n} groupings={partition_count(n, cfg.d)} multiplicity={multiplicity(n, cfg.d)}")
    _write(cfg, "\n".join(lines) + "\n")
    return 0


COMMANDS = {"curve": cmd_curve, "verify": cmd_verify, "simulate": cmd_simulate,
            "claim": cmd_claim, "info": cmd_info}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=2, help="system dimension (default 2)")
    common.add_argument("--n", type=int, default=None, help="first number of interrogations")
    common.add_argument("--n-max", type=int, default=None, help="last number of interrogations (inclusive)")
    common.add_argument("--n-step", type=int, default=1)
    common.add_argument("--strategy", action="append", default=[], help=f"one of {', '.join(STRATEGIES)}")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--trials", type=int, default=100_000)
    common.add_argument("--out", default="-", help="output file, '-' for stdout")
    common.add_argument("--threshold", type=float, default=1e-6)
    common.add_argument("--tolerance", type=float, default=None, help="loosen verify tolerances to at least this")
    common.add_argument("--fault-inject", choices=FAULTS, default=None, help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="causalprobe", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args) -> RunConfig:
    defaults = {"curve": (1, 12), "simulate": (2, 2), "info": (1, 12)}
    lo_default, hi_default = defaults.get(args.command, (1, 1))
    n_min = args.n if args.n is not None else lo_default
    n_max = args.n_max if args.n_max is not None else (n_min if args.n is not None else hi_default)
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    if n_min < 1 or n_max < n_min or args.n_step < 1:
        raise UsageError(f"empty n range {n_min}..{n_max} step {args.n_step}")
    return RunConfig(args.command, args.d, n_min, n_max, args.n_step, list(args.strategy), args.seed,
                     args.trials, args.out, args.threshold, args.tolerance, args.fault_inject)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
