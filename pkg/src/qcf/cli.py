"""qcf command line: protocol runs, QFT verification, and the gate-cost bench.

Every run echoes its seed, and a repeated invocation with the same arguments
and seed emits byte-identical output (bench wall-clock columns excepted).
Exit codes: 0 success, 1 internal invariant failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import os
import secrets
import sys

import numpy as np

from qcf.bench import bench_local_vs_dense
from qcf.errors import ConfigurationError, DomainError, InvariantError, ResourceError
from qcf.protocols import ZenoConfig, run_protocol_exact, run_protocol_sampled
from qcf.qft import expected_gate_count, gate_vs_fft_counts, verify_qft
from qcf.reports import QftVerifyReport, emit_report

USAGE_EXIT = 2
INVARIANT_EXIT = 1


def _add_common(parser: argparse.ArgumentParser, sampling: bool = True) -> None:
    if sampling:
        parser.add_argument("--mode", choices=["exact", "sample"], default="exact")
        parser.add_argument("--trials", type=int, default=10_000,
                            help="sample-mode histories (default 10000)")
    parser.add_argument("--seed", type=int, default=None,
                        help="rng seed; defaults to QCF_SEED or fresh entropy")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    parser.set_defaults(fmt="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcf", description="Counterfactual-computation protocol simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    mz = sub.add_parser("mz", help="Mach-Zehnder interferometer")
    mz.add_argument("--detector", action="store_true",
                    help="place a which-path detector in the lower arm")
    _add_common(mz)

    basic = sub.add_parser("basic", help="single-shot counterfactual scheme")
    basic.add_argument("--r", type=int, choices=[0, 1], required=True,
                       help="answer of the decision problem")
    _add_common(basic)

    zeno = sub.add_parser("zeno", help="multi-stage watched-pot scheme")
    zeno.add_argument("--r", type=int, choices=[0, 1], required=True)
    stages = zeno.add_mutually_exclusive_group(required=True)
    stages.add_argument("--N", type=int, dest="stages", help="stage count")
    stages.add_argument("--epsilon", type=float,
                        help="target failure probability; picks the smallest sufficient N")
    zeno.add_argument("--restart-cap", type=int, default=1000,
                      help="sample-mode restarts allowed per trial")
    _add_common(zeno)

    qft = sub.add_parser("qft-verify", help="check the QFT circuit against the FFT oracle")
    qft.add_argument("--n", type=int, required=True, help="qubit count")
    qft.add_argument("--trials", type=int, default=20)
    qft.add_argument("--seed", type=int, default=None)
    fmt = qft.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    qft.set_defaults(fmt="text")

    bench = sub.add_parser("bench", help="local vs dense gate-cost benchmark")
    bench.add_argument("--n-max", type=int, default=10)
    bench.add_argument("--k-max", type=int, default=3)
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--compare-backends", action="store_true",
                       help="time every available kernel backend")
    bench.add_argument("--seed", type=int, default=None)
    fmt = bench.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    bench.set_defaults(fmt="text")

    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QCF_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"QCF_SEED must be an integer, got {env!r}") from None
    return secrets.randbits(63)


def _run_protocol_command(args, protocol: str, seed: int):
    kwargs = {}
    if protocol == "mz":
        kwargs["detector_present"] = args.detector
    else:
        kwargs["r"] = args.r
    if protocol == "zeno":
        kwargs["config"] = (
            ZenoConfig(args.stages) if args.stages is not None
            else ZenoConfig.for_failure_probability(args.epsilon)
        )
    if args.mode == "exact":
        return run_protocol_exact(protocol, seed=seed, **kwargs)
    if protocol == "zeno":
        kwargs["restart_cap"] = args.restart_cap
    return run_protocol_sampled(protocol, seed=seed, trials=args.trials, **kwargs)


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        seed = _resolve_seed(args)
        if args.command in ("mz", "basic", "zeno"):
            report = _run_protocol_command(args, args.command, seed)
        elif args.command == "qft-verify":
            rng = np.random.default_rng(seed)
            report = QftVerifyReport(
                num_qubits=args.n,
                trials=args.trials,
                seed=seed,
                gate_count=expected_gate_count(args.n),
                max_error=verify_qft(args.n, args.trials, rng),
                counts_table=gate_vs_fft_counts(),
            )
        else:
            report = bench_local_vs_dense(
                range(2, args.n_max + 1),
                range(1, args.k_max + 1),
                reps=args.reps,
                seed=seed,
                compare_backends=args.compare_backends,
            )
        payload = emit_report(report, args.fmt)
    except (ConfigurationError, DomainError, ResourceError) as exc:
        print(f"qcf: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except InvariantError as exc:
        print(f"qcf: internal invariant failure: {exc}", file=sys.stderr)
        return INVARIANT_EXIT
    sys.stdout.buffer.write(payload)
    sys.stdout.buffer.flush()
    return 0


def main() -> None:
    sys.exit(run_cli())
