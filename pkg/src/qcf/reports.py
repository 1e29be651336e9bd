"""Deterministic report serialization (json, csv, text).

Identical reports serialize to identical bytes: keys are emitted in fixed
order and probabilities are rounded to 12 significant digits before encoding.
CSV is defined for bench reports only.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from qcf.bench import CSV_HEADER, BenchReport
from qcf.errors import DomainError
from qcf.protocols import ProtocolReport

FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class QftVerifyReport:
    num_qubits: int
    trials: int
    seed: int | None
    gate_count: int
    max_error: float
    counts_table: tuple[tuple[int, int, int], ...] = ()   # (n, circuit gates, fft mults)


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def _protocol_dict(report: ProtocolReport) -> dict:
    out: dict = {
        "protocol": report.protocol,
        "r": report.r,
        "mode": report.mode,
        "seed": report.seed,
    }
    if report.detector_present is not None:
        out["detector"] = report.detector_present
    if report.stages is not None:
        out["N"] = report.stages
    if report.p_keep_all is not None:
        out["p_keep_all"] = _sig12(report.p_keep_all)
    if report.trials is not None:
        out["trials"] = report.trials
    out["outcomes"] = [
        {
            "labels": dict(o.labels),
            ("probability" if o.probability is not None else "count"): (
                _sig12(o.probability) if o.probability is not None else o.count
            ),
            "class": o.outcome_class.value,
            "computation_ran": o.computation_ran,
        }
        for o in report.outcomes
    ]
    out["counterfactual_free_probability"] = _sig12(report.counterfactual_free_probability)
    if report.restarts is not None:
        out["restarts"] = report.restarts
        out["restart_computation_ran"] = report.restart_computation_ran
    if report.would_have_exploded is not None:
        out["would_have_exploded"] = report.would_have_exploded
    return out


def _compact_labels(labels: dict[str, str]) -> str:
    """Render a record, collapsing runs like out_1=0 ... out_9=0 to out_1..9=0."""
    parts: list[str] = []
    items = list(labels.items())
    i = 0
    while i < len(items):
        key, value = items[i]
        prefix, _, index = key.rpartition("_")
        j = i
        if prefix and index.isdigit():
            while (
                j + 1 < len(items)
                and items[j + 1][1] == value
                and items[j + 1][0] == f"{prefix}_{int(index) + (j + 1 - i)}"
            ):
                j += 1
        if j > i:
            parts.append(f"{prefix}_{index}..{int(index) + (j - i)}={value}")
        else:
            parts.append(f"{key}={value}")
        i = j + 1
    return " ".join(parts)


def _protocol_text(report: ProtocolReport) -> str:
    head = f"protocol: {report.protocol}  mode: {report.mode}"
    if report.r is not None:
        head += f"  r={report.r}"
    if report.detector_present is not None:
        head += f"  detector={'yes' if report.detector_present else 'no'}"
    if report.stages is not None:
        head += f"  N={report.stages}"
    head += f"  seed={report.seed}"
    lines = [head]
    value_col = "probability" if report.mode == "exact" else "count"
    names = [_compact_labels(o.labels) for o in report.outcomes]
    width = max(24, *(len(name) for name in names)) if names else 24
    lines.append(f"{'outcome':<{width}} {value_col:>16} {'class':<20} ran")
    for o, name in zip(report.outcomes, names):
        value = f"{_sig12(o.probability):.12g}" if o.probability is not None else str(o.count)
        lines.append(
            f"{name:<{width}} {value:>16} {o.outcome_class.value:<20} {'yes' if o.computation_ran else 'no'}"
        )
    if report.p_keep_all is not None:
        lines.append(f"keep-all probability: {_sig12(report.p_keep_all):.12g}")
    lines.append(
        f"counterfactual free probability: {_sig12(report.counterfactual_free_probability):.12g}"
    )
    if report.restarts is not None:
        lines.append(
            f"restarts: {report.restarts} (computation ran in a discarded attempt: "
            f"{'yes' if report.restart_computation_ran else 'no'})"
        )
    if report.would_have_exploded is not None:
        lines.append(f"would have exploded: {'yes' if report.would_have_exploded else 'no'}")
    return "\n".join(lines) + "\n"


def _bench_dict(report: BenchReport) -> dict:
    return {
        "command": "bench",
        "seed": report.seed,
        "backend": report.backend,
        "rows": [
            {
                "n": row.n,
                "k": row.k,
                "method": row.method,
                "complex_mults": row.complex_mults,
                "wall_nanos": row.wall_nanos,
                "reps": row.reps,
                **({"ratio": _sig12(row.ratio)} if row.ratio is not None else {}),
                **({"skipped": True} if row.skipped else {}),
            }
            for row in report.rows
        ],
    }


def _bench_csv(report: BenchReport) -> str:
    lines = [CSV_HEADER]
    for row in report.rows:
        if row.skipped:
            continue
        lines.append(
            f"{row.n},{row.k},{row.method},{row.complex_mults},{row.wall_nanos},{row.reps}"
        )
    return "\n".join(lines) + "\n"


def _bench_text(report: BenchReport) -> str:
    lines = [f"gate-cost benchmark  backend={report.backend}  seed={report.seed}"]
    lines.append(f"{'n':>3} {'k':>3} {'method':<14} {'complex_mults':>14} {'wall_nanos':>12} {'reps':>5} {'ratio':>12}")
    for row in report.rows:
        wall = "skipped" if row.skipped else str(row.wall_nanos)
        ratio = f"{row.ratio:.6g}" if row.ratio is not None else ""
        lines.append(
            f"{row.n:>3} {row.k:>3} {row.method:<14} {row.complex_mults:>14} {wall:>12} {row.reps:>5} {ratio:>12}"
        )
    return "\n".join(lines) + "\n"


def _qft_dict(report: QftVerifyReport) -> dict:
    out = {
        "command": "qft-verify",
        "n": report.num_qubits,
        "trials": report.trials,
        "seed": report.seed,
        "gate_count": report.gate_count,
        "max_error": _sig12(report.max_error),
    }
    if report.counts_table:
        out["counts"] = [
            {"n": n, "circuit_gates": gates, "fft_mults": mults}
            for n, gates, mults in report.counts_table
        ]
    return out


def _qft_text(report: QftVerifyReport) -> str:
    lines = [
        f"qft verification  n={report.num_qubits}  trials={report.trials}  seed={report.seed}",
        f"gate count: {report.gate_count}",
        f"max |simulator - oracle| amplitude error: {_sig12(report.max_error):.12g}",
    ]
    if report.counts_table:
        lines.append("")
        lines.append(f"{'n':>3} {'circuit_gates':>14} {'fft_mults':>12}")
        for n, gates, mults in report.counts_table:
            lines.append(f"{n:>3} {gates:>14} {mults:>12}")
        lines.append("(gate counts include the output-ordering swaps)")
    return "\n".join(lines) + "\n"


def emit_report(report, fmt: str) -> bytes:
    """Serialize a report; raises DomainError for unsupported (report, format) pairs."""
    if fmt not in FORMATS:
        raise DomainError(f"unknown format {fmt!r}")
    if isinstance(report, ProtocolReport):
        if fmt == "json":
            text = json.dumps(_protocol_dict(report), indent=2) + "\n"
        elif fmt == "text":
            text = _protocol_text(report)
        else:
            raise DomainError("csv output is only defined for bench reports")
    elif isinstance(report, BenchReport):
        if fmt == "json":
            text = json.dumps(_bench_dict(report), indent=2) + "\n"
        elif fmt == "csv":
            text = _bench_csv(report)
        else:
            text = _bench_text(report)
    elif isinstance(report, QftVerifyReport):
        if fmt == "json":
            text = json.dumps(_qft_dict(report), indent=2) + "\n"
        elif fmt == "text":
            text = _qft_text(report)
        else:
            raise DomainError("csv output is only defined for bench reports")
    else:
        raise DomainError(f"cannot serialize {type(report).__name__}")
    return text.encode("utf-8")
