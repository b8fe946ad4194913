"""Report, trace and gate-check serialization shared by the CLI."""
from __future__ import annotations

import csv
import io
import json
from typing import Any

from .attack import AttackReport, AttackTrace, bits_str

SIG_DIGITS = 12


def fmt_float(x: float) -> str:
    s = format(float(x), f".{SIG_DIGITS}g")
    return "0" if s == "-0" else s


def canonical_float(x: float) -> float:
    v = float(fmt_float(x))
    return 0.0 if v == 0 else v


def _canon(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return canonical_float(obj)
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    if hasattr(obj, "item"):
        return _canon(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, floats cut to 12 significant digits."""
    return json.dumps(_canon(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def top_distribution(dist: dict[int, float], limit: int = 10) -> list[tuple[int, float]]:
    ranked = sorted(dist.items(), key=lambda kv: (-canonical_float(kv[1]), kv[0]))
    return ranked[:limit]


def report_dict(report: AttackReport) -> dict:
    plan = report.plan
    spec = plan.spec
    return {
        "generator": spec.name,
        "params": dict(spec.params),
        "bits": bits_str(plan.observed_bits),
        "n_qubits": plan.n,
        "m": plan.m,
        "k": plan.k,
        "theta": plan.theta,
        "predicted_success": plan.predicted_success,
        "distribution": [{"outcome": x, "probability": p}
                         for x, p in top_distribution(report.distribution)],
        "top_outcome": report.top_outcome,
        "top_probability": report.top_probability,
        "sampled_outcome": report.sampled_outcome,
        "classical_seeds": sorted(report.classical_consistent_seeds),
        "recovered_states": [{"offset": off, "state": s, "bit": b}
                             for off, s, b in report.recovered_states.chain],
        "agreement": report.agreement,
    }


def report_text(report: AttackReport) -> str:
    d = report_dict(report)
    spec = report.plan.spec
    lines = [
        f"generator: {d['generator']} {' '.join(f'{k}={v}' for k, v in d['params'].items())}",
        f"observed bits: {d['bits']}",
        f"domain qubits n={d['n_qubits']}  bit qubits m={d['m']}  iterations k={d['k']}",
        f"theta: {fmt_float(d['theta'])} rad",
        f"predicted success: {fmt_float(d['predicted_success'])}",
        "distribution (top 10):",
    ]
    for row in d["distribution"]:
        lines.append(f"  {row['outcome']:>4} {spec.label(row['outcome']):>8}  {fmt_float(row['probability'])}")
    lines += [
        f"top outcome: {d['top_outcome']} ({spec.label(d['top_outcome'])}) "
        f"with probability {fmt_float(d['top_probability'])}",
        f"sampled outcome: {d['sampled_outcome']}",
        f"classical seeds: {{{', '.join(map(str, d['classical_seeds']))}}}",
        "recovered states:",
    ]
    for row in d["recovered_states"]:
        lines.append(f"  {row['offset']:+d} state={row['state']} bit={row['bit']}")
    lines.append(f"agreement: {'yes' if d['agreement'] else 'no'}")
    return "\n".join(lines) + "\n"


def _flatten(prefix: str, obj: Any, rows: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, rows)
    elif isinstance(obj, float):
        rows.append((prefix, fmt_float(obj)))
    elif isinstance(obj, bool):
        rows.append((prefix, "true" if obj else "false"))
    else:
        rows.append((prefix, str(obj)))


def to_csv(obj: dict) -> str:
    rows: list = []
    _flatten("", obj, rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    return buf.getvalue()


def _amp(x: float) -> str:
    # floating-point residue below this is not a real amplitude
    return fmt_float(0.0 if abs(x) < 1e-14 else x)


def trace_text(trace: AttackTrace) -> str:
    lines = []
    for snap in trace.snapshots:
        lines.append(f"{snap.label} {snap.gate}")
        for e in snap.entries:
            amp = f"{_amp(e.amplitude.real)},{_amp(e.amplitude.imag)}"
            lines.append(f"domain={e.domain} bits={e.bits} ancilla={e.ancilla} amp={amp}")
        lines.append("")
    for i, (cands, marked) in enumerate(zip(trace.candidates, trace.marked_values), start=1):
        lines.append(f"X{i} = {{{','.join(map(str, sorted(cands)))}}}")
        lines.append(f"marked{i} = {{{','.join(map(str, sorted(marked)))}}}")
    return "\n".join(lines) + "\n"

