"""Command-line front end.

Exit codes: 0 success, 2 bad parameters, 3 quantum/classical disagreement,
4 resource limit, 5 I/O failure.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .attack import bits_str, consistent_seeds_bruteforce, execute_attack
from .generators import (
    Affine,
    BbsParams,
    ConstructionError,
    CurveParams,
    GeneratorSpec,
    ParameterError,
    bbs_spec,
    default_generator,
    generate_bits,
    kaliski_spec,
)
from .serialize import dumps, fmt_float, report_dict, report_text, to_csv, trace_text
from .statevec import (
    NORM_TOL,
    ResourceError,
    gate_matrix_from_predicate,
    gate_matrix_from_table,
    unitarity_deviation,
)

EXIT_OK, EXIT_PARAM, EXIT_DISAGREE, EXIT_RESOURCE, EXIT_IO = 0, 2, 3, 4, 5

DEFAULTS = {
    "gen": "bbs",
    "j": None,
    "rng_seed": 0,
    "format": "text",
    "steps": 0,
    "solutions": 1,
}

_INT_KEYS = {"modulus", "j", "prime", "c", "qx", "qy", "seed_state", "steps",
             "rng_seed", "solutions", "qubit_cap"}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def read_config(path: str) -> dict:
    """``key=value`` lines; blank lines and ``#`` comments ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_IO) from exc
    cfg = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key=value", EXIT_PARAM)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key in _INT_KEYS:
            try:
                value = int(value)
            except ValueError:
                raise CliError(f"{path}:{lineno}: {key} must be an integer", EXIT_PARAM)
        cfg[key] = value
    return cfg


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--gen", choices=["bbs", "kaliski"])
    common.add_argument("--modulus", type=int, help="BBS modulus M")
    common.add_argument("--j", type=int, help="BBS output bit position, 1 = MSB (default: lsb)")
    common.add_argument("--prime", type=int, help="Kaliski field prime p")
    common.add_argument("--c", type=int, help="Kaliski curve coefficient c")
    common.add_argument("--qx", type=int, help="Kaliski generator point x")
    common.add_argument("--qy", type=int, help="Kaliski generator point y")
    common.add_argument("--bits", help="observed output bits, e.g. 10")
    common.add_argument("--rng-seed", type=int)
    common.add_argument("--format", choices=["text", "json", "csv"])
    common.add_argument("--trace-out", help="write the state trace to this path")
    common.add_argument("--solutions", type=int, help="assumed number of consistent seeds")
    common.add_argument("--qubit-cap", type=int, help="maximum total qubits")

    parser = argparse.ArgumentParser(
        prog="bmattack",
        description="Quantum permanent-compromise attack on BBS and Kaliski generators.")
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", parents=[common], help="run the classical generator")
    gen.add_argument("--seed-state", type=int, help="starting internal state encoding")
    gen.add_argument("--steps", type=int)
    sub.add_parser("attack", parents=[common], help="run the quantum attack")
    sub.add_parser("trace", parents=[common], help="write the labeled state trace")
    sub.add_parser("bruteforce", parents=[common], help="classical exhaustive search")
    sub.add_parser("verify-gates", parents=[common], help="check gate unitarity")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config))
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command"):
            cfg[key] = value
    return cfg


def build_spec(cfg: dict) -> GeneratorSpec:
    kind = cfg.get("gen")
    if kind == "bbs":
        if cfg.get("prime") is not None or cfg.get("qx") is not None:
            raise ParameterError("Kaliski parameters given for a BBS generator")
        if cfg.get("modulus") is None:
            raise ParameterError("--modulus is required for bbs")
        M = cfg["modulus"]
        j = cfg["j"] if cfg.get("j") is not None else (M - 1).bit_length()
        return bbs_spec(BbsParams(M, j))
    if kind == "kaliski":
        if cfg.get("modulus") is not None:
            raise ParameterError("--modulus given for a Kaliski generator")
        if cfg.get("prime") is None or cfg.get("c") is None:
            raise ParameterError("--prime and --c are required for kaliski")
        curve = CurveParams(cfg["prime"], cfg["c"])
        qx, qy = cfg.get("qx"), cfg.get("qy")
        if (qx is None) != (qy is None):
            raise ParameterError("--qx and --qy must be given together")
        Q = default_generator(curve) if qx is None else Affine(qx, qy)
        return kaliski_spec(curve, Q)
    raise ParameterError(f"unknown generator kind {kind!r}")


def _emit(obj: dict, text: str, fmt: str, out):
    if fmt == "json":
        out.write(dumps(obj))
    elif fmt == "csv":
        out.write(to_csv(obj))
    else:
        out.write(text)


def _write_trace(path: str, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(f"cannot write trace to {path}: {exc}", EXIT_IO) from exc


def cmd_generate(cfg: dict, out) -> int:
    spec = build_spec(cfg)
    if cfg.get("seed_state") is None:
        raise ParameterError("--seed-state is required")
    bits, states = generate_bits(spec, cfg["seed_state"], cfg["steps"])
    obj = {"states": states, "bits": bits_str(bits)}
    text = f"states: {' '.join(map(str, states))}\nbits: {obj['bits']}\n"
    _emit(obj, text, cfg["format"], out)
    return EXIT_OK


def _require_bits(cfg: dict) -> str:
    if not cfg.get("bits"):
        raise ParameterError("--bits is required")
    return cfg["bits"]


def _cap_kwargs(cfg: dict) -> dict:
    return {"qubit_cap": cfg["qubit_cap"]} if cfg.get("qubit_cap") else {}


def cmd_attack(cfg: dict, out) -> int:
    spec = build_spec(cfg)
    report = execute_attack(spec, _require_bits(cfg), cfg["rng_seed"],
                            assumed_solutions=cfg["solutions"], **_cap_kwargs(cfg))
    _emit(report_dict(report), report_text(report), cfg["format"], out)
    if cfg.get("trace_out"):
        _write_trace(cfg["trace_out"], trace_text(report.trace))
    return EXIT_OK if report.agreement else EXIT_DISAGREE


def cmd_trace(cfg: dict, out) -> int:
    spec = build_spec(cfg)
    report = execute_attack(spec, _require_bits(cfg), cfg["rng_seed"],
                            assumed_solutions=cfg["solutions"], **_cap_kwargs(cfg))
    text = trace_text(report.trace)
    if cfg.get("trace_out"):
        _write_trace(cfg["trace_out"], text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_bruteforce(cfg: dict, out) -> int:
    spec = build_spec(cfg)
    start = time.perf_counter()
    seeds = sorted(consistent_seeds_bruteforce(spec, _require_bits(cfg)))
    elapsed = time.perf_counter() - start
    obj = {"bits": cfg["bits"], "seeds": seeds, "elapsed_seconds": elapsed}
    text = (f"consistent first states: {{{', '.join(map(str, seeds))}}}\n"
            f"elapsed: {fmt_float(elapsed)} s\n")
    _emit(obj, text, cfg["format"], out)
    return EXIT_OK


def gate_checks(spec: GeneratorSpec) -> list[dict]:
    """Explicit matrices for rho and both predicate-flip gates, with unitarity."""
    checks = []
    gates = [("rho", gate_matrix_from_table(spec.permutation),
              gate_matrix_from_table(spec.permutation, orientation="row"))]
    for b in (0, 1):
        G = gate_matrix_from_predicate(spec.marked(b), spec.size)
        gates.append((f"delta_{b}", G, G.T))
    for name, G, rows in gates:
        dev = unitarity_deviation(G)
        checks.append({
            "name": name,
            "dim": G.shape[0],
            "max_deviation": dev,
            "unitary": dev <= NORM_TOL,
            "rows": np.real(rows).astype(int).tolist(),
        })
    return checks


def cmd_verify_gates(cfg: dict, out) -> int:
    spec = build_spec(cfg)
    checks = gate_checks(spec)
    ok = all(c["unitary"] for c in checks)
    obj = {"generator": spec.name, "params": dict(spec.params), "orientation": "row",
           "gates": checks, "all_unitary": ok}
    lines = [f"{c['name']}: {c['dim']}x{c['dim']} max |G G^+ - I| = {fmt_float(c['max_deviation'])} "
             f"{'ok' if c['unitary'] else 'FAIL'}" for c in checks]
    if cfg["format"] == "csv":
        obj = {k: v for k, v in obj.items() if k != "gates"} | {
            "gates": [{k: v for k, v in c.items() if k != "rows"} for c in checks]}
    _emit(obj, "\n".join(lines) + "\n", cfg["format"], out)
    return EXIT_OK if ok else EXIT_PARAM


COMMANDS = {
    "generate": cmd_generate,
    "attack": cmd_attack,
    "trace": cmd_trace,
    "bruteforce": cmd_bruteforce,
    "verify-gates": cmd_verify_gates,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ParameterError, ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
