"""Command-line front end.

    qoracle encode --poly "2*x0 + x1 - 5*x2 + 2*x3" --out-ppm zero_sum.ppm
    qoracle count  --subset 2,1,-5,2 --m-result 6
    qoracle fib    --n 5 --method heuristic --out-csv fib5.csv
    qoracle search --poly "x0 - x1" --match 0 --num-solutions 2

Exit codes: 0 success, 2 usage or parse error, 3 resource guard.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import amplify, problems, viz
from .errors import ParseError, ResourceError, ValidationError
from .qdict import PolynomialSpec, encode, layout_for, parse_polynomial
from .simcore import MAX_QUBITS, bitstring, init_zero, nonzero_support, sample

log = logging.getLogger("qoracle")

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE = 0, 2, 3


@dataclass
class RunConfig:
    command: str
    seed: int = 7
    shots: int = 1024
    m_result: int = 5
    m_value: int | None = None
    unsigned: bool = False
    signed_rows: bool = False
    scale: int = 16
    out_state: Path | None = None
    out_ppm: Path | None = None
    out_csv: Path | None = None

    def validate(self):
        if self.shots < 1:
            raise ValidationError("--shots must be >= 1")
        if self.scale < 1:
            raise ValidationError("--scale must be >= 1")
        if not 1 <= self.m_result <= amplify.MAX_RESULT_QUBITS:
            raise ResourceError(f"--m-result must be in [1, {amplify.MAX_RESULT_QUBITS}]")
        if self.m_value is not None and self.m_value < 1:
            raise ValidationError("--m-value must be >= 1")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
        cfg = cls(args.command, args.seed, args.shots, get("m_result", 5), get("m_value"),
                  get("unsigned", False), get("signed_rows", False), get("scale", 16),
                  get("out_state"), get("out_ppm"), get("out_csv"))
        cfg.validate()
        return cfg


def _guard(total_qubits: int):
    if total_qubits > MAX_QUBITS:
        raise ResourceError(f"{total_qubits} qubits exceeds the {MAX_QUBITS}-qubit budget")


def load_poly(args: argparse.Namespace) -> PolynomialSpec:
    if args.poly is not None:
        return parse_polynomial(args.poly, args.n)
    if args.poly_json is not None:
        return PolynomialSpec.from_json(Path(args.poly_json).read_text())
    if args.subset is not None:
        try:
            values = [int(t) for t in args.subset.split(",")]
        except ValueError as exc:
            raise ValidationError(f"--subset must be comma-separated integers: {exc}") from None
        return problems.subset_sum_poly(values, args.target)
    if args.fib is not None:
        return problems.fib_canonical_poly(args.fib)
    raise ValidationError("give one of --poly, --poly-json, --subset, --fib")


def cmd_encode(args, cfg: RunConfig) -> int:
    poly = load_poly(args)
    layout = layout_for(poly, cfg.m_value, cfg.unsigned)
    _guard(layout.total_qubits)
    enc = encode(poly, layout, allow_aliasing=args.allow_aliasing)
    kind = "unsigned" if cfg.unsigned else "signed"
    print(f"layout: n={layout.key_qubits} m={layout.value_qubits} ({kind})")
    print("value,keys")
    for value, count in enc.value_counts().items():
        print(f"{value},{count}")
    if cfg.out_state:
        viz.write_atomic(cfg.out_state, enc.state.to_json())
    if cfg.out_ppm:
        img = viz.render_state(enc, cfg.signed_rows)
        viz.write_atomic(cfg.out_ppm, img.to_ppm(cfg.scale))
    return EXIT_OK


def cmd_count(args, cfg: RunConfig) -> int:
    poly = load_poly(args)
    layout = layout_for(poly, cfg.m_value, cfg.unsigned)
    _guard(layout.total_qubits + cfg.m_result)
    res = amplify.quantum_count(poly, args.match, cfg.m_result, cfg.m_value, cfg.unsigned,
                                shots=cfg.shots if args.sampled else None, seed=cfg.seed)
    out = res.to_dict()
    out["rounded_count"] = res.rounded_count
    if poly.num_vars <= problems.MAX_CLASSICAL_VARS:
        out["classical_count"] = problems.classical_count(poly, args.match)
    print(json.dumps(out))
    return EXIT_OK


def cmd_fib(args, cfg: RunConfig) -> int:
    inst = problems.FibonacciInstance(args.n, args.method)
    summary: dict = {"n": inst.n, "method": inst.method, "reference": problems.fibonacci(inst.n)}
    if inst.method == "heuristic":
        _guard(inst.n)
        state = init_zero(inst.n).run(problems.fib_heuristic_circuit(inst.n))
        summary["support"] = len(nonzero_support(state))
        csv = viz.render_histogram(sample(state, cfg.shots, cfg.seed), inst.n)
        if cfg.out_csv:
            viz.write_atomic(cfg.out_csv, csv)
        else:
            sys.stdout.write(csv)
            print(json.dumps(summary), file=sys.stderr)
            return EXIT_OK
    elif inst.method == "naive":
        _guard(inst.n + cfg.m_result)
        good = problems.fib_good_set(inst.n)
        summary["good_set_size"] = len(good)
        res = amplify.amplitude_estimation(amplify.naive_config(good, inst.n), cfg.m_result)
        summary["result"] = res.to_dict()
        summary["rounded_count"] = res.rounded_count
    else:
        poly = problems.fib_canonical_poly(inst.n)
        # unsigned sizing keeps the value register at ceil(log2(n))
        unsigned = not args.signed
        layout = layout_for(poly, cfg.m_value, unsigned)
        _guard(layout.total_qubits + cfg.m_result)
        res = amplify.quantum_count(poly, 0, cfg.m_result, cfg.m_value, unsigned)
        summary["m_value"] = layout.value_qubits
        summary["result"] = res.to_dict()
        summary["rounded_count"] = res.rounded_count
    print(json.dumps(summary))
    return EXIT_OK


def cmd_search(args, cfg: RunConfig) -> int:
    poly = load_poly(args)
    layout = layout_for(poly, cfg.m_value, cfg.unsigned)
    _guard(layout.total_qubits)
    conf, b = amplify.canonical_config(poly, args.match, cfg.m_value, cfg.unsigned)
    if poly.num_vars <= problems.MAX_CLASSICAL_VARS and not problems.zero_set(poly, args.match):
        print(f"warning: no key evaluates to {args.match}; output stays uniform", file=sys.stderr)
    res = amplify.grover_search(conf, args.num_solutions, finish=b, shots=cfg.shots, seed=cfg.seed)
    n, m = layout.key_qubits, layout.value_qubits
    outcomes = sorted(res.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    print(json.dumps({
        "iterations": res.iterations,
        "success_probability": res.success_probability,
        "outcomes": [{"key": bitstring(i >> m, n), "value": layout.to_signed(i % 2 ** m), "count": c}
                     for i, c in outcomes],
    }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qoracle", description=__doc__.split("\n\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--shots", type=int, default=1024)
        sp.add_argument("--seed", type=int, default=7)

    def poly_source(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--poly", help='polynomial text, e.g. "x0*x1 + x1*x2"')
        g.add_argument("--poly-json", help='JSON file {"n": int, "terms": [{"c": int, "vars": [...]}]}')
        g.add_argument("--subset", help="comma-separated multiset for the subset-sum preset")
        g.add_argument("--fib", type=int, help="Fibonacci preset: string length")
        sp.add_argument("--target", type=int, default=0, help="subset-sum target")
        sp.add_argument("--n", type=int, help="number of key variables (default: from --poly)")
        sp.add_argument("--m-value", type=int, help="value-register width (default: auto)")
        sp.add_argument("--unsigned", action="store_true", help="size the value register unsigned")

    sp = sub.add_parser("encode", help="encode a polynomial into key/value registers")
    poly_source(sp)
    common(sp)
    sp.add_argument("--allow-aliasing", action="store_true")
    sp.add_argument("--signed-rows", action="store_true")
    sp.add_argument("--scale", type=int, default=16, help="pixel upscaling factor")
    sp.add_argument("--out-state", type=Path)
    sp.add_argument("--out-ppm", type=Path)

    sp = sub.add_parser("count", help="quantum counting of f(k) == match")
    poly_source(sp)
    common(sp)
    sp.add_argument("--match", type=int, default=0)
    sp.add_argument("--m-result", type=int, default=5)
    sp.add_argument("--sampled", action="store_true", help="pick y from --shots samples")

    sp = sub.add_parser("fib", help="Fibonacci strings via one of three encodings")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--method", choices=problems.METHODS, default="canonical")
    sp.add_argument("--m-result", type=int, default=5)
    sp.add_argument("--m-value", type=int)
    sp.add_argument("--signed", action="store_true", help="signed value register (canonical)")
    sp.add_argument("--out-csv", type=Path)

    sp = sub.add_parser("search", help="Grover search B G^k A with a canonical oracle")
    poly_source(sp)
    common(sp)
    sp.add_argument("--match", type=int, default=0)
    sp.add_argument("--num-solutions", type=int, required=True)
    return p


COMMANDS = {"encode": cmd_encode, "count": cmd_count, "fib": cmd_fib, "search": cmd_search}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](args, cfg)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
