"""Command-line front end.

Exit codes: 0 success, 1 negative verdict, 2 usage error, 3 search bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

import numpy as np

from . import counting, graph, idempotent, sampling, tiling
from .digit_table import build_table
from .errors import SearchBoundExceeded
from .zn import DivisorSet, IndexSet, Modulus

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_int_list(text: str) -> list[int]:
    """Comma/whitespace separated integers, or @path to a file holding them (or an IndexSet JSON object)."""
    if text.startswith("@"):
        raw = Path(text[1:]).read_text()
        stripped = raw.strip()
        if stripped.startswith("{"):
            return [int(x) for x in json.loads(stripped)["elements"]]
        if stripped.startswith("["):
            return [int(x) for x in json.loads(stripped)]
        text = raw
    parts = text.replace(",", " ").split()
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise UsageError(f"not a list of integers: {text!r}") from None


def _modulus(args) -> int:
    has_n = args.n is not None
    has_pm = args.p is not None or args.m is not None
    if has_n == has_pm:
        raise UsageError("give exactly one of --n or (--p and --m)")
    if has_n:
        return Modulus(args.n).n
    if args.p is None or args.m is None:
        raise UsageError("--p and --m must be given together")
    return Modulus(args.p**args.m).n


def _prime_power(args) -> tuple[int, int]:
    if args.p is not None and args.m is not None and args.n is None:
        return args.p, args.m
    pm = Modulus(_modulus(args)).prime_power
    if pm is None:
        raise UsageError("this command needs a prime-power modulus")
    return pm


def _index_set(args, name: str, n: int) -> IndexSet:
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required")
    try:
        return IndexSet(n, tuple(parse_int_list(value)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _divisor_set(text: str, n: int) -> DivisorSet:
    try:
        return DivisorSet(n, tuple(parse_int_list(text)))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _elements(s: IndexSet | None):
    return list(s.elements) if s is not None else None


# --- command handlers ----------------------------------------------------------
# Each handler returns (payload, exit code).  Payloads are dicts (JSON), or
# plain strings for csv/dot/text output.


def cmd_zeroset(args):
    n = _modulus(args)
    h = idempotent.Idempotent(_index_set(args, "cols", n))
    payload = h.to_json()
    payload["zero_set"] = list(idempotent.zero_set(h).elements)
    return payload, EXIT_OK


def cmd_sample(args):
    n = _modulus(args)
    cols = _index_set(args, "cols", n)
    if args.action == "find":
        found = sampling.find_orthogonal_sampling_set(cols)
        payload = {"j": list(cols.elements), "n": n, "sampling_set": _elements(found)}
        if found is None:
            payload["message"] = "no orthogonal sampling set"
        return payload, EXIT_OK if found is not None else EXIT_NEGATIVE
    rows = _index_set(args, "rows", n)
    ok = sampling.is_orthogonal_sampling_set(rows, cols)
    return {"i": list(rows.elements), "j": list(cols.elements), "n": n, "orthogonal": ok}, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_unitary(args):
    if args.action == "make":
        p, m = _prime_power(args)
        marked = parse_int_list(args.marked) if args.marked else []
        rows, cols = sampling.make_unitary_pair(p, m, marked)
        return {"i": list(rows.elements), "j": list(cols.elements), "n": p**m}, EXIT_OK
    if args.action == "count":
        p, m = _prime_power(args)
        value = counting.count_unitary_pairs(p, m, _logd(args, m))
        return _count_payload(args, p, m, value), EXIT_OK
    n = _modulus(args)
    report = sampling.pair_report(_index_set(args, "rows", n), _index_set(args, "cols", n))
    return report.to_json(), EXIT_OK if report.unitary else EXIT_NEGATIVE


def _logd(args, m: int) -> int:
    if args.logd is None:
        raise UsageError("--logd is required")
    if not 0 <= args.logd <= m:
        raise UsageError(f"--logd must lie in [0, {m}]")
    return args.logd


def _count_payload(args, p, m, value):
    if args.format == "json":
        return {"p": p, "m": m, "log_d": args.logd, "count": value}
    return str(value)


def cmd_count(args):
    p, m = _prime_power(args)
    if args.action == "table":
        rows = counting.theta_phi_table(p, m)
        if args.format == "json":
            return [r.__dict__ for r in rows], EXIT_OK
        return counting.write_theta_phi_csv(rows), EXIT_OK
    fn = counting.count_sampling_sets if args.action == "theta" else counting.count_unitary_pairs
    return _count_payload(args, p, m, fn(p, m, _logd(args, m))), EXIT_OK


def _sweep_one(n: int) -> list[dict]:
    return [r.to_json() for r in tiling.fuglede_sweep([n])]


def _scan_one(n: int) -> list[dict]:
    return [e.to_json() for e in graph.divisibility_scan([n])]


def _per_modulus(fn, moduli: Sequence[int], jobs: int) -> list[dict]:
    if jobs > 1 and len(moduli) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(fn, moduli))
    else:
        parts = [fn(n) for n in moduli]
    return [row for part in parts for row in part]


def cmd_tile(args):
    if args.action == "sweep":
        rows = _per_modulus(_sweep_one, parse_int_list(args.moduli), args.jobs)
        ok = all(r["disagreements"] == 0 for r in rows)
        return rows, EXIT_OK if ok else EXIT_NEGATIVE
    n = _modulus(args)
    cols = _index_set(args, "cols", n)
    if args.action == "check":
        translates = _index_set(args, "translates", n)
        ok = tiling.tiles(cols, translates)
        return {"j": list(cols.elements), "k": list(translates.elements), "n": n, "tiles": ok}, EXIT_OK if ok else EXIT_NEGATIVE
    if args.action == "complement":
        mode = "exhaustive" if args.exhaustive else "auto"
        found = tiling.find_tiling_complement(cols, mode)
        return {"j": list(cols.elements), "n": n, "tiling_complement": _elements(found)}, EXIT_OK if found else EXIT_NEGATIVE
    report = tiling.fuglede_check(cols)
    return report.to_json(), EXIT_OK if report.agree else EXIT_NEGATIVE


def cmd_prescribe(args):
    n = _modulus(args)
    if (args.divisors is None) == (args.zeros is None):
        raise UsageError("give exactly one of --divisors or --zeros")
    if args.divisors is not None:
        divisors = _divisor_set(args.divisors, n)
    else:
        try:
            divisors = idempotent.divisors_from_zero_set(_index_set(args, "zeros", n))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    mode = "exhaustive" if args.exhaustive or Modulus(n).prime_power is None else "constructive"
    found = idempotent.prescribe_zero_set(divisors, mode)
    payload = {"n": n, "divisors": list(divisors.divisors), "mode": mode, "j": _elements(found)}
    if found is None:
        payload["message"] = "no idempotent has this zero set"
    return payload, EXIT_OK if found is not None else EXIT_NEGATIVE


def cmd_graph(args):
    if args.action == "scan":
        rows = _per_modulus(_scan_one, parse_int_list(args.moduli), args.jobs)
        ok = not any(r["violation"] for r in rows)
        return rows, EXIT_OK if ok else EXIT_NEGATIVE
    n = _modulus(args)
    if args.divisors is None:
        raise UsageError("--divisors is required")
    g = graph.build_graph(_divisor_set(args.divisors, n))
    if args.action == "build":
        if args.format == "dot":
            return graph.export_dot(g), EXIT_OK
        return {
            "n": n,
            "divisors": list(g.divisors.divisors),
            "edge_count": g.edge_count(),
            "adjacency": [list(g.neighbours(v)) for v in range(n)],
        }, EXIT_OK
    if args.action == "clique":
        clique = graph.max_clique(g)
        return {"n": n, "divisors": list(g.divisors.divisors), "max_clique": list(clique.elements)}, EXIT_OK
    vertices = parse_int_list(args.vertices) if args.vertices else None
    if vertices is not None:
        holes = [h for h in (graph.find_odd_hole(g, c, args.max_len, vertices) for c in (False, True)) if h]
        payload = {"n": n, "divisors": list(g.divisors.divisors), "holes": [list(h) for h in holes]}
        return payload, EXIT_NEGATIVE if holes else EXIT_OK
    report = graph.berge_certify(g, args.max_len)
    return report.to_json(), EXIT_OK if report.berge else EXIT_NEGATIVE


def _complex_list(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex)]


def cmd_interp(args):
    n = _modulus(args)
    if args.action == "cons":
        fam = sampling.consecutive_family(n, args.d, args.offset)
        return {
            "n": n,
            "d": args.d,
            "offset": fam.offset,
            "j": list(fam.frequencies.elements),
            "zero_set": list(fam.zeros.elements),
            "sampling_set": _elements(fam.sampling_set),
        }, EXIT_OK if fam.sampling_set else EXIT_NEGATIVE
    if args.action == "arith":
        try:
            fam = sampling.progression_family(n, args.s, args.d, args.offset)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        return {
            "n": n,
            "s": args.s,
            "d": args.d,
            "offset": fam.offset,
            "j": list(fam.ordered),
            "zero_set": list(fam.zeros.elements),
            "sampling_set": _elements(fam.sampling_set),
        }, EXIT_OK if fam.sampling_set else EXIT_NEGATIVE
    rows = _index_set(args, "rows", n)
    cols = _index_set(args, "cols", n)
    if args.samples:
        values = np.array([complex(x) for x in args.samples.replace(",", " ").split()])
        signal = sampling.reconstruct(values, rows, cols)
        return {"n": n, "i": list(rows.elements), "j": list(cols.elements), "signal": _complex_list(signal)}, EXIT_OK
    rng = np.random.default_rng(args.seed)
    original = sampling.random_bandlimited(cols, rng)
    signal = sampling.reconstruct(original[list(rows.elements)], rows, cols)
    error = float(np.abs(signal - original).max() / np.abs(original).max())
    return {
        "n": n,
        "i": list(rows.elements),
        "j": list(cols.elements),
        "seed": args.seed,
        "relative_error": error,
        "signal": _complex_list(signal),
    }, EXIT_OK


def cmd_table(args):
    p, m = _prime_power(args)
    table = build_table(_index_set(args, "rows", p**m), p, m, parse_int_list(args.marked) if args.marked else [])
    if args.format == "json":
        return table.to_json(), EXIT_OK
    return table.render(), EXIT_OK


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="modulus N")
    common.add_argument("--p", type=int, help="prime p (with --m, N = p^m)")
    common.add_argument("--m", type=int, help="exponent M")
    common.add_argument("--format", choices=("json", "csv", "dot", "text"), help="output format")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="random seed for demos (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for per-modulus sweeps")

    parser = argparse.ArgumentParser(prog="unitary-dft", description="Unitary submatrices of the DFT matrix on Z_N.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeroset", parents=[common], help="zero-set divisors and zero set of h_J")
    p.add_argument("--cols", required=True, help="frequency set J")
    p.set_defaults(handler=cmd_zeroset)

    p = sub.add_parser("sample", parents=[common], help="orthogonal sampling sets")
    p.add_argument("action", choices=("find", "check"))
    p.add_argument("--cols", required=True, help="frequency set J")
    p.add_argument("--rows", help="sample set I")
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("unitary", parents=[common], help="unitary pairs")
    p.add_argument("action", choices=("make", "check", "count"))
    p.add_argument("--rows")
    p.add_argument("--cols")
    p.add_argument("--marked", help="marked columns L for make")
    p.add_argument("--logd", type=int)
    p.set_defaults(handler=cmd_unitary)

    p = sub.add_parser("count", parents=[common], help="closed-form counts and theta/phi tables")
    p.add_argument("action", choices=("theta", "phi", "table"))
    p.add_argument("--logd", type=int)
    p.set_defaults(handler=cmd_count)

    p = sub.add_parser("tile", parents=[common], help="tilings and the sampling/tiling equivalence")
    p.add_argument("action", choices=("check", "complement", "fuglede", "sweep"))
    p.add_argument("--cols", help="tile J")
    p.add_argument("--translates", help="translation set K for check")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--moduli", default="8,9,16", help="moduli for sweep")
    p.set_defaults(handler=cmd_tile)

    p = sub.add_parser("prescribe", parents=[common], help="find J with a prescribed zero set")
    p.add_argument("--divisors")
    p.add_argument("--zeros")
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(handler=cmd_prescribe)

    p = sub.add_parser("graph", parents=[common], help="difference graphs")
    p.add_argument("action", choices=("build", "clique", "berge", "scan"))
    p.add_argument("--divisors")
    p.add_argument("--max-len", type=int, default=None, dest="max_len")
    p.add_argument("--vertices", help="restrict the hole search to these vertices")
    p.add_argument("--moduli", default="6,12", help="moduli for scan")
    p.set_defaults(handler=cmd_graph)

    p = sub.add_parser("interp", parents=[common], help="interpolation families and reconstruction")
    p.add_argument("action", choices=("cons", "arith", "reconstruct"))
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--rows")
    p.add_argument("--cols")
    p.add_argument("--samples", help="sample values on I (complex literals); random signal when omitted")
    p.set_defaults(handler=cmd_interp)

    p = sub.add_parser("table", parents=[common], help="render the digit-table of an index set")
    p.add_argument("--rows", required=True)
    p.add_argument("--marked")
    p.set_defaults(handler=cmd_table)
    return parser


def _emit(payload, args) -> None:
    if isinstance(payload, str):
        text = payload if payload.endswith("\n") else payload + "\n"
    else:
        text = json.dumps(payload) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command in ("interp",) and args.action in ("cons", "arith") and args.d is None:
        parser.print_usage(sys.stderr)
        print("error: --d is required", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "interp" and args.action == "arith" and args.s is None:
        print("error: --s is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        payload, code = args.handler(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchBoundExceeded as exc:
        print(f"search bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(payload, args)
    if code == EXIT_NEGATIVE and isinstance(payload, dict) and "message" in payload:
        print(payload["message"], file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())
