"""Command-line surface: subcommand dispatch, file ingestion, reports.

Exit codes: 0 success; 1 verdict failure (an expected invariant violated,
e.g. a non-generic matrix fed to classify, or consistency failures); 2
usage or ingestion error; 3 resource bound exceeded.

JSON output (--format json) is a single line with sorted keys, so identical
inputs and seed produce byte-identical output regardless of the thread-count
hint.  Every payload carries {"schema": 1, "command": ...} and validates
against schema/report_schema.json.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, analysis, f2comb
from .errors import (
    InvalidParity,
    NonGeneric,
    NotInBigCell,
    NotInIn,
    NotUnitriangular,
    ResourceBound,
    SingularMatrix,
)
from .exactq import RatMatrix, parse_matrix
from .factorization import compose, factorize, parse_params, sign_matrix
from .flags import Flag, _column_echelon, is_antipodal

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class UsageError(Exception):
    pass


class VerdictError(Exception):
    """Domain-level negative outcome; carries the report payload."""

    def __init__(self, key: str, detail: str = ""):
        super().__init__(detail or key)
        self.key = key
        self.detail = detail


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None


def _read_matrix(path: str) -> RatMatrix:
    try:
        return parse_matrix(_read_text(path))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def _read_flag(path: str) -> Flag:
    m = _read_matrix(path)
    for k in range(1, m.dim + 1):
        block = [row[:k] for row in m.rows]
        rank = sum(1 for col in _column_echelon(block) if any(x != 0 for x in col))
        if rank < k:
            raise UsageError(f"{path}: flag level {k} fails invertibility")
    return Flag(m)


def _resolve_n(args, *, what: str) -> int:
    n = getattr(args, "n", None)
    d = getattr(args, "d", None)
    if n is None and d is None:
        raise UsageError(f"one of --n/--d is required for {what}")
    if n is not None and d is not None and d != n + 1:
        raise UsageError(f"--n {n} and --d {d} are inconsistent (need d = n+1)")
    return n if n is not None else d - 1


# -- command implementations ----------------------------------------------------

def _cmd_orbits(args) -> dict:
    n = _resolve_n(args, what="orbits")
    orbits = f2comb.all_orbits(n, args.max_states)
    return {
        "n": n,
        "orbits": [o.as_json() for o in orbits],
        "total_orbits": len(orbits),
        "singleton_count": sum(o.size == 1 for o in orbits),
        "state_total": sum(o.size for o in orbits),
    }


def _text_orbits(p) -> str:
    lines = [f"T^{p['n']}: {p['total_orbits']} orbits over {p['state_total']} states, "
             f"{p['singleton_count']} singletons"]
    for k, o in enumerate(p["orbits"], 1):
        tag = " singleton" if o["size"] == 1 else ""
        inv = " iota-invariant" if o["invariant"] else ""
        lines.append(
            f"orbit {k:3d}: rep={o['rep']} size={o['size']} "
            f"height={''.join(map(str, o['height']))} iota_rep={o['iota_rep']}{tag}{inv}"
        )
    return "\n".join(lines)


def _cmd_pairing(args) -> dict:
    n = _resolve_n(args, what="pairing")
    table = analysis.pairing_table(n, args.max_states)
    return table.as_json()


def _text_pairing(p) -> str:
    lines = [f"T^{p['n']}: {p['total_orbits']} orbits, {p['invariant_count']} iota-invariant, "
             f"{p['singleton_count']} singletons"]
    for r in p["rows"]:
        mark = "self-paired" if r["invariant"] else f"partner={r['partner']['rep']}"
        lines.append(f"orbit rep={r['orbit']['rep']} size={r['orbit']['size']} {mark}")
    return "\n".join(lines)


_THEOREM_RANGE = {2, 3, 4, 5, 6}   # residues mod 8 where no component may be invariant


def _cmd_verify(args) -> dict:
    if args.d is None:
        raise UsageError("--d is required for verify")
    verdict = analysis.verify_swaps(args.d, args.max_states)
    payload = verdict.as_json()
    if args.d % 8 in _THEOREM_RANGE and verdict.status != "all_swapped":
        raise VerdictError("swap_theorem_violated", json.dumps(payload, sort_keys=True))
    return payload


def _cmd_decide_d8(args) -> dict:
    return analysis.decide_d8(args.max_states).as_json()


def _text_verdict(p) -> str:
    lines = [f"d={p['d']}: {p['status']} (method: {p['method']})"]
    if p.get("count") is not None:
        lines.append(f"invariant orbit count: {p['count']}")
    for r in p.get("representatives", []):
        lines.append(f"  invariant orbit rep={r}")
    if p.get("reason"):
        lines.append(f"reason: {p['reason']}")
    for c in p.get("certificates", []):
        h = "".join(map(str, c["height"]))
        sizes = ",".join(str(o["size"]) for o in c["orbits"])
        reps = " ".join(o["rep"] for o in c["orbits"])
        lines.append(f"slice h={h}: {c['iota_action']} (sizes {sizes}) reps: {reps}")
    return "\n".join(lines)


def _cmd_classify(args) -> dict:
    if (args.matrix is None) == (args.params is None):
        raise UsageError("classify needs exactly one of --matrix/--params")
    if args.matrix:
        u = _read_matrix(args.matrix)
        if not u.is_unitriangular:
            raise UsageError(f"{args.matrix}: matrix is not unitriangular")
        try:
            params = factorize(u)
        except NonGeneric as e:
            raise VerdictError("non_generic", str(e)) from None
    else:
        try:
            params = parse_params(_read_text(args.params))
        except ValueError as e:
            raise UsageError(f"{args.params}: {e}") from None
    sm = sign_matrix(params)
    orbit = f2comb.orbit_of(sm, args.max_states)
    return {"d": params.n + 1, "sign_matrix": sm.to_text(), "orbit": orbit.as_json()}


def _text_classify(p) -> str:
    o = p["orbit"]
    return (
        f"d={p['d']}: sign matrix {p['sign_matrix']}\n"
        f"component orbit: rep={o['rep']} size={o['size']} "
        f"height={''.join(map(str, o['height']))} "
        f"iota_rep={o['iota_rep']} invariant={str(o['invariant']).lower()}"
    )


def _cmd_factorize(args) -> dict:
    u = _read_matrix(args.matrix)
    if not u.is_unitriangular:
        raise UsageError(f"{args.matrix}: matrix is not unitriangular")
    try:
        params = factorize(u)
    except NonGeneric as e:
        raise VerdictError("non_generic", str(e)) from None
    return {
        "n": params.n,
        "params": [[i, j, str(v)] for (i, j), v in params.items()],
    }


def _text_factorize(p) -> str:
    return "\n".join(f"{i} {j} {v}" for i, j, v in p["params"])


def _cmd_antipodal(args) -> dict:
    fa = _read_flag(args.flag_a)
    fb = _read_flag(args.flag_b)
    if fa.dim != fb.dim:
        raise UsageError(f"flag dimensions differ: {fa.dim} vs {fb.dim}")
    d = fa.dim
    failing = []
    for k in range(1, d):
        rows = [fa.basis.rows[i][:k] + fb.basis.rows[i][: d - k] for i in range(d)]
        from .exactq import det
        if det(RatMatrix(rows)) == 0:
            failing.append(k)
    return {"d": d, "antipodal": not failing, "failing_levels": failing}


def _text_antipodal(p) -> str:
    if p["antipodal"]:
        return f"d={p['d']}: antipodal"
    levels = ", ".join(map(str, p["failing_levels"]))
    return f"d={p['d']}: not antipodal (levels {levels} fail)"


def _cmd_census_d3(args) -> dict:
    report = analysis.d3_census()
    if report["mismatches"]:
        raise VerdictError("census_mismatch", json.dumps(report, sort_keys=True))
    return report


def _text_census(p) -> str:
    lines = ["region -> orbit dictionary:"]
    for k in sorted(p["bijection"]):
        lines.append(f"  {k}: {p['bijection'][k]}")
    lines.append(f"grid radius {p['grid_radius']}: {p['checked']} generic points checked, "
                 f"{p['skipped']} skipped, {len(p['mismatches'])} mismatches")
    return "\n".join(lines)


def _cmd_claim2(args) -> dict:
    n = _resolve_n(args, what="claim2")
    try:
        verdict = analysis.claim2_check(n, args.max_states)
    except InvalidParity as e:
        raise UsageError(str(e)) from None
    return {"n": n, "verdict": verdict}


def _cmd_consistency(args) -> dict:
    if args.d is None:
        raise UsageError("--d is required for consistency")
    report = analysis.geometric_consistency_suite(args.d, args.samples, args.seed)
    if report["failures"]:
        raise VerdictError("consistency_failures", json.dumps(report, sort_keys=True))
    return report


def _text_consistency(p) -> str:
    checks = " ".join(f"{k}={v}/{p['samples']}" for k, v in sorted(p["checks"].items()))
    return (f"d={p['d']} seed={p['seed']}: {checks}; "
            f"{len(p['failures'])} failures")


def _cmd_table1(args) -> dict:
    table = analysis.pairing_table(3)
    pairs = []
    for row in table.rows:
        a, b = row.orbit, row.partner
        if a.representative.bits > b.representative.bits:
            continue
        def side(o):
            members = f2comb.orbit_members(o.representative)
            return {
                "rep": o.representative.to_text(),
                "size": o.size,
                "singleton": o.size == 1,
                "members": [m.to_text() for m in members],
            }
        pairs.append({"orbit": side(a), "iota_orbit": side(b)})
    return {"n": 3, "pairs": pairs}


def _text_table1(p) -> str:
    lines = [f"T^3 orbit pairing under iota ({2 * len(p['pairs'])} orbits in "
             f"{len(p['pairs'])} swapped pairs):"]
    for k, pair in enumerate(p["pairs"], 1):
        for label, o in (("", pair["orbit"]), (" <-iota->", pair["iota_orbit"])):
            tag = " singleton" if o["singleton"] else ""
            lines.append(
                f"orbit{label:9s} size={o['size']}{tag}  members: " + " ".join(o["members"])
            )
        lines.append("-" * 8 + f" pair {k:2d} " + "-" * 8)
    return "\n".join(lines)


_COMMANDS = {
    "orbits": (_cmd_orbits, _text_orbits),
    "pairing": (_cmd_pairing, _text_pairing),
    "verify": (_cmd_verify, _text_verdict),
    "decide-d8": (_cmd_decide_d8, _text_verdict),
    "classify": (_cmd_classify, _text_classify),
    "factorize": (_cmd_factorize, _text_factorize),
    "antipodal": (_cmd_antipodal, _text_antipodal),
    "census-d3": (_cmd_census_d3, _text_census),
    "claim2": (_cmd_claim2, lambda p: f"n={p['n']}: {p['verdict']}"),
    "consistency": (_cmd_consistency, _text_consistency),
    "table1": (_cmd_table1, _text_table1),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flagcells",
        description="exact big-cell intersections: orbits, pairings, swap verdicts",
    )
    parser.add_argument("--version", action="version", version=f"flagcells {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--threads", type=int, default=1,
                       help="hint to the enumeration engine (output is identical)")
        p.add_argument("--max-states", type=int, default=None,
                       help="state bound; FLAGCELLS_MAX_STATES is the env fallback")

    p = sub.add_parser("orbits", help="enumerate all orbits of T^n")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    common(p)

    p = sub.add_parser("pairing", help="orbit pairing table under iota")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    common(p)

    p = sub.add_parser("verify", help="does the involution preserve any component?")
    p.add_argument("--d", type=int, required=True)
    common(p)

    p = sub.add_parser("decide-d8", help="settle d=8 by special-slice search")
    common(p)

    p = sub.add_parser("classify", help="which component is a generic element in?")
    p.add_argument("--matrix", help="unitriangular matrix file")
    p.add_argument("--params", help="factorization parameter file")
    common(p)

    p = sub.add_parser("factorize", help="elementary-factor parameters of a matrix")
    p.add_argument("--matrix", required=True)
    common(p)

    p = sub.add_parser("antipodal", help="are two flags antipodal?")
    p.add_argument("--flag-a", required=True)
    p.add_argument("--flag-b", required=True)
    common(p)

    p = sub.add_parser("census-d3", help="d=3 sign-region vs orbit census")
    common(p)

    p = sub.add_parser("claim2", help="corner-block orbits of the zero slice: disjoint or equal")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    common(p)

    p = sub.add_parser("consistency", help="randomized exact consistency suite")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("table1", help="the n=3 pairing table with full orbits")
    common(p)

    return parser


def _emit(payload: dict, command: str, fmt: str, text_fn) -> None:
    payload = {"schema": 1, "command": command, **payload}
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        if "error" in payload:
            line = f"error: {payload['error']}"
            if payload.get("detail"):
                line += f" ({payload['detail']})"
            print(line)
        else:
            print(text_fn(payload))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run, text_fn = _COMMANDS[args.command]
    fmt = getattr(args, "format", "text")
    try:
        payload = run(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NotInIn, InvalidParity, NotUnitriangular, SingularMatrix, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VerdictError as e:
        _emit({"error": e.key, "detail": e.detail}, args.command, fmt, text_fn)
        return EXIT_VERDICT
    except NotInBigCell as e:
        _emit({"error": "not_in_big_cell", "detail": str(e)}, args.command, fmt, text_fn)
        return EXIT_VERDICT
    except NonGeneric as e:
        _emit({"error": "non_generic", "detail": str(e)}, args.command, fmt, text_fn)
        return EXIT_VERDICT
    except ResourceBound as e:
        _emit({"error": "resource_bound", "detail": str(e)}, args.command, fmt, text_fn)
        return EXIT_RESOURCE
    _emit(payload, args.command, fmt, text_fn)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
