"""Command-line front end.

Results go to stdout, progress and diagnostics to stderr. Exit codes: 0
success, 2 invalid input, 3 resource cap exceeded, 4 verification failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time

from . import cases
from .builtins import builtin_group
from .commuting import TauSpec, build_bcom, inclusion_map
from .errors import BcomError, ValidationError, VerificationError
from .groups import abelian_subgroup_poset, is_prime
from .hocolim import assembly_map, decomposition_diagram, hocolim
from .homology import betti, induced_on_homology

log = logging.getLogger("bcom")

SUITES = ("sigma3", "so3", "quotient", "gl2")

CAP_FLAGS = {
    "max_group_order": "BCOM_MAX_GROUP_ORDER",
    "max_simplices": "BCOM_MAX_SIMPLICES",
    "max_tuple_estimate": "BCOM_MAX_TUPLE_ESTIMATE",
}


def _prime(text: str) -> int:
    p = int(text)
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{text} is not a prime")
    return p


def _degree(text: str) -> int:
    d = int(text)
    if d < 0:
        raise argparse.ArgumentTypeError("degree must be >= 0")
    return d


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("caps must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    common.add_argument("--seed", type=int, default=0, help="reserved; no algorithm samples")
    for flag in CAP_FLAGS:
        common.add_argument(f"--{flag.replace('_', '-')}", type=_positive, dest=flag)

    computing = argparse.ArgumentParser(add_help=False)
    computing.add_argument("--group", required=True, help="builtin name (S3, GL2:4, C2xC2, ...) or JSON path")
    computing.add_argument("--ell", type=_prime, required=True)
    computing.add_argument("--max-degree", type=_degree, required=True, dest="D")

    p = argparse.ArgumentParser(prog="bcom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("homology", parents=[common, computing], help="mod-ell Betti numbers of B(tau,G)")
    h.add_argument("--tau", required=True, help="free, z, zmod:m or zell:l")

    c = sub.add_parser("compare", parents=[common, computing], help="map B(from,G) -> B(to,G) on homology")
    c.add_argument("--from", dest="source", required=True)
    c.add_argument("--to", dest="target", required=True)

    d = sub.add_parser("decompose", parents=[common, computing], help="hocolim over abelian subgroups vs B(tau,G)")
    d.add_argument("--tau", required=True)
    d.add_argument("--collection", choices=("all", "center"), default="all")

    v = sub.add_parser("verify", parents=[common], help="run the worked-example suites")
    v.add_argument("suite", choices=SUITES + ("all",))

    g = sub.add_parser("group", parents=[common], help="print a builtin group as JSON")
    g.add_argument("--group", required=True)
    return p


def cmd_homology(args) -> tuple[dict, int]:
    G = builtin_group(args.group)
    tau = TauSpec.parse(args.tau)
    log.info("building B(%s,%s) through degree %d", tau, G.name, args.D + 1)
    X = build_bcom(G, tau, args.D)
    table = betti(X, args.ell, args.D)
    return {
        "command": "homology",
        "group": G.name,
        "tau": str(tau),
        "ell": args.ell,
        "max_degree": args.D,
        "dims": list(table.dims),
    }, 0


def cmd_compare(args) -> tuple[dict, int]:
    G = builtin_group(args.group)
    a, b = TauSpec.parse(args.source), TauSpec.parse(args.target)
    log.info("comparing B(%s,%s) -> B(%s,%s)", a, G.name, b, G.name)
    f = inclusion_map(G, a, b, args.D)
    induced = induced_on_homology(f, args.ell, args.D)
    return {
        "command": "compare",
        "group": G.name,
        "from": str(a),
        "to": str(b),
        "ell": args.ell,
        "max_degree": args.D,
        "source_dims": list(induced.source_betti.dims),
        "target_dims": list(induced.target_betti.dims),
        "ranks": induced.ranks,
        "iso": induced.is_iso,
    }, 0


def cmd_decompose(args) -> tuple[dict, int]:
    G = builtin_group(args.group)
    tau = TauSpec.parse(args.tau)
    P = abelian_subgroup_poset(G, require_center=args.collection == "center")
    log.info("%d abelian subgroups; building the diagram", len(P))
    Dg = decomposition_diagram(G, P, tau, args.D)
    H = hocolim(Dg, args.D)
    log.info("hocolim has %s simplices", [H.count(n) for n in range(H.max_degree + 1)])
    f = assembly_map(G, Dg, args.D, H)
    induced = induced_on_homology(f, args.ell, args.D)
    return {
        "command": "decompose",
        "group": G.name,
        "tau": str(tau),
        "ell": args.ell,
        "max_degree": args.D,
        "collection": args.collection,
        "objects": Dg.shape.n_objects,
        "arrows": len(Dg.shape.non_identity_arrows()),
        "conjugacy_classes": len(P.classes),
        "hocolim_dims": list(induced.source_betti.dims),
        "direct_dims": list(induced.target_betti.dims),
        "ranks": induced.ranks,
        "iso": induced.is_iso,
    }, 0


def run_suite(name: str) -> tuple[list[cases.Check], dict]:
    if name == "so3":
        reports = [cases.so3_pi0(n) for n in range(9)]
        return [c for r in reports for c in r.checks()], {"so3": [r.to_json() for r in reports]}
    if name == "quotient":
        r = cases.quotient_suite((3, 5, 7), 4)
        return r.checks(), {"quotient": r.to_json()}
    if name == "sigma3":
        r = cases.sigma3_suite(3)
        return r.checks(), {"sigma3": r.to_json()}
    if name == "gl2":
        census = cases.gl2_census(4, 3)
        dec = cases.gl2_decomposition_check(4, 3, 2)
        return census.checks() + dec.checks(), {
            "gl2_census": census.to_json(),
            "gl2_decomposition": dec.to_json(),
        }
    raise ValidationError(f"unknown suite {name!r}")


def cmd_verify(args) -> tuple[dict, int]:
    names = SUITES if args.suite == "all" else (args.suite,)
    checks, reports = [], {}
    for name in names:
        log.info("running suite %s", name)
        start = time.perf_counter()
        rows, rep = run_suite(name)
        log.info("suite %s: %.2fs", name, time.perf_counter() - start)
        checks.extend(rows)
        reports.update(rep)
    failed = [c for c in checks if not c.passed]
    result = {
        "command": "verify",
        "suite": args.suite,
        "checks": [c.to_json() for c in checks],
        "passed": not failed,
        "reports": reports,
    }
    return result, 0 if not failed else VerificationError.exit_code


def cmd_group(args) -> tuple[dict, int]:
    return builtin_group(args.group).to_json(), 0


COMMANDS = {
    "homology": cmd_homology,
    "compare": cmd_compare,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "group": cmd_group,
}


def render(result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _render_csv(result)
    return _render_text(result)


def _render_csv(result: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cmd = result.get("command")
    if cmd == "homology":
        w.writerow(["degree", "dim"])
        w.writerows(enumerate(result["dims"]))
    elif cmd in ("compare", "decompose"):
        src, tgt = ("source_dims", "target_dims") if cmd == "compare" else ("hocolim_dims", "direct_dims")
        w.writerow(["degree", src, tgt, "rank", "iso"])
        for n, (a, b, r) in enumerate(zip(result[src], result[tgt], result["ranks"])):
            w.writerow([n, a, b, r, a == b == r])
    elif cmd == "verify":
        w.writerow(["suite", "check", "passed", "detail"])
        for c in result["checks"]:
            w.writerow([c["suite"], c["name"], c["passed"], c["detail"]])
    else:
        raise ValidationError("csv output is not available for this command")
    return buf.getvalue()


def _tuple(xs) -> str:
    return "(" + ",".join(map(str, xs)) + ")"


def _render_text(result: dict) -> str:
    cmd = result.get("command")
    if cmd == "homology":
        return (
            f"H_*(B({result['tau']},{result['group']}); F_{result['ell']}) "
            f"through degree {result['max_degree']}: {_tuple(result['dims'])}\n"
        )
    if cmd == "compare":
        return (
            f"B({result['from']},{result['group']}) -> B({result['to']},{result['group']}) mod {result['ell']}\n"
            f"  source {_tuple(result['source_dims'])}\n"
            f"  target {_tuple(result['target_dims'])}\n"
            f"  ranks  {_tuple(result['ranks'])}\n"
            f"  iso through degree {result['max_degree']}: {str(result['iso']).lower()}\n"
        )
    if cmd == "decompose":
        return (
            f"{result['group']}, tau={result['tau']}, collection={result['collection']}: "
            f"{result['objects']} objects, {result['arrows']} non-identity arrows, "
            f"{result['conjugacy_classes']} conjugacy classes\n"
            f"  hocolim {_tuple(result['hocolim_dims'])}\n"
            f"  direct  {_tuple(result['direct_dims'])}\n"
            f"  assembly iso mod {result['ell']} through degree {result['max_degree']}: "
            f"{str(result['iso']).lower()}\n"
        )
    if cmd == "verify":
        width = max(len(c["name"]) for c in result["checks"])
        lines = [
            f"{'PASS' if c['passed'] else 'FAIL'}  {c['suite']:<8} {c['name']:<{width}}  {c['detail']}".rstrip()
            for c in result["checks"]
        ]
        n_fail = sum(not c["passed"] for c in result["checks"])
        lines.append(f"{len(result['checks']) - n_fail} passed, {n_fail} failed")
        return "\n".join(lines) + "\n"
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
    )
    saved = {env: os.environ.get(env) for env in CAP_FLAGS.values()}
    for flag, env in CAP_FLAGS.items():
        if getattr(args, flag, None) is not None:
            os.environ[env] = str(getattr(args, flag))
    try:
        result, code = COMMANDS[args.command](args)
        text = render(result, args.format)
    except BcomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    finally:
        for env, value in saved.items():
            if value is None:
                os.environ.pop(env, None)
            else:
                os.environ[env] = value
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code:
        print("verification failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
