"""Command-line entry point: tables, verification suites and small calculators."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator

from .osp import OSP, all_subset_osps, enumerate_osps, enumerate_standard_osps, enumerate_triangulations

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_osp(text: str) -> OSP:
    try:
        return OSP.parse(text)
    except ValueError as exc:
        raise UsageError(f"invalid ordered set partition {text!r}: {exc}") from None


# ----------------------------------------------------------------------------
# reports
# ----------------------------------------------------------------------------

@dataclass
class RunReport:
    suite: str
    cases: int = 0
    failures: list = field(default_factory=list)
    elapsed: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "cases": self.cases,
            "passed": self.ok,
            "failures": sorted(self.failures, key=lambda f: str(f["case"])),
        }
        if self.details:
            out["details"] = self.details
        if self.elapsed is not None:
            out["elapsed_ms"] = round(self.elapsed, 1)
        return out


Case = tuple  # (case id, expected, got)


def _collect(suite: str, cases: Iterator[Case]) -> RunReport:
    rep = RunReport(suite)
    for cid, expected, got in cases:
        rep.cases += 1
        if expected != got:
            rep.failures.append({"case": cid, "expected": _plain(expected), "got": _plain(got)})
    return rep


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


# ----------------------------------------------------------------------------
# suites
# ----------------------------------------------------------------------------

def _suite_mu(args) -> Iterator[Case]:
    from .plates import cycle_identity_check, open_plate_checks
    n = args.n or 4
    for s in all_subset_osps(n):
        if len(s) == 2:
            res = open_plate_checks(s.blocks[0], s.blocks[1], n)
            yield f"square:{s}", True, res["square"]
            yield f"opposite:{s}", True, res["opposite"]
        if len(s) >= 2:
            yield f"cycle:{s}", True, cycle_identity_check(s, n)


def _suite_flag(args) -> Iterator[Case]:
    from .blades import verify_flag
    n = args.n or 5
    for s in enumerate_standard_osps(n):
        if len(s) >= 3:
            yield str(s), True, verify_flag(s, n)


def _suite_triangulation(args) -> Iterator[Case]:
    from .blades import independence_check
    n = args.n or 5
    for s in enumerate_standard_osps(n):
        if 4 <= len(s) <= 5:
            yield str(s), True, independence_check(s, n)


def _suite_cyclic_sum(args) -> Iterator[Case]:
    from .canonical import graduated_fn
    from .indicator import functions_equal
    from .plates import alternating_expansion, cyclic_minkowski_check
    n = args.n or 4
    for s in enumerate_standard_osps(n):
        yield f"minkowski:{s}", True, cyclic_minkowski_check(s, n)
        yield f"alternating:{s}", True, functions_equal(alternating_expansion(s, n), graduated_fn(s, n))


def _suite_minkowski(args) -> Iterator[Case]:
    from .blades import minkowski_decomposition_check
    n = args.n or 4
    for s in enumerate_standard_osps(n):
        if len(s) >= 3:
            for t in enumerate_triangulations(len(s)):
                yield f"{s}:{t.triangles}", True, minkowski_decomposition_check(s, t, n)


def _suite_canonical(args) -> Iterator[Case]:
    from .canonical import (
        CanonicalElement, blade_row, canonical_census, expand_canonical_product, straighten,
        unstraighten, verify_unitriangular,
    )
    n = args.n or 4
    yield f"unitriangular:{n}", True, verify_unitriangular(n)
    for s in enumerate_standard_osps(n):
        yield f"roundtrip:{s}", {str(s): "1"}, {str(k): str(v) for k, v in unstraighten(straighten(s, n)).items()}
    census = canonical_census(n)
    yield f"census:{n}", blade_row(n), [census.get(n - k, 0) for k in range(1, n + 1)]
    exp = expand_canonical_product(CanonicalElement.parse("1|2|3;1|4|5"))
    yield "two-tripod-terms", 13, len(exp)


def _suite_decoupling(args) -> Iterator[Case]:
    from .valuation import check_decoupling
    for n in ([args.n] if args.n else [4, 5]):
        res = check_decoupling(n, args.trials, args.seed)
        yield f"decoupling:{n}", True, res.holds


def _suite_shuffle(args) -> Iterator[Case]:
    from .valuation import check_geometric_example, check_laplace_cyclic_sum, check_shuffle_example
    for k, v in check_shuffle_example(args.trials, args.seed).items():
        yield f"ratio:{k}", True, v.holds
    yield "root:cyclic-sum-vanishes", True, check_laplace_cyclic_sum(5, args.trials, args.seed).holds
    geo = check_geometric_example(args.trials, args.seed)
    yield "geometric:tripod", True, geo["tripod_partial_fractions"].holds
    yield "geometric:blade-sum-scaled", True, geo["blade_sum_scaled"].holds
    yield "geometric:blade-sum-corrected-display", True, geo["blade_sum_corrected"].holds


def _suite_cohomology(args) -> Iterator[Case]:
    from itertools import permutations
    from .cohomology import (
        cyclic_vanish_check, degree_one_decomposition_check, expected_dimensions, flag_identity_check,
        hexagon_flip_check, ring, triple_relations_check,
    )
    n = args.n or 5
    for m in range(2, n + 1):
        yield f"dims:{m}", expected_dimensions(m), ring(m).dimensions()
    yield f"triples:{n}", True, triple_relations_check(n)
    yield f"degree-one:{n}", True, degree_one_decomposition_check(n)
    for k in range(2, n + 1):
        for seq in permutations(range(1, n + 1), k):
            yield f"flag:{seq}", True, flag_identity_check(seq, n)
            yield f"vanish:{seq}", True, cyclic_vanish_check(seq, n)
    yield "hexagon-flip", True, hexagon_flip_check()


def _suite_scattering(args) -> Iterator[Case]:
    from itertools import product
    from .cohomology import (
        FlowMatrix, balanced_graph, random_flows, scattering_check, scattering_iff_membership,
    )
    pairs = list(combinations(range(1, 5), 2))
    for vals in product((-1, 0, 1), repeat=6):
        f = FlowMatrix.from_alpha(4, dict(zip(pairs, vals)))
        yield f"n4:{vals}", True, scattering_iff_membership(f)
    rng = random.Random(args.seed)
    for i, f in enumerate(random_flows(5, args.flows, rng)):
        yield f"n5:{i:03d}", True, scattering_iff_membership(f)
    figs = {
        "leading-singularity": [(1, 2, 3), (3, 4, 5), (5, 6, 1), (2, 6, 4)],
        "central-triangulation": [(1, 2, 3), (3, 4, 5), (5, 6, 1), (1, 3, 5)],
        "fan-triangulation": [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6)],
    }
    for name, tris in figs.items():
        m = FlowMatrix.from_cycles(6, tris)
        yield f"balanced:{name}", True, balanced_graph(m)
        yield f"balanced-implies-scattering:{name}", True, scattering_check(m)


def _suite_hexagon(args) -> Iterator[Case]:
    from .cohomology import hexagon_flip_check, hexagon_ls_check
    rep = hexagon_ls_check()
    args._details = {"hexagon": rep}
    yield "exp-of-edge-sum", True, rep["exp_of_edge_sum"]
    yield "factorization-with-u45", True, rep["with_u45"]
    yield "rotation-invariant", True, rep["rotation_invariant"]
    yield "non-flag-triangulation", True, hexagon_flip_check()


def _suite_honeycomb(args) -> Iterator[Case]:
    from .blades import OnAffineWall, local_blade_check
    rng = random.Random(args.seed)
    for n in ([args.n] if args.n else [3, 4, 5]):
        for i in range(args.points):
            while True:
                x = [Fraction(rng.randint(-10 ** 4, 10 ** 4), rng.randint(1, 997)) for _ in range(n - 1)]
                x.append(-sum(x))
                try:
                    ok = local_blade_check(x)
                    break
                except OnAffineWall:
                    continue
            yield f"n{n}:{i:03d}", True, ok


def _suite_circle(args) -> Iterator[Case]:
    from .circle import count_by_blocks, count_by_blocks_brute, cyclic_invariance_check
    n = args.n or 4
    rng = random.Random(args.seed)
    for s in enumerate_osps(n):
        yield f"invariance:{s}", True, cyclic_invariance_check(s, 10, rng=rng)
    for m in range(1, min(n, 6) + 1):
        yield f"count:{m}", count_by_blocks(m), count_by_blocks_brute(m)


SUITES: dict[str, Callable] = {
    "mu": _suite_mu,
    "flag": _suite_flag,
    "triangulation": _suite_triangulation,
    "cyclic-sum": _suite_cyclic_sum,
    "minkowski": _suite_minkowski,
    "canonical": _suite_canonical,
    "decoupling": _suite_decoupling,
    "shuffle-example": _suite_shuffle,
    "cohomology": _suite_cohomology,
    "scattering": _suite_scattering,
    "hexagon-ls": _suite_hexagon,
    "honeycomb": _suite_honeycomb,
    "circle": _suite_circle,
}


def run_suite(name: str, args) -> RunReport:
    t0 = time.perf_counter()
    args._details = {}
    rep = _collect(name, SUITES[name](args))
    rep.details = args._details
    if getattr(args, "timing", False):
        rep.elapsed = (time.perf_counter() - t0) * 1000
    return rep


# ----------------------------------------------------------------------------
# output
# ----------------------------------------------------------------------------

def _emit_rows(header: list[str], rows: list[list], fmt: str, payload: dict, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        for r in rows:
            out.write(" ".join(str(x) for x in r) + "\n")


def _emit_report(rep: RunReport, fmt: str, out) -> None:
    data = rep.to_json()
    if fmt == "json":
        out.write(json.dumps(data, indent=2) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case", "expected", "got"])
        for f in data["failures"]:
            w.writerow([f["case"], json.dumps(f["expected"]), json.dumps(f["got"])])
        out.write(buf.getvalue())
    else:
        status = "PASS" if rep.ok else "FAIL"
        line = f"{rep.suite}: {status} ({rep.cases} cases, {len(rep.failures)} failures"
        if rep.elapsed is not None:
            line += f", {rep.elapsed:.0f} ms"
        out.write(line + ")\n")
        for f in data["failures"]:
            out.write(f"  {f['case']}: expected {f['expected']}, got {f['got']}\n")
        for k, v in rep.details.items():
            out.write(f"  {k}: {json.dumps(v)}\n")


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------

def cmd_tables(args, out) -> int:
    from .canonical import blade_row, plate_row
    from .circle import count_by_blocks
    fn = {"blades": blade_row, "plates": plate_row, "circle": count_by_blocks}[args.table]
    limit = 10 if args.table == "circle" else 30
    if not 1 <= args.n <= limit:
        raise UsageError(f"--n must be between 1 and {limit}")
    rows = [[m] + fn(m) for m in range(1, args.n + 1)]
    header = ["n"] + [f"k{k}" for k in range(1, args.n + 1)]
    payload = {"table": args.table, "rows": [{"n": r[0], "values": r[1:]} for r in rows]}
    _emit_rows(header, rows, args.format, payload, out)
    return EXIT_OK


def cmd_gf(args, out) -> int:
    from .canonical import NeedMoreTerms, diagonal_numerator
    try:
        p = diagonal_numerator(args.d, args.terms)
    except NeedMoreTerms as exc:
        out.write(f"{exc}\n")
        return EXIT_FAIL
    payload = {"d": args.d, "numerator": str(p), "coefficients": list(p.coefficients),
               "denominator_power": 2 * args.d + 1}
    if args.format == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    elif args.format == "csv":
        out.write("degree,coefficient\n" + "".join(f"{i},{c}\n" for i, c in enumerate(p.coefficients)))
    else:
        out.write(f"({p})/(1-x)^{2 * args.d + 1}\n")
    return EXIT_OK


def cmd_conjecture(args, out) -> int:
    from .canonical import conjecture_check
    rep = conjecture_check(args.max_diagonal)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rep[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rep)
        out.write(buf.getvalue())
    elif args.format == "text":
        for r in rep:
            out.write(f"d={r['d']}: {r['numerator']}  sum={r['sum']}  "
                      f"{'PASS' if r['pass'] else 'FAIL'}\n")
    else:
        out.write(json.dumps(rep, indent=2) + "\n")
    return EXIT_OK if all(r["pass"] for r in rep) else EXIT_FAIL


def cmd_verify(args, out) -> int:
    rep = run_suite(args.suite, args)
    _emit_report(rep, args.format, out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def _full_osp(s: OSP) -> int:
    n = max(s.support)
    if s.support != frozenset(range(1, n + 1)):
        raise UsageError("the ordered set partition must cover {1..n}")
    return n


def cmd_straighten(args, out) -> int:
    from .canonical import straighten
    s = parse_osp(args.osp)
    n = _full_osp(s)
    if n > 6:
        raise UsageError("straightening is supported for n <= 6")
    coords = straighten(s, n)
    rows = sorted(((str(e), str(c)) for e, c in coords.items()))
    payload = {"osp": str(s), "n": n, "terms": [{"element": e, "coeff": c} for e, c in rows]}
    _emit_rows(["element", "coeff"], [list(r) for r in rows], args.format, payload, out)
    return EXIT_OK


def cmd_expand(args, out) -> int:
    from .canonical import CanonicalElement, expand_canonical_product
    try:
        parts = [parse_osp(p) for p in args.parts.split(";")]
        e = CanonicalElement(parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    terms = expand_canonical_product(e)
    rows = [[str(u), c] for u, c in terms.items()]
    payload = {"element": str(e), "terms": [{"osp": u, "coeff": c} for u, c in rows]}
    _emit_rows(["osp", "coeff"], rows, args.format, payload, out)
    return EXIT_OK


def cmd_blade(args, out) -> int:
    from .blades import describe
    s = parse_osp(args.osp)
    n = args.n or max(s.support)
    if max(s.support) > n:
        raise UsageError("--n is smaller than the largest element")
    info = describe(s, n)
    if args.format == "json":
        out.write(json.dumps(info, indent=2) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cone", "lines", "rays"])
        for i, c in enumerate(info["cones"]):
            w.writerow([i, json.dumps(c["lines"]), json.dumps(c["rays"])])
        out.write(buf.getvalue())
    else:
        out.write(f"blade of {info['label']} in V0^{n}: {len(info['cones'])} cones\n")
        for c in info["cones"]:
            out.write(f"  lines={c['lines']} rays={c['rays']}\n")
    return EXIT_OK


def _parse_alpha(text: str) -> dict:
    """JSON object {"i,j": value} or list [[i, j, value], ...]."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--alpha is not valid JSON: {exc}") from None
    items = raw.items() if isinstance(raw, dict) else raw
    out = {}
    try:
        for entry in items:
            if isinstance(raw, dict):
                key, val = entry
                i, j = (int(t) for t in str(key).split(","))
            else:
                i, j, val = entry
            out[(int(i), int(j))] = Fraction(str(val))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad --alpha entry: {exc}") from None
    return out


def cmd_cohomology(args, out) -> int:
    from . import cohomology as co
    if args.coh_command == "dims":
        if not 2 <= args.n <= 6:
            raise UsageError("--n must be between 2 and 6")
        got = co.ring(args.n).dimensions()
        expected = co.expected_dimensions(args.n)
        payload = {"n": args.n, "dimensions": got, "expected": expected, "pass": got == expected}
        rows = [[j, d, e] for j, (d, e) in enumerate(zip(got, expected))]
        _emit_rows(["degree", "dimension", "expected"], rows, args.format, payload, out)
        return EXIT_OK if payload["pass"] else EXIT_FAIL
    if args.coh_command == "scattering":
        alpha = _parse_alpha(args.alpha)
        n = args.n or max((max(k) for k in alpha), default=0)
        if not 2 <= n <= 6:
            raise UsageError("n must be between 2 and 6")
        try:
            flow = co.FlowMatrix(n, alpha)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        balanced = co.scattering_check(flow)
        member = co.subalgebra_membership(co.flow_exponential(flow))
        payload = {"n": n, "balanced": balanced, "member": member, "agree": balanced == member}
    else:
        rep = co.hexagon_ls_check()
        payload = {**rep, "flip_identity": co.hexagon_flip_check()}
        payload["pass"] = (payload["exp_of_edge_sum"] and payload["rotation_invariant"]
                           and payload["flip_identity"] and (rep["as_printed"] or rep["with_u45"]))
    rows = [[k, v] for k, v in payload.items()]
    _emit_rows(["key", "value"], rows, args.format, payload, out)
    ok = payload["agree"] if args.coh_command == "scattering" else payload["pass"]
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="permblades", description=__doc__)
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["text", "json", "csv"], default="text")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tables", parents=[fmt], help="enumeration tables")
    t.add_argument("table", choices=["plates", "blades", "circle"])
    t.add_argument("--n", type=int, default=6)
    t.set_defaults(func=cmd_tables)

    g = sub.add_parser("gf-diagonal", parents=[fmt], help="generating function numerator of a diagonal")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--terms", type=int, default=None)
    g.set_defaults(func=cmd_gf)

    c = sub.add_parser("conjecture", help="numerator symmetry and unimodality")
    c.add_argument("kind", choices=["unimodality"])
    c.add_argument("--max-diagonal", type=int, default=10)
    c.add_argument("--format", choices=["text", "json", "csv"], default="json")
    c.set_defaults(func=cmd_conjecture)

    v = sub.add_parser("verify", parents=[fmt], help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--trials", type=int, default=25)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--points", type=int, default=100, help="honeycomb points per n")
    v.add_argument("--flows", type=int, default=200, help="random flows at n=5")
    v.add_argument("--timing", action="store_true", help="include elapsed time")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("straighten", parents=[fmt], help="expand a graduated blade canonically")
    s.add_argument("--osp", required=True)
    s.set_defaults(func=cmd_straighten)

    e = sub.add_parser("expand-product", parents=[fmt], help="expand a canonical product")
    e.add_argument("--parts", required=True, help="parts separated by ';', e.g. '1|2|3;1|4|5'")
    e.set_defaults(func=cmd_expand)

    b = sub.add_parser("blade", help="blade utilities")
    bsub = b.add_subparsers(dest="blade_command", required=True)
    bd = bsub.add_parser("describe", parents=[fmt], help="cones and function of a blade")
    bd.add_argument("--osp", required=True)
    bd.add_argument("--n", type=int, default=None)
    bd.set_defaults(func=cmd_blade)

    h = sub.add_parser("cohomology", help="the nilpotent ring and its subalgebra")
    hsub = h.add_subparsers(dest="coh_command", required=True)
    hd = hsub.add_parser("dims", parents=[fmt], help="per-degree dimensions")
    hd.add_argument("--n", type=int, required=True)
    hs = hsub.add_parser("scattering", parents=[fmt], help="balance vs membership for one flow")
    hs.add_argument("--alpha", required=True, help='JSON, e.g. \'{"1,2": 1, "2,3": 1, "3,1": 1}\'')
    hs.add_argument("--n", type=int, default=None)
    hsub.add_parser("hexagon-ls", parents=[fmt], help="hexagon leading singularity report")
    h.set_defaults(func=cmd_cohomology)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args, sys.stdout)
    except UsageError as exc:
        sys.stderr.write(f"permblades: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
