"""Command-line surface: groups, Eulerian profiles, codes, quantum codes,
published-table reproduction, verification sweeps, and artifact export.

Every command prints a human-readable summary to stdout and, with --out,
writes a machine JSON report (deterministic: fixed enumeration order, sorted
keys, no timestamps).  Exit status is 0 iff nothing failed beyond the single
documented table discrepancy (the rank-3 symmetric-group order-1 code has
dimension 12, not 13 as published).
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import codes, eulerian, gf2, quantum
from .coxgroup import (
    build_system,
    enumerate_group,
    export_cayley_dot,
    standard_coset,
    system_from_descriptor,
)
from .errors import BadParameterError, CoxcodesError

# ---------------------------------------------------------------------------
# Published reference tables: {(column, r): (n, k, d, italic)}
# Italic distances are conjectured in the source; regular ones are proven.
# ---------------------------------------------------------------------------

PUBLISHED_AM = {
    (2, 1): (6, 5, 2, False), (2, 2): (6, 6, 1, False),
    (3, 1): (24, 13, 4, False), (3, 2): (24, 23, 2, False),
    (3, 3): (24, 24, 1, False),
    (4, 1): (120, 27, 12, False), (4, 2): (120, 93, 4, False),
    (4, 3): (120, 119, 2, False), (4, 4): (120, 120, 1, False),
    (5, 1): (720, 58, 36, True), (5, 2): (720, 360, 8, False),
    (5, 3): (720, 662, 4, False), (5, 4): (720, 719, 2, False),
    (5, 5): (720, 720, 1, False),
    (6, 1): (5040, 121, 144, True), (6, 2): (5040, 1312, 24, True),
    (6, 3): (5040, 3728, 8, False), (6, 4): (5040, 4919, 4, False),
    (6, 5): (5040, 5039, 2, False), (6, 6): (5040, 5040, 1, False),
}

PUBLISHED_I23 = {
    (1, 1): (6, 5, 2, False), (1, 2): (6, 6, 1, False),
    (2, 1): (36, 9, 12, False), (2, 2): (36, 27, 4, False),
    (2, 3): (36, 35, 2, False), (2, 4): (36, 36, 1, False),
    (3, 1): (216, 13, 72, False), (3, 2): (216, 64, 24, True),
    (3, 3): (216, 152, 8, False), (3, 4): (216, 203, 4, False),
    (3, 5): (216, 215, 2, False), (3, 6): (216, 216, 1, False),
    (4, 1): (1296, 17, 432, False), (4, 2): (1296, 117, 144, True),
    (4, 3): (1296, 421, 48, True), (4, 4): (1296, 875, 16, False),
    (4, 5): (1296, 1179, 8, False), (4, 6): (1296, 1279, 4, False),
    (4, 7): (1296, 1295, 2, False), (4, 8): (1296, 1296, 1, False),
    (5, 1): (7776, 21, 2592, False), (5, 2): (7776, 186, 864, True),
    (5, 3): (7776, 906, 288, True), (5, 4): (7776, 2676, 96, True),
    (5, 5): (7776, 5100, 32, False), (5, 6): (7776, 6870, 16, False),
    (5, 7): (7776, 7590, 8, False), (5, 8): (7776, 7755, 4, False),
    (5, 9): (7776, 7775, 2, False), (5, 10): (7776, 7776, 1, False),
}

PUBLISHED_I24 = {
    (1, 1): (8, 7, 2, False), (1, 2): (8, 8, 1, False),
    (2, 1): (64, 13, 16, False), (2, 2): (64, 51, 4, False),
    (2, 3): (64, 63, 2, False), (2, 4): (64, 64, 1, False),
    (3, 1): (512, 19, 128, False), (3, 2): (512, 130, 32, True),
    (3, 3): (512, 382, 8, False), (3, 4): (512, 493, 4, False),
    (3, 5): (512, 511, 2, False), (3, 6): (512, 512, 1, False),
    (4, 1): (4096, 25, 1024, False), (4, 2): (4096, 245, 256, True),
    (4, 3): (4096, 1181, 64, True), (4, 4): (4096, 2915, 16, False),
    (4, 5): (4096, 3851, 8, False), (4, 6): (4096, 4071, 4, False),
    (4, 7): (4096, 4095, 2, False), (4, 8): (4096, 4096, 1, False),
}

# Published counts of elements by descent number for the exceptional types.
PUBLISHED_EXCEPTIONAL = {
    "H3": (1, 59, 59, 1),
    "H4": (1, 2636, 9126, 2636, 1),
    "F4": (1, 236, 678, 236, 1),
    "E6": (1, 1272, 12183, 24928, 12183, 1272, 1),
    "E7": (1, 17635, 309969, 1123915, 1123915, 309969, 17635, 1),
    "E8": (1, 881752, 28336348, 169022824, 300247750, 169022824, 28336348,
           881752, 1),
}

# The published rank-3 symmetric-group order-1 cell lists dimension 13, but
# the code is self-dual of length 24, forcing dimension 12 (also the value of
# the order-1 dimension formula 2^(m+1) - m - 1 and of direct descent
# counting).  The report carries this one cell as a documented diff.
DOCUMENTED_ERRATA = [{"table": "Am", "cell": [3, 1], "field": "k",
                      "published": 13, "computed": 12}]


def _system_from_args(args) -> "tuple":
    """Resolve --family/--m/--n/--mu/--product/--matrix into a system."""
    if getattr(args, "matrix", None):
        with open(args.matrix, encoding="utf-8") as fh:
            return system_from_descriptor(json.load(fh))
    if getattr(args, "product", None):
        blocks = [_parse_label(tok) for tok in args.product.split(",") if tok]
        if len(blocks) == 1:
            return build_system(**blocks[0])
        return build_system(product=blocks)
    if not getattr(args, "family", None):
        raise BadParameterError("specify --family, --product, or --matrix")
    fam = args.family.upper()
    kwargs = {"family": fam}
    if fam == "I2":
        if args.n is None:
            raise BadParameterError("family I2 requires --n")
        if args.mu and args.mu > 1:
            return build_system(product=[{"family": "I2", "n": args.n}] * args.mu)
        kwargs["n"] = args.n
    elif fam in ("A", "B", "D"):
        if args.m is None:
            raise BadParameterError(f"family {fam} requires --m")
        kwargs["m"] = args.m
    return build_system(**kwargs)


_LABEL_RE = re.compile(r"^([ABDEFH])(\d+)$|^I2\((\d+)\)$", re.IGNORECASE)


def _parse_label(token: str) -> dict:
    """'A3' -> {family: A, m: 3}; 'I2(5)' -> {family: I2, n: 5}; 'E6' etc."""
    m = _LABEL_RE.match(token.strip())
    if not m:
        raise BadParameterError(f"cannot parse component label {token!r}")
    if m.group(3):
        return {"family": "I2", "n": int(m.group(3))}
    letter, num = m.group(1).upper(), int(m.group(2))
    if letter in ("A", "B", "D"):
        return {"family": letter, "m": num}
    return {"family": f"{letter}{num}"}


def _emit(args, report: dict, human: str):
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None) == "-":
        sys.stdout.write(text)
    else:
        print(human)
        if getattr(args, "out", None):
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_group(args) -> int:
    system = _system_from_args(args)
    table = enumerate_group(system)
    by_length = {}
    for w in range(table.size):
        by_length[int(table.length[w])] = by_length.get(int(table.length[w]), 0) + 1
    report = {
        "label": system.label,
        "rank": system.rank,
        "order": table.size,
        "components": [c.label for c in system.components],
        "elements_by_length": [by_length[l] for l in sorted(by_length)],
        "longest_element_length": max(by_length),
    }
    human = (
        f"{system.label}: rank {system.rank}, order {table.size}, "
        f"longest element length {max(by_length)}"
    )
    _emit(args, report, human)
    return 0


def cmd_euler(args) -> int:
    system = _system_from_args(args)
    profile = eulerian.profile_for_system(system)
    report = {
        "label": system.label,
        "rank": profile.rank,
        "counts": profile.to_json(),
        "group_order": str(profile.group_order),
    }
    if args.r is not None:
        rate, phi = eulerian.code_rate_point(profile, args.r)
        report["rate"] = {"r": args.r, "numerator": str(rate.numerator),
                          "denominator": str(rate.denominator),
                          "gaussian_reference": phi}
    human = f"{system.label} descent counts: {list(profile.counts)}"
    _emit(args, report, human)
    return 0


def _code_report(system, table, r, mode: str, budget=None) -> dict:
    code = codes.build_code(table, system, r)
    m = system.rank
    entry = {
        "family": system.label,
        "m": m,
        "r": r,
        "n": code.n,
        "k": code.k,
    }
    conj = codes.conjectured_distance(system, r)
    if mode == "exact":
        rep = codes.exact_min_distance(code, budget=budget)
        entry["d"] = rep.exact if rep.exact is not None else conj
        entry["d_status"] = rep.status
        entry["lower_bound"] = rep.lower_bound
    else:
        entry["d"] = conj
        lower = 1 if r >= m else 2 ** (m - r)
        if conj <= lower or r >= m // 2 or r in (m - 1, m):
            entry["d_status"] = "proven-by-corollary"
        else:
            entry["d_status"] = "conjecture-only"
    return entry


def cmd_code(args) -> int:
    if args.r is None:
        raise BadParameterError("code command requires --r")
    system = _system_from_args(args)
    table = enumerate_group(system)
    entry = _code_report(system, table, args.r, args.mode or "formula")
    human = (
        f"{entry['family']} order {entry['r']}: "
        f"[{entry['n']}, {entry['k']}, {entry['d']}] ({entry['d_status']})"
    )
    _emit(args, entry, human)
    return 0


def cmd_quantum(args) -> int:
    if args.q is None or args.r is None:
        raise BadParameterError("quantum command requires --q and --r")
    system = _system_from_args(args)
    report = {"family": system.label, "q": args.q, "r": args.r}
    human_lines = []
    if args.q == args.r:
        profile = eulerian.profile_for_system(system)
        report.update({"n": profile.group_order, "k": 0, "d": None})
        human_lines.append(
            f"{system.label} Q({args.q},{args.r}): k=0, distance not defined "
            "(degenerate q = r)"
        )
    else:
        n, k, d = quantum.css_params(system, args.q, args.r)
        report.update({"n": n, "k": k, "d": d})
        human_lines.append(f"{system.label} Q({args.q},{args.r}): [[{n},{k},{d}]]")
    if args.zk is not None:
        rank = args.coset_rank if args.coset_rank is not None else system.rank
        pred = quantum.zk_predict(args.q, args.r, args.zk, rank, m=system.rank)
        report["zk"] = {"k_level": args.zk, "coset_rank": rank,
                        "predicted": pred.verdict}
        human_lines.append(f"Z({args.zk}) on a rank-{rank} coset: {pred.verdict}")
        table = enumerate_group(system)
        css = quantum.build_css(table, system, args.q, args.r)
        sub_dim = css.c2.k - css.k
        if sub_dim <= quantum.FULL_MODE_C1PERP_MAX and css.c2.k <= quantum.FULL_MODE_C2_MAX:
            coset = standard_coset(table, 0, range(rank))
            sim = quantum.zk_simulate(css, coset, args.zk)
            report["zk"]["simulated"] = sim.verdict
            report["zk"]["agree"] = sim.verdict == pred.verdict
            human_lines.append(f"simulated: {sim.verdict}")
    _emit(args, report, "\n".join(human_lines))
    if "zk" in report and not report["zk"].get("agree", True):
        return 1
    return 0


def _table_cells(table_id: str):
    if table_id == "Am":
        published = PUBLISHED_AM
        make = lambda col: build_system(family="A", m=col)
    elif table_id == "I23":
        published = PUBLISHED_I23
        make = lambda col: build_system(
            product=[{"family": "I2", "n": 3}] * col
        ) if col > 1 else build_system(family="I2", n=3)
    elif table_id == "I24":
        published = PUBLISHED_I24
        make = lambda col: build_system(
            product=[{"family": "I2", "n": 4}] * col
        ) if col > 1 else build_system(family="I2", n=4)
    else:
        raise BadParameterError(f"unknown table {table_id!r}")
    return published, make


def _exact_feasible(k: int, conj: int, lower: int, budget: int) -> bool:
    """Cheap cost bound: can the exact search finish within the leaf budget?"""
    if conj <= lower or k <= codes.FULL_ENUM_MAX_DIM:
        return True
    import math as _math

    h = 2  # pessimistic: at least two disjoint information sets exist (d >= 2)
    total = 0
    w = 0
    while h * (w + 1) < conj:
        w += 1
        total += h * _math.comb(k, w)
        if total > budget:
            return False
    return True


def table_report(table_id: str, mode: str = "formula", budget=None) -> dict:
    """Reproduce a published parameter table and list any disagreements."""
    if table_id == "exceptional-eulerian":
        cells, diffs = [], []
        for name in sorted(PUBLISHED_EXCEPTIONAL):
            prof = eulerian.profile_exceptional(name)
            cells.append({"family": name, "counts": prof.to_json(),
                          "order": str(prof.group_order)})
            if tuple(prof.counts) != PUBLISHED_EXCEPTIONAL[name]:
                diffs.append({"table": table_id, "cell": name,
                              "published": list(PUBLISHED_EXCEPTIONAL[name]),
                              "computed": list(prof.counts)})
        return {"table": table_id, "mode": "formula", "cells": cells,
                "diffs": diffs}

    published, make = _table_cells(table_id)
    if budget is None:
        budget = codes.search_budget()
    cells, diffs = [], []
    systems = {}
    for (col, r), (pn, pk, pd, italic) in sorted(published.items()):
        if col not in systems:
            system = make(col)
            systems[col] = (system, enumerate_group(system) if mode == "exact" else None)
        system, gtable = systems[col]
        m = system.rank
        profile = eulerian.profile_for_system(system)
        n = profile.group_order
        k = profile.prefix_sum(r)
        conj = codes.conjectured_distance(system, r)
        lower = 1 if r >= m else 2 ** (m - r)
        entry = {"family": system.label, "m": m, "r": r, "n": n, "k": k,
                 "d": conj, "published_italic": italic}
        if conj <= lower or r >= m // 2 or r in (m - 1, m):
            entry["d_status"] = "proven-by-corollary"
        else:
            entry["d_status"] = "conjecture-only"
        if mode == "exact" and entry["d_status"] == "conjecture-only":
            if _exact_feasible(k, conj, lower, budget):
                code = codes.build_code(gtable, system, r)
                rep = codes.exact_min_distance(code, budget=budget)
                if rep.exact is not None:
                    entry["d"] = rep.exact
                    entry["d_status"] = rep.status
                else:
                    entry["d_status"] = "conjecture-only-budget-exhausted"
            else:
                entry["d_status"] = "conjecture-only-budget-insufficient"
        cells.append(entry)
        if (n, k) != (pn, pk) or entry["d"] != pd:
            diffs.append({"table": table_id, "cell": [col, r],
                          "published": [pn, pk, pd],
                          "computed": [n, k, entry["d"]]})
    return {"table": table_id, "mode": mode, "cells": cells, "diffs": diffs}


def _is_documented(diff: dict) -> bool:
    for known in DOCUMENTED_ERRATA:
        if diff["table"] == known["table"] and diff["cell"] == known["cell"]:
            pub, comp = diff["published"], diff["computed"]
            # only the dimension may differ, in exactly the documented way
            if (pub[0] == comp[0] and pub[2] == comp[2]
                    and pub[1] == known["published"] and comp[1] == known["computed"]):
                return True
    return False


def _table_markdown(report: dict) -> str:
    lines = [f"## table {report['table']} ({report['mode']} mode)", ""]
    if report["table"] == "exceptional-eulerian":
        lines.append("| type | descent counts | order |")
        lines.append("|---|---|---|")
        for cell in report["cells"]:
            lines.append(
                f"| {cell['family']} | {', '.join(cell['counts'])} | {cell['order']} |"
            )
    else:
        lines.append("| system | m | r | n | k | d | status |")
        lines.append("|---|---|---|---|---|---|---|")
        for cell in report["cells"]:
            d = f"*{cell['d']}*" if cell["published_italic"] else str(cell["d"])
            lines.append(
                f"| {cell['family']} | {cell['m']} | {cell['r']} | {cell['n']} "
                f"| {cell['k']} | {d} | {cell['d_status']} |"
            )
    if report["diffs"]:
        lines.append("")
        for diff in report["diffs"]:
            tag = "documented" if _is_documented(diff) else "UNEXPECTED"
            lines.append(
                f"- {tag} diff at cell {diff['cell']}: published "
                f"{diff['published']}, computed {diff['computed']}"
            )
    return "\n".join(lines)


def cmd_tables(args) -> int:
    report = table_report(args.table, mode=args.mode or "formula")
    _emit(args, report, _table_markdown(report))
    unexpected = [d for d in report["diffs"] if not _is_documented(d)]
    return 1 if unexpected else 0


def cmd_verify(args) -> int:
    failures = 0
    report = {}
    human = []
    if args.sweep is not None:
        entries = codes.conjecture_sweep(args.sweep, jobs=args.jobs or 1)
        report["sweep"] = {
            "max_length": args.sweep,
            "codes_checked": len(entries),
            "entries": [
                {"label": e.label, "m": e.m, "n": e.n, "r": e.r, "k": e.k,
                 "conjectured": e.conjectured, "exact": e.exact,
                 "status": e.status, "passed": e.passed}
                for e in entries
            ],
        }
        bad = [e for e in entries if not e.passed]
        failures += len(bad)
        human.append(
            f"sweep |W| <= {args.sweep}: {len(entries)} codes, "
            f"{len(bad)} mismatches"
        )
    else:
        system = _system_from_args(args)
        table = enumerate_group(system)
        results = codes.structural_verify(table, system)
        report["structural"] = {
            "label": system.label,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in results
            ],
        }
        bad = [c for c in results if not c.passed]
        failures += len(bad)
        human.append(
            f"{system.label}: {len(results)} structural checks, {len(bad)} failed"
        )
        for c in bad:
            human.append(f"  FAIL {c.name} {c.detail}")
    _emit(args, report, "\n".join(human))
    return 1 if failures else 0


def cmd_export(args) -> int:
    system = _system_from_args(args)
    table = enumerate_group(system)
    if args.what == "genmat":
        if args.r is None:
            raise BadParameterError("genmat export requires --r")
        code = codes.build_code(table, system, args.r)
        _, rref, _ = gf2.rank_and_rref(code.genmat)
        payload = gf2.write_genmat(rref)
    elif args.what == "cayley":
        payload = export_cayley_dot(table, system)
    elif args.what == "stabilizers":
        if args.q is None or args.r is None:
            raise BadParameterError("stabilizer export requires --q and --r")
        payload = quantum.export_stabilizers(table, args.q, args.r)
    else:
        raise BadParameterError(f"unknown export kind {args.what!r}")
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print(f"wrote {args.what} for {system.label} to {args.out}")
    else:
        sys.stdout.write(payload)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_system_flags(p):
    p.add_argument("--family", help="A | B | D | I2 | H3 | H4 | F4 | E6 | E7 | E8")
    p.add_argument("--m", type=int, help="rank parameter for A/B/D")
    p.add_argument("--n", type=int, help="dihedral parameter for I2")
    p.add_argument("--mu", type=int, help="number of I2(n) factors")
    p.add_argument("--product", help="comma-separated component labels, e.g. 'A3,I2(5)'")
    p.add_argument("--matrix", help="path to a JSON defining-matrix descriptor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxcodes",
        description="Binary codes and CSS quantum codes from finite Coxeter groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="enumerate a group and print its summary")
    _add_system_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("euler", help="descent-statistic profile")
    _add_system_flags(p)
    p.add_argument("--r", type=int, help="also report the order-r rate point")
    p.add_argument("--out")
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("code", help="classical code parameters")
    _add_system_flags(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=["formula", "exact"], default="formula")
    p.add_argument("--out")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("quantum", help="CSS code parameters and Z(k) verdicts")
    _add_system_flags(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--zk", type=int, help="classify transversal Z(k)")
    p.add_argument("--coset-rank", type=int, dest="coset_rank")
    p.add_argument("--out")
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("tables", help="reproduce a published parameter table")
    p.add_argument("--table", required=True,
                   choices=["Am", "I23", "I24", "exceptional-eulerian"])
    p.add_argument("--mode", choices=["formula", "exact"], default="formula")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="structural checks or distance sweep")
    _add_system_flags(p)
    p.add_argument("--sweep", type=int, help="max group order for the distance sweep")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write generator matrices, DOT graphs, stabilizers")
    _add_system_flags(p)
    p.add_argument("--what", required=True, choices=["genmat", "cayley", "stabilizers"])
    p.add_argument("--r", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CoxcodesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
