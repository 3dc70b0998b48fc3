"""Command-line interface: isoquot <command> [flags].

Exit codes: 0 success, 1 semantic failure (invalid spec, table or
relation mismatch), 2 resource bound exceeded.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import itertools
import json
import logging
import os
import sys
import time
from collections import Counter

from .exactnum import root_of_unity
from .groups import (KINDS, BoundExceeded, GroupSpec, InvalidSpec, abstract_order,
                     generate, is_fixed_point_free, is_trivial, pq_conditions_hold,
                     validate_spec, valid_specs)
from .linalg import diag
from .reps import (RepError, RepSpec, build, expected_family, irreducible,
                   list_count, list_dimension, rep_classes, spec_field,
                   verify_relations)
from . import gorenstein as gor
from . import molien

log = logging.getLogger("isoquot")

EXIT_OK, EXIT_FAIL, EXIT_BOUND = 0, 1, 2
SPEC_FLAGS = ("m", "n", "r", "l", "k", "v", "a")


# ---------------------------------------------------------------- argument helpers

def _add_spec(p, required=True):
    p.add_argument("--type", dest="kind", choices=KINDS, required=required)
    for f in SPEC_FLAGS:
        p.add_argument(f"--{f}", type=int)


def _add_rep(p):
    p.add_argument("--family", help="defaults to the family of the spec's row")
    p.add_argument("--rep-k", type=int)
    p.add_argument("--rep-l", type=int)
    p.add_argument("--rep-j", type=int)


def _spec(args) -> GroupSpec:
    return GroupSpec(args.kind, *(getattr(args, f) for f in SPEC_FLAGS))


def _checked_spec(args) -> GroupSpec:
    s = _spec(args)
    bad = validate_spec(s)
    if bad:
        raise InvalidSpec(f"{s.label()}: " + "; ".join(bad))
    return s


def _repspec(args, spec) -> RepSpec:
    """Representation from flags; with no indices, the first listed representation."""
    if args.rep_k is None and args.rep_l is None and args.rep_j is None:
        first = rep_classes(spec).repspecs[0]
        if args.family in (None, first.family):
            return first
    fam = args.family or expected_family(spec)
    return RepSpec(fam, args.rep_k, args.rep_l, args.rep_j)


def _emit(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")


# ---------------------------------------------------------------- commands

def cmd_validate(args, out):
    s = _spec(args)
    bad = validate_spec(s)
    report = {"group": s.to_json(), "valid": not bad, "violations": bad}
    if not bad:
        report["order"] = abstract_order(s)
        if is_trivial(s):
            report["note"] = "trivial group"
    _emit(report, out)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_build_rep(args, out):
    s = _checked_spec(args)
    rep = build(s, _repspec(args, s))
    _emit(rep.to_json(), out)
    return EXIT_OK


def _verify_one(spec, rs, bound):
    rep = build(spec, rs)
    G = rep.group(bound)
    dc = gor.det_table_check(spec, rs)
    res = {
        "rep": rs.to_json(), "dim": rep.dim,
        "order": G.order, "expected_order": abstract_order(spec),
        "relations_failed": verify_relations(rep),
        "fixed_point_free": is_fixed_point_free(G),
        "irreducible": irreducible(rep, G, exact=False),
        "expected_dim": list_dimension(spec, rs.family),
        "det_word": dc.word, "det_computed": dc.computed.to_text(),
        "det_formula": dc.formula.to_text(), "det_match": dc.match,
        "det_others_one": dc.others_one, "det_consistent": dc.consistent,
    }
    if dc.erratum:
        res["erratum"] = dc.erratum
        res["det_corrected"] = dc.corrected.to_text()
        res["det_corrected_match"] = all(c[1] == c[3] for c in dc.checks)
    ok = (res["order"] == res["expected_order"] and not res["relations_failed"]
          and res["fixed_point_free"] and res["dim"] == res["expected_dim"]
          and dc.others_one and dc.consistent)
    return res, ok


def cmd_verify(args, out):
    s = _checked_spec(args)
    if args.family or args.rep_k or args.rep_l or args.rep_j:
        targets = [_repspec(args, s)]
    else:
        targets = rep_classes(s).repspecs
    ok_all = True
    for rs in targets:
        res, ok = _verify_one(s, rs, args.bound)
        ok_all &= ok and res["irreducible"] and res["det_match"]
        _emit(res, out)
    return EXIT_OK if ok_all else EXIT_FAIL


def _known_count_erratum(spec):
    """Type II rows where pi o sigma = pi makes the induced rep reducible:
    d = 2, r = -1 (mod m), k = 1 + n/2 (mod n)."""
    return (spec.kind == "II" and spec.d == 2 and (spec.r + 1) % spec.m == 0
            and (spec.k - 1 - spec.n // 2) % spec.n == 0)


def sweep(max_order, kinds=KINDS, table4_s=2):
    """Every module invariant over all valid specs up to max_order."""
    report = {"max_order": max_order, "kinds": list(kinds),
              "counts": Counter(), "mismatches": [], "errata": []}
    c = report["counts"]

    def bad(kind, spec, **ctx):
        item = {"check": kind, "group": spec.to_json(), **ctx}
        known = False
        if kind in ("count", "irreducible") and _known_count_erratum(spec):
            known = True
        if kind == "det_formula" and ctx.get("corrected_match"):
            known = True
        (report["errata"] if known else report["mismatches"]).append(item)

    for spec in valid_specs(max_order, kinds):
        c["specs"] += 1
        if is_trivial(spec):
            c["trivial"] += 1
            continue
        rc = rep_classes(spec)
        expected = list_count(spec)
        if len(rc.reps) != expected:
            bad("count", spec, found=len(rc.reps), formula=str(expected))
        if gor.sl_condition(spec) != gor.group_in_sl(spec):
            bad("sl_column", spec, formula=gor.sl_condition(spec), computed=gor.group_in_sl(spec))
        for rep, G in zip(rc.reps, rc.groups):
            c["reps"] += 1
            rs = rep.rep
            # G lives on the first class's element tree; close this rep's own images
            own = generate(rep.images, max_order=abstract_order(spec) + 1, field=spec_field(spec))
            if own.order != abstract_order(spec):
                bad("order", spec, rep=rs.to_json(), found=own.order)
            failed = verify_relations(rep)
            c["relation_checks"] += 1
            if failed:
                bad("relations", spec, rep=rs.to_json(), failed=failed)
            if not is_fixed_point_free(G):
                bad("fixed_point_free", spec, rep=rs.to_json())
            if not irreducible(rep, G, exact=False):
                bad("irreducible", spec, rep=rs.to_json())
            if rep.dim != list_dimension(spec, rs.family):
                bad("dimension", spec, rep=rs.to_json(), found=rep.dim)
            dc = gor.det_table_check(spec, rs)
            if not dc.consistent or not dc.others_one:
                bad("det_consistency", spec, rep=rs.to_json())
            if dc.match:
                c["table_matches"] += 1
            else:
                c["table_mismatches"] += 1
                bad("det_formula", spec, rep=rs.to_json(), word=dc.word,
                    computed=dc.computed.to_text(), formula=dc.formula.to_text(),
                    corrected=dc.corrected.to_text(),
                    corrected_match=all(x[1] == x[3] for x in dc.checks),
                    note=dc.erratum)
            key = gor.canonical_key(spec, [rs])
            for a, b, cc in gor.admissible(spec):
                img = gor.automorphism_action(spec, a, b, cc, rs)
                if gor.canonical_key(spec, [img]) != key:
                    bad("orbit", spec, rep=rs.to_json(), abc=[a, b, cc])
                    break
        if spec.kind in gor.SOLVABLE_AND_NONSOLVABLE:
            raw = list(rc.raw_to_class)
            for s in range(1, table4_s + 1):
                for combo in itertools.combinations_with_replacement(raw, s):
                    c["table4_checks"] += 1
                    try:
                        gor.in_special_linear(spec, combo)
                    except gor.TableMismatch as e:
                        bad("table4", spec, summands=[r.to_json() for r in combo], error=str(e))
        if spec.kind == "I" or abstract_order(spec) <= 500:
            if not pq_conditions_hold(rc.groups[0]):
                bad("pq", spec)
    report["counts"] = dict(c)
    return report


def cmd_sweep(args, out):
    report = sweep(args.max_order, tuple(args.kinds.split(",")) if args.kinds else KINDS)
    text = json.dumps(report, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        out.write(text + "\n")
    log.info("sweep: %s, %d mismatches, %d known errata", report["counts"],
             len(report["mismatches"]), len(report["errata"]))
    if report["mismatches"] or (args.strict and report["errata"]):
        return EXIT_FAIL
    return EXIT_OK


def _records(args):
    kinds = tuple(args.kinds.split(",")) if args.kinds else gor.SOLVABLE_AND_NONSOLVABLE
    return gor.enumerate_singularities(args.dim, args.max_order, args.gorenstein, kinds,
                                       args.max_per_spec, args.workers)


def _write_records(recs, fmt, out):
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=gor.SingularityRecord.CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in recs:
            w.writerow(r.to_row())
    else:
        for r in recs:
            _emit(r.to_json(), out)


def cmd_enumerate(args, out):
    _write_records(_records(args), args.format, out)
    return EXIT_OK


def summarize(recs, dim):
    """Per-dimension overview of an enumeration."""
    by_kind = Counter(r.spec.kind for r in recs)
    cyclic = all(r.spec.kind == "I" and r.spec.d == 1 for r in recs)
    out = {"dim": dim, "records": len(recs),
           "gorenstein": sum(r.gorenstein for r in recs),
           "by_kind": dict(sorted(by_kind.items())),
           "only_cyclic": cyclic,
           "orders": sorted({r.order for r in recs})}
    if dim == 3:
        out["cyclic_orders_odd"] = all(r.spec.n % 2 for r in recs if r.gorenstein and r.spec.m == 1)
    return out


def cmd_classify(args, out):
    recs = _records(args)
    _write_records(recs, args.format, out)
    sys.stderr.write(json.dumps(summarize(recs, args.dim), sort_keys=True) + "\n")
    return EXIT_OK


def cmd_molien(args, out):
    if args.cyclic:
        exps = [int(x) for x in args.exponents.split(",")]
        G = generate({"A": diag([root_of_unity(e % args.cyclic, args.cyclic) for e in exps])},
                     max_order=args.bound)
        label = f"cyclic({args.cyclic}; {args.exponents})"
    else:
        s = _checked_spec(args)
        rep = build(s, _repspec(args, s))
        G = generate(rep.images, max_order=args.bound, field=spec_field(s))
        label = f"{s.label()} {rep.rep.label()}"
    H = molien.molien_series(G, args.bound)
    sym = molien.gorenstein_symmetry(H, G.dim)
    smooth = molien.shephard_todd_smooth(G, args.bound)
    out.write(f"group: {label}, order {G.order}, dim {G.dim}\n")
    out.write(f"H(t) = {H.to_text()}\n")
    out.write(f"series: {H.series(args.degree)}\n")
    out.write(f"symmetric: {'yes' if sym else 'no'}\n")
    out.write(f"smooth: {'yes' if smooth else 'no'}\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="isoquot", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="file of 'flag = value' lines (or JSON); flags override it")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check a group spec against its table conditions")
    _add_spec(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("build-rep", help="print the generator images of one representation")
    _add_spec(sp)
    _add_rep(sp)
    sp.set_defaults(func=cmd_build_rep)

    sp = sub.add_parser("verify", help="check order, relations, fixed points, determinants")
    _add_spec(sp)
    _add_rep(sp)
    sp.add_argument("--bound", type=int, default=5000)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="run every cross-check over all specs up to an order")
    sp.add_argument("--max-order", type=int, required=True)
    sp.add_argument("--kinds")
    sp.add_argument("--out")
    sp.add_argument("--strict", action="store_true", help="known errata also fail")
    sp.set_defaults(func=cmd_sweep)

    for name, func in (("enumerate", cmd_enumerate), ("classify", cmd_classify)):
        sp = sub.add_parser(name, help="list isolated quotient singularities of a dimension")
        sp.add_argument("--dim", type=int, required=True)
        sp.add_argument("--max-order", type=int, required=True)
        sp.add_argument("--gorenstein", action="store_true")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--kinds")
        sp.add_argument("--max-per-spec", type=int)
        sp.add_argument("--workers", type=int, default=1)
        sp.set_defaults(func=func)

    sp = sub.add_parser("molien", help="Molien series with symmetry and smoothness verdicts")
    _add_spec(sp, required=False)
    _add_rep(sp)
    sp.add_argument("--cyclic", type=int, help="use <diag(zeta_n^e1, ...)> instead of a spec")
    sp.add_argument("--exponents", default="1,1")
    sp.add_argument("--degree", type=int, default=12)
    sp.add_argument("--bound", type=int, default=molien.DEFAULT_BOUND)
    sp.set_defaults(func=cmd_molien)
    return p


def _read_config(path):
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return json.loads(text)
    cp = configparser.ConfigParser()
    cp.read_string("[isoquot]\n" + text)
    return dict(cp["isoquot"])


_REQUIRED = {"validate": ("kind",), "build-rep": ("kind",), "verify": ("kind",),
             "sweep": ("max_order",), "enumerate": ("dim", "max_order"),
             "classify": ("dim", "max_order")}


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    conf = {k.replace("-", "_"): v for k, v in _read_config(known.config).items()}
    if "type" in conf:
        conf["kind"] = conf.pop("type")
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    given = {a.dest for a in sub._actions
             if any(opt in argv or any(x.startswith(opt + "=") for x in argv)
                    for opt in a.option_strings)}
    for a in sub._actions:
        if a.dest in conf and a.dest not in given:
            val = conf[a.dest]
            if isinstance(a, argparse._StoreTrueAction):
                val = val if isinstance(val, bool) else str(val).lower() in ("1", "true", "yes")
            elif a.type is not None and val is not None:
                val = a.type(val)
            setattr(args, a.dest, val)
    missing = [a.option_strings[0] for a in sub._actions if a.dest in _REQUIRED.get(args.command, ())
               and getattr(args, a.dest) is None]
    if missing:
        parser.error(f"missing {', '.join(missing)} (neither flag nor config)")
    return args


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # required flags may come from the config file
    if "--config" in argv or any(x.startswith("--config=") for x in argv):
        for sp in parser._subparsers._group_actions[0].choices.values():
            for a in sp._actions:
                a.required = False
    args = _apply_config(parser, argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    t0 = time.time()
    try:
        code = args.func(args, sys.stdout)
    except BoundExceeded as e:
        sys.stderr.write(f"bound exceeded: {e}\n")
        return EXIT_BOUND
    except (InvalidSpec, RepError, gor.TableMismatch, ValueError, KeyError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAIL
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    log.info("%s finished in %.1fs", args.command, time.time() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
