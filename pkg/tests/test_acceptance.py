"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run alone with
    pytest tests/test_acceptance.py -v
The summary lines appear in the "acceptance criteria" section at the end.
"""
import itertools
import json
import subprocess
import sys
import time

import pytest

from conftest import RESULTS, START
from isoquot import gorenstein as gor
from isoquot.groups import (abstract_order, fpf_flags_of_sum, generate,
                            is_fixed_point_free, is_trivial, pq_conditions_hold, valid_specs)
from isoquot.linalg import diag
from isoquot.molien import gorenstein_symmetry, molien_series
from isoquot.reps import (irreducible, list_count, list_dimension, rep_classes, spec_field,
                          verify_relations)

# pinned bounds and tolerances
SWEEP_ORDER = 200
PQ_ORDER = 500
TABLE4_N, TABLE4_S, TABLE4_ORDER = 30, 4, 400
KN_DIMS, KN_ORDER, KN_CAP, KN_SECONDS = (3, 5, 7), 300, 50, 300
KLEIN_ORDER = 120
WATANABE_ORDER, WATANABE_MIN_NON_GOR, WATANABE_SECONDS = 1000, 20, 600
ORDER_SECONDS = 60
CI_SECONDS = 900


def report(num, title, ok, detail=""):
    line = f"criterion {num:2d} {title}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def sweep():
    """One pass over every valid spec of order <= SWEEP_ORDER."""
    t0 = time.time()
    out = {"specs": 0, "reps": 0, "order": [], "relations": [], "fpf": [], "det_bad": [],
           "det_mismatch": [], "sl": [], "count": [], "irreducible": [], "dimension": []}
    for spec in valid_specs(SWEEP_ORDER):
        out["specs"] += 1
        rc = rep_classes(spec)
        order = abstract_order(spec)
        if len(rc.reps) != list_count(spec):
            out["count"].append((spec.label(), len(rc.reps), str(list_count(spec))))
        if gor.sl_condition(spec) != gor.group_in_sl(spec):
            out["sl"].append(spec.label())
        for rep, H in zip(rc.reps, rc.groups):
            out["reps"] += 1
            tag = f"{spec.label()} {rep.rep.label()}"
            # independent closure of this representation's own images
            G = generate(rep.images, max_order=order + 1, field=spec_field(spec))
            if G.order != order:
                out["order"].append((tag, G.order))
            if verify_relations(rep):
                out["relations"].append(tag)
            if not is_trivial(spec) and not is_fixed_point_free(G):
                out["fpf"].append(tag)
            if rep.dim != list_dimension(spec, rep.rep.family):
                out["dimension"].append(tag)
            if not irreducible(rep, H, exact=False):
                out["irreducible"].append(tag)
            dc = gor.det_table_check(spec, rep.rep)
            if not (dc.consistent and dc.others_one):
                out["det_bad"].append(tag)
            if not dc.match:
                out["det_mismatch"].append(tag)
        # a direct sum has eigenvalue 1 at g iff some summand does, so pairs cover all sums
        if not is_trivial(spec):
            for A, B in itertools.combinations_with_replacement(rc.groups, 2):
                if fpf_flags_of_sum([A, B])[1:].any():
                    out["fpf"].append(f"{spec.label()} sum")
    out["seconds"] = time.time() - t0
    return out


def test_c01_order(sweep):
    ok = not sweep["order"] and sweep["seconds"] < ORDER_SECONDS
    assert report(1, "order conformance", ok,
                  f"{sweep['specs']} specs, {sweep['reps']} reps, {len(sweep['order'])} wrong, "
                  f"sweep {sweep['seconds']:.1f}s"), sweep["order"][:5]


def test_c02_relations(sweep):
    assert report(2, "relation conformance", not sweep["relations"],
                  f"{len(sweep['relations'])} failing reps"), sweep["relations"][:5]


def test_c03_fixed_point_free(sweep):
    assert report(3, "fixed-point-freeness", not sweep["fpf"],
                  f"{len(sweep['fpf'])} failures, summands and pairwise sums"), sweep["fpf"][:5]


def test_c04_det_column(sweep):
    ok = not sweep["det_bad"]
    assert report(4, "determinant column", ok,
                  f"{len(sweep['det_mismatch'])} tabulated-formula mismatches, "
                  f"{len(sweep['det_bad'])} inconsistent"), sweep["det_bad"][:5]


def test_c05_sl_column(sweep):
    assert report(5, "SL column", not sweep["sl"], f"{len(sweep['sl'])} disagreements"), sweep["sl"][:5]


def test_c06_table4():
    t0 = time.time()
    checked = 0
    bad = []
    for spec in valid_specs(TABLE4_ORDER, gor.SOLVABLE_AND_NONSOLVABLE):
        if spec.n > TABLE4_N or is_trivial(spec):
            continue
        raw = list(rep_classes(spec).raw_to_class)
        k0 = min(r.k for r in raw)
        raw = [r for r in raw if r.k == k0]
        for s in range(1, TABLE4_S + 1):
            for ms in itertools.combinations_with_replacement(raw, s):
                checked += 1
                if gor.direct_sl(spec, ms) != gor.table4_condition(spec, ms):
                    bad.append((spec.label(), [r.label() for r in ms]))
    assert report(6, "Gorenstein congruences vs determinant product", not bad,
                  f"{checked} multisets, n <= {TABLE4_N}, s <= {TABLE4_S}, "
                  f"order <= {TABLE4_ORDER}, {len(bad)} disagree, {time.time() - t0:.1f}s"), bad[:5]


def test_c07_kurano_nishi():
    t0 = time.time()
    offenders = []
    total = 0
    for N in KN_DIMS:
        recs = gor.enumerate_singularities(N, KN_ORDER, max_per_spec=KN_CAP)
        total += len(recs)
        offenders += [r.spec.label() for r in recs if r.spec.kind != "I" or r.spec.d != 1]
    secs = time.time() - t0
    ok = not offenders and total > 0 and secs < KN_SECONDS
    assert report(7, "odd prime dimensions give only cyclic Gorenstein records", ok,
                  f"N in {KN_DIMS}, order <= {KN_ORDER}, {total} records, "
                  f"{len(offenders)} non-cyclic, {secs:.1f}s"), offenders[:5]


def test_c08_kleinian():
    recs = gor.enumerate_singularities(2, KLEIN_ORDER)
    problems = []
    if not all(r.gorenstein for r in recs):
        problems.append("non-Gorenstein record")
    keys = [(r.spec, r.canonical_key) for r in recs]
    if len(keys) != len(set(keys)):
        problems.append("duplicate canonical key")
    cyclic = sorted(r.order for r in recs if r.spec.kind == "I" and r.spec.d == 1)
    dihedral = sorted(r.order for r in recs if (r.spec.kind, r.spec.d) in (("I", 2), ("II", 1)))
    exceptional = sorted((r.spec.kind, r.order) for r in recs if r.spec.kind in ("III", "IV", "V"))
    if cyclic != list(range(2, KLEIN_ORDER + 1)):
        problems.append("cyclic orders")
    if dihedral != [4 * n for n in range(2, KLEIN_ORDER // 4 + 1)]:
        problems.append("binary dihedral orders")
    if exceptional != [("III", 24), ("IV", 48), ("V", 120)]:
        problems.append(f"exceptional {exceptional}")
    if len(recs) != len(cyclic) + len(dihedral) + len(exceptional):
        problems.append("unexpected kinds")
    assert report(8, "Kleinian recovery in dimension 2", not problems,
                  f"{len(cyclic)} cyclic, {len(dihedral)} binary dihedral, "
                  f"T*/O*/I* orders {[o for _, o in exceptional]}; {problems or 'ok'}")


def _watanabe_records():
    yield from gor.enumerate_singularities(2, 120, gorenstein_only=False)
    yield from gor.enumerate_singularities(3, 60, gorenstein_only=False)
    yield from gor.enumerate_singularities(2, 240)
    yield from gor.enumerate_singularities(4, WATANABE_ORDER, gorenstein_only=False, max_per_spec=10,
                                           kinds=("III", "IV", "V", "VI"))


def test_c09_watanabe():
    t0 = time.time()
    n = non = 0
    largest = 0
    bad = []
    for r in _watanabe_records():
        if r.order > WATANABE_ORDER:
            continue
        G = gor.record_group(r.spec, r.summands)
        sym = gorenstein_symmetry(molien_series(G, WATANABE_ORDER), r.dim)
        if sym != gor.in_special_linear(r.spec, r.summands) or sym != r.gorenstein:
            bad.append((r.spec.label(), [s.label() for s in r.summands]))
        n += 1
        non += not r.gorenstein
        largest = max(largest, r.order)
    secs = time.time() - t0
    ok = not bad and non >= WATANABE_MIN_NON_GOR and secs < WATANABE_SECONDS
    assert report(9, "Molien symmetry agrees with SL test", ok,
                  f"{n} records ({non} non-Gorenstein), |G| up to {largest}, "
                  f"{len(bad)} disagree, {secs:.1f}s"), bad[:5]


def test_c10_counts(sweep):
    assert report(10, "class counts match the formulas", not sweep["count"],
                  f"{len(sweep['count'])} specs differ, e.g. {sweep['count'][:2]}"), sweep["count"][:5]


def test_c11_irreducible(sweep):
    bad = sweep["irreducible"] + sweep["dimension"]
    assert report(11, "irreducibility (character norm 1)", not bad,
                  f"{len(sweep['irreducible'])} reducible, e.g. {sweep['irreducible'][:2]}"), bad[:5]


def test_c12_pq():
    t0 = time.time()
    bad = []
    n = 0
    for spec in valid_specs(PQ_ORDER):
        if is_trivial(spec):
            continue
        n += 1
        if not pq_conditions_hold(rep_classes(spec).groups[0], bound=PQ_ORDER):
            bad.append(spec.label())
    klein = generate({"A": diag([-1, 1]), "B": diag([1, -1])})
    control = pq_conditions_hold(klein)
    ok = not bad and not control
    assert report(12, "pq subgroups cyclic", ok,
                  f"{n} groups, {len(bad)} fail, Klein control {'false' if not control else 'TRUE'}, "
                  f"{time.time() - t0:.1f}s"), bad[:5]


def test_c13_headless_deterministic():
    argv = [sys.executable, "-m", "isoquot.cli", "enumerate", "--dim", "2", "--max-order", "60"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv + ["--workers", "2"], capture_output=True, check=True).stdout
    same = a == b and len(a) > 0
    recs = [json.loads(x) for x in a.splitlines()]
    elapsed = time.time() - START
    ok = same and recs and elapsed < CI_SECONDS
    assert report(13, "headless, deterministic, within CI budget", ok,
                  f"byte-identical output {'yes' if same else 'no'}, suite so far {elapsed:.0f}s "
                  f"of {CI_SECONDS}s")
