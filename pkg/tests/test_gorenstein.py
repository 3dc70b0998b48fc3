import json

import pytest

from isoquot.exactnum import Cyclotomic, root_of_unity
from isoquot.gorenstein import (SingularityRecord, TableMismatch, admissible, automorphism_action,
                                canonical_key, det_table_check, direct_sl, enumerate_singularities,
                                group_in_sl, in_special_linear, sl_condition, table4_condition)
from isoquot.groups import GroupSpec, is_fixed_point_free
from isoquot.reps import RepSpec, enumerate_repspecs

C7 = GroupSpec("I", 1, 7, 1)
I5 = GroupSpec("I", 5, 4, 4)
one = Cyclotomic.rational(1)


def pis(*ls):
    return [RepSpec("pi", 1, l) for l in ls]


def test_det_table_examples():
    c = det_table_check(I5, RepSpec("pi", 1, 1))
    assert c.match and c.others_one and c.consistent
    assert c.computed == one
    c = det_table_check(GroupSpec("I", 1, 5, 1), RepSpec("pi", 1, 2))
    assert c.computed == root_of_unity(2, 5) and c.match
    c = det_table_check(GroupSpec("III", 1, 3, 1), RepSpec("nu_III1", 1, 1))
    assert c.match and c.others_one and c.computed == one


def test_iv2a_erratum_detected():
    spec = GroupSpec("IV", 1, 45, 1, 1, 26)
    c = det_table_check(spec, RepSpec("xi_IV2a", 1, 1, 1))
    assert c.consistent and c.others_one
    assert not c.match
    assert c.computed == c.corrected
    assert "8 pi i" in c.erratum


def test_sl_column_examples():
    assert sl_condition(I5) and group_in_sl(I5)
    assert not sl_condition(GroupSpec("I", 1, 5, 1))
    assert sl_condition(GroupSpec("III", 1, 3, 1)) and group_in_sl(GroupSpec("III", 1, 3, 1))


def test_in_special_linear_examples():
    assert in_special_linear(C7, pis(1, 2, 4))
    assert not in_special_linear(C7, pis(1, 1, 1))
    assert in_special_linear(I5, [RepSpec("pi", 1, 1)])
    with pytest.raises(ValueError):
        in_special_linear(C7, [])


def test_table4_mismatch_raises(monkeypatch):
    import isoquot.gorenstein as g
    monkeypatch.setattr(g, "table4_condition", lambda spec, summands: False)
    with pytest.raises(TableMismatch):
        g.in_special_linear(C7, pis(1, 2, 4))


def test_table4_agrees_exhaustive_small():
    from itertools import combinations_with_replacement
    for spec in (C7, GroupSpec("I", 1, 9, 1), I5, GroupSpec("II", 1, 4, 1, 1, 3)):
        reps = enumerate_repspecs(spec)
        for ms in combinations_with_replacement(reps, 3):
            assert direct_sl(spec, ms) == table4_condition(spec, ms)


def test_automorphism_examples():
    assert automorphism_action(C7, 1, 2, 1, RepSpec("pi", 1, 1)) == RepSpec("pi", 1, 2)
    for rs in enumerate_repspecs(I5):
        assert automorphism_action(I5, 1, 1, 1, rs) == rs
    V = GroupSpec("V", 1, 1, 1)
    assert automorphism_action(V, 1, 1, -1, RepSpec("iota_V", 1, 1, 1)) == RepSpec("iota_V", 1, 1, -1)
    with pytest.raises(ValueError):
        automorphism_action(I5, 1, 2, 1, RepSpec("pi", 1, 1))


def test_canonical_key_examples():
    assert canonical_key(C7, pis(1, 2, 4)) == canonical_key(C7, pis(3, 6, 5))
    assert canonical_key(C7, pis(1)) == ((1, 1, None),)
    assert canonical_key(I5, [RepSpec("pi", 1, 1)]) == canonical_key(I5, [RepSpec("pi", 2, 1)])


@pytest.mark.parametrize("spec", [C7, I5, GroupSpec("I", 1, 15, 1), GroupSpec("III", 1, 9, 1)],
                         ids=lambda s: s.label())
def test_orbit_soundness(spec):
    reps = enumerate_repspecs(spec)
    ms = reps[:2] if len(reps) > 1 else reps
    key = canonical_key(spec, ms)
    for a, b, c in admissible(spec):
        moved = [automorphism_action(spec, a, b, c, r) for r in ms]
        assert canonical_key(spec, moved) == key


def test_enumerate_n3_cyclic_only():
    recs = enumerate_singularities(3, 50)
    assert recs
    assert all(r.spec.kind == "I" and r.spec.d == 1 and r.gorenstein for r in recs)


def test_enumerate_n2_up_to_24():
    recs = enumerate_singularities(2, 24)
    kinds = {(r.spec.kind, r.spec.d) for r in recs}
    # binary dihedral groups appear as type I (d = 2) and type II (quaternion 2-part)
    assert kinds == {("I", 1), ("I", 2), ("II", 1), ("III", 1)}
    assert [r.order for r in recs if r.spec.kind == "III"] == [24]
    keys = [(r.spec, r.canonical_key) for r in recs]
    assert len(keys) == len(set(keys))


def test_enumerate_non_gorenstein_small():
    recs = enumerate_singularities(2, 7, gorenstein_only=False)
    assert any(r.spec == GroupSpec("I", 1, 5, 1) and not r.gorenstein
               and {s.l for s in r.summands} == {1, 2} for r in recs)


def test_records_are_fixed_point_free():
    from isoquot.gorenstein import record_group
    for r in enumerate_singularities(2, 30, gorenstein_only=False):
        assert is_fixed_point_free(record_group(r.spec, r.summands))


def test_record_json_roundtrip():
    for r in enumerate_singularities(3, 21):
        back = SingularityRecord.from_json(json.loads(json.dumps(r.to_json())))
        assert back == r


def test_worker_determinism():
    a = enumerate_singularities(2, 60, gorenstein_only=False)
    b = enumerate_singularities(2, 60, gorenstein_only=False, workers=3)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]


def test_enumerate_rejects_small_dim():
    with pytest.raises(ValueError):
        enumerate_singularities(1, 10)
