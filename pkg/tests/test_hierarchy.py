"""Antichain towers: frozen level contents, stage checks, negative controls."""

import pytest

from finord import hierarchy, hsets, order
from finord.errors import BudgetError, FormatError, HypothesisError
from finord.hsets import Universe

CLAW_SIZES = [4, 8, 22]
FREE3_SIZES = [3, 7, 21, 16739]


def claw_tower(depth=2):
    u = Universe()
    base = hsets.concrete_claw(u)
    return u, base, hierarchy.build(base, depth, u)


def test_claw_level_sizes():
    _, _, h = claw_tower()
    assert [len(l) for l in h.levels] == CLAW_SIZES
    assert h.complete


def test_free_antichain_level_sizes():
    u, ids = hsets.abstract_antichain(3)
    h = hierarchy.build(ids, 3, u)
    assert [len(l) for l in h.levels] == FREE3_SIZES


def test_stage_one_contents_are_the_four_antichains():
    u, (m0, m1, m2, m3), h = claw_tower()
    fresh = {u.children(x) for x in h.new_at(1)}
    assert fresh == {(m1, m2), (m1, m3), (m2, m3), (m1, m2, m3)}


def test_stage_two_contains_the_pictured_elements():
    u, (m0, m1, m2, m3), h = claw_tower()
    d12 = u.peek([m1, m2])
    d13 = u.peek([m1, m3])
    assert d12 is not None and d13 is not None
    assert u.peek([d12, d13]) in h.levels[2]
    assert u.peek([d12, m3]) in h.levels[2]
    assert len(h.new_at(2)) == 14


def test_stage_one_covering_edges():
    u, (m0, m1, m2, m3), h = claw_tower()
    p, ids = hierarchy.materialize(h, 1)
    d12, d13, d23 = u.peek([m1, m2]), u.peek([m1, m3]), u.peek([m2, m3])
    t = u.peek([m1, m2, m3])
    pos = {x: i for i, x in enumerate(ids)}
    expected = {
        (m0, m1), (m0, m2), (m0, m3),
        (m1, d12), (m2, d12), (m1, d13), (m3, d13), (m2, d23), (m3, d23),
        (m1, t), (m2, t), (m3, t),
    }
    got = {(ids[i], ids[j]) for i, j in order.covers(p)}
    assert got == expected


def test_stage_two_covers_of_pictured_elements():
    u, (m0, m1, m2, m3), h = claw_tower()
    p, ids = hierarchy.materialize(h, 2)
    pos = {x: i for i, x in enumerate(ids)}
    d12, d13 = u.peek([m1, m2]), u.peek([m1, m3])
    pair_sets = u.peek([d12, d13])
    pair_mixed = u.peek([d12, m3])
    below = {x: set() for x in (pair_sets, pair_mixed)}
    for i, j in order.covers(p):
        if ids[j] in below:
            below[ids[j]].add(ids[i])
    assert below[pair_sets] == {d12, d13}
    assert below[pair_mixed] == {d12, m3}


def test_materialized_stage_is_poset():
    _, _, h = claw_tower()
    for alpha in range(3):
        p, ids = hierarchy.materialize(h, alpha)
        assert p.is_poset
        assert p.n == CLAW_SIZES[alpha]


def test_stage_properties_pass_on_honest_towers():
    for make in (claw_tower,):
        _, _, h = make()
        report = hierarchy.verify_stage_properties(h)
        assert not report.violations
    u, ids = hsets.abstract_antichain(3)
    h = hierarchy.build(ids, 2, u)
    assert not hierarchy.verify_stage_properties(h).violations


def test_corrupted_level_fails_freshness():
    u, base, h = claw_tower()
    t = u.peek([base[1], base[2], base[3]])
    h.levels[1] = h.levels[1] - {t}
    report = hierarchy.verify_stage_properties(h)
    assert any(v[0] == "fresh_comparable" for v in report.violations)


def test_corrupted_level_fails_downset():
    u, base, h = claw_tower()
    h.levels[1] = h.levels[1] - {base[0]}
    report = hierarchy.verify_stage_properties(h)
    assert any(v[0] == "not_downset" for v in report.violations)


def test_smuggled_element_fails_antichain():
    u, base, h = claw_tower()
    d12 = u.peek([base[1], base[2]])
    d13 = u.peek([base[1], base[3]])
    h.levels[1] = h.levels[1] | {u.peek([d12, d13])}
    report = hierarchy.verify_stage_properties(h)
    assert any(v[0] == "fresh_comparable" for v in report.violations)


def test_corrupted_dump_rejected():
    u, base, h = claw_tower()
    text = hierarchy.dumps(h)
    assert hierarchy.from_json(__import__("json").loads(text)) is not None
    with pytest.raises(FormatError):
        hsets.load(u.dump() + "999 := { 0 }\n")


def test_restriction_equality_clause():
    u, ids = hsets.abstract_antichain(3)
    for m in ((ids[0],), (ids[0], ids[1]), tuple(ids)):
        rep = hierarchy.verify_restriction(m, ids, 2, u)
        assert rep.equality_checked
        assert rep.ok, rep.violations


def test_restriction_offset_clause():
    u, ids = hsets.abstract_antichain(3)
    a, b, c = ids
    shifted = (u.intern([a, b]), u.intern([b, c]))
    rep = hierarchy.verify_restriction(shifted, ids, 2, u)
    assert not rep.equality_checked
    assert rep.offset == 1
    assert rep.ok, rep.violations


def test_restriction_requires_a_relation():
    u, ids = hsets.abstract_antichain(3)
    with pytest.raises(HypothesisError):
        hierarchy.verify_restriction((ids[0],), (ids[1],), 1, u)


def test_pair_with_rejects_identical_elements():
    u, ids = hsets.abstract_antichain(3)
    with pytest.raises(HypothesisError):
        hierarchy.pair_with(ids[0], ids[0], u)


def test_pair_with_reports_comparable_claim():
    u, base, _ = claw_tower(depth=0)
    res = hierarchy.pair_with(base[0], base[1], u)
    assert not res.claim_ok


def test_fan_over_free_antichain():
    u, ids = hsets.abstract_antichain(4)
    h = hierarchy.build(ids[:3], 2, u)
    for alpha in range(3):
        rep = hierarchy.fan(h.levels[alpha], ids[3], u)
        assert rep.ok
        assert len(rep.pair_ids) == len(h.levels[alpha])


def test_growth_witness_frozen_values():
    u, ids = hsets.abstract_antichain(3)
    rep = hierarchy.growth_witness(ids, 2, u)
    assert rep.level_sizes == [3, 7, 21]
    assert rep.growth == [4, 14]
    assert rep.fan_sizes == [3, 7]
    assert rep.ok


def test_budget_truncation_keeps_prefix():
    u, ids = hsets.abstract_antichain(3)
    h = hierarchy.build(ids, 2, u, budget=10)
    assert h.truncated_at == 2
    assert [len(l) for l in h.levels] == [3, 7]
    v, ids2 = hsets.abstract_antichain(3)
    full = hierarchy.build(ids2, 2, v)
    assert [len(l) for l in h.levels] == [len(l) for l in full.levels[:2]]


def test_truncation_interns_nothing_beyond_the_level():
    u, ids = hsets.abstract_antichain(3)
    h = hierarchy.build(ids, 2, u, budget=10)
    assert set(u.ids()) - set().union(*h.levels) == {
        x for x in u.ids() if u.kind(x) == "atom" and x not in h.levels[0]}


def test_json_round_trip():
    import json
    u, base, h = claw_tower()
    data = json.loads(hierarchy.dumps(h))
    g = hierarchy.from_json(data)
    assert [sorted(l) for l in g.levels] == [sorted(l) for l in h.levels]
    assert g.universe.dump() == u.dump()


def test_from_json_requires_base_level():
    import json
    _, _, h = claw_tower()
    data = json.loads(hierarchy.dumps(h))
    data["levels"][0] = data["levels"][0][:-1]
    with pytest.raises(FormatError):
        hierarchy.from_json(data)


def test_level_dot_mentions_every_member():
    _, _, h = claw_tower()
    dot = hierarchy.level_dot(h, 1)
    assert dot.count("label=") == 8
