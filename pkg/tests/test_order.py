"""Finite preorder machinery: construction, closures, enumeration, export."""

import random
from itertools import permutations

import pytest

from finord import order
from finord.errors import FormatError
from finord.order import FinitePreorder

# counts of posets on n labeled-up-to-iso / preorders on n labeled elements
POSETS_UP_TO_ISO = {1: 1, 2: 2, 3: 5, 4: 16, 5: 63}
LABELED_PREORDERS = {1: 1, 2: 4, 3: 29, 4: 355}


def test_reflexivity_required():
    with pytest.raises(ValueError):
        FinitePreorder(2, (0b01, 0b00))


def test_transitivity_required():
    # 0 <= 1 <= 2 but 0 </= 2
    with pytest.raises(ValueError):
        FinitePreorder(3, (0b011, 0b110, 0b100))


def test_from_pairs_closes_transitively():
    p = order.from_pairs(3, [(0, 1), (1, 2)])
    assert p.leq(0, 2)
    assert p.is_poset


def test_sierpinski_is_two_chain():
    assert order.sierpinski() == order.chain(2)
    s = order.sierpinski()
    assert s.leq(0, 1) and not s.leq(1, 0)


def test_product_orders_componentwise():
    p = order.product(order.chain(2), order.chain(3))
    assert p.n == 6
    # (i, j) sits at index i * 3 + j
    assert p.leq(0 * 3 + 0, 1 * 3 + 2)
    assert not p.leq(0 * 3 + 2, 1 * 3 + 1)


def test_down_closure_and_is_downset():
    p = order.chain(4)
    assert order.down_closure(p, 0b0100) == 0b0111
    assert order.up_closure(p, 0b0010) == 0b1110
    assert order.is_downset(p, 0b0011)
    assert not order.is_downset(p, 0b0100)


def test_all_downsets_counts():
    assert len(order.all_downsets(order.chain(4))) == 5
    assert len(order.all_downsets(order.antichain(3))) == 8
    assert len(order.all_downsets(order.sierpinski())) == 3


def test_all_downsets_deduplicates_equivalent_elements():
    # two equivalent points close to the same downset
    p = FinitePreorder(2, (0b11, 0b11))
    downs = order.all_downsets(p)
    assert downs == sorted(set(downs)) == [0b00, 0b11]


def test_is_wellfounded_matches_poset():
    assert order.is_wellfounded(order.chain(3))
    cyc = FinitePreorder(2, (0b11, 0b11))
    assert not order.is_wellfounded(cyc)


def test_covers_of_chain():
    assert order.covers(order.chain(3)) == [(0, 1), (1, 2)]


def test_poset_iso_relabeling():
    p = order.from_pairs(3, [(0, 1), (0, 2)])
    q = order.from_pairs(3, [(2, 0), (2, 1)])
    iso = order.poset_iso(p, q)
    assert iso is not None
    assert iso[0] == 2
    assert order.poset_iso(order.chain(3), order.antichain(3)) is None


def test_canonical_form_permutation_invariant():
    rng = random.Random(2)
    for _ in range(20):
        p = order.sample_poset(4, rng)
        canon = order.canonical_form(p)
        for perm in permutations(range(4)):
            up = [0] * 4
            for i in range(4):
                for j in range(4):
                    if p.leq(i, j):
                        up[perm[i]] |= 1 << perm[j]
            assert order.canonical_form(FinitePreorder(4, tuple(up))) == canon


def test_enumerate_posets_counts():
    for n, count in POSETS_UP_TO_ISO.items():
        got = order.enumerate_posets(n)
        assert len(got) == count
        assert all(p.is_poset and p.n == n for p in got)


def test_enumerate_posets_no_duplicate_classes():
    got = order.enumerate_posets(4)
    for i in range(len(got)):
        for j in range(i + 1, len(got)):
            assert order.poset_iso(got[i], got[j]) is None


def test_enumerate_preorders_counts():
    for n, count in LABELED_PREORDERS.items():
        got = order.enumerate_preorders(n)
        assert len(got) == count


def test_sampling_produces_valid_preorders():
    rng = random.Random(7)
    for _ in range(50):
        p = order.sample_preorder(rng.randrange(1, 7), rng)
        assert isinstance(p, FinitePreorder)
        q = order.sample_poset(rng.randrange(1, 7), rng)
        assert q.is_poset


def test_json_round_trip():
    rng = random.Random(13)
    for _ in range(20):
        p = order.sample_preorder(5, rng)
        assert order.from_json(order.to_json(p)) == p


def test_from_json_rejects_garbage():
    with pytest.raises(FormatError):
        order.from_json({"size": 2})
    with pytest.raises(FormatError):
        order.from_json({"size": 2, "leq": "10x0"})
    with pytest.raises(FormatError):
        order.from_json({"size": 2, "leq": "10"})


def test_to_dot_hasse_edges():
    dot = order.to_dot(order.chain(3))
    assert "digraph" in dot
    assert dot.count("->") == 2
