"""Stagewise towers of hereditary nontrivial antichains.

Starting from a finite base M of interned elements, each stage adjoins every
nontrivial antichain of the previous stage as a new set:

    levels[0] = M
    levels[a+1] = levels[a] + {intern(A) : A a >= 2-element antichain of levels[a]}

Level sizes explode combinatorially, so generation carries a hard per-level
budget and stops with an explicit truncation status instead of grinding on.

The verification suites in this module recheck, by exhaustive computation on
the generated data, the structural facts the constructions rely on: stages
are downsets of later stages, the fresh part of each stage is an antichain,
restricting the base restricts the tower, and pairing a stage with an outside
element produces antichains ("fans") that witness unbounded growth.
"""

import json
from dataclasses import dataclass, field

from finord import kernels
from finord import order as order_mod
from finord.errors import BudgetError, FormatError, HypothesisError
from finord.hsets import Universe, is_antichain, is_nontrivial_antichain, load

DEFAULT_BUDGET = 200_000


@dataclass
class Hierarchy:
    universe: Universe
    base: tuple[int, ...]
    levels: list[frozenset[int]]
    budget: int
    requested_depth: int
    truncated_at: int | None = None

    @property
    def depth(self) -> int:
        """Deepest fully generated stage."""
        return len(self.levels) - 1

    @property
    def complete(self) -> bool:
        return self.truncated_at is None

    def new_at(self, alpha: int) -> frozenset:
        """Elements first appearing at stage alpha."""
        if alpha == 0:
            return self.levels[0]
        return self.levels[alpha] - self.levels[alpha - 1]


def enumerate_nontrivial_antichains(ids, u: Universe) -> list[tuple[int, ...]]:
    """All >= 2-element antichains of `ids`, as sorted id tuples.

    Independent sets of the comparability graph, lexicographic DFS order over
    the sorted elements; deterministic.
    """
    elems = sorted(set(ids))
    comp = _comparability_masks(elems, u)
    masks, _ = kernels.antichains(len(elems), comp, min_size=2)
    return [tuple(elems[i] for i in _bits(m)) for m in masks]


def _comparability_masks(elems, u):
    n = len(elems)
    comp = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if u.comparable(elems[i], elems[j]):
                comp[i] |= 1 << j
                comp[j] |= 1 << i
    return comp


def build(base_ids, depth: int, u: Universe, budget: int = DEFAULT_BUDGET) -> Hierarchy:
    """Generate stages 0..depth, stopping early if a level would exceed budget.

    On truncation the result keeps every fully generated level and records
    the offending stage in `truncated_at`; nothing from the overflowing level
    is interned.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if budget <= 0:
        raise ValueError("budget must be positive")
    base = tuple(sorted(set(base_ids)))
    for x in base:
        if not 0 <= x < len(u):
            raise ValueError(f"base id {x} not interned")
    if len(base) > budget:
        raise ValueError("base alone exceeds the budget")

    h = Hierarchy(u, base, [frozenset(base)], budget, depth)
    for stage in range(1, depth + 1):
        level = h.levels[-1]
        elems = sorted(level)
        comp = _comparability_masks(elems, u)
        masks, hit = kernels.antichains(len(elems), comp, min_size=2,
                                        limit=budget + 1)
        if hit:
            # more candidate antichains than any level may hold
            h.truncated_at = stage
            break
        fresh = []
        for m in masks:
            kids = tuple(elems[i] for i in _bits(m))
            got = u.peek(kids)
            if got is None or got not in level:
                fresh.append(kids)
        if len(level) + len(fresh) > budget:
            h.truncated_at = stage
            break
        h.levels.append(level | {u.intern(kids) for kids in fresh})
    return h


def materialize(h: Hierarchy, alpha: int):
    """Stage alpha as a FinitePreorder plus its sorted id list.

    Element i of the preorder is ids[i]; the relation is the restriction of
    the universe order.  The result is always a poset.
    """
    ids = tuple(sorted(h.levels[alpha]))
    n = len(ids)
    up = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and h.universe.lt(ids[i], ids[j]):
                up[i] |= 1 << j
    return order_mod.FinitePreorder(n, tuple(up)), ids


# ---------------------------------------------------------------------------
# verification suites

@dataclass
class StageCheck:
    stage: int
    downset_ok: bool
    fresh_antichain_ok: bool
    freshness_ok: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.downset_ok and self.fresh_antichain_ok and self.freshness_ok


@dataclass
class StageReport:
    checks: list[StageCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def violations(self) -> list:
        return [v for c in self.checks for v in c.violations]


def verify_stage_properties(h: Hierarchy) -> StageReport:
    """Exhaustively check the stage structure of a built hierarchy.

    Per stage alpha: levels[alpha] is a downset of the top level; the fresh
    elements of stage alpha form an antichain; and (for alpha >= 2) every
    fresh element has a child fresh at the previous stage.  Failures come
    back as report entries, never exceptions.
    """
    u = h.universe
    top = h.levels[-1]
    checks = []
    for alpha in range(len(h.levels)):
        level = h.levels[alpha]
        violations = []

        downset_ok = True
        for x in level:
            for y in top:
                if y not in level and u.lt(y, x):
                    downset_ok = False
                    violations.append(("not_downset", alpha, y, x))

        fresh = sorted(h.new_at(alpha)) if alpha > 0 else []
        fresh_ok = True
        for i in range(len(fresh)):
            for j in range(i + 1, len(fresh)):
                if u.comparable(fresh[i], fresh[j]):
                    fresh_ok = False
                    violations.append(("fresh_comparable", alpha, fresh[i], fresh[j]))

        freshness_ok = True
        if alpha >= 2:
            prev_fresh = h.new_at(alpha - 1)
            for x in fresh:
                if u.kind(x) == "set" and not set(u.children(x)) & prev_fresh:
                    freshness_ok = False
                    violations.append(("stale_children", alpha, x))

        checks.append(StageCheck(alpha, downset_ok, fresh_ok, freshness_ok,
                                 violations))
    return StageReport(checks)


@dataclass
class RestrictionReport:
    equality_checked: bool
    equality_ok: bool
    offset_checked: bool
    offset: int | None
    containment_ok: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return ((not self.equality_checked or self.equality_ok)
                and (not self.offset_checked or self.containment_ok))


def verify_restriction(m_ids, mprime_ids, depth: int, u: Universe,
                       budget: int = DEFAULT_BUDGET) -> RestrictionReport:
    """Compare the towers of a base M and an enlarged base M'.

    Two checks, each run when its hypothesis holds:

    - equality (needs M and M' antichains with M a subset of M'): stage alpha
      of M equals stage alpha of M' intersected with M's top stage;
    - offset containment (needs M inside some stage of M''s tower): the least
      c with M inside levels_M'[c] makes levels_M[alpha] a subset of
      levels_M'[alpha + c] wherever both are built.

    Raises HypothesisError when neither hypothesis holds.
    """
    m = frozenset(m_ids)
    mp = frozenset(mprime_ids)
    hm = build(m, depth, u, budget)
    hp = build(mp, depth, u, budget)
    violations = []

    equality_applicable = (m <= mp and is_antichain(m, u) and is_antichain(mp, u))
    equality_ok = True
    if equality_applicable:
        top = hm.levels[-1]
        for alpha in range(min(len(hm.levels), len(hp.levels))):
            expected = hp.levels[alpha] & top
            if hm.levels[alpha] != expected:
                equality_ok = False
                violations.append(("stage_mismatch", alpha,
                                   sorted(hm.levels[alpha] ^ expected)))

    offset = None
    for c, lev in enumerate(hp.levels):
        if m <= lev:
            offset = c
            break
    containment_ok = True
    if offset is not None:
        for alpha in range(len(hm.levels)):
            if alpha + offset >= len(hp.levels):
                break
            extra = hm.levels[alpha] - hp.levels[alpha + offset]
            if extra:
                containment_ok = False
                violations.append(("not_contained", alpha, offset, sorted(extra)))

    if not equality_applicable and offset is None:
        raise HypothesisError(
            "need M inside M' (both antichains) or M inside some stage of M'")
    return RestrictionReport(equality_applicable, equality_ok,
                             offset is not None, offset, containment_ok,
                             violations)


@dataclass
class PairResult:
    pair_id: int
    claim_ok: bool  # {x, outside} really is a nontrivial antichain


def pair_with(x: int, outside: int, u: Universe,
              h: Hierarchy | None = None) -> PairResult:
    """Intern {x, outside} and verify it is a nontrivial antichain.

    Hypotheses are raised on: `outside` must differ from x, and when a
    hierarchy is supplied it must avoid the tower, be incomparable to the
    whole base, and x must belong to the top stage.  The antichain claim
    itself is what the construction asserts, so its failure is reported in
    the result rather than raised.
    """
    if x == outside:
        raise HypothesisError("the outside element coincides with x")
    if h is not None:
        if outside in h.levels[-1]:
            raise HypothesisError("the outside element lies in the tower")
        if not is_antichain(set(h.base) | {outside}, u):
            raise HypothesisError("base plus outside element is not an antichain")
        if x not in h.levels[-1]:
            raise HypothesisError("x does not belong to the tower")
    pair = u.intern([x, outside])
    return PairResult(pair, is_nontrivial_antichain([x, outside], u))


@dataclass
class FanReport:
    pair_ids: tuple[int, ...]
    pairs_ok: bool
    fan_is_antichain: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.pairs_ok and self.fan_is_antichain


def fan(a_ids, outside: int, u: Universe, h: Hierarchy | None = None) -> FanReport:
    """Pair every element of A with one fixed outside element.

    Verifies the claims the growth argument rests on: each {x, outside} is a
    nontrivial antichain and the pairs are pairwise incomparable.  Violations
    are reported, not raised; hypothesis failures raise HypothesisError.
    """
    xs = sorted(set(a_ids))
    violations = []
    pair_ids = []
    pairs_ok = True
    for x in xs:
        result = pair_with(x, outside, u, h)
        pair_ids.append(result.pair_id)
        if not result.claim_ok:
            pairs_ok = False
            violations.append(("bad_pair", x, outside))
    fan_ok = True
    for i in range(len(pair_ids)):
        for j in range(i + 1, len(pair_ids)):
            if u.comparable(pair_ids[i], pair_ids[j]):
                fan_ok = False
                violations.append(("fan_comparable", pair_ids[i], pair_ids[j]))
    return FanReport(tuple(pair_ids), pairs_ok, fan_ok, violations)


def growth_stats(h: Hierarchy) -> list[int]:
    """|levels[a+1] - levels[a]| for each generated a."""
    return [len(h.levels[a + 1]) - len(h.levels[a])
            for a in range(len(h.levels) - 1)]


@dataclass
class GrowthReport:
    doubleton_ids: tuple[int, ...]
    triple_id: int
    level_sizes: list[int]
    growth: list[int]
    fan_sizes: list[int]
    fans_ok: bool
    min_growth: int

    @property
    def ok(self) -> bool:
        return self.fans_ok and self.min_growth >= 3


def growth_witness(triple, depth: int, u: Universe,
                   budget: int = DEFAULT_BUDGET) -> GrowthReport:
    """Finite reflection of the unbounded-growth argument.

    From a 3-element antichain {x, y, z}: take the three doubletons as a new
    base, build their tower, and fan each stage whose growth is measured
    against the interned triple {x, y, z} (which stays incomparable to
    everything the doubleton tower generates).  Reports per-stage growth
    (each must be >= 3) and the fan verifications.  The deepest stage is
    counted but not fanned; its pairwise check would be quadratic in a size
    that only matters as a cardinality.
    """
    trip = sorted(set(triple))
    if len(trip) != 3:
        raise HypothesisError("need exactly three elements")
    if not is_antichain(trip, u):
        raise HypothesisError("the three elements must form an antichain")
    a, b, c = trip
    doubles = (u.intern([a, b]), u.intern([a, c]), u.intern([b, c]))
    triple_id = u.intern(trip)
    h = build(doubles, depth, u, budget)
    if not h.complete:
        raise BudgetError("doubleton tower exceeded budget",
                          stage=h.truncated_at, budget=budget)

    fan_sizes = []
    fans_ok = True
    for alpha in range(len(h.levels) - 1):
        report = fan(h.levels[alpha], triple_id, u, None)
        fan_sizes.append(len(report.pair_ids))
        if not report.ok or len(report.pair_ids) != len(h.levels[alpha]):
            fans_ok = False

    growth = growth_stats(h)
    return GrowthReport(doubles, triple_id, [len(l) for l in h.levels],
                        growth, fan_sizes, fans_ok,
                        min(growth) if growth else 0)


# ---------------------------------------------------------------------------
# export

def to_json(h: Hierarchy) -> dict:
    return {
        "base": list(h.base),
        "levels": [sorted(level) for level in h.levels],
        "budget": h.budget,
        "requested_depth": h.requested_depth,
        "truncated_at": h.truncated_at,
        "universe": h.universe.dump(),
    }


def from_json(data: dict, base_poset=None) -> Hierarchy:
    try:
        u = load(data["universe"], base_poset)
        levels = [frozenset(level) for level in data["levels"]]
        h = Hierarchy(u, tuple(data["base"]), levels, data["budget"],
                      data["requested_depth"], data.get("truncated_at"))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad hierarchy JSON: {exc}") from exc
    if not levels or levels[0] != frozenset(h.base):
        raise FormatError("levels[0] must equal the base")
    return h


def dumps(h: Hierarchy) -> str:
    return json.dumps(to_json(h), indent=2, sort_keys=True) + "\n"


def level_dot(h: Hierarchy, alpha: int) -> str:
    """DOT Hasse diagram of stage alpha; nodes carry universe ids."""
    p, ids = materialize(h, alpha)
    return order_mod.to_dot(p, labels={i: str(ids[i]) for i in range(p.n)})


def _bits(mask):
    while mask:
        bit = mask & -mask
        mask ^= bit
        yield bit.bit_length() - 1
