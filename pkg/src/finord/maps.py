"""Maps between finite preorders: monotonicity, openness, obstruction search.

Openness has three equivalent faces, all implemented and tested against each
other:

- v1: monotone and the image of every downset is a downset;
- v2: f[down(p)] = down(f(p)) for every point p;
- v3: f-preimage of up(q) equals the up closure of the preimage of q, for
  every point q.

v2 and v3 each force monotonicity on their own, so the three agree on all
functions, not just monotone ones.

The obstruction machinery drives the package's headline computation: for a
candidate product object P with projections to the two-point chain, search
each tower stage for an open mediating map compatible with the stage's two
coordinate maps, and certify failure either by exhaustive emptiness or by a
cardinality bound via injectivity.
"""

from dataclasses import dataclass, field
from itertools import product as iproduct

from finord import hierarchy as hierarchy_mod
from finord import kernels
from finord import order as order_mod
from finord.errors import BudgetError, HypothesisError
from finord.hsets import chain_hypothesis, is_convex
from finord.order import FinitePreorder, sierpinski


@dataclass(frozen=True)
class PointMap:
    dom: FinitePreorder
    cod: FinitePreorder
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.dom.n:
            raise ValueError("table must cover the whole domain")
        if any(not 0 <= v < self.cod.n for v in self.table):
            raise ValueError("table value outside codomain")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= 1 << self.table[i]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for i, v in enumerate(self.table):
            if mask >> v & 1:
                out |= 1 << i
        return out


def identity_map(p: FinitePreorder) -> PointMap:
    return PointMap(p, p, tuple(range(p.n)))


def compose(g: PointMap, f: PointMap) -> PointMap:
    """g after f."""
    if f.cod != g.dom:
        raise ValueError("codomain/domain mismatch")
    return PointMap(f.dom, g.cod, tuple(g.table[v] for v in f.table))


def all_functions(p: FinitePreorder, q: FinitePreorder):
    """Every function p -> q, ascending table order."""
    for table in iproduct(range(q.n), repeat=p.n):
        yield PointMap(p, q, table)


def is_monotone(f: PointMap) -> bool:
    return all(
        f.cod.leq(f.table[i], f.table[j])
        for i in range(f.dom.n) for j in _bits(f.dom.up[i])
    )


def is_open_v1(f: PointMap, cap: int = 20) -> bool:
    """Monotone and images of downsets are downsets."""
    if f.dom.n > cap:
        raise BudgetError("v1 enumerates all downsets; domain too large")
    if not is_monotone(f):
        return False
    return all(
        order_mod.is_downset(f.cod, f.image_mask(d))
        for d in order_mod.all_downsets(f.dom)
    )


def is_open_v2(f: PointMap) -> bool:
    """Pointwise: image of each principal downset is the principal downset
    of the image point."""
    return all(
        f.image_mask(f.dom.down[i]) == f.cod.down[f.table[i]]
        for i in range(f.dom.n)
    )


def is_open_v3(f: PointMap) -> bool:
    """Pointwise on the codomain: preimage of up(q) is the up closure of the
    preimage of q."""
    return all(
        f.preimage_mask(f.cod.up[q]) ==
        order_mod.up_closure(f.dom, f.preimage_mask(1 << q))
        for q in range(f.cod.n)
    )


def enumerate_monotone_maps(p: FinitePreorder, q: FinitePreorder,
                            allowed=None, node_budget=10_000_000):
    return _enumerate(p, q, allowed, False, node_budget)


def enumerate_open_maps(p: FinitePreorder, q: FinitePreorder,
                        allowed=None, node_budget=10_000_000):
    """All open maps p -> q, deterministic order; see kernels.enumerate_maps."""
    return _enumerate(p, q, allowed, True, node_budget)


def _enumerate(p, q, allowed, require_open, node_budget):
    if allowed is None:
        allowed = [(1 << q.n) - 1] * p.n
    tables, _ = kernels.enumerate_maps(
        p.n, q.n, p.down, p.up, q.down, q.up, list(allowed), require_open,
        node_budget)
    return [PointMap(p, q, t) for t in tables]


# ---------------------------------------------------------------------------
# coordinate maps out of a tower stage

def downset_indicator(p: FinitePreorder, downset_mask: int) -> PointMap:
    """Map to the two-point chain: 0 inside the downset, 1 outside."""
    if not order_mod.is_downset(p, downset_mask):
        raise HypothesisError("mask is not a downset")
    s = sierpinski()
    return PointMap(p, s, tuple(
        0 if downset_mask >> i & 1 else 1 for i in range(p.n)))


def coordinate_map(h, alpha: int, branch: int, materialized=None) -> PointMap:
    """The branch indicator used in the product obstruction.

    For a base with a unique minimum b0 below incomparable tops, the map
    sends b0 and the chosen top to 0 and everything else in stage alpha to 1.
    With the chain hypothesis this is exactly the indicator of the principal
    downset of the chosen top, hence open.
    """
    u = h.universe
    base = h.base
    bottoms = [b for b in base if all(u.leq(b, x) for x in base)]
    if len(bottoms) != 1:
        raise HypothesisError("base needs a unique minimum")
    tops = [x for x in base if x != bottoms[0]]
    if not 1 <= branch <= len(tops):
        raise HypothesisError(f"branch must be in 1..{len(tops)}")
    stage, ids = materialized or hierarchy_mod.materialize(h, alpha)
    chosen = {bottoms[0], tops[branch - 1]}
    s = sierpinski()
    return PointMap(stage, s, tuple(
        0 if ids[i] in chosen else 1 for i in range(stage.n)))


def pairing_values(h, alpha: int = 0):
    """(f1(m), f2(m)) for each base element m, in base order."""
    materialized = hierarchy_mod.materialize(h, alpha)
    f1 = coordinate_map(h, alpha, 1, materialized)
    f2 = coordinate_map(h, alpha, 2, materialized)
    _, ids = materialized
    pos = {x: i for i, x in enumerate(ids)}
    return [(f1(pos[m]), f2(pos[m])) for m in h.base]


# ---------------------------------------------------------------------------
# injectivity experiment

@dataclass
class InjectivityReport:
    stage: int
    open_maps: int
    injective_on_base: int
    violations: list = field(default_factory=list)
    hypotheses_hold: bool = True

    @property
    def ok(self) -> bool:
        return not self.violations


def injectivity_report(h, alpha: int, p: FinitePreorder,
                       require_hypotheses: bool = True,
                       node_budget: int = 10_000_000) -> InjectivityReport:
    """Check that open maps injective on the base stay injective on the stage.

    Enumerates every open map from stage alpha to p; for those whose
    restriction to the base is injective, verifies injectivity on the whole
    stage.  The property is proved under convexity of the base and the chain
    hypothesis; `require_hypotheses=False` lets negative-control experiments
    run on bases that break them, reporting instead of raising.
    """
    u = h.universe
    hypotheses = (is_convex(h.base, u)
                  and chain_hypothesis(h.base, u))
    if require_hypotheses and not hypotheses:
        raise HypothesisError("base must be convex and satisfy the chain hypothesis")
    stage, ids = hierarchy_mod.materialize(h, alpha)
    pos = {x: i for i, x in enumerate(ids)}
    base_pos = [pos[m] for m in h.base]
    maps = enumerate_open_maps(stage, p, node_budget=node_budget)
    injective = 0
    violations = []
    for f in maps:
        base_vals = [f(i) for i in base_pos]
        if len(set(base_vals)) != len(base_vals):
            continue
        injective += 1
        if len(set(f.table)) != stage.n:
            violations.append(f.table)
    return InjectivityReport(alpha, len(maps), injective, violations, hypotheses)


# ---------------------------------------------------------------------------
# mediating maps and the product obstruction

def product_with_projections(p: FinitePreorder, q: FinitePreorder):
    """Componentwise product and its two projection maps."""
    prod = order_mod.product(p, q)
    proj1 = PointMap(prod, p, tuple(i // q.n for i in range(prod.n)))
    proj2 = PointMap(prod, q, tuple(i % q.n for i in range(prod.n)))
    return prod, proj1, proj2


def _check_into_sierpinski(f: PointMap, name: str):
    if f.cod != sierpinski():
        raise HypothesisError(f"{name} must land in the two-point chain")
    if not is_open_v2(f):
        raise HypothesisError(f"{name} must be open")


def mediating_search(q: FinitePreorder, f1: PointMap, f2: PointMap,
                     p: FinitePreorder, p1: PointMap, p2: PointMap,
                     node_budget: int = 10_000_000):
    """All open f: q -> p with p1 o f = f1 and p2 o f = f2.

    Every point's value is pinned to the fiber of its (f1, f2) pair under
    (p1, p2), so the openness kernel searches only compatible assignments.
    Returns (maps, nodes_examined).
    """
    for f, name in ((f1, "f1"), (f2, "f2"), (p1, "p1"), (p2, "p2")):
        _check_into_sierpinski(f, name)
    if f1.dom != q or f2.dom != q or p1.dom != p or p2.dom != p:
        raise HypothesisError("map domains must match the given preorders")

    fibers = {}
    for pair in ((0, 0), (0, 1), (1, 0), (1, 1)):
        fibers[pair] = 0
    for v in range(p.n):
        fibers[(p1(v), p2(v))] |= 1 << v
    allowed = [fibers[(f1(x), f2(x))] for x in range(q.n)]
    tables, nodes = kernels.enumerate_maps(
        q.n, p.n, q.down, q.up, p.down, p.up, allowed, True, node_budget)
    out = []
    for t in tables:
        f = PointMap(q, p, t)
        assert compose(p1, f).table == f1.table
        assert compose(p2, f).table == f2.table
        out.append(f)
    return out, nodes


@dataclass
class StageSearch:
    stage: int
    stage_size: int
    candidates_examined: int
    mediating_found: int
    injective_ok: bool


@dataclass
class ObstructionVerdict:
    certificate_kind: str  # empty_mediating_set | cardinality_bound | non_injective_mediating
    stage: int
    searches: list[StageSearch]

    @property
    def refuted(self) -> bool:
        return self.certificate_kind in ("empty_mediating_set", "cardinality_bound")


def product_obstruction(p: FinitePreorder, p1: PointMap, p2: PointMap,
                        h, max_alpha: int | None = None,
                        node_budget: int = 10_000_000) -> ObstructionVerdict:
    """Certify that (p, p1, p2) cannot mediate the stage coordinate maps.

    Walks stages 1..max_alpha.  An exhaustively empty mediating set refutes
    at that stage ("empty_mediating_set").  If every searched stage still
    admits mediating maps, they are all injective on the stage (checked; the
    coordinate pairing is injective on the base and injectivity propagates),
    so the first stage outgrowing |p| refutes by counting
    ("cardinality_bound").  Raises BudgetError when the tower is too shallow
    to reach either certificate.
    """
    if max_alpha is None:
        max_alpha = h.depth
    if max_alpha > h.depth:
        raise ValueError("tower not built that deep")
    searches = []
    for alpha in range(1, max_alpha + 1):
        materialized = hierarchy_mod.materialize(h, alpha)
        stage, _ = materialized
        f1 = coordinate_map(h, alpha, 1, materialized)
        f2 = coordinate_map(h, alpha, 2, materialized)
        found, nodes = mediating_search(stage, f1, f2, p, p1, p2, node_budget)
        injective_ok = all(len(set(f.table)) == stage.n for f in found)
        searches.append(StageSearch(alpha, stage.n, nodes, len(found),
                                    injective_ok))
        if not found:
            return ObstructionVerdict("empty_mediating_set", alpha, searches)
        if not injective_ok:
            return ObstructionVerdict("non_injective_mediating", alpha, searches)
    for alpha, level in enumerate(h.levels):
        if len(level) > p.n:
            return ObstructionVerdict("cardinality_bound", alpha, searches)
    raise BudgetError("no stage within the tower outgrows the candidate",
                      stage=h.depth, budget=h.budget)


def _bits(mask):
    while mask:
        bit = mask & -mask
        mask ^= bit
        yield bit.bit_length() - 1
