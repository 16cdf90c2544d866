"""Finite Heyting algebras of downsets and their complete morphisms.

The algebra of downsets of a finite preorder is a complete Heyting algebra:
meet and join are intersection and union, and relative implication has the
closed form

    a -> b = {p : down(p) & a <= b}

which the tests hold to agreement with the brute-force "largest downset x
with a & x <= b".  Open maps contravariantly induce complete morphisms by
preimage; join-irreducibles recover the underlying poset, giving the finite
duality that the verification suites exercise.
"""

from dataclasses import dataclass, field

from finord import maps as maps_mod
from finord import order as order_mod
from finord.errors import BudgetError, HypothesisError
from finord.order import FinitePreorder


@dataclass(frozen=True)
class DownsetAlgebra:
    base: FinitePreorder
    elements: tuple[int, ...]  # every downset mask, ascending

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return (1 << self.base.n) - 1

    def position(self, a: int) -> int:
        """Index of a downset in `elements`."""
        from bisect import bisect_left
        i = bisect_left(self.elements, a)
        if i == len(self.elements) or self.elements[i] != a:
            raise ValueError(f"{a:b} is not a downset of the base")
        return i

    def le(self, a: int, b: int) -> bool:
        return a | b == b

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def implies(self, a: int, b: int) -> int:
        """Residual: the largest downset x with a & x <= b, in closed form."""
        out = 0
        for p in range(self.base.n):
            if self.base.down[p] & a & ~b == 0:
                out |= 1 << p
        return out

    def implies_bruteforce(self, a: int, b: int) -> int:
        """Oracle route: scan every downset; the candidates are closed under
        union so their union is the maximum."""
        out = 0
        for x in self.elements:
            if a & x & ~b == 0:
                out |= x
        return out

    def neg(self, a: int) -> int:
        return self.implies(a, 0)


def downset_algebra(p: FinitePreorder, cap: int = 20) -> DownsetAlgebra:
    if p.n > cap:
        raise BudgetError("downset enumeration beyond the size cap")
    return DownsetAlgebra(p, tuple(order_mod.all_downsets(p)))


@dataclass(frozen=True)
class HAMorphism:
    dom: DownsetAlgebra
    cod: DownsetAlgebra
    table: tuple[int, ...]  # dom.elements[i] maps to the mask table[i]

    def __call__(self, a: int) -> int:
        return self.table[self.dom.position(a)]


def is_complete_ha_morphism(phi: HAMorphism) -> bool:
    """Bounds, meets, joins, and implication, exhaustively over pairs.

    On a finite algebra binary joins/meets plus both bounds give all complete
    joins/meets, so this is full completeness.
    """
    dom, cod = phi.dom, phi.cod
    if phi(dom.bottom) != cod.bottom or phi(dom.top) != cod.top:
        return False
    if any(v not in cod.elements for v in phi.table):
        return False
    for a in dom.elements:
        for b in dom.elements:
            if phi(dom.meet(a, b)) != cod.meet(phi(a), phi(b)):
                return False
            if phi(dom.join(a, b)) != cod.join(phi(a), phi(b)):
                return False
            if phi(dom.implies(a, b)) != cod.implies(phi(a), phi(b)):
                return False
    return True


def preimage_morphism(f: maps_mod.PointMap) -> HAMorphism:
    """The contravariant morphism O(cod) -> O(dom) of an open map.

    Rejects non-open maps; the error carries a witness pair (a, b) with
    preimage(a -> b) != preimage(a) -> preimage(b) when one exists.
    """
    dom_alg = downset_algebra(f.cod)
    cod_alg = downset_algebra(f.dom)
    if not maps_mod.is_open_v2(f):
        witness = None
        for a in dom_alg.elements:
            for b in dom_alg.elements:
                lhs = f.preimage_mask(dom_alg.implies(a, b))
                pa, pb = f.preimage_mask(a), f.preimage_mask(b)
                if (not order_mod.is_downset(f.dom, pa)
                        or lhs != cod_alg.implies(pa, pb)):
                    witness = (a, b)
                    break
            if witness:
                break
        raise HypothesisError(f"map is not open; witness pair: {witness}")
    table = tuple(f.preimage_mask(a) for a in dom_alg.elements)
    return HAMorphism(dom_alg, cod_alg, table)


def join_irreducibles(alg: DownsetAlgebra):
    """The irreducible elements ordered by inclusion, with their masks.

    An element is join-irreducible when it differs from the join of the
    elements strictly below it; for a downset algebra these are exactly the
    principal downsets.  Returns (poset, masks).
    """
    irr = []
    for x in alg.elements:
        below = 0
        for y in alg.elements:
            if y != x and alg.le(y, x):
                below |= y
        if below != x:
            irr.append(x)
    n = len(irr)
    up = [sum(1 << j for j in range(n) if alg.le(irr[i], irr[j]))
          for i in range(n)]
    return FinitePreorder(n, tuple(up)), irr


def verify_adjunction_unit(p: FinitePreorder) -> bool:
    """The join-irreducible poset of the downset algebra recovers p."""
    if not p.is_poset:
        raise HypothesisError("the unit isomorphism needs a poset")
    ji, _ = join_irreducibles(downset_algebra(p))
    return order_mod.poset_iso(ji, p) is not None


def cha_morphisms(a: DownsetAlgebra, b: DownsetAlgebra,
                  node_budget: int = 10_000_000):
    """Every complete Heyting morphism a -> b, deterministic order.

    A complete morphism is fixed by its values on join-irreducibles, and in a
    distributive lattice those values must be assigned monotonically; each
    monotone assignment extends by joins and is then verified against the
    full definition.  A brute-force cross-check over all tables lives in the
    test suite for the smallest algebras.
    """
    ji_poset, ji = join_irreducibles(a)
    k = len(ji)
    if len(b.elements) ** k > node_budget:
        raise BudgetError("too many candidate assignments")
    out = []
    for assign in _monotone_assignments(ji_poset, b):
        table = []
        for x in a.elements:
            v = b.bottom
            for j in range(k):
                if a.le(ji[j], x):
                    v = b.join(v, assign[j])
            table.append(v)
        phi = HAMorphism(a, b, tuple(table))
        if is_complete_ha_morphism(phi):
            out.append(phi)
    return out


def _monotone_assignments(ji_poset: FinitePreorder, b: DownsetAlgebra):
    """All ji-monotone tuples of b-elements, lexicographic order."""
    n = ji_poset.n
    out = []
    cur = [None] * n

    def extend(i):
        if i == n:
            out.append(tuple(cur))
            return
        for v in b.elements:
            ok = all(
                (not ji_poset.leq(j, i) or b.le(cur[j], v))
                and (not ji_poset.leq(i, j) or b.le(v, cur[j]))
                for j in range(i)
            )
            if ok:
                cur[i] = v
                extend(i + 1)
        cur[i] = None

    extend(0)
    return out


@dataclass
class FullnessReport:
    open_maps: int
    morphisms: int
    bijection_ok: bool
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bijection_ok and not self.violations


def fullness_report(p: FinitePreorder, q: FinitePreorder) -> FullnessReport:
    """Open maps p -> q biject with complete morphisms O(q) -> O(p).

    Both sides enumerated exhaustively; the preimage functor must be
    injective on the open maps and hit every enumerated morphism.
    """
    opens = maps_mod.enumerate_open_maps(p, q)
    images = [preimage_morphism(f).table for f in opens]
    alg_q = downset_algebra(q)
    alg_p = downset_algebra(p)
    morphs = [phi.table for phi in cha_morphisms(alg_q, alg_p)]
    violations = []
    if len(set(images)) != len(images):
        violations.append("preimage functor not injective on open maps")
    if set(images) != set(morphs):
        violations.append("preimage images differ from enumerated morphisms")
    return FullnessReport(len(opens), len(morphs),
                          len(opens) == len(morphs), violations)


def from_lattice_order(le: FinitePreorder) -> DownsetAlgebra:
    """Represent a finite distributive lattice by downsets of its
    join-irreducible poset.

    `le` must be a lattice order: a poset with all binary meets/joins and
    bounds, satisfying distributivity; checked exhaustively.
    """
    if not le.is_poset:
        raise HypothesisError("lattice order must be a poset")
    n = le.n
    if n == 0:
        raise HypothesisError("lattice must be nonempty")

    def meet_of(i, j):
        commons = le.down[i] & le.down[j]
        best = None
        for k in _bits(commons):
            if commons & ~le.down[k] == 0:
                best = k
        return best

    def join_of(i, j):
        commons = le.up[i] & le.up[j]
        best = None
        for k in _bits(commons):
            if commons & ~le.up[k] == 0:
                best = k
        return best

    meets = {}
    joins = {}
    for i in range(n):
        for j in range(n):
            m, jo = meet_of(i, j), join_of(i, j)
            if m is None or jo is None:
                raise HypothesisError("order is not a lattice")
            meets[i, j] = m
            joins[i, j] = jo
    for x in range(n):
        for y in range(n):
            for z in range(n):
                lhs = meets[x, joins[y, z]]
                rhs = joins[meets[x, y], meets[x, z]]
                if lhs != rhs:
                    raise HypothesisError("lattice is not distributive")

    # join-irreducible elements of the lattice, ordered by le
    irr = [x for x in range(n) if _is_ji(le, joins, x)]
    k = len(irr)
    up = [sum(1 << j for j in range(k) if le.leq(irr[i], irr[j]))
          for i in range(k)]
    return downset_algebra(FinitePreorder(k, tuple(up)))


def _is_ji(le, joins, x):
    below = [y for y in _bits(le.down[x]) if y != x]
    if not below:
        return x != _bottom_of(le)
    acc = below[0]
    for y in below[1:]:
        acc = joins[acc, y]
    return acc != x


def _bottom_of(le):
    for i in range(le.n):
        if le.up[i] == (1 << le.n) - 1:
            return i
    return None


def to_json(alg: DownsetAlgebra) -> dict:
    return {
        "base": order_mod.to_json(alg.base),
        "downsets": ["".join("1" if m >> i & 1 else "0"
                             for i in range(alg.base.n))
                     for m in alg.elements],
    }


def _bits(mask):
    while mask:
        bit = mask & -mask
        mask ^= bit
        yield bit.bit_length() - 1
