"""Kripke frames, p-morphisms, the preorder coreflector, and finite BAOs.

A frame is a carrier with an arbitrary relation, stored as successor masks.
Frames generalize preorders: a preorder P corresponds to the frame of its
opposite order (x R y iff y <= x), under which open maps of preorders and
p-morphisms of frames are the same functions; that bridge is tested
exhaustively.

The coreflector extracts the largest R-upset on which the relation is a
preorder.  The complex algebra turns a frame into a finite Boolean algebra
with an additive diamond (stored on atoms); in the other direction, the
algebra's reflexive-transitive core recovers a frame, and for powerset
algebras the round trip is the identity up to isomorphism.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product as iproduct

from finord import maps as maps_mod
from finord import order as order_mod
from finord.errors import BudgetError, FormatError, HypothesisError
from finord.order import FinitePreorder


@dataclass(frozen=True)
class KripkeFrame:
    n: int
    succ: tuple[int, ...]  # succ[i] = {j : i R j}

    def __post_init__(self):
        if len(self.succ) != self.n:
            raise ValueError("succ must have one row per state")
        full = (1 << self.n) - 1
        if any(row & ~full for row in self.succ):
            raise ValueError("relation mentions states outside the carrier")

    @cached_property
    def pred(self) -> tuple[int, ...]:
        cols = [0] * self.n
        for i in range(self.n):
            for j in _bits(self.succ[i]):
                cols[j] |= 1 << i
        return tuple(cols)

    def rel(self, i: int, j: int) -> bool:
        return bool(self.succ[i] >> j & 1)


def opposite_frame(p: FinitePreorder) -> KripkeFrame:
    """x R y iff y <= x; open maps of preorders are p-morphisms of these."""
    return KripkeFrame(p.n, p.down)


def frame_is_preorder(f: KripkeFrame) -> bool:
    if any(not f.succ[i] >> i & 1 for i in range(f.n)):
        return False
    return all(
        f.succ[j] & ~f.succ[i] == 0
        for i in range(f.n) for j in _bits(f.succ[i])
    )


def preorder_from_frame(f: KripkeFrame) -> FinitePreorder:
    """The frame's relation read as a preorder; raises when it is not one."""
    if not frame_is_preorder(f):
        raise HypothesisError("relation is not reflexive-transitive")
    return FinitePreorder(f.n, f.succ)


# ---------------------------------------------------------------------------
# p-morphisms

def is_pmorphism(table, f: KripkeFrame, g: KripkeFrame) -> bool:
    """f[R[x]] = S[f(x)] for every state x."""
    for x in range(f.n):
        img = 0
        for y in _bits(f.succ[x]):
            img |= 1 << table[y]
        if img != g.succ[table[x]]:
            return False
    return True


def is_pmorphism_via_preimages(table, f: KripkeFrame, g: KripkeFrame) -> bool:
    """Equivalent route: preimage of predecessors = predecessors of preimage."""
    fibers = [0] * g.n
    for x, v in enumerate(table):
        fibers[v] |= 1 << x
    for y in range(g.n):
        lhs = 0
        for x, v in enumerate(table):
            if g.pred[y] >> v & 1:
                lhs |= 1 << x
        rhs = 0
        for x in _bits(fibers[y]):
            rhs |= f.pred[x]
        if lhs != rhs:
            return False
    return True


def pmorphisms(f: KripkeFrame, g: KripkeFrame, budget: int = 10_000_000):
    """All p-morphisms f -> g by exhaustive function search, ascending order."""
    if g.n ** f.n > budget:
        raise BudgetError("function space too large")
    return [t for t in iproduct(range(g.n), repeat=f.n) if is_pmorphism(t, f, g)]


# ---------------------------------------------------------------------------
# coreflection into preorders

@dataclass
class Coreflection:
    members: tuple[int, ...]       # states of Y, ascending
    preorder: FinitePreorder       # converse of R restricted to Y
    member_mask: int


def _upsets(f: KripkeFrame) -> list[int]:
    """All R-upsets, via downsets of the reachability preorder."""
    reach = list(f.succ)
    for i in range(f.n):
        reach[i] |= 1 << i
    reach = order_mod._transitive_rows(f.n, reach)
    pre = FinitePreorder(f.n, tuple(reach))
    full = (1 << f.n) - 1
    return [full ^ d for d in order_mod.all_downsets(pre)]


def _is_good_upset(f: KripkeFrame, u: int) -> bool:
    """R restricted to u is reflexive and transitive."""
    for x in _bits(u):
        if not f.succ[x] >> x & 1:
            return False
        for y in _bits(f.succ[x] & u):
            if f.succ[y] & u & ~f.succ[x]:
                return False
    return True


def coreflect(f: KripkeFrame, cap: int = 20) -> Coreflection:
    """The largest R-upset on which R is a preorder, ordered by converse R.

    Computed straight from the definition: union every good upset.  The
    union is verified to be good itself and to contain each good upset.
    """
    if f.n > cap:
        raise BudgetError("exhaustive upset enumeration beyond the cap")
    good = [u for u in _upsets(f) if _is_good_upset(f, u)]
    y = 0
    for u in good:
        y |= u
    assert _is_good_upset(f, y), "union of good upsets must be good"
    assert all(u & ~y == 0 for u in good)
    members = tuple(_bits(y))
    pos = {x: i for i, x in enumerate(members)}
    up = [0] * len(members)
    # converse: a <= b in the coreflection iff b R a
    for a in members:
        for b in members:
            if f.succ[b] >> a & 1:
                up[pos[a]] |= 1 << pos[b]
    return Coreflection(members, FinitePreorder(len(members), tuple(up)), y)


def coreflect_fixpoint(f: KripkeFrame) -> int:
    """Member mask by iterated removal; must match coreflect on all frames.

    Drops states that are irreflexive, escape the candidate set, or head a
    transitivity failure, until stable.
    """
    y = (1 << f.n) - 1
    changed = True
    while changed:
        changed = False
        for x in _bits(y):
            bad = (not f.succ[x] >> x & 1) or f.succ[x] & ~y
            if not bad:
                for z in _bits(f.succ[x] & y):
                    if f.succ[z] & y & ~f.succ[x]:
                        bad = True
                        break
            if bad:
                y ^= 1 << x
                changed = True
    return y


@dataclass
class CoreflectionReport:
    pmorphisms: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_coreflection(f: KripkeFrame, p: FinitePreorder,
                        budget: int = 10_000_000) -> CoreflectionReport:
    """Universal property at desk scale, by exhausting all p-morphisms.

    Every p-morphism from p's opposite frame into f must land inside the
    coreflection and corestrict to an open map into the coreflected
    preorder (equivalently a p-morphism into the restricted frame; both
    routes are checked).  The factorization is through an inclusion, so
    uniqueness is automatic.
    """
    cor = coreflect(f)
    pos = {x: i for i, x in enumerate(cor.members)}
    frame_p = opposite_frame(p)
    restricted = opposite_frame(cor.preorder)
    violations = []
    count = 0
    for table in pmorphisms(frame_p, f, budget):
        count += 1
        if any(not cor.member_mask >> v & 1 for v in table):
            violations.append(("image_escapes", table))
            continue
        g = tuple(pos[v] for v in table)
        open_route = maps_mod.is_open_v2(
            maps_mod.PointMap(p, cor.preorder, g))
        frame_route = is_pmorphism(g, frame_p, restricted)
        if open_route != frame_route:
            violations.append(("route_disagreement", table))
        if not open_route:
            violations.append(("corestriction_not_open", table))
    return CoreflectionReport(count, violations)


# ---------------------------------------------------------------------------
# complex algebras and finite BAOs

@dataclass(frozen=True)
class FiniteBAO:
    """Powerset Boolean algebra over `atoms` generators with an additive
    diamond given on atoms and extended by unions."""

    atoms: int
    dia_atom: tuple[int, ...]

    def __post_init__(self):
        if len(self.dia_atom) != self.atoms:
            raise ValueError("diamond table must cover all atoms")
        full = (1 << self.atoms) - 1
        if any(row & ~full for row in self.dia_atom):
            raise ValueError("diamond row outside the carrier")

    @property
    def top(self) -> int:
        return (1 << self.atoms) - 1

    def dia(self, a: int) -> int:
        out = 0
        for u in _bits(a):
            out |= self.dia_atom[u]
        return out

    def box(self, a: int) -> int:
        return self.dia(self.top & ~a) ^ self.top


def complex_algebra(f: KripkeFrame) -> FiniteBAO:
    """Powerset algebra with diamond = R-preimage."""
    return FiniteBAO(f.n, f.pred)


def is_closure_algebra(a: FiniteBAO) -> bool:
    """a <= dia(a) and dia(dia(a)) <= dia(a); atom checks suffice by
    additivity."""
    for u in range(a.atoms):
        d = a.dia_atom[u]
        if not d >> u & 1:
            return False
        if a.dia(d) & ~d:
            return False
    return True


def closure_iff_preorder(f: KripkeFrame) -> bool:
    """The biconditional itself; True means the two sides agree."""
    return frame_is_preorder(f) == is_closure_algebra(complex_algebra(f))


@dataclass
class BoxDiamondReport:
    pairs_checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def box_diamond_report(a: FiniteBAO, rng=None, samples: int = 4096,
                       exhaustive_cutoff: int = 8) -> BoxDiamondReport:
    """box(x) & dia(y) <= dia(x & y) over all pairs (or a seeded sample).

    The inequality holds in every BAO, so any violation is an implementation
    bug surfacing.
    """
    violations = []
    if a.atoms <= exhaustive_cutoff:
        space = range(1 << a.atoms)
        pairs = ((x, y) for x in space for y in space)
        count = (1 << a.atoms) ** 2
    else:
        if rng is None:
            raise ValueError("need an rng above the exhaustive cutoff")
        pairs = ((rng.getrandbits(a.atoms), rng.getrandbits(a.atoms))
                 for _ in range(samples))
        count = samples
    for x, y in pairs:
        lhs = a.box(x) & a.dia(y)
        if lhs & ~a.dia(x & y):
            violations.append((x, y))
    return BoxDiamondReport(count, violations)


def bao_L(a: FiniteBAO, cap: int = 16) -> KripkeFrame:
    """Frame recovered from the algebra's reflexive part.

    s joins every element below its own box (finite carriers make the
    spatiality side conditions automatic); the frame lives on the atoms
    under s with x R y iff x <= s & dia(y).
    """
    if a.atoms > cap:
        raise BudgetError("element scan beyond the cap")
    s = 0
    for x in range(1 << a.atoms):
        if x & ~a.box(x) == 0:
            s |= x
    assert s & ~a.box(s) == 0, "the join of the family must stay in it"
    members = tuple(_bits(s))
    pos = {x: i for i, x in enumerate(members)}
    succ = [0] * len(members)
    for x in members:
        for y in members:
            if (s & a.dia(1 << y)) >> x & 1:
                succ[pos[x]] |= 1 << pos[y]
    return KripkeFrame(len(members), tuple(succ))


def verify_bao_adjunction(f: KripkeFrame) -> bool:
    """bao_L(complex_algebra(f)) is isomorphic to f."""
    return frame_iso(bao_L(complex_algebra(f)), f) is not None


# ---------------------------------------------------------------------------
# frame isomorphism, enumeration, sampling

def frame_iso(f: KripkeFrame, g: KripkeFrame):
    """Lexicographically least relation isomorphism, or None."""
    if f.n != g.n:
        return None

    def sig(h, i):
        return (h.succ[i].bit_count(), h.pred[i].bit_count(),
                bool(h.succ[i] >> i & 1))

    by_sig = {}
    for j in range(g.n):
        by_sig.setdefault(sig(g, j), []).append(j)
    img = [-1] * f.n
    used = 0

    def assign(i):
        nonlocal used
        if i == f.n:
            return True
        for j in by_sig.get(sig(f, i), []):
            if used >> j & 1:
                continue
            ok = all(
                f.rel(k, i) == g.rel(img[k], j) and f.rel(i, k) == g.rel(j, img[k])
                for k in range(i)
            ) and f.rel(i, i) == g.rel(j, j)
            if ok:
                img[i] = j
                used |= 1 << j
                if assign(i + 1):
                    return True
                used &= ~(1 << j)
                img[i] = -1
        return False

    return tuple(img) if assign(0) else None


def enumerate_frames(n: int, budget: int = 1 << 20):
    """All labeled frames on n states, relation bits ascending."""
    if (1 << n * n) > budget:
        raise BudgetError("too many relations")
    out = []
    for bits in range(1 << n * n):
        succ = tuple((bits >> i * n) & ((1 << n) - 1) for i in range(n))
        out.append(KripkeFrame(n, succ))
    return out


def frames_up_to_iso(n: int, budget: int = 1 << 20):
    """One representative per isomorphism class of n-state frames."""
    seen = {}
    for f in enumerate_frames(n, budget):
        key = min(
            tuple(_permuted_row(f.succ[p[i]], p, n) for i in range(n))
            for p in _inverse_perms(n)
        )
        seen.setdefault(key, f)
    return [seen[k] for k in sorted(seen)]


def _inverse_perms(n):
    # pairs (perm applied to indices); precomputed list of tuples
    return [tuple(p) for p in permutations(range(n))]


def _permuted_row(row, p, n):
    out = 0
    for j in range(n):
        if row >> p[j] & 1:
            out |= 1 << j
    return out


def sample_frame(n: int, rng, density: float = 0.4) -> KripkeFrame:
    succ = []
    for _ in range(n):
        row = 0
        for j in range(n):
            if rng.random() < density:
                row |= 1 << j
        succ.append(row)
    return KripkeFrame(n, tuple(succ))


# ---------------------------------------------------------------------------
# powerset functor fullness

@dataclass
class FrameFullnessReport:
    functions: int
    pmorphisms: int
    bao_morphisms: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.pmorphisms == self.bao_morphisms and not self.violations


def fullness_frames_report(f: KripkeFrame, g: KripkeFrame,
                           budget: int = 10_000_000) -> FrameFullnessReport:
    """Preimages of p-morphisms are exactly the diamond-preserving preimages.

    For every function f -> g: the preimage map powerset(g) -> powerset(f)
    is always a complete Boolean morphism, so membership in the BAO-morphism
    side reduces to preserving the diamond on every element; that must
    coincide with being a p-morphism, function by function.
    """
    if g.n ** f.n > budget:
        raise BudgetError("function space too large")
    ca_f, ca_g = complex_algebra(f), complex_algebra(g)
    count = pm = bm = 0
    violations = []
    for table in iproduct(range(g.n), repeat=f.n):
        count += 1
        is_pm = is_pmorphism(table, f, g)
        preserves = all(
            _preimage(table, f.n, ca_g.dia(b)) == ca_f.dia(_preimage(table, f.n, b))
            for b in range(1 << g.n)
        )
        pm += is_pm
        bm += preserves
        if is_pm != preserves:
            violations.append(table)
    return FrameFullnessReport(count, pm, bm, violations)


def _preimage(table, n, mask):
    out = 0
    for x in range(n):
        if mask >> table[x] & 1:
            out |= 1 << x
    return out


# ---------------------------------------------------------------------------
# serialization

def frame_to_json(f: KripkeFrame) -> dict:
    bits = "".join(
        "1" if f.rel(i, j) else "0" for i in range(f.n) for j in range(f.n)
    )
    return {"size": f.n, "relation": bits}


def frame_from_json(data: dict) -> KripkeFrame:
    try:
        n = data["size"]
        bits = data["relation"]
    except (TypeError, KeyError) as exc:
        raise FormatError("frame JSON needs 'size' and 'relation'") from exc
    if not isinstance(n, int) or n < 0 or len(bits) != n * n:
        raise FormatError("relation bit string must have size*size characters")
    succ = []
    for i in range(n):
        row = 0
        for j in range(n):
            c = bits[i * n + j]
            if c not in "01":
                raise FormatError("relation bits must be over {'0', '1'}")
            if c == "1":
                row |= 1 << j
        succ.append(row)
    return KripkeFrame(n, tuple(succ))


def bao_to_json(a: FiniteBAO) -> dict:
    return {
        "atoms": a.atoms,
        "diamond": ["".join("1" if row >> i & 1 else "0"
                            for i in range(a.atoms))
                    for row in a.dia_atom],
    }


def frame_to_dot(f: KripkeFrame, labels=None) -> str:
    name = labels or {i: str(i) for i in range(f.n)}
    lines = ["digraph frame {"]
    for i in range(f.n):
        lines.append(f'  s{i} [label="{name[i]}"];')
    for i in range(f.n):
        for j in _bits(f.succ[i]):
            lines.append(f"  s{i} -> s{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _bits(mask):
    while mask:
        bit = mask & -mask
        mask ^= bit
        yield bit.bit_length() - 1
