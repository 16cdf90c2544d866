"""Finite preorders and posets over range(n), bitmask representation.

Subsets of the carrier are bitmasks (bit i = element i).  A FinitePreorder
stores, for every element, the mask of elements above and below it; downsets,
upsets and closures are mask operations.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product as iproduct

from finord import kernels
from finord.errors import FormatError


@dataclass(frozen=True)
class FinitePreorder:
    """Reflexive transitive relation on range(n).

    up[i] is the mask of {j : i <= j}, down[i] the mask of {j : j <= i}.
    Construction validates reflexivity and transitivity.
    """

    n: int
    up: tuple[int, ...]

    def __post_init__(self):
        if len(self.up) != self.n:
            raise ValueError("up must have one row per element")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.up):
            if row & ~full:
                raise ValueError(f"row {i} mentions elements outside range({self.n})")
            if not row >> i & 1:
                raise ValueError(f"relation is not reflexive at {i}")
        for i in range(self.n):
            for j in _bits(self.up[i]):
                if self.up[j] & ~self.up[i]:
                    raise ValueError(f"relation is not transitive at ({i}, {j})")

    @cached_property
    def down(self) -> tuple[int, ...]:
        cols = [0] * self.n
        for i in range(self.n):
            for j in _bits(self.up[i]):
                cols[j] |= 1 << i
        return tuple(cols)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def lt(self, i: int, j: int) -> bool:
        return self.leq(i, j) and not self.leq(j, i)

    @cached_property
    def is_poset(self) -> bool:
        return all(self.up[i] & self.down[i] == 1 << i for i in range(self.n))

    @cached_property
    def comparability(self) -> tuple[int, ...]:
        """comparability[i]: elements comparable to i (either direction), sans i."""
        return tuple((self.up[i] | self.down[i]) & ~(1 << i) for i in range(self.n))

    def __repr__(self):
        pairs = [(i, j) for i in range(self.n) for j in _bits(self.up[i]) if i != j]
        return f"FinitePreorder({self.n}, pairs={pairs})"


def from_pairs(n: int, pairs) -> FinitePreorder:
    """Preorder generated by `pairs`: reflexive-transitive closure."""
    up = [1 << i for i in range(n)]
    for a, b in pairs:
        up[a] |= 1 << b
    return FinitePreorder(n, tuple(_transitive_rows(n, up)))


def _transitive_rows(n, up):
    rows = list(up)
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rows[k]
    return rows


def chain(n: int) -> FinitePreorder:
    return FinitePreorder(n, tuple(((1 << n) - 1) & ~((1 << i) - 1) for i in range(n)))


def antichain(n: int) -> FinitePreorder:
    return FinitePreorder(n, tuple(1 << i for i in range(n)))


def singleton() -> FinitePreorder:
    return chain(1)


def sierpinski() -> FinitePreorder:
    """Two points 0 < 1; downsets are {}, {0}, {0,1}."""
    return chain(2)


def product(p: FinitePreorder, q: FinitePreorder) -> FinitePreorder:
    """Componentwise order on pairs; pair (i, j) becomes index i * q.n + j."""
    n = p.n * q.n
    up = []
    for i in range(p.n):
        for j in range(q.n):
            mask = 0
            for a in _bits(p.up[i]):
                for b in _bits(q.up[j]):
                    mask |= 1 << (a * q.n + b)
            up.append(mask)
    return FinitePreorder(n, tuple(up))


def down_closure(p: FinitePreorder, mask: int) -> int:
    out = 0
    for i in _bits(mask):
        out |= p.down[i]
    return out


def up_closure(p: FinitePreorder, mask: int) -> int:
    out = 0
    for i in _bits(mask):
        out |= p.up[i]
    return out


def is_downset(p: FinitePreorder, mask: int) -> bool:
    return down_closure(p, mask) == mask


def all_downsets(p: FinitePreorder) -> list[int]:
    """Every downset of p, ascending as integers.

    Downsets arise as down closures of antichains, so the enumeration kernel
    does the walking and only the closure remains.  For preorders two
    equivalent generators close to the same downset, hence the set.
    """
    masks, _ = kernels.antichains(p.n, p.comparability)
    return sorted({down_closure(p, m) for m in masks})


def is_wellfounded(p: FinitePreorder) -> bool:
    """Whether the strict order admits no infinite descent.

    On a finite carrier a strict descending sequence must revisit an element,
    which forces a nontrivial equivalence; so this is exactly `is_poset`.
    """
    return p.is_poset


def covers(p: FinitePreorder) -> list[tuple[int, int]]:
    """Cover pairs (i, j): i < j with nothing strictly between."""
    out = []
    for i in range(p.n):
        for j in range(p.n):
            if p.lt(i, j) and not any(
                p.lt(i, k) and p.lt(k, j) for k in _bits(p.up[i] & p.down[j])
            ):
                out.append((i, j))
    return out


def poset_iso(p: FinitePreorder, q: FinitePreorder):
    """Order isomorphism p -> q as a tuple, or None.

    Returns the lexicographically least isomorphism, so the answer is
    deterministic.  Works for preorders as well.
    """
    if p.n != q.n:
        return None

    def sig(r, i):
        return (r.up[i].bit_count(), r.down[i].bit_count())

    q_by_sig = {}
    for j in range(q.n):
        q_by_sig.setdefault(sig(q, j), []).append(j)
    img = [-1] * p.n
    used = 0

    def assign(i):
        nonlocal used
        if i == p.n:
            return True
        for j in q_by_sig.get(sig(p, i), []):
            if used >> j & 1:
                continue
            ok = all(
                p.leq(k, i) == q.leq(img[k], j) and p.leq(i, k) == q.leq(j, img[k])
                for k in range(i)
            )
            if ok:
                img[i] = j
                used |= 1 << j
                if assign(i + 1):
                    return True
                used &= ~(1 << j)
                img[i] = -1
        return False

    return tuple(img) if assign(0) else None


def canonical_form(p: FinitePreorder) -> str:
    """Least leq bit string over all relabelings; equal iff isomorphic."""
    best = None
    for perm in permutations(range(p.n)):
        bits = []
        for i in perm:
            row = p.up[i]
            bits.append("".join("1" if row >> j & 1 else "0" for j in perm))
        s = "".join(bits)
        if best is None or s < best:
            best = s
    return best if best is not None else ""


def enumerate_posets(n: int) -> list[FinitePreorder]:
    """All posets on n elements up to isomorphism, canonical representatives.

    Grown by repeatedly adjoining a new maximal element above a chosen
    downset; intended for n <= 5 (counts 1, 2, 5, 16, 63).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n > 6:
        raise ValueError("enumeration by relabeling is impractical beyond 6")
    reps = [singleton()]
    for k in range(2, n + 1):
        seen = {}
        for p in reps:
            for d in all_downsets(p):
                up = [row for row in p.up]
                for i in _bits(d):
                    up[i] |= 1 << (k - 1)
                up.append(1 << (k - 1))
                q = FinitePreorder(k, tuple(up))
                seen.setdefault(canonical_form(q), q)
        reps = [seen[key] for key in sorted(seen)]
    return reps


def enumerate_preorders(n: int) -> list[FinitePreorder]:
    """All labeled preorders on n elements (counts 1, 4, 29, 355); n <= 4."""
    if not 1 <= n <= 4:
        raise ValueError("labeled preorder enumeration supported for 1 <= n <= 4")
    out = []
    off_diag = [(i, j) for i in range(n) for j in range(n) if i != j]
    for combo in iproduct((0, 1), repeat=len(off_diag)):
        up = [1 << i for i in range(n)]
        for (i, j), bit in zip(off_diag, combo):
            if bit:
                up[i] |= 1 << j
        if _transitive_rows(n, up) == up:
            out.append(FinitePreorder(n, tuple(up)))
    return out


def sample_preorder(n: int, rng, density: float = 0.3) -> FinitePreorder:
    """Random preorder: random digraph, then reflexive-transitive closure."""
    up = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                up[i] |= 1 << j
    return FinitePreorder(n, tuple(_transitive_rows(n, up)))


def sample_poset(n: int, rng, density: float = 0.3) -> FinitePreorder:
    """Random poset: random DAG along a shuffled order, then closure."""
    perm = list(range(n))
    rng.shuffle(perm)
    up = [1 << i for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                up[perm[a]] |= 1 << perm[b]
    return FinitePreorder(n, tuple(_transitive_rows(n, up)))


def to_json(p: FinitePreorder) -> dict:
    """Row-major leq bit string; char i*n+j is '1' iff i <= j."""
    bits = "".join(
        "1" if p.leq(i, j) else "0" for i in range(p.n) for j in range(p.n)
    )
    return {"size": p.n, "leq": bits}


def from_json(data: dict) -> FinitePreorder:
    try:
        n = data["size"]
        bits = data["leq"]
    except (TypeError, KeyError) as exc:
        raise FormatError("preorder JSON needs 'size' and 'leq'") from exc
    if not isinstance(n, int) or n < 0 or len(bits) != n * n:
        raise FormatError("leq bit string must have size*size characters")
    if any(c not in "01" for c in bits):
        raise FormatError("leq bit string must be over {'0', '1'}")
    up = []
    for i in range(n):
        row = 0
        for j in range(n):
            if bits[i * n + j] == "1":
                row |= 1 << j
        up.append(row)
    try:
        return FinitePreorder(n, tuple(up))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def to_dot(p: FinitePreorder, labels=None) -> str:
    """DOT digraph; Hasse edges for posets, all strict edges otherwise."""
    name = labels or {i: str(i) for i in range(p.n)}
    lines = ["digraph order {", "  rankdir=BT;"]
    for i in range(p.n):
        lines.append(f'  n{i} [label="{name[i]}"];')
    edges = covers(p) if p.is_poset else [
        (i, j) for i in range(p.n) for j in _bits(p.up[i]) if i != j
    ]
    for i, j in edges:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _bits(mask):
    while mask:
        bit = mask & -mask
        mask ^= bit
        yield bit.bit_length() - 1
