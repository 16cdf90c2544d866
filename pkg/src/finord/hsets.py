"""Hereditarily finite sets over an ordered base of atoms.

A Universe interns two kinds of elements: atoms, drawn from a BasePoset of
labels, and finite sets of previously interned elements.  Interning is
append-only and canonical (children sorted, duplicates collapse to the same
id), so structural equality is id equality.

The strict order is membership in the transitive closure: for sets that is
the hereditary unfolding of the children, for atoms it is the base order.
Equivalently, x < y iff x <= c for some child c of y; both routes are
implemented and tests hold them to agreement.
"""

import re
from dataclasses import dataclass

from finord import order as order_mod
from finord.errors import FormatError, HypothesisError

_LABEL_RE = re.compile(r"[A-Za-z0-9_.+\-]+\Z")


@dataclass(frozen=True)
class BasePoset:
    """Partial order on atom labels.

    Use base_poset() to build one from generating pairs; the constructor
    expects an already valid FinitePreorder over the label indices.
    """

    labels: tuple[str, ...]
    relation: order_mod.FinitePreorder

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate atom labels")
        for lab in self.labels:
            if not _LABEL_RE.match(lab):
                raise ValueError(f"bad atom label {lab!r}")
        if self.relation.n != len(self.labels):
            raise ValueError("relation size does not match label count")
        if not self.relation.is_poset:
            raise ValueError("base relation is not antisymmetric")

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def leq(self, a: str, b: str) -> bool:
        return self.relation.leq(self.index(a), self.index(b))

    def lt(self, a: str, b: str) -> bool:
        return self.relation.lt(self.index(a), self.index(b))


def base_poset(labels, pairs) -> BasePoset:
    """BasePoset from labels and generating pairs (a, b) meaning a <= b.

    The reflexive-transitive closure is taken; antisymmetry of the result is
    checked and its failure raises ValueError.
    """
    labels = tuple(labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    rel = order_mod.from_pairs(len(labels), [(idx[a], idx[b]) for a, b in pairs])
    return BasePoset(labels, rel)


ATOM = "atom"
SET = "set"


class Universe:
    """Append-only store of interned hereditary sets and atoms.

    With a base, every base atom is interned up front (ids 0..k-1 in label
    order) so transitive closures of atoms are always id sets.
    """

    def __init__(self, base: BasePoset | None = None, _defer_atoms=False):
        self.base = base
        self._kind: list[str] = []
        self._label: list[str | None] = []
        self._children: list[tuple[int, ...] | None] = []
        self._index: dict = {}
        self._lt_memo: dict[tuple[int, int], bool] = {}
        self._tc_memo: dict[int, frozenset[int]] = {}
        if base is not None and not _defer_atoms:
            for lab in base.labels:
                self._add_atom(lab)

    def __len__(self) -> int:
        return len(self._kind)

    def ids(self) -> range:
        return range(len(self._kind))

    def _add_atom(self, label: str) -> int:
        if self.base is None:
            raise ValueError("universe has no atom base")
        if label not in self.base.labels:
            raise ValueError(f"label {label!r} is not in the base")
        key = (ATOM, label)
        if key in self._index:
            raise ValueError(f"atom {label!r} already interned")
        return self._insert(key, ATOM, label, None)

    def _insert(self, key, kind, label, children) -> int:
        xid = len(self._kind)
        self._kind.append(kind)
        self._label.append(label)
        self._children.append(children)
        self._index[key] = xid
        return xid

    def atom(self, label: str) -> int:
        """Id of an interned atom."""
        try:
            return self._index[(ATOM, label)]
        except KeyError:
            raise KeyError(f"atom {label!r} not in this universe") from None

    def intern(self, children) -> int:
        """Id of the set with the given children, interning it if new."""
        kids = tuple(sorted(set(children)))
        for c in kids:
            if not 0 <= c < len(self._kind):
                raise ValueError(f"child id {c} is not interned")
        key = (SET, kids)
        got = self._index.get(key)
        if got is not None:
            return got
        return self._insert(key, SET, None, kids)

    def peek(self, children):
        """Id the set would get if already interned, else None. No insertion."""
        return self._index.get((SET, tuple(sorted(set(children)))))

    def kind(self, x: int) -> str:
        return self._kind[x]

    def label(self, x: int) -> str:
        if self._kind[x] != ATOM:
            raise ValueError(f"{x} is not an atom")
        return self._label[x]

    def children(self, x: int) -> tuple[int, ...]:
        if self._kind[x] != SET:
            raise ValueError(f"{x} is not a set")
        return self._children[x]

    # strict order, recursive characterization
    def lt(self, x: int, y: int) -> bool:
        """x < y: for sets y, x <= some child of y; for atoms, base order."""
        if x == y:
            return False
        key = (x, y)
        got = self._lt_memo.get(key)
        if got is not None:
            return got
        if self._kind[y] == ATOM:
            out = (self._kind[x] == ATOM
                   and self.base.lt(self._label[x], self._label[y]))
        else:
            out = any(x == c or self.lt(x, c) for c in self._children[y])
        self._lt_memo[key] = out
        return out

    def leq(self, x: int, y: int) -> bool:
        return x == y or self.lt(x, y)

    def transitive_closure(self, x: int) -> frozenset[int]:
        """Everything strictly below x: hereditary members for sets, smaller
        atoms for atoms."""
        got = self._tc_memo.get(x)
        if got is not None:
            return got
        if self._kind[x] == ATOM:
            lab = self._label[x]
            out = frozenset(
                self.atom(other) for other in self.base.labels
                if self.base.lt(other, lab)
            )
        else:
            acc = set()
            for c in self._children[x]:
                acc.add(c)
                acc |= self.transitive_closure(c)
            out = frozenset(acc)
        self._tc_memo[x] = out
        return out

    def lt_via_closure(self, x: int, y: int) -> bool:
        """Alternative route: x < y iff x is in the transitive closure of y."""
        return x in self.transitive_closure(y)

    def comparable(self, x: int, y: int) -> bool:
        return self.lt(x, y) or self.lt(y, x)

    def dump_line(self, x: int) -> str:
        if self._kind[x] == ATOM:
            return f"{x} := atom {self._label[x]}"
        inner = ", ".join(str(c) for c in self._children[x])
        return f"{x} := {{ {inner} }}" if inner else f"{x} := {{ }}"

    def dump(self) -> str:
        """One line per id, in id order.

        ``id := atom <label>`` or ``id := { id, id }``; children always have
        smaller ids than their parent, and load() reproduces ids exactly.
        """
        lines = [self.dump_line(x) for x in self.ids()]
        return "\n".join(lines) + ("\n" if lines else "")


_ATOM_LINE = re.compile(r"(\d+) := atom (\S+)\Z")
_SET_LINE = re.compile(r"(\d+) := \{ ?((?:\d+(?:, \d+)*)?) ?\}\Z")


def load(text: str, base: BasePoset | None = None) -> Universe:
    """Rebuild a Universe from dump() output; ids are preserved exactly."""
    u = Universe(base, _defer_atoms=True)
    for lineno, line in enumerate(text.splitlines()):
        line = line.strip()
        if not line:
            continue
        m = _ATOM_LINE.match(line)
        if m:
            xid, lab = int(m.group(1)), m.group(2)
            try:
                got = u._add_atom(lab)
            except ValueError as exc:
                raise FormatError(f"line {lineno + 1}: {exc}") from exc
        else:
            m = _SET_LINE.match(line)
            if not m:
                raise FormatError(f"line {lineno + 1}: cannot parse {line!r}")
            xid = int(m.group(1))
            kids_str = m.group(2).strip()
            kids = [int(s) for s in kids_str.split(", ")] if kids_str else []
            for c in kids:
                if c >= len(u):
                    raise FormatError(
                        f"line {lineno + 1}: child {c} precedes nothing")
            if u.peek(kids) is not None:
                raise FormatError(f"line {lineno + 1}: duplicate set")
            if list(kids) != sorted(set(kids)):
                raise FormatError(
                    f"line {lineno + 1}: children must be sorted and distinct")
            got = u.intern(kids)
        if got != xid:
            raise FormatError(
                f"line {lineno + 1}: expected id {got}, found {xid}")
    return u


# predicates on id collections

def is_antichain(ids, u: Universe) -> bool:
    """No two distinct members comparable."""
    xs = sorted(set(ids))
    return not any(
        u.comparable(xs[i], xs[j])
        for i in range(len(xs)) for j in range(i + 1, len(xs))
    )


def is_nontrivial_antichain(ids, u: Universe) -> bool:
    return len(set(ids)) >= 2 and is_antichain(ids, u)


def is_chain(ids, u: Universe) -> bool:
    xs = sorted(set(ids))
    return all(
        u.leq(xs[i], xs[j]) or u.leq(xs[j], xs[i])
        for i in range(len(xs)) for j in range(i + 1, len(xs))
    )


def is_convex(ids, u: Universe, scope=None) -> bool:
    """No scope element strictly between two members of `ids`.

    Default scope is every interned element; each element's transitive
    closure is interned, so this is the union of the closures together with
    the elements themselves.
    """
    m = set(ids)
    scope_ids = u.ids() if scope is None else set(scope)
    if scope is not None and not m <= scope_ids:
        raise HypothesisError("ids must lie inside the scope")
    for q in scope_ids:
        if q in m:
            continue
        if any(u.lt(p, q) for p in m) and any(u.lt(q, r) for r in m):
            return False
    return True


def chain_hypothesis(ids, u: Universe) -> bool:
    """Every {x in ids : x <= m} is a chain, for m in ids."""
    m = set(ids)
    return all(is_chain([x for x in m if u.leq(x, top)], u) for top in m)


# standard constructions

def ordinal(u: Universe, k: int) -> int:
    """Id of the von Neumann ordinal k = {0, 1, ..., k-1}."""
    cur = u.intern([])
    below = [cur]
    for _ in range(k):
        cur = u.intern(below)
        below.append(cur)
    return cur


def concrete_claw(u: Universe) -> list[int]:
    """The four-element claw realized with genuine hereditary sets.

    b = {{0}} sits below each of a1 = {b, 1}, a2 = {b, 2}, a3 = {b, 3}
    (von Neumann 1, 2, 3), and the a_i are pairwise incomparable.
    Returns [b, a1, a2, a3].
    """
    zero = u.intern([])
    one = u.intern([zero])
    two = u.intern([zero, one])
    three = u.intern([zero, one, two])
    bottom = u.intern([one])
    return [
        bottom,
        u.intern([bottom, one]),
        u.intern([bottom, two]),
        u.intern([bottom, three]),
    ]


def abstract_claw() -> tuple[Universe, list[int]]:
    """Same shape as concrete_claw but with four base atoms b < a1, a2, a3."""
    base = base_poset(
        ["b", "a1", "a2", "a3"],
        [("b", "a1"), ("b", "a2"), ("b", "a3")],
    )
    u = Universe(base)
    return u, [u.atom(lab) for lab in base.labels]


def abstract_antichain(k: int) -> tuple[Universe, list[int]]:
    """k pairwise incomparable atoms."""
    base = base_poset([f"a{i}" for i in range(k)], [])
    u = Universe(base)
    return u, [u.atom(f"a{i}") for i in range(k)]
