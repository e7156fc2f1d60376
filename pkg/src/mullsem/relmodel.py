"""The relational model: symbolic carriers, relations, and functorial actions.

Fixpoint carriers are depth-truncated approximants of the colimit
chain; every result records whether the chain stabilized inside the
budget, so truncation is visible rather than silent.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .budgets import DEFAULT_BUDGETS, Budgets
from .errors import (BudgetExceeded, CarrierMismatch, UnboundVariable,
                     UnsupportedConstructor)
from .formula import (Formula, Lolli, Mu, Neg, Nu, OfCourse, One, Par, Plus,
                      Tensor, Top, Var, WhyNot, With, Zero, Bot)


class Elem:
    """Base class of carrier elements; immutable, totally ordered."""

    __slots__ = ()

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __str__(self):
        return render_elem(self)


@dataclass(frozen=True, slots=True)
class Unit(Elem):
    pass


@dataclass(frozen=True, slots=True)
class InL(Elem):
    value: Elem


@dataclass(frozen=True, slots=True)
class InR(Elem):
    value: Elem


@dataclass(frozen=True, slots=True)
class Pair(Elem):
    first: Elem
    second: Elem


@dataclass(frozen=True, slots=True)
class Bag(Elem):
    """Finite multiset, kept in canonical sorted order."""

    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items",
                           tuple(sorted(self.items, key=sort_key)))


@dataclass(frozen=True, slots=True)
class Fold(Elem):
    value: Elem


UNIT = Unit()


def sort_key(e):
    match e:
        case Unit():
            return (0,)
        case InL(v):
            return (1, sort_key(v))
        case InR(v):
            return (2, sort_key(v))
        case Pair(a, b):
            return (3, sort_key(a), sort_key(b))
        case Bag(items):
            return (4, len(items), tuple(sort_key(i) for i in items))
        case Fold(v):
            return (5, sort_key(v))
    # carriers may also hold plain labels (symbolic finite sets)
    return (-1, repr(e))


def fold_depth(e) -> int:
    """Maximal nesting of Fold constructors inside e."""
    match e:
        case Unit():
            return 0
        case InL(v) | InR(v):
            return fold_depth(v)
        case Pair(a, b):
            return max(fold_depth(a), fold_depth(b))
        case Bag(items):
            return max((fold_depth(i) for i in items), default=0)
        case Fold(v):
            return 1 + fold_depth(v)
    return 0


def render_elem(e: Elem) -> str:
    match e:
        case Unit():
            return "()"
        case InL(v):
            return f"inl({render_elem(v)})"
        case InR(v):
            return f"inr({render_elem(v)})"
        case Pair(a, b):
            return f"({render_elem(a)},{render_elem(b)})"
        case Bag(items):
            return "[" + ",".join(render_elem(i) for i in items) + "]"
        case Fold(v):
            return f"fold({render_elem(v)})"
    return str(e)


class Carrier:
    """A finite element set with stable duplicate-free enumeration.

    ``stabilized`` reports whether every fixpoint chain met inside the
    interpretation stabilized within its depth budget (True for
    fixpoint-free carriers).
    """

    __slots__ = ("elems", "stabilized", "_index")

    def __init__(self, elems, stabilized=True):
        self.elems = tuple(sorted(set(elems), key=sort_key))
        self.stabilized = stabilized
        self._index = None

    def index(self, e: Elem) -> int:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elems)}
        return self._index[e]

    def mask_of(self, subset) -> int:
        m = 0
        for e in subset:
            m |= 1 << self.index(e)
        return m

    def set_of(self, mask: int) -> frozenset:
        return frozenset(e for i, e in enumerate(self.elems) if mask >> i & 1)

    def __contains__(self, e):
        return e in self.as_set()

    def as_set(self) -> frozenset:
        return frozenset(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __eq__(self, other):
        return isinstance(other, Carrier) and self.elems == other.elems

    def __hash__(self):
        return hash(self.elems)

    def __repr__(self):
        inner = ", ".join(render_elem(e) for e in self.elems)
        return f"Carrier{{{inner}}}"


EMPTY_CARRIER = Carrier(())
UNIT_CARRIER = Carrier((UNIT,))


@dataclass(frozen=True)
class Relation:
    """A finite relation between two carriers."""

    src: Carrier
    tgt: Carrier
    pairs: frozenset

    def __post_init__(self):
        src, tgt = self.src.as_set(), self.tgt.as_set()
        for a, b in self.pairs:
            if a not in src or b not in tgt:
                raise CarrierMismatch(f"pair ({a}, {b}) outside the carriers")

    def image(self, subset) -> frozenset:
        subset = set(subset)
        return frozenset(b for a, b in self.pairs if a in subset)

    def preimage(self, subset) -> frozenset:
        subset = set(subset)
        return frozenset(a for a, b in self.pairs if b in subset)

    def converse(self) -> "Relation":
        return Relation(self.tgt, self.src,
                        frozenset((b, a) for a, b in self.pairs))


def identity_rel(carrier: Carrier) -> Relation:
    return Relation(carrier, carrier, frozenset((e, e) for e in carrier))


def compose_rel(f: Relation, g: Relation) -> Relation:
    """Relational composition g after f: pairs (a, c) with a f b g c."""
    if f.tgt != g.src:
        raise CarrierMismatch("target of the first relation differs from "
                              "source of the second")
    by_src = {}
    for b, c in g.pairs:
        by_src.setdefault(b, set()).add(c)
    pairs = {(a, c) for a, b in f.pairs for c in by_src.get(b, ())}
    return Relation(f.src, g.tgt, frozenset(pairs))


def point(carrier: Carrier, subset) -> Relation:
    """A subset of the carrier viewed as a relation from the unit carrier."""
    return Relation(UNIT_CARRIER, carrier,
                    frozenset((UNIT, e) for e in subset))


def copoint(carrier: Carrier, subset) -> Relation:
    """A subset viewed as a relation into the unit carrier."""
    return Relation(carrier, UNIT_CARRIER,
                    frozenset((e, UNIT) for e in subset))


def bags_over(elems, max_size: int):
    """All multisets of the given elements with size <= max_size."""
    base = sorted(elems, key=sort_key)
    out = []
    for n in range(max_size + 1):
        for combo in combinations_with_replacement(base, n):
            out.append(Bag(combo))
    return out


# ---------------------------------------------------------------------------
# object interpretation

def interpret_carrier(f: Formula, env=None, budgets: Budgets = DEFAULT_BUDGETS,
                      ) -> Carrier:
    """Interpret a formula as a carrier; negation is the identity on objects.

    Fixpoints produce the union of the Kleene chain wrapped in Fold,
    truncated at ``budgets.depth``; ! and ? produce bags of size at most
    ``budgets.bag``.
    """
    env = {name: c.as_set() for name, c in (env or {}).items()}
    elems, stable = _interp(f, env, budgets)
    return Carrier(elems, stabilized=stable)


def _guard(elems, budgets):
    if len(elems) > budgets.carrier_cap:
        raise BudgetExceeded(
            f"carrier of size {len(elems)} exceeds cap {budgets.carrier_cap}")
    return elems


def _interp(f, env, budgets):
    match f:
        case One() | Bot():
            return frozenset((UNIT,)), True
        case Zero() | Top():
            return frozenset(), True
        case Var(name):
            if name not in env:
                raise UnboundVariable(name)
            return frozenset(env[name]), True
        case Neg(b):
            return _interp(b, env, budgets)
        case Lolli(a, b):
            return _interp(Par(Neg(a), b), env, budgets)
        case Tensor(a, b) | Par(a, b):
            sa, ka = _interp(a, env, budgets)
            sb, kb = _interp(b, env, budgets)
            prod = frozenset(Pair(x, y) for x in sa for y in sb)
            return _guard(prod, budgets), ka and kb
        case Plus(a, b) | With(a, b):
            sa, ka = _interp(a, env, budgets)
            sb, kb = _interp(b, env, budgets)
            tagged = frozenset(InL(x) for x in sa) | frozenset(InR(y) for y in sb)
            return _guard(tagged, budgets), ka and kb
        case OfCourse(b) | WhyNot(b):
            sb, kb = _interp(b, env, budgets)
            return _guard(frozenset(bags_over(sb, budgets.bag)), budgets), kb
        case Mu(x, b) | Nu(x, b):
            return _fixpoint_carrier(x, b, env, budgets)
    raise TypeError(f"not a formula: {f!r}")


def _fixpoint_carrier(x, body, env, budgets):
    cur = frozenset()
    inner_stable = True
    stabilized = False
    for _ in range(budgets.depth):
        layer, ok = _interp(body, {**env, x: cur}, budgets)
        inner_stable = inner_stable and ok
        nxt = frozenset(Fold(e) for e in layer)
        _guard(nxt, budgets)
        if nxt == cur:
            stabilized = True
            break
        cur = nxt
    return cur, stabilized and inner_stable


# ---------------------------------------------------------------------------
# morphism interpretation (the functorial action)

def functor_on_relations(f: Formula, x: str, r: Relation, env=None,
                         budgets: Budgets = DEFAULT_BUDGETS) -> Relation:
    """Action of the interpretation functor of f (in the variable x) on r.

    The remaining free variables of f are held fixed at the carriers in
    ``env`` (acting by their identity relations).  The result relates
    the interpretations of f at the source and target carriers of r.
    """
    env = env or {}
    rels = {name: identity_rel(c) for name, c in env.items()}
    rels[x] = r
    return _act(f, rels, budgets)


def _act(f, rels, budgets) -> Relation:
    match f:
        case One() | Bot():
            return identity_rel(UNIT_CARRIER)
        case Zero() | Top():
            return identity_rel(EMPTY_CARRIER)
        case Var(name):
            if name not in rels:
                raise UnboundVariable(name)
            return rels[name]
        case Neg(b):
            flipped = {n: rel.converse() for n, rel in rels.items()}
            return _act(b, flipped, budgets).converse()
        case Lolli(a, b):
            return _act(Par(Neg(a), b), rels, budgets)
        case Tensor(a, b) | Par(a, b):
            ra = _act(a, rels, budgets)
            rb = _act(b, rels, budgets)
            pairs = frozenset((Pair(a1, b1), Pair(a2, b2))
                              for a1, a2 in ra.pairs for b1, b2 in rb.pairs)
            return Relation(_pair_carrier(ra.src, rb.src),
                            _pair_carrier(ra.tgt, rb.tgt), pairs)
        case Plus(a, b) | With(a, b):
            ra = _act(a, rels, budgets)
            rb = _act(b, rels, budgets)
            pairs = frozenset((InL(a1), InL(a2)) for a1, a2 in ra.pairs) | \
                frozenset((InR(b1), InR(b2)) for b1, b2 in rb.pairs)
            return Relation(_sum_carrier(ra.src, rb.src),
                            _sum_carrier(ra.tgt, rb.tgt), pairs)
        case OfCourse(b) | WhyNot(b):
            rb = _act(b, rels, budgets)
            base = sorted(rb.pairs)
            pairs = set()
            for n in range(budgets.bag + 1):
                for combo in combinations_with_replacement(base, n):
                    pairs.add((Bag(tuple(p[0] for p in combo)),
                               Bag(tuple(p[1] for p in combo))))
            return Relation(Carrier(bags_over(rb.src, budgets.bag)),
                            Carrier(bags_over(rb.tgt, budgets.bag)),
                            frozenset(pairs))
        case Mu(yvar, b) | Nu(yvar, b):
            return _fixpoint_action(yvar, b, rels, budgets)
    raise TypeError(f"not a formula: {f!r}")


def _pair_carrier(a: Carrier, b: Carrier) -> Carrier:
    return Carrier((Pair(x, y) for x in a for y in b),
                   stabilized=a.stabilized and b.stabilized)


def _sum_carrier(a: Carrier, b: Carrier) -> Carrier:
    elems = [InL(x) for x in a] + [InR(y) for y in b]
    return Carrier(elems, stabilized=a.stabilized and b.stabilized)


def _fixpoint_action(yvar, body, rels, budgets):
    cur = Relation(EMPTY_CARRIER, EMPTY_CARRIER, frozenset())
    for _ in range(budgets.depth):
        layer = _act(body, {**rels, yvar: cur}, budgets)
        nxt = Relation(
            Carrier((Fold(e) for e in layer.src), layer.src.stabilized),
            Carrier((Fold(e) for e in layer.tgt), layer.tgt.stabilized),
            frozenset((Fold(a), Fold(b)) for a, b in layer.pairs))
        if nxt == cur:
            break
        cur = nxt
    return cur
