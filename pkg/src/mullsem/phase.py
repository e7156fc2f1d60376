"""Finite phase semantics: commutative monoids with poles, facts, validity.

Facts are the bipolar-closed subsets of the monoid; every connective
lands on a fact, and fixpoints are computed by iteration inside the
(finite) fact lattice.  A small counter-model search enumerates
commutative monoids up to isomorphism together with all poles.
"""

from __future__ import annotations

from itertools import permutations

from . import _kernels as kernels
from .errors import (FileFormatError, IterationBudgetExceeded,
                     UnboundVariable, UnsupportedConstructor)
from .formula import (Bot, Formula, Lolli, Mu, Neg, Nu, OfCourse, One, Par,
                      Plus, Tensor, Top, Var, WhyNot, With, Zero, free_vars)


class PhaseSpace:
    """A finite commutative monoid with a pole subset.

    The monoid laws are checked exhaustively on construction; a
    ValueError carries the full list of violations.
    """

    __slots__ = ("elements", "unit", "pole", "_index", "_table", "_pole_mask",
                 "_unit_index")

    def __init__(self, elements, unit, table, pole):
        self.elements = tuple(elements)
        self.unit = unit
        table = dict(table)
        self.pole = frozenset(pole)
        self._index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        if len(self._index) != n:
            raise ValueError("duplicate element names")
        violations = []
        if unit not in self._index:
            violations.append(f"unit {unit!r} is not an element")
        for e in self.pole:
            if e not in self._index:
                violations.append(f"pole member {e!r} is not an element")
        flat = [0] * (n * n)
        if not violations:
            for a in self.elements:
                for b in self.elements:
                    if (a, b) not in table and (b, a) not in table:
                        # unit products follow from the unit law
                        if a == unit:
                            table[(a, b)] = b
                        elif b == unit:
                            table[(a, b)] = a
                        else:
                            violations.append(f"product {a!r}*{b!r} is undefined")
                            continue
                    ab = table.get((a, b), table.get((b, a)))
                    if ab not in self._index:
                        violations.append(f"product {a!r}*{b!r} = {ab!r} "
                                          "is not an element")
                        continue
                    flat[self._index[a] * n + self._index[b]] = self._index[ab]
            for (a, b), ab in table.items():
                if (b, a) in table and table[(b, a)] != ab:
                    violations.append(f"commutativity fails on {a!r},{b!r}")
        self._table = tuple(flat)
        self._unit_index = self._index.get(unit, 0)
        self._pole_mask = 0
        for e in self.pole:
            if e in self._index:
                self._pole_mask |= 1 << self._index[e]
        if not violations:
            violations.extend(self._law_violations())
        if violations:
            raise ValueError("not a commutative monoid with pole: "
                             + "; ".join(violations))

    def _law_violations(self):
        out = []
        n = len(self.elements)
        t = self._table
        u = self._unit_index
        for i in range(n):
            if t[u * n + i] != i or t[i * n + u] != i:
                out.append(f"unit law fails on {self.elements[i]!r}")
        for i in range(n):
            for j in range(n):
                if t[i * n + j] != t[j * n + i]:
                    out.append(f"commutativity fails on "
                               f"{self.elements[i]!r},{self.elements[j]!r}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if t[t[i * n + j] * n + k] != t[i * n + t[j * n + k]]:
                        out.append(
                            "associativity fails on "
                            f"{self.elements[i]!r},{self.elements[j]!r},"
                            f"{self.elements[k]!r}")
        return out

    @property
    def size(self):
        return len(self.elements)

    def mul(self, a, b):
        n = len(self.elements)
        return self.elements[self._table[self._index[a] * n + self._index[b]]]

    def mask_of(self, subset):
        m = 0
        for e in subset:
            m |= 1 << self._index[e]
        return m

    def set_of(self, mask):
        return frozenset(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def orthogonal_mask(self, mask):
        return kernels.phase_orthogonal(self._table, len(self.elements),
                                        self._pole_mask, mask)

    def closure_mask(self, mask):
        return self.orthogonal_mask(self.orthogonal_mask(mask))

    def product_mask(self, xm, ym):
        n = len(self.elements)
        out = 0
        for i in range(n):
            if not xm >> i & 1:
                continue
            row = i * n
            m = ym
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                out |= 1 << self._table[row + j]
        return out

    def idempotent_mask(self):
        n = len(self.elements)
        out = 0
        for i in range(n):
            if self._table[i * n + i] == i:
                out |= 1 << i
        return out

    def to_dict(self):
        return {
            "elements": list(self.elements),
            "unit": self.unit,
            "table": [[a, b, self.mul(a, b)] for a in self.elements
                      for b in self.elements if
                      self.elements.index(a) <= self.elements.index(b)],
            "pole": sorted(self.pole, key=self.elements.index),
        }

    def __repr__(self):
        return (f"PhaseSpace({'|'.join(self.elements)}, unit={self.unit}, "
                f"pole={{{','.join(sorted(self.pole, key=self.elements.index))}}})")


def fact_closure(space: PhaseSpace, subset) -> frozenset:
    """Double orthogonal of a subset: the least fact containing it."""
    return space.set_of(space.closure_mask(space.mask_of(subset)))


def orthogonal_fact(space: PhaseSpace, subset) -> frozenset:
    return space.set_of(space.orthogonal_mask(space.mask_of(subset)))


def interpret_phase(space: PhaseSpace, f: Formula, env=None) -> frozenset:
    """The fact denoted by a formula (environment entries must be facts)."""
    env_masks = {name: space.mask_of(s) for name, s in (env or {}).items()}
    return space.set_of(_eval(space, f, env_masks))


def _eval(space: PhaseSpace, f, env) -> int:
    unit_mask = 1 << space._unit_index
    full = (1 << space.size) - 1
    match f:
        case One():
            return space.closure_mask(unit_mask)
        case Bot():
            return space.orthogonal_mask(unit_mask)
        case Top():
            return full
        case Zero():
            return space.closure_mask(0)
        case Var(name):
            if name not in env:
                raise UnboundVariable(name)
            return env[name]
        case Neg(b):
            return space.orthogonal_mask(_eval(space, b, env))
        case Tensor(a, b):
            return space.closure_mask(
                space.product_mask(_eval(space, a, env), _eval(space, b, env)))
        case Par(a, b):
            return space.orthogonal_mask(space.product_mask(
                space.orthogonal_mask(_eval(space, a, env)),
                space.orthogonal_mask(_eval(space, b, env))))
        case Plus(a, b):
            return space.closure_mask(_eval(space, a, env) | _eval(space, b, env))
        case With(a, b):
            return _eval(space, a, env) & _eval(space, b, env)
        case Lolli(a, b):
            return space.orthogonal_mask(space.product_mask(
                _eval(space, a, env),
                space.orthogonal_mask(_eval(space, b, env))))
        case OfCourse(b):
            idems = space.idempotent_mask() & space.closure_mask(unit_mask)
            return space.closure_mask(_eval(space, b, env) & idems)
        case WhyNot(b):
            inner = space.orthogonal_mask(_eval(space, b, env))
            idems = space.idempotent_mask() & space.closure_mask(unit_mask)
            return space.orthogonal_mask(space.closure_mask(inner & idems))
        case Mu(x, b):
            return _fix(space, x, b, env, least=True)
        case Nu(x, b):
            return _fix(space, x, b, env, least=False)
    raise TypeError(f"not a formula: {f!r}")


def _fix(space, x, body, env, least):
    full = (1 << space.size) - 1
    cur = space.closure_mask(0) if least else full
    for _ in range((1 << space.size) + 2):
        nxt = _eval(space, body, {**env, x: cur})
        if nxt == cur:
            return cur
        cur = nxt
    raise IterationBudgetExceeded((1 << space.size) + 2)


def holds(space: PhaseSpace, f: Formula) -> bool:
    """Validity as membership of the monoid unit in the denoted fact."""
    if free_vars(f):
        raise UnboundVariable(sorted(free_vars(f))[0])
    return bool(_eval(space, f, {}) >> space._unit_index & 1)


# ---------------------------------------------------------------------------
# enumeration of small spaces and counter-model search

_NAMES = ("e", "a", "b", "c", "d", "f", "g", "h")


def enumerate_commutative_monoids(n: int):
    """Multiplication tables of the commutative monoids of order n, up to
    isomorphism, as flat index tuples with element 0 as the unit.

    Deterministic: tables are produced in lexicographic order of their
    canonical (minimal relabelling) form.
    """
    if n < 1:
        return []
    cells = [(i, j) for i in range(1, n) for j in range(i, n)]
    table = {}

    def mul(a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        return table.get((a, b) if a <= b else (b, a))

    def consistent():
        for a in range(1, n):
            for b in range(1, n):
                ab = mul(a, b)
                if ab is None:
                    continue
                for c in range(1, n):
                    bc = mul(b, c)
                    if bc is None:
                        continue
                    left = mul(ab, c)
                    right = mul(a, bc)
                    if left is not None and right is not None and left != right:
                        return False
        return True

    found = []

    def fill(k):
        if k == len(cells):
            found.append(_flat(table, n))
            return
        for val in range(n):
            table[cells[k]] = val
            if consistent():
                fill(k + 1)
        del table[cells[k]]

    fill(0)
    canon_seen = set()
    out = []
    for flat in found:
        c = _canonical(flat, n)
        if c not in canon_seen:
            canon_seen.add(c)
            out.append(c)
    return sorted(out)


def _flat(table, n):
    def mul(a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        return table[(a, b) if a <= b else (b, a)]
    return tuple(mul(i, j) for i in range(n) for j in range(n))


def _canonical(flat, n):
    best = None
    for perm in permutations(range(1, n)):
        relabel = (0,) + perm
        position = {old: new for new, old in enumerate(relabel)}
        cand = [0] * (n * n)
        for i in range(n):
            for j in range(n):
                cand[position[i] * n + position[j]] = position[flat[i * n + j]]
        cand = tuple(cand)
        if best is None or cand < best:
            best = cand
    return best


def space_from_table(flat, n, pole_mask) -> PhaseSpace:
    names = _NAMES[:n]
    table = {(names[i], names[j]): names[flat[i * n + j]]
             for i in range(n) for j in range(n)}
    pole = [names[i] for i in range(n) if pole_mask >> i & 1]
    return PhaseSpace(names, names[0], table, pole)


def enumerate_spaces(max_size: int):
    """All (monoid up to iso, pole) pairs with at most max_size elements."""
    for n in range(1, max_size + 1):
        for flat in enumerate_commutative_monoids(n):
            for pole_mask in range(1 << n):
                yield space_from_table(flat, n, pole_mask)


def search_counter_model(f: Formula, max_size: int = 5):
    """First enumerated space in which f does not hold, or None."""
    if max_size > 5:
        raise ValueError("counter-model search is capped at monoids of size 5")
    for space in enumerate_spaces(max_size):
        if not holds(space, f):
            return space
    return None


# ---------------------------------------------------------------------------
# the phase-space file format

def parse_phase_space(text: str) -> PhaseSpace:
    """Parse the structured-text format:

        elements e a
        unit e
        mul a a e        # one line per product; symmetric pairs may be omitted
        pole e

    Raises FileFormatError with a law-violation report when the table is
    not a commutative monoid.
    """
    elements = None
    unit = None
    pole = None
    table = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "elements":
            elements = tuple(args)
        elif kind == "unit":
            if len(args) != 1:
                raise FileFormatError(f"line {lineno}: unit takes one name")
            unit = args[0]
        elif kind == "mul":
            if len(args) != 3:
                raise FileFormatError(f"line {lineno}: mul takes three names")
            a, b, c = args
            if (a, b) in table and table[(a, b)] != c:
                raise FileFormatError(
                    f"line {lineno}: conflicting product for {a} {b}")
            table[(a, b)] = c
        elif kind == "pole":
            pole = tuple(args)
        else:
            raise FileFormatError(f"line {lineno}: unknown directive {kind!r}")
    if elements is None:
        raise FileFormatError("missing 'elements' line")
    if unit is None:
        raise FileFormatError("missing 'unit' line")
    if pole is None:
        raise FileFormatError("missing 'pole' line")
    try:
        return PhaseSpace(elements, unit, table, pole)
    except ValueError as exc:
        raise FileFormatError(str(exc)) from exc


def render_phase_space(space: PhaseSpace) -> str:
    lines = ["elements " + " ".join(space.elements), f"unit {space.unit}"]
    for i, a in enumerate(space.elements):
        for b in space.elements[i:]:
            lines.append(f"mul {a} {b} {space.mul(a, b)}")
    lines.append("pole " + " ".join(sorted(space.pole,
                                           key=space.elements.index)))
    return "\n".join(lines) + "\n"
