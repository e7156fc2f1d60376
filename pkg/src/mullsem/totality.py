"""Non-uniform totality spaces: bipolar-closed up-families over finite carriers.

A family of "total" subsets is stored as the antichain of its minimal
members; the orthogonal of a family is the family of its minimal
transversals, and on finite carriers the double orthogonal is exactly
the upward closure.  Fixpoint totalities are least/greatest fixpoints
of the fold-reindexed body operator on the family lattice.
"""

from __future__ import annotations

from itertools import product as iproduct

from math import comb

from . import _kernels as kernels
from .budgets import DEFAULT_BUDGETS, Budgets
from .errors import (BudgetExceeded, CarrierMismatch, CarrierTooLarge,
                     IterationBudgetExceeded, UnboundVariable,
                     UnsupportedConstructor)
from .formula import (Bot, Formula, Lolli, Mu, Neg, Nu, OfCourse, One, Par,
                      Plus, Tensor, Top, Var, WhyNot, With, Zero)
from .relmodel import (Carrier, Fold, InL, InR, Pair, Relation, UNIT,
                       bags_over, fold_depth, interpret_carrier)

TRANSVERSAL_BOUND = 12


class UpFamily:
    """An up-closed (equivalently bipolar-closed) family of subsets.

    Stored as the antichain of minimal members, as bitmasks relative to
    the carrier's canonical element order.
    """

    __slots__ = ("carrier", "minima")

    def __init__(self, carrier: Carrier, minima):
        self.carrier = carrier
        minima = tuple(sorted(set(minima)))
        if not kernels.is_antichain(minima):
            raise ValueError("minima must form an antichain; "
                             "use biclosure() to normalize")
        self.minima = minima

    @classmethod
    def empty(cls, carrier):
        """The family with no members (bottom of the lattice)."""
        return cls(carrier, ())

    @classmethod
    def full(cls, carrier):
        """All subsets, including the empty one (top of the lattice)."""
        return cls(carrier, (0,))

    def contains_mask(self, mask: int) -> bool:
        return any(m & mask == m for m in self.minima)

    def contains(self, subset) -> bool:
        return self.contains_mask(self.carrier.mask_of(subset))

    def min_sets(self):
        return tuple(self.carrier.set_of(m) for m in self.minima)

    def is_empty_family(self):
        return not self.minima

    def is_full_family(self):
        return self.minima == (0,)

    def le(self, other: "UpFamily") -> bool:
        """Family inclusion."""
        if self.carrier != other.carrier:
            raise CarrierMismatch("families live on different carriers")
        return all(other.contains_mask(m) for m in self.minima)

    def meet(self, other: "UpFamily") -> "UpFamily":
        """Family intersection; minimal members are minimal pairwise unions."""
        if self.carrier != other.carrier:
            raise CarrierMismatch("families live on different carriers")
        unions = [a | b for a in self.minima for b in other.minima]
        return UpFamily(self.carrier, kernels.minimize_family(unions))

    def join(self, other: "UpFamily") -> "UpFamily":
        """Family union (already bipolar closed on finite carriers)."""
        if self.carrier != other.carrier:
            raise CarrierMismatch("families live on different carriers")
        return UpFamily(self.carrier,
                        kernels.minimize_family(self.minima + other.minima))

    def __eq__(self, other):
        return (isinstance(other, UpFamily)
                and self.carrier == other.carrier
                and self.minima == other.minima)

    def __hash__(self):
        return hash((self.carrier, self.minima))

    def __repr__(self):
        sets = ["{" + ",".join(str(e) for e in sorted(s)) + "}"
                for s in self.min_sets()]
        return "UpFamily(min: " + ", ".join(sets) + ")" if sets \
            else "UpFamily(empty)"


def orthogonal(family: UpFamily, max_carrier: int = TRANSVERSAL_BOUND) -> UpFamily:
    """The orthogonal family: all subsets meeting every member.

    Its minimal antichain is the set of minimal transversals of the
    input antichain.  The empty family maps to the full family and any
    family containing the empty set maps to the empty family.
    """
    n = len(family.carrier)
    if n > max_carrier:
        raise CarrierTooLarge(n, max_carrier)
    return UpFamily(family.carrier,
                    kernels.minimal_transversals(family.minima, n))


def biclosure(carrier: Carrier, sets, max_carrier: int = TRANSVERSAL_BOUND,
              ) -> UpFamily:
    """Double-orthogonal closure of an arbitrary family of subsets.

    On a finite carrier this is the upward closure: the minimal
    antichain consists of the inclusion-minimal members.
    """
    if len(carrier) > max_carrier:
        raise CarrierTooLarge(len(carrier), max_carrier)
    masks = [carrier.mask_of(s) for s in sets]
    return UpFamily(carrier, kernels.minimize_family(masks))


class TotalitySpace:
    """A carrier together with its bipolar-closed family of total subsets."""

    __slots__ = ("carrier", "family", "stabilized")

    def __init__(self, carrier: Carrier, family: UpFamily, stabilized=True):
        if family.carrier != carrier:
            raise CarrierMismatch("family carrier differs from the space carrier")
        self.carrier = carrier
        self.family = family
        self.stabilized = stabilized

    def __eq__(self, other):
        return (isinstance(other, TotalitySpace)
                and self.carrier == other.carrier
                and self.family == other.family)

    def __hash__(self):
        return hash((self.carrier, self.family))

    def __repr__(self):
        return f"TotalitySpace({self.carrier!r}, {self.family!r})"


def check_total_morphism(r: Relation, a: TotalitySpace, b: TotalitySpace) -> bool:
    """True iff the image of every total subset of a is total in b.

    Checking the minimal members suffices: images are monotone and the
    target family is up-closed.
    """
    if r.src != a.carrier or r.tgt != b.carrier:
        raise CarrierMismatch("relation endpoints do not match the spaces")
    return all(b.family.contains(r.image(s)) for s in a.family.min_sets())


def preimage_family(r: Relation, fam: UpFamily) -> UpFamily:
    """Reindexing along r: the subsets whose image under r is in fam.

    This is the fiber action of the orthogonality fibration on a base
    morphism (pullback of a closed family along post-composition).
    """
    if r.tgt != fam.carrier:
        raise CarrierMismatch("family does not live on the relation's target")
    src = r.src
    candidates = set()
    for mset in fam.min_sets():
        choices = []
        feasible = True
        for b in mset:
            pre = sorted(r.preimage((b,)))
            if not pre:
                feasible = False
                break
            choices.append(pre)
        if not feasible:
            continue
        for combo in iproduct(*choices):
            candidates.add(src.mask_of(combo))
        if not mset:
            candidates.add(0)
    return UpFamily(src, kernels.minimize_family(candidates))


def direct_image_family(r: Relation, fam: UpFamily) -> UpFamily:
    """Existential quantification along r: biclosure of the direct image."""
    if r.src != fam.carrier:
        raise CarrierMismatch("family does not live on the relation's source")
    return biclosure(r.tgt, [r.image(s) for s in fam.min_sets()])


def enumerate_families(carrier: Carrier):
    """All up-closed families on the carrier (feasible for tiny carriers)."""
    n = len(carrier)
    if n > 4:
        raise CarrierTooLarge(n, 4)
    subsets = list(range(1 << n))
    out = []
    for choice in range(1 << len(subsets)):
        minima = tuple(m for i, m in enumerate(subsets) if choice >> i & 1)
        if kernels.is_antichain(minima):
            out.append(UpFamily(carrier, minima))
    return out


def family_lattice(carrier: Carrier):
    """The complete lattice D(A) of closed families, as a FiniteLattice."""
    from .lattice import FiniteLattice
    return FiniteLattice(enumerate_families(carrier),
                         lambda x, y: x.le(y),
                         name=f"D({len(carrier)})")


# ---------------------------------------------------------------------------
# interpretation

def interpret_totality(f: Formula, env=None,
                       budgets: Budgets = DEFAULT_BUDGETS) -> TotalitySpace:
    """Interpret a classical formula as a totality space.

    The carrier is the relational interpretation; the family follows
    the connective table of this model, with mu as the least and nu as
    the greatest fixpoint of the fold-reindexed body operator.
    """
    env = env or {}
    return _tot(f, env, budgets)


def _space(carrier, minima, stabilized=True):
    return TotalitySpace(carrier,
                         UpFamily(carrier, kernels.minimize_family(minima)),
                         stabilized)


def _tot(f, env, budgets) -> TotalitySpace:
    match f:
        case One() | Bot():
            c = Carrier((UNIT,))
            return _space(c, (1,))
        case Zero():
            return _space(Carrier(()), ())
        case Top():
            return _space(Carrier(()), (0,))
        case Var(name):
            if name not in env:
                raise UnboundVariable(name)
            return env[name]
        case Neg(b):
            sb = _tot(b, env, budgets)
            return TotalitySpace(sb.carrier, orthogonal(sb.family), sb.stabilized)
        case Lolli(_, _):
            raise UnsupportedConstructor("lolli", "totality")
        case Tensor(a, b):
            sa, sb = _tot(a, env, budgets), _tot(b, env, budgets)
            return _tensor(sa, sb, budgets)
        case Par(a, b):
            sa, sb = _tot(a, env, budgets), _tot(b, env, budgets)
            dual = _tensor(_dual(sa), _dual(sb), budgets)
            return TotalitySpace(dual.carrier, orthogonal(dual.family),
                                 dual.stabilized)
        case Plus(a, b):
            sa, sb = _tot(a, env, budgets), _tot(b, env, budgets)
            carrier = _sum_c(sa.carrier, sb.carrier)
            minima = [carrier.mask_of(frozenset(InL(e) for e in s))
                      for s in sa.family.min_sets()]
            minima += [carrier.mask_of(frozenset(InR(e) for e in s))
                       for s in sb.family.min_sets()]
            return _space(carrier, minima, sa.stabilized and sb.stabilized)
        case With(a, b):
            sa, sb = _tot(a, env, budgets), _tot(b, env, budgets)
            carrier = _sum_c(sa.carrier, sb.carrier)
            minima = [carrier.mask_of(frozenset(InL(e) for e in x)
                                      | frozenset(InR(e) for e in y))
                      for x in sa.family.min_sets()
                      for y in sb.family.min_sets()]
            return _space(carrier, minima, sa.stabilized and sb.stabilized)
        case OfCourse(b):
            return _bang(_tot(b, env, budgets), budgets)
        case WhyNot(b):
            sb = _tot(b, env, budgets)
            dual = _bang(_dual(sb), budgets)
            return TotalitySpace(dual.carrier, orthogonal(dual.family),
                                 dual.stabilized)
        case Mu(x, b):
            return _fix(x, b, env, budgets, least=True)
        case Nu(x, b):
            return _fix(x, b, env, budgets, least=False)
    raise TypeError(f"not a formula: {f!r}")


def _dual(s: TotalitySpace) -> TotalitySpace:
    return TotalitySpace(s.carrier, orthogonal(s.family), s.stabilized)


def _sum_c(a: Carrier, b: Carrier) -> Carrier:
    return Carrier([InL(e) for e in a] + [InR(e) for e in b],
                   stabilized=a.stabilized and b.stabilized)


def _tensor(sa: TotalitySpace, sb: TotalitySpace,
            budgets=DEFAULT_BUDGETS) -> TotalitySpace:
    if len(sa.carrier) * len(sb.carrier) > budgets.carrier_cap:
        raise BudgetExceeded(
            f"product carrier of size {len(sa.carrier) * len(sb.carrier)} "
            f"exceeds cap {budgets.carrier_cap}")
    carrier = Carrier((Pair(x, y) for x in sa.carrier for y in sb.carrier),
                      stabilized=sa.carrier.stabilized and sb.carrier.stabilized)
    minima = [carrier.mask_of(frozenset(Pair(p, q) for p in x for q in y))
              for x in sa.family.min_sets() for y in sb.family.min_sets()]
    return _space(carrier, minima, sa.stabilized and sb.stabilized)


def _bang(s: TotalitySpace, budgets) -> TotalitySpace:
    n = len(s.carrier)
    bag_count = sum(comb(n + i - 1, i) for i in range(budgets.bag + 1))
    if bag_count > budgets.carrier_cap:
        raise BudgetExceeded(
            f"multiset carrier of size {bag_count} exceeds cap "
            f"{budgets.carrier_cap}")
    carrier = Carrier(bags_over(s.carrier, budgets.bag),
                      stabilized=s.carrier.stabilized)
    minima = []
    for x in s.family.min_sets():
        bags = frozenset(bags_over(x, budgets.bag))
        minima.append(carrier.mask_of(bags))
    return _space(carrier, minima, s.stabilized)


def _fix(x, body, env, budgets, least):
    """Fixpoint totality at the current truncation depth.

    The stabilization flag compares the antichain against the run at
    depth k-1, restricted to elements of fold depth < k-1.
    """
    space = _fix_at(x, body, env, budgets, least)
    if budgets.depth == 0:
        return space
    prev_budgets = Budgets(budgets.depth - 1, budgets.bag,
                           budgets.carrier_cap, budgets.iter_cap)
    prev = _fix_at(x, body, env, prev_budgets, least)
    bound = budgets.depth - 1
    stable = (restrict_antichain(space.family, bound)
              == restrict_antichain(prev.family, bound)) and space.stabilized
    return TotalitySpace(space.carrier, space.family, stable)


def _fix_at(x, body, env, budgets, least):
    fix_formula = Mu(x, body) if least else Nu(x, body)
    carrier_env = {name: s.carrier for name, s in env.items()}
    carrier = interpret_carrier(fix_formula, carrier_env, budgets)
    if least:
        fam = UpFamily.empty(carrier)
    else:
        fam = UpFamily.full(carrier)
    inner_stable = True
    for _ in range(budgets.iter_cap):
        arg = TotalitySpace(carrier, fam)
        body_space = _tot(body, {**env, x: arg}, budgets)
        inner_stable = inner_stable and body_space.stabilized
        nxt = _reindex_along_fold(carrier, body_space)
        if nxt == fam:
            return TotalitySpace(carrier, fam, inner_stable)
        fam = nxt
    raise IterationBudgetExceeded(budgets.iter_cap)


def _reindex_along_fold(carrier: Carrier, body_space: TotalitySpace) -> UpFamily:
    """Pull the body family back along the inverse of the fold wrapping.

    A subset of the fixpoint carrier is total iff stripping one Fold
    layer lands in the body family; on minimal antichains this wraps
    each minimal set and drops those leaving the truncated carrier.
    """
    available = carrier.as_set()
    minima = []
    for s in body_space.family.min_sets():
        wrapped = frozenset(Fold(e) for e in s)
        if wrapped <= available:
            minima.append(carrier.mask_of(wrapped))
    return UpFamily(carrier, kernels.minimize_family(minima))


def restrict_antichain(family: UpFamily, depth_bound: int) -> tuple:
    """Minimal sets whose members all have fold depth below the bound."""
    kept = []
    for s in family.min_sets():
        if all(fold_depth(e) < depth_bound for e in s):
            kept.append(frozenset(s))
    return tuple(sorted(kept, key=lambda s: sorted(map(str, s))))
