"""Finite abelian groups given by invariant factors, and the subset
operations the matching machinery is built on.

Elements are coordinate tuples, one coordinate per factor, reduced mod
that factor.  Subsets are canonical sorted tuples of elements.  Everything
is exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product as iproduct

from .errors import EmptyInputError, ScaleExceededError

Element = tuple[int, ...]
Subset = tuple[Element, ...]

# Hard cap on closure-based subgroup enumeration; beyond this the lattice
# can explode combinatorially (elementary abelian 2-groups).
MAX_SUBGROUP_COUNT = 100_000
MAX_GROUP_ORDER = 100_000


class Group:
    """Finite abelian group Z_{f1} x ... x Z_{fk}."""

    def __init__(self, factors):
        factors = tuple(int(f) for f in factors)
        if not factors:
            raise EmptyInputError("a group needs at least one factor")
        if any(f < 2 for f in factors):
            raise ValueError(f"factors must all be >= 2, got {factors}")
        order = math.prod(factors)
        if order > MAX_GROUP_ORDER:
            raise ScaleExceededError(f"group order {order} exceeds {MAX_GROUP_ORDER}")
        self.factors = factors
        self.order = order
        self.neutral: Element = (0,) * len(factors)

    def __eq__(self, other):
        return isinstance(other, Group) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"Group({list(self.factors)})"

    def element(self, coords) -> Element:
        """Reduce a coordinate tuple into the group, validating arity.
        Bare integers are accepted when the group has a single factor."""
        if isinstance(coords, int):
            if len(self.factors) != 1:
                raise ValueError(
                    f"bare integer element in a rank-{len(self.factors)} group")
            coords = (coords,)
        coords = tuple(coords)
        if len(coords) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} coordinates, got {len(coords)}")
        return tuple(c % f for c, f in zip(coords, self.factors))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % f for x, y, f in zip(a, b, self.factors))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % f for x, f in zip(a, self.factors))

    def sub(self, a: Element, b: Element) -> Element:
        return tuple((x - y) % f for x, y, f in zip(a, b, self.factors))

    def scale(self, k: int, a: Element) -> Element:
        return tuple((k * x) % f for x, f in zip(a, self.factors))

    def elements(self) -> tuple[Element, ...]:
        """All elements in lexicographic coordinate order."""
        return tuple(iproduct(*(range(f) for f in self.factors)))

    def index(self, a: Element) -> int:
        """Mixed-radix encoding, consistent with elements() order."""
        i = 0
        for c, f in zip(a, self.factors):
            i = i * f + c
        return i

    def subset(self, elems) -> Subset:
        """Canonical form: validated, deduplicated, sorted."""
        return tuple(sorted({self.element(e) for e in elems}))

    def is_cyclic(self) -> bool:
        return reduce(math.lcm, self.factors) == self.order


@dataclass(frozen=True)
class Subgroup:
    elements: Subset
    generators: tuple[Element, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class ProgressionWitness:
    initial: Element
    difference: Element
    length: int


@dataclass(frozen=True)
class QuasiPeriodicWitness:
    period: Subgroup
    periodic_part: Subset
    remainder: Subset


def element_order(group: Group, a: Element) -> int:
    a = group.element(a)
    return reduce(math.lcm, (f // math.gcd(c, f) for c, f in zip(a, group.factors)), 1)


def product_set(group: Group, a_set, b_set) -> Subset:
    a_set = group.subset(a_set)
    b_set = group.subset(b_set)
    if not a_set or not b_set:
        raise EmptyInputError("product_set needs nonempty operands")
    return tuple(sorted({group.add(a, b) for a in a_set for b in b_set}))


def stabilizer(group: Group, s_set) -> Subgroup:
    """All x with x + S = S.  Always a subgroup."""
    s = set(group.subset(s_set))
    if not s:
        raise EmptyInputError("stabilizer of the empty set is not defined here")
    stab = tuple(sorted(g for g in group.elements()
                        if all(group.add(g, x) in s for x in s)))
    return Subgroup(stab, _reduced_generators(group, stab))


def _reduced_generators(group: Group, elems: Subset) -> tuple[Element, ...]:
    """Small generating set: greedily grow cyclic pieces until they cover."""
    gens = []
    have = {group.neutral}
    for a in sorted(elems, key=lambda e: -element_order(group, e)):
        if a in have:
            continue
        gens.append(a)
        have = _closure(group, have | {a})
        if len(have) == len(elems):
            break
    return tuple(gens)


def _closure(group: Group, seed) -> set[Element]:
    out = set(seed) | {group.neutral}
    frontier = list(out)
    while frontier:
        nxt = []
        for a in frontier:
            for g in list(out):
                s = group.add(a, g)
                if s not in out:
                    out.add(s)
                    nxt.append(s)
        frontier = nxt
    return out


def generated_subgroup(group: Group, gens) -> Subgroup:
    gens = group.subset(gens)
    elems = tuple(sorted(_closure(group, gens)))
    return Subgroup(elems, gens if gens else (group.neutral,))


def subgroups(group: Group, include_trivial: bool = True, include_full: bool = True):
    """Every subgroup, canonically ordered by (order, element tuple).

    Cyclic groups get the divisor lattice directly; otherwise subgroups are
    accumulated by closing known ones under one extra generator, which stays
    exact and is fine at the orders this toolkit targets.
    """
    found: dict[Subset, Subgroup] = {}
    if group.is_cyclic():
        gen = _cyclic_generator(group)
        for d in sorted(_divisors(group.order)):
            step = group.scale(group.order // d, gen)
            elems = tuple(sorted(group.scale(k, step) for k in range(d)))
            found[elems] = Subgroup(elems, (step,))
    else:
        trivial = (group.neutral,)
        found[trivial] = Subgroup(trivial, (group.neutral,))
        frontier = [frozenset(trivial)]
        all_elems = list(group.elements())
        while frontier:
            nxt = []
            for h in frontier:
                for a in all_elems:
                    if a in h:
                        continue
                    bigger = frozenset(_closure(group, h | {a}))
                    key = tuple(sorted(bigger))
                    if key not in found:
                        if len(found) >= MAX_SUBGROUP_COUNT:
                            raise ScaleExceededError(
                                f"more than {MAX_SUBGROUP_COUNT} subgroups")
                        found[key] = Subgroup(key, _reduced_generators(group, key))
                        nxt.append(bigger)
            frontier = nxt
    out = sorted(found.values(), key=lambda h: (h.order, h.elements))
    if not include_trivial:
        out = [h for h in out if h.order > 1]
    if not include_full:
        out = [h for h in out if h.order < group.order]
    return out


def _cyclic_generator(group: Group) -> Element:
    for a in group.elements():
        if element_order(group, a) == group.order:
            return a
    raise AssertionError("group reported cyclic but no generator found")


def _divisors(n: int):
    out = []
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
    return sorted(out)


def p_of_group(group: Group) -> int:
    """Smallest prime dividing the group order, i.e. the least order of a
    nontrivial subgroup."""
    n = group.order
    for p in range(2, n + 1):
        if n % p == 0:
            return p
    raise AssertionError("unreachable for order >= 2")


def coset_cover_count(group: Group, a_set, subgroup: Subgroup) -> int:
    """Number of distinct cosets of the subgroup meeting the set."""
    a_set = group.subset(a_set)
    if not a_set:
        raise EmptyInputError("coset_cover_count needs a nonempty set")
    h0 = subgroup.elements[0]
    reps = {min(group.add(a, group.sub(h, h0)) for h in subgroup.elements) for a in a_set}
    return len(reps)


def cosets(group: Group, subgroup: Subgroup):
    """Partition of the group into cosets, each sorted, list sorted by rep."""
    seen = set()
    out = []
    for g in group.elements():
        if g in seen:
            continue
        c = tuple(sorted(group.add(g, h) for h in subgroup.elements))
        seen.update(c)
        out.append(c)
    return out


def is_sidon_subset(group: Group, a_set, distinct_pairs: bool = False) -> bool:
    """Sidon property: an equation a+b = c+d within the set forces {a,b} = {c,d}.

    The default convention constrains all pair sums including a+a.  With
    distinct_pairs=True only sums of two distinct elements are constrained,
    which is the weaker reading sometimes wanted in elementary 2-groups
    where a+a is identically neutral.
    """
    a_set = group.subset(a_set)
    if not a_set:
        raise EmptyInputError("is_sidon_subset needs a nonempty set")
    seen = set()
    n = len(a_set)
    for i in range(n):
        start = i + 1 if distinct_pairs else i
        for j in range(start, n):
            s = group.add(a_set[i], a_set[j])
            if s in seen:
                return False
            seen.add(s)
    return True


def is_chowla_subset(group: Group, b_set) -> bool:
    """Neutral excluded and every element order at least |B| + 1."""
    b_set = group.subset(b_set)
    if not b_set:
        raise EmptyInputError("is_chowla_subset needs a nonempty set")
    if group.neutral in b_set:
        return False
    bound = len(b_set) + 1
    return all(element_order(group, b) >= bound for b in b_set)


def find_progression(group: Group, a_set, min_length: int = 2):
    """Longest arithmetic progression contained in the set, if it reaches
    min_length; otherwise None.

    A progression of length k has k distinct elements a, a+d, ..., a+(k-1)d
    with d nonzero.  Ties go to the first (initial, difference) pair in
    canonical element order.
    """
    if min_length < 2:
        raise ValueError("min_length must be at least 2")
    a_set = group.subset(a_set)
    if not a_set:
        raise EmptyInputError("find_progression needs a nonempty set")
    members = set(a_set)
    best = None
    for a in a_set:
        for d in group.elements():
            if d == group.neutral:
                continue
            length = 1
            seen = {a}
            cur = group.add(a, d)
            while cur in members and cur not in seen:
                seen.add(cur)
                length += 1
                cur = group.add(cur, d)
            if best is None or length > best.length:
                best = ProgressionWitness(a, d, length)
    if best is None or best.length < min_length:
        return None
    return best


def is_progression(group: Group, a_set) -> bool:
    """Whether the whole set is a single arithmetic progression.

    Singletons and pairs always are."""
    a_set = group.subset(a_set)
    if not a_set:
        raise EmptyInputError("is_progression needs a nonempty set")
    if len(a_set) <= 2:
        return True
    w = find_progression(group, a_set, 2)
    return w is not None and w.length == len(a_set)


def quasi_periodic_witness(group: Group, a_set):
    """Decomposition A = A1 u A0 with A1 nonempty and a union of full
    H-cosets for some nontrivial subgroup H.

    Subgroups are tried by decreasing order so the periodic part found first
    has the largest available period; ties break on the canonical subgroup
    ordering.  Returns None when no nontrivial subgroup works.
    """
    a_set = group.subset(a_set)
    if not a_set:
        raise EmptyInputError("quasi_periodic_witness needs a nonempty set")
    members = set(a_set)
    for h in sorted(subgroups(group, include_trivial=False),
                    key=lambda s: (-s.order, s.elements)):
        periodic = []
        for a in a_set:
            if all(group.add(a, x) in members for x in h.elements):
                periodic.append(a)
        if periodic:
            a1 = tuple(sorted(periodic))
            a0 = tuple(sorted(members - set(a1)))
            return QuasiPeriodicWitness(h, a1, a0)
    return None


def multiplicity(group: Group, a_set, b_set, x) -> int:
    """r_{A,B}(x): number of pairs (a, b) with a + b = x."""
    a_set = group.subset(a_set)
    b_set = group.subset(b_set)
    if not a_set or not b_set:
        raise EmptyInputError("multiplicity needs nonempty sets")
    x = group.element(x)
    b_members = set(b_set)
    return sum(1 for a in a_set if group.sub(x, a) in b_members)


def is_coset_of(group: Group, a_set, subgroup: Subgroup) -> bool:
    """Whether the set is a single coset of the given subgroup."""
    a_set = group.subset(a_set)
    if len(a_set) != subgroup.order:
        return False
    a0 = a_set[0]
    return set(group.sub(a, a0) for a in a_set) == set(subgroup.elements)
