"""Deciding whether A is matched to B inside a finite abelian group.

A matching is a bijection f: A -> B with a + f(a) outside A for every a.
Existence reduces to a perfect matching in the bipartite graph with an edge
(a, b) whenever a + b is not in A, so the decision procedure is exact.
Unmatched pairs come with a Hall-type violator S: the set
V_S = {b in B : S + b is contained in A} then satisfies |V_S| > |A| - |S|.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    EmptyInputError,
    NotUnmatchableError,
    ScaleExceededError,
    SizeMismatchError,
)
from .groups import (
    Element,
    Group,
    ProgressionWitness,
    QuasiPeriodicWitness,
    Subset,
    coset_cover_count,
    cosets,
    element_order,
    find_progression,
    is_coset_of,
    is_progression,
    is_sidon_subset,
    p_of_group,
    product_set,
    subgroups,
)

INF = float("inf")


@dataclass(frozen=True)
class MatchingCertificate:
    pairs: tuple[tuple[Element, Element], ...]


@dataclass(frozen=True)
class HallViolator:
    s_set: Subset
    v_set: Subset


@dataclass(frozen=True)
class ConditionEntry:
    part: int
    holds: bool
    evidence: str


@dataclass(frozen=True)
class StructureWitness:
    s_set: Subset
    w_set: Subset
    product_sw: Subset
    classification: ProgressionWitness | QuasiPeriodicWitness | None

    @property
    def kind(self) -> str:
        if isinstance(self.classification, ProgressionWitness):
            return "progression"
        if isinstance(self.classification, QuasiPeriodicWitness):
            return "quasi_periodic"
        return "unclassified_at_min_length"


@dataclass(frozen=True)
class ScanOutcome:
    holds: bool
    counterexample: tuple[Subset, Subset] | None
    pairs_checked: int


def _validated_pair(group: Group, a_set, b_set) -> tuple[Subset, Subset]:
    a = group.subset(a_set)
    b = group.subset(b_set)
    if not a or not b:
        raise EmptyInputError("matching needs nonempty A and B")
    if len(a) != len(b):
        raise SizeMismatchError(f"|A| = {len(a)} but |B| = {len(b)}")
    return a, b


def _adjacency(group: Group, a: Subset, b: Subset) -> list[list[int]]:
    members = set(a)
    add = group.add
    return [[j for j, y in enumerate(b) if add(x, y) not in members] for x in a]


def _hopcroft_karp(adj: list[list[int]], n_right: int):
    """Maximum bipartite matching; returns (size, match_left, match_right)."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    size = 0

    def dfs(i):
        for j in adj[i]:
            k = match_r[j]
            if k < 0 or (dist[k] == dist[i] + 1 and dfs(k)):
                match_l[i] = j
                match_r[j] = i
                return True
        dist[i] = INF
        return False

    while True:
        dist = [INF] * n_left
        queue = [i for i in range(n_left) if match_l[i] < 0]
        for i in queue:
            dist[i] = 0
        reachable_free = False
        qi = 0
        while qi < len(queue):
            i = queue[qi]
            qi += 1
            for j in adj[i]:
                k = match_r[j]
                if k < 0:
                    reachable_free = True
                elif dist[k] == INF:
                    dist[k] = dist[i] + 1
                    queue.append(k)
        if not reachable_free:
            return size, match_l, match_r
        for i in range(n_left):
            if match_l[i] < 0 and dfs(i):
                size += 1


def has_matching(group: Group, a_set, b_set) -> bool:
    a, b = _validated_pair(group, a_set, b_set)
    if group.neutral in b:
        return False
    size, _, _ = _hopcroft_karp(_adjacency(group, a, b), len(b))
    return size == len(a)


def find_matching(group: Group, a_set, b_set):
    """Lexicographically smallest matching certificate, or None.

    Smallest means: scanning A in canonical order, each a gets the least b
    that still leaves the rest perfectly matchable.
    """
    a, b = _validated_pair(group, a_set, b_set)
    if not has_matching(group, a, b):
        return None
    adj = _adjacency(group, a, b)
    n = len(a)
    chosen: list[int] = []
    used: set[int] = set()
    for i in range(n):
        for j in adj[i]:
            if j in used:
                continue
            rest_adj = [[c for c in adj[k] if c not in used and c != j]
                        for k in range(i + 1, n)]
            size, _, _ = _hopcroft_karp(rest_adj, n)
            if size == n - i - 1:
                chosen.append(j)
                used.add(j)
                break
        else:
            raise AssertionError("matchable pair lost its matching mid-build")
    return MatchingCertificate(tuple((a[i], b[j]) for i, j in enumerate(chosen)))


def verify_certificate(group: Group, a_set, b_set, certificate: MatchingCertificate) -> bool:
    a, b = _validated_pair(group, a_set, b_set)
    pairs = [(group.element(x), group.element(y)) for x, y in certificate.pairs]
    if tuple(sorted(x for x, _ in pairs)) != a:
        return False
    if tuple(sorted(y for _, y in pairs)) != b:
        return False
    members = set(a)
    return all(group.add(x, y) not in members for x, y in pairs)


def _v_set(group: Group, a: Subset, b: Subset, s: tuple) -> tuple:
    """V_S = {b in B : S + b lies inside A}."""
    members = set(a)
    add = group.add
    return tuple(y for y in b if all(add(x, y) in members for x in s))


def hall_violator(group: Group, a_set, b_set):
    """Inclusion-minimal S with |V_S| > |A| - |S|, or None when matched.

    The starting violator is the set of left vertices reachable from an
    unmatched one by alternating paths; minimality is then enforced by
    greedy removal in canonical order.
    """
    a, b = _validated_pair(group, a_set, b_set)
    # neutral in B leaves that column isolated (a + 0 = a stays in A), so
    # the graph below is deficient exactly when the pair is unmatched
    adj = _adjacency(group, a, b)
    n = len(a)
    size, match_l, match_r = _hopcroft_karp(adj, n)
    if size == n:
        return None
    reach_l = [match_l[i] < 0 for i in range(n)]
    queue = [i for i in range(n) if reach_l[i]]
    reach_r = [False] * n
    qi = 0
    while qi < len(queue):
        i = queue[qi]
        qi += 1
        for j in adj[i]:
            if not reach_r[j]:
                reach_r[j] = True
                k = match_r[j]
                if k >= 0 and not reach_l[k]:
                    reach_l[k] = True
                    queue.append(k)
    s = tuple(a[i] for i in range(n) if reach_l[i])
    assert len(_v_set(group, a, b, s)) > n - len(s)
    # shrink to inclusion-minimal, deterministically
    changed = True
    while changed:
        changed = False
        for x in s:
            cand = tuple(y for y in s if y != x)
            if cand and len(_v_set(group, a, b, cand)) > n - len(cand):
                s = cand
                changed = True
                break
    return HallViolator(s, _v_set(group, a, b, s))


def matched_by_permutation_scan(group: Group, a_set, b_set, limit: int = 9) -> bool:
    """Oracle: backtracking over all bijections A -> B."""
    a, b = _validated_pair(group, a_set, b_set)
    n = len(a)
    if n > limit:
        raise ScaleExceededError(f"permutation scan limited to size {limit}")
    members = set(a)
    add = group.add
    used = [False] * n

    def place(i):
        if i == n:
            return True
        for j in range(n):
            if not used[j] and add(a[i], b[j]) not in members:
                used[j] = True
                if place(i + 1):
                    return True
                used[j] = False
        return False

    return place(0)


def lemma_violation_scan(group: Group, a_set, b_set):
    """Oracle: exhaustive subset scan for S with |V_S| > |A| - |S|; first hit
    in lexicographic order or None."""
    from itertools import combinations

    a, b = _validated_pair(group, a_set, b_set)
    n = len(a)
    if n > 20:
        raise ScaleExceededError("subset scan limited to size 20")
    for k in range(1, n + 1):
        for s in combinations(a, k):
            v = _v_set(group, a, b, s)
            if len(v) > n - k:
                return HallViolator(s, v)
    return None


def check_condition(group: Group, a_set, b_set, part: int) -> ConditionEntry:
    """One of the seven sufficient conditions; holds implies matched."""
    a, b = _validated_pair(group, a_set, b_set)
    if part not in range(1, 8):
        raise ValueError(f"part must be 1..7, got {part}")
    if group.neutral in b:
        return ConditionEntry(part, False, "neutral element lies in B")
    return _CONDITION_CHECKS[part](group, a, b)


def check_all_conditions(group: Group, a_set, b_set) -> list[ConditionEntry]:
    return [check_condition(group, a_set, b_set, part) for part in range(1, 8)]


def _fmt(e: Element) -> str:
    return str(e[0]) if len(e) == 1 else "(" + ",".join(map(str, e)) + ")"


def _fmt_set(s) -> str:
    return "{" + ",".join(_fmt(e) for e in s) + "}"


def _cond_part1(group, a, b):
    for y in b:
        if element_order(group, y) < group.order:
            return ConditionEntry(
                1, False,
                f"{_fmt(y)} generates a proper subgroup of order {element_order(group, y)}")
    return ConditionEntry(1, True, "every element of B generates the whole group")


def _cover_all(group, a, b, bound_for):
    """Shared scan for parts 2 and 3: both sets must meet more than
    bound_for(H) cosets of every nontrivial proper subgroup H."""
    for h in subgroups(group, include_trivial=False, include_full=False):
        bound = bound_for(h)
        for name, s in (("A", a), ("B", b)):
            c = coset_cover_count(group, s, h)
            if c <= bound:
                return (False,
                        f"{name} meets only {c} coset(s) of the order-{h.order} "
                        f"subgroup {_fmt_set(h.elements)}, need more than {bound}")
    return True, ""


def _cond_part2(group, a, b):
    # l = n - 1 is the weakest admissible choice and is checked literally
    # against every nontrivial proper subgroup
    l = len(a) - 1
    ok, why = _cover_all(group, a, b, lambda h: l)
    if not ok:
        return ConditionEntry(2, False, why + f" (l={l})")
    return ConditionEntry(
        2, True,
        f"A and B each meet more than l={l} cosets of every nontrivial proper subgroup")


def _cond_part3(group, a, b):
    n = len(a)
    l = n - 2
    # a subgroup of index i can never be avoided by more than i cosets, so
    # the cover requirement saturates at index - 1
    ok, why = _cover_all(group, a, b,
                         lambda h: min(l, group.order // h.order - 1))
    if not ok:
        return ConditionEntry(3, False, why + f" (l={l}, saturated at index-1)")
    powers = {group.scale(n, x) for x in a}
    if len(powers) <= 2:
        return ConditionEntry(
            3, False, f"|{{n*a : a in A}}| = {len(powers)}, need more than 2")
    big = [y for y in b if element_order(group, y) > n]
    if len(big) < 2:
        return ConditionEntry(
            3, False, f"only {len(big)} element(s) of B have order above n={n}")
    return ConditionEntry(
        3, True,
        f"cover bounds hold at l={l} (saturated at index-1), "
        f"|{{n*a}}| = {len(powers)} > 2, and {len(big)} elements of B have order above n")


def _cond_part4(group, a, b):
    p = p_of_group(group)
    n = len(a)
    if p != n:
        return ConditionEntry(
            4, False, f"smallest prime divisor of the group order is {p}, not n={n}")
    for h in subgroups(group, include_trivial=False):
        if is_coset_of(group, a, h):
            return ConditionEntry(
                4, False,
                f"A is a coset of the order-{h.order} subgroup {_fmt_set(h.elements)}")
    return ConditionEntry(
        4, True, f"n equals the smallest prime divisor {p} and A is not a coset "
        f"of a nontrivial subgroup")


def _cond_part5(group, a, b):
    if is_sidon_subset(group, a):
        return ConditionEntry(5, True, "A is a Sidon set")
    return ConditionEntry(5, False, "A is not a Sidon set")


def _cond_part6(group, a, b):
    n = len(a)
    for y in b:
        o = element_order(group, y)
        if o < n:
            return ConditionEntry(6, False, f"{_fmt(y)} has order {o} below n={n}")
    if is_progression(group, a):
        return ConditionEntry(6, False, "A is an arithmetic progression")
    return ConditionEntry(
        6, True, f"every element of B has order at least n={n} and A is not a progression")


def _cond_part7(group, a, b):
    a_members, b_members = set(a), set(b)
    for h in subgroups(group, include_trivial=False):
        worst_a = max(sum(1 for x in c if x in a_members) for c in cosets(group, h))
        worst_b = max(sum(1 for x in c if x in b_members) for c in cosets(group, h))
        if worst_a + worst_b >= h.order + 1:
            return ConditionEntry(
                7, False,
                f"some cosets of the order-{h.order} subgroup meet A and B in "
                f"{worst_a} + {worst_b} >= |H| + 1 elements")
    return ConditionEntry(
        7, True,
        "for every nontrivial subgroup H, |aH ∩ A| + |bH ∩ B| stays below |H| + 1")


_CONDITION_CHECKS = {
    1: _cond_part1, 2: _cond_part2, 3: _cond_part3, 4: _cond_part4,
    5: _cond_part5, 6: _cond_part6, 7: _cond_part7,
}


def structure_witness(group: Group, a_set, b_set, min_length: int = 2) -> StructureWitness:
    """For an unmatched pair, the small-sumset structure behind the failure.

    S comes from the Hall violator, W = V_S plus the neutral element; then
    S + W sits inside A with |S + W| < |S| + |W| - 1 and both factors have
    at least two elements.  The sumset is classified as quasi-periodic when
    some nontrivial subgroup gives a periodic part (the stronger structure),
    else as a progression of length >= min_length covering it, else marked
    unclassified at this min_length.
    """
    a, b = _validated_pair(group, a_set, b_set)
    if group.neutral in b:
        raise ValueError("structure witness requires the neutral element outside B")
    violator = hall_violator(group, a, b)
    if violator is None:
        raise NotUnmatchableError("pair is matched; no structure witness exists")
    s = violator.s_set
    w = tuple(sorted(set(violator.v_set) | {group.neutral}))
    sw = product_set(group, s, w)
    assert set(sw) <= set(a), "S + W escaped A"
    assert len(sw) < len(s) + len(w) - 1, "sumset is not deficient"
    assert min(len(s), len(w)) > 1, "degenerate factor in structure witness"
    from .groups import quasi_periodic_witness

    classification = quasi_periodic_witness(group, sw)
    if classification is None:
        prog = find_progression(group, sw, min_length)
        if prog is not None and prog.length == len(sw):
            classification = prog
    return StructureWitness(s, w, sw, classification)


def matching_property_scan(group: Group, max_size: int) -> ScanOutcome:
    """Exhaustively test every pair |A| = |B| <= max_size with neutral not
    in B; stops at the first unmatched pair in enumeration order
    (sizes ascending, then lexicographic)."""
    from itertools import combinations

    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    elems = sorted(group.elements())
    nonzero = [e for e in elems if e != group.neutral]
    checked = 0
    for n in range(1, max_size + 1):
        if n > len(elems) or n > len(nonzero):
            break
        for a in combinations(elems, n):
            for b in combinations(nonzero, n):
                checked += 1
                if not has_matching(group, a, b):
                    return ScanOutcome(False, (a, b), checked)
    return ScanOutcome(True, None, checked)


def semicoset_representative_check(group: Group, subgroup, a_set) -> bool:
    """Whether the set picks at most one element from each coset of the
    subgroup (equivalently, it embeds in a transversal)."""
    if subgroup.order <= 1 or subgroup.order >= group.order:
        raise ValueError("subgroup must be nontrivial and proper")
    a = group.subset(a_set)
    if not a:
        raise EmptyInputError("semicoset check needs a nonempty set")
    return coset_cover_count(group, a, subgroup) == len(a)
