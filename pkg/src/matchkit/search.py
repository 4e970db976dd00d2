"""Seeded, budgeted searches over pair spaces.

Conjecture scans, the maximum Chowla dimension, and discovery of
unmatchable pairs with their structure witnesses attached.  Every
counterexample is re-verified through the deciding module and, where one
exists, through a brute-force oracle before it enters a report.

Instance streams are deterministic functions of (parameters, seed) and can
be sharded by index residue: run the same scan with shard_index = 0..k-1,
then merge_reports.  The time limit is only checked between instances, so
an instance is never half-verified.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import combinations
from math import gcd

from .errors import ScaleExceededError
from .fields import (
    FieldExtension,
    Subspace,
    fmt_element,
    fmt_field,
    fmt_subspace,
    full_subspace,
    intermediate_fields,
    intersect,
    is_chowla_subspace,
    scale_subspace,
    span,
    span_product,
    subspace_elements,
    subspaces_of_dim,
    subspaces_within,
)
from .group_matching import (
    has_matching,
    hall_violator,
    matched_by_permutation_scan,
    structure_witness,
)
from .groups import Group
from .linear_matching import (
    matched_basis_exists_brute,
    space_matchable,
    subfield_atom_witness,
)
from .literals import fmt_group, fmt_group_subset

SAMPLED_DEFAULT_INSTANCES = 10_000
BRUTE_REVERIFY_LIMIT = 100_000


@dataclass(frozen=True)
class SearchBudget:
    """Identical (budget, seed) always reproduce the same instance stream."""

    max_instances: int | None = None
    seed: int = 0
    time_limit: float | None = None  # seconds, checked between instances
    exhaustive: bool = True
    shard_count: int = 1
    shard_index: int = 0

    def __post_init__(self):
        if self.shard_count < 1 or not 0 <= self.shard_index < self.shard_count:
            raise ValueError("shard_index must lie in [0, shard_count)")
        if self.max_instances is not None and self.max_instances < 0:
            raise ValueError("max_instances must be nonnegative")


@dataclass(frozen=True)
class ScanReport:
    instances_checked: int
    counterexamples: tuple[dict, ...]
    exhausted: bool
    parameters: dict


@dataclass(frozen=True)
class GroupDomain:
    groups: tuple[Group, ...]
    max_size: int


@dataclass(frozen=True)
class FieldDomain:
    field: FieldExtension
    dim: int


@dataclass(frozen=True)
class MaxChowlaResult:
    value: int
    witness: Subspace | None
    exhausted: bool
    lower_bound: int


class _Run:
    """Shared per-scan accounting: sharding, instance cap, deadline."""

    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.checked = 0
        self.index = 0
        self.exhausted = True
        self.deadline = (None if budget.time_limit is None
                         else time.monotonic() + budget.time_limit)

    def mine(self) -> bool:
        """Claim the next instance index for this shard."""
        i = self.index
        self.index += 1
        return i % self.budget.shard_count == self.budget.shard_index

    def spent(self) -> bool:
        cap = self.budget.max_instances
        if cap is not None and self.checked >= cap:
            self.exhausted = False
            return True
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.exhausted = False
            return True
        return False

    def params(self, **extra) -> dict:
        b = self.budget
        out = {
            "seed": b.seed,
            "exhaustive": b.exhaustive,
            "max_instances": b.max_instances,
            "time_limit": b.time_limit,
        }
        if b.shard_count > 1:
            out["shard"] = f"{b.shard_index}/{b.shard_count}"
        out.update(extra)
        return out


def _sample_count(budget: SearchBudget) -> int:
    if budget.max_instances is None:
        return SAMPLED_DEFAULT_INSTANCES
    return budget.max_instances


def _random_subspace(E: FieldExtension, rng: random.Random, dim: int) -> Subspace:
    cur = span(E, ())
    while cur.dim < dim:
        v = rng.randrange(1, E.q)
        nxt = span(E, cur.rows + (v,))
        if nxt.dim > cur.dim:
            cur = nxt
    return cur


def _full_line_reps(E: FieldExtension) -> list[int]:
    return [v for v in range(1, E.q) if E.digits(v)[E.pivot(v)] == 1]


# conjecture scans


def conjecture_5_1_scan(E: FieldExtension, max_dim: int,
                        budget: SearchBudget | None = None) -> ScanReport:
    """Pairs (A, B) whose intersections with scaled intermediate fields stay
    small should have no small product span: dim<ST> >= dim S + dim T - 1
    for all nonzero S <= A, T <= B.  Reports every verified violation."""
    budget = budget or SearchBudget()
    run = _Run(budget)
    if not 1 <= max_dim <= E.m:
        raise ValueError(f"max_dim must lie in [1, {E.m}]")
    mids = [f for f in intermediate_fields(E) if 1 < f.degree < E.m]
    base = run.params(field=fmt_field(E), max_dim=max_dim,
                      orbit_reduction="none")
    if not mids:
        return ScanReport(0, (), True, base | {"vacuous": True})

    reps = _full_line_reps(E)
    scaled = []  # (degree, distinct aM) per intermediate field; aM = a'M
    # whenever a/a' lands in M, so only (q-1)/(|M|-1) spaces are distinct
    for f in mids:
        seen: dict[tuple, Subspace] = {}
        for a in reps:
            s = scale_subspace(a, f.subspace)
            seen.setdefault(s.rows, s)
        scaled.append((f.degree, list(seen.values())))

    def hypothesis(A: Subspace, B: Subspace) -> bool:
        for degree, spaces in scaled:
            amax = max(intersect(s, A).dim for s in spaces)
            bmax = max(intersect(s, B).dim for s in spaces)
            if amax + bmax > degree + 1:
                return False
        return True

    def violation(A: Subspace, B: Subspace):
        for s_dim in range(1, A.dim + 1):
            for S in subspaces_within(A, s_dim):
                for t_dim in range(1, B.dim + 1):
                    for T in subspaces_within(B, t_dim):
                        st = span_product(E, S, T)
                        if st.dim < S.dim + T.dim - 1:
                            return S, T, st
        return None

    def pairs():
        if budget.exhaustive:
            pool = [X for k in range(1, max_dim + 1)
                    for X in subspaces_of_dim(E, k)]
            for A in pool:
                for B in pool:
                    yield A, B
        else:
            rng = random.Random(budget.seed)
            for _ in range(_sample_count(budget)):
                yield (_random_subspace(E, rng, rng.randint(1, max_dim)),
                       _random_subspace(E, rng, rng.randint(1, max_dim)))

    counterexamples: list[dict] = []
    satisfied = 0
    for A, B in pairs():
        if not run.mine():
            continue
        if run.spent():
            break
        run.checked += 1
        if not hypothesis(A, B):
            continue
        satisfied += 1
        hit = violation(A, B)
        if hit is None:
            continue
        S, T, st = hit
        # re-verify with the raw definition: span of all element products
        products = [E.mul(x, y) for x in subspace_elements(S)
                    for y in subspace_elements(T)]
        assert span(E, products) == st
        counterexamples.append({
            "field": fmt_field(E),
            "A": fmt_subspace(A), "B": fmt_subspace(B),
            "S": fmt_subspace(S), "T": fmt_subspace(T),
            "dim_S": S.dim, "dim_T": T.dim, "dim_ST": st.dim,
        })
    return ScanReport(run.checked, tuple(counterexamples), run.exhausted,
                      base | {"hypothesis_satisfied": satisfied})


def conjecture_5_2_scan(E: FieldExtension, n: int,
                        budget: SearchBudget | None = None) -> ScanReport:
    """Every dim-n subspace A should be matched to every Chowla subspace B
    of the same dimension.  Reports every verified unmatched pair."""
    budget = budget or SearchBudget()
    run = _Run(budget)
    if not 1 <= n <= E.m:
        raise ValueError(f"n must lie in [1, {E.m}]")
    base = run.params(field=fmt_field(E), n=n, orbit_reduction="none")
    if n == 1:
        # a single nonzero b with b not in K*A always exists for dim reasons,
        # and a Chowla line never contains 1
        return ScanReport(0, (), True, base | {"trivial": True})

    def pairs():
        if budget.exhaustive:
            chowla = [B for B in subspaces_of_dim(E, n)
                      if is_chowla_subspace(E, B)]
            for B in chowla:
                for A in subspaces_of_dim(E, n):
                    yield A, B
        else:
            rng = random.Random(budget.seed)
            produced = 0
            while produced < _sample_count(budget):
                B = _random_subspace(E, rng, n)
                if not is_chowla_subspace(E, B):
                    continue
                yield _random_subspace(E, rng, n), B
                produced += 1

    counterexamples: list[dict] = []
    for A, B in pairs():
        if not run.mine():
            continue
        if run.spent():
            break
        run.checked += 1
        verdict = space_matchable(E, A, B, exhaustive=True)
        if verdict.verdict != "unmatched":
            continue
        basis = verdict.failing_basis
        assert not matched_basis_exists_brute(E, basis, B,
                                              limit=BRUTE_REVERIFY_LIMIT)
        counterexamples.append({
            "field": fmt_field(E),
            "A": fmt_subspace(A), "B": fmt_subspace(B),
            "failing_basis": [fmt_element(E, a) for a in basis],
        })
    return ScanReport(run.checked, tuple(counterexamples), run.exhausted, base)


def _max_proper_divisor(m: int) -> int:
    return max(d for d in range(1, m) if m % d == 0)


def max_chowla_dimension(E: FieldExtension,
                         budget: SearchBudget | None = None) -> MaxChowlaResult:
    """Largest d with a d-dimensional Chowla subspace, scanning dimensions
    downward from m - 1 so the first hit is exact."""
    budget = budget or SearchBudget()
    if E.m <= 1:
        raise ValueError("the prime field has no proper subspaces to rank")
    if budget.max_instances == 0:
        raise ScaleExceededError("zero budget leaves no partial result")
    run = _Run(budget)
    lower = E.m - _max_proper_divisor(E.m)
    for d in range(E.m - 1, 0, -1):
        for B in subspaces_of_dim(E, d):
            if not run.mine():
                continue
            if run.spent():
                return MaxChowlaResult(0, None, False, lower)
            run.checked += 1
            if is_chowla_subspace(E, B):
                assert d >= lower
                return MaxChowlaResult(d, B, True, lower)
    # every nonzero space meets K* in dimension >= 1 only when it contains a
    # degree-1 line; dimension-1 spaces off K are always Chowla, so the scan
    # cannot fall through with an exhausted budget
    raise AssertionError("no Chowla subspace found in an exhaustive scan")


# unmatchable pair discovery


def _cyclic_units(n: int) -> list[int]:
    return [u for u in range(1, n) if gcd(u, n) == 1]


def _group_pair_canonical(group: Group, units, a, b) -> bool:
    if len(units) == 1:
        return True
    best = (a, b)
    n = group.factors[0]
    for u in units[1:]:
        ua = group.subset((((u * x[0]) % n),) for x in a)
        ub = group.subset((((u * x[0]) % n),) for x in b)
        if (ua, ub) < best:
            return False
    return True


def _group_counterexamples(domain: GroupDomain, run: _Run) -> list[dict]:
    out: list[dict] = []
    for group in domain.groups:
        cyclic = len(group.factors) == 1
        units = _cyclic_units(group.factors[0]) if cyclic else [1]
        elements = group.elements()
        neutral = group.neutral
        for k in range(1, min(domain.max_size, group.order) + 1):
            for a in combinations(elements, k):
                for b in combinations(elements, k):
                    if neutral in b:
                        continue  # trivially unmatched, excluded by convention
                    if not _group_pair_canonical(group, units, a, b):
                        continue
                    if not run.mine():
                        continue
                    if run.spent():
                        return out
                    run.checked += 1
                    if has_matching(group, a, b):
                        continue
                    assert not matched_by_permutation_scan(group, a, b)
                    violator = hall_violator(group, a, b)
                    witness = structure_witness(group, a, b)
                    out.append({
                        "group": fmt_group(group),
                        "A": fmt_group_subset(a),
                        "B": fmt_group_subset(b),
                        "violator_S": fmt_group_subset(violator.s_set),
                        "violator_V": fmt_group_subset(violator.v_set),
                        "witness_S": fmt_group_subset(witness.s_set),
                        "witness_W": fmt_group_subset(witness.w_set),
                        "witness_SW": fmt_group_subset(witness.product_sw),
                        "classification": witness.kind,
                    })
    return out


def _field_counterexamples(domain: FieldDomain, run: _Run) -> list[dict]:
    E, d = domain.field, domain.dim
    units = range(1, E.q)
    out: list[dict] = []
    spaces = list(subspaces_of_dim(E, d))
    for A in spaces:
        if min(scale_subspace(u, A).rows for u in units) != A.rows:
            continue
        for B in spaces:
            if B.contains(1):
                continue  # excluded: the criterion is stated for 1 outside B
            if not run.mine():
                continue
            if run.spent():
                return out
            run.checked += 1
            verdict = space_matchable(E, A, B, exhaustive=True)
            if verdict.verdict != "unmatched":
                continue
            basis = verdict.failing_basis
            assert not matched_basis_exists_brute(E, basis, B,
                                                  limit=BRUTE_REVERIFY_LIMIT)
            witness = subfield_atom_witness(E, A, B, failing_basis=basis)
            out.append({
                "field": fmt_field(E),
                "A": fmt_subspace(A),
                "B": fmt_subspace(B),
                "failing_basis": [fmt_element(E, a) for a in basis],
                "W_J": fmt_subspace(witness.w_j),
                "atom": fmt_subspace(witness.atom.subspace),
                "atom_degree": witness.atom.degree,
            })
    return out


def unmatchable_pair_search(domain: GroupDomain | FieldDomain,
                            budget: SearchBudget | None = None) -> ScanReport:
    """Exhaustive stream of verified unmatchable pairs with witnesses.

    Groups are scanned up to multiplication by units (cyclic only); fields
    up to unit scaling of A.  Pairs with the neutral element of the
    matching condition inside B are excluded as trivial."""
    budget = budget or SearchBudget()
    run = _Run(budget)
    if isinstance(domain, GroupDomain):
        params = run.params(
            domain=[fmt_group(g) for g in domain.groups],
            max_size=domain.max_size,
            orbit_reduction="cyclic unit scaling",
        )
        found = _group_counterexamples(domain, run)
    else:
        params = run.params(
            domain=fmt_field(domain.field), dim=domain.dim,
            orbit_reduction="unit scaling of A",
        )
        found = _field_counterexamples(domain, run)
    return ScanReport(run.checked, tuple(found), run.exhausted, params)


# sharding


def merge_reports(reports: list[ScanReport]) -> ScanReport:
    """Concatenate shard outputs, canonically sorted; exhausted only when
    every shard was."""
    if not reports:
        raise ValueError("nothing to merge")
    key = lambda ce: json.dumps(ce, sort_keys=True)
    merged = sorted((ce for r in reports for ce in r.counterexamples), key=key)
    params = dict(reports[0].parameters)
    params.pop("shard", None)
    params["shards"] = len(reports)
    return ScanReport(
        sum(r.instances_checked for r in reports),
        tuple(merged),
        all(r.exhausted for r in reports),
        params,
    )


def run_sharded(scan, budget: SearchBudget, shard_count: int) -> ScanReport:
    """Run `scan(budget_for_shard)` across shard_count shards concurrently
    and merge.  The stream split is by instance index residue, so the union
    of shards is exactly the unsharded stream."""
    budgets = [replace(budget, shard_count=shard_count, shard_index=i)
               for i in range(shard_count)]
    with ThreadPoolExecutor(max_workers=shard_count) as pool:
        reports = list(pool.map(scan, budgets))
    return merge_reports(reports)
