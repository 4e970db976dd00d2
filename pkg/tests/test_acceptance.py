"""Release acceptance gate.

One test per release criterion, in order, each timed against its stated
wall-clock budget on a stock container.  These tests restate results that
the unit suites cover piecewise; here they run at full advertised scale.
"""

import json
import math
import random
import time
from itertools import combinations, permutations

from click.testing import CliRunner

import oracles
from matchkit import (
    FieldDomain,
    Group,
    GroupDomain,
    SearchBudget,
    atom_report,
    basis_matched_criterion,
    check_condition,
    conjecture_5_1_scan,
    conjecture_5_2_scan,
    coset_cover_count,
    element_order,
    find_matched_basis,
    fmt_subspace,
    generated_subgroup,
    has_matching,
    intermediate_fields,
    is_coset_of,
    is_sidon_subset,
    is_sidon_subspace,
    lemma_violation_scan,
    make_extension,
    matched_by_permutation_scan,
    matching_property_scan,
    max_chowla_dimension,
    multiplicity,
    p_of_group,
    product_set,
    scale_subspace,
    space_matchable,
    span,
    span_product,
    stabilizer,
    stabilizer_subfield,
    structure_witness,
    subgroups,
    subspace_elements,
    subspaces_of_dim,
    unmatchable_pair_search,
    verify_matched_certificate,
)
from matchkit.cli import main as cli_main

EXH = SearchBudget(exhaustive=True)

Z9 = Group((9,))
Z15 = Group((15,))
Z35 = Group((35,))
Z128 = Group((128,))
TWELVE = Z128.subset((0, 1, 2, 4, 8, 16, 32, 64, 15, 60, 101, 87))


def els(group, xs):
    return group.subset(xs)


# ---------------------------------------------------------------- 1


def test_worked_examples_reproduce():
    t0 = time.monotonic()

    a36, b36 = els(Z15, (5, 6, 7)), els(Z15, (1, 2, 3))
    matched_36 = has_matching(Z15, a36, b36)
    part2 = check_condition(Z15, a36, b36, 2)
    h = generated_subgroup(Z15, [(5,)])   # order 3
    k = generated_subgroup(Z15, [(3,)])   # order 5
    covers = (coset_cover_count(Z15, a36, h), coset_cover_count(Z15, a36, k),
              coset_cover_count(Z15, b36, h), coset_cover_count(Z15, b36, k))

    a37, b37 = els(Z15, (1, 2, 3, 9, 14)), els(Z15, (4, 5, 6, 10, 13))
    matched_37 = has_matching(Z15, a37, b37)
    part3 = check_condition(Z15, a37, b37, 3)

    sidon_128 = is_sidon_subset(Z128, TWELVE)
    part5 = check_condition(Z128, TWELVE, els(Z128, range(1, 13)), 5)

    a39 = els(Z35, (1, 8, 15, 22, 30))
    part4 = check_condition(Z35, a39, els(Z35, (1, 2, 3, 4, 6)), 4)

    a9, b9 = els(Z9, (0, 4, 8)), els(Z9, (3, 6, 8))
    matched_9 = has_matching(Z9, a9, b9)
    part7 = check_condition(Z9, a9, b9, 7)
    proper_subs = [s for s in subgroups(Z9, include_trivial=False,
                                        include_full=False)]

    assert time.monotonic() - t0 < 1.0

    assert matched_36
    assert part2.holds and "l=2" in part2.evidence
    assert covers == (3, 3, 3, 3)

    assert matched_37 and len(a37) == 5
    assert part3.holds and "l=3" in part3.evidence

    assert p_of_group(Z35) == 5
    assert part4.holds

    assert matched_9 and part7.holds
    assert [s.elements for s in proper_subs] == [((0,), (3,), (6,))]

    # In Z_128 the pair sums collide: 0+2 = 1+1 = 2 and 0+16 = 1+15 = 16,
    # under the repeated-pair and distinct-pair conventions respectively,
    # so the 12-element set is not Sidon there (it is Sidon in (Z_2)^7
    # with distinct pairs) and the part-5 premise fails with it.  The two
    # assertions below record the stated expectation and fail.
    assert sidon_128
    assert part5.holds


# ---------------------------------------------------------------- 2


def test_z35_example_matched_to_every_partner():
    t0 = time.monotonic()
    a = els(Z35, (1, 8, 15, 22, 30))
    nonzero = [e for e in Z35.elements() if e != Z35.neutral]
    checked = 0
    for b in combinations(nonzero, 5):
        assert has_matching(Z35, a, b)
        checked += 1
    assert checked == math.comb(34, 5) == 278_256
    assert time.monotonic() - t0 < 120


# ---------------------------------------------------------------- 3


def test_twelve_set_matched_to_random_partners():
    t0 = time.monotonic()
    nonzero = [e for e in Z128.elements() if e != Z128.neutral]
    rng = random.Random(2026)
    for _ in range(1000):
        assert has_matching(Z128, TWELVE, rng.sample(nonzero, 12))
    assert time.monotonic() - t0 < 5


# ---------------------------------------------------------------- 4


def test_matching_property_scans_small_cyclic():
    t0 = time.monotonic()
    for n in (5, 7):
        g = Group((n,))
        outcome = matching_property_scan(g, n - 1)
        assert outcome.holds, n

    for n in (4, 6, 8, 9):
        g = Group((n,))
        elements = g.elements()
        nonzero = [e for e in elements if e != g.neutral]
        bad = []
        for size in range(1, n):
            for a in combinations(elements, size):
                for b in combinations(nonzero, size):
                    if not has_matching(g, a, b):
                        bad.append((a, b))
        assert bad, n
        for a, b in bad:
            w = structure_witness(g, a, b, min_length=2)
            sw = product_set(g, w.s_set, w.w_set)
            assert len(sw) < len(w.s_set) + len(w.w_set) - 1
            assert min(len(w.s_set), len(w.w_set)) > 1
            assert w.kind in ("progression", "quasi_periodic")
    assert time.monotonic() - t0 < 60


# ---------------------------------------------------------------- 5


def _random_group(rng, max_order):
    if rng.random() < 0.7:
        return Group((rng.randint(2, max_order),))
    a = rng.randint(2, 7)
    return Group((a, rng.randint(2, max_order // a)))


def test_decider_oracle_triple_agreement():
    rng = random.Random(50_001)
    for _ in range(10_000):
        g = _random_group(rng, 60)
        elements = g.elements()
        size = rng.randint(1, min(8, g.order - 1))
        a = rng.sample(elements, size)
        b = rng.sample([e for e in elements if e != g.neutral], size)
        fast = has_matching(g, a, b)
        brute = matched_by_permutation_scan(g, a, b)
        lemma = lemma_violation_scan(g, a, b) is None
        assert fast == brute == lemma


# ---------------------------------------------------------------- 6


def _group_pool(max_order=24):
    factors = {(n,) for n in range(2, max_order + 1)}
    for a in range(2, 7):
        for b in range(a, max_order // a + 1):
            factors.add((a, b))
    pool = []
    for f in sorted(factors):
        g = Group(f)
        pool.append((g, subgroups(g)))
    return pool

_POOL = _group_pool()


def _rand_subset(rng, g, max_size):
    return g.subset(rng.sample(g.elements(),
                               rng.randint(1, min(max_size, g.order))))


def _coset_union(rng, g, subs, max_cosets=2):
    hs = [h for h in subs if 1 < len(h.elements) < g.order]
    if not hs:
        return None
    h = rng.choice(hs)
    out = set()
    for _ in range(rng.randint(1, max_cosets)):
        x = rng.choice(g.elements())
        out.update(g.add(x, e) for e in h.elements)
    return g.subset(out)


def _suite_sumset_lower_bound(rng):
    for _ in range(10_000):
        g, _subs = rng.choice(_POOL)
        a = _rand_subset(rng, g, 6)
        b = _rand_subset(rng, g, 6)
        ab = product_set(g, a, b)
        st = stabilizer(g, ab)
        assert len(ab) >= len(a) + len(b) - len(st.elements)


def _suite_deficient_sumsets_periodic(rng):
    hits = 0
    for _ in range(10_000):
        g, subs = rng.choice(_POOL)
        a = _coset_union(rng, g, subs) or _rand_subset(rng, g, 6)
        if rng.random() < 0.5:
            b = _coset_union(rng, g, subs) or _rand_subset(rng, g, 6)
        else:
            b = _rand_subset(rng, g, 6)
        ab = product_set(g, a, b)
        if len(ab) < len(a) + len(b) - 1:
            hits += 1
            st = stabilizer(g, ab)
            assert len(st.elements) > 1
            assert product_set(g, st.elements, ab) == ab
    assert hits > 1000


def _suite_multiplicity_floor(rng):
    deep = 0
    for _ in range(10_000):
        g, subs = rng.choice(_POOL)
        if rng.random() < 0.5:
            a = _coset_union(rng, g, subs) or _rand_subset(rng, g, 6)
            b = _coset_union(rng, g, subs) or _rand_subset(rng, g, 6)
        else:
            a = _rand_subset(rng, g, 6)
            b = _rand_subset(rng, g, 6)
        ab = product_set(g, a, b)
        k = len(a) + len(b) - len(ab)
        if k >= 2:
            deep += 1
        if k >= 1:
            for x in ab:
                assert multiplicity(g, a, b, x) >= k
    assert deep > 1000


def _suite_sidon_sumsets_large(rng):
    hits = 0
    for _ in range(10_000):
        g, _subs = rng.choice(_POOL)
        a = _rand_subset(rng, g, 4)
        b = _rand_subset(rng, g, 4)
        ab = product_set(g, a, b)
        if is_sidon_subset(g, ab):
            hits += 1
            assert len(ab) >= len(a) + len(b) - 1
    assert hits > 1000


def _suite_local_bound_gives_subset_bounds(rng):
    cyclic = [(g, s) for g, s in _POOL if len(g.factors) == 1]
    ran = 0
    for _ in range(10_000):
        g, _subs = rng.choice(cyclic)
        n = g.order
        a = sorted(x[0] for x in _rand_subset(rng, g, 6))
        b = sorted(x[0] for x in _rand_subset(rng, g, 6))
        # premise over every subgroup of order > 1: cosets of the order-
        # (n//d) subgroup are the residues mod d, so bucket counts give
        # the largest coset intersections directly
        ok = True
        for d in range(1, n):
            if n % d:
                continue
            ca = [0] * d
            cb = [0] * d
            for x in a:
                ca[x % d] += 1
            for x in b:
                cb[x % d] += 1
            if max(ca) + max(cb) > n // d + 1:
                ok = False
                break
        if not ok:
            continue
        ran += 1
        for i in range(1, len(a) + 1):
            for s in combinations(a, i):
                for j in range(1, len(b) + 1):
                    for t in combinations(b, j):
                        st = {(x + y) % n for x in s for y in t}
                        assert len(st) >= i + j - 1
    assert ran > 1000


def _suite_fixed_sumset_forces_subgroup(rng):
    for _ in range(10_000):
        g, subs = rng.choice(_POOL)
        h = rng.choice(subs)
        x = rng.choice(g.elements())
        a = g.subset(g.add(x, e) for e in h.elements)
        b = g.subset(h.elements)
        assert product_set(g, a, b) == a and len(a) <= len(b)
        gen = generated_subgroup(g, b)
        assert gen.elements == b
        assert is_coset_of(g, a, gen)


def _suite_subgroup_avoiding_sets_expand(rng):
    ran = 0
    for _ in range(10_000):
        g, subs = rng.choice(_POOL)
        elements = g.elements()
        a = g.subset([g.neutral]
                     + rng.sample(elements, rng.randint(1, min(5, g.order - 1))))
        proper = [h for h in subs if len(h.elements) < g.order]
        aset = set(a)
        if any(len(aset & set(h.elements)) > 1 for h in proper):
            continue
        ran += 1
        for _ in range(2):
            s = _rand_subset(rng, g, 6)
            assert len(product_set(g, a, s)) >= min(g.order,
                                                    len(a) + len(s) - 1)
    assert ran > 1000


def _suite_union_growth_by_min_order(rng):
    ran = 0
    for _ in range(10_000):
        g, _subs = rng.choice(_POOL)
        a = _rand_subset(rng, g, 6)
        b = _rand_subset(rng, g, 5)
        u = g.subset(set(a) | set(product_set(g, a, b)))
        full = product_set(g, a, generated_subgroup(g, b).elements)
        if u == full:
            continue
        ran += 1
        v = min(element_order(g, x) for x in b)
        assert len(u) >= len(a) + min(len(b), v)
    assert ran > 1000


def test_sumset_invariant_suites():
    t0 = time.monotonic()
    suites = (
        _suite_sumset_lower_bound,
        _suite_deficient_sumsets_periodic,
        _suite_multiplicity_floor,
        _suite_sidon_sumsets_large,
        _suite_local_bound_gives_subset_bounds,
        _suite_fixed_sumset_forces_subgroup,
        _suite_subgroup_avoiding_sets_expand,
        _suite_union_growth_by_min_order,
    )
    for i, suite in enumerate(suites):
        suite(random.Random(60_000 + i))
    assert time.monotonic() - t0 < 120


# ---------------------------------------------------------------- 7


def test_prime_degree_fields_matched_and_gf16_exception():
    t0 = time.monotonic()
    for m in (3, 5):
        E = make_extension(2, m)
        for d in (1, 2):
            pool_a = list(subspaces_of_dim(E, d))
            pool_b = [s for s in pool_a if not s.contains(1)]
            for a_space in pool_a:
                for b_space in pool_b:
                    v = space_matchable(E, a_space, b_space, exhaustive=True)
                    assert v.verdict == "matched"

    E16 = make_extension(2, 4)
    report = unmatchable_pair_search(FieldDomain(E16, 2), EXH)
    assert report.exhausted and len(report.counterexamples) >= 1
    gf4 = next(f for f in intermediate_fields(E16) if f.degree == 2)
    gf4_elems = subspace_elements(gf4.subspace)
    for ce in report.counterexamples:
        assert ce["atom"] == fmt_subspace(gf4.subspace)
        assert ce["atom_degree"] == 2
    assert gf4.multiplicatively_closed
    assert all(E16.mul(x, y) in gf4_elems
               for x in gf4_elems for y in gf4_elems)
    assert time.monotonic() - t0 < 300


# ---------------------------------------------------------------- 8


def test_dimension_criterion_equals_brute_force():
    for m in (3, 4):
        E = make_extension(2, m)
        spaces = list(subspaces_of_dim(E, 2))
        valid_b = [s for s in spaces if not s.contains(1)]
        for a_space in spaces:
            a_elems = set(subspace_elements(a_space))
            reps = sorted({min(x for x in subspace_elements(span(E, (v,))) if x)
                           for v in a_elems if v})
            for basis in permutations(reps, 2):
                for b_space in valid_b:
                    crit = basis_matched_criterion(E, basis, b_space)
                    brute = oracles.brute_basis_match_exists(
                        E, basis, a_elems, set(subspace_elements(b_space)))
                    assert crit == brute
                    if not crit:
                        continue
                    cert = find_matched_basis(E, basis, b_space)
                    assert cert is not None
                    assert verify_matched_certificate(E, a_space, b_space, cert)
                    assert oracles.eq11_holds(E, cert.basis_a, cert.basis_b,
                                              a_elems)
                    assert all(E.mul(x, y) not in a_elems
                               for x, y in zip(cert.basis_a, cert.basis_b))


# ---------------------------------------------------------------- 9


def _random_subspace(E, rng, dmax):
    d = rng.randint(1, dmax)
    cur = span(E, ())
    while cur.dim < d:
        nxt = span(E, cur.rows + (rng.randrange(1, E.q),))
        if nxt.dim > cur.dim:
            cur = nxt
    return cur


def test_subspace_product_invariant_suites():
    for seed, (p, m) in ((70_002, (2, 6)), (70_003, (3, 4))):
        E = make_extension(p, m)
        mids = [f for f in intermediate_fields(E) if 1 < f.degree < m]
        rng = random.Random(seed)
        atom_cache: dict = {}
        deficient = atom_cases = 0
        for i in range(5000):
            if i % 3 == 0:
                f = rng.choice(mids)
                a = scale_subspace(rng.randrange(1, E.q), f.subspace)
                b = scale_subspace(rng.randrange(1, E.q), f.subspace)
            else:
                a = _random_subspace(E, rng, m - 1)
                b = _random_subspace(E, rng, m - 1)
            ab = span_product(E, a, b)
            st = stabilizer_subfield(E, ab)
            assert ab.dim >= a.dim + b.dim - st.degree
            if ab.dim < a.dim + b.dim - 1:
                deficient += 1
                assert st.degree > 1
                assert span_product(E, st.subspace, ab) == ab
                if a.contains(1) and a.dim + b.dim - 1 < m:
                    atom_cases += 1
                    if a.rows not in atom_cache:
                        atom_cache[a.rows] = atom_report(E, a)
                    rep = atom_cache[a.rows]
                    atom_elems = subspace_elements(rep.atom)
                    assert rep.atom.dim > 1
                    assert rep.atom.contains(1)
                    assert all(E.mul(x, y) in atom_elems
                               for x in atom_elems for y in atom_elems)
        assert deficient > 500
        assert atom_cases > 100


# ---------------------------------------------------------------- 10


def test_conjecture_scans_complete_and_deterministic():
    t0 = time.monotonic()
    E16 = make_extension(2, 4)
    E32 = make_extension(2, 5)
    E64 = make_extension(2, 6)

    first = conjecture_5_1_scan(E16, 2, EXH)
    assert first.exhausted and first.counterexamples == ()
    assert first == conjecture_5_1_scan(E16, 2, EXH)

    for E, pairs in ((E16, 560), (E32, 21_700)):
        rep = conjecture_5_2_scan(E, 2, EXH)
        assert rep.exhausted and rep.counterexamples == ()
        assert rep.instances_checked == pairs
        assert rep == conjecture_5_2_scan(E, 2, EXH)

    for E, bound in ((E16, 2), (E64, 3), (E32, 4)):
        res = max_chowla_dimension(E, EXH)
        assert res.value >= bound
        assert res.exhausted
        assert res == max_chowla_dimension(E, EXH)
    assert time.monotonic() - t0 < 600


# ---------------------------------------------------------------- 11


def test_cli_reports_byte_identical_across_runs():
    invocations = [
        ["match", "Z15 A={5,6,7} B={1,2,3}"],
        ["certify", "Z9 A={0,4,8} B={3,6,8}"],
        ["conditions", "Z15 A={5,6,7} B={1,2,3}"],
        ["witness", "Z4 A={0,2} B={1,2}"],
        ["scan-property", "Z6", "--max-size", "3"],
        ["linear-match", "GF(2^4) A=<g*1,g*g^5> B=<g,g^2>"],
        ["linear-conditions", "GF(2^4) A=<1,g> B=<g,g^2>"],
        ["atom", "GF(2^4) A=<1,g^5>"],
        ["conjecture1", "GF(2^4)", "--dims", "2", "--sampled",
         "--budget", "150", "--seed", "9"],
        ["conjecture2", "GF(2^4)", "--n", "2", "--sampled",
         "--budget", "80", "--seed", "9"],
        ["chowla-max", "GF(2^5)", "--seed", "3"],
        ["search-unmatchable", "Z4..Z6", "--max-size", "3", "--seed", "4"],
    ]
    runner = CliRunner()
    for args in invocations:
        full = args + ["--json"]
        one = runner.invoke(cli_main, full)
        two = runner.invoke(cli_main, full)
        assert one.exit_code == two.exit_code, args
        assert one.exit_code in (0, 1), (args, one.output)
        assert one.output == two.output, args
        json.loads(one.output)
