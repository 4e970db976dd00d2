"""Matched bases of subspaces in a field extension.

An ordered basis a_1..a_n of A is matched to an ordered basis b_1..b_n of B
when a_i^{-1}A ∩ B lies inside the span of the b_j with j != i, for every i
(then a_i b_i never lands in A).  Whether such a partner basis exists is
decided exactly by the subset criterion: for every nonempty J,
dim of the intersection of the a_i^{-1}A ∩ B over i in J is at most n - |J|.
Construction goes through annihilators in the dual of B: picking independent
functionals phi_i vanishing on a_i^{-1}A ∩ B and dualizing back.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
import random

from .errors import EmptyInputError, NotUnmatchableError, ScaleExceededError, SizeMismatchError
from .fields import (
    FieldExtension,
    IntermediateField,
    Subspace,
    atom_report,
    intermediate_fields,
    intersect,
    is_sidon_subspace,
    p_of_extension,
    scale_subspace,
    span,
    subspace_elements,
    subspace_sum,
)

MAX_CRITERION_DIM = 20
DEFAULT_BASIS_BUDGET = 10 ** 6


@dataclass(frozen=True)
class MatchedBasisCertificate:
    basis_a: tuple[int, ...]
    basis_b: tuple[int, ...]


@dataclass(frozen=True)
class LinearConditionEntry:
    part: int
    holds: bool
    evidence: str


@dataclass(frozen=True)
class SubfieldAtomWitness:
    w_j: Subspace
    atom: IntermediateField


@dataclass(frozen=True)
class SpaceMatchVerdict:
    verdict: str  # matched | matched_sampled | unmatched
    failing_basis: tuple[int, ...] | None
    bases_checked: int


def _checked_basis(E: FieldExtension, basis, B: Subspace) -> tuple[tuple[int, ...], Subspace]:
    basis = tuple(E.element(v) for v in basis)
    A = span(E, basis)
    if A.dim != len(basis):
        raise ValueError("basis vectors are linearly dependent")
    if len(basis) != B.dim:
        raise SizeMismatchError(f"dim A = {len(basis)} but dim B = {B.dim}")
    if len(basis) == 0:
        raise EmptyInputError("matching needs nonzero subspaces")
    if B.contains(1):
        raise ValueError("1 lies in B, so no basis of B can be matched")
    if len(basis) > MAX_CRITERION_DIM:
        raise ScaleExceededError(f"criterion scan beyond dimension {MAX_CRITERION_DIM}")
    return basis, A


def _intersection_spaces(E, basis, A, B):
    return [intersect(scale_subspace(E.inv(a), A), B) for a in basis]


def find_criterion_violation(E: FieldExtension, basis_a, B: Subspace):
    """First J (depth-first, indices ascending) with
    dim ∩_{i∈J} (a_i^{-1}A ∩ B) > n - |J|; None when the criterion holds."""
    basis, A = _checked_basis(E, basis_a, B)
    n = len(basis)
    spaces = _intersection_spaces(E, basis, A, B)
    # the full-index intersection must vanish; test it first, it fails fastest
    full = spaces[0]
    for s in spaces[1:]:
        full = intersect(full, s)
    if full.dim > 0:
        return tuple(range(n)), full

    def dfs(prefix: Subspace | None, start: int, picked: tuple[int, ...]):
        for i in range(start, n):
            cur = spaces[i] if prefix is None else intersect(prefix, spaces[i])
            if cur.dim > n - (len(picked) + 1):
                return picked + (i,), cur
            if cur.dim == 0:
                continue  # intersections only shrink; nothing deeper can violate
            hit = dfs(cur, i + 1, picked + (i,))
            if hit is not None:
                return hit
        return None

    return dfs(None, 0, ())


def basis_matched_criterion(E: FieldExtension, basis_a, B: Subspace) -> bool:
    return find_criterion_violation(E, basis_a, B) is None


# small dense linear algebra over GF(p) on coordinate tuples, used for the
# dual-basis construction

def _rref_t(rows, p):
    rows = [tuple(x % p for x in r) for r in rows]
    out = []
    pivots = []
    for r in rows:
        r = list(r)
        for pr, pc in zip(out, pivots):
            c = r[pc]
            if c:
                r = [(x - c * y) % p for x, y in zip(r, pr)]
        nz = next((j for j, x in enumerate(r) if x), None)
        if nz is None:
            continue
        inv = pow(r[nz], -1, p)
        r = [(inv * x) % p for x in r]
        for k, (pr, pc) in enumerate(zip(out, pivots)):
            c = pr[nz]
            if c:
                out[k] = [(x - c * y) % p for x, y in zip(pr, r)]
        out.append(r)
        pivots.append(nz)
    order = sorted(range(len(out)), key=lambda k: pivots[k])
    return [tuple(out[k]) for k in order], [pivots[k] for k in order]


def _nullspace_t(rows, width, p):
    red, pivots = _rref_t(rows, p)
    free = [j for j in range(width) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * width
        v[f] = 1
        for r, pc in zip(red, pivots):
            v[pc] = (-r[f]) % p
        basis.append(tuple(v))
    return basis


def _matinv_t(rows, p):
    n = len(rows)
    aug = [tuple(rows[i]) + tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    red, pivots = _rref_t(aug, p)
    assert pivots == list(range(n)), "matrix is singular"
    return [r[n:] for r in red]


def _coords_in(B: Subspace, v: int):
    """Coordinates of v in terms of B's echelon rows (pivot digits)."""
    E = B.field
    digs = E.digits(v)
    return tuple(digs[E.pivot(r)] for r in B.rows)


def find_matched_basis(E: FieldExtension, basis_a, B: Subspace):
    """A matched partner basis of B, or None when the criterion fails.

    Works in the dual: phi_i must kill a_i^{-1}A ∩ B and stay independent;
    backtracking over annihilator elements always succeeds when the subset
    criterion holds, and the certificate is re-verified before returning.
    """
    basis, A = _checked_basis(E, basis_a, B)
    if find_criterion_violation(E, basis, B) is not None:
        return None
    n, p = len(basis), E.p
    spaces = _intersection_spaces(E, basis, A, B)
    annihilators = []
    for D in spaces:
        coords = [_coords_in(B, r) for r in D.rows]
        annihilators.append(_nullspace_t(coords, n, p))

    def candidates(i):
        # nonzero combinations of the annihilator basis, deterministic order
        basis_vecs = annihilators[i]
        for k in range(1, p ** len(basis_vecs)):
            digits = []
            kk = k
            for _ in basis_vecs:
                digits.append(kk % p)
                kk //= p
            yield tuple(sum(d * b[j] for d, b in zip(digits, basis_vecs)) % p
                        for j in range(n))

    chosen: list[tuple[int, ...]] = []

    def extend(i):
        if i == n:
            return True
        for phi in candidates(i):
            test, _ = _rref_t(chosen + [phi], p)
            if len(test) == i + 1:
                chosen.append(phi)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    ok = extend(0)
    assert ok, "criterion held but dual construction failed"
    inv = _matinv_t(chosen, p)
    basis_b = []
    for j in range(n):
        v = 0
        for i in range(n):
            v = E.add(v, E.mul(inv[i][j], B.rows[i]))
        basis_b.append(v)
    cert = MatchedBasisCertificate(basis, tuple(basis_b))
    assert verify_matched_certificate(E, A, B, cert), "constructed basis failed Eq-check"
    return cert


def verify_matched_certificate(E: FieldExtension, A: Subspace, B: Subspace,
                               cert: MatchedBasisCertificate) -> bool:
    ba, bb = cert.basis_a, cert.basis_b
    if len(ba) != len(bb):
        return False
    if span(E, ba) != A or span(E, bb) != B:
        return False
    n = len(ba)
    for i in range(n):
        others = span(E, [bb[j] for j in range(n) if j != i])
        D = intersect(scale_subspace(E.inv(ba[i]), A), B)
        if not D <= others:
            return False
        if A.contains(E.mul(ba[i], bb[i])):
            return False
    return True


def matched_basis_exists_brute(E: FieldExtension, basis_a, B: Subspace,
                               limit: int = 100_000) -> bool:
    """Oracle: search every ordered basis of B for a matched partner of
    basis_a, testing the defining certificate predicate directly."""
    basis, A = _checked_basis(E, basis_a, B)
    n = len(basis)
    elems = [v for v in subspace_elements(B) if v != 0]
    count = 1
    for i in range(n):
        count *= len(elems) - i
    if count > limit:
        raise ScaleExceededError(f"{count} ordered tuples exceeds limit {limit}")
    spaces = _intersection_spaces(E, basis, A, B)

    # a_i.b_i not in A prunes per position; D_i inside the span of the other
    # b_j needs the whole tuple, so it is tested at the leaves
    def extend(chosen: list[int]) -> bool:
        i = len(chosen)
        if i == n:
            for j in range(n):
                others = span(E, [chosen[k] for k in range(n) if k != j])
                if not spaces[j] <= others:
                    return False
            return True
        for b in elems:
            if b in chosen:
                continue
            if A.contains(E.mul(basis[i], b)):
                continue
            cur = span(E, chosen + [b])
            if cur.dim != i + 1:
                continue
            chosen.append(b)
            if extend(chosen):
                return True
            chosen.pop()
        return False

    return extend([])


def _line_reps(A: Subspace):
    """One canonical representative per K*-line of A: pivot digit 1."""
    E = A.field
    return [v for v in subspace_elements(A)
            if v != 0 and E.digits(v)[E.pivot(v)] == 1]


def space_matchable(E: FieldExtension, A: Subspace, B: Subspace,
                    exhaustive: bool = True, samples: int = 1000, seed: int = 0,
                    budget: int = DEFAULT_BASIS_BUDGET) -> SpaceMatchVerdict:
    """Whether every ordered basis of A is matched to some basis of B.

    The criterion is invariant under scaling basis vectors by K* and under
    reordering, so exhaustive mode enumerates sets of independent lines.
    Sampled mode draws seeded random bases and returns the weaker
    matched_sampled verdict when none fails.
    """
    if A.dim != B.dim:
        raise SizeMismatchError(f"dim A = {A.dim} but dim B = {B.dim}")
    if A.dim == 0:
        raise EmptyInputError("matching needs nonzero subspaces")
    if B.contains(1):
        raise ValueError("1 lies in B, so no basis of B can be matched")
    n = A.dim
    checked = 0
    if exhaustive:
        reps = _line_reps(A)
        total = sum(1 for _ in combinations(reps, n))
        if total > budget:
            raise ScaleExceededError(
                f"{total} line sets exceed the exhaustive budget {budget}")
        for cand in combinations(reps, n):
            if span(E, cand).dim != n:
                continue
            checked += 1
            if find_criterion_violation(E, cand, B) is not None:
                return SpaceMatchVerdict("unmatched", cand, checked)
        return SpaceMatchVerdict("matched", None, checked)
    rng = random.Random(seed)
    elems = [v for v in subspace_elements(A) if v != 0]
    for _ in range(samples):
        cand: list[int] = []
        guard = span(E, ())
        while len(cand) < n:
            v = rng.choice(elems)
            if not guard.contains(v):
                cand.append(v)
                guard = span(E, cand)
        checked += 1
        if find_criterion_violation(E, tuple(cand), B) is not None:
            return SpaceMatchVerdict("unmatched", tuple(cand), checked)
    return SpaceMatchVerdict("matched_sampled", None, checked)


def check_linear_condition(E: FieldExtension, A: Subspace, B: Subspace,
                           part: int) -> LinearConditionEntry:
    """Sufficient conditions for every basis of A being matched to B."""
    if A.dim != B.dim:
        raise SizeMismatchError(f"dim A = {A.dim} but dim B = {B.dim}")
    if A.dim == 0:
        raise EmptyInputError("conditions need nonzero subspaces")
    if part not in (1, 2, 3):
        raise ValueError(f"part must be 1..3, got {part}")
    if B.contains(1):
        return LinearConditionEntry(part, False, "1 lies in B")
    n = A.dim
    if part == 1:
        for f in intermediate_fields(E):
            if f.degree == E.m:
                continue
            hit = intersect(B, f.subspace)
            if hit.dim > 0:
                return LinearConditionEntry(
                    1, False,
                    f"B meets the degree-{f.degree} intermediate field in "
                    f"dimension {hit.dim}")
        return LinearConditionEntry(
            1, True, "B intersects every proper intermediate field trivially")
    if part == 2:
        if E.m == 1:
            raise ValueError("trivial extension has no intermediate fields")
        p_ext = p_of_extension(E)
        if n != p_ext:
            return LinearConditionEntry(
                2, False, f"dim A = {n} differs from the minimal subfield degree {p_ext}")
        if E.m % n == 0:
            target = next(f for f in intermediate_fields(E) if f.degree == n)
            # A = l.M for some l iff a^{-1}A is that field for any one nonzero a
            quotient = scale_subspace(E.inv(A.rows[0]), A)
            if quotient == target.subspace:
                return LinearConditionEntry(
                    2, False,
                    f"A is a scalar translate of the degree-{n} intermediate field")
        return LinearConditionEntry(
            2, True,
            f"dim A equals the minimal subfield degree {p_ext} and A is not a "
            f"scalar translate of an intermediate field")
    if is_sidon_subspace(E, A):
        return LinearConditionEntry(3, True, "A is a Sidon subspace")
    return LinearConditionEntry(3, False, "A is not a Sidon subspace")


def check_all_linear_conditions(E, A, B):
    return [check_linear_condition(E, A, B, part) for part in (1, 2, 3)]


def subfield_atom_witness(E: FieldExtension, A: Subspace, B: Subspace,
                          failing_basis=None) -> SubfieldAtomWitness:
    """For an unmatched pair: W_J = K ⊕ V_J built from a violating J of a
    failing basis; its 1-atom is a nontrivial intermediate field."""
    if failing_basis is None:
        verdict = space_matchable(E, A, B, exhaustive=True)
        if verdict.verdict != "unmatched":
            raise NotUnmatchableError("pair is matched; no subfield atom witness exists")
        failing_basis = verdict.failing_basis
    hit = find_criterion_violation(E, failing_basis, B)
    assert hit is not None, "alleged failing basis satisfies the criterion"
    _, v_j = hit
    w_j = subspace_sum(span(E, [1]), v_j)
    assert w_j.dim == v_j.dim + 1, "K does not split off V_J, so 1 was in B"
    rep = atom_report(E, w_j)
    atom = rep.atom
    assert rep.psi_nonempty and atom is not None
    assert atom.contains(1) and atom.dim > 1, "atom is not a nontrivial unital subspace"
    match = next(f for f in intermediate_fields(E) if f.degree == atom.dim)
    assert match.subspace == atom, "atom is not the intermediate field of its dimension"
    return SubfieldAtomWitness(w_j, match)
