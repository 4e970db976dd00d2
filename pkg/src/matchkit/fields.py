"""Finite field extensions GF(p) inside GF(p^m) with exact arithmetic in a
polynomial basis.

Field elements are integers in [0, p^m): the base-p digits of the integer
are the coefficients of the residue polynomial, lowest degree first.  That
makes every element simultaneously a vector over GF(p), so the subspace
machinery (canonical reduced row echelon bases, intersections, product
spans) runs directly on element encodings.  Multiplication goes through
discrete-log tables built from a primitive element, addition is XOR in
characteristic 2 and a precomputed table otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product as iproduct

from .errors import EmptyInputError, ScaleExceededError

MAX_FIELD_ORDER = 4096
MAX_ODD_CHAR_ORDER = 1024  # addition table is quadratic in the field order
ATOM_BUDGET = 10 ** 6


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


# polynomial helpers on little-endian coefficient tuples, used only while
# bootstrapping a field (modulus checks, primitive element search)

def _poly_trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(tuple(out))


def _poly_mod(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            f = (c * inv_lead) % p
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - f * mod[j]) % p
    return _poly_trim(tuple(a))


def is_irreducible(coeffs, p) -> bool:
    """Trial division by every monic polynomial of degree up to deg/2."""
    coeffs = _poly_trim(tuple(c % p for c in coeffs))
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if coeffs[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for tail in iproduct(range(p), repeat=d):
            div = tail + (1,)
            if not _poly_mod(coeffs, div, p):
                return False
    return True


def default_modulus(p, m):
    """First monic irreducible of degree m in lexicographic order of the
    low coefficient vector; fixed per (p, m) so reports are reproducible."""
    for k in range(p ** m):
        tail = tuple((k // p ** i) % p for i in range(m))
        cand = tail + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found, which cannot happen")


class FieldExtension:
    """GF(p^m) over K = GF(p), elements encoded as ints in [0, p^m)."""

    def __init__(self, p: int, m: int, modulus=None):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("degree must be at least 1")
        q = p ** m
        if q > MAX_FIELD_ORDER or (p > 2 and q > MAX_ODD_CHAR_ORDER):
            raise ScaleExceededError(f"field order {q} beyond supported limits")
        if modulus is None:
            modulus = default_modulus(p, m)
        else:
            modulus = _poly_trim(tuple(c % p for c in modulus))
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {m}")
            if not is_irreducible(modulus, p):
                raise ValueError("modulus is reducible")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._pw = [p ** i for i in range(m + 1)]
        self._build_tables()

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        # discrete logs from a primitive element
        if q == 2:
            gamma = 1
        else:
            gamma = None
            for cand in range(p if m > 1 else 2, q):
                if self._mult_order(cand) == q - 1:
                    gamma = cand
                    break
            assert gamma is not None, "multiplicative group of a finite field is cyclic"
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._poly_mul_enc(exp[i - 1], gamma)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp, self._log = exp, log
        if p > 2:
            dig = [self.digits(v) for v in range(q)]
            enc = self.encode
            self._add_table = [
                [enc((x + y) % p for x, y in zip(dig[a], dig[b])) for b in range(q)]
                for a in range(q)
            ]
        self._frob = [self.power(v, p) for v in range(q)]
        self._pivot = [-1] + [next(i for i in range(m) if self.digits(v)[i]) for v in range(1, q)]

    def _poly_mul_enc(self, a: int, b: int) -> int:
        prod = _poly_mul(self.digits(a), self.digits(b), self.p)
        return self.encode(_poly_mod(prod, self.modulus, self.p))

    def _mult_order(self, a: int) -> int:
        acc, n = a, 1
        while acc != 1:
            acc = self._poly_mul_enc(acc, a)
            n += 1
            if n > self.q:
                raise AssertionError("runaway order computation")
        return n

    # element plumbing

    def element(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.q:
            raise ValueError(f"element {v} out of range for field of order {self.q}")
        return v

    def digits(self, v: int):
        p = self.p
        return tuple((v // self._pw[i]) % p for i in range(self.m))

    def encode(self, digits) -> int:
        return sum((d % self.p) * self._pw[i] for i, d in enumerate(digits))

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self._add_table[a][b]

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.mul(self.p - 1, a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverting zero field element")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self._frob[a]

    def pivot(self, v: int) -> int:
        """Index of the lowest nonzero coefficient; -1 for zero."""
        return self._pivot[v]

    def __eq__(self, other):
        return (isinstance(other, FieldExtension)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"FieldExtension(p={self.p}, m={self.m}, modulus={self.modulus})"


_EXTENSIONS: dict = {}


def make_extension(p: int, m: int, modulus=None) -> FieldExtension:
    key = (p, m, None if modulus is None else _poly_trim(tuple(c % p for c in modulus)))
    if key not in _EXTENSIONS:
        _EXTENSIONS[key] = FieldExtension(p, m, modulus)
    return _EXTENSIONS[key]


@dataclass(frozen=True)
class Subspace:
    """K-subspace in canonical reduced row echelon form: rows nonzero,
    pivot positions strictly increasing, pivot coefficient 1, pivots
    eliminated from all other rows."""
    field: FieldExtension
    rows: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: int) -> bool:
        return _reduce(self.field, self.rows, v) == 0

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)


def _reduce(E: FieldExtension, rows, v: int) -> int:
    """Eliminate every row pivot from v."""
    for r in rows:
        piv = E.pivot(r)
        c = E.digits(v)[piv]
        if c:
            v = E.sub(v, E.mul(c, r))
    return v


def span(E: FieldExtension, generators) -> Subspace:
    rows: list[int] = []
    for g in generators:
        v = _reduce(E, rows, E.element(g))
        if v == 0:
            continue
        piv = E.pivot(v)
        v = E.mul(E.inv(E.digits(v)[piv]), v)
        # keep earlier rows reduced against the new pivot
        for i, r in enumerate(rows):
            c = E.digits(r)[piv]
            if c:
                rows[i] = E.sub(r, E.mul(c, v))
        rows.append(v)
        rows.sort(key=E.pivot)
    return Subspace(E, tuple(rows))


def zero_subspace(E: FieldExtension) -> Subspace:
    return Subspace(E, ())


def full_subspace(E: FieldExtension) -> Subspace:
    return span(E, E._pw[:E.m])


def subspace_sum(S: Subspace, T: Subspace) -> Subspace:
    return span(S.field, S.rows + T.rows)


def scale_subspace(x: int, S: Subspace) -> Subspace:
    E = S.field
    if E.element(x) == 0:
        raise EmptyInputError("scaling a subspace by zero collapses it")
    return span(E, (E.mul(x, r) for r in S.rows))


def intersect(S: Subspace, T: Subspace) -> Subspace:
    """Zassenhaus: reduce rows (u|u) for u in S and (w|0) for w in T; rows
    whose left half vanished carry a basis of the intersection on the right."""
    E = S.field
    m = E.m

    def piv2(row):
        x, y = row
        return E.pivot(x) if x else m + E.pivot(y)

    rows: list[tuple[int, int]] = []
    for cand in [(u, u) for u in S.rows] + [(w, 0) for w in T.rows]:
        x, y = cand
        for rx, ry in rows:
            pp = piv2((rx, ry))
            c = E.digits(x)[pp] if pp < m else E.digits(y)[pp - m]
            if c:
                x, y = E.sub(x, E.mul(c, rx)), E.sub(y, E.mul(c, ry))
        if x == 0 and y == 0:
            continue
        pp = piv2((x, y))
        lead = E.digits(x)[pp] if pp < m else E.digits(y)[pp - m]
        li = E.inv(lead)
        x, y = E.mul(li, x), E.mul(li, y)
        rows.append((x, y))
        rows.sort(key=piv2)
    return span(E, (y for x, y in rows if x == 0))


@lru_cache(maxsize=65536)
def subspace_elements(S: Subspace) -> tuple[int, ...]:
    """All p^dim elements, sorted."""
    E = S.field
    elems = [0]
    for r in S.rows:
        step = [E.mul(c, r) for c in range(1, E.p)]
        elems = elems + [E.add(e, s) for s in step for e in elems]
    return tuple(sorted(elems))


def span_product(E: FieldExtension, A: Subspace, B: Subspace) -> Subspace:
    """<AB>: the span of all pairwise products; bilinearity lets the basis
    rows stand in for the full sets."""
    if A.dim == 0 or B.dim == 0:
        raise EmptyInputError("span_product needs nonzero subspaces")
    return span(E, (E.mul(a, b) for a in A.rows for b in B.rows))


@dataclass(frozen=True)
class IntermediateField:
    degree: int
    subspace: Subspace
    multiplicatively_closed: bool

    @property
    def field(self) -> FieldExtension:
        return self.subspace.field


def _closure_flag(S: Subspace) -> bool:
    E = S.field
    return all(S.contains(E.mul(a, b)) for a in S.rows for b in S.rows)


def element_degree(E: FieldExtension, a: int) -> int:
    """[K(a):K] = size of the Frobenius orbit; zero counts as degree 1."""
    a = E.element(a)
    v, d = E.frobenius(a), 1
    while v != a:
        v = E.frobenius(v)
        d += 1
    return d


def intermediate_fields(E: FieldExtension) -> list[IntermediateField]:
    """One per divisor d of m: the fixed space of x -> x^(p^d)."""
    out = []
    for d in range(1, E.m + 1):
        if E.m % d:
            continue
        fixed = [v for v in range(E.q) if _frob_iter(E, v, d) == v]
        sub = span(E, fixed)
        assert sub.dim == d, "fixed space of a power of Frobenius has wrong size"
        out.append(IntermediateField(d, sub, True))
    return out


def _frob_iter(E: FieldExtension, v: int, d: int) -> int:
    for _ in range(d):
        v = E.frobenius(v)
    return v


def stabilizer_subfield(E: FieldExtension, S: Subspace) -> IntermediateField:
    """M = {x : xS inside S}; always an intermediate field."""
    if S.dim == 0:
        raise EmptyInputError("stabilizer of the zero subspace is not useful here")
    fixed = [x for x in range(E.q) if all(S.contains(E.mul(x, r)) for r in S.rows)]
    sub = span(E, fixed)
    for f in intermediate_fields(E):
        if f.degree == sub.dim:
            assert f.subspace == sub, "stabilizer disagrees with the Frobenius-fixed field"
            return f
    raise AssertionError("stabilizer dimension does not divide the extension degree")


def p_of_extension(E: FieldExtension) -> int:
    """Smallest degree over K of a proper intermediate extension."""
    if E.m == 1:
        raise ValueError("trivial extension has no intermediate fields")
    for d in range(2, E.m + 1):
        if E.m % d == 0:
            return d
    raise AssertionError("unreachable for m > 1")


def is_sidon_subspace(E: FieldExtension, A: Subspace) -> bool:
    """dim(A ∩ xA) <= 1 for every x outside K, one representative per
    K*-line (scaling x by K* rescales xA)."""
    if A.dim == 0:
        raise EmptyInputError("is_sidon_subspace needs a nonzero subspace")
    seen = bytearray(E.q)
    for x in range(1, E.q):
        if seen[x]:
            continue
        for c in range(1, E.p):
            seen[E.mul(c, x)] = 1
        if x < E.p:
            continue  # the K-line itself is exempt
        if intersect(A, scale_subspace(x, A)).dim > 1:
            return False
    return True


def is_chowla_subspace(E: FieldExtension, A: Subspace) -> bool:
    """Every nonzero element generates an extension of degree > dim A."""
    if A.dim == 0:
        raise EmptyInputError("is_chowla_subspace needs a nonzero subspace")
    bound = A.dim + 1
    return all(element_degree(E, a) >= bound
               for a in subspace_elements(A) if a != 0)


def is_primitive_subspace(E: FieldExtension, A: Subspace) -> bool:
    """K(a) = L for every nonzero a in A."""
    if A.dim == 0:
        raise EmptyInputError("is_primitive_subspace needs a nonzero subspace")
    return all(element_degree(E, a) == E.m
               for a in subspace_elements(A) if a != 0)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def count_subspaces(E: FieldExtension) -> int:
    return sum(gaussian_binomial(E.m, k, E.p) for k in range(E.m + 1))


def _rref_patterns(m: int, k: int, p: int):
    """Digit matrices of every canonical RREF basis of a dim-k subspace of
    K^m, enumerated by pivot pattern then free-entry fill; deterministic."""
    for pivots in combinations(range(m), k):
        pivset = set(pivots)
        free = [(i, j) for i in range(k) for j in range(pivots[i] + 1, m)
                if j not in pivset]
        for fill in iproduct(range(p), repeat=len(free)):
            rows = []
            for i in range(k):
                digs = [0] * m
                digs[pivots[i]] = 1
                for (ri, rj), val in zip(free, fill):
                    if ri == i:
                        digs[rj] = val
                rows.append(tuple(digs))
            yield rows


def subspaces_of_dim(E: FieldExtension, k: int):
    """All dim-k subspaces as canonical RREF matrices, deterministic order."""
    if k == 0:
        yield zero_subspace(E)
        return
    for rows in _rref_patterns(E.m, k, E.p):
        yield Subspace(E, tuple(E.encode(r) for r in rows))


def subspaces_within(S: Subspace, k: int):
    """All dim-k subspaces of S, via coordinate patterns mapped through its
    basis rows; re-canonicalized in the ambient space."""
    E = S.field
    if k == 0:
        yield zero_subspace(E)
        return
    for rows in _rref_patterns(S.dim, k, E.p):
        gens = []
        for digs in rows:
            v = 0
            for c, r in zip(digs, S.rows):
                if c:
                    v = E.add(v, E.mul(c, r))
            gens.append(v)
        yield span(E, gens)


def all_subspaces(E: FieldExtension, min_dim: int = 0, max_dim: int | None = None):
    top = E.m if max_dim is None else min(max_dim, E.m)
    for k in range(min_dim, top + 1):
        yield from subspaces_of_dim(E, k)


@dataclass(frozen=True)
class AtomReport:
    kappa: int | None
    fragment: Subspace | None
    atom: Subspace | None
    psi_nonempty: bool


def atom_report(E: FieldExtension, A: Subspace) -> AtomReport:
    """Exhaustive scan of psi = {X != 0 : <XA> != L} for kappa(A) =
    min dim<XA> - dim X, a first fragment attaining it, and a 1-atom.

    Among minimum-dimension fragments the atom is the one containing 1 when
    any does, else the lexicographically least matrix; empty psi is reported
    as undefined kappa rather than a sentinel value.
    """
    if A.dim == 0:
        raise EmptyInputError("atom_report needs a nonzero subspace")
    total = count_subspaces(E)
    if total > ATOM_BUDGET:
        raise ScaleExceededError(
            f"{total} subspaces exceed the enumeration budget {ATOM_BUDGET}")
    kappa = None
    fragment = None
    atom = None
    for X in all_subspaces(E, min_dim=1):
        xa = span_product(E, X, A)
        if xa.dim == E.m:
            continue
        d = xa.dim - X.dim
        if kappa is None or d < kappa:
            kappa, fragment, atom = d, X, X
        elif d == kappa and _atom_preferred(X, atom):
            atom = X
    return AtomReport(kappa, fragment, atom, kappa is not None)


def _atom_preferred(X: Subspace, cur: Subspace) -> bool:
    if X.dim != cur.dim:
        return X.dim < cur.dim
    x_has_one, c_has_one = X.contains(1), cur.contains(1)
    if x_has_one != c_has_one:
        return x_has_one
    return X.rows < cur.rows


# printing, shared by reports and the literal grammar

def fmt_element(E: FieldExtension, v: int) -> str:
    v = E.element(v)
    if v == 0:
        return "0"
    terms = []
    for i in reversed(range(E.m)):
        c = E.digits(v)[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            g = "g" if i == 1 else f"g^{i}"
            terms.append(g if c == 1 else f"{c}{g}")
    return "+".join(terms)


def fmt_subspace(S: Subspace) -> str:
    return "<" + ",".join(fmt_element(S.field, r) for r in S.rows) + ">"


def fmt_modulus(E: FieldExtension) -> str:
    terms = []
    for i in reversed(range(E.m + 1)):
        c = E.modulus[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            x = "x" if i == 1 else f"x^{i}"
            terms.append(x if c == 1 else f"{c}{x}")
    return "+".join(terms)


def fmt_field(E: FieldExtension) -> str:
    return f"GF({E.p}^{E.m}|{fmt_modulus(E)})"
