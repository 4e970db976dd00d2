"""Text forms for groups, fields, elements, subsets and subspaces.

One grammar shared by the CLI, the service and the report writer, so a
value printed by any command parses back to the same object:

  group      Z15  Z2xZ4
  element    5    (1,3)
  subset     {5,6,7}  {(0,1),(1,0)}
  field      GF(2^4)  GF(2^4|x^4+x+1)
  f-element  13  g^2+g+1  2*g^3  (bare integers are coefficient encodings,
             digits little-endian in the characteristic)
  subspace   <1,g^5>
  instance   Z15 A={5,6,7} B={1,2,3}
             GF(2^4) A=<g,g^2> B=<1,g^5>
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .errors import ParseError
from .fields import (
    FieldExtension,
    Subspace,
    fmt_element,
    fmt_field,
    fmt_subspace,
    make_extension,
    span,
)
from .groups import Element, Group, Subset

_GROUP_RE = re.compile(r"[Zz](\d+)$")
_FIELD_RE = re.compile(r"GF\((\d+)\^(\d+)(?:\|([^)]+))?\)$", re.IGNORECASE)
_RANGE_RE = re.compile(r"[Zz](\d+)\.\.[Zz](\d+)$")


def _fail(message: str, text: str, position: int | None = None) -> ParseError:
    where = "" if position is None else f" at position {position}"
    return ParseError(f"{message}{where}: {text!r}", position)


# groups


def parse_group(text: str) -> Group:
    parts = re.split(r"[xX]", text.strip())
    factors = []
    for part in parts:
        m = _GROUP_RE.match(part.strip())
        if not m:
            raise _fail("expected a cyclic factor like Z6", text)
        factors.append(int(m.group(1)))
    try:
        return Group(tuple(factors))
    except ValueError as exc:
        raise _fail(str(exc), text) from exc


def fmt_group(group: Group) -> str:
    return "x".join(f"Z{f}" for f in group.factors)


def parse_group_element(group: Group, text: str) -> Element:
    t = text.strip()
    if len(group.factors) == 1:
        if not re.fullmatch(r"-?\d+", t):
            raise _fail("expected an integer element", text)
        coords = (int(t),)
    else:
        if not (t.startswith("(") and t.endswith(")")):
            raise _fail(f"expected a {len(group.factors)}-tuple", text)
        body = t[1:-1].split(",")
        if len(body) != len(group.factors):
            raise _fail(f"expected {len(group.factors)} coordinates", text)
        try:
            coords = tuple(int(c.strip()) for c in body)
        except ValueError as exc:
            raise _fail("expected integer coordinates", text) from exc
    for c, f in zip(coords, group.factors):
        if not 0 <= c < f:
            raise _fail(f"element out of range, coordinate {c} not in [0, {f})",
                        text)
    return coords


def fmt_group_element(element: Element) -> str:
    if len(element) == 1:
        return str(element[0])
    return "(" + ",".join(str(c) for c in element) + ")"


def _split_top(body: str, opener: str, closer: str) -> list[str]:
    """Split on commas outside any opener/closer nesting."""
    out, depth, cur = [], 0, []
    for ch in body:
        if ch == opener:
            depth += 1
        elif ch == closer:
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_group_subset(group: Group, text: str) -> Subset:
    t = text.strip()
    if not (t.startswith("{") and t.endswith("}")):
        raise _fail("expected a subset like {1,2,3}", text)
    body = t[1:-1].strip()
    if not body:
        return ()
    items = _split_top(body, "(", ")")
    return group.subset(parse_group_element(group, item) for item in items)


def fmt_group_subset(subset: Subset) -> str:
    return "{" + ",".join(fmt_group_element(e) for e in subset) + "}"


# fields


def parse_polynomial(text: str, p: int, var: str = "x") -> tuple[int, ...]:
    """Little-endian coefficient tuple of a polynomial in `var` over GF(p)."""
    coeffs: dict[int, int] = {}
    for raw in text.replace("-", "+-").split("+"):
        term = raw.strip()
        if not term:
            continue
        m = re.fullmatch(r"(-?\d+)", term)
        if m:
            deg, c = 0, int(m.group(1))
        else:
            m = re.fullmatch(rf"(-?\d*)\*?{var}(?:\^(\d+))?", term)
            if not m:
                raise _fail(f"expected a polynomial in {var}", text)
            c = int(m.group(1)) if m.group(1) not in ("", "-") else (
                -1 if m.group(1) == "-" else 1)
            deg = int(m.group(2)) if m.group(2) else 1
        coeffs[deg] = (coeffs.get(deg, 0) + c) % p
    if not coeffs:
        raise _fail("empty polynomial", text)
    top = max(coeffs)
    return tuple(coeffs.get(d, 0) for d in range(top + 1))


def parse_field(text: str) -> FieldExtension:
    m = _FIELD_RE.match(text.strip())
    if not m:
        raise _fail("expected a field like GF(2^4) or GF(2^4|x^4+x+1)", text)
    p, deg = int(m.group(1)), int(m.group(2))
    modulus = None
    if m.group(3) is not None:
        if p < 2:
            raise _fail("characteristic must be a prime", text)
        modulus = parse_polynomial(m.group(3), p)
    try:
        return make_extension(p, deg, modulus)
    except ValueError as exc:
        raise _fail(str(exc), text) from exc


def parse_field_element(E: FieldExtension, text: str) -> int:
    """Bare integers are coefficient encodings; anything else is a sum of
    '*'-separated products of scalars, g, and powers g^k."""
    t = text.strip()
    if re.fullmatch(r"\d+", t):
        v = int(t)
        if not 0 <= v < E.q:
            raise _fail(f"element out of range, {v} not in [0, {E.q})", text)
        return v
    g = E.p  # the adjoined generator, encoding digits (0, 1, 0, ...)
    total = 0
    for raw in t.split("+"):
        term = raw.strip()
        if not term:
            raise _fail("empty term", text)
        value = 1
        for raw_f in term.split("*"):
            f = raw_f.strip()
            m = re.fullmatch(r"(\d+)", f)
            if m:
                value = E.mul(value, int(m.group(1)) % E.p)
                continue
            m = re.fullmatch(r"(\d*)g(?:\^(\d+))?", f)
            if not m:
                raise _fail("expected a term like 7, g, g^3 or 2*g^3", text)
            if E.m == 1:
                raise _fail("g is undefined in a degree-1 field", text)
            coeff = int(m.group(1)) % E.p if m.group(1) else 1
            k = int(m.group(2)) if m.group(2) else 1
            value = E.mul(value, E.mul(coeff, E.power(g, k)))
        total = E.add(total, value)
    return total


def parse_subspace(E: FieldExtension, text: str) -> Subspace:
    t = text.strip()
    if not (t.startswith("<") and t.endswith(">")):
        raise _fail("expected a subspace like <1,g^5>", text)
    body = t[1:-1].strip()
    if not body:
        return span(E, ())
    items = _split_top(body, "(", ")")
    return span(E, tuple(parse_field_element(E, item) for item in items))


# instances


@dataclass(frozen=True)
class Instance:
    """A parsed structure literal plus named set/subspace assignments."""

    kind: str  # "group" or "field"
    group: Group | None = None
    field: FieldExtension | None = None
    subsets: dict[str, Subset] = dc_field(default_factory=dict)
    subspaces: dict[str, Subspace] = dc_field(default_factory=dict)

    def subset(self, name: str) -> Subset:
        if name not in self.subsets:
            raise ParseError(f"instance is missing {name}={{...}}")
        return self.subsets[name]

    def subspace(self, name: str) -> Subspace:
        if name not in self.subspaces:
            raise ParseError(f"instance is missing {name}=<...>")
        return self.subspaces[name]


def parse_instance(text: str) -> Instance:
    tokens = text.split()
    if not tokens:
        raise _fail("empty instance", text)
    head = tokens[0]
    if head.upper().startswith("GF"):
        E = parse_field(head)
        spaces: dict[str, Subspace] = {}
        for tok in tokens[1:]:
            name, value = _assignment(tok, text)
            spaces[name] = parse_subspace(E, value)
        return Instance(kind="field", field=E, subspaces=spaces)
    group = parse_group(head)
    sets: dict[str, Subset] = {}
    for tok in tokens[1:]:
        name, value = _assignment(tok, text)
        sets[name] = parse_group_subset(group, value)
    return Instance(kind="group", group=group, subsets=sets)


def _assignment(token: str, text: str) -> tuple[str, str]:
    m = re.match(r"([A-Za-z_]\w*)=(.+)$", token)
    if not m:
        raise _fail("expected NAME={...} or NAME=<...>", text,
                    position=text.find(token))
    return m.group(1), m.group(2)


def fmt_instance(inst: Instance) -> str:
    if inst.kind == "group":
        parts = [fmt_group(inst.group)]
        parts += [f"{k}={fmt_group_subset(v)}"
                  for k, v in sorted(inst.subsets.items())]
    else:
        parts = [fmt_field(inst.field)]
        parts += [f"{k}={fmt_subspace(v)}"
                  for k, v in sorted(inst.subspaces.items())]
    return " ".join(parts)


def parse_group_range(text: str) -> tuple[Group, ...]:
    """Z4..Z10 expands to the cyclic groups Z4 through Z10 inclusive."""
    t = text.strip()
    m = _RANGE_RE.match(t)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi or lo < 2:
            raise _fail("empty group range", text)
        return tuple(Group((n,)) for n in range(lo, hi + 1))
    return (parse_group(t),)
