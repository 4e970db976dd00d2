import pytest

from matchkit import (
    Group,
    ParseError,
    make_extension,
    parse_field,
    parse_field_element,
    parse_group,
    parse_group_element,
    parse_group_range,
    parse_group_subset,
    parse_instance,
    parse_subspace,
    span,
)
from matchkit.literals import (
    fmt_group,
    fmt_group_element,
    fmt_group_subset,
    fmt_instance,
    parse_polynomial,
)


# --------------------------------------------------------------- groups

def test_parse_group():
    assert parse_group("Z15") == Group((15,))
    assert parse_group("Z2xZ4") == Group((2, 4))
    assert parse_group(" z9 ") == Group((9,))
    for bad in ("Z", "Z0", "15", "Z2x", "ZxZ2"):
        with pytest.raises(ParseError):
            parse_group(bad)


def test_fmt_group_round_trip():
    for g in (Group((15,)), Group((2, 4)), Group((3, 3, 3))):
        assert parse_group(fmt_group(g)) == g


def test_parse_group_element():
    z15 = Group((15,))
    z24 = Group((2, 4))
    assert parse_group_element(z15, "5") == (5,)
    assert parse_group_element(z24, "(1,3)") == (1, 3)
    with pytest.raises(ParseError):
        parse_group_element(z15, "15")  # strict range, no wrapping
    with pytest.raises(ParseError):
        parse_group_element(z24, "3")
    with pytest.raises(ParseError):
        parse_group_element(z24, "(1,4)")
    with pytest.raises(ParseError):
        parse_group_element(z24, "(1)")


def test_parse_group_subset():
    z15 = Group((15,))
    assert parse_group_subset(z15, "{5,6,7}") == ((5,), (6,), (7,))
    assert parse_group_subset(z15, "{ 7, 5, 5 }") == ((5,), (7,))
    z24 = Group((2, 4))
    assert parse_group_subset(z24, "{(0,1),(1,3)}") == ((0, 1), (1, 3))
    with pytest.raises(ParseError):
        parse_group_subset(z15, "5,6,7")
    with pytest.raises(ParseError):
        parse_group_subset(z15, "{5,6,99}")


def test_fmt_subset_round_trip():
    z15 = Group((15,))
    s = parse_group_subset(z15, "{1,2,14}")
    assert parse_group_subset(z15, fmt_group_subset(s)) == s
    assert fmt_group_element((5,)) == "5"
    assert fmt_group_element((1, 3)) == "(1,3)"


def test_parse_group_range():
    got = parse_group_range("Z4..Z10")
    assert [g.order for g in got] == [4, 5, 6, 7, 8, 9, 10]
    assert parse_group_range("Z15") == (Group((15,)),)
    with pytest.raises(ParseError):
        parse_group_range("Z10..Z4")


# --------------------------------------------------------------- fields

def test_parse_polynomial():
    assert parse_polynomial("x^4+x+1", 2) == (1, 1, 0, 0, 1)
    assert parse_polynomial("x^2+1", 3) == (1, 0, 1)
    assert parse_polynomial("x^2+2x+2", 3) == (2, 2, 1)
    with pytest.raises(ParseError):
        parse_polynomial("x^4+y+1", 2)


def test_parse_field():
    E = parse_field("GF(2^4|x^4+x+1)")
    assert (E.p, E.m, E.modulus) == (2, 4, (1, 1, 0, 0, 1))
    assert parse_field("GF(2^4)") is make_extension(2, 4)
    assert parse_field("GF(3^2)").q == 9
    with pytest.raises(ParseError):
        parse_field("GF(4^2)")  # composite characteristic
    with pytest.raises(ParseError):
        parse_field("GF(2^4|x^4+x^2+1)")  # reducible modulus
    with pytest.raises(ParseError):
        parse_field("GF(2)")


def test_parse_field_element():
    E = parse_field("GF(2^4)")
    assert parse_field_element(E, "g") == 2
    assert parse_field_element(E, "g^2") == 4
    assert parse_field_element(E, "g^3+g+1") == 11
    assert parse_field_element(E, "11") == 11  # coefficient encoding
    assert parse_field_element(E, "0") == 0
    assert parse_field_element(E, "g^5") == E.power(2, 5)
    # products appear in generator lists: scalars and powers of g
    assert parse_field_element(E, "g*1") == 2
    assert parse_field_element(E, "g*g^5") == E.power(2, 6)
    with pytest.raises(ParseError):
        parse_field_element(E, "16")  # out of range
    with pytest.raises(ParseError):
        parse_field_element(E, "(g+1)*g")  # no parenthesized products

    E3 = parse_field("GF(3^2)")
    assert parse_field_element(E3, "2g") == 6
    assert parse_field_element(E3, "g+2") == 5


def test_parse_subspace():
    E = parse_field("GF(2^4)")
    s = parse_subspace(E, "<1,g^5>")
    assert s.rows == span(E, [1, E.power(2, 5)]).rows
    assert parse_subspace(E, "<0>").dim == 0
    with pytest.raises(ParseError):
        parse_subspace(E, "{1,g}")


# -------------------------------------------------------------- instances

def test_parse_instance_group():
    inst = parse_instance("Z15 A={5,6,7} B={1,2,3}")
    assert inst.kind == "group"
    assert inst.group == Group((15,))
    assert inst.subset("A") == ((5,), (6,), (7,))
    assert inst.subset("B") == ((1,), (2,), (3,))


def test_parse_instance_field():
    inst = parse_instance("GF(2^4|x^4+x+1) A=<1,g^5> B=<g*1,g*g^5>")
    assert inst.kind == "field"
    E = inst.field
    assert E.modulus == (1, 1, 0, 0, 1)
    a = inst.subspace("A")
    b = inst.subspace("B")
    assert a.rows == span(E, [1, E.power(2, 5)]).rows
    assert b.rows == span(E, [2, E.power(2, 6)]).rows


def test_parse_instance_errors():
    with pytest.raises(ParseError):
        parse_instance("Z15 A={5,6,99}")
    with pytest.raises(ParseError):
        parse_instance("")
    with pytest.raises(ParseError):
        parse_instance("Z15 A=5,6")
    inst = parse_instance("Z15 A={1}")
    with pytest.raises(ParseError):
        inst.subset("B")


def test_parse_error_carries_position():
    try:
        parse_instance("Z15 A={5,6,99}")
    except ParseError as exc:
        assert "99" in str(exc) or "position" in str(exc)
    else:
        raise AssertionError("expected a parse error")


def test_fmt_instance_round_trip():
    for text in (
        "Z15 A={5,6,7} B={1,2,3}",
        "Z2xZ4 A={(0,1),(1,2)} B={(1,1),(0,3)}",
        "GF(2^4|x^4+x+1) A=<1,g^5> B=<g,g^2>",
    ):
        inst = parse_instance(text)
        again = parse_instance(fmt_instance(inst))
        assert fmt_instance(again) == fmt_instance(inst)
        assert again.kind == inst.kind
