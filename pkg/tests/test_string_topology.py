import random

import pytest

from loopalgebra import (
    CoproductResult,
    ElementSyntaxError,
    HomologyElement,
    IntegralityError,
    SurfaceGroup,
    basis,
    component_homology,
    coproduct,
    delta,
    goldman_bracket,
    parse_element,
    product,
)
import loopalgebra.string_topology as st_mod

from oracles import random_reduced_word

G = SurfaceGroup(2)
cls = G.conjugacy_class
E = HomologyElement.unit(2)
e = G.canonical_class(())


def surf(text, genus=2):
    H = SurfaceGroup(genus)
    return HomologyElement.surface_class(genus, H.abelianize(H.parse(text)))


def pt(text):
    return HomologyElement.point(cls(text))


def tl(text):
    return HomologyElement.tilde(cls(text))


SAMPLE = ["a1", "a1^2", "b1^2", "a1 b1", "a1 a2 b1", "A2 b1^3", "a1 b1 A1 B1"]


def sample_basis():
    return basis([e] + [cls(t) for t in SAMPLE], 2)


# -- ranks --------------------------------------------------------------------------


def test_component_homology():
    assert component_homology(e) == (1, 4, 1)
    assert component_homology(SurfaceGroup(3).canonical_class(())) == (1, 6, 1)
    for t in ("a1", "a1^2", "a1 b1 A1 B1"):
        assert component_homology(cls(t)) == (1, 1, 0)


# -- delta --------------------------------------------------------------------------


def test_delta_examples():
    assert delta(pt("a1^2")) == tl("a1^2").scaled(2)
    assert not delta(HomologyElement.point(e))
    assert not delta(tl("a1 b1"))
    assert not delta(E)
    assert not delta(surf("a1"))
    assert delta(pt("a1 b1")) == tl("a1 b1")
    assert delta(pt("b1^3")) == tl("b1^3").scaled(3)


def test_delta_squares_to_zero():
    for x in sample_basis():
        assert not delta(delta(x))


# -- product --------------------------------------------------------------------------


def test_unit_laws():
    for x in sample_basis():
        assert product(E, x) == x
        assert product(x, E) == x


def test_intersection_table():
    names = ["a1", "a2", "b1", "b2"]
    for x in names:
        for y in names:
            i, j = int(x[1]), int(y[1])
            want = 1 if (x[0], y[0]) == ("a", "b") and i == j else -1 if (x[0], y[0]) == ("b", "a") and i == j else 0
            assert product(surf(x), surf(y)) == HomologyElement.point(e).scaled(want)


def test_surface_class_times_loop_examples():
    assert product(surf("b1"), tl("a1^2")) == -pt("a1^2")
    assert product(surf("a1"), tl("a1 b1")) == pt("a1 b1")
    assert product(tl("a1^2"), surf("b1")) == pt("a1^2")


def test_surface_class_times_loop_is_integral():
    rng = random.Random(31)
    for _ in range(60):
        w = random_reduced_word(G, rng.randint(1, 4), rng)
        if G.canonical_class(w).is_identity:
            continue
        h = G.canonical_class(w + w) if rng.random() < 0.5 else G.canonical_class(w)
        for name in ("a1", "a2", "b1", "b2"):
            got = product(surf(name), HomologyElement.tilde(h))
            root, _ = G.primitive_root(h.word)
            want = G.intersection_pairing(G.abelianize(G.parse(name)), G.abelianize(root))
            assert got == HomologyElement.point(h).scaled(want)


def test_tilde_products_are_brackets_over_levels():
    assert product(tl("a1"), tl("b1")) == pt("a1 b1")
    # [a1^2, b1^2] = 4 [a1^2 b1^2], divided by 2 * 2
    assert product(tl("a1^2"), tl("b1^2")) == pt("a1^2 b1^2")


def test_delta_products_are_brackets():
    classes = [cls(t) for t in SAMPLE]
    for c1 in classes:
        for c2 in classes:
            lhs = product(delta(HomologyElement.point(c1)), delta(HomologyElement.point(c2)))
            assert lhs == HomologyElement.from_bracket(goldman_bracket(c1, c2))


def test_graded_antisymmetry():
    assert product(surf("a1"), surf("b1")) == -product(surf("b1"), surf("a1"))
    xs = [tl(t) for t in SAMPLE] + [surf(t) for t in ("a1", "b2")]
    for x in xs:
        for y in xs:
            assert product(x, y) == -product(y, x)


def test_negative_degrees_vanish():
    zero = HomologyElement.zero(2)
    for x in (pt("a1"), HomologyElement.point(e)):
        for y in (pt("b1"), tl("b1"), surf("a2")):
            assert product(x, y) == zero
            assert product(y, x) == zero


def test_unit_associativity():
    xs = sample_basis()
    for x in xs[::2]:
        for y in xs[1::2]:
            assert product(product(E, x), y) == product(E, product(x, y))


def test_bilinearity():
    x = tl("a1").scaled(2) + surf("b1")
    y = tl("b1") - E
    want = product(tl("a1"), tl("b1")).scaled(2) + product(surf("b1"), tl("b1")) - x
    assert product(x, y) == want


def test_integrality_error(monkeypatch):
    # a bracket whose coefficient is not divisible by the levels is a bug signal
    fake = goldman_bracket(cls("a1"), cls("b1"))
    monkeypatch.setattr(st_mod, "goldman_bracket", lambda c1, c2, budget=None: fake)
    with pytest.raises(IntegralityError):
        product(tl("a1^2"), tl("b1"))


def test_genus_mismatch():
    with pytest.raises(ValueError):
        product(E, HomologyElement.unit(3))


def test_tilde_of_identity_rejected():
    with pytest.raises(ValueError):
        HomologyElement(2, deg1_tilde={e: 1})


# -- coproduct ------------------------------------------------------------------------


@pytest.mark.parametrize("genus, coeff", [(2, -2), (3, -4), (5, -8)])
def test_coproduct_of_unit(genus, coeff):
    ee = SurfaceGroup(genus).canonical_class(())
    assert coproduct(HomologyElement.unit(genus)) == CoproductResult(genus, {(ee, ee): coeff})


def test_coproduct_vanishes_elsewhere():
    for x in sample_basis()[1:]:
        assert not coproduct(x)
    assert str(coproduct(E)) == "-2*([], [])"


# -- text and JSON --------------------------------------------------------------------


def test_parse_element():
    assert parse_element("E", 2) == E
    assert parse_element("unit", 2) == E
    assert parse_element("0", 2) == HomologyElement.zero(2)
    assert parse_element("~[a1^2]", 2) == tl("a1^2")
    assert parse_element("[b1 a1]", 2) == pt("a1 b1")
    assert parse_element("<A1 b2>", 2) == surf("A1 b2")
    assert parse_element("2*[a1] - ~[b1] + E", 2) == pt("a1").scaled(2) - tl("b1") + E
    assert parse_element("[]", 2) == HomologyElement.point(e)


def test_parse_element_errors():
    with pytest.raises(ElementSyntaxError) as exc:
        parse_element("[a1 x2]", 2)
    assert exc.value.offset == 4
    with pytest.raises(ElementSyntaxError) as exc:
        parse_element("[a1] [b1]", 2)
    assert exc.value.offset == 5
    with pytest.raises(ElementSyntaxError):
        parse_element("~[]", 2)
    with pytest.raises(ElementSyntaxError):
        parse_element("[a1", 2)
    with pytest.raises(ElementSyntaxError):
        parse_element("F", 2)


def test_text_round_trip():
    for x in sample_basis() + [pt("a1").scaled(-3) + tl("b1^2") + surf("a2 a2") + E.scaled(4)]:
        assert parse_element(str(x), 2) == x


def test_json_round_trip():
    x = pt("a1").scaled(-3) + tl("b1^2") + surf("a2 b1") + E.scaled(4) + HomologyElement.point(e)
    text = x.to_json()
    assert HomologyElement.from_json(text, 2) == x
    assert HomologyElement.from_json(text, 2).to_json() == text
    assert parse_element(text, 2) == x
    c = coproduct(E.scaled(3))
    assert CoproductResult.from_json(c.to_json(), 2).to_json() == c.to_json()
    assert E.to_json() == '{"deg0":[],"deg1_e":[0,0,0,0],"deg1_tilde":[],"deg2":1}'
