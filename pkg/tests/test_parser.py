import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plability import fixtures
from plability.model import MessageSignature, Status
from plability.parser import Severity, parse_products, serialize_products, validate

from generators import random_product, random_product_set


def codes(diags):
    return [d.code for d in diags]


def test_minimal_input():
    products, diags = parse_products("product p\ncomponent X")
    assert diags == []
    (p,) = products
    assert p.product_id == "p"
    assert p.component_names == {"X"}
    assert not p.edges


def test_fig2_structure(fig2):
    assert fig2.component_names == set("KLMPQR")
    assert len(fig2.edges) == 6
    assert fig2.start_set == {"Q"}
    optional = {(e.source, e.target) for e in fig2.edges if e.status is Status.OPTIONAL}
    assert optional == {("K", "P"), ("P", "Q")}
    (lm,) = [e for e in fig2.edges if e.source == "L"]
    assert lm.signature == MessageSignature()
    (kr,) = [e for e in fig2.edges if e.target == "R"]
    assert kr.signature == MessageSignature.of(a="NAT", b="NAT")


def test_unknown_edge_endpoints():
    products, diags = parse_products("product p\nedge A -> B {}")
    assert products == []
    unknown = [d for d in diags if d.code == "E_UNKNOWN_COMPONENT"]
    assert len(unknown) == 2
    assert "'A'" in unknown[0].message and "'B'" in unknown[1].message
    assert all(d.line == 2 for d in unknown)


@pytest.mark.parametrize("text,code,line", [
    ("component X", "E_NO_PRODUCT", 1),
    ("product p\ncomponent X\ncomponent X", "E_DUP_COMPONENT", 3),
    ("product p\ncomponent X\ncomponent Y\nedge X -> Y {}\nedge X -> Y {} optional", "E_DUP_EDGE", 5),
    ("product p\ncomponent X\nedge X -> X {}", "E_SELF_LOOP", 3),
    ("product p\ncomponent X\nedge X => Y {}", "E_SYNTAX", 3),
    ("product p\ncomponent X\nedge X -> Y", "E_SYNTAX", 3),
    ("product p\ncomponent X accepts {a NAT}", "E_SYNTAX", 2),
    ("product p\ncomponent X accepts {a: NAT, a: INT}", "E_SYNTAX", 2),
    ("product p\ncomponent X\nedge X -> Y {} sometimes", "E_SYNTAX", 3),
    ("product p\nwidget X", "E_SYNTAX", 2),
    ("product p\ncomponent X\nstart Y", "E_UNKNOWN_COMPONENT", 3),
    ("product p\ncomponent X\nclassify required Y", "E_UNKNOWN_COMPONENT", 3),
    ("product p\ncomponent X\nclassify required X\nclassify optional X", "E_CLASSIFY_CONFLICT", 4),
    ("product p", "E_EMPTY_PRODUCT", 1),
    ("product p\ncomponent X\nproduct p\ncomponent Y", "E_DUP_PRODUCT", 3),
])
def test_errors(text, code, line):
    products, diags = parse_products(text)
    errors = [d for d in diags if d.is_error]
    assert code in codes(errors)
    assert any(d.line == line for d in errors if d.code == code)


def test_error_drops_only_the_broken_product():
    products, diags = parse_products("product a\ncomponent X\nproduct b\ncomponent Y\nstart Z")
    assert [p.product_id for p in products] == ["a"]


def test_comments_blank_lines_crlf_and_any_order():
    text = ("# header\r\n\r\nproduct p   # trailing\r\n"
            "edge X -> Y {v: REAL}\r\nstart X\r\ncomponent Y\r\ncomponent X\r\n")
    (p,), diags = parse_products(text)
    assert diags == []
    assert p.component_names == {"X", "Y"}
    (edge,) = p.edges
    assert edge.status is Status.REQUIRED


def test_undeclared_accept_strictness():
    text = "product p\ncomponent X\ncomponent Y accepts {a: NAT}\nedge X -> Y {b: NAT}\nstart X"
    products, diags = parse_products(text)
    assert len(products) == 1
    assert [(d.code, d.severity, d.line) for d in diags] == [
        ("W_UNDECLARED_ACCEPT", Severity.WARNING, 4)]
    products, diags = parse_products(text, strict=True)
    assert products == []
    assert codes(diags) == ["E_UNDECLARED_ACCEPT"]
    # an empty accepts set declares nothing, so anything goes
    products, diags = parse_products("product p\ncomponent X\ncomponent Y\nedge X -> Y {b: NAT}",
                                     strict=True)
    assert products and not diags


def test_serialize_empty():
    assert serialize_products([]) == ""


def test_serialize_is_canonical(fig2):
    text = serialize_products([fig2])
    assert text.splitlines()[:3] == ["product fig2", "component K", "component L"]
    assert "edge L -> M {} required" in text
    assert "edge K -> R {a: NAT, b: NAT} required" in text
    assert text.rstrip().endswith("start Q")
    assert serialize_products(parse_products(text)[0]) == text


def test_round_trip_fixtures(fig2, door_ecu):
    assert parse_products(serialize_products([fig2]))[0] == [fig2]
    again, diags = parse_products(serialize_products(door_ecu))
    assert again == door_ecu


def test_round_trip_fifty_generated_products():
    rng = random.Random(7)
    products = [random_product(rng, f"p{i}", wide=True) for i in range(50)]
    again, diags = parse_products(serialize_products(products))
    assert not [d for d in diags if d.is_error]
    assert again == products


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_round_trip_property(rng):
    products = random_product_set(rng)
    text = serialize_products(products)
    again, diags = parse_products(text)
    assert again == products
    # determinism: same input, same output
    assert parse_products(text) == (again, diags)
    lines = text.count("\n")
    assert all(1 <= d.line <= lines for d in diags)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="product component edge start classify required optional "
                        "XYZ{}:,->#\n\r NAT", max_size=120))
def test_arbitrary_input_never_crashes(text):
    products, diags = parse_products(text)
    n_lines = max(1, len(text.splitlines()))
    assert all(1 <= d.line <= n_lines for d in diags)


# -- validate ----------------------------------------------------------------

def test_validate_fig2_clean(fig2):
    assert validate(fig2) == []


def test_validate_isolated():
    (p,), _ = parse_products("product p\ncomponent X\ncomponent Y\ncomponent Z\nedge X -> Y {}\nstart X")
    diags = validate(p)
    assert codes(diags) == ["W_ISOLATED"]
    assert diags[0].line == 4 and "Z" in diags[0].message


def test_validate_no_classification_basis():
    (p,), _ = parse_products("product p\ncomponent X")
    assert codes(validate(p)) == ["E_NO_CLASSIFICATION_BASIS", "W_ISOLATED"]
    (p,), _ = parse_products("product p\ncomponent X\ncomponent Y\nedge X -> Y {}\nclassify required X")
    assert codes(validate(p)) == ["E_NO_CLASSIFICATION_BASIS"]
    (p,), _ = parse_products(
        "product p\ncomponent X\ncomponent Y\nedge X -> Y {}\nclassify required X\nclassify optional Y")
    assert validate(p) == []


def test_validate_classification_mismatch():
    text = ("product p\ncomponent S\ncomponent X\ncomponent Y\n"
            "edge S -> Y {}\nedge X -> Y {} optional\nstart S\nclassify required X\n")
    (p,), _ = parse_products(text)
    diags = validate(p)
    assert codes(diags) == ["W_CLASSIFICATION_MISMATCH"]
    assert diags[0].line == 8 and diags[0].severity is Severity.WARNING
    strict = validate(p, strict=True)
    assert codes(strict) == ["E_CLASSIFICATION_MISMATCH"] and strict[0].is_error


def test_door_ecu_declarations_agree_with_graph(door_ecu):
    for product in door_ecu:
        assert validate(product, strict=True) == []


def test_fixture_paths_exist():
    import os
    assert os.path.exists(fixtures.path("door_ecu.plp"))
