import typing as t

import pytest

from latcom.errors import GroupTableError, InvalidSpec, OrderCapExceeded, SpecParseError
from latcom.families import FamilyKind, FamilySpec, build, is_family_name, order_of, parse, validate
from latcom.group import element_order, make_group
from latcom.verify import SMALL_CORPUS
from tests.factories import (
    DihedralSpecFactory,
    FamilySpecFactory,
    GenQuaternionSpecFactory,
    ProductSpecFactory,
    QuasiDihedralSpecFactory,
    T21SpecFactory,
)


class TestParse:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("Z(5)", FamilySpec.of(FamilyKind.CYCLIC, 5)),
            ("D(6)", FamilySpec.of(FamilyKind.DIHEDRAL, 3)),
            ("d(6)", FamilySpec.of(FamilyKind.DIHEDRAL, 3)),
            ("Q(16)", FamilySpec.of(FamilyKind.GEN_QUATERNION, 4)),
            ("SD(16)", FamilySpec.of(FamilyKind.QUASI_DIHEDRAL, 4)),
            ("M(2,4)", FamilySpec.of(FamilyKind.MODULAR, 2, 4)),
            ("T21(7, 3, 1)", FamilySpec.of(FamilyKind.T21, 7, 3, 1)),
            ("T22.3(3,2,5,1)", FamilySpec.of(FamilyKind.T22_TYPE3, 3, 2, 5, 1)),
            ("T22.6", FamilySpec.of(FamilyKind.T22_TYPE6)),
            ("A4", FamilySpec.of(FamilyKind.ALT4)),
        ],
    )
    def test_parse(self, text: str, expected: FamilySpec) -> None:
        assert parse(text) == expected

    @pytest.mark.parametrize(
        "text",
        [
            "D(6)",
            "Q(32)",
            "SD(64)",
            "T22.2(5,2,4)",
            "T22.8(3)",
            "prod(D(6),Z(5))",
        ],
    )
    def test_canonical_text(self, text: str) -> None:
        assert str(parse(text)) == text

    def test_product_nests_to_the_left(self) -> None:
        spec = parse("prod(Z(2),Z(3),Z(5))")
        assert spec.kind is FamilyKind.PRODUCT
        assert str(spec) == "prod(prod(Z(2),Z(3)),Z(5))"
        assert order_of(spec) == 30

    @pytest.mark.parametrize(
        "text",
        [
            "D(3)",
            "D(0)",
            "Q(12)",
            "X(4)",
            "D(6",
            "D(6))",
            "Z(1,2)",
            "T21(7,3)",
            "prod(Z(2))",
            "Z(2) Z(3)",
            "Z($)",
            "",
        ],
    )
    def test_parse_errors(self, text: str) -> None:
        with pytest.raises(SpecParseError):
            parse(text)

    @pytest.mark.parametrize("word,expected", [("prod", True), ("T22.4", True), ("sd", True), ("n", False)])
    def test_is_family_name(self, word: str, expected: bool) -> None:
        assert is_family_name(word) is expected


class TestValidate:
    @pytest.mark.parametrize(
        "text,violation",
        [
            ("T21(7,2,1)", None),
            ("T21(7,5,1)", "q | p-1 required"),
            ("T21(8,2,1)", "p = 8 must be prime"),
            ("T22.2(5,2,4)", None),
            ("T22.2(7,2,2)", "p² | q-1 required"),
            ("T22.2(5,2,1)", "n > 1 required"),
            ("T22.3(3,2,2,1)", "p ≠ q required"),
            ("T22.3(3,2,3,1)", "q ≠ r required"),
            ("T22.4(7,3,1)", None),
            ("M(2,3)", "n ≥ 4 required for p = 2"),
            ("M(3,2)", "n ≥ 3 required"),
            ("T22.8(2)", "n ≥ 3 required"),
            ("Z(0)", "n ≥ 1 required"),
        ],
    )
    def test_validate(self, text: str, violation: t.Optional[str]) -> None:
        assert validate(parse(text)) == violation

    def test_product_names_failing_factor(self) -> None:
        violation = validate(parse("prod(D(6),T21(7,5,1))"))
        assert violation is not None
        assert violation.startswith("T21(7,5,1): ")

    def test_wrong_arity(self) -> None:
        with pytest.raises(InvalidSpec):
            FamilySpec(kind=FamilyKind.DIHEDRAL, params=(1, 2))
        with pytest.raises(InvalidSpec):
            FamilySpec(kind=FamilyKind.PRODUCT, factors=(FamilySpec.of(FamilyKind.CYCLIC, 2),))


class TestBuild:
    @pytest.mark.parametrize(
        "text,order",
        [
            ("Z(1)", 1),
            ("D(10)", 10),
            ("Q(16)", 16),
            ("SD(32)", 32),
            ("M(3,3)", 27),
            ("T21(7,3,2)", 63),
            ("T22.2(5,2,3)", 40),
            ("T22.3(3,2,5,1)", 30),
            ("T22.4(3,2,1)", 18),
            ("T22.6", 16),
            ("T22.8(3)", 32),
            ("A4", 12),
            ("prod(D(6),Z(5))", 30),
        ],
    )
    def test_order(self, text: str, order: int) -> None:
        spec = parse(text)
        G = build(spec)
        assert G.order == order == order_of(spec)
        assert G.label == str(spec)

    @pytest.mark.parametrize(
        "text,involutions",
        [
            ("D(8)", 5),
            ("Q(8)", 1),
            ("Q(16)", 1),
            ("SD(16)", 5),
            ("M(2,4)", 3),
            ("A4", 3),
        ],
    )
    def test_involution_count(self, text: str, involutions: int) -> None:
        G = build(parse(text))
        assert sum(1 for g in range(G.order) if element_order(G, g) == 2) == involutions

    @pytest.mark.parametrize("text", SMALL_CORPUS)
    def test_tables_satisfy_group_axioms(self, helpers: t.Any, text: str) -> None:
        G = build(parse(text))
        with helpers.not_raises(GroupTableError):
            validated = make_group(G.rows, label=G.label)
        assert validated.same_table(G)

    @pytest.mark.parametrize("text", SMALL_CORPUS)
    def test_element_orders_divide_group_order(self, text: str) -> None:
        G = build(parse(text))
        assert all(G.order % element_order(G, g) == 0 for g in range(G.order))

    @pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
    def test_odd_dihedral_involutions(self, n: int) -> None:
        G = build(parse(f"D({2 * n})"))
        assert sum(1 for g in range(G.order) if element_order(G, g) == 2) == n

    def test_quaternion_is_non_abelian(self, q8: t.Any) -> None:
        assert not q8.is_abelian
        assert sorted(element_order(q8, g) for g in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]

    def test_invalid_spec(self) -> None:
        with pytest.raises(InvalidSpec):
            build(parse("T21(7,5,1)"))

    def test_order_cap(self) -> None:
        with pytest.raises(OrderCapExceeded):
            build(parse("Z(100)"), order_cap=50)


class TestFactories:
    def test_cyclic(self) -> None:
        spec = FamilySpecFactory()
        assert spec.kind is FamilyKind.CYCLIC
        assert validate(spec) is None

    @pytest.mark.parametrize(
        "factory_class",
        [DihedralSpecFactory, GenQuaternionSpecFactory, QuasiDihedralSpecFactory, T21SpecFactory],
    )
    def test_generated_specs_build(self, factory_class: t.Any) -> None:
        spec = factory_class()
        assert validate(spec) is None
        assert parse(str(spec)) == spec
        assert build(spec).order == order_of(spec)

    def test_product(self) -> None:
        spec = ProductSpecFactory()
        assert str(spec) == "prod(D(6),Z(5))"
        assert build(spec).order == 30
