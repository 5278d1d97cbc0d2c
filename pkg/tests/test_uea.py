import pytest

from src.exact import ExactScalar
from src.uea import (
    LETTERS,
    ORDERINGS,
    POSITIVE_LETTERS,
    UEAElement,
    basis_matrix,
    bracket,
    format_structure_constants,
    is_ordered,
    is_symplectic_algebra_element,
    jacobi_residual,
    parse_tag,
    random_element,
    root_of,
    run_checks,
    structure_constants,
)


@pytest.mark.parametrize("tag", LETTERS)
def test_basis_matrices_are_symplectic(tag):
    assert is_symplectic_algebra_element(basis_matrix(tag))


def test_parse_tag():
    assert parse_tag("Eplus12") == ("Eplus", 1, 2)
    with pytest.raises(KeyError):
        parse_tag("Eplus33")


def test_bracket_b12_b21():
    assert bracket("B12", "B21") == {"B11": ExactScalar(1), "B22": ExactScalar(-1)}


def test_bracket_is_antisymmetric():
    for x in LETTERS:
        assert bracket(x, x) == {}
        for y in LETTERS:
            forward, backward = bracket(x, y), bracket(y, x)
            assert forward == {tag: -c for tag, c in backward.items()}


def test_p_minus_p_plus_lands_in_k():
    combo = bracket("Eminus11", "Eplus11")
    assert combo
    assert all(parse_tag(tag)[0] == "B" for tag in combo)


def test_jacobi_on_sample_triples():
    assert jacobi_residual("Eplus11", "Eminus12", "B21") == {}
    assert jacobi_residual("B12", "B21", "Eplus22") == {}


def test_structure_constant_table():
    table = structure_constants()
    assert len(table) == 28
    text = format_structure_constants()
    assert text.endswith("\n")
    assert "[B12,B21] = B11 - B22" in text.splitlines()


def test_positive_roots():
    weights = {tag: tuple(int(c.re) for c in root_of(tag)) for tag in POSITIVE_LETTERS}
    assert weights == {"B12": (1, -1), "Eminus11": (2, 0), "Eminus12": (1, 1), "Eminus22": (0, 2)}


def test_single_rewrite():
    got = UEAElement.word(("B21", "B12")).normalize("scalarK")
    expected = UEAElement.word(("B12", "B21")) - UEAElement.letter("B11") + UEAElement.letter("B22")
    assert got == expected


def test_ordered_word_is_fixed():
    word = ("Eplus11", "Eminus22", "B11", "B21")
    assert is_ordered(word, "scalarK")
    element = UEAElement.word(word, 3)
    assert element.normalize("scalarK") == element


@pytest.mark.parametrize("ordering", ORDERINGS)
def test_normal_form_properties(rng, ordering):
    for _ in range(10):
        element = random_element(rng)
        normal = element.normalize(ordering)
        assert normal.is_normalized(ordering)
        assert normal.normalize(ordering) == normal
        assert normal.to_matrix() == element.to_matrix()


def test_unknown_ordering():
    with pytest.raises(ValueError):
        UEAElement.word(("B21", "B12")).normalize("lex")


def test_element_arithmetic():
    x, y = UEAElement.letter("B12"), UEAElement.letter("B21")
    assert (x * y - x * y).is_zero()
    assert x + 2 == x + UEAElement.scalar(2)
    assert (x + 2 - x) == UEAElement.scalar(2)
    with pytest.raises(AttributeError):
        x.terms = {}


def test_run_checks_pass():
    results = run_checks(seed=7)
    assert {r.status for r in results} == {"pass"}
    assert "uea.jacobi" in {r.name for r in results}
