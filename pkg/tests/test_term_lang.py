import pytest
from hypothesis import given, settings as hypothesis_settings, strategies

from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import AUTOMATIC, TAU, TAU_STAR
from algebra.terms import App, Identity, Var, holds
from constructions.automatic import automatic_from_action, build_automatic
from constructions.zero import adjoin_zero
from term_lang.families import (
    IdentityFamilySpec,
    action_from_automatic,
    check_word_identity,
    delta_identities,
    psi0_identities,
    psi_classes,
    psi_identities,
)
from term_lang.parser import (
    format_identity,
    format_term,
    parse_identity,
    parse_term,
    read_identities,
    write_identities,
)
from term_lang.words import canonical_word, enumerate_words, sharp, sharp_word, split_word_term, word_term
from utils.exceptions import (
    ArityMismatch,
    FinvarError,
    NotAWordTerm,
    NotZeroAdjoined,
    SortMismatch,
    TermSyntaxError,
    UnknownSymbol,
)


star_terms = strategies.recursive(
    strategies.builds(Var, strategies.just(0), strategies.integers(0, 3)),
    lambda children: strategies.one_of(
        strategies.builds(lambda a, b: App(0, (a, b)), children, children),
        strategies.builds(lambda a: App(1, (a,)), children),
    ),
    max_leaves=8,
)


@given(strategies.data())
@hypothesis_settings(max_examples=50, deadline=None)
def test_format_then_parse_gives_same_term(data):
    term = data.draw(star_terms)
    assert parse_term(format_term(term, TAU_STAR), TAU_STAR) == term


def test_parse_two_sorted_identity():
    identity = parse_identity("s(x0, s(x1, y0)) =~ s(x1, s(x0, y0))", TAU)
    assert identity.lhs == App(0, (Var(0, 0), App(0, (Var(0, 1), Var(1, 0)))))
    assert identity.variables() == [Var(0, 0), Var(0, 1), Var(1, 0)]
    assert parse_identity(format_identity(identity, TAU), TAU) == identity


def test_free_names_get_sorts_from_context():
    identity = parse_identity("s(g, s(h, p)) =~ s(h, s(g, p))", TAU)
    assert {v.sort for v in identity.variables()} == {0, 1}
    assert len(identity.variables()) == 3


def test_infix_dot_and_word_notation_agree():
    dotted = parse_term("x0 . x1 . x2", AUTOMATIC)
    assert dotted == parse_term("[x0 x1]x2", AUTOMATIC)
    assert dotted == word_term((0, 1), Var(0, 2))
    assert format_term(dotted, AUTOMATIC) == "x0 . x1 . x2"
    assert parse_term("(x0 . x1) . x2", AUTOMATIC) != dotted


@pytest.mark.parametrize(
    "text, error",
    [
        ("d(x0,", TermSyntaxError),
        ("d(x0,x1) x2", TermSyntaxError),
        ("g(x0)", UnknownSymbol),
        ("d(x0)", ArityMismatch),
        ("x0 ? x1", TermSyntaxError),
    ],
)
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_term(text, TAU_STAR)


def test_identity_sides_must_share_sort():
    with pytest.raises(SortMismatch):
        parse_identity("x0 =~ y0", TAU)


def test_syntax_error_carries_position():
    with pytest.raises(TermSyntaxError) as info:
        parse_term("d(x0,,x1)", TAU_STAR)
    assert info.value.position == 5


def test_identity_file(tmp_path):
    path = tmp_path / "ids.txt"
    path.write_text("# Ω_τ*\nd(x0,x0) =~ x0\n\nd(f(x0),x1) =~ d(x0,x1)  # f поглощается\n", encoding="utf-8")
    identities = read_identities(str(path), TAU_STAR)
    assert len(identities) == 2
    out = tmp_path / "out.txt"
    write_identities(str(out), identities, TAU_STAR)
    assert read_identities(str(out), TAU_STAR) == identities

    path.write_text("d(x0,x0) =~ x0\nd(x0 =~ x0\n", encoding="utf-8")
    with pytest.raises(TermSyntaxError) as info:
        read_identities(str(path), TAU_STAR)
    assert "Строка 2" in str(info.value)


def test_enumerate_words_counts():
    # суммы чисел Белла
    assert len(list(enumerate_words(3))) == 1 + 1 + 2 + 5
    assert len(list(enumerate_words(4))) == 24
    words = list(enumerate_words(2))
    assert words == [(), (0,), (0, 0), (0, 1)]
    assert all(canonical_word(w) == w for w in enumerate_words(4))
    assert canonical_word((3, 1, 3)) == (0, 1, 0)


def test_word_term_split_and_sharp():
    term = word_term((0, 1, 0))
    word, y = split_word_term(term)
    assert word == (0, 1, 0) and y == Var(0, 2)
    assert sharp(term) == sharp_word((0, 1, 0))
    with pytest.raises(NotAWordTerm):
        split_word_term(parse_term("(x0 . x1) . x2", AUTOMATIC))
    with pytest.raises(NotAWordTerm):
        sharp(word_term((0, 1), Var(0, 1)))


def test_delta_identities_hold_in_automatic_algebra(s3_action):
    identities = delta_identities(2)
    assert len(identities) == 4 + 3
    auto = automatic_from_action(s3_action)
    assert all(holds(auto, identity) for identity in identities)
    with pytest.raises(FinvarError):
        delta_identities(-1)


def test_delta_fails_outside_automatic_algebras(s3):
    group = s3.as_algebra()
    # в группе x·x ≈ 𝟎 не выполняется
    x_squared = delta_identities(0)[2]
    dot_group = FiniteAlgebra(AUTOMATIC, group.sizes, group.tables)
    assert not holds(dot_group, x_squared)


def test_seventh_power_word(s3_action):
    auto = automatic_from_action(s3_action)
    assert check_word_identity(auto, (0,) * 7, (0,))
    assert not check_word_identity(auto, (0, 0), (0,))
    assert not check_word_identity(auto, (), (0,))
    assert check_word_identity(auto, (), ())


def test_psi_classes_of_s3(s3_action):
    action = adjoin_zero(s3_action.algebra)
    classes = psi_classes(action, 2)
    assert len(classes.classes) == 4
    assert classes.zero_words == ()
    assert classes.class_of((0, 0)) != classes.class_of((0,))
    assert psi_identities(classes) == []
    with pytest.raises(NotZeroAdjoined):
        psi_classes(s3_action.algebra, 2)


def test_action_recovered_from_automatic_algebra(s3_action):
    action = action_from_automatic(automatic_from_action(s3_action))
    assert action.sizes == (6, 3)
    assert action.same_tables(s3_action.algebra)
    zeroed = action_from_automatic(build_automatic(1, 2, [{0: 1}]))
    assert zeroed.sizes == (2, 3)
    assert zeroed.table_view(0)[0].tolist() == [1, 2, 2]


def test_partial_maps_give_zero_words():
    # одна буква: 0 ↦ 1, точка 1 вне области определения
    auto = build_automatic(1, 2, [{0: 1}])
    action = action_from_automatic(auto)
    assert action.metadata["zeros"] == [1, 2]
    classes = psi_classes(action, 2)
    assert classes.zero_words == ((0, 0), (0, 1))
    identities = psi0_identities(classes)
    assert len(identities) == 2
    assert all(holds(auto, identity) for identity in identities)


def test_identity_family_spec(s3_action):
    assert IdentityFamilySpec("Delta", max_index=1).identities() == delta_identities(1)
    action = adjoin_zero(s3_action.algebra)
    assert IdentityFamilySpec("Psi0", max_length=2).identities(action) == []
    with pytest.raises(FinvarError):
        IdentityFamilySpec("Psi", max_length=2).identities()
    with pytest.raises(FinvarError):
        IdentityFamilySpec("Gamma")
    assert isinstance(delta_identities(0)[0], Identity)
