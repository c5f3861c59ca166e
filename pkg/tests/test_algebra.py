import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies

from algebra.closure import (
    free_algebra,
    generate_subalgebra,
    generating_set,
    is_subuniverse,
    power_closure,
    subalgebra,
)
from algebra.congruence import Congruence, is_congruence, kernel, quotient, total_congruence
from algebra.finite_algebra import FiniteAlgebra, direct_product, power
from algebra.homomorphism import find_isomorphism, identity_map, is_homomorphism
from algebra.io import read_algebra, write_algebra
from algebra.signature import TAU
from algebra.terms import Identity, Var, eval_term, holds
from algebra.variety import MembershipCertificate, in_Vn, in_variety, verify_certificate, vn_basis
from constructions.action_algebra import build_action_algebra, build_L
from constructions.automatic import automatic_from_action
from constructions.star import star
from groups.action import natural_action
from groups.catalog import cyclic, symmetric
from term_lang.parser import parse_identity
from utils.exceptions import BudgetExceeded, FinvarError, NotACongruence, SortMismatch


S3 = symmetric(3)
A_S3 = build_action_algebra(S3, natural_action(S3))
STAR_S3 = star(A_S3.algebra)


def subsets_of(size: int):
    return strategies.lists(strategies.integers(0, size - 1), min_size=1, max_size=4, unique=True)


def test_table_validation():
    with pytest.raises(SortMismatch):
        FiniteAlgebra(TAU, [2, 0], [[]])
    with pytest.raises(FinvarError):
        FiniteAlgebra(TAU, [2, 2], [[0, 1, 1]])
    with pytest.raises(FinvarError):
        FiniteAlgebra(TAU, [2, 2], [[0, 1, 1, 2]])


def test_direct_product_sizes():
    A = A_S3.algebra
    assert direct_product([A, A]).sizes == (36, 9)
    assert power(A, 3).sizes == (216, 27)
    assert power(A, 1).same_tables(A)


@given(strategies.data())
@hypothesis_settings(max_examples=30, deadline=None)
def test_closure_is_idempotent(data):
    gens = data.draw(subsets_of(STAR_S3.sizes[0]))
    sub = generate_subalgebra(STAR_S3, [gens])
    assert set(gens) <= set(sub.subsets[0])
    assert is_subuniverse(STAR_S3, sub.subsets)
    assert generate_subalgebra(STAR_S3, sub.subsets) == sub


@given(strategies.data())
@hypothesis_settings(max_examples=30, deadline=None)
def test_closure_is_monotone(data):
    small = data.draw(subsets_of(STAR_S3.sizes[0]))
    extra = data.draw(subsets_of(STAR_S3.sizes[0]))
    smaller = generate_subalgebra(STAR_S3, [small])
    larger = generate_subalgebra(STAR_S3, [sorted(set(small) | set(extra))])
    assert smaller.issubset(larger)


def test_closure_terms_evaluate_to_elements():
    sub = generate_subalgebra(A_S3.algebra, [[1, 3], [0]], with_terms=True)
    env = {Var(0, 0): 1, Var(0, 1): 3, Var(1, 0): 0}
    for sort, terms in enumerate(sub.terms):
        for element, term in terms.items():
            assert eval_term(A_S3.algebra, term, env) == element


def test_closure_budget():
    with pytest.raises(BudgetExceeded):
        generate_subalgebra(STAR_S3, [[0, 7]], element_budget=2)


def test_subalgebra_inclusion_is_homomorphism():
    sub = generate_subalgebra(A_S3.algebra, [[1], [0]])
    B, inclusion = subalgebra(A_S3.algebra, sub)
    assert B.sizes == sub.sizes
    assert is_homomorphism(inclusion, B, A_S3.algebra)
    assert inclusion.is_injective()


def test_generating_set_generates():
    gens = generating_set(STAR_S3)
    assert generate_subalgebra(STAR_S3, gens).sizes == STAR_S3.sizes


def test_total_congruence_and_quotient():
    A = A_S3.algebra
    theta = total_congruence(A)
    assert is_congruence(A, theta)
    Q, projection = quotient(A, theta)
    assert Q.sizes == (1, 1)
    assert is_homomorphism(projection, A, Q)
    assert kernel(projection).block_counts == (1, 1)


def test_non_congruence_is_rejected():
    A = A_S3.algebra
    # единица отдельно, остальные перестановки в одном блоке
    identity = S3.identity
    labels = [[0 if g == identity else 1 for g in range(S3.size)], list(range(3))]
    assert not is_congruence(A, labels)
    with pytest.raises(NotACongruence):
        quotient(A, Congruence.from_labels(labels))


def test_isomorphism_of_relabelled_copy():
    A = A_S3.algebra
    assert is_homomorphism(identity_map(A), A, A)
    iso = find_isomorphism(STAR_S3, STAR_S3)
    assert iso is not None and iso.is_injective() and iso.is_onto(STAR_S3)
    assert find_isomorphism(STAR_S3, star(build_action_algebra(cyclic(2), natural_action(cyclic(2))).algebra)) is None


def test_free_algebra_sizes(s3_action):
    assert free_algebra(star(s3_action.algebra), [1]).algebra.sizes == (6,)
    assert free_algebra(automatic_from_action(s3_action), [1]).algebra.sizes == (2,)


def test_free_algebra_on_two_generators_is_sound():
    free = free_algebra(STAR_S3, [2])
    assert free.assignments == 18 * 18
    columns = {var: free.vectors[0][element] for var, element in free.designations.items()}
    assert len(free.algebra.sizes) == 1 and free.algebra.sizes[0] > 2
    for element, term in enumerate(free.terms[0]):
        for j in range(0, free.assignments, 37):
            env = {var: int(column[j]) for var, column in columns.items()}
            assert eval_term(STAR_S3, term, env) == free.vectors[0][element][j]
    # тождество от двух переменных выполняется ровно тогда, когда термы дают один элемент
    terms = free.terms[0][:6]
    for a, lhs in enumerate(terms):
        for b, rhs in enumerate(terms):
            assert bool(holds(STAR_S3, Identity(lhs, rhs))) is (a == b)


def test_power_closure_result_does_not_depend_on_chunks():
    n = STAR_S3.sizes[0]
    columns = [np.repeat(np.arange(n), n), np.tile(np.arange(n), n)]
    whole = power_closure(STAR_S3, [columns], n * n)
    chunked = power_closure(STAR_S3, [columns], n * n, chunk_cells=n * n * 3)
    assert all(np.array_equal(a, b) for a, b in zip(whole.vectors, chunked.vectors))
    assert whole.terms == chunked.terms


def test_holds_witness_is_a_counterexample():
    identity = parse_identity("d(x0,x1) =~ x0", STAR_S3.signature)
    result = holds(STAR_S3, identity)
    assert not result
    assert eval_term(STAR_S3, identity.lhs, result.witness) != eval_term(STAR_S3, identity.rhs, result.witness)
    assert holds(STAR_S3, parse_identity("d(x0,x0) =~ x0", STAR_S3.signature))


def test_holds_budget():
    identity = parse_identity("d(d(x0,x1),d(x2,x3)) =~ d(x0,x3)", STAR_S3.signature)
    with pytest.raises(BudgetExceeded):
        holds(STAR_S3, identity, assignment_budget=100)


def test_membership_certificate_verifies():
    L = build_L(cyclic(2), 1)
    result = in_variety(L.algebra, A_S3.algebra)
    assert result.member
    check = verify_certificate(result.certificate, L.algebra, A_S3.algebra)
    assert check.passed
    restored = MembershipCertificate.from_json(result.certificate.to_json())
    assert restored == result.certificate


def test_non_member_gets_failed_identity(c2_action):
    result = in_variety(A_S3.algebra, c2_action.algebra)
    assert not result.member
    assert result.failed_identity is not None
    assert holds(c2_action.algebra, result.failed_identity)
    assert not holds(A_S3.algebra, result.failed_identity)


def test_in_vn_and_basis(c2_action):
    C2_squared = power(c2_action.algebra, 2)
    assert in_Vn(C2_squared, c2_action.algebra, 1)
    assert not in_Vn(A_S3.algebra, c2_action.algebra, 1)
    identities = vn_basis(c2_action.algebra, 1)
    assert identities
    assert all(holds(c2_action.algebra, identity) for identity in identities)
    assert all(isinstance(identity, Identity) for identity in identities)


def test_in_vn_with_two_generators(c2_action):
    C2_squared = power(c2_action.algebra, 2)
    assert in_Vn(C2_squared, c2_action.algebra, 2)
    result = in_Vn(A_S3.algebra, c2_action.algebra, 2)
    assert not result
    assert result.counterexample is not None
    identities = vn_basis(c2_action.algebra, 2)
    assert all(holds(C2_squared, identity) for identity in identities)
    assert not all(holds(A_S3.algebra, identity) for identity in identities)


def test_in_variety_falls_back_when_embedding_search_is_exhausted():
    L = build_L(cyclic(2), 1)
    result = in_variety(L.algebra, A_S3.algebra, search_budget=1)
    assert result.member
    assert result.certificate.method == "free-algebra"
    assert verify_certificate(result.certificate, L.algebra, A_S3.algebra).passed


def test_algebra_file_roundtrip(tmp_path):
    path = str(tmp_path / "algebras" / "star.json")
    write_algebra(path, STAR_S3)
    assert read_algebra(path).same_tables(STAR_S3)


def test_tables_are_read_only():
    with pytest.raises(ValueError):
        STAR_S3.tables[0][0] = np.int64(1)
