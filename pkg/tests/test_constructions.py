import itertools

import numpy as np
import pytest

from algebra.closure import SubUniverse, generate_subalgebra, subalgebra
from algebra.finite_algebra import FiniteAlgebra
from algebra.homomorphism import find_isomorphism, is_homomorphism
from algebra.signature import TAU_STAR
from algebra.terms import holds
from algebra.variety import verify_certificate
from constructions.action_algebra import (
    build_action_algebra,
    build_L,
    copies_embedding,
    delta_r_embedding,
    diagonal_orbit_representatives,
    regular_algebra,
)
from constructions.automatic import automatic_from_action, automatic_from_two_sorted, build_automatic
from constructions.membership import (
    coset_layout,
    membership_2sorted,
    star_certificate,
    structural_sweep,
    verify_star_membership,
    witness_subalgebras,
)
from constructions.star import check_omega_tau_star, omega_tau_star_identities, square, star
from constructions.witness import build_B
from constructions.zero import adjoin_zero, strip_zero, zero_certificate, zero_stripped_generation, zeros_of
from groups.action import trivial_action
from groups.catalog import cyclic
from utils.exceptions import (
    DomainViolation,
    FinvarError,
    NotInOmegaTauStar,
    NotPrime,
    NotZeroAdjoined,
)


def test_sizes_for_s3(s3_action):
    assert s3_action.algebra.sizes == (6, 3)
    assert star(s3_action.algebra).sizes == (18,)
    assert star(adjoin_zero(s3_action.algebra)).sizes == (28,)
    assert automatic_from_action(s3_action).sizes == (10,)


def test_star_satisfies_omega_tau_star(s3_action):
    C = star(s3_action.algebra)
    check_omega_tau_star(C)
    assert all(holds(C, identity) for identity in omega_tau_star_identities())


def test_square_inverts_star(s3_action):
    C = star(s3_action.algebra)
    back = square(C)
    assert back.same_tables(s3_action.algebra)
    assert find_isomorphism(star(back), C) is not None


def test_square_of_zero_adjoined_star(s3_action):
    A0 = adjoin_zero(s3_action.algebra)
    assert square(star(A0)).same_tables(A0)


def test_square_rejects_algebras_outside_omega_tau_star():
    table = np.maximum.outer(np.arange(3), np.arange(3)).reshape(-1)
    bad = FiniteAlgebra(TAU_STAR, [3], [table, np.arange(3)])
    with pytest.raises(NotInOmegaTauStar) as info:
        square(bad)
    assert info.value.witness is not None
    with pytest.raises(FinvarError):
        star(bad)


def test_action_algebra_variants(s3):
    L = build_L(cyclic(3), 2)
    assert L.algebra.sizes == (3, 6)
    assert L.algebra.metadata["copies"] == 2
    assert regular_algebra(cyclic(3)).algebra.same_tables(build_L(cyclic(3), 1).algebra)
    unfaithful = build_action_algebra(s3, trivial_action(s3, 2))
    assert not unfaithful.faithful
    assert unfaithful.algebra.metadata["faithful"] is False
    with pytest.raises(FinvarError):
        build_L(cyclic(3), 0)


def test_delta_r_embedding(s3_action):
    L, AS, embedding = delta_r_embedding(s3_action)
    assert AS.sizes == (6 ** 3, 3 ** 3)
    assert embedding.is_injective()
    assert is_homomorphism(embedding, L, AS)


def test_copies_embedding():
    source, target, embedding = copies_embedding(cyclic(2), 2)
    assert source.algebra.sizes == (2, 4)
    assert target.algebra.sizes == (4, 4)
    assert embedding.is_injective()
    assert len(diagonal_orbit_representatives(cyclic(2), 2)) == 2
    with pytest.raises(FinvarError):
        diagonal_orbit_representatives(cyclic(1), 2)


def test_zero_adjunction(s3_action):
    A0 = adjoin_zero(s3_action.algebra)
    assert A0.sizes == (7, 4)
    assert zeros_of(A0) == (6, 3)
    view = A0.table_view(0)
    assert (view[6] == 3).all() and (view[:, 3] == 3).all()
    with pytest.raises(NotZeroAdjoined):
        zeros_of(s3_action.algebra)
    with pytest.raises(FinvarError):
        adjoin_zero(star(s3_action.algebra))


def test_zero_stripped_generation_agrees(c2_action):
    A0 = adjoin_zero(c2_action.algebra)
    for x, y in itertools.product(range(A0.sizes[0]), range(A0.sizes[1])):
        gens = [[x], [y]]
        sub = generate_subalgebra(A0, gens)
        assert zero_stripped_generation(A0, sub, gens) == (True, True)
    sub = generate_subalgebra(A0, [[0], [2]])
    assert strip_zero(A0, sub) == ((0,), ())


def test_automatic_algebras(s3_action):
    auto = automatic_from_action(s3_action)
    assert auto.metadata["automatic"] == {"group_size": 6, "set_size": 3}
    assert auto.metadata["zero"] == 9
    from_zero = automatic_from_two_sorted(adjoin_zero(s3_action.algebra))
    assert from_zero.same_tables(auto)
    partial = build_automatic(2, 2, [[1, None], {1: 0}])
    view = partial.table_view(0)
    assert view[0, 2] == 3 and view[0, 3] == 4
    assert view[1, 3] == 2 and view[1, 2] == 4
    with pytest.raises(DomainViolation):
        build_automatic(1, 2, [{0: 5}])
    with pytest.raises(FinvarError):
        build_automatic(2, 2, [[0, 1]])


def test_build_b_shape(witness_2_4):
    B, P = witness_2_4.algebra, witness_2_4.group
    assert B.sizes == (3, 324)
    assert generate_subalgebra(B, [range(3), [P.identity]]).sizes == B.sizes
    assert witness_2_4.report.passed
    with pytest.raises(NotPrime):
        build_B(2, 4, 4, 2)


@pytest.mark.slow
def test_build_b_grows_with_ell():
    witness = build_B(2, 100, 3, 2)
    assert witness.c == 2 and witness.gv_order == 729
    assert witness.algebra.sizes == (3, 2916)


def test_coset_layout(witness_2_4):
    sub = next(witness_subalgebras(witness_2_4, 2))
    layout = coset_layout(witness_2_4, sub)
    assert layout.letters == (0,)
    assert len(sub.subsets[1]) == layout.r * len(layout.subgroup)
    with pytest.raises(FinvarError):
        coset_layout(witness_2_4, SubUniverse(((0, 1, 2), tuple(range(324)))))


def test_membership_certificates_transport(witness_2_4, s3_action):
    for sub in itertools.islice(witness_subalgebras(witness_2_4, 2), 3):
        outcome = membership_2sorted(witness_2_4, sub, s3_action)
        assert outcome.status == "certified"
        D, _ = subalgebra(witness_2_4.algebra, sub)
        assert verify_certificate(outcome.certificate, D, s3_action.algebra).passed
        assert verify_star_membership(witness_2_4, sub, s3_action, outcome)
        starred = star_certificate(outcome.certificate, s3_action.algebra)
        assert starred.method.endswith("+star")
        zeroed = zero_certificate(outcome.certificate, s3_action.algebra)
        assert verify_certificate(zeroed, adjoin_zero(D), adjoin_zero(s3_action.algebra)).passed


def test_structural_sweep_counts(witness_2_4, s3_action):
    report = structural_sweep(witness_2_4, s3_action, 2, exhaustive=False)
    assert report.passed
    assert report.total == sum(c.count for c in report.classes) > 0
    assert report.checked == 0
    assert {c.letters for c in report.classes} == {(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)}


@pytest.mark.slow
def test_structural_sweep_exhaustive_with_zero(witness_2_4, s3_action):
    report = structural_sweep(witness_2_4, s3_action, 2, exhaustive=True)
    assert report.passed and report.checked == report.total
    zero_report = structural_sweep(witness_2_4, s3_action, 2, exhaustive=False, zero=True)
    assert zero_report.passed and zero_report.zero
