import json

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies

from groups.action import GroupAction, is_faithful, natural_action, regular_action, trivial_action
from groups.catalog import cyclic, dihedral, direct_product, elementary_abelian, heisenberg, permutation_group, symmetric
from groups.coset_enum import todd_coxeter
from groups.finite_group import in_ApAq, left_commutator, nilpotency, subgroup_generated
from groups.io import read_action, read_group, write_group
from groups.morphisms import (
    check_Fnpq_witness,
    extend_generator_map,
    find_retraction,
    group_in_variety,
    homomorphism_from_generators,
    semidirect_product,
    verify_group_certificate,
)
from groups.presentation import (
    format_presentation,
    parse_presentation,
    presentation_GVpc,
    presentation_Hpc,
    relators_hold,
)
from utils.exceptions import (
    ActionMismatch,
    BudgetExceeded,
    CosetOverflow,
    FinvarError,
    NotAHomomorphism,
    NotExtendable,
    NotPrime,
    TermSyntaxError,
)


S3 = symmetric(3)


@given(strategies.data())
@hypothesis_settings(max_examples=30, deadline=None)
def test_group_axioms_of_catalog(data):
    G = data.draw(strategies.sampled_from([S3, cyclic(5), dihedral(4), heisenberg(3), elementary_abelian(2, 3)]))
    a, b, c = (data.draw(strategies.integers(0, G.size - 1)) for _ in range(3))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == G.identity
    assert G.mul(G.identity, a) == a
    assert G.power(a, G.element_order(a)) == G.identity


def test_catalog_orders():
    assert S3.size == 6 and not S3.is_abelian()
    assert cyclic(7).size == 7 and cyclic(7).is_abelian()
    assert dihedral(8).size == 16
    assert elementary_abelian(3, 2).size == 9
    assert heisenberg(3).size == 27
    assert direct_product(cyclic(2), cyclic(3)).is_abelian()
    with pytest.raises(FinvarError):
        dihedral(2)
    with pytest.raises(FinvarError):
        permutation_group([(0, 0, 1)])


def test_commutator_convention():
    # [x, y] = x⁻¹y⁻¹xy
    x, y = S3.from_cycles((1, 2)), S3.from_cycles((1, 3))
    assert left_commutator(S3, [x, y]) == S3.from_cycles((1, 2, 3))
    assert S3.label(left_commutator(S3, [x, y])) == "(1 2 3)"
    with pytest.raises(FinvarError):
        left_commutator(S3, [x])


def test_nilpotency_classes():
    assert not nilpotency(S3).nilpotent
    assert nilpotency(heisenberg(3)).nilpotency_class == 2
    assert nilpotency(dihedral(4)).nilpotency_class == 2
    assert nilpotency(elementary_abelian(2, 2)).nilpotency_class == 1
    assert nilpotency(cyclic(1)).nilpotency_class == 0


@pytest.mark.parametrize(
    "group, p, q, expected",
    [
        (S3, 3, 2, True),
        (S3, 2, 2, False),
        (elementary_abelian(2, 2), 2, 2, True),
        (elementary_abelian(2, 2), 3, 2, True),
        (dihedral(4), 2, 2, True),
        (symmetric(4), 3, 2, False),
    ],
)
def test_in_ApAq(group, p, q, expected):
    result = in_ApAq(group, p, q)
    assert result.holds is expected
    assert (result.witness is None) is expected


def test_in_ApAq_normal_subgroup_and_primes():
    result = in_ApAq(S3, 3, 2)
    assert len(result.normal_subgroup) == 3
    with pytest.raises(NotPrime):
        in_ApAq(S3, 4, 2)


@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_dihedral_ladder(c):
    presentation = presentation_Hpc(2, c)
    H = todd_coxeter(presentation)
    assert H.group.size == 2 ** (c + 1)
    assert nilpotency(H.group).nilpotency_class == c
    assert len(subgroup_generated(H.group, H.generators)) == H.group.size


def test_dihedral_oracle():
    n = 8
    D = dihedral(n)
    gens = [D.element([(-i) % n for i in range(n)]), D.element([(1 - i) % n for i in range(n)])]
    assert relators_hold(D, presentation_Hpc(2, 3), gens)
    assert not relators_hold(D, presentation_Hpc(2, 2), gens)


def test_heisenberg_presentation():
    presentation = presentation_Hpc(3, 2)
    assert todd_coxeter(presentation).group.size == 27
    assert relators_hold(heisenberg(3), presentation, [9, 3])
    assert todd_coxeter(presentation_Hpc(3, 1)).group.size == 9


def test_coset_limit():
    with pytest.raises(CosetOverflow):
        todd_coxeter(presentation_Hpc(2, 4), coset_limit=4)
    assert issubclass(CosetOverflow, BudgetExceeded)


def test_parse_presentation():
    presentation = parse_presentation("gens: a b; rels: a^2, b^3, [a,b];")
    assert presentation.names == ("a", "b")
    H = todd_coxeter(presentation)
    assert H.group.size == 6 and H.group.is_abelian()
    again = parse_presentation(format_presentation(presentation))
    assert todd_coxeter(again).group.size == 6
    with pytest.raises(TermSyntaxError):
        parse_presentation("a^2, b^3")


def test_homomorphism_from_generators():
    C6 = todd_coxeter(parse_presentation("gens: a; rels: a^6;"))
    C3 = cyclic(3)
    generator = C3.from_cycles((1, 2, 3))
    image = homomorphism_from_generators(C6, C3, [generator])
    assert len(set(image)) == 3
    with pytest.raises(NotAHomomorphism):
        homomorphism_from_generators(C6, cyclic(4), [cyclic(4).from_cycles((1, 2, 3, 4))])


def test_extend_generator_map():
    V4 = todd_coxeter(parse_presentation("gens: a b; rels: a^2, b^2, [a,b];"))
    swap = extend_generator_map(V4, [1, 0])
    assert sorted(swap) == list(range(4))
    H = todd_coxeter(presentation_Hpc(2, 2))
    with pytest.raises(NotExtendable):
        # a1 ↦ a1, a2 ↦ a1 не биективно
        extend_generator_map(H, [0, 0])


def test_semidirect_product_is_s3():
    N, K = cyclic(3), cyclic(2)
    phi = [list(range(3)), [int(x) for x in N.inverses]]
    G = semidirect_product(N, K, phi)
    assert G.size == 6 and not G.is_abelian()
    assert in_ApAq(G, 3, 2).holds
    with pytest.raises(NotAHomomorphism):
        semidirect_product(N, K, [list(range(3)), [0, 0, 0]])


def test_gv_and_retraction():
    presentation, space = presentation_GVpc(2, 2, 3, 1)
    assert space.size == 4
    GV = todd_coxeter(presentation)
    assert GV.group.size == 81
    H = todd_coxeter(presentation_Hpc(3, 1))
    retraction = find_retraction(GV, space, H)
    assert retraction is not None
    for h in range(H.group.size):
        assert retraction.projection[retraction.section[h]] == h
    with pytest.raises(BudgetExceeded):
        presentation_GVpc(2, 2, 3, 1, relator_cap=10)


def test_fnpq_witness(witness_2_4):
    P = witness_2_4.group
    assert P.size == 324
    assert witness_2_4.gv_order == 81 and witness_2_4.c == 1
    report = check_Fnpq_witness(P, witness_2_4.generators, 2, 3, 2)
    assert report.passed and len(report.subsets) == 3
    with pytest.raises(FinvarError):
        check_Fnpq_witness(P, witness_2_4.generators[:2], 2, 3, 2)


def test_group_in_variety():
    V4, C2 = elementary_abelian(2, 2), cyclic(2)
    certificate = group_in_variety(V4, C2, m_max=2)
    assert certificate is not None and certificate.exponent == 2
    assert verify_group_certificate(certificate, V4, C2)
    assert group_in_variety(S3, C2, m_max=2) is None


def test_actions():
    assert is_faithful(natural_action(S3))
    assert not is_faithful(trivial_action(S3, 2))
    assert is_faithful(regular_action(cyclic(4)))
    assert natural_action(S3).orbit(0) == (0, 1, 2)
    with pytest.raises(ActionMismatch):
        GroupAction(S3, 3, np.zeros((6, 3), dtype=np.int64))


def test_group_files(tmp_path):
    path = str(tmp_path / "groups" / "s3.json")
    write_group(path, S3)
    G = read_group(path)
    assert G.size == 6 and np.array_equal(G.mult, S3.mult)

    action_path = tmp_path / "action.json"
    action_path.write_text(json.dumps({"group": {"permutations": [[1, 0, 2], [1, 2, 0]]}}), encoding="utf-8")
    action = read_action(str(action_path))
    assert action.set_size == 3 and action.group.size == 6
