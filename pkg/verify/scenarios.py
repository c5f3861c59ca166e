import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from algebra.closure import free_algebra, generate_subalgebra, is_subuniverse
from algebra.finite_algebra import FiniteAlgebra, power
from algebra.homomorphism import find_isomorphism
from algebra.signature import TAU_STAR
from algebra.terms import holds
from algebra.variety import in_variety, vn_basis
from config.logging_config import log
from config.settings import settings
from constructions.action_algebra import ActionAlgebra, build_action_algebra, build_L, delta_r_embedding
from constructions.automatic import automatic_from_action, automatic_from_two_sorted
from constructions.membership import (
    membership_2sorted,
    structural_sweep,
    verify_star_membership,
    witness_subalgebras,
)
from constructions.star import OMEGA_TAU_STAR, omega_tau_star_identities, square, star
from constructions.witness import build_B
from constructions.zero import adjoin_zero, zero_stripped_generation
from groups.action import GroupAction, natural_action, trivial_action
from groups.catalog import cyclic, dihedral, elementary_abelian, heisenberg, permutation_group, symmetric
from groups.coset_enum import todd_coxeter
from groups.finite_group import FiniteGroup, in_ApAq
from groups.morphisms import find_retraction
from groups.presentation import presentation_GVpc, presentation_Hpc, relators_hold
from term_lang.families import check_word_identity
from utils.exceptions import BudgetExceeded, NotInOmegaTauStar
from verify.fragment import boozer_fragment_check
from verify.report import ScenarioReport, SuiteReport


SUITE_SIZE = 20
# Наибольшая мощность A*, для которой тождества Ω_τ* проверяются перебором.
SUITE_STAR_LIMIT = 56


def s3_action() -> ActionAlgebra:
    G = symmetric(3)
    return build_action_algebra(G, natural_action(G))


def _suite_candidates() -> list[tuple[str, FiniteGroup]]:
    groups = [(f"C{k}", cyclic(k)) for k in range(2, 8)]
    groups += [
        ("S3", symmetric(3)),
        ("D4", dihedral(4)),
        ("D5", dihedral(5)),
        ("V4", permutation_group([(1, 0, 3, 2), (2, 3, 0, 1)])),
        ("A4", permutation_group([(1, 2, 0, 3), (0, 2, 3, 1)])),
    ]
    return [(name, G) for name, G in groups if G.size * G.degree <= SUITE_STAR_LIMIT]


def random_suite(seed: int, count: int = SUITE_SIZE) -> list[tuple[str, ActionAlgebra]]:
    """
    Случайный набор точных действий групп порядка не больше 12.

    Группа выбирается из каталога, её естественное действие перенумеровывается
    случайной перестановкой точек. Генератор numpy инициализируется seed.
    """

    rng = np.random.default_rng(seed)
    candidates = _suite_candidates()
    suite = []
    for i in range(count):
        name, G = candidates[int(rng.integers(len(candidates)))]
        relabel = rng.permutation(G.degree)
        act = np.empty((G.size, G.degree), dtype=np.int64)
        act[:, relabel] = relabel[np.array(G.permutations, dtype=np.int64)]
        suite.append((f"{name}#{i}", build_action_algebra(G, GroupAction(G, G.degree, act))))
    return suite


def small_algebras() -> list[tuple[str, ActionAlgebra]]:
    """Алгебры действия не более чем из 8 элементов."""

    C2, C3, C4 = cyclic(2), cyclic(3), cyclic(4)
    V4 = permutation_group([(1, 0, 3, 2), (2, 3, 0, 1)])
    return [
        ("A(C2,1)", build_action_algebra(C2, trivial_action(C2))),
        ("A(C2,2)", build_action_algebra(C2, natural_action(C2))),
        ("A(C3,3)", build_action_algebra(C3, natural_action(C3))),
        ("A(C4,4)", build_action_algebra(C4, natural_action(C4))),
        ("A(V4,4)", build_action_algebra(V4, natural_action(V4))),
        ("L(C2,2)", build_L(C2, 2)),
    ]


def min_generation(alg: FiniteAlgebra) -> int:
    """Наименьшее n, при котором алгебра порождается n элементами каждого сорта."""

    for n in range(1, max(alg.sizes) + 1):
        choices = [itertools.combinations(range(size), min(n, size)) for size in alg.sizes]
        for gens in itertools.product(*choices):
            if generate_subalgebra(alg, gens).sizes == alg.sizes:
                return n
    return max(alg.sizes)


def _subuniverses_one_sorted(alg: FiniteAlgebra) -> set[frozenset[int]]:
    found = set()
    frontier = [frozenset(generate_subalgebra(alg, [[x]]).subsets[0]) for x in range(alg.sizes[0])]
    while frontier:
        current = frontier.pop()
        if current in found:
            continue
        found.add(current)
        for x in range(alg.sizes[0]):
            if x not in current:
                frontier.append(frozenset(generate_subalgebra(alg, [sorted(current | {x})]).subsets[0]))
    return found


def _product_subuniverses(alg: FiniteAlgebra) -> set[frozenset[int]]:
    """Множества B1 × B2 для всех всюду непустых подуниверсов алгебры действия."""

    n1, n2 = alg.sizes
    products = set()
    for mask_1 in range(1, 1 << n1):
        first = [a for a in range(n1) if mask_1 >> a & 1]
        for mask_2 in range(1, 1 << n2):
            second = [b for b in range(n2) if mask_2 >> b & 1]
            if is_subuniverse(alg, (first, second)):
                products.add(frozenset(a * n2 + b for a in first for b in second))
    return products


def scenario_s3_sizes(report: ScenarioReport, seed: int) -> None:
    A = s3_action()
    report.expect("star", "A(S3,{1,2,3},α)", star(A.algebra).sizes[0], 18)
    report.expect("star∘adjoin_zero", "A(S3,{1,2,3},α)", star(adjoin_zero(A.algebra)).sizes[0], 28)
    report.expect("automatic_from_action", "A(S3,{1,2,3},α)", automatic_from_action(A).sizes[0], 10)


def scenario_omega_tau_star(report: ScenarioReport, seed: int) -> None:
    identities = omega_tau_star_identities()
    for name, A in random_suite(seed):
        C = star(A.algebra)
        for text, identity in zip(OMEGA_TAU_STAR, identities):
            result = holds(C, identity)
            report.check("holds", {"algebra": f"{name}*", "identity": text}, bool(result), bool(result))


def scenario_barr_roundtrip(report: ScenarioReport, seed: int) -> None:
    for name, A in random_suite(seed):
        C = star(A.algebra)
        back = square(C)
        report.check("square∘star", name, back.sizes, back.same_tables(A.algebra))
        iso = find_isomorphism(star(back), C)
        report.check("find_isomorphism", f"star(square({name}*)),{name}*", iso is not None, iso is not None)

    # d(x, y) = max(x, y) идемпотентна, но d(d(x,y),d(z,w)) ≠ d(x,w)
    bad = FiniteAlgebra(TAU_STAR, [3], [np.maximum.outer(np.arange(3), np.arange(3)).reshape(-1), np.arange(3)])
    try:
        square(bad)
        report.check("square", "max[3]", "accepted", False)
    except NotInOmegaTauStar as exc:
        report.check("square", "max[3]", f"rejected witness={exc.witness}", exc.witness is not None)


def scenario_f1_f2(report: ScenarioReport, seed: int) -> None:
    for name, A in small_algebras():
        C = star(A.algebra)
        two_sorted, starred = min_generation(A.algebra), min_generation(C)
        report.check("min_generation", name, f"({two_sorted},{two_sorted}) vs {starred}", two_sorted == starred)
        subs, products = _subuniverses_one_sorted(C), _product_subuniverses(A.algebra)
        report.check("subuniverses", f"{name}*", f"{len(subs)} vs {len(products)}", subs == products)

        A0 = adjoin_zero(A.algebra)
        agree = True
        for gens in itertools.product(range(A0.sizes[0]), range(A0.sizes[1])):
            sub = generate_subalgebra(A0, [[gens[0]], [gens[1]]])
            whole, stripped = zero_stripped_generation(A0, sub, [[gens[0]], [gens[1]]])
            agree &= whole and stripped
        report.check("zero_stripped_generation", f"{name}⁰", agree, agree)

    name, A = small_algebras()[1]
    square_power = star(power(A.algebra, 2))
    result = in_variety(square_power, star(A.algebra))
    report.check("in_variety", f"({name}²)*,{name}*", result.member, result.member)


def scenario_dihedral_ladder(report: ScenarioReport, seed: int) -> None:
    for c in range(1, 5):
        presentation = presentation_Hpc(2, c)
        H = todd_coxeter(presentation)
        report.expect("todd_coxeter", f"H(2,{c})", H.group.size, 2 ** (c + 1))
        if c == 1:
            D, gens = elementary_abelian(2, 2), [1, 2]
        else:
            n = 2 ** c
            D = dihedral(n)
            gens = [D.element([(-i) % n for i in range(n)]), D.element([(1 - i) % n for i in range(n)])]
        oracle = relators_hold(D, presentation, gens) and D.size == H.group.size
        report.check("relators_hold", f"oracle H(2,{c})", oracle, oracle)

    presentation = presentation_Hpc(3, 2)
    H = todd_coxeter(presentation)
    report.expect("todd_coxeter", "H(3,2)", H.group.size, 27)
    U = heisenberg(3)
    oracle = relators_hold(U, presentation, [9, 3]) and U.size == H.group.size
    report.check("relators_hold", "heisenberg(3)", oracle, oracle)


def scenario_apaq(report: ScenarioReport, seed: int) -> None:
    S3 = symmetric(3)
    result = in_ApAq(S3, 3, 2)
    report.check("in_ApAq", "S3,3,2", f"{result.holds} |N|={len(result.normal_subgroup)}",
                 result.holds and len(result.normal_subgroup) == 3)
    report.expect("in_ApAq", "S3,2,2", in_ApAq(S3, 2, 2).holds, False)
    V4 = elementary_abelian(2, 2)
    for p in (2, 3):
        report.expect("in_ApAq", f"C2×C2,{p},2", in_ApAq(V4, p, 2).holds, True)


def scenario_build_b(report: ScenarioReport, seed: int) -> None:
    for ell in (4, 20):
        witness = build_B(2, ell, 3, 2)
        B, P = witness.algebra, witness.group
        inputs = f"2,{ell},3,2"
        report.expect("build_B.sizes[0]", inputs, B.sizes[0], 3)
        generated = generate_subalgebra(B, [range(3), [P.identity]]).sizes == B.sizes
        report.check("generate_subalgebra", f"B({inputs}),X∪{{1}}", generated, generated)
        report.check("build_B.sizes[1]", inputs, B.sizes[1], B.sizes[1] >= ell)
        subsets = witness.report.subsets
        report.check(
            "check_Fnpq_witness", inputs, f"{sum(r.holds for _, r in subsets)}/{len(subsets)}",
            witness.report.passed and len(subsets) == 3,
        )

    GV_presentation, space = presentation_GVpc(2, 2, 3, 1)
    GV = todd_coxeter(GV_presentation)
    H = todd_coxeter(presentation_Hpc(3, 1))
    retraction = find_retraction(GV, space, H)
    report.check("find_retraction", "G(V,3,1),H(3,1)", retraction is not None, retraction is not None)


def scenario_witness_sweep(report: ScenarioReport, seed: int) -> None:
    A = s3_action()
    _, _, embedding = delta_r_embedding(A)
    report.check("delta_r_embedding", "A(S3,{1,2,3},α)", embedding.is_injective(), embedding.is_injective())
    L = build_L(cyclic(2), 1)
    result = in_variety(L.algebra, A.algebra)
    report.check("in_variety", "L(C2,1),A(S3,{1,2,3},α)", result.member, result.member)

    witness = build_B(2, 4, 3, 2)
    sweep = structural_sweep(witness, A, 2, exhaustive=True)
    report.check(
        "structural_sweep", "B(2,4),n=2",
        f"total={sweep.total} checked={sweep.checked} undecided={sweep.undecided}", sweep.passed,
    )
    zero_sweep = structural_sweep(witness, A, 2, exhaustive=False, zero=True)
    report.check(
        "structural_sweep", "B(2,4)⁰,n=2",
        f"total={zero_sweep.total} undecided={zero_sweep.undecided}", zero_sweep.passed,
    )
    for sub in itertools.islice(witness_subalgebras(witness, 2), 3):
        outcome = membership_2sorted(witness, sub, A)
        transported = bool(outcome) and verify_star_membership(witness, sub, A, outcome)
        report.check("verify_star_membership", f"D={list(map(len, sub.subsets))}", transported, transported)


def scenario_free_algebra(report: ScenarioReport, seed: int) -> None:
    A = s3_action()
    C = star(A.algebra)
    report.expect("free_algebra", "A(S3,{1,2,3},α)*,[1]", free_algebra(C, [1]).algebra.sizes[0], 6)
    auto = automatic_from_action(A)
    report.expect("free_algebra", "Auto(S3),[1]", free_algebra(auto, [1]).algebra.sizes[0], 2)
    identities = vn_basis(C, 1)
    satisfied = sum(bool(holds(C, identity)) for identity in identities)
    report.check("vn_basis", "A(S3,{1,2,3},α)*,1", f"{satisfied}/{len(identities)}", satisfied == len(identities))


def scenario_boozer_fragment(report: ScenarioReport, seed: int) -> None:
    A = s3_action()
    sigma = [list(A.action.act[g]) for g in range(A.group.size)]
    witness = build_B(2, 4, 3, 2)
    C = automatic_from_two_sorted(adjoin_zero(witness.algebra))
    fragment = boozer_fragment_check(A.group, A.set_size, sigma, 4, 4, witness=C)
    report.assertions.extend(fragment.assertions)
    auto = automatic_from_action(A)
    result = check_word_identity(auto, (0,) * 7, (0,))
    report.check("check_word_identity", "Auto(S3),[x^7]y,[x]y", bool(result), bool(result))


SCENARIOS: dict[str, Callable[[ScenarioReport, int], None]] = {
    "apaq": scenario_apaq,
    "barr-roundtrip": scenario_barr_roundtrip,
    "boozer-fragment": scenario_boozer_fragment,
    "build-b": scenario_build_b,
    "dihedral-ladder": scenario_dihedral_ladder,
    "f1-f2": scenario_f1_f2,
    "free-algebra": scenario_free_algebra,
    "omega-tau-star": scenario_omega_tau_star,
    "s3-sizes": scenario_s3_sizes,
    "witness-sweep": scenario_witness_sweep,
}


def run_scenario(scenario: str, seed: int) -> ScenarioReport:
    """
    Выполняет один сценарий; превышение лимита делает его пропущенным.

    Raises:
        KeyError: Если сценарий неизвестен.
    """

    run = SCENARIOS[scenario]
    report = ScenarioReport(scenario, {"seed": seed})
    started = time.perf_counter()
    log.info(f"Сценарий {scenario} запущен.")
    try:
        run(report, seed)
    except BudgetExceeded as exc:
        report.skip(scenario, {"seed": seed}, str(exc))
    report.elapsed = time.perf_counter() - started
    log.info(f"Сценарий {scenario}: {len(report.assertions)} проверок, ошибок {report.failed}.")
    return report


def verify_paper_suite(
    scenarios: Sequence[str] | None = None, seed: int | None = None, workers: int = 1
) -> SuiteReport:
    """
    Выполняет выбранные сценарии (по умолчанию все).

    Сценарии не разделяют состояния и могут выполняться параллельно;
    отчёт упорядочивается по идентификатору сценария.

    Args:
        scenarios (Sequence[str] | None): Идентификаторы сценариев.
        seed (int | None): Зерно генератора; по умолчанию из настроек.
        workers (int): Число потоков.

    Returns:
        SuiteReport: Отчёты сценариев.
    """

    seed = settings.seed if seed is None else seed
    chosen = sorted(set(scenarios or SCENARIOS))
    unknown = [s for s in chosen if s not in SCENARIOS]
    if unknown:
        raise KeyError(f"Неизвестные сценарии: {', '.join(unknown)}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda s: run_scenario(s, seed), chosen))
    else:
        reports = [run_scenario(s, seed) for s in chosen]
    return SuiteReport(seed, reports)
