import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Literal

import numpy as np

from algebra.closure import SubUniverse, power_closure, subalgebra
from algebra.finite_algebra import FiniteAlgebra
from algebra.variety import MembershipCertificate, Vector, in_variety, verify_certificate
from config.logging_config import log
from config.settings import settings
from constructions.action_algebra import ActionAlgebra, diagonal_orbit_representatives
from constructions.star import star
from constructions.witness import WitnessAlgebra
from constructions.zero import adjoin_zero, zero_certificate
from groups.finite_group import FiniteGroup, in_ApAq, subgroup_generated
from groups.morphisms import GroupVarietyCertificate, group_in_variety
from utils.exceptions import BudgetExceeded, CosetDivisionFailure, FinvarError, WitnessCheckFailed
from utils.utils import decode_mixed, encode_mixed


SMALL_FALLBACK = 6


@dataclass(frozen=True)
class MembershipOutcome:
    """
    Итог проверки D ∈ V(A(G, S, α)).

    Attributes:
        status (str): "certified" или "undecided".
        certificate (MembershipCertificate | None): Проверенный сертификат.
        reason (str): Причина неопределённости.
        details (dict): |H|, r, показатель m и способ получения.
    """

    status: Literal["certified", "undecided"]
    certificate: MembershipCertificate | None = None
    reason: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status == "certified"


@dataclass(frozen=True)
class CosetLayout:
    """
    Разложение второго универсума подалгебры B(n, ℓ) на правые классы Ht.

    Attributes:
        letters (tuple[int, ...]): C1 как номера элементов X.
        subgroup (tuple[int, ...]): Элементы H = ⟨C1⟩ в P по возрастанию.
        representatives (tuple[int, ...]): Наименьшие элементы классов t_1 < … < t_r.
    """

    letters: tuple[int, ...]
    subgroup: tuple[int, ...]
    representatives: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.representatives)


def coset_layout(witness: WitnessAlgebra, sub: SubUniverse) -> CosetLayout:
    """
    Находит H = ⟨C1⟩ и классы Ht, составляющие C2.

    Raises:
        FinvarError: Если C1 пусто или совпадает со всем X.
        CosetDivisionFailure: Если C2 не является объединением классов.
    """

    letters, points = sub.subsets
    if not letters or len(letters) > witness.n:
        raise FinvarError("Первый универсум должен быть непустым собственным подмножеством X.")
    P = witness.group
    members = subgroup_generated(P, [witness.generators[i] for i in letters])
    orbit_min = P.mult[np.ix_(members, np.asarray(points, dtype=np.int64))].min(axis=0)
    representatives = tuple(sorted(set(int(t) for t in orbit_min)))
    if len(points) != len(representatives) * len(members) or not set(
        int(x) for x in P.mult[np.ix_(members, representatives)].ravel()
    ) <= set(points):
        log.error(f"Второй универсум мощности {len(points)} не делится на классы по H.")
        raise CosetDivisionFailure()
    return CosetLayout(tuple(letters), members, representatives)


def _row_lookup(A: ActionAlgebra) -> dict[bytes, int]:
    return {A.action.act[g].tobytes(): g for g in range(A.group.size)}


def power_chain_certificate(
    witness: WitnessAlgebra,
    layout: CosetLayout,
    A: ActionAlgebra,
    group_cert: GroupVarietyCertificate,
    element_budget: int | None = None,
) -> MembershipCertificate:
    """
    Собирает сертификат D ∈ V(A) по цепочке вложений.

    D ↪ L(H, r) ↪ L(H^r, 1), где H^r — образ K^r ≤ G^{mr}, а L(K^r, 1)
    вкладывается в A^M, M = r·m·|S|, отображением (Δ, R): координата (j, t, s)
    набора k ∈ K^r равна g_{j,t} для первого сорта и α(g_{j,t}, s) для второго.
    Блоки θ — ядро сюръекции K^r → H^r. Образующие сертификата — образы C1 и
    представителей классов.

    Raises:
        FinvarError: Если действие не точно.
    """

    if not A.faithful:
        raise FinvarError("Цепочка вложений требует точного действия.")
    P, G = witness.group, A.group
    S, m, r = A.set_size, group_cert.exponent, layout.r
    H, members = P.subgroup(layout.subgroup)
    position = {x: i for i, x in enumerate(members)}
    radices_m = [G.size] * m
    act = A.action.act

    def lift_coordinates(hs: tuple[int, ...]) -> np.ndarray:
        rows = [decode_mixed(group_cert.lifts[h], radices_m) for h in hs]
        return np.asarray(rows, dtype=np.int64).reshape(-1)

    def first_vector(hs: tuple[int, ...]) -> Vector:
        return tuple(int(g) for g in np.repeat(lift_coordinates(hs), S))

    def second_vector(hs: tuple[int, ...]) -> Vector:
        return tuple(int(x) for x in act[lift_coordinates(hs)].reshape(-1))

    units = diagonal_orbit_representatives(H, r)
    letters_sub, points_sub = (
        [witness.generators[i] for i in layout.letters],
        sorted(
            int(x) for x in P.mult[np.ix_(layout.subgroup, layout.representatives)].ravel()
        ),
    )
    coset_of = {
        P.mul(h, t): (i, position[h])
        for i, t in enumerate(layout.representatives)
        for h in layout.subgroup
    }

    def orbit_element(x: int) -> tuple[int, ...]:
        i, h = coset_of[x]
        return tuple(H.mul(h, u) for u in units[i])

    embedding_1 = tuple(first_vector((position[c],) * r) for c in letters_sub)
    embedding_2 = tuple(second_vector(orbit_element(x)) for x in points_sub)
    point_index = {x: i for i, x in enumerate(points_sub)}
    generators = (
        embedding_1,
        tuple(embedding_2[point_index[t]] for t in layout.representatives),
    )

    M = r * m * S
    closure = power_closure(A.algebra, generators, M, element_budget)
    image_of = dict(zip(group_cert.subgroup, group_cert.image))
    rows = _row_lookup(A)
    radices_r = [H.size] * r

    def block(sort: int, vector: np.ndarray) -> int:
        if sort == 0:
            gs = vector.reshape(r * m, S)[:, 0]
        else:
            gs = np.array([rows[row.tobytes()] for row in vector.reshape(r * m, S)])
        ks = [encode_mixed(chunk, radices_m) for chunk in gs.reshape(r, m)]
        return encode_mixed([image_of[k] for k in ks], radices_r)

    blocks = tuple(
        {tuple(int(x) for x in row): block(sort, row) for row in matrix}
        for sort, matrix in enumerate(closure.vectors)
    )
    notes = {
        "subgroup_order": H.size,
        "copies": r,
        "group_exponent": m,
        "letters": list(layout.letters),
    }
    return MembershipCertificate(M, generators, blocks, (embedding_1, embedding_2), "power-chain", notes)


def membership_2sorted(
    witness: WitnessAlgebra,
    sub: SubUniverse,
    A: ActionAlgebra,
    m_max: int | None = None,
    search_budget: int | None = None,
    element_budget: int | None = None,
    group_cert: GroupVarietyCertificate | None = None,
    search_group: bool = True,
) -> MembershipOutcome:
    """
    Доказывает D ∈ V(A(G, S, α)) для подалгебры D ≤ B(n, ℓ).

    Вычисляется H = ⟨C1⟩ и проверяется H ∈ 𝒜_p𝒜_q; C2 раскладывается на r
    правых классов Ht; свидетельство H ∈ var(G) ищется перебором при m ≤ m_max;
    затем собирается и независимо проверяется сертификат цепочки вложений.
    Для алгебр не более чем из шести элементов при неудаче используется
    общий тест через свободную алгебру.

    Args:
        witness (WitnessAlgebra): Алгебра B(n, ℓ).
        sub (SubUniverse): Подуниверс D.
        A (ActionAlgebra): Порождающая алгебра A(G, S, α).
        m_max (int | None): Наибольший показатель для группового свидетельства.
        search_budget (int | None): Лимит перебора.
        element_budget (int | None): Лимит замыкания.
        group_cert (GroupVarietyCertificate | None): Готовое свидетельство для H.
        search_group (bool): Искать свидетельство, если оно не передано.

    Returns:
        MembershipOutcome: Сертификат или «не решено» с причиной.

    Raises:
        WitnessCheckFailed: Если H ∉ 𝒜_p𝒜_q.
        CosetDivisionFailure: Если C2 не является объединением классов.
    """

    layout = coset_layout(witness, sub)
    if not in_ApAq(witness.group, witness.p, witness.q, layout.subgroup):
        log.error(f"Подгруппа порядка {len(layout.subgroup)} вне 𝒜_p𝒜_q.")
        raise WitnessCheckFailed("Подгруппа, порождённая C1, не лежит в 𝒜_p𝒜_q.")
    D, _ = subalgebra(witness.algebra, sub)
    details = {"subgroup_order": len(layout.subgroup), "copies": layout.r}

    reason = ""
    if not A.faithful:
        reason = "действие не точно"
    elif group_cert is None and search_group:
        H, _ = witness.group.subgroup(layout.subgroup)
        try:
            group_cert = group_in_variety(H, A.group, m_max, search_budget)
        except BudgetExceeded as exc:
            reason = str(exc)
    if group_cert is None and not reason:
        reason = f"H ∈ var(G) не подтверждено при m ≤ {m_max or settings.m_max}; принято допущение 𝒜_p𝒜_q ⊆ V(G)"

    if not reason:
        cert = power_chain_certificate(witness, layout, A, group_cert, element_budget)
        check = verify_certificate(cert, D, A.algebra, element_budget)
        if not check:
            log.error(f"Сертификат цепочки вложений не прошёл проверку: {check.message}")
            raise FinvarError(f"Сертификат не прошёл проверку: {check.message}")
        details["group_exponent"] = group_cert.exponent
        return MembershipOutcome("certified", cert, details=dict(details, method="power-chain"))

    if D.total_size <= SMALL_FALLBACK:
        result = in_variety(D, A.algebra, element_budget)
        if result:
            return MembershipOutcome(
                "certified", result.certificate, details=dict(details, method=result.certificate.method)
            )
    log.warning(f"Принадлежность подалгебры не решена: {reason}.")
    return MembershipOutcome("undecided", reason=reason, details=details)


def star_certificate(cert: MembershipCertificate, A: FiniteAlgebra) -> MembershipCertificate:
    """
    Переносит сертификат B ∈ V(A) в сертификат B* ∈ V(A*).

    (A^M)* отождествляется с (A*)^M покоординатно: пара наборов (u, w)
    переходит в набор u_i·|A2| + w_i. Образующие — все пары образующих,
    блок пары — пара блоков.
    """

    width = A.sizes[1]
    stride = max(cert.blocks[1].values(), default=-1) + 1

    def pair(u: Vector, w: Vector) -> Vector:
        return tuple(a * width + b for a, b in zip(u, w))

    closure_1 = list(cert.blocks[0])
    closure_2 = list(cert.blocks[1])
    blocks = {
        pair(u, w): cert.blocks[0][u] * stride + cert.blocks[1][w]
        for u in closure_1
        for w in closure_2
    }
    generators = tuple(pair(u, w) for u in cert.generators[0] for w in cert.generators[1])
    embedding = tuple(pair(u, w) for u in cert.embedding[0] for w in cert.embedding[1])
    notes = dict(cert.notes, transported_by="star")
    return MembershipCertificate(
        cert.exponent, (generators,), (blocks,), (embedding,), cert.method + "+star", notes
    )


@dataclass(frozen=True)
class SweepClass:
    """
    Класс подалгебр D ≤ B(n, ℓ) с одинаковыми C1 и числом классов r.

    Attributes:
        letters (tuple[int, ...]): C1.
        subgroup_order (int): |H|.
        r (int): Число правых классов во втором универсуме.
        count (int): Число подалгебр в классе.
        outcome (MembershipOutcome): Итог для канонического представителя.
    """

    letters: tuple[int, ...]
    subgroup_order: int
    r: int
    count: int
    outcome: MembershipOutcome


@dataclass(frozen=True)
class SweepReport:
    """
    Итог обхода всех непустых (n, n)-порождённых подалгебр B(n, ℓ).

    Attributes:
        classes (tuple[SweepClass, ...]): Классы в лексикографическом порядке C1.
        checked (int): Число подалгебр, отображение которых на канонического
            представителя проверено явно.
        zero (bool): Сертификаты перенесены на алгебры с присоединённым нулём.
    """

    classes: tuple[SweepClass, ...]
    checked: int = 0
    zero: bool = False

    @property
    def total(self) -> int:
        return sum(c.count for c in self.classes)

    @property
    def certified(self) -> int:
        return sum(c.count for c in self.classes if c.outcome)

    @property
    def undecided(self) -> int:
        return self.total - self.certified

    @property
    def passed(self) -> bool:
        return self.undecided == 0


def witness_subalgebras(witness: WitnessAlgebra, n: int | None = None) -> Iterator[SubUniverse]:
    """
    Перечисляет непустые (n, n)-порождённые подалгебры B(n, ℓ).

    Второй универсум подалгебры с первым универсумом C1 — объединение не более
    чем n правых классов по H = ⟨C1⟩, поскольку H действует на P свободно.
    Порядок: C1 лексикографически, затем число классов, затем наборы классов.
    """

    n = n or witness.n
    P = witness.group
    for size in range(1, min(n, witness.n) + 1):
        for letters in itertools.combinations(range(witness.n + 1), size):
            members = subgroup_generated(P, [witness.generators[i] for i in letters])
            cosets = _cosets(P, members)
            for r in range(1, min(n, len(cosets)) + 1):
                for chosen in itertools.combinations(cosets, r):
                    points = tuple(sorted(x for coset in chosen for x in coset))
                    yield SubUniverse((letters, points))


def _cosets(P: FiniteGroup, members: tuple[int, ...]) -> list[tuple[int, ...]]:
    orbit = P.mult[np.asarray(members, dtype=np.int64)]
    minimum = orbit.min(axis=0)
    return [tuple(sorted(int(x) for x in orbit[:, t])) for t in np.unique(minimum)]


def _check_transport(P: FiniteGroup, letters, members, canonical, chosen) -> bool:
    """
    Проверяет изоморфизм ht_i ↦ ht′_i канонической подалгебры на выбранную.

    s(c, ht_i) = (ch)t_i должно переходить в s(c, ht′_i) = (ch)t′_i.
    """

    members = np.asarray(members, dtype=np.int64)
    source = P.mult[members[:, None], np.asarray(canonical)[None, :]]
    target = P.mult[members[:, None], np.asarray(chosen)[None, :]]
    image = dict(zip(source.ravel().tolist(), target.ravel().tolist()))
    if len(set(image.values())) != len(image):
        return False
    letters = np.asarray(letters, dtype=np.int64)
    moved = P.mult[letters[:, None], source.ravel()[None, :]]
    moved_target = P.mult[letters[:, None], target.ravel()[None, :]]
    return all(image[int(a)] == int(b) for a, b in zip(moved.ravel(), moved_target.ravel()))


def structural_sweep(
    witness: WitnessAlgebra,
    A: ActionAlgebra,
    n: int | None = None,
    exhaustive: bool = True,
    zero: bool = False,
    m_max: int | None = None,
    search_budget: int | None = None,
    element_budget: int | None = None,
    progress: Callable[[int], None] | None = None,
) -> SweepReport:
    """
    Сертифицирует все непустые (n, n)-порождённые подалгебры B(n, ℓ).

    Для каждого C1 и каждого r ≤ n строится и проверяется сертификат
    канонического представителя (первые r классов). Остальные подалгебры того
    же класса изоморфны ему сдвигом представителей классов; при exhaustive
    такой изоморфизм проверяется явно для каждой из них, иначе подалгебры
    только подсчитываются. Групповое свидетельство кэшируется по H.
    При zero сертификат переносится на D⁰ ≤ B(n, ℓ)⁰ и проверяется в V(A⁰);
    подалгебры B⁰ с нулями лежат в соответствующей D⁰.

    Returns:
        SweepReport: Классы, число проверенных подалгебр и итог.
    """

    n = n or witness.n
    P = witness.group
    A0 = adjoin_zero(A.algebra) if zero else None
    group_certs: dict[tuple[int, ...], GroupVarietyCertificate | None] = {}
    classes = []
    checked = 0

    for size in range(1, min(n, witness.n) + 1):
        for letters in itertools.combinations(range(witness.n + 1), size):
            members = subgroup_generated(P, [witness.generators[i] for i in letters])
            cosets = _cosets(P, members)
            if any(len(coset) != len(members) for coset in cosets):
                raise CosetDivisionFailure("Группа H действует на P не свободно.")
            if members not in group_certs:
                H, _ = P.subgroup(members)
                try:
                    group_certs[members] = group_in_variety(H, A.group, m_max, search_budget)
                except BudgetExceeded:
                    group_certs[members] = None
            for r in range(1, min(n, len(cosets)) + 1):
                points = tuple(sorted(x for coset in cosets[:r] for x in coset))
                sub = SubUniverse((letters, points))
                outcome = membership_2sorted(
                    witness, sub, A, m_max, search_budget, element_budget, group_certs[members],
                    search_group=False,
                )
                if zero and outcome:
                    outcome = _zero_outcome(witness, sub, A, A0, outcome, element_budget)
                count = math.comb(len(cosets), r)
                if exhaustive:
                    canonical = [coset[0] for coset in cosets[:r]]
                    for chosen in itertools.combinations([coset[0] for coset in cosets], r):
                        if not _check_transport(P, [witness.generators[i] for i in letters], members, canonical, chosen):
                            raise FinvarError("Подалгебра не изоморфна каноническому представителю.")
                        checked += 1
                        if progress is not None and checked % 10_000 == 0:
                            progress(checked)
                classes.append(SweepClass(letters, len(members), r, count, outcome))

    report = SweepReport(tuple(classes), checked, zero)
    log.info(
        f"Обход подалгебр: всего {report.total}, сертифицировано {report.certified}, "
        f"не решено {report.undecided}."
    )
    return report


def _zero_outcome(witness, sub, A, A0, outcome, element_budget) -> MembershipOutcome:
    D, _ = subalgebra(witness.algebra, sub)
    cert = zero_certificate(outcome.certificate, A.algebra)
    check = verify_certificate(cert, adjoin_zero(D), A0, element_budget)
    if not check:
        log.error(f"Перенесённый сертификат для D⁰ не прошёл проверку: {check.message}")
        raise FinvarError(f"Сертификат для D⁰ не прошёл проверку: {check.message}")
    return MembershipOutcome("certified", cert, details=dict(outcome.details, zero=True))


def verify_star_membership(
    witness: WitnessAlgebra, sub: SubUniverse, A: ActionAlgebra, outcome: MembershipOutcome
) -> bool:
    """Переносит сертификат D ∈ V(A) на D* ∈ V(A*) и проверяет его."""

    D, _ = subalgebra(witness.algebra, sub)
    cert = star_certificate(outcome.certificate, A.algebra)
    return verify_certificate(cert, star(D), star(A.algebra)).passed
