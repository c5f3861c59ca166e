import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from config.logging_config import log
from config.settings import settings
from groups.catalog import direct_product
from groups.coset_enum import PresentedGroup
from groups.finite_group import (
    ApAqResult,
    FiniteGroup,
    in_ApAq,
    is_group_homomorphism,
    subgroup_generated,
)
from groups.presentation import VectorSpaceFq, relators_hold
from utils.exceptions import BudgetExceeded, FinvarError, NotAHomomorphism, NotExtendable
from utils.utils import decode_mixed


def homomorphism_from_generators(
    source: PresentedGroup, target: FiniteGroup, images: Sequence[int]
) -> tuple[int, ...]:
    """
    Продолжает отображение образующих заданной группы до гомоморфизма.

    Продолжение существует тогда и только тогда, когда образы удовлетворяют
    всем соотношениям; значения вычисляются вдоль дерева обхода таблицы классов.

    Returns:
        tuple[int, ...]: Образ каждого элемента source.group.

    Raises:
        NotAHomomorphism: Если образы не удовлетворяют соотношениям.
    """

    if len(images) != source.presentation.generator_count:
        raise FinvarError("Число образов не совпадает с числом образующих.")
    if not relators_hold(target, source.presentation, images):
        raise NotAHomomorphism("Образы образующих не удовлетворяют соотношениям.")
    column_images = []
    for image in images:
        column_images += [int(image), target.inv(int(image))]

    table = source.table
    result = np.empty(table.coset_count, dtype=np.int64)
    result[0] = target.identity
    for c in range(1, table.coset_count):
        result[c] = target.mul(int(result[table.parent[c]]), column_images[table.letter[c]])
    return tuple(int(x) for x in result)


def extend_generator_map(source: PresentedGroup, generator_map: Sequence[int]) -> tuple[int, ...]:
    """
    Продолжает перестановку образующих до автоморфизма группы.

    Args:
        source (PresentedGroup): Группа с заданием.
        generator_map (Sequence[int]): Образующая i переходит в образующую generator_map[i].

    Returns:
        tuple[int, ...]: Автоморфизм как образ каждого элемента.

    Raises:
        NotExtendable: Если отображение не продолжается до автоморфизма.
    """

    images = [source.generators[j] for j in generator_map]
    try:
        automorphism = homomorphism_from_generators(source, source.group, images)
    except NotAHomomorphism:
        raise NotExtendable()
    if len(set(automorphism)) != source.group.size:
        raise NotExtendable("Продолжение не биективно.")
    return automorphism


def _require_action(N: FiniteGroup, K: FiniteGroup, phi: np.ndarray) -> None:
    if phi.shape != (K.size, N.size):
        raise NotAHomomorphism("Размер таблицы автоморфизмов не совпадает с порядками групп.")
    if not (phi[K.identity] == np.arange(N.size)).all():
        raise NotAHomomorphism("Единица K должна действовать тождественно.")
    for k in range(K.size):
        if np.unique(phi[k]).size != N.size or not is_group_homomorphism(N, N, phi[k]):
            raise NotAHomomorphism(f"Образ элемента {k} не является автоморфизмом.")
    # φ(k1 k2) = φ(k1) ∘ φ(k2)
    composed = phi[np.arange(K.size)[:, None, None], phi[None, :, :]]
    if not np.array_equal(phi[K.mult], composed):
        raise NotAHomomorphism("Отображение K → Aut(N) не сохраняет умножение.")


def semidirect_product(N: FiniteGroup, K: FiniteGroup, phi: Sequence[Sequence[int]]) -> FiniteGroup:
    """
    Полупрямое произведение N ⋊_φ K.

    Пара (n, k) имеет номер n·|K| + k, (n1, k1)(n2, k2) = (n1·φ(k1)(n2), k1 k2).

    Args:
        N (FiniteGroup): Нормальный множитель.
        K (FiniteGroup): Действующая группа.
        phi: Для каждого k ∈ K автоморфизм N как список образов.

    Raises:
        NotAHomomorphism: Если φ не гомоморфизм K → Aut(N).
    """

    table = np.asarray(phi, dtype=np.int64)
    _require_action(N, K, table)
    codes = np.arange(N.size * K.size)
    n, k = codes // K.size, codes % K.size
    twisted = table[k[:, None], n[None, :]]
    mult = N.mult[n[:, None], twisted] * K.size + K.mult[k[:, None], k[None, :]]
    return FiniteGroup(mult)


def vector_space_action(GV: PresentedGroup, space: VectorSpaceFq) -> list[tuple[int, ...]]:
    """Автоморфизмы [v] ↦ [v + x] группы G_V для всех x ∈ V."""

    return [
        extend_generator_map(GV, [space.add(v, x) for v in range(space.size)])
        for x in range(space.size)
    ]


@dataclass(frozen=True)
class FnpqReport:
    """
    Результат проверки свойства (∗) для группы P и набора X.

    Attributes:
        generates (bool): Порождает ли X группу P.
        subsets (tuple[tuple[tuple[int, ...], ApAqResult], ...]): Проверка 𝒜_p𝒜_q
            для подгруппы, порождённой каждым n-элементным подмножеством X.
    """

    generates: bool
    subsets: tuple[tuple[tuple[int, ...], ApAqResult], ...]

    @property
    def passed(self) -> bool:
        return self.generates and all(result.holds for _, result in self.subsets)


def check_Fnpq_witness(P: FiniteGroup, X: Sequence[int], n: int, p: int, q: int) -> FnpqReport:
    """
    Проверяет, что |X| = n+1, X порождает P и каждое n-элементное
    подмножество X порождает подгруппу из 𝒜_p𝒜_q.

    Raises:
        FinvarError: Если |X| ≠ n+1.
    """

    X = tuple(int(x) for x in X)
    if len(set(X)) != n + 1:
        raise FinvarError(f"Набор X должен состоять из {n + 1} различных элементов.")
    generates = len(subgroup_generated(P, X)) == P.size
    subsets = []
    for subset in itertools.combinations(X, n):
        subsets.append((subset, in_ApAq(P, p, q, subgroup_generated(P, subset))))
    report = FnpqReport(generates, tuple(subsets))
    log.debug(f"Проверка (∗): порождает={generates}, прошла={report.passed}.")
    return report


def group_power(G: FiniteGroup, m: int) -> FiniteGroup:
    """G^m; набор (g1, …, gm) кодируется по основанию |G|, первая координата старшая."""

    result = G
    for _ in range(m - 1):
        result = direct_product(result, G)
    return result


@dataclass(frozen=True)
class GroupVarietyCertificate:
    """
    Свидетельство H ∈ var(G): H — образ подгруппы K ≤ G^m.

    Attributes:
        exponent (int): m.
        generators (tuple[int, ...]): Образующие K как коды элементов G^m.
        subgroup (tuple[int, ...]): Элементы K.
        kernel (tuple[int, ...]): Ядро сюръекции K → H.
        image (tuple[int, ...]): Образ каждого элемента K (в порядке subgroup).
        lifts (tuple[int, ...]): Первый прообраз каждого h ∈ H.
    """

    exponent: int
    generators: tuple[int, ...]
    subgroup: tuple[int, ...]
    kernel: tuple[int, ...]
    image: tuple[int, ...]
    lifts: tuple[int, ...]

    def coordinates(self, code: int, base: int) -> tuple[int, ...]:
        return decode_mixed(code, [base] * self.exponent)


def _graph_closure(
    Gm: FiniteGroup, H: FiniteGroup, pairs: Sequence[tuple[int, int]]
) -> np.ndarray:
    """Подгруппа G^m × H, порождённая парами; коды k·|H| + h."""

    found = np.zeros(Gm.size * H.size, dtype=bool)
    start = Gm.identity * H.size + H.identity
    found[start] = True
    frontier = np.array([start], dtype=np.int64)
    gk = np.array([k for k, _ in pairs], dtype=np.int64)
    gh = np.array([h for _, h in pairs], dtype=np.int64)
    while frontier.size:
        k, h = frontier // H.size, frontier % H.size
        products = np.unique(
            (Gm.mult[k[:, None], gk[None, :]] * H.size + H.mult[h[:, None], gh[None, :]]).ravel()
        )
        frontier = products[~found[products]]
        found[frontier] = True
    return np.flatnonzero(found)


def _minimal_generators(H: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {H.identity}
    for h in sorted(range(H.size), key=lambda x: -H.element_order(x)):
        if len(span) == H.size:
            break
        if h not in span:
            gens.append(h)
            span = set(subgroup_generated(H, gens))
    return gens


def group_in_variety(
    H: FiniteGroup,
    G: FiniteGroup,
    m_max: int | None = None,
    search_budget: int | None = None,
    progress: Callable[[int], None] | None = None,
) -> GroupVarietyCertificate | None:
    """
    Ищет представление H как образа подгруппы G^m при m ≤ m_max.

    Образующие h_i группы H сопоставляются наборам k_i ∈ G^m; отображение
    k_i ↦ h_i продолжается до гомоморфизма ⟨k_i⟩ → H тогда и только тогда,
    когда подгруппа G^m × H, порождённая парами (k_i, h_i), является графиком
    функции. Кандидаты отсекаются по порядкам: порядок h_i делит порядок k_i.

    Returns:
        GroupVarietyCertificate | None: Свидетельство или None, если поиск не нашёл его.

    Raises:
        BudgetExceeded: Если перебор превысил search_budget.
    """

    m_max = m_max or settings.m_max
    budget = search_budget or settings.search_budget
    gens = _minimal_generators(H)
    if not gens:
        return GroupVarietyCertificate(1, (), (G.identity,), (G.identity,), (H.identity,), (G.identity,))

    steps = 0
    for m in range(1, m_max + 1):
        Gm = group_power(G, m)
        orders = Gm.element_orders()
        candidates = [
            np.flatnonzero(orders % H.element_order(h) == 0).tolist() for h in gens
        ]
        if m == 1 and np.array_equal(G.mult, H.mult):
            candidates = [[h] + [k for k in c if k != h] for h, c in zip(gens, candidates)]
        for ks in itertools.product(*candidates):
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"Поиск свидетельства превысил лимит {budget} шагов.")
            if progress and steps % 10_000 == 0:
                progress(steps)
            graph = _graph_closure(Gm, H, list(zip(ks, gens)))
            subgroup = np.unique(graph // H.size)
            if subgroup.size != graph.size:
                continue
            image_of = dict(zip((graph // H.size).tolist(), (graph % H.size).tolist()))
            members = tuple(int(k) for k in subgroup)
            image = tuple(image_of[k] for k in members)
            kernel = tuple(k for k, h in zip(members, image) if h == H.identity)
            lifts = [None] * H.size
            for k, h in zip(members, image):
                if lifts[h] is None:
                    lifts[h] = k
            log.info(f"Найдено свидетельство H ∈ var(G) с показателем m = {m}.")
            return GroupVarietyCertificate(m, tuple(ks), members, kernel, image, tuple(lifts))
    log.info(f"Свидетельство H ∈ var(G) при m ≤ {m_max} не найдено.")
    return None


def verify_group_certificate(cert: GroupVarietyCertificate, H: FiniteGroup, G: FiniteGroup) -> bool:
    """Пересчитывает подгруппу, проверяет гомоморфизм, сюръективность и ядро."""

    Gm = group_power(G, cert.exponent)
    if subgroup_generated(Gm, cert.generators) != cert.subgroup:
        return False
    sub, members = Gm.subgroup(cert.subgroup)
    if not is_group_homomorphism(sub, H, cert.image) or set(cert.image) != set(range(H.size)):
        return False
    kernel = tuple(k for k, h in zip(members, cert.image) if h == H.identity)
    position = dict(zip(members, cert.image))
    lifts_ok = all(position.get(k) == h for h, k in enumerate(cert.lifts))
    return kernel == cert.kernel and lifts_ok


@dataclass(frozen=True)
class Retraction:
    """
    Ретракция G_V → H: сечение σ: H → G_V и проекция π: G_V → H, π∘σ = id.

    Attributes:
        section (tuple[int, ...]): Образы элементов H.
        projection (tuple[int, ...]): Образы элементов G_V.
    """

    section: tuple[int, ...]
    projection: tuple[int, ...]


def find_retraction(
    GV: PresentedGroup, space: VectorSpaceFq, H: PresentedGroup
) -> Retraction | None:
    """
    Ищет ретракцию G_{V,p,c} на H_{p,c}.

    Образующие a1, a2 группы H отправляются в [v], [w] с v − w без нулевых
    координат; проекция перебирает образы остальных [u] среди элементов H с
    порядком, делящим p, соблюдая обязательные коммутации.
    """

    p = H.group.element_order(H.generators[0])
    allowed = [h for h in range(H.group.size) if H.group.power(h, p) == H.group.identity]
    commuting = {
        (u, w)
        for u in range(space.size)
        for w in range(space.size)
        if u != w and space.in_coordinate_subspace(space.sub(u, w))
    }
    a1, a2 = H.generators
    for v in range(space.size):
        for w in range(space.size):
            if v == w or space.in_coordinate_subspace(space.sub(v, w)):
                continue
            section_images = [GV.generators[v], GV.generators[w]]
            try:
                section = homomorphism_from_generators(H, GV.group, section_images)
            except NotAHomomorphism:
                continue
            fixed = {v: a1, w: a2}
            for images in _projection_candidates(space.size, fixed, allowed, commuting, H.group):
                try:
                    projection = homomorphism_from_generators(GV, H.group, images)
                except NotAHomomorphism:
                    continue
                if all(projection[section[h]] == h for h in range(H.group.size)):
                    return Retraction(section, projection)
    return None


def _projection_candidates(size, fixed, allowed, commuting, group):
    images: list[int | None] = [fixed.get(u) for u in range(size)]

    def consistent(u: int) -> bool:
        return all(
            group.mul(images[u], images[w]) == group.mul(images[w], images[u])
            for w in range(size)
            if images[w] is not None and (u, w) in commuting
        )

    def extend(u: int):
        if u == size:
            yield list(images)
            return
        if u in fixed:
            if consistent(u):
                yield from extend(u + 1)
            return
        for h in allowed:
            images[u] = h
            if consistent(u):
                yield from extend(u + 1)
        images[u] = None

    yield from extend(0)

