from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import GROUP
from config.settings import settings
from utils.exceptions import FinvarError, NotAHomomorphism
from utils.utils import require_prime


class FiniteGroup:
    """
    Конечная группа, заданная таблицей умножения.

    Элементы — числа 0..size-1. Законы группы проверяются полностью, если
    порядок не превышает settings.group_check_limit; для больших таблиц
    проверяется только, что таблица — латинский квадрат с единицей.

    Attributes:
        _mult (np.ndarray): Таблица умножения size × size (только для чтения).
        _identity (int): Единица.
        _inverses (np.ndarray): Обратные элементы.
        _labels (tuple[str, ...] | None): Имена элементов для вывода.

    Methods:
        mul: Произведение двух элементов.
        inv: Обратный элемент.
        power: Степень элемента.
        element_order: Порядок элемента.
        subgroup: Подгруппа на заданных элементах и её вложение.
        as_algebra: Группа как алгебра с одной бинарной операцией.
    """

    def __init__(
        self,
        mult: Sequence[Sequence[int]] | np.ndarray,
        labels: Sequence[str] | None = None,
        check_limit: int | None = None,
    ) -> None:
        """
        Инициализация FiniteGroup с проверкой законов группы.

        Args:
            mult: Квадратная таблица умножения.
            labels (Sequence[str] | None): Имена элементов.
            check_limit (int | None): Порядок, до которого проверяется ассоциативность.

        Raises:
            FinvarError: Если таблица не задаёт группу.
        """

        table = np.asarray(mult, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 1:
            raise FinvarError("Таблица умножения группы должна быть квадратной и непустой.")
        size = table.shape[0]
        if table.min() < 0 or table.max() >= size:
            raise FinvarError("Таблица умножения содержит значения вне группы.")
        reference = np.arange(size)
        if not (np.sort(table, axis=1) == reference).all() or not (
            np.sort(table, axis=0) == reference[:, None]
        ).all():
            raise FinvarError("Таблица умножения не является латинским квадратом.")

        candidates = np.flatnonzero((table == reference).all(axis=1))
        if candidates.size != 1 or not (table[:, candidates[0]] == reference).all():
            raise FinvarError("В таблице умножения нет двусторонней единицы.")
        identity = int(candidates[0])
        inverses = np.argmax(table == identity, axis=1).astype(np.int64)

        limit = settings.group_check_limit if check_limit is None else check_limit
        if size <= limit:
            for a in range(size):
                if not np.array_equal(table[table[a]], table[a][table]):
                    raise FinvarError("Умножение не ассоциативно.")

        table.flags.writeable = False
        inverses.flags.writeable = False
        self._mult = table
        self._identity = identity
        self._inverses = inverses
        if labels is not None and len(labels) != size:
            raise FinvarError("Число имён не совпадает с порядком группы.")
        self._labels = tuple(labels) if labels is not None else None

    @property
    def size(self) -> int:
        return self._mult.shape[0]

    @property
    def mult(self) -> np.ndarray:
        return self._mult

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def inverses(self) -> np.ndarray:
        return self._inverses

    @property
    def labels(self) -> tuple[str, ...] | None:
        return self._labels

    def label(self, element: int) -> str:
        return self._labels[element] if self._labels else str(element)

    def mul(self, a: int, b: int) -> int:
        return int(self._mult[a, b])

    def inv(self, a: int) -> int:
        return int(self._inverses[a])

    def product(self, elements: Iterable[int]) -> int:
        result = self._identity
        for element in elements:
            result = int(self._mult[result, element])
        return result

    def power(self, a: int, exponent: int) -> int:
        if exponent < 0:
            a, exponent = self.inv(a), -exponent
        result = self._identity
        for _ in range(exponent):
            result = int(self._mult[result, a])
        return result

    def powers(self, exponent: int) -> np.ndarray:
        """Вектор x^exponent по всем элементам x."""

        result = np.full(self.size, self._identity, dtype=np.int64)
        base = np.arange(self.size, dtype=np.int64)
        for _ in range(exponent):
            result = self._mult[result, base]
        return result

    def element_order(self, a: int) -> int:
        order, current = 1, a
        while current != self._identity:
            current = int(self._mult[current, a])
            order += 1
        return order

    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.size, dtype=np.int64)
        current = np.arange(self.size, dtype=np.int64)
        base = current.copy()
        while True:
            pending = current != self._identity
            if not pending.any():
                return orders
            current = np.where(pending, self._mult[current, base], current)
            orders += pending

    def commutator_table(self) -> np.ndarray:
        """Таблица [a, b] = a⁻¹b⁻¹ab."""

        inv = self._inverses
        return self._mult[self._mult[inv[:, None], inv[None, :]], self._mult]

    def is_abelian(self, elements: Sequence[int] | None = None) -> bool:
        if elements is None:
            return bool((self._mult == self._mult.T).all())
        block = self._mult[np.ix_(elements, elements)]
        return bool((block == block.T).all())

    def exponent_divides(self, exponent: int, elements: Sequence[int] | None = None) -> bool:
        powers = self.powers(exponent)
        selected = powers if elements is None else powers[list(elements)]
        return bool((selected == self._identity).all())

    def subgroup(self, elements: Sequence[int]) -> tuple["FiniteGroup", tuple[int, ...]]:
        """
        Строит подгруппу на заданных элементах (в порядке возрастания) и её вложение.

        Raises:
            FinvarError: Если элементы не замкнуты относительно умножения.
        """

        members = np.asarray(sorted(set(int(e) for e in elements)), dtype=np.int64)
        position = np.full(self.size, -1, dtype=np.int64)
        position[members] = np.arange(members.size)
        table = position[self._mult[np.ix_(members, members)]]
        if (table < 0).any():
            raise FinvarError("Элементы не образуют подгруппу.")
        labels = [self.label(int(e)) for e in members] if self._labels else None
        return FiniteGroup(table, labels), tuple(int(e) for e in members)

    def as_algebra(self) -> FiniteAlgebra:
        return FiniteAlgebra(
            GROUP,
            [self.size],
            [self._mult.reshape(-1)],
            [list(self._labels)] if self._labels else None,
            metadata={"identity": self._identity, "inverses": self._inverses.tolist()},
        )

    @classmethod
    def from_algebra(cls, alg: FiniteAlgebra) -> "FiniteGroup":
        size = alg.sizes[0]
        labels = alg.labels[0] if alg.labels else None
        return cls(alg.tables[0].reshape(size, size), labels)

    def __repr__(self) -> str:
        return f"FiniteGroup(size={self.size})"


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> tuple[int, ...]:
    """
    Наименьшая подгруппа, содержащая образующие.

    Замыкание строится обходом в ширину правыми умножениями на образующие;
    результат — элементы в порядке возрастания.
    """

    gens = np.asarray(sorted(set(int(g) for g in gens)), dtype=np.int64)
    found = np.zeros(G.size, dtype=bool)
    found[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while frontier.size and gens.size:
        products = np.unique(G.mult[np.ix_(frontier, gens)])
        frontier = products[~found[products]]
        found[frontier] = True
    return tuple(int(x) for x in np.flatnonzero(found))


def left_commutator(G: FiniteGroup, xs: Sequence[int]) -> int:
    """
    Левонормированный коммутатор [[x1, …, x_{k−1}], x_k], где [x, y] = x⁻¹y⁻¹xy.

    Raises:
        FinvarError: Если элементов меньше двух.
    """

    if len(xs) < 2:
        raise FinvarError("Коммутатор определён для не менее чем двух элементов.")
    result = int(xs[0])
    for x in xs[1:]:
        result = G.product([G.inv(result), G.inv(int(x)), result, int(x)])
    return result


@dataclass(frozen=True)
class NilpotencyResult:
    """
    Нижний центральный ряд и класс нильпотентности.

    Attributes:
        series (tuple[tuple[int, ...], ...]): Члены ряда γ1 ⊇ γ2 ⊇ … до стабилизации.
        nilpotent (bool): Стабилизируется ли ряд на тривиальной подгруппе.
        nilpotency_class (int | None): Класс нильпотентности (0 для тривиальной группы).
    """

    series: tuple[tuple[int, ...], ...]
    nilpotent: bool
    nilpotency_class: int | None


def nilpotency(G: FiniteGroup, elements: Sequence[int] | None = None) -> NilpotencyResult:
    """
    Вычисляет нижний центральный ряд группы (или подгруппы на элементах).

    γ_{i+1} порождается коммутаторами [a, g], a ∈ γ_i, g ∈ γ_1.
    """

    whole = np.arange(G.size) if elements is None else np.asarray(sorted(elements), dtype=np.int64)
    commutators = G.commutator_table()
    series = [tuple(int(x) for x in whole)]
    while True:
        current = np.asarray(series[-1], dtype=np.int64)
        following = subgroup_generated(G, np.unique(commutators[np.ix_(current, whole)]))
        if following == series[-1]:
            break
        series.append(following)
    nilpotent = series[-1] == (G.identity,)
    return NilpotencyResult(
        series=tuple(series),
        nilpotent=nilpotent,
        nilpotency_class=len(series) - 1 if nilpotent else None,
    )


@dataclass(frozen=True)
class ApAqResult:
    """
    Ответ на вопрос H ∈ 𝒜_p𝒜_q.

    Attributes:
        holds (bool): Принадлежность.
        normal_subgroup (tuple[int, ...]): N = ⟨коммутаторы, q-е степени⟩.
        witness (tuple[int, int] | None): Некоммутирующая пара в N или (x, x) с x^p ≠ e.
    """

    holds: bool
    normal_subgroup: tuple[int, ...]
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.holds


def in_ApAq(
    G: FiniteGroup, p: int, q: int, subgroup: Sequence[int] | None = None
) -> ApAqResult:
    """
    Проверяет, лежит ли группа (или её подгруппа) в 𝒜_p𝒜_q.

    Вербальная подгруппа N, порождённая коммутаторами и q-ми степенями,
    нормальна, и фактор по ней абелев экспоненты q; группа лежит в 𝒜_p𝒜_q
    тогда и только тогда, когда N абелева экспоненты, делящей p.

    Raises:
        NotPrime: Если p или q не простые.
    """

    require_prime(p, q)
    members = (
        np.arange(G.size) if subgroup is None else np.asarray(sorted(subgroup), dtype=np.int64)
    )
    commutators = np.unique(G.commutator_table()[np.ix_(members, members)])
    powers = np.unique(G.powers(q)[members])
    N = subgroup_generated(G, np.concatenate([commutators, powers]))

    block = G.mult[np.ix_(N, N)]
    clash = np.argwhere(block != block.T)
    if clash.size:
        a, b = clash[0]
        return ApAqResult(False, N, (N[a], N[b]))
    p_powers = G.powers(p)[list(N)]
    bad = np.flatnonzero(p_powers != G.identity)
    if bad.size:
        x = N[int(bad[0])]
        return ApAqResult(False, N, (x, x))
    return ApAqResult(True, N)


def is_group_homomorphism(G: FiniteGroup, H: FiniteGroup, image: Sequence[int]) -> bool:
    """Проверяет, что отображение элементов G → H сохраняет умножение."""

    phi = np.asarray(image, dtype=np.int64)
    return bool((phi[G.mult] == H.mult[np.ix_(phi, phi)]).all())


def require_group_homomorphism(G: FiniteGroup, H: FiniteGroup, image: Sequence[int]) -> None:
    if len(image) != G.size or not is_group_homomorphism(G, H, image):
        raise NotAHomomorphism("Отображение групп не сохраняет умножение.")
