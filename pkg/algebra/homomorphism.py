from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from config.logging_config import log
from config.settings import settings
from utils.exceptions import BudgetExceeded, SignatureMismatch, SortMismatch
from utils.utils import decode_columns


@dataclass(frozen=True)
class Homomorphism:
    """
    Отображение алгебр по сортам.

    Attributes:
        maps (tuple[tuple[int, ...], ...]): Образы элементов каждого сорта.
    """

    maps: tuple[tuple[int, ...], ...]

    def __call__(self, sort: int, element: int) -> int:
        return self.maps[sort][element]

    def arrays(self) -> list[np.ndarray]:
        return [np.asarray(m, dtype=np.int64) for m in self.maps]

    def is_injective(self) -> bool:
        return all(len(set(m)) == len(m) for m in self.maps)

    def is_onto(self, cod: FiniteAlgebra) -> bool:
        return all(len(set(m)) == size for m, size in zip(self.maps, cod.sizes))

    def compose(self, after: "Homomorphism") -> "Homomorphism":
        """Композиция: сначала self, затем after."""

        return Homomorphism(
            tuple(tuple(a[x] for x in m) for m, a in zip(self.maps, after.maps))
        )


def identity_map(alg: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(tuple(tuple(range(size)) for size in alg.sizes))


def is_homomorphism(h: Homomorphism, dom: FiniteAlgebra, cod: FiniteAlgebra) -> bool:
    """
    Проверяет, что отображение сохраняет все операции.

    Raises:
        SignatureMismatch: Если сигнатуры алгебр различаются.
        SortMismatch: Если форма отображения не совпадает с мощностями сортов.
    """

    if not dom.signature.matches(cod.signature):
        raise SignatureMismatch()
    if tuple(len(m) for m in h.maps) != dom.sizes:
        raise SortMismatch("Отображение задано не на всех элементах области.")
    maps = h.arrays()
    for sort, m in enumerate(maps):
        if m.size and (m.min() < 0 or m.max() >= cod.sizes[sort]):
            raise SortMismatch("Образ элемента лежит вне сорта.")

    for index, symbol in enumerate(dom.signature.symbols):
        dom_table = dom.tables[index]
        cod_table = cod.tables[index]
        if not symbol.arity:
            if maps[symbol.out_sort][dom_table[0]] != cod_table[0]:
                return False
            continue
        columns = decode_columns(dom_table.size, dom.shape(index))
        position = np.zeros(dom_table.size, dtype=np.int64)
        for column, sort, radix in zip(columns, symbol.arg_sorts, cod.shape(index)):
            position = position * radix + maps[sort][column]
        if not np.array_equal(cod_table[position], maps[symbol.out_sort][dom_table]):
            return False
    return True


@dataclass
class _Rule:
    arg_sorts: tuple[int, ...]
    out_sort: int
    columns: list[np.ndarray]
    results: np.ndarray
    cod_table: np.ndarray
    cod_shape: tuple[int, ...]


def _rules(dom: FiniteAlgebra, cod: FiniteAlgebra) -> list[_Rule]:
    rules = []
    for index, symbol in enumerate(dom.signature.symbols):
        table = dom.tables[index]
        rules.append(
            _Rule(
                arg_sorts=symbol.arg_sorts,
                out_sort=symbol.out_sort,
                columns=decode_columns(table.size, dom.shape(index)),
                results=table,
                cod_table=cod.tables[index],
                cod_shape=cod.shape(index),
            )
        )
    return rules


def _propagate(maps: list[np.ndarray], rules: list[_Rule], injective: bool) -> bool:
    """Достраивает вынужденные образы; False при противоречии."""

    changed = True
    while changed:
        changed = False
        for rule in rules:
            mapped = [maps[s][col] for s, col in zip(rule.arg_sorts, rule.columns)]
            if mapped:
                known = np.logical_and.reduce([m >= 0 for m in mapped])
                if not known.any():
                    continue
                position = np.zeros(int(known.sum()), dtype=np.int64)
                for m, radix in zip(mapped, rule.cod_shape):
                    position = position * radix + m[known]
                values = rule.cod_table[position]
                targets = rule.results[known]
            else:
                values = rule.cod_table[:1]
                targets = rule.results[:1]
            images = maps[rule.out_sort][targets]
            if np.any((images >= 0) & (images != values)):
                return False
            free = images < 0
            for target, value in zip(targets[free], values[free]):
                current = maps[rule.out_sort][target]
                if current < 0:
                    maps[rule.out_sort][target] = value
                    changed = True
                elif current != value:
                    return False
    if injective:
        for m in maps:
            assigned = m[m >= 0]
            if np.unique(assigned).size != assigned.size:
                return False
    return True


def find_homomorphism(
    dom: FiniteAlgebra,
    cod: FiniteAlgebra,
    partial: Sequence[Mapping[int, int]] | None = None,
    onto: bool = False,
    injective: bool = False,
    order: Sequence[Sequence[int]] | None = None,
    search_budget: int | None = None,
    progress: Callable[[int], None] | None = None,
) -> Homomorphism | None:
    """
    Ищет гомоморфизм dom → cod, продолжающий частичное отображение.

    Поиск с возвратом: элементы области перебираются сначала в порядке order
    (обычно порождающее множество), затем по сортам и по возрастанию; образы
    пробуются по возрастанию. После каждого выбора вынужденные образы
    достраиваются по таблицам операций.

    Args:
        dom (FiniteAlgebra): Область.
        cod (FiniteAlgebra): Кообласть.
        partial (Sequence[Mapping[int, int]] | None): Заданные образы по сортам.
        onto (bool): Требовать сюръективность.
        injective (bool): Требовать инъективность.
        order (Sequence[Sequence[int]] | None): Элементы, выбираемые первыми, по сортам.
        search_budget (int | None): Лимит числа узлов поиска.
        progress (Callable[[int], None] | None): Вызывается с числом узлов.

    Returns:
        Homomorphism | None: Найденный гомоморфизм или None, если его нет.

    Raises:
        SignatureMismatch: Если сигнатуры различаются.
        SortMismatch: Если частичное отображение выходит за сорта.
        BudgetExceeded: Если исчерпан лимит узлов поиска.
    """

    if not dom.signature.matches(cod.signature):
        raise SignatureMismatch()
    budget = search_budget or settings.search_budget
    sort_count = dom.signature.sort_count

    maps = [np.full(size, -1, dtype=np.int64) for size in dom.sizes]
    for sort, assignment in enumerate(partial or []):
        for element, image in assignment.items():
            if not 0 <= element < dom.sizes[sort] or not 0 <= image < cod.sizes[sort]:
                raise SortMismatch("Частичное отображение выходит за пределы сорта.")
            maps[sort][element] = image

    if onto and any(d < c for d, c in zip(dom.sizes, cod.sizes)):
        return None
    if injective and any(d > c for d, c in zip(dom.sizes, cod.sizes)):
        return None

    rules = _rules(dom, cod)
    if not _propagate(maps, rules, injective):
        return None

    sequence: list[tuple[int, int]] = []
    seen = set()
    for sort, elements in enumerate(order or [[] for _ in range(sort_count)]):
        for element in elements:
            if (sort, element) not in seen:
                seen.add((sort, element))
                sequence.append((sort, int(element)))
    for sort in range(sort_count):
        for element in range(dom.sizes[sort]):
            if (sort, element) not in seen:
                sequence.append((sort, element))

    steps = 0

    def complete(candidate: list[np.ndarray]) -> bool:
        if onto:
            return all(
                np.unique(m).size == size for m, size in zip(candidate, cod.sizes)
            )
        return True

    def search(current: list[np.ndarray], start: int) -> list[np.ndarray] | None:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"Поиск гомоморфизма: превышен лимит {budget} узлов.")
        if progress is not None and steps % 10_000 == 0:
            progress(steps)

        position = start
        while position < len(sequence):
            sort, element = sequence[position]
            if current[sort][element] < 0:
                break
            position += 1
        else:
            return current if complete(current) else None

        sort, element = sequence[position]
        used = set(current[sort][current[sort] >= 0].tolist()) if injective else set()
        for image in range(cod.sizes[sort]):
            if image in used:
                continue
            trial = [m.copy() for m in current]
            trial[sort][element] = image
            if not _propagate(trial, rules, injective):
                continue
            found = search(trial, position + 1)
            if found is not None:
                return found
        return None

    found = search(maps, 0)
    if found is None:
        log.info(f"Гомоморфизм не найден за {steps} узлов.")
        return None
    return Homomorphism(tuple(tuple(int(x) for x in m) for m in found))


def find_isomorphism(
    a: FiniteAlgebra, b: FiniteAlgebra, search_budget: int | None = None
) -> Homomorphism | None:
    """
    Ищет изоморфизм a → b; при разных мощностях сразу возвращает None.

    Raises:
        SignatureMismatch: Если сигнатуры различаются.
    """

    from algebra.closure import generating_set

    if not a.signature.matches(b.signature):
        raise SignatureMismatch()
    if a.sizes != b.sizes:
        return None
    return find_homomorphism(
        a,
        b,
        onto=True,
        injective=True,
        order=generating_set(a),
        search_budget=search_budget,
    )
