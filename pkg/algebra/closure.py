import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from algebra.homomorphism import Homomorphism
from algebra.terms import App, Term, Var
from config.logging_config import log
from config.settings import settings
from utils.exceptions import BudgetExceeded, EmptySortUnreachable, FinvarError
from utils.utils import checked_product, decode_columns, radix_strides


@dataclass(frozen=True)
class SubUniverse:
    """
    Подуниверс алгебры: по одному подмножеству элементов на сорт.

    Attributes:
        subsets (tuple[tuple[int, ...], ...]): Элементы по сортам в порядке возрастания.
        terms (tuple[dict[int, Term], ...] | None): Представляющие термы над образующими.
    """

    subsets: tuple[tuple[int, ...], ...]
    terms: tuple[dict, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(subset) for subset in self.subsets)

    def contains(self, sort: int, element: int) -> bool:
        return element in self.subsets[sort]

    def issubset(self, other: "SubUniverse") -> bool:
        return all(set(a) <= set(b) for a, b in zip(self.subsets, other.subsets))


@dataclass(frozen=True)
class Closure:
    """
    Результат замыкания наборов образующих векторов в степени алгебры.

    Attributes:
        exponent (int): Длина векторов.
        vectors (tuple[np.ndarray, ...]): По сортам матрицы (число элементов × exponent).
        terms (tuple[tuple[Term, ...], ...]): Представляющие термы элементов.
        designations (tuple[tuple[int, ...], ...]): Номера элементов-образующих.
        steps (tuple[tuple[tuple, ...], ...]): Способ получения каждого элемента:
            ("var", переменная) или (символ, номера аргументов по сортам).
        tables (tuple[np.ndarray, ...]): Таблицы операций на найденных элементах.
    """

    exponent: int
    vectors: tuple[np.ndarray, ...]
    terms: tuple[tuple[Term, ...], ...]
    designations: tuple[tuple[int, ...], ...]
    tables: tuple[np.ndarray, ...]
    steps: tuple[tuple[tuple, ...], ...] = ()

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(terms) for terms in self.terms)

    def algebra(self, alg: FiniteAlgebra, metadata: dict | None = None) -> FiniteAlgebra:
        return FiniteAlgebra(alg.signature, self.sizes, self.tables, metadata=metadata)

    def index(self) -> tuple[dict[bytes, int], ...]:
        """Словари «байты вектора → номер элемента» по сортам."""

        return tuple(
            {row.tobytes(): i for i, row in enumerate(matrix)} for matrix in self.vectors
        )


class _Store:
    """Найденные элементы одного сорта в порядке обнаружения."""

    def __init__(self, exponent: int) -> None:
        self.exponent = exponent
        self.rows: list[np.ndarray] = []
        self.index: dict[bytes, int] = {}
        self.terms: list[Term] = []
        self.steps: list[tuple] = []
        self._matrix = np.zeros((0, exponent), dtype=np.int64)

    def add(self, row: np.ndarray, term: Term, step: tuple) -> tuple[int, bool]:
        key = row.tobytes()
        found = self.index.get(key)
        if found is not None:
            return found, False
        self.index[key] = len(self.rows)
        self.rows.append(row)
        self.terms.append(term)
        self.steps.append(step)
        return len(self.rows) - 1, True

    def matrix(self) -> np.ndarray:
        if self._matrix.shape[0] != len(self.rows):
            self._matrix = (
                np.vstack(self.rows)
                if self.rows
                else np.zeros((0, self.exponent), dtype=np.int64)
            )
        return self._matrix

    def __len__(self) -> int:
        return len(self.rows)


def power_closure(
    alg: FiniteAlgebra,
    generator_vectors: Sequence[Sequence[Sequence[int]]],
    exponent: int,
    element_budget: int | None = None,
    allow_empty: bool = False,
    chunk_cells: int = 1 << 22,
) -> Closure:
    """
    Замыкает наборы векторов степени alg^exponent относительно всех операций.

    Степень не строится явно: операции применяются покоординатно к найденным
    векторам. Обход идёт раундами; в каждом раунде для каждого символа
    перебираются только наборы аргументов, содержащие элемент, найденный на
    предыдущем раунде (первая такая позиция фиксируется, предыдущие позиции
    берутся из старых элементов). Порядок обнаружения: раунд, символ, позиция
    нового аргумента, наборы аргументов в смешанной системе счисления.

    Args:
        alg (FiniteAlgebra): Алгебра-основа.
        generator_vectors (Sequence): По сортам списки векторов-образующих.
        exponent (int): Длина векторов.
        element_budget (int | None): Лимит общего числа элементов.
        allow_empty (bool): Допускать пустые сорта в результате.
        chunk_cells (int): Ориентировочный размер порции вычислений в ячейках.

    Returns:
        Closure: Найденные элементы, термы и таблицы операций.

    Raises:
        BudgetExceeded: Если число элементов превышает лимит.
        EmptySortUnreachable: Если какой-либо сорт остаётся пустым.
    """

    budget = element_budget or settings.element_budget
    signature = alg.signature
    sort_count = signature.sort_count
    if len(generator_vectors) != sort_count:
        raise FinvarError("Образующие должны быть заданы для каждого сорта.")

    stores = [_Store(exponent) for _ in range(sort_count)]
    designations: list[list[int]] = [[] for _ in range(sort_count)]
    entries: list[list[tuple[list[np.ndarray], np.ndarray]]] = [
        [] for _ in signature.symbols
    ]

    def total() -> int:
        return sum(len(store) for store in stores)

    for sort, vectors in enumerate(generator_vectors):
        for i, vector in enumerate(vectors):
            row = np.asarray(vector, dtype=np.int64).reshape(exponent)
            if row.size and (row.min() < 0 or row.max() >= alg.sizes[sort]):
                raise FinvarError(f"Образующая {i} сорта {sort} содержит значения вне сорта.")
            found, _ = stores[sort].add(row, Var(sort, i), ("var", Var(sort, i)))
            designations[sort].append(found)

    for symbol_index, symbol in enumerate(signature.symbols):
        if symbol.arity:
            continue
        row = np.full(exponent, alg.tables[symbol_index][0], dtype=np.int64)
        found, _ = stores[symbol.out_sort].add(
            row, App(symbol_index, ()), (symbol_index, ())
        )
        entries[symbol_index].append(([], np.array([found], dtype=np.int64)))

    if total() > budget:
        raise BudgetExceeded(f"Замыкание: {total()} элементов превышает лимит {budget}.")

    log.info(
        f"Замыкание в степени {exponent}: старт с {[len(s) for s in stores]} элементов."
    )

    old = [0] * sort_count
    rounds = 0
    while True:
        current = [len(store) for store in stores]
        if all(c == o for c, o in zip(current, old)):
            break
        rounds += 1
        matrices = [store.matrix() for store in stores]

        for symbol_index, symbol in enumerate(signature.symbols):
            if not symbol.arity:
                continue
            table = alg.tables[symbol_index]
            shape = alg.shape(symbol_index)
            value_strides = radix_strides(shape)
            out_store = stores[symbol.out_sort]

            for j, new_sort in enumerate(symbol.arg_sorts):
                if current[new_sort] == old[new_sort]:
                    continue
                ranges = []
                for i, sort in enumerate(symbol.arg_sorts):
                    if i < j:
                        ranges.append((0, old[sort]))
                    elif i == j:
                        ranges.append((old[sort], current[sort]))
                    else:
                        ranges.append((0, current[sort]))
                lengths = [stop - start for start, stop in ranges]
                count = math.prod(lengths)
                if not count:
                    continue
                step = max(1, chunk_cells // max(1, exponent))
                strides = radix_strides(lengths)

                for chunk_start in range(0, count, step):
                    codes = np.arange(chunk_start, min(count, chunk_start + step), dtype=np.int64)
                    arg_ids = [
                        (codes // stride) % length + start
                        for stride, length, (start, _) in zip(strides, lengths, ranges)
                    ]
                    position = np.zeros((codes.size, exponent), dtype=np.int64)
                    for ids, sort, weight in zip(arg_ids, symbol.arg_sorts, value_strides):
                        position += matrices[sort][ids] * weight
                    values = table[position]

                    results = np.empty(codes.size, dtype=np.int64)
                    for k in range(codes.size):
                        row = values[k]
                        found = out_store.index.get(row.tobytes())
                        if found is None:
                            children = tuple(
                                stores[sort].terms[int(ids[k])]
                                for ids, sort in zip(arg_ids, symbol.arg_sorts)
                            )
                            origin = tuple(
                                (sort, int(ids[k])) for ids, sort in zip(arg_ids, symbol.arg_sorts)
                            )
                            found, _ = out_store.add(
                                row.copy(), App(symbol_index, children), (symbol_index, origin)
                            )
                            if total() > budget:
                                log.warning(f"Замыкание прервано: превышен лимит {budget} элементов.")
                                raise BudgetExceeded(
                                    f"Замыкание: число элементов превышает лимит {budget}."
                                )
                        results[k] = found
                    entries[symbol_index].append((arg_ids, results))
        old = current

    sizes = [len(store) for store in stores]
    empty = [signature.sort_names[s] for s, size in enumerate(sizes) if not size]
    if empty and not allow_empty:
        raise EmptySortUnreachable(f"Замыкание оставляет пустыми сорта {empty}.")

    tables = []
    for symbol_index, symbol in enumerate(signature.symbols):
        shape = [sizes[sort] for sort in symbol.arg_sorts]
        table = np.zeros(math.prod(shape), dtype=np.int64)
        for arg_ids, results in entries[symbol_index]:
            position = np.zeros(results.size, dtype=np.int64)
            for ids, radix in zip(arg_ids, shape):
                position = position * radix + ids
            table[position] = results
        tables.append(table)

    log.info(f"Замыкание завершено за {rounds} раундов: {sizes} элементов.")
    return Closure(
        exponent=exponent,
        vectors=tuple(store.matrix() for store in stores),
        terms=tuple(tuple(store.terms) for store in stores),
        designations=tuple(tuple(d) for d in designations),
        tables=tuple(tables),
        steps=tuple(tuple(store.steps) for store in stores),
    )


def _normalize_gens(alg: FiniteAlgebra, gens: Sequence[Iterable[int]]) -> list[list[int]]:
    if len(gens) != alg.signature.sort_count:
        raise FinvarError("Образующие должны быть заданы для каждого сорта.")
    normalized = []
    for sort, elements in enumerate(gens):
        elements = sorted({int(e) for e in elements})
        if any(not 0 <= e < alg.sizes[sort] for e in elements):
            raise FinvarError(f"Образующие сорта {sort} выходят за пределы универсума.")
        normalized.append(elements)
    return normalized


def generate_subalgebra(
    alg: FiniteAlgebra,
    gens: Sequence[Iterable[int]],
    with_terms: bool = False,
    element_budget: int | None = None,
) -> SubUniverse:
    """
    Строит наименьший подуниверс, содержащий образующие.

    Образующие каждого сорта упорядочиваются по возрастанию; i-я образующая
    сорта s соответствует переменной Var(s, i) в представляющих термах.

    Args:
        alg (FiniteAlgebra): Алгебра.
        gens (Sequence[Iterable[int]]): Образующие по сортам.
        with_terms (bool): Сохранить представляющие термы.
        element_budget (int | None): Лимит числа элементов.

    Returns:
        SubUniverse: Подуниверс (с термами, если запрошены).

    Raises:
        EmptySortUnreachable: Если замыкание оставляет сорт пустым.
    """

    normalized = _normalize_gens(alg, gens)
    closure = power_closure(
        alg, [[[e] for e in elements] for elements in normalized], 1, element_budget
    )
    return _as_subuniverse(closure, with_terms)


def _as_subuniverse(closure: Closure, with_terms: bool) -> SubUniverse:
    subsets = tuple(
        tuple(sorted(int(x) for x in matrix[:, 0])) for matrix in closure.vectors
    )
    terms = None
    if with_terms:
        terms = tuple(
            {int(row[0]): term for row, term in zip(matrix, sort_terms)}
            for matrix, sort_terms in zip(closure.vectors, closure.terms)
        )
    return SubUniverse(subsets, terms)


def _closure_sets(alg: FiniteAlgebra, gens: Sequence[Sequence[int]]) -> list[set[int]]:
    closure = power_closure(
        alg, [[[e] for e in elements] for elements in gens], 1, allow_empty=True
    )
    return [set(int(x) for x in matrix[:, 0]) for matrix in closure.vectors]


def is_subuniverse(alg: FiniteAlgebra, subsets: Sequence[Iterable[int]]) -> bool:
    """Проверяет замкнутость набора подмножеств относительно всех операций."""

    subsets = [sorted(set(int(x) for x in subset)) for subset in subsets]
    for index, symbol in enumerate(alg.signature.symbols):
        view = alg.table_view(index)
        if not symbol.arity:
            if int(view[0]) not in subsets[symbol.out_sort]:
                return False
            continue
        axes = [np.asarray(subsets[sort], dtype=np.int64) for sort in symbol.arg_sorts]
        if any(axis.size == 0 for axis in axes):
            continue
        values = view[np.ix_(*axes)]
        if not np.isin(values, subsets[symbol.out_sort]).all():
            return False
    return True


def subalgebra(alg: FiniteAlgebra, sub: SubUniverse) -> tuple[FiniteAlgebra, Homomorphism]:
    """
    Строит подалгебру на подуниверсе и вложение в исходную алгебру.

    Элементы подалгебры нумеруются в порядке возрастания исходных номеров.

    Returns:
        tuple[FiniteAlgebra, Homomorphism]: Подалгебра и вложение.

    Raises:
        FinvarError: Если подмножества не замкнуты относительно операций.
    """

    if not is_subuniverse(alg, sub.subsets):
        raise FinvarError("Подмножества не образуют подуниверс.")
    positions = []
    for sort, subset in enumerate(sub.subsets):
        inverse = np.full(alg.sizes[sort], -1, dtype=np.int64)
        inverse[list(subset)] = np.arange(len(subset))
        positions.append(inverse)

    tables = []
    for index, symbol in enumerate(alg.signature.symbols):
        view = alg.table_view(index)
        if not symbol.arity:
            tables.append(positions[symbol.out_sort][view])
            continue
        axes = [np.asarray(sub.subsets[sort], dtype=np.int64) for sort in symbol.arg_sorts]
        tables.append(positions[symbol.out_sort][view[np.ix_(*axes)]].reshape(-1))

    labels = None
    if alg.labels is not None:
        labels = [[alg.labels[s][e] for e in subset] for s, subset in enumerate(sub.subsets)]
    result = FiniteAlgebra(
        alg.signature, sub.sizes, tables, labels, metadata={"construction": "subalgebra"}
    )
    inclusion = Homomorphism(tuple(tuple(subset) for subset in sub.subsets))
    return result, inclusion


def generating_set(alg: FiniteAlgebra) -> tuple[tuple[int, ...], ...]:
    """
    Находит небольшое порождающее множество жадным просмотром.

    Элементы просматриваются по сортам и по возрастанию; элемент добавляется,
    если он не лежит в замыкании уже выбранных. Затем лишние образующие
    удаляются повторным просмотром.

    Returns:
        tuple[tuple[int, ...], ...]: Образующие по сортам.
    """

    sort_count = alg.signature.sort_count
    chosen: list[list[int]] = [[] for _ in range(sort_count)]
    covered = _closure_sets(alg, chosen)
    for sort in range(sort_count):
        for element in range(alg.sizes[sort]):
            if element not in covered[sort]:
                chosen[sort].append(element)
                covered = _closure_sets(alg, chosen)

    for sort in range(sort_count):
        for element in list(chosen[sort]):
            trial = [list(c) for c in chosen]
            trial[sort].remove(element)
            reached = _closure_sets(alg, trial)
            if all(len(reached[s]) == alg.sizes[s] for s in range(sort_count)):
                chosen = trial
    return tuple(tuple(c) for c in chosen)


@dataclass(frozen=True)
class FreeAlgebra:
    """
    Свободная алгебра многообразия V(A) на заданных образующих.

    Attributes:
        algebra (FiniteAlgebra): Свободная алгебра.
        variables (tuple[Var, ...]): Образующие переменные по сорту и номеру.
        designations (dict[Var, int]): Элементы, отвечающие переменным.
        terms (tuple[tuple[Term, ...], ...]): Представляющие термы элементов.
        vectors (tuple[np.ndarray, ...]): Векторы значений элементов на всех подстановках.
        assignments (int): Число подстановок.
        steps (tuple): Способ получения каждого элемента, как в Closure.
    """

    algebra: FiniteAlgebra
    variables: tuple[Var, ...]
    designations: dict
    terms: tuple[tuple[Term, ...], ...]
    vectors: tuple[np.ndarray, ...]
    assignments: int
    steps: tuple = ()


def free_algebra(
    alg: FiniteAlgebra,
    gens_per_sort: Sequence[int],
    element_budget: int | None = None,
    assignment_budget: int | None = None,
) -> FreeAlgebra:
    """
    Строит свободную алгебру V(A) на gens_per_sort образующих каждого сорта.

    Элементы свободной алгебры — векторы значений термов на всех подстановках
    образующих в A (подстановки в лексикографическом порядке, переменные
    упорядочены по сорту и номеру). Образующим соответствуют векторы проекций.

    Args:
        alg (FiniteAlgebra): Алгебра A.
        gens_per_sort (Sequence[int]): Число образующих каждого сорта.
        element_budget (int | None): Лимит числа элементов.
        assignment_budget (int | None): Лимит числа подстановок.

    Returns:
        FreeAlgebra: Свободная алгебра с образующими и термами.

    Raises:
        EmptySortUnreachable: Если какой-либо сорт остаётся пустым.
        BudgetExceeded: Если превышен лимит элементов или подстановок.
    """

    if len(gens_per_sort) != alg.signature.sort_count:
        raise FinvarError("Число образующих должно быть задано для каждого сорта.")
    variables = tuple(
        Var(sort, i) for sort, count in enumerate(gens_per_sort) for i in range(count)
    )
    radices = [alg.sizes[var.sort] for var in variables]
    count = checked_product(
        radices, assignment_budget or settings.assignment_budget, "Число подстановок"
    )
    log.info(f"Свободная алгебра на {list(gens_per_sort)} образующих: {count} подстановок.")
    columns = decode_columns(count, radices)
    generator_vectors: list[list[np.ndarray]] = [[] for _ in gens_per_sort]
    for var, column in zip(variables, columns):
        generator_vectors[var.sort].append(column)

    closure = power_closure(alg, generator_vectors, count, element_budget)
    designations = {
        Var(sort, i): element
        for sort, elements in enumerate(closure.designations)
        for i, element in enumerate(elements)
    }
    algebra = closure.algebra(
        alg,
        metadata={"construction": "free", "generators": list(gens_per_sort)},
    )
    return FreeAlgebra(
        algebra=algebra,
        variables=variables,
        designations=designations,
        terms=closure.terms,
        vectors=closure.vectors,
        assignments=count,
        steps=closure.steps,
    )
