import math
from typing import Sequence

import numpy as np

from algebra.signature import Signature
from utils.exceptions import FinvarError, SignatureMismatch, SortMismatch
from utils.utils import radix_strides


class FiniteAlgebra:
    """
    Конечная многосортная алгебра с плотными таблицами операций.

    Элементы каждого сорта — числа 0..size-1. Таблица символа хранится построчно,
    первый аргумент старший; метки элементов используются только при выводе.

    Attributes:
        _signature (Signature): Сигнатура алгебры.
        _sizes (tuple[int, ...]): Мощности универсумов по сортам.
        _tables (tuple[np.ndarray, ...]): Плоские таблицы операций.
        _labels (tuple[tuple[str, ...], ...] | None): Метки элементов по сортам.
        _metadata (dict): Дополнительные сведения (происхождение, нули).

    Methods:
        apply: Значение операции на наборе аргументов.
        table_view: Таблица операции в форме многомерного массива.
        label: Метка элемента.
    """

    def __init__(
        self,
        signature: Signature,
        sizes: Sequence[int],
        tables: Sequence[Sequence[int] | np.ndarray],
        labels: Sequence[Sequence[str]] | None = None,
        metadata: dict | None = None,
    ) -> None:
        """
        Инициализация FiniteAlgebra с проверкой формы и значений таблиц.

        Args:
            signature (Signature): Сигнатура.
            sizes (Sequence[int]): Мощности сортов, каждая не меньше 1.
            tables (Sequence): По одной плоской таблице на символ.
            labels (Sequence[Sequence[str]] | None): Метки элементов по сортам.
            metadata (dict | None): Дополнительные сведения.

        Raises:
            SortMismatch: Если число сортов или мощности заданы неверно.
            FinvarError: Если таблица имеет неверную длину или значения вне сорта.
        """

        self._signature = signature
        self._sizes = tuple(int(size) for size in sizes)
        if len(self._sizes) != signature.sort_count:
            raise SortMismatch("Число мощностей не совпадает с числом сортов.")
        if any(size < 1 for size in self._sizes):
            raise SortMismatch(
                f"Все универсумы должны быть непустыми, получено {self._sizes}."
            )
        if len(tables) != len(signature.symbols):
            raise FinvarError("Число таблиц не совпадает с числом символов.")

        prepared = []
        for symbol, table in zip(signature.symbols, tables):
            array = np.asarray(table, dtype=np.int64).reshape(-1).copy()
            expected = math.prod(self._sizes[sort] for sort in symbol.arg_sorts)
            if array.size != expected:
                raise FinvarError(
                    f"Таблица символа {symbol.name} содержит {array.size} значений "
                    f"вместо {expected}."
                )
            out_size = self._sizes[symbol.out_sort]
            if array.size and (array.min() < 0 or array.max() >= out_size):
                raise FinvarError(
                    f"Таблица символа {symbol.name} содержит значения вне сорта."
                )
            array.flags.writeable = False
            prepared.append(array)
        self._tables = tuple(prepared)

        if labels is not None:
            labels = tuple(tuple(str(x) for x in sort_labels) for sort_labels in labels)
            if tuple(len(sort_labels) for sort_labels in labels) != self._sizes:
                raise FinvarError("Число меток не совпадает с мощностями сортов.")
        self._labels = labels
        self._metadata = dict(metadata or {})

    @property
    def signature(self) -> Signature:
        return self._signature

    @property
    def sizes(self) -> tuple[int, ...]:
        return self._sizes

    @property
    def tables(self) -> tuple[np.ndarray, ...]:
        return self._tables

    @property
    def labels(self) -> tuple[tuple[str, ...], ...] | None:
        return self._labels

    @property
    def metadata(self) -> dict:
        return self._metadata

    @property
    def total_size(self) -> int:
        return sum(self._sizes)

    def shape(self, symbol: int) -> tuple[int, ...]:
        """Размерности таблицы символа по аргументам."""

        return tuple(self._sizes[s] for s in self._signature.symbols[symbol].arg_sorts)

    def table_view(self, symbol: int) -> np.ndarray:
        """
        Возвращает таблицу символа как многомерный массив (только для чтения).

        Для нульарного символа возвращается массив из одного значения.
        """

        shape = self.shape(symbol)
        if not shape:
            return self._tables[symbol]
        return self._tables[symbol].reshape(shape)

    def apply(self, symbol: int, args: Sequence[int]) -> int:
        """
        Вычисляет значение операции на наборе аргументов.

        Args:
            symbol (int): Номер символа.
            args (Sequence[int]): Аргументы.

        Returns:
            int: Значение операции.
        """

        shape = self.shape(symbol)
        position = 0
        for arg, radix in zip(args, shape):
            position = position * radix + int(arg)
        return int(self._tables[symbol][position])

    def label(self, sort: int, element: int) -> str:
        if self._labels is None:
            return str(element)
        return self._labels[sort][element]

    def with_metadata(self, **entries) -> "FiniteAlgebra":
        """Возвращает копию алгебры с дополненными метаданными."""

        metadata = dict(self._metadata)
        metadata.update(entries)
        return FiniteAlgebra(
            self._signature, self._sizes, self._tables, self._labels, metadata
        )

    def same_tables(self, other: "FiniteAlgebra") -> bool:
        return (
            self._signature.matches(other.signature)
            and self._sizes == other.sizes
            and all(np.array_equal(a, b) for a, b in zip(self._tables, other.tables))
        )

    def __repr__(self) -> str:
        return f"FiniteAlgebra(sizes={self._sizes}, symbols={[s.name for s in self._signature.symbols]})"


def direct_product(algebras: Sequence[FiniteAlgebra]) -> FiniteAlgebra:
    """
    Строит прямое произведение алгебр одной сигнатуры.

    Элемент произведения кодируется в смешанной системе счисления, первый
    сомножитель старший.

    Args:
        algebras (Sequence[FiniteAlgebra]): Непустой список сомножителей.

    Returns:
        FiniteAlgebra: Произведение.

    Raises:
        SignatureMismatch: Если список пуст или сигнатуры различаются.
    """

    if not algebras:
        raise SignatureMismatch("Произведение пустого списка алгебр не определено.")
    signature = algebras[0].signature
    if any(not signature.matches(alg.signature) for alg in algebras):
        raise SignatureMismatch("Сомножители заданы в разных сигнатурах.")

    sort_count = signature.sort_count
    radices = [[alg.sizes[sort] for alg in algebras] for sort in range(sort_count)]
    strides = [radix_strides(r) for r in radices]
    sizes = [math.prod(r) for r in radices]

    tables = []
    for index, symbol in enumerate(signature.symbols):
        arg_shape = tuple(sizes[sort] for sort in symbol.arg_sorts)
        count = math.prod(arg_shape)
        if arg_shape:
            grids = np.indices(arg_shape, dtype=np.int64).reshape(len(arg_shape), -1)
        else:
            grids = np.zeros((0, 1), dtype=np.int64)
        result = np.zeros(count, dtype=np.int64)
        out = symbol.out_sort
        for k, alg in enumerate(algebras):
            components = tuple(
                (grids[j] // strides[sort][k]) % radices[sort][k]
                for j, sort in enumerate(symbol.arg_sorts)
            )
            view = alg.table_view(index)
            values = view[components] if components else np.full(count, view[0])
            result += values * strides[out][k]
        tables.append(result)

    return FiniteAlgebra(signature, sizes, tables, metadata={"construction": "product"})


def power(alg: FiniteAlgebra, exponent: int) -> FiniteAlgebra:
    return direct_product([alg] * exponent)
