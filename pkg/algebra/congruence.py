from dataclasses import dataclass
from typing import Sequence

import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from algebra.homomorphism import Homomorphism
from utils.exceptions import NotACongruence, SortMismatch


def normalize_blocks(labels: Sequence[int]) -> np.ndarray:
    """Перенумеровывает блоки в порядке первого вхождения."""

    mapping: dict[int, int] = {}
    result = np.empty(len(labels), dtype=np.int64)
    for i, label in enumerate(labels):
        result[i] = mapping.setdefault(int(label), len(mapping))
    return result


@dataclass(frozen=True)
class Congruence:
    """
    Разбиения универсумов по сортам: номер блока для каждого элемента.

    Attributes:
        partitions (tuple[np.ndarray, ...]): Нормализованные номера блоков.
    """

    partitions: tuple[np.ndarray, ...]

    @classmethod
    def from_labels(cls, labels: Sequence[Sequence[int]]) -> "Congruence":
        return cls(tuple(normalize_blocks(sort_labels) for sort_labels in labels))

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[Sequence[int]]], sizes: Sequence[int]) -> "Congruence":
        """
        Строит разбиение по спискам блоков.

        Raises:
            SortMismatch: Если блоки не покрывают универсум ровно один раз.
        """

        labels = []
        for sort_blocks, size in zip(blocks, sizes):
            sort_labels = np.full(size, -1, dtype=np.int64)
            for b, block in enumerate(sort_blocks):
                for element in block:
                    if sort_labels[element] >= 0:
                        raise SortMismatch(f"Элемент {element} входит в несколько блоков.")
                    sort_labels[element] = b
            if (sort_labels < 0).any():
                raise SortMismatch("Блоки не покрывают универсум.")
            labels.append(sort_labels)
        return cls.from_labels(labels)

    @property
    def block_counts(self) -> tuple[int, ...]:
        return tuple(int(p.max()) + 1 if p.size else 0 for p in self.partitions)

    def representatives(self) -> list[np.ndarray]:
        """Наименьший элемент каждого блока по сортам."""

        reps = []
        for partition, count in zip(self.partitions, self.block_counts):
            rep = np.full(count, -1, dtype=np.int64)
            for element in range(partition.size - 1, -1, -1):
                rep[partition[element]] = element
            reps.append(rep)
        return reps


def identity_congruence(alg: FiniteAlgebra) -> Congruence:
    return Congruence(tuple(np.arange(size, dtype=np.int64) for size in alg.sizes))


def total_congruence(alg: FiniteAlgebra) -> Congruence:
    return Congruence(tuple(np.zeros(size, dtype=np.int64) for size in alg.sizes))


def kernel(h: Homomorphism) -> Congruence:
    return Congruence.from_labels(h.maps)


def is_congruence(alg: FiniteAlgebra, partitions: Congruence | Sequence[Sequence[int]]) -> bool:
    """
    Проверяет согласованность разбиения со всеми операциями.

    Достаточно проверить замену одного аргумента на представителя его блока:
    общий случай получается цепочкой таких замен.
    """

    theta = partitions if isinstance(partitions, Congruence) else Congruence.from_labels(partitions)
    reps = theta.representatives()
    for index, symbol in enumerate(alg.signature.symbols):
        if not symbol.arity:
            continue
        view = alg.table_view(index)
        out_blocks = theta.partitions[symbol.out_sort]
        base = out_blocks[view]
        for axis, sort in enumerate(symbol.arg_sorts):
            replaced = np.take(view, reps[sort][theta.partitions[sort]], axis=axis)
            if not np.array_equal(out_blocks[replaced], base):
                return False
    return True


def quotient(alg: FiniteAlgebra, theta: Congruence) -> tuple[FiniteAlgebra, Homomorphism]:
    """
    Строит факторалгебру и каноническую проекцию.

    Блоки нумеруются в порядке первого вхождения элементов.

    Returns:
        tuple[FiniteAlgebra, Homomorphism]: Факторалгебра и проекция.

    Raises:
        NotACongruence: Если разбиение не согласовано с операциями.
    """

    if tuple(p.size for p in theta.partitions) != alg.sizes:
        raise SortMismatch("Разбиение задано не на всех элементах.")
    if not is_congruence(alg, theta):
        raise NotACongruence()
    reps = theta.representatives()
    tables = []
    for index, symbol in enumerate(alg.signature.symbols):
        view = alg.table_view(index)
        out_blocks = theta.partitions[symbol.out_sort]
        if not symbol.arity:
            tables.append(out_blocks[view])
            continue
        grid = view[np.ix_(*[reps[sort] for sort in symbol.arg_sorts])]
        tables.append(out_blocks[grid].reshape(-1))
    result = FiniteAlgebra(
        alg.signature, theta.block_counts, tables, metadata={"construction": "quotient"}
    )
    projection = Homomorphism(tuple(tuple(int(b) for b in p) for p in theta.partitions))
    return result, projection
