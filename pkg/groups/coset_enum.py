from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from config.logging_config import log
from config.settings import settings
from groups.finite_group import FiniteGroup
from groups.presentation import GroupPresentation, Word
from utils.exceptions import CosetOverflow, FinvarError


UNDEFINED = -1


def letter_column(letter: int) -> int:
    """Столбец таблицы для буквы: 2i для образующей i, 2i+1 для обратной."""

    return 2 * (abs(letter) - 1) + (0 if letter > 0 else 1)


@dataclass(frozen=True)
class CosetTable:
    """
    Полная таблица смежных классов тривиальной подгруппы после нормализации.

    Классы пронумерованы в порядке обхода в ширину из класса 0 (единица),
    столбцы перебираются по порядку. Действие правое: table[c, col] = c·буква.

    Attributes:
        table (np.ndarray): Матрица coset_count × 2k.
        parent (np.ndarray): Родитель класса в дереве обхода (−1 для корня).
        letter (np.ndarray): Столбец ребра от родителя.
    """

    table: np.ndarray = field(repr=False)
    parent: np.ndarray = field(repr=False)
    letter: np.ndarray = field(repr=False)

    @property
    def coset_count(self) -> int:
        return self.table.shape[0]

    def word(self, coset: int) -> Word:
        """Слово из дерева обхода, ведущее из класса 0 в данный."""

        columns = []
        while coset != 0:
            columns.append(int(self.letter[coset]))
            coset = int(self.parent[coset])
        return tuple(
            (col // 2 + 1) * (1 if col % 2 == 0 else -1) for col in reversed(columns)
        )

    def follow(self, coset: int, word: Sequence[int]) -> int:
        for letter in word:
            coset = int(self.table[coset, letter_column(letter)])
        return coset

    def generator_element(self, generator: int) -> int:
        """Класс, соответствующий образующей с номером generator (от 0)."""

        return int(self.table[0, 2 * generator])


@dataclass(frozen=True)
class PresentedGroup:
    """
    Группа, полученная перечислением смежных классов, вместе с заданием.

    Attributes:
        group (FiniteGroup): Таблица умножения.
        table (CosetTable): Таблица смежных классов.
        presentation (GroupPresentation): Исходное задание.
    """

    group: FiniteGroup
    table: CosetTable
    presentation: GroupPresentation

    @property
    def generators(self) -> tuple[int, ...]:
        return tuple(
            self.table.generator_element(i) for i in range(self.presentation.generator_count)
        )


class _SchreierGraph:
    """Граф Шрайера с объединением вершин через систему непересекающихся множеств."""

    def __init__(self, columns: int, limit: int) -> None:
        self.columns = columns
        self.limit = limit
        self.labels: list[int] = []
        self.neighbors: list[list[int]] = []
        self.add_vertex()

    def get_label(self, c: int) -> int:
        labels = self.labels
        root = c
        while labels[root] != root:
            root = labels[root]
        while labels[c] != root:
            labels[c], c = root, labels[c]
        return root

    def add_vertex(self) -> int:
        c = len(self.labels)
        if c >= self.limit:
            raise CosetOverflow(f"Число смежных классов превысило лимит {self.limit}.")
        self.labels.append(c)
        self.neighbors.append([UNDEFINED] * self.columns)
        return c

    def unify(self, c1: int, c2: int) -> None:
        # соседей склеиваемой вершины переносим отложенно, иначе строки устаревают
        pending = [(c1, c2)]
        while pending:
            c1, c2 = pending.pop()
            c1, c2 = self.get_label(c1), self.get_label(c2)
            if c1 == c2:
                continue
            c1, c2 = min(c1, c2), max(c1, c2)
            self.labels[c2] = c1
            for d in range(self.columns):
                n1 = self.neighbors[c1][d]
                n2 = self.neighbors[c2][d]
                if n1 == UNDEFINED:
                    self.neighbors[c1][d] = n2
                elif n2 != UNDEFINED:
                    pending.append((n1, n2))

    def follow_step(self, c: int, d: int) -> int:
        c = self.get_label(c)
        row = self.neighbors[c]
        if row[d] == UNDEFINED:
            row[d] = self.add_vertex()
        return self.get_label(row[d])

    def follow_path(self, c: int, columns: Sequence[int]) -> int:
        c = self.get_label(c)
        for d in columns:
            c = self.follow_step(c, d)
        return c

    def build(self, relators: Sequence[Sequence[int]]) -> None:
        to_visit = 0
        while to_visit < len(self.labels):
            c = self.get_label(to_visit)
            if c == to_visit:
                for relator in relators:
                    self.unify(self.follow_path(c, relator), c)
            to_visit += 1

    def live_rows(self) -> dict[int, list[int]]:
        if any(
            UNDEFINED in self.neighbors[c]
            for c in range(len(self.labels))
            if self.get_label(c) == c
        ):
            raise FinvarError("Перечисление завершилось с неопределёнными рёбрами.")
        return {
            c: [self.get_label(n) for n in self.neighbors[c]]
            for c in range(len(self.labels))
            if self.get_label(c) == c
        }


def _standardize(rows: dict[int, list[int]], columns: int) -> CosetTable:
    numbering = {0: 0}
    order = [0]
    parent, letter = [-1], [-1]
    for c in order:
        for d in range(columns):
            target = rows[c][d]
            if target not in numbering:
                numbering[target] = len(order)
                order.append(target)
                parent.append(numbering[c])
                letter.append(d)
    if len(order) != len(rows):
        raise FinvarError("Граф смежных классов несвязен.")
    table = np.array([[numbering[n] for n in rows[c]] for c in order], dtype=np.int64)
    table.flags.writeable = False
    return CosetTable(
        table,
        np.asarray(parent, dtype=np.int64),
        np.asarray(letter, dtype=np.int64),
    )


def _multiplication(table: CosetTable) -> np.ndarray:
    """Класс c отвечает слову w_c; c·w_d вычисляется вдоль дерева обхода."""

    size = table.coset_count
    mult = np.empty((size, size), dtype=np.int64)
    mult[:, 0] = np.arange(size)
    for d in range(1, size):
        mult[:, d] = table.table[mult[:, table.parent[d]], table.letter[d]]
    return mult


def relators_satisfied(table: CosetTable, presentation: GroupPresentation) -> bool:
    """Проверяет, что каждое соотношение замыкает путь из каждого класса."""

    start = np.arange(table.coset_count)
    for relator in presentation.relators:
        current = start
        for letter in relator:
            current = table.table[current, letter_column(letter)]
        if not np.array_equal(current, start):
            return False
    return True


def todd_coxeter(presentation: GroupPresentation, coset_limit: int | None = None) -> PresentedGroup:
    """
    Перечисляет смежные классы тривиальной подгруппы и строит таблицу
    умножения группы.

    К соотношениям добавляются слова a a⁻¹ и a⁻¹ a для каждой образующей, так
    что столбцы обратных букв согласуются склейкой вершин.

    Args:
        presentation (GroupPresentation): Задание группы.
        coset_limit (int | None): Лимит на число определённых классов.

    Returns:
        PresentedGroup: Группа, таблица классов и задание.

    Raises:
        CosetOverflow: Если лимит исчерпан до завершения перечисления.
    """

    limit = coset_limit or settings.coset_limit
    columns = 2 * presentation.generator_count
    relators = [[2 * i, 2 * i + 1] for i in range(presentation.generator_count)]
    relators += [[2 * i + 1, 2 * i] for i in range(presentation.generator_count)]
    relators += [[letter_column(x) for x in r] for r in presentation.relators if r]

    graph = _SchreierGraph(columns, limit)
    graph.build(relators)
    rows = graph.live_rows()
    log.debug(f"Определено {len(graph.labels)} классов, из них живых {len(rows)}.")

    table = _standardize(rows, columns)
    if not relators_satisfied(table, presentation):
        raise FinvarError("Таблица смежных классов не удовлетворяет соотношениям.")
    group = FiniteGroup(_multiplication(table))
    log.info(f"Перечисление смежных классов завершено: порядок группы {group.size}.")
    return PresentedGroup(group, table, presentation)
