from dataclasses import dataclass, field

import numpy as np

from groups.catalog import PermutationGroup
from groups.finite_group import FiniteGroup
from utils.exceptions import ActionMismatch


@dataclass(frozen=True)
class GroupAction:
    """
    Левое действие конечной группы на множестве {0, …, set_size-1}.

    Attributes:
        group (FiniteGroup): Действующая группа.
        set_size (int): Мощность множества.
        act (np.ndarray): Таблица group.size × set_size.
    """

    group: FiniteGroup
    set_size: int
    act: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        table = np.asarray(self.act, dtype=np.int64).reshape(self.group.size, self.set_size)
        if self.set_size < 1:
            raise ActionMismatch("Множество действия должно быть непустым.")
        if table.min() < 0 or table.max() >= self.set_size:
            raise ActionMismatch("Таблица действия содержит значения вне множества.")
        if not (table[self.group.identity] == np.arange(self.set_size)).all():
            raise ActionMismatch("Единица группы действует нетождественно.")
        # act(gh, s) = act(g, act(h, s)) для всех g, h, s
        composed = table[:, table]
        if not np.array_equal(table[self.group.mult], composed):
            raise ActionMismatch("Таблица не задаёт действие данной группы.")
        table.flags.writeable = False
        object.__setattr__(self, "act", table)

    def __call__(self, g: int, s: int) -> int:
        return int(self.act[g, s])

    def orbit(self, s: int) -> tuple[int, ...]:
        return tuple(sorted(set(int(x) for x in self.act[:, s])))

    def kernel(self) -> tuple[int, ...]:
        """Элементы, действующие тождественно."""

        fixed = (self.act == np.arange(self.set_size)).all(axis=1)
        return tuple(int(g) for g in np.flatnonzero(fixed))


def is_faithful(action: GroupAction) -> bool:
    """Действие точно, если тождественно действует только единица."""

    return action.kernel() == (action.group.identity,)


def natural_action(group: PermutationGroup) -> GroupAction:
    act = np.array(group.permutations, dtype=np.int64)
    return GroupAction(group, group.degree, act)


def regular_action(group: FiniteGroup) -> GroupAction:
    """Действие левыми умножениями на самой группе."""

    return GroupAction(group, group.size, group.mult.copy())


def trivial_action(group: FiniteGroup, set_size: int = 1) -> GroupAction:
    act = np.tile(np.arange(set_size, dtype=np.int64), (group.size, 1))
    return GroupAction(group, set_size, act)
