from dataclasses import dataclass

import numpy as np

from algebra.finite_algebra import FiniteAlgebra, power
from algebra.homomorphism import Homomorphism, is_homomorphism
from algebra.signature import TAU
from config.logging_config import log
from groups.action import GroupAction, is_faithful, regular_action
from groups.finite_group import FiniteGroup
from groups.morphisms import group_power
from utils.exceptions import ActionMismatch, FinvarError
from utils.utils import decode_mixed, encode_mixed


@dataclass(frozen=True)
class ActionAlgebra:
    """
    Двухсортная алгебра A(G, S, α) с операцией s: G × S → S.

    Attributes:
        algebra (FiniteAlgebra): Алгебра в сигнатуре τ.
        action (GroupAction): Действие, по которому построена алгебра.
        faithful (bool): Точно ли действие.
    """

    algebra: FiniteAlgebra
    action: GroupAction
    faithful: bool

    @property
    def group(self) -> FiniteGroup:
        return self.action.group

    @property
    def set_size(self) -> int:
        return self.action.set_size


def build_action_algebra(G: FiniteGroup, act: GroupAction, set_labels: list[str] | None = None) -> ActionAlgebra:
    """
    Строит A(G, S, α) по действию группы.

    Неточное действие допускается: в алгебру записывается признак, в журнал
    выводится предупреждение.

    Args:
        G (FiniteGroup): Группа.
        act (GroupAction): Действие этой группы.
        set_labels (list[str] | None): Метки точек; по умолчанию 1..|S|.

    Returns:
        ActionAlgebra: Алгебра с сортами (|G|, |S|).

    Raises:
        ActionMismatch: Если действие задано для другой группы.
    """

    if act.group is not G and not np.array_equal(act.group.mult, G.mult):
        raise ActionMismatch()
    faithful = is_faithful(act)
    if not faithful:
        log.warning(f"Действие группы порядка {G.size} на {act.set_size} точках не точно.")
    group_labels = list(G.labels) if G.labels else [str(g) for g in range(G.size)]
    points = set_labels or [str(i + 1) for i in range(act.set_size)]
    algebra = FiniteAlgebra(
        TAU,
        [G.size, act.set_size],
        [act.act.reshape(-1)],
        [group_labels, points],
        metadata={"construction": "action", "faithful": faithful},
    )
    return ActionAlgebra(algebra, act, faithful)


def build_L(H: FiniteGroup, r: int) -> ActionAlgebra:
    """
    Строит L(H, r): H действует левыми умножениями на r копиях себя.

    Элемент второго сорта (i, k) имеет номер i·|H| + k; s(h, (i, k)) = (i, hk).

    Raises:
        FinvarError: Если r < 1.
    """

    if r < 1:
        raise FinvarError("Число копий r должно быть положительным.")
    copies = np.arange(r)[None, :, None] * H.size
    act = (copies + H.mult[:, None, :]).reshape(H.size, r * H.size)
    labels = [f"({i},{H.label(k)})" for i in range(r) for k in range(H.size)]
    result = build_action_algebra(H, GroupAction(H, r * H.size, act), labels)
    metadata = dict(result.algebra.metadata, construction="L", copies=r)
    return ActionAlgebra(result.algebra.with_metadata(**metadata), result.action, result.faithful)


def regular_algebra(H: FiniteGroup) -> ActionAlgebra:
    """L(H, 1), собранная из регулярного действия."""

    return build_action_algebra(H, regular_action(H), [H.label(k) for k in range(H.size)])


def delta_r_embedding(A: ActionAlgebra) -> tuple[FiniteAlgebra, FiniteAlgebra, Homomorphism]:
    """
    Вложение (Δ, R) алгебры L(G, 1) в A(G, S, α)^S.

    Δ(g) — постоянный набор со значением g, R(g) — набор (α(g, s))_{s ∈ S}.
    Вложение проверяется как инъективный гомоморфизм.

    Returns:
        tuple: L(G, 1), A^S и вложение.

    Raises:
        FinvarError: Если отображение не является вложением (действие не точно).
    """

    G, size = A.group, A.set_size
    L = build_L(G, 1).algebra
    AS = power(A.algebra, size)
    radices_1, radices_2 = [G.size] * size, [size] * size
    sort_1 = tuple(encode_mixed([g] * size, radices_1) for g in range(G.size))
    sort_2 = tuple(encode_mixed(A.action.act[g], radices_2) for g in range(G.size))
    embedding = Homomorphism((sort_1, sort_2))
    if not (embedding.is_injective() and is_homomorphism(embedding, L, AS)):
        raise FinvarError("Отображение (Δ, R) не является вложением.")
    return L, AS, embedding


def diagonal_orbit_representatives(H: FiniteGroup, r: int) -> list[tuple[int, ...]]:
    """
    Представители r различных орбит диагонали H на H^r.

    Первая координата — единица, остальные — разряды номера i по основанию |H|
    (разряд j задаёт j-й элемент H), поэтому орбиты различны.

    Raises:
        FinvarError: Если у H^r меньше r диагональных орбит.
    """

    if r > 1 and H.size ** (r - 1) < r:
        raise FinvarError(f"У H^{r} меньше {r} орбит диагонали.")
    return [(H.identity,) + decode_mixed(i, [H.size] * (r - 1)) for i in range(r)]


def copies_embedding(H: FiniteGroup, r: int) -> tuple[ActionAlgebra, ActionAlgebra, Homomorphism]:
    """
    Вложение L(H, r) в L(H^r, 1).

    Первый сорт уходит в диагональ, копия i отождествляется с орбитой
    диагонали, содержащей u_i: (i, h) ↦ h·u_i покоординатно.

    Returns:
        tuple: L(H, r), L(H^r, 1) и вложение.
    """

    source = build_L(H, r)
    Hr = group_power(H, r)
    target = regular_algebra(Hr)
    radices = [H.size] * r
    representatives = diagonal_orbit_representatives(H, r)
    sort_1 = tuple(encode_mixed([h] * r, radices) for h in range(H.size))
    sort_2 = tuple(
        encode_mixed([H.mul(h, u) for u in representatives[i]], radices)
        for i in range(r)
        for h in range(H.size)
    )
    embedding = Homomorphism((sort_1, sort_2))
    if not (embedding.is_injective() and is_homomorphism(embedding, source.algebra, target.algebra)):
        raise FinvarError("Отображение L(H, r) → L(H^r, 1) не является вложением.")
    return source, target, embedding
