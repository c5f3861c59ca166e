from typing import Mapping, Sequence

import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import AUTOMATIC, is_action_signature
from constructions.action_algebra import ActionAlgebra
from config.logging_config import log
from groups.finite_group import FiniteGroup
from utils.exceptions import DomainViolation, FinvarError


PartialMap = Mapping[int, int] | Sequence[int | None]


def _as_pairs(sigma: PartialMap, set_size: int) -> list[tuple[int, int]]:
    items = sigma.items() if isinstance(sigma, Mapping) else enumerate(sigma)
    pairs = []
    for s, t in items:
        if t is None or t < 0:
            continue
        if not (0 <= int(s) < set_size and 0 <= int(t) < set_size):
            raise DomainViolation(f"Пара ({s}, {t}) выходит за пределы множества S.")
        pairs.append((int(s), int(t)))
    return pairs


def build_automatic(
    G: FiniteGroup | int,
    set_size: int,
    sigma: Sequence[PartialMap],
    labels: Sequence[str] | None = None,
) -> FiniteAlgebra:
    """
    Строит автоматную алгебру на G ⊎ S ⊎ {0}.

    x·y = σ_x(y), если x ∈ G и y ∈ dom(σ_x), иначе 0. Элементы расположены
    блоками: G, затем S, затем ноль; раскладка записывается в метаданные
    "automatic", номер нуля — в "zero".

    Args:
        G (FiniteGroup | int): Группа или мощность множества индексов.
        set_size (int): Мощность S.
        sigma (Sequence[PartialMap]): Для каждого a ∈ G частичное отображение
            S → S словарём или списком (None или −1 означает «не определено»).
        labels (Sequence[str] | None): Метки элементов G.

    Returns:
        FiniteAlgebra: Автоматная алгебра в сигнатуре с одной точкой.

    Raises:
        DomainViolation: Если отображение выходит за пределы S.
    """

    group_size = G.size if isinstance(G, FiniteGroup) else int(G)
    if len(sigma) != group_size:
        raise FinvarError("Число частичных отображений не совпадает с мощностью G.")
    size = group_size + set_size + 1
    zero = size - 1
    table = np.full((size, size), zero, dtype=np.int64)
    for a, mapping in enumerate(sigma):
        for s, t in _as_pairs(mapping, set_size):
            table[a, group_size + s] = group_size + t

    if labels is None and isinstance(G, FiniteGroup) and G.labels:
        labels = G.labels
    element_labels = list(labels or [f"g{a}" for a in range(group_size)])
    element_labels += [f"s{s + 1}" for s in range(set_size)] + ["0"]
    metadata = {
        "construction": "automatic",
        "automatic": {"group_size": group_size, "set_size": set_size},
        "zero": zero,
    }
    log.debug(f"Автоматная алгебра: |G| = {group_size}, |S| = {set_size}.")
    return FiniteAlgebra(AUTOMATIC, [size], [table.reshape(-1)], [element_labels], metadata)


def automatic_from_action(A: ActionAlgebra) -> FiniteAlgebra:
    """Auto(G, S, α) для полного действия группы."""

    sigma = [list(A.action.act[g]) for g in range(A.group.size)]
    return build_automatic(A.group, A.set_size, sigma)


def automatic_from_two_sorted(B: FiniteAlgebra) -> FiniteAlgebra:
    """
    Автоматная алгебра по двухсортной алгебре τ, возможно с нулями.

    Ненулевые элементы первого сорта задают частичные отображения
    σ_b(y) = s(b, y) на ненулевых y, где значение отлично от нуля.

    Raises:
        FinvarError: Если B не в сигнатуре τ.
    """

    if not is_action_signature(B.signature):
        raise FinvarError("Ожидалась двухсортная алгебра в сигнатуре τ.")
    zeros = B.metadata.get("zeros")
    n1, n2 = B.sizes
    letters = [b for b in range(n1) if zeros is None or b != zeros[0]]
    points = [y for y in range(n2) if zeros is None or y != zeros[1]]
    position = {y: i for i, y in enumerate(points)}
    view = B.table_view(0)
    sigma = []
    for b in letters:
        sigma.append({position[y]: position[int(view[b, y])] for y in points if int(view[b, y]) in position})
    labels = [B.label(0, b) for b in letters]
    result = build_automatic(len(letters), len(points), sigma, labels)
    return result.with_metadata(source=dict(B.metadata.get("provenance", {})))
