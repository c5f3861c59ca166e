import time
from typing import Mapping, Sequence

import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import AUTOMATIC
from algebra.terms import holds
from config.logging_config import log
from constructions.automatic import PartialMap, build_automatic
from constructions.zero import adjoin_zero
from groups.finite_group import FiniteGroup
from term_lang.families import (
    PsiClasses,
    action_from_automatic,
    check_word_identity,
    delta_identities,
    psi0_identities,
    psi_classes,
)
from term_lang.parser import format_identity
from term_lang.words import Word
from utils.exceptions import BudgetExceeded, FinvarError
from verify.report import ScenarioReport


def automatic_shape(auto: FiniteAlgebra) -> bool:
    """
    Проверяет форму таблицы автоматной алгебры.

    Ненулевые значения допустимы только в произведениях буквы на точку и
    лежат среди точек. Из этой формы следуют все тождества Δ, поэтому для
    больших алгебр Δ проверяется по таблице, без перебора подстановок.
    """

    layout = auto.metadata.get("automatic")
    if layout is None or not auto.signature.matches(AUTOMATIC):
        raise FinvarError("Алгебра не размечена как автоматная.")
    letters = int(layout["group_size"])
    zero = letters + int(layout["set_size"])
    view = auto.table_view(0)
    outside = np.ones(view.shape, dtype=bool)
    outside[:letters, letters:zero] = False
    block = view[:letters, letters:zero]
    return bool((view[outside] == zero).all() and ((block >= letters) & (block <= zero)).all())


def psi_pairs(classes: PsiClasses) -> list[tuple[Word, Word]]:
    """Пары (первое слово класса, другое слово класса)."""

    return [(words[0], other) for words in classes.classes for other in words[1:]]


def boozer_fragment_check(
    G: FiniteGroup | int,
    set_size: int,
    sigma: Sequence[PartialMap],
    max_length: int,
    max_index: int,
    witness: FiniteAlgebra | None = None,
    assignment_budget: int | None = None,
) -> ScenarioReport:
    """
    Проверяет ограниченный фрагмент базиса тождеств Auto(G, S, σ).

    Все тождества delta_identities(max_index) и все пары [w]y ≈ [w′]y одного
    класса при |w| ≤ max_length проверяются в Auto(G, S, σ). Если передана
    алгебра witness (автоматная алгебра, построенная по B(k, ℓ)⁰), тот же
    фрагмент проверяется и в ней: Δ по форме таблицы, пары слов сведением к
    ненулевым подстановкам.

    Args:
        G (FiniteGroup | int): Группа или число букв.
        set_size (int): Мощность S.
        sigma (Sequence[PartialMap]): Частичные отображения букв.
        max_length (int): Наибольшая длина слов L.
        max_index (int): Наибольший номер семейства Δ.
        witness (FiniteAlgebra | None): Дополнительная автоматная алгебра.
        assignment_budget (int | None): Лимит подстановок одной проверки.

    Returns:
        ScenarioReport: Отчёт со строкой на каждое тождество.
    """

    started = time.perf_counter()
    report = ScenarioReport(
        "boozer-fragment", {"L": max_length, "N": max_index, "set_size": set_size}
    )
    auto = build_automatic(G, set_size, sigma)
    size = auto.sizes[0]
    shape = automatic_shape(auto)
    report.check("automatic_shape", {"size": size}, shape, shape)
    for identity in delta_identities(max_index):
        text = format_identity(identity, AUTOMATIC)
        result = holds(auto, identity, assignment_budget)
        report.check("holds", {"algebra": f"Auto[{size}]", "identity": text}, bool(result), bool(result))

    action = action_from_automatic(auto)
    if "zeros" not in action.metadata:
        action = adjoin_zero(action)
    classes = psi_classes(action, max_length, assignment_budget)
    pairs = psi_pairs(classes)
    log.info(f"Фрагмент Ψ: {len(pairs)} пар слов длины ≤ {max_length}.")
    for word, other in pairs:
        result = check_word_identity(auto, word, other, assignment_budget)
        report.check(
            "check_word_identity",
            {"algebra": f"Auto[{size}]", "w": list(word), "w'": list(other)},
            bool(result),
            bool(result),
        )
    total = all(mapping_total(m, set_size) for m in sigma)
    report.check(
        "psi0_identities",
        {"algebra": f"Auto[{size}]", "L": max_length, "total": total},
        len(classes.zero_words),
        not total or not classes.zero_words,
    )
    for identity in psi0_identities(classes):
        text = format_identity(identity, AUTOMATIC)
        result = holds(auto, identity, assignment_budget)
        report.check("holds", {"algebra": f"Auto[{size}]", "identity": text}, bool(result), bool(result))

    if witness is not None:
        witness_size = witness.sizes[0]
        shape = automatic_shape(witness)
        report.check("automatic_shape", {"witness": witness_size}, shape, shape)
        for word, other in pairs:
            try:
                result = check_word_identity(witness, word, other, assignment_budget)
            except BudgetExceeded as exc:
                report.skip("check_word_identity", {"witness": witness_size, "w": list(word)}, str(exc))
                continue
            report.check(
                "check_word_identity",
                {"witness": witness_size, "w": list(word), "w'": list(other)},
                bool(result),
                bool(result),
            )

    report.elapsed = time.perf_counter() - started
    return report


def mapping_total(mapping: PartialMap, set_size: int) -> bool:
    values = list(mapping.values()) if isinstance(mapping, Mapping) else list(mapping)
    return len(values) == set_size and all(v is not None and v >= 0 for v in values)
