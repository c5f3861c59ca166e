from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import AUTOMATIC, TAU, is_action_signature
from algebra.terms import App, HoldsResult, Identity, Var, eval_vector, holds
from config.logging_config import log
from config.settings import settings
from term_lang.words import Word, enumerate_words, letter_count, sharp_word, word_term, zero_term
from utils.exceptions import FinvarError, NotZeroAdjoined
from utils.utils import checked_product, decode_columns


def delta_identities(max_index: int) -> list[Identity]:
    """
    Тождества Δ автоматных алгебр в сигнатуре с одной точкой.

    Четыре базовых тождества 𝟎·x ≈ 𝟎, x·𝟎 ≈ 𝟎, x·x ≈ 𝟎, (x·y)·z ≈ 𝟎 и
    семейство [x0 … xn]x0 ≈ 𝟎 для 0 ≤ n ≤ max_index. Переменная z терма
    𝟎 = z·z нумеруется после всех переменных тождества.

    Args:
        max_index (int): Наибольшее n семейства.

    Returns:
        list[Identity]: 4 + max_index + 1 тождеств.
    """

    if max_index < 0:
        raise FinvarError("Граница семейства должна быть неотрицательной.")
    dot = AUTOMATIC.index(".")
    x, y, z = Var(0, 0), Var(0, 1), Var(0, 2)
    identities = [
        Identity(App(dot, (zero_term(Var(0, 1)), x)), zero_term(Var(0, 1))),
        Identity(App(dot, (x, zero_term(Var(0, 1)))), zero_term(Var(0, 1))),
        Identity(App(dot, (x, x)), zero_term(Var(0, 1))),
        Identity(App(dot, (App(dot, (x, y)), z)), zero_term(Var(0, 3))),
    ]
    for n in range(max_index + 1):
        word = tuple(range(n + 1))
        identities.append(Identity(word_term(word, Var(0, 0)), zero_term(Var(0, n + 1))))
    return identities


@dataclass(frozen=True)
class PsiClasses:
    """
    Разбиение канонических слов по функциям [w]y♯ в алгебре с нулями.

    Attributes:
        max_length (int): Наибольшая длина слов.
        classes (tuple[tuple[Word, ...], ...]): Классы слов в порядке первого слова.
        zero_words (tuple[Word, ...]): Слова, для которых [w]y♯ тождественно равно нулю.
    """

    max_length: int
    classes: tuple[tuple[Word, ...], ...]
    zero_words: tuple[Word, ...] = field(default=())

    def class_of(self, word: Sequence[int]) -> int:
        for i, words in enumerate(self.classes):
            if tuple(word) in words:
                return i
        raise FinvarError(f"Слово {tuple(word)} не входит в перечисление.")


def _zeros(alg: FiniteAlgebra) -> tuple[int, ...]:
    zeros = alg.metadata.get("zeros")
    if zeros is None:
        raise NotZeroAdjoined()
    return tuple(int(z) for z in zeros)


def psi_classes(
    alg: FiniteAlgebra, max_length: int, assignment_budget: int | None = None
) -> PsiClasses:
    """
    Разбивает канонические слова длины ≤ max_length на классы равных функций.

    Для слова с r различными буквами терм [w]y♯ вычисляется на всех
    |A1|^r·|A2| подстановках алгебры с присоединёнными нулями. Слова с разным
    числом букв попадают в разные классы. Каждое слово берётся в канонической
    нумерации букв (по первому вхождению), и классы ключуются именно ею.

    Args:
        alg (FiniteAlgebra): Двухсортная алгебра с отмеченными нулями.
        max_length (int): Наибольшая длина слов.
        assignment_budget (int | None): Лимит подстановок для одного слова.

    Returns:
        PsiClasses: Классы и слова, тождественно равные нулю.

    Raises:
        NotZeroAdjoined: Если у алгебры не отмечены нули.
        BudgetExceeded: Если подстановок слишком много.
    """

    if not is_action_signature(alg.signature):
        raise FinvarError("Ожидалась двухсортная алгебра действия.")
    zeros = _zeros(alg)
    budget = assignment_budget or settings.assignment_budget
    size_letters, size_target = alg.sizes

    environments: dict[int, tuple[dict, int]] = {}
    classes: dict[tuple[int, bytes], list[Word]] = {}
    zero_words = []
    for word in enumerate_words(max_length):
        r = letter_count(word)
        if r not in environments:
            count = checked_product([size_letters] * r + [size_target], budget, "Число подстановок")
            columns = decode_columns(count, [size_letters] * r + [size_target])
            env = {Var(0, i): column for i, column in enumerate(columns[:r])}
            env[Var(1, 0)] = columns[r]
            environments[r] = (env, count)
        env, count = environments[r]
        values = eval_vector(alg, sharp_word(word), env, count)
        classes.setdefault((r, values.tobytes()), []).append(word)
        if np.all(values == zeros[1]):
            zero_words.append(word)

    log.info(
        f"Слова длины ≤ {max_length}: {sum(len(c) for c in classes.values())} слов, "
        f"{len(classes)} классов."
    )
    return PsiClasses(
        max_length=max_length,
        classes=tuple(tuple(words) for words in classes.values()),
        zero_words=tuple(zero_words),
    )


def psi_identities(classes: PsiClasses) -> list[Identity]:
    """Тождества [w]y ≈ [w′]y: первое слово класса с каждым другим."""

    identities = []
    for words in classes.classes:
        first = words[0]
        y = Var(0, letter_count(first))
        for other in words[1:]:
            identities.append(Identity(word_term(first, y), word_term(other, y)))
    return identities


def psi0_identities(classes: PsiClasses) -> list[Identity]:
    """Тождества [w]y ≈ 𝟎 для слов, тождественно равных нулю."""

    identities = []
    for word in classes.zero_words:
        r = letter_count(word)
        identities.append(Identity(word_term(word, Var(0, r)), zero_term(Var(0, r + 1))))
    return identities


def action_from_automatic(auto: FiniteAlgebra) -> FiniteAlgebra:
    """
    Восстанавливает двухсортную алгебру действия по автоматной алгебре.

    Элементы автоматной алгебры расположены блоками: G, затем S, затем ноль.
    Если хотя бы одно частичное отображение не всюду определено, результат
    получает присоединённые нули (последние элементы сортов).

    Raises:
        FinvarError: Если алгебра не размечена как автоматная.
    """

    layout = auto.metadata.get("automatic")
    if layout is None:
        raise FinvarError("Алгебра не размечена как автоматная.")
    group_size, set_size = int(layout["group_size"]), int(layout["set_size"])
    zero = group_size + set_size
    view = auto.table_view(0)
    block = view[:group_size, group_size:zero]
    if not (block == zero).any():
        return FiniteAlgebra(TAU, [group_size, set_size], [(block - group_size).reshape(-1)])

    table = np.full((group_size + 1, set_size + 1), set_size, dtype=np.int64)
    table[:group_size, :set_size] = np.where(block == zero, set_size, block - group_size)
    return FiniteAlgebra(
        TAU,
        [group_size + 1, set_size + 1],
        [table.reshape(-1)],
        metadata={"zeros": [group_size, set_size]},
    )


def _zero_adjoined(action: FiniteAlgebra) -> FiniteAlgebra:
    group_size, set_size = action.sizes
    table = np.full((group_size + 1, set_size + 1), set_size, dtype=np.int64)
    table[:group_size, :set_size] = action.table_view(0)
    return FiniteAlgebra(
        TAU,
        [group_size + 1, set_size + 1],
        [table.reshape(-1)],
        metadata={"zeros": [group_size, set_size]},
    )


def check_word_identity(
    auto: FiniteAlgebra,
    word: Sequence[int],
    other: Sequence[int],
    assignment_budget: int | None = None,
) -> HoldsResult:
    """
    Проверяет [w]y ≈ [w′]y в автоматной алгебре сведением к алгебре действия.

    Для непустого слова значение [w]y отлично от нуля только если все буквы
    лежат в G, y лежит в S и σ_w(y) определено; буква из S или нуль даёт нуль.
    Поэтому тождество равносильно [w]y♯ ≈ [w′]y♯ в алгебре действия, а если
    множества букв различаются, то в алгебре действия с присоединёнными нулями.
    Пустое слово против непустого не выполняется никогда: при y ∈ G левая
    часть равна y, а правая нулю.

    Returns:
        HoldsResult: Результат; свидетель дан в двухсортной алгебре.
    """

    if not word and not other:
        return HoldsResult(True, None, 0)
    if not word or not other:
        return HoldsResult(False, None, 0)
    action = action_from_automatic(auto)
    if set(word) != set(other) and "zeros" not in action.metadata:
        action = _zero_adjoined(action)
    return holds(action, Identity(sharp_word(word), sharp_word(other)), assignment_budget)


@dataclass(frozen=True)
class IdentityFamilySpec:
    """
    Описание ограниченного фрагмента семейства тождеств.

    Attributes:
        family (str): "Delta", "Psi" или "Psi0".
        max_length (int): Наибольшая длина слов L.
        max_index (int): Наибольший номер семейства N.
    """

    family: Literal["Delta", "Psi", "Psi0"]
    max_length: int = 0
    max_index: int = 0

    def __post_init__(self) -> None:
        if self.family not in ("Delta", "Psi", "Psi0"):
            raise FinvarError(f"Неизвестное семейство тождеств {self.family}.")
        if self.max_length < 0 or self.max_index < 0:
            raise FinvarError("Границы семейства должны быть неотрицательными.")

    def identities(self, alg: FiniteAlgebra | None = None) -> list[Identity]:
        if self.family == "Delta":
            return delta_identities(self.max_index)
        if alg is None:
            raise FinvarError("Для семейств Ψ нужна двухсортная алгебра с нулями.")
        classes = psi_classes(alg, self.max_length)
        if self.family == "Psi":
            return psi_identities(classes)
        return psi0_identities(classes)
