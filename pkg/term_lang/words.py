from typing import Iterator, Sequence

from algebra.signature import AUTOMATIC, TAU, Signature
from algebra.terms import App, Term, Var
from term_lang.parser import dot_symbol
from utils.exceptions import NotAWordTerm


Word = tuple[int, ...]


def word_term(word: Sequence[int], y: Var | None = None, signature: Signature = AUTOMATIC) -> Term:
    """
    Строит словарный терм [w]y = x_{w1}·(x_{w2}·(…·y)).

    Буквы слова — номера переменных первого аргументного сорта символа
    действия. По умолчанию y — переменная с номером после всех букв.

    Args:
        word (Sequence[int]): Номера переменных-букв.
        y (Var | None): Переменная в конце слова.
        signature (Signature): Сигнатура с символом действия.

    Returns:
        Term: Терм [w]y.
    """

    index = dot_symbol(signature)
    letter_sort, target_sort = signature.symbols[index].arg_sorts
    if y is None:
        y = Var(target_sort, max(word, default=-1) + 1 if letter_sort == target_sort else 0)
    result: Term = y
    for letter in reversed(word):
        result = App(index, (Var(letter_sort, int(letter)), result))
    return result


def split_word_term(term: Term, signature: Signature = AUTOMATIC) -> tuple[Word, Var]:
    """
    Раскладывает терм вида [w]y на слово и конечную переменную.

    Raises:
        NotAWordTerm: Если терм не является правым вложением символа действия.
    """

    index = dot_symbol(signature)
    letters = []
    current = term
    while isinstance(current, App):
        if current.symbol != index or not isinstance(current.children[0], Var):
            raise NotAWordTerm()
        letters.append(current.children[0].index)
        current = current.children[1]
    return tuple(letters), current


def sharp(term: Term, signature: Signature = AUTOMATIC) -> Term:
    """
    Переводит [w]y в двухсортный терм: буквы — переменные первого сорта,
    y — переменная второго сорта, точка заменяется символом s.

    Raises:
        NotAWordTerm: Если терм не словарный или y совпадает с одной из букв.
    """

    word, y = split_word_term(term, signature)
    if signature.sort_count == 1 and y.index in word:
        raise NotAWordTerm("Конечная переменная словарного терма совпадает с буквой.")
    result: Term = Var(1, 0)
    for letter in reversed(word):
        result = App(0, (Var(0, letter), result))
    return result


def sharp_word(word: Sequence[int]) -> Term:
    """Терм [w]y♯ в сигнатуре τ."""

    return word_term(word, Var(1, 0), TAU)


def canonical_word(word: Sequence[int]) -> Word:
    """Перенумеровывает буквы в порядке первого вхождения."""

    mapping: dict[int, int] = {}
    return tuple(mapping.setdefault(letter, len(mapping)) for letter in word)


def letter_count(word: Sequence[int]) -> int:
    return len(set(word))


def enumerate_words(max_length: int) -> Iterator[Word]:
    """
    Перечисляет канонические слова длины не больше max_length.

    Слова идут по длине, затем лексикографически; каждая новая буква не больше
    числа уже использованных.
    """

    def extend(prefix: list[int], used: int, length: int) -> Iterator[Word]:
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for letter in range(used + 1):
            prefix.append(letter)
            yield from extend(prefix, max(used, letter + 1), length)
            prefix.pop()

    for length in range(max_length + 1):
        yield from extend([], 0, length)


def zero_term(var: Var, signature: Signature = AUTOMATIC) -> Term:
    """Терм 𝟎 = z·z."""

    return App(dot_symbol(signature), (var, var))
