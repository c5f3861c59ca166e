import itertools
import re
from dataclasses import dataclass, field
from typing import Sequence

from config.logging_config import log
from config.settings import settings
from groups.catalog import elementary_abelian
from groups.finite_group import FiniteGroup
from utils.exceptions import BudgetExceeded, FinvarError, TermSyntaxError
from utils.utils import decode_mixed, encode_mixed, require_prime


Word = tuple[int, ...]


def inverse_word(word: Sequence[int]) -> Word:
    return tuple(-letter for letter in reversed(word))


def free_reduce(word: Sequence[int]) -> Word:
    """Свободное сокращение: удаляет соседние пары x x⁻¹."""

    stack: list[int] = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def commutator_word(words: Sequence[Sequence[int]]) -> Word:
    """Левонормированный коммутатор слов: [u, v] = u⁻¹v⁻¹uv, [u1, …, uk] = [[u1, …, u_{k−1}], uk]."""

    if len(words) < 2:
        raise FinvarError("Коммутатор определён для не менее чем двух слов.")
    result = tuple(words[0])
    for word in words[1:]:
        result = inverse_word(result) + inverse_word(word) + result + tuple(word)
    return free_reduce(result)


def power_word(letter: int, exponent: int) -> Word:
    return (letter,) * exponent if exponent >= 0 else (-letter,) * (-exponent)


@dataclass(frozen=True)
class GroupPresentation:
    """
    Конечное задание группы.

    Буквы слов — числа ±(i+1) для образующей i и её обратной.

    Attributes:
        generator_count (int): Число образующих.
        relators (tuple[Word, ...]): Определяющие слова.
        names (tuple[str, ...]): Имена образующих.
    """

    generator_count: int
    relators: tuple[Word, ...]
    names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        for relator in self.relators:
            for letter in relator:
                if letter == 0 or abs(letter) > self.generator_count:
                    raise FinvarError(f"Буква {letter} ссылается на несуществующую образующую.")
        if not self.names:
            object.__setattr__(
                self, "names", tuple(f"a{i + 1}" for i in range(self.generator_count))
            )
        elif len(self.names) != self.generator_count:
            raise FinvarError("Число имён не совпадает с числом образующих.")


def presentation_Hpc(p: int, c: int) -> GroupPresentation:
    """
    Задание H_{p,c}: образующие a1, a2, соотношения a_i^p и все левонормированные
    коммутаторы длины c+1 от образующих (2 + 2^{c+1} соотношений).

    Raises:
        NotPrime: Если p не простое.
    """

    require_prime(p)
    if c < 1:
        raise FinvarError("Класс c должен быть положительным.")
    relators = [power_word(1, p), power_word(2, p)]
    for letters in itertools.product((1, 2), repeat=c + 1):
        relators.append(commutator_word([(letter,) for letter in letters]))
    return GroupPresentation(2, tuple(relators), ("a1", "a2"))


class VectorSpaceFq:
    """
    Пространство F_q^n; вектор кодируется числом в системе счисления по
    основанию q, первая координата старшая.

    Attributes:
        dimension (int): Размерность n.
        q (int): Простое q.
    """

    def __init__(self, dimension: int, q: int) -> None:
        require_prime(q)
        if dimension < 1:
            raise FinvarError("Размерность должна быть положительной.")
        self.dimension = dimension
        self.q = q
        self.radices = [q] * dimension

    @property
    def size(self) -> int:
        return self.q ** self.dimension

    def vector(self, index: int) -> tuple[int, ...]:
        return decode_mixed(index, self.radices)

    def index(self, vector: Sequence[int]) -> int:
        return encode_mixed([int(x) % self.q for x in vector], self.radices)

    def add(self, a: int, b: int) -> int:
        return self.index([x + y for x, y in zip(self.vector(a), self.vector(b))])

    def sub(self, a: int, b: int) -> int:
        return self.index([x - y for x, y in zip(self.vector(a), self.vector(b))])

    def basis(self, i: int) -> int:
        """Номер базисного вектора e_i (i от 0)."""

        return self.index([1 if j == i else 0 for j in range(self.dimension)])

    def in_coordinate_subspace(self, index: int) -> bool:
        """Лежит ли вектор в V_1 ∪ … ∪ V_n, то есть имеет нулевую координату."""

        return 0 in self.vector(index)

    def as_group(self) -> FiniteGroup:
        return elementary_abelian(self.q, self.dimension)


def presentation_GVpc(n: int, q: int, p: int, c: int, relator_cap: int | None = None) -> tuple[GroupPresentation, VectorSpaceFq]:
    """
    Задание G_{V,p,c}: образующие [v] для v ∈ V = F_q^n, соотношения [v]^p, все
    левонормированные коммутаторы длины c+1 и [v, w] для v−w с нулевой
    координатой. Повторы и пустые слова удаляются.

    Returns:
        tuple[GroupPresentation, VectorSpaceFq]: Задание и пространство (номер
        образующей [v] равен номеру вектора v).

    Raises:
        BudgetExceeded: Если число соотношений превышает лимит.
    """

    require_prime(p, q)
    space = VectorSpaceFq(n, q)
    size = space.size
    cap = relator_cap or settings.relator_cap
    estimate = size + size ** (c + 1) + size * size
    if estimate > cap:
        raise BudgetExceeded(f"Число соотношений {estimate} превышает лимит {cap}.")

    relators: dict[Word, None] = {}
    for v in range(size):
        relators.setdefault(power_word(v + 1, p), None)
    for letters in itertools.product(range(size), repeat=c + 1):
        relators.setdefault(commutator_word([(v + 1,) for v in letters]), None)
    for v in range(size):
        for w in range(v + 1, size):
            if space.in_coordinate_subspace(space.sub(v, w)):
                relators.setdefault(commutator_word([(v + 1,), (w + 1,)]), None)
    relators.pop((), None)

    names = tuple("v" + "".join(str(x) for x in space.vector(v)) for v in range(size))
    log.info(f"Задание G_V,{p},{c}: {size} образующих, {len(relators)} соотношений.")
    return GroupPresentation(size, tuple(relators), names), space


_PRESENTATION_REGEXP = re.compile(r"^\s*gens\s*:(?P<gens>[^;]*);\s*rels\s*:(?P<rels>.*?);?\s*$", re.S)
_WORD_TOKEN_REGEXP = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9]*)|(\^\s*-?\d+)|([\[\],*]))")


class _WordParser:
    def __init__(self, text: str, names: dict[str, int], offset: int) -> None:
        self.tokens = []
        position = 0
        while position < len(text):
            if not text[position:].strip():
                break
            match = _WORD_TOKEN_REGEXP.match(text, position)
            if match is None:
                raise TermSyntaxError("Недопустимый символ в соотношении", offset + position)
            self.tokens.append((match.group(0).strip(), offset + match.start(match.lastindex)))
            position = match.end()
        self.tokens.append(("", offset + len(text)))
        self.position = 0
        self.names = names

    def peek(self) -> str:
        return self.tokens[self.position][0]

    def take(self) -> tuple[str, int]:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def word(self, stop: tuple[str, ...]) -> Word:
        result: Word = ()
        while self.peek() not in stop:
            if self.peek() == "*":
                self.take()
                continue
            result += self.factor()
        return result

    def factor(self) -> Word:
        text, position = self.take()
        if text == "[":
            parts = [self.word((",", "]", ""))]
            while self.peek() == ",":
                self.take()
                parts.append(self.word((",", "]", "")))
            if self.take()[0] != "]":
                raise TermSyntaxError("Ожидалась ']'", position)
            base = commutator_word(parts)
        elif text in self.names:
            base = (self.names[text],)
        else:
            raise TermSyntaxError(f"Неизвестная образующая '{text}'", position)
        if self.peek().startswith("^"):
            exponent = int(self.take()[0][1:].replace(" ", ""))
            base = base * exponent if exponent >= 0 else inverse_word(base) * (-exponent)
        return base


def parse_presentation(text: str) -> GroupPresentation:
    """
    Разбирает задание вида "gens: a b; rels: a^2, b^2, [a,b,b];".

    Raises:
        TermSyntaxError: При синтаксической ошибке.
    """

    match = _PRESENTATION_REGEXP.match(text)
    if match is None:
        raise TermSyntaxError("Ожидалась запись 'gens: …; rels: …;'", 0)
    names = match.group("gens").split()
    index = {name: i + 1 for i, name in enumerate(names)}
    rels_text = match.group("rels")
    offset = match.start("rels")

    relators = []
    parser = _WordParser(rels_text, index, offset)
    while parser.peek() != "":
        relators.append(free_reduce(parser.word((",", ""))))
        if parser.peek() == ",":
            parser.take()
    return GroupPresentation(len(names), tuple(relators), tuple(names))


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for letter, run in itertools.groupby(word):
        count = len(list(run))
        exponent = count if letter > 0 else -count
        name = names[abs(letter) - 1]
        parts.append(name if exponent == 1 else f"{name}^{exponent}")
    return " ".join(parts)


def format_presentation(presentation: GroupPresentation) -> str:
    rels = ", ".join(format_word(r, presentation.names) for r in presentation.relators)
    return f"gens: {' '.join(presentation.names)}; rels: {rels};"


def evaluate_word(G: FiniteGroup, word: Sequence[int], generators: Sequence[int]) -> int:
    """Значение слова при заданных образах образующих."""

    result = G.identity
    for letter in word:
        element = generators[abs(letter) - 1]
        result = G.mul(result, element if letter > 0 else G.inv(element))
    return result


def relators_hold(G: FiniteGroup, presentation: GroupPresentation, generators: Sequence[int]) -> bool:
    return all(
        evaluate_word(G, relator, generators) == G.identity for relator in presentation.relators
    )
