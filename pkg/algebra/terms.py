from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import Signature
from config.settings import settings
from utils.exceptions import SortMismatch, UnboundVariable
from utils.utils import checked_product, radix_strides


@dataclass(frozen=True, order=True)
class Var:
    """Переменная заданного сорта."""

    sort: int
    index: int


@dataclass(frozen=True)
class App:
    """Применение символа (по номеру в сигнатуре) к списку подтермов."""

    symbol: int
    children: tuple["Term", ...] = ()


Term = Union[Var, App]


@dataclass(frozen=True)
class Identity:
    """Тождество lhs ≈ rhs."""

    lhs: Term
    rhs: Term

    def variables(self) -> list[Var]:
        return sorted(set(variables(self.lhs)) | set(variables(self.rhs)))


@dataclass(frozen=True)
class HoldsResult:
    """
    Результат проверки тождества.

    Attributes:
        holds (bool): Выполняется ли тождество.
        witness (dict[Var, int] | None): Опровергающая подстановка.
        checked (int): Число проверенных подстановок.
    """

    holds: bool
    witness: dict | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def term_sort(term: Term, signature: Signature) -> int:
    """
    Возвращает сорт терма, проверяя согласованность сортов подтермов.

    Raises:
        SortMismatch: Если сорт подтерма не совпадает с сортом аргумента.
    """

    if isinstance(term, Var):
        if not 0 <= term.sort < signature.sort_count:
            raise SortMismatch(f"Переменная {term} имеет несуществующий сорт.")
        return term.sort
    symbol = signature.symbols[term.symbol]
    if len(term.children) != symbol.arity:
        raise SortMismatch(f"Символ {symbol.name} применён к неверному числу аргументов.")
    for child, sort in zip(term.children, symbol.arg_sorts):
        if term_sort(child, signature) != sort:
            raise SortMismatch(f"Аргумент символа {symbol.name} имеет неверный сорт.")
    return symbol.out_sort


def variables(term: Term) -> list[Var]:
    """Переменные терма в порядке первого вхождения."""

    found: dict[Var, None] = {}
    stack = [term]
    while stack:
        current = stack.pop()
        if isinstance(current, Var):
            found.setdefault(current, None)
        else:
            stack.extend(reversed(current.children))
    return list(found)


def term_size(term: Term) -> int:
    if isinstance(term, Var):
        return 1
    return 1 + sum(term_size(child) for child in term.children)


def check_identity(identity: Identity, signature: Signature) -> int:
    """
    Проверяет, что обе части тождества имеют один сорт, и возвращает его.

    Raises:
        SortMismatch: Если сорта частей различаются.
    """

    left = term_sort(identity.lhs, signature)
    right = term_sort(identity.rhs, signature)
    if left != right:
        raise SortMismatch("Части тождества имеют разные сорта.")
    return left


def eval_term(alg: FiniteAlgebra, term: Term, env: Mapping[Var, int]) -> int:
    """
    Вычисляет значение терма при подстановке элементов вместо переменных.

    Args:
        alg (FiniteAlgebra): Алгебра.
        term (Term): Терм.
        env (Mapping[Var, int]): Значения переменных.

    Returns:
        int: Элемент сорта терма.

    Raises:
        UnboundVariable: Если переменной не присвоено значение.
        SortMismatch: Если значение не принадлежит сорту переменной.
    """

    if isinstance(term, Var):
        if term not in env:
            raise UnboundVariable(f"Переменной {term} не присвоено значение.")
        value = int(env[term])
        if not 0 <= term.sort < len(alg.sizes) or not 0 <= value < alg.sizes[term.sort]:
            raise SortMismatch(f"Значение {value} не принадлежит сорту переменной {term}.")
        return value
    symbol = alg.signature.symbols[term.symbol]
    if len(term.children) != symbol.arity:
        raise SortMismatch(f"Символ {symbol.name} применён к неверному числу аргументов.")
    args = []
    for child, sort in zip(term.children, symbol.arg_sorts):
        child_sort = child.sort if isinstance(child, Var) else alg.signature.symbols[child.symbol].out_sort
        if child_sort != sort:
            raise SortMismatch(f"Аргумент символа {symbol.name} имеет неверный сорт.")
        args.append(eval_term(alg, child, env))
    return alg.apply(term.symbol, args)


def eval_vector(
    alg: FiniteAlgebra, term: Term, env: Mapping[Var, np.ndarray], length: int
) -> np.ndarray:
    """
    Вычисляет терм сразу на многих подстановках.

    Args:
        alg (FiniteAlgebra): Алгебра.
        term (Term): Терм с согласованными сортами.
        env (Mapping[Var, np.ndarray]): Векторы значений переменных.
        length (int): Длина векторов.

    Returns:
        np.ndarray: Вектор значений терма.
    """

    if isinstance(term, Var):
        if term not in env:
            raise UnboundVariable(f"Переменной {term} не присвоено значение.")
        return env[term]
    table = alg.tables[term.symbol]
    if not term.children:
        return np.full(length, table[0], dtype=np.int64)
    position = None
    for child, radix in zip(term.children, alg.shape(term.symbol)):
        values = eval_vector(alg, child, env, length)
        position = values if position is None else position * radix + values
    return table[position]


def holds(
    alg: FiniteAlgebra,
    identity: Identity,
    assignment_budget: int | None = None,
    chunk: int = 1 << 18,
) -> HoldsResult:
    """
    Проверяет тождество перебором всех подстановок.

    Подстановки перебираются в лексикографическом порядке (переменные упорядочены
    по сорту и номеру, первая старшая); при нарушении возвращается первая
    опровергающая подстановка.

    Args:
        alg (FiniteAlgebra): Алгебра.
        identity (Identity): Тождество.
        assignment_budget (int | None): Лимит числа подстановок.
        chunk (int): Размер порции подстановок.

    Returns:
        HoldsResult: Результат проверки.

    Raises:
        SortMismatch: Если части тождества имеют разные сорта.
        BudgetExceeded: Если число подстановок превышает лимит.
    """

    check_identity(identity, alg.signature)
    budget = assignment_budget or settings.assignment_budget
    names = identity.variables()
    radices = [alg.sizes[var.sort] for var in names]
    total = checked_product(radices, budget, "Число подстановок")
    strides = radix_strides(radices)

    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        env = {
            var: (codes // stride) % radix
            for var, stride, radix in zip(names, strides, radices)
        }
        left = eval_vector(alg, identity.lhs, env, codes.size)
        right = eval_vector(alg, identity.rhs, env, codes.size)
        bad = np.flatnonzero(left != right)
        if bad.size:
            first = int(bad[0])
            witness = {var: int(env[var][first]) for var in names}
            return HoldsResult(False, witness, start + first + 1)
    return HoldsResult(True, None, total)
