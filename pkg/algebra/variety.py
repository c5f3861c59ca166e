import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from algebra.closure import FreeAlgebra, free_algebra, generating_set, power_closure
from algebra.congruence import Congruence, is_congruence, quotient
from algebra.finite_algebra import FiniteAlgebra
from algebra.homomorphism import Homomorphism, find_homomorphism, is_homomorphism
from algebra.terms import App, Identity, Var
from config.logging_config import log
from config.settings import settings
from utils.exceptions import BudgetExceeded, FinvarError, SignatureMismatch
from utils.utils import checked_product


Vector = tuple[int, ...]


@dataclass(frozen=True)
class MembershipCertificate:
    """
    Явная цепочка B ↪ C/θ, где C — подалгебра A^m, порождённая векторами.

    Attributes:
        exponent (int): Показатель степени m.
        generators (tuple[tuple[Vector, ...], ...]): Векторы-образующие по сортам.
        blocks (tuple[dict[Vector, int], ...]): Номер блока θ для каждого вектора замыкания.
        embedding (tuple[tuple[Vector, ...], ...]): Для каждого элемента B вектор его блока.
        method (str): Способ получения сертификата.
        notes (dict): Дополнительные сведения.
    """

    exponent: int
    generators: tuple[tuple[Vector, ...], ...]
    blocks: tuple[dict, ...]
    embedding: tuple[tuple[Vector, ...], ...]
    method: str = ""
    notes: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "exponent": self.exponent,
            "method": self.method,
            "generators": [[list(v) for v in vs] for vs in self.generators],
            "blocks": [
                [[list(v), b] for v, b in sort_blocks.items()] for sort_blocks in self.blocks
            ],
            "embedding": [[list(v) for v in vs] for vs in self.embedding],
            "notes": self.notes,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MembershipCertificate":
        return cls(
            exponent=int(data["exponent"]),
            generators=tuple(tuple(tuple(v) for v in vs) for vs in data["generators"]),
            blocks=tuple(
                {tuple(v): int(b) for v, b in sort_blocks} for sort_blocks in data["blocks"]
            ),
            embedding=tuple(tuple(tuple(v) for v in vs) for vs in data["embedding"]),
            method=data.get("method", ""),
            notes=data.get("notes", {}),
        )


@dataclass(frozen=True)
class CertificateCheck:
    """
    Результат независимой проверки трёх этапов сертификата.

    Attributes:
        closure_ok (bool): Замыкание образующих покрыто блоками и содержит образы B.
        congruence_ok (bool): Блоки образуют конгруэнцию замыкания.
        embedding_ok (bool): Отображение B в фактор — инъективный гомоморфизм.
        closure_sizes (tuple[int, ...]): Мощности замыкания по сортам.
        message (str): Пояснение при неудаче.
    """

    closure_ok: bool
    congruence_ok: bool
    embedding_ok: bool
    closure_sizes: tuple[int, ...] = ()
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.closure_ok and self.congruence_ok and self.embedding_ok

    def __bool__(self) -> bool:
        return self.passed


def verify_certificate(
    cert: MembershipCertificate,
    B: FiniteAlgebra,
    A: FiniteAlgebra,
    element_budget: int | None = None,
) -> CertificateCheck:
    """
    Независимо проверяет сертификат принадлежности B ∈ V(A).

    Замыкание образующих строится заново в A^m; затем проверяется, что каждый
    его вектор отнесён к блоку, что блоки образуют конгруэнцию, и что отображение
    элементов B в блоки — инъективный гомоморфизм в факторалгебру.

    Raises:
        SignatureMismatch: Если сигнатуры B и A различаются.
        BudgetExceeded: Если замыкание превышает лимит элементов.
    """

    if not B.signature.matches(A.signature):
        raise SignatureMismatch()
    closure = power_closure(A, cert.generators, cert.exponent, element_budget)
    sizes = closure.sizes
    index = closure.index()

    labels = []
    for sort, matrix in enumerate(closure.vectors):
        sort_blocks = cert.blocks[sort]
        sort_labels = []
        for row in matrix:
            block = sort_blocks.get(tuple(int(x) for x in row))
            if block is None:
                return CertificateCheck(
                    False, False, False, sizes, f"Вектор сорта {sort} не отнесён ни к одному блоку."
                )
            sort_labels.append(block)
        labels.append(sort_labels)

    positions = []
    for sort, vectors in enumerate(cert.embedding):
        if len(vectors) != B.sizes[sort]:
            return CertificateCheck(
                False, False, False, sizes, f"Вложение не задано на всём сорте {sort}."
            )
        sort_positions = []
        for vector in vectors:
            found = index[sort].get(np.asarray(vector, dtype=np.int64).tobytes())
            if found is None:
                return CertificateCheck(
                    False, False, False, sizes, f"Образ элемента сорта {sort} вне замыкания."
                )
            sort_positions.append(found)
        positions.append(sort_positions)

    C = closure.algebra(A)
    theta = Congruence.from_labels(labels)
    if not is_congruence(C, theta):
        return CertificateCheck(True, False, False, sizes, "Блоки не образуют конгруэнцию.")

    Q, projection = quotient(C, theta)
    h = Homomorphism(
        tuple(
            tuple(projection.maps[sort][p] for p in sort_positions)
            for sort, sort_positions in enumerate(positions)
        )
    )
    embedded = h.is_injective() and is_homomorphism(h, B, Q)
    message = "" if embedded else "Отображение в фактор не является вложением."
    return CertificateCheck(True, True, embedded, sizes, message)


@dataclass(frozen=True)
class MembershipResult:
    """
    Ответ на вопрос B ∈ V(A).

    Attributes:
        member (bool): Принадлежит ли B многообразию.
        certificate (MembershipCertificate | None): Сертификат при положительном ответе.
        failed_identity (Identity | None): Тождество A, нарушенное в B.
    """

    member: bool
    certificate: MembershipCertificate | None = None
    failed_identity: Identity | None = None

    def __bool__(self) -> bool:
        return self.member


def _term_program(free: FreeAlgebra) -> list[list[tuple]]:
    """Для каждого элемента свободной алгебры: переменная или символ с номерами аргументов."""

    return [list(steps) for steps in free.steps]


def _evaluate_program(
    program: list[list[tuple]], target: FiniteAlgebra, env: dict[Var, int]
) -> Homomorphism:
    values: list[list[int | None]] = [[None] * len(steps) for steps in program]

    def value(sort: int, i: int) -> int:
        cached = values[sort][i]
        if cached is not None:
            return cached
        kind, payload = program[sort][i]
        if kind == "var":
            result = env[payload]
        else:
            result = target.apply(kind, [value(s, j) for s, j in payload])
        values[sort][i] = result
        return result

    return Homomorphism(
        tuple(tuple(value(sort, i) for i in range(len(steps))) for sort, steps in enumerate(program))
    )


def _first_failure(free: FreeAlgebra, g: Homomorphism, B: FiniteAlgebra) -> Identity | None:
    F = free.algebra
    maps = g.arrays()
    for index, symbol in enumerate(F.signature.symbols):
        table = F.tables[index]
        for position, result in enumerate(table):
            args = []
            code = position
            for radix in reversed(F.shape(index)):
                code, digit = divmod(code, radix)
                args.append(digit)
            args.reverse()
            image = B.apply(index, [maps[s][a] for s, a in zip(symbol.arg_sorts, args)])
            if image != maps[symbol.out_sort][result]:
                lhs = App(index, tuple(free.terms[s][a] for s, a in zip(symbol.arg_sorts, args)))
                return Identity(lhs, free.terms[symbol.out_sort][int(result)])
    return None


def in_variety(
    B: FiniteAlgebra,
    A: FiniteAlgebra,
    element_budget: int | None = None,
    assignment_budget: int | None = None,
    search_budget: int | None = None,
) -> MembershipResult:
    """
    Решает, лежит ли B в многообразии, порождённом A.

    Сначала ищется вложение B ↪ A (сертификат с m = 1); исчерпанный лимит
    поиска не прерывает решение. Иначе строится
    свободная алгебра V(A) на порождающем множестве B; B лежит в V(A) тогда и
    только тогда, когда вычисление представляющих термов в B является
    гомоморфизмом. В противном случае возвращается нарушенное тождество A.

    Returns:
        MembershipResult: Ответ, сертификат или нарушенное тождество.

    Raises:
        SignatureMismatch: Если сигнатуры различаются.
        BudgetExceeded: Если свободная алгебра слишком велика.
    """

    if not B.signature.matches(A.signature):
        raise SignatureMismatch()
    generators = generating_set(B)

    embedding = None
    if all(b <= a for b, a in zip(B.sizes, A.sizes)):
        try:
            embedding = find_homomorphism(
                B, A, injective=True, order=generators, search_budget=search_budget
            )
        except BudgetExceeded as exc:
            log.warning(f"Поиск вложения B ↪ A прерван ({exc}), проверка через свободную алгебру.")
    if embedding is not None:
        log.info("B вкладывается в A, сертификат с показателем 1.")
        certificate = MembershipCertificate(
            exponent=1,
            generators=tuple(
                tuple((embedding.maps[s][e],) for e in gens) for s, gens in enumerate(generators)
            ),
            blocks=tuple({(image,): e for e, image in enumerate(m)} for m in embedding.maps),
            embedding=tuple(tuple((image,) for image in m) for m in embedding.maps),
            method="embedding",
        )
        return MembershipResult(True, certificate)

    free = free_algebra(
        A, [len(gens) for gens in generators], element_budget, assignment_budget
    )
    env = {Var(s, i): e for s, gens in enumerate(generators) for i, e in enumerate(gens)}
    g = _evaluate_program(_term_program(free), B, env)
    if not is_homomorphism(g, free.algebra, B):
        failed = _first_failure(free, g, B)
        log.info("B не лежит в V(A): найдено нарушенное тождество.")
        return MembershipResult(False, None, failed)

    blocks = []
    embedding_vectors = []
    for sort, matrix in enumerate(free.vectors):
        sort_blocks = {}
        first: dict[int, Vector] = {}
        for i, row in enumerate(matrix):
            vector = tuple(int(x) for x in row)
            block = g.maps[sort][i]
            sort_blocks[vector] = block
            first.setdefault(block, vector)
        blocks.append(sort_blocks)
        embedding_vectors.append(tuple(first[b] for b in range(B.sizes[sort])))

    columns = {var: free.vectors[var.sort][element] for var, element in free.designations.items()}
    certificate = MembershipCertificate(
        exponent=free.assignments,
        generators=tuple(
            tuple(tuple(int(x) for x in columns[Var(s, i)]) for i in range(len(gens)))
            for s, gens in enumerate(generators)
        ),
        blocks=tuple(blocks),
        embedding=tuple(embedding_vectors),
        method="free-algebra",
        notes={"free_sizes": list(free.algebra.sizes)},
    )
    log.info(f"B лежит в V(A): свободная алгебра мощности {free.algebra.sizes}.")
    return MembershipResult(True, certificate)


@dataclass(frozen=True)
class VnResult:
    """
    Ответ на вопрос B ∈ V(A)^(n).

    Attributes:
        holds (bool): Все (n,…,n)-порождённые подалгебры B лежат в V(A).
        checked (int): Число проверенных наборов образующих.
        skipped (int): Число наборов, отброшенных как лежащие в проверенной подалгебре.
        counterexample (tuple | None): Набор образующих подалгебры вне V(A).
    """

    holds: bool
    checked: int = 0
    skipped: int = 0
    counterexample: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def in_Vn(
    B: FiniteAlgebra,
    A: FiniteAlgebra,
    n: int,
    element_budget: int | None = None,
    assignment_budget: int | None = None,
    progress: Callable[[int], None] | None = None,
) -> VnResult:
    """
    Проверяет, что каждая подалгебра B, порождённая не более чем n элементами
    каждого сорта, лежит в V(A).

    Подалгебра, порождённая набором, лежит в V(A) тогда и только тогда, когда
    отображение образующих свободной алгебры V(A) на n образующих каждого сорта
    в этот набор продолжается до гомоморфизма. Наборы перебираются
    лексикографически; набор пропускается, если его элементы уже лежат в
    проверенной подалгебре.

    Raises:
        SignatureMismatch: Если сигнатуры различаются.
        BudgetExceeded: Если превышен лимит элементов или числа наборов.
    """

    if not B.signature.matches(A.signature):
        raise SignatureMismatch()
    if n < 1:
        raise FinvarError("Число образующих n должно быть положительным.")
    sort_count = B.signature.sort_count
    budget = assignment_budget or settings.assignment_budget
    checked_product([B.sizes[s] ** n for s in range(sort_count)], budget, "Число наборов образующих")

    free = free_algebra(A, [n] * sort_count, element_budget, assignment_budget)
    program = _term_program(free)
    verified: list[list[set[int]]] = []
    checked = skipped = 0

    for choice in itertools.product(
        *[itertools.product(range(B.sizes[s]), repeat=n) for s in range(sort_count)]
    ):
        if any(all(set(c) <= sets[s] for s, c in enumerate(choice)) for sets in verified):
            skipped += 1
            continue
        checked += 1
        if progress is not None and checked % 1000 == 0:
            progress(checked)
        env = {Var(s, i): e for s, c in enumerate(choice) for i, e in enumerate(c)}
        g = _evaluate_program(program, B, env)
        if not is_homomorphism(g, free.algebra, B):
            log.info(f"Подалгебра, порождённая {choice}, не лежит в V(A).")
            return VnResult(False, checked, skipped, choice)
        verified.append([set(m) for m in g.maps])

    log.info(f"B лежит в V(A)^({n}): проверено {checked}, пропущено {skipped} наборов.")
    return VnResult(True, checked, skipped)


def vn_basis(
    A: FiniteAlgebra,
    n: int,
    element_budget: int | None = None,
    assignment_budget: int | None = None,
) -> list[Identity]:
    """
    Строит конечный базис тождеств A от не более чем n переменных каждого сорта.

    Для каждой записи таблицы операции свободной алгебры выписывается
    f(rep a₁, …) ≈ rep f(a₁, …), для каждой образующей x ≈ rep x. Синтаксически
    тривиальные тождества и повторы опускаются.

    Returns:
        list[Identity]: Тождества в порядке таблиц.

    Raises:
        BudgetExceeded: Если свободная алгебра не укладывается в лимит.
    """

    free = free_algebra(A, [n] * A.signature.sort_count, element_budget, assignment_budget)
    F = free.algebra
    identities: dict[Identity, None] = {}

    for var, element in free.designations.items():
        rep = free.terms[var.sort][element]
        if rep != var:
            identities.setdefault(Identity(var, rep), None)

    for index, symbol in enumerate(F.signature.symbols):
        table = F.tables[index]
        shape = F.shape(index)
        for position, result in enumerate(table):
            args = []
            code = position
            for radix in reversed(shape):
                code, digit = divmod(code, radix)
                args.append(digit)
            args.reverse()
            lhs = App(index, tuple(free.terms[s][a] for s, a in zip(symbol.arg_sorts, args)))
            rhs = free.terms[symbol.out_sort][int(result)]
            if lhs != rhs:
                identities.setdefault(Identity(lhs, rhs), None)

    log.info(f"Базис тождеств от {n} переменных: {len(identities)} тождеств.")
    return list(identities)
