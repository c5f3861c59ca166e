from typing import Sequence

import numpy as np

from algebra.closure import SubUniverse, generate_subalgebra
from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import TAU, is_action_signature
from algebra.variety import MembershipCertificate
from utils.exceptions import FinvarError, NotZeroAdjoined


def adjoin_zero(B: FiniteAlgebra) -> FiniteAlgebra:
    """
    Строит B⁰: к каждому сорту добавляется ноль (последний элемент, метка "0").

    s⁰(b, b′) = s(b, b′) для b ∈ B1, b′ ∈ B2 и 0 в остальных случаях.
    Номера нулей записываются в метаданные "zeros".

    Raises:
        FinvarError: Если B не в сигнатуре τ.
    """

    if not is_action_signature(B.signature):
        raise FinvarError("Присоединение нуля определено для алгебр в сигнатуре τ.")
    n1, n2 = B.sizes
    table = np.full((n1 + 1, n2 + 1), n2, dtype=np.int64)
    table[:n1, :n2] = B.table_view(0)
    labels = None
    if B.labels is not None:
        labels = [list(B.labels[0]) + ["0"], list(B.labels[1]) + ["0"]]
    metadata = dict(B.metadata)
    metadata.update(construction="zero", zeros=[n1, n2])
    return FiniteAlgebra(TAU, [n1 + 1, n2 + 1], [table.reshape(-1)], labels, metadata)


def zeros_of(B: FiniteAlgebra) -> tuple[int, int]:
    zeros = B.metadata.get("zeros")
    if zeros is None:
        raise NotZeroAdjoined()
    return int(zeros[0]), int(zeros[1])


def strip_zero(B: FiniteAlgebra, sub: SubUniverse) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Подмножества без нулей (B_i⁻ = B_i \\ {0})."""

    zeros = zeros_of(B)
    return tuple(
        tuple(x for x in subset if x != zero) for subset, zero in zip(sub.subsets, zeros)
    )


def zero_stripped_generation(
    A0: FiniteAlgebra, sub: SubUniverse, gens: Sequence[Sequence[int]]
) -> tuple[bool, bool]:
    """
    Сравнивает порождение подалгебры B ≤ A⁰ с порождением B⁻ без нулей.

    Returns:
        tuple[bool, bool]: Порождает ли (X1, X2) подалгебру B в A⁰ и порождает
        ли (X1⁻, X2⁻) подалгебру B⁻ = (B1⁻, B2⁻) в A. Ответы должны совпадать.
    """

    zeros = zeros_of(A0)
    whole = generate_subalgebra(A0, gens)
    stripped_gens = [[x for x in g if x != zero] for g, zero in zip(gens, zeros)]
    reduced = _closure_without_zero(A0, stripped_gens, zeros)
    return whole.subsets == sub.subsets, reduced == strip_zero(A0, sub)


def _closure_without_zero(A0: FiniteAlgebra, gens, zeros) -> tuple[tuple[int, ...], tuple[int, ...]]:
    first = set(gens[0])
    second = set(gens[1])
    table = A0.table_view(0)
    frontier = set(second)
    while frontier:
        found = {int(table[g, y]) for g in first for y in frontier} - second - {zeros[1]}
        second |= found
        frontier = found
    return tuple(sorted(first)), tuple(sorted(second))


def zero_certificate(cert: MembershipCertificate, A: FiniteAlgebra) -> MembershipCertificate:
    """
    Переносит сертификат B ∈ V(A) в сертификат B⁰ ∈ V(A⁰).

    (A^m)⁰ вкладывается в (A⁰)^m: нуль переходит в нулевой набор. Замыкание
    образующих с добавленными нулевыми наборами равно C ∪ {0}; к блокам θ
    добавляется блок нуля, нуль B⁰ переходит в нулевой набор.

    Args:
        cert (MembershipCertificate): Сертификат для B ∈ V(A).
        A (FiniteAlgebra): Алгебра без нулей.

    Returns:
        MembershipCertificate: Сертификат для B⁰ ∈ V(A⁰).
    """

    m = cert.exponent
    zero_vectors = tuple((size,) * m for size in A.sizes)
    generators = tuple(
        tuple(gens) + (zero,) for gens, zero in zip(cert.generators, zero_vectors)
    )
    blocks = []
    for sort_blocks, zero in zip(cert.blocks, zero_vectors):
        extended = dict(sort_blocks)
        extended[zero] = max(sort_blocks.values(), default=-1) + 1
        blocks.append(extended)
    embedding = tuple(
        tuple(vectors) + (zero,) for vectors, zero in zip(cert.embedding, zero_vectors)
    )
    notes = dict(cert.notes, transported_by="zero")
    return MembershipCertificate(m, generators, tuple(blocks), embedding, cert.method + "+zero", notes)
