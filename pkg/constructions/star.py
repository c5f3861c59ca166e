import numpy as np

from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import TAU, TAU_STAR, is_action_signature
from algebra.terms import Identity, holds
from config.logging_config import log
from config.settings import settings
from term_lang.parser import parse_identity
from utils.exceptions import FinvarError, NotInOmegaTauStar


OMEGA_TAU_STAR = (
    "d(x0,x0) =~ x0",
    "d(d(x0,x1),d(x2,x3)) =~ d(x0,x3)",
    "d(f(x0),x1) =~ d(x0,x1)",
)


def omega_tau_star_identities() -> list[Identity]:
    """Три тождества, задающие многообразие Ω_τ*."""

    return [parse_identity(text, TAU_STAR) for text in OMEGA_TAU_STAR]


def check_omega_tau_star(C: FiniteAlgebra, assignment_budget: int | None = None) -> None:
    """
    Проверяет тождества Ω_τ* полным перебором.

    Raises:
        NotInOmegaTauStar: С нарушенным тождеством и подстановкой-свидетелем.
    """

    for identity in omega_tau_star_identities():
        result = holds(C, identity, assignment_budget)
        if not result:
            raise NotInOmegaTauStar(identity=identity, witness=result.witness)


def star(A: FiniteAlgebra) -> FiniteAlgebra:
    """
    Строит A* в сигнатуре (d, f) на A1 × A2.

    Пара (a1, a2) имеет номер a1·|A2| + a2;
    d((a1, a2), (b1, b2)) = (a1, b2), f((a1, a2)) = (a1, s(a1, a2)).

    Raises:
        FinvarError: Если A не в сигнатуре τ.
    """

    if not is_action_signature(A.signature):
        raise FinvarError("Звёздочка определена для алгебр в сигнатуре τ.")
    n1, n2 = A.sizes
    codes = np.arange(n1 * n2)
    first, second = codes // n2, codes % n2
    d = first[:, None] * n2 + second[None, :]
    f = first * n2 + A.table_view(0)[first, second]
    labels = None
    if A.labels is not None:
        labels = [[f"({A.labels[0][a]},{A.labels[1][b]})" for a in range(n1) for b in range(n2)]]
    metadata = {"construction": "star", "pairing": [n1, n2]}
    if "zeros" in A.metadata:
        metadata["source_zeros"] = A.metadata["zeros"]
    C = FiniteAlgebra(TAU_STAR, [n1 * n2], [d.reshape(-1), f], labels, metadata)
    if (n1 * n2) ** 4 <= settings.assignment_budget:
        check_omega_tau_star(C)
    return C


def _classes(table: np.ndarray) -> np.ndarray:
    """
    Классы отношения a ~ b ⇔ ∃c: table[a, c] = table[b, c].

    Возвращает для каждого элемента наименьший элемент его класса.

    Raises:
        FinvarError: Если отношение не является эквивалентностью.
    """

    size = table.shape[0]
    related = np.zeros((size, size), dtype=bool)
    for a in range(size):
        related[a] = (table[a][None, :] == table).any(axis=1)
    composed = (related.astype(np.int64) @ related.astype(np.int64)) > 0
    if not (related.diagonal().all() and (related == related.T).all() and (composed <= related).all()):
        raise FinvarError("Отношение E не является эквивалентностью.")
    return np.argmax(related, axis=1)


def square(C: FiniteAlgebra, assignment_budget: int | None = None) -> FiniteAlgebra:
    """
    Строит C□ по алгебре из Ω_τ*.

    Отношения E1 и E2 вычисляются заново по определению: a E1 b, если
    d(a, c) = d(b, c) для некоторого c, и a E2 b, если d(c, a) = d(c, b).
    Классы нумеруются по наименьшему элементу; s(a/E1, b/E2) = f(d(a, b))/E2.
    Проверяется, что c ↦ (c/E1, c/E2) — биекция с обратным (a/E1, b/E2) ↦ d(a, b).

    Raises:
        NotInOmegaTauStar: Если C не удовлетворяет тождествам Ω_τ*.
    """

    if not C.signature.matches(TAU_STAR):
        raise FinvarError("Квадрат определён для алгебр в сигнатуре (d, f).")
    check_omega_tau_star(C, assignment_budget)
    d = C.table_view(0)
    f = C.tables[1]

    first = _classes(d)
    second = _classes(d.T)
    reps_1, index_1 = np.unique(first, return_inverse=True)
    reps_2, index_2 = np.unique(second, return_inverse=True)
    n1, n2 = reps_1.size, reps_2.size
    if n1 * n2 != C.sizes[0] or np.unique(index_1 * n2 + index_2).size != C.sizes[0]:
        raise FinvarError("Отображение c ↦ (c/E1, c/E2) не биективно.")
    inverse = d[np.ix_(reps_1, reps_2)]
    if not (index_1[inverse] == np.arange(n1)[:, None]).all() or not (
        index_2[inverse] == np.arange(n2)[None, :]
    ).all():
        raise FinvarError("Отображение (a/E1, b/E2) ↦ d(a, b) не обратно.")

    s = index_2[f[inverse]]
    labels = None
    if C.labels is not None:
        labels = [[C.labels[0][a] for a in reps_1], [C.labels[0][b] for b in reps_2]]
    log.debug(f"Квадрат алгебры порядка {C.sizes[0]}: сорта ({n1}, {n2}).")
    return FiniteAlgebra(TAU, [n1, n2], [s.reshape(-1)], labels, metadata={"construction": "square"})
