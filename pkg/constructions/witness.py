from dataclasses import dataclass

import numpy as np

from algebra.closure import generate_subalgebra
from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import TAU
from config.logging_config import log
from groups.coset_enum import todd_coxeter
from groups.finite_group import FiniteGroup
from groups.morphisms import FnpqReport, check_Fnpq_witness, semidirect_product, vector_space_action
from groups.presentation import presentation_GVpc
from utils.exceptions import BudgetExceeded, FinvarError, WitnessCheckFailed
from utils.utils import require_prime


@dataclass(frozen=True)
class WitnessAlgebra:
    """
    Двухсортная алгебра B(n, ℓ) и сведения о её построении.

    Attributes:
        algebra (FiniteAlgebra): Подалгебра L(P, 1) с универсумами X и P.
        group (FiniteGroup): P = G_{V,p,c} ⋊ V.
        generators (tuple[int, ...]): X = (e1, …, en, [0]) как элементы P.
        n (int): Размерность V.
        p (int): Показатель образующих G_{V,p,c}.
        q (int): Порядок поля.
        c (int): Ступень нильпотентности.
        gv_order (int): |G_{V,p,c}|.
        report (FnpqReport): Проверка свойства (∗) для P и X.
    """

    algebra: FiniteAlgebra
    group: FiniteGroup
    generators: tuple[int, ...]
    n: int
    p: int
    q: int
    c: int
    gv_order: int
    report: FnpqReport

    @property
    def provenance(self) -> dict:
        return self.algebra.metadata["provenance"]


def build_B(
    n: int,
    ell: int,
    p: int,
    q: int,
    coset_limit: int | None = None,
    relator_cap: int | None = None,
    max_c: int = 6,
) -> WitnessAlgebra:
    """
    Строит B(n, ℓ): подалгебру L(P, 1) с универсумами X и P.

    Ступень c увеличивается, пока |G_{V,p,c}| < ℓ; затем P = G_{V,p,c} ⋊ V,
    где V = F_q^n действует сдвигами образующих [v] ↦ [v + x]. Элемент (g, x)
    группы P имеет номер g·q^n + x. Набор X = {e1, …, en, [0]} проверяется на
    свойство (∗), затем проверяется (n+1, 1)-порождённость результата.

    Args:
        n (int): Размерность V, не меньше 2.
        ell (int): Нижняя граница для |G_{V,p,c}|.
        p (int): Простое число, показатель образующих.
        q (int): Простое число, порядок поля; q ≠ p.
        coset_limit (int | None): Лимит перечисления смежных классов.
        relator_cap (int | None): Лимит числа соотношений.
        max_c (int): Наибольшая допустимая ступень.

    Returns:
        WitnessAlgebra: Алгебра с метаданными "provenance".

    Raises:
        BudgetExceeded: Если |G_{V,p,c}| < ℓ при c = max_c или исчерпан лимит.
        WitnessCheckFailed: Если построенная группа не обладает свойством (∗).
    """

    require_prime(p, q)
    if p == q:
        raise FinvarError("Простые p и q должны различаться.")
    if n < 2:
        raise FinvarError("Размерность n должна быть не меньше 2.")

    for c in range(1, max_c + 1):
        presentation, space = presentation_GVpc(n, q, p, c, relator_cap)
        GV = todd_coxeter(presentation, coset_limit)
        log.info(f"|G_V,{p},{c}| = {GV.group.size} при n = {n}, q = {q}.")
        if GV.group.size >= ell:
            break
    else:
        raise BudgetExceeded(f"|G_V,p,c| < {ell} при всех c ≤ {max_c}.")

    K = space.as_group()
    P = semidirect_product(GV.group, K, vector_space_action(GV, space))
    X = tuple(GV.group.identity * K.size + space.basis(i) for i in range(n))
    X += (GV.generators[space.index([0] * n)] * K.size + K.identity,)

    report = check_Fnpq_witness(P, X, n, p, q)
    if not report.passed:
        log.error(f"Группа P порядка {P.size} не прошла проверку свойства (∗).")
        raise WitnessCheckFailed()

    table = P.mult[np.asarray(X, dtype=np.int64)]
    labels = [
        [f"e{i + 1}" for i in range(n)] + ["[0]"],
        [str(y) for y in range(P.size)],
    ]
    provenance = {
        "construction": "B",
        "n": n,
        "ell": ell,
        "p": p,
        "q": q,
        "c": c,
        "gv_order": GV.group.size,
        "group_order": P.size,
        "generators": list(X),
    }
    algebra = FiniteAlgebra(
        TAU, [n + 1, P.size], [table.reshape(-1)], labels, {"construction": "B", "provenance": provenance}
    )

    generated = generate_subalgebra(algebra, [range(n + 1), [P.identity]])
    if generated.sizes != algebra.sizes:
        log.error("B(n, ℓ) не порождается X и единицей группы.")
        raise WitnessCheckFailed("B(n, ℓ) не является (n+1, 1)-порождённой.")

    log.info(f"B({n}, {ell}): c = {c}, |P| = {P.size}.")
    return WitnessAlgebra(algebra, P, X, n, p, q, c, GV.group.size, report)
