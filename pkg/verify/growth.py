import os
from dataclasses import dataclass
from typing import Literal, Sequence

from algebra.closure import generate_subalgebra
from algebra.finite_algebra import FiniteAlgebra
from algebra.terms import holds
from algebra.variety import in_Vn, vn_basis
from config.logging_config import log
from constructions.action_algebra import ActionAlgebra, build_action_algebra
from constructions.automatic import automatic_from_action, automatic_from_two_sorted
from constructions.membership import structural_sweep
from constructions.star import star
from constructions.witness import WitnessAlgebra, build_B
from constructions.zero import adjoin_zero
from groups.action import natural_action
from groups.catalog import symmetric
from utils.exceptions import BudgetExceeded
from verify.fragment import boozer_fragment_check


Flavor = Literal["star", "zero", "automatic"]
FLAVORS = ("star", "zero", "automatic")
LEVELS = ("full-membership", "structural-certificate", "bounded-identities")
CSV_HEADER = "flavor,n,d,ell,c,achieved_size,level,passed"

# Наибольшее число наборов образующих для полного in_Vn.
FULL_LIMIT = 5_000
# Наибольшая мощность свидетеля, таблицы которого строятся явно.
MATERIALIZE_LIMIT = 3_000
# Наибольший |P|, при котором обход подалгебр проверяет каждую явно.
EXHAUSTIVE_LIMIT = 500


@dataclass(frozen=True)
class GrowthRow:
    """
    Строка таблицы роста.

    Attributes:
        flavor (str): star, zero или automatic.
        n (int): Число переменных n.
        d (int): Число порождающих свидетеля.
        ell (int): Нижняя граница ℓ.
        c (int): Ступень нильпотентности G_{V,p,c}.
        achieved_size (int): Мощность свидетеля.
        level (str): Наивысший пройденный уровень проверки или "skipped".
        passed (bool): Все выполненные проверки прошли.
        note (str): Пояснение (причина пропуска, невыполненные уровни).
    """

    flavor: str
    n: int
    d: int
    ell: int
    c: int
    achieved_size: int
    level: str
    passed: bool
    note: str = ""

    def csv_line(self) -> str:
        return (
            f"{self.flavor},{self.n},{self.d},{self.ell},{self.c},"
            f"{self.achieved_size},{self.level},{str(self.passed).lower()}"
        )


def default_generator() -> ActionAlgebra:
    """A(S3, {1, 2, 3}, α) с естественным действием."""

    G = symmetric(3)
    return build_action_algebra(G, natural_action(G))


def _generation_checked(witness: WitnessAlgebra, zero: bool, W: FiniteAlgebra | None) -> bool:
    """
    Проверяет d-порождённость свидетеля.

    Если W построена явно, замыкание вычисляется в ней: пары (x, 1) для
    x ∈ X и пара (0, 0) при zero. Иначе проверяется, что X и единица
    (и нули) порождают двухсортную алгебру, что равносильно порождённости W.
    """

    P = witness.group
    letters = witness.n + 1
    if W is not None:
        points = P.size + int(zero)
        gens = [x * points + P.identity for x in range(letters)]
        if zero:
            gens.append(letters * points + P.size)
        return generate_subalgebra(W, [gens]).sizes == W.sizes
    base = adjoin_zero(witness.algebra) if zero else witness.algebra
    gens = [list(range(base.sizes[0])), [P.identity] + ([P.size] if zero else [])]
    return generate_subalgebra(base, gens).sizes == base.sizes


def _bounded_identities(base: FiniteAlgebra, generator: FiniteAlgebra, n: int) -> bool:
    identities = vn_basis(generator, n)
    log.info(f"Базис тождеств от {n} переменных: {len(identities)} тождеств.")
    return all(holds(base, identity) for identity in identities)


def growth_row(
    flavor: Flavor,
    n: int,
    ell: int,
    A: ActionAlgebra | None = None,
    k: int | None = None,
    p: int = 3,
    q: int = 2,
    max_length: int = 4,
    full_limit: int = FULL_LIMIT,
    materialize_limit: int = MATERIALIZE_LIMIT,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> GrowthRow:
    """
    Строит свидетеля для одного ℓ и проверяет его на доступных уровнях.

    Свидетели: B(n, ℓ)* (d = n + 1), (B(n, ℓ)⁰)* (d = n + 2) и автоматная
    алгебра по B(k, ℓ)⁰ (d = k + 4, нуль учитывается как отдельная
    порождающая). Уровни: полный in_Vn, если перебор наборов образующих мал;
    сертификаты всех (n, n)-порождённых подалгебр двухсортной алгебры;
    выполнение базиса тождеств от n переменных. Для автоматного варианта
    последний уровень — фрагмент Δ ∪ Ψ при |w| ≤ max_length.

    Raises:
        BudgetExceeded: Если свидетель не строится в пределах лимитов.
    """

    A = A or default_generator()
    width = (k or n) if flavor == "automatic" else n
    witness = build_B(width, ell, p, q)
    P = witness.group
    zero = flavor != "star"
    notes = []

    if flavor == "star":
        d, size = n + 1, (n + 1) * P.size
        base, target = witness.algebra, A.algebra
        W = star(base) if size <= materialize_limit else None
        W_target = star(target)
    elif flavor == "zero":
        d, size = n + 2, (n + 2) * (P.size + 1)
        base, target = adjoin_zero(witness.algebra), adjoin_zero(A.algebra)
        W = star(base) if size <= materialize_limit else None
        W_target = star(target)
    else:
        d, size = width + 4, width + 1 + P.size + 1
        base, target = adjoin_zero(witness.algebra), adjoin_zero(A.algebra)
        W = automatic_from_two_sorted(base)
        W_target = automatic_from_action(A)
    if W is None:
        notes.append("generation via two-sorted closure")

    checks = {}
    if flavor == "automatic":
        gens = list(range(width + 1)) + [width + 1 + P.identity, size - 1]
        checks["generation"] = generate_subalgebra(W, [gens]).sizes == W.sizes
    else:
        checks["generation"] = _generation_checked(witness, zero, W)

    if W is not None and W.sizes[0] ** n <= full_limit:
        checks[LEVELS[0]] = bool(in_Vn(W, W_target, n))
    else:
        notes.append("full in_Vn out of reach")

    sweep = structural_sweep(witness, A, width, exhaustive=P.size <= exhaustive_limit, zero=zero)
    checks[LEVELS[1]] = sweep.passed

    if flavor == "automatic":
        sigma = [list(A.action.act[g]) for g in range(A.group.size)]
        fragment = boozer_fragment_check(A.group, A.set_size, sigma, max_length, max_length, W)
        checks[LEVELS[2]] = fragment.passed
    else:
        checks[LEVELS[2]] = _bounded_identities(base, target, n)

    passed = all(checks.values())
    level = next((name for name in LEVELS if checks.get(name)), "none")
    row = GrowthRow(flavor, n, d, ell, witness.c, size, level, passed, "; ".join(notes))
    log.info(f"Рост {flavor}: ℓ = {ell}, мощность {size}, уровень {level}, итог {passed}.")
    return row


def growth_experiment(
    n: int,
    ells: Sequence[int],
    flavor: Flavor,
    A: ActionAlgebra | None = None,
    k: int | None = None,
    **options,
) -> list[GrowthRow]:
    """
    Таблица роста свидетелей по списку ℓ.

    Строка, не уложившаяся в лимиты, записывается с уровнем "skipped" и
    passed = false; остальные строки строятся независимо.
    """

    rows = []
    for ell in ells:
        try:
            rows.append(growth_row(flavor, n, ell, A, k, **options))
        except BudgetExceeded as exc:
            log.warning(f"Рост {flavor}: строка ℓ = {ell} пропущена ({exc}).")
            d = n + 1 if flavor == "star" else n + 2 if flavor == "zero" else (k or n) + 4
            rows.append(GrowthRow(flavor, n, d, ell, 0, 0, "skipped", False, str(exc)))
    return rows


def growth_csv(rows: Sequence[GrowthRow]) -> str:
    return "\n".join([CSV_HEADER] + [row.csv_line() for row in rows]) + "\n"


def write_growth_csv(out_dir: str, rows: Sequence[GrowthRow]) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "growth.csv")
    with open(path, "w", encoding="utf-8") as file:
        file.write(growth_csv(rows))
    log.info(f"Таблица роста записана в {path}.")
    return path


def sizes_increase(rows: Sequence[GrowthRow]) -> bool:
    """Строго ли растут мощности свидетелей по непропущенным строкам."""

    sizes = [row.achieved_size for row in rows if row.level != "skipped"]
    return all(a < b for a, b in zip(sizes, sizes[1:]))
