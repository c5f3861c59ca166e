import itertools
from typing import Sequence

import numpy as np

from groups.finite_group import FiniteGroup
from utils.exceptions import FinvarError


Permutation = tuple[int, ...]


def cycle_notation(perm: Sequence[int]) -> str:
    """Запись перестановки циклами с нумерацией точек с единицы."""

    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        current = perm[start]
        while current != start:
            cycle.append(current)
            seen.add(current)
            current = perm[current]
        cycles.append("(" + " ".join(str(i + 1) for i in cycle) + ")")
    return "".join(cycles) or "()"


def compose(g: Sequence[int], h: Sequence[int]) -> Permutation:
    """Произведение gh как композиция отображений: сначала h, затем g."""

    return tuple(g[i] for i in h)


class PermutationGroup(FiniteGroup):
    """
    Группа перестановок степени degree; элементы упорядочены лексикографически.

    Произведение gh действует как g∘h, поэтому естественное действие на точках
    левое: (gh)·i = g·(h·i).

    Attributes:
        _permutations (tuple[Permutation, ...]): Перестановка каждого элемента.
    """

    def __init__(self, permutations: Sequence[Permutation]) -> None:
        perms = tuple(sorted(set(tuple(int(i) for i in p) for p in permutations)))
        index = {p: i for i, p in enumerate(perms)}
        try:
            mult = [[index[compose(g, h)] for h in perms] for g in perms]
        except KeyError:
            raise FinvarError("Перестановки не замкнуты относительно композиции.")
        super().__init__(mult, [cycle_notation(p) for p in perms])
        self._permutations = perms
        self._index = index

    @property
    def degree(self) -> int:
        return len(self._permutations[0])

    @property
    def permutations(self) -> tuple[Permutation, ...]:
        return self._permutations

    def element(self, perm: Sequence[int]) -> int:
        """Номер элемента по перестановке."""

        return self._index[tuple(perm)]

    def from_cycles(self, *cycles: Sequence[int]) -> int:
        """Номер элемента по циклам с нумерацией точек с единицы."""

        perm = list(range(self.degree))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                perm[a - 1] = b - 1
        return self.element(perm)


def permutation_group(generators: Sequence[Sequence[int]], degree: int | None = None) -> PermutationGroup:
    """
    Группа перестановок, порождённая заданными перестановками.

    Raises:
        FinvarError: Если перестановки разной степени или не являются биекциями.
    """

    if degree is None:
        if not generators:
            raise FinvarError("Для пустого набора образующих нужна степень.")
        degree = len(generators[0])
    gens = [tuple(int(i) for i in g) for g in generators]
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise FinvarError(f"{g} не является перестановкой степени {degree}.")
    identity = tuple(range(degree))
    found = {identity}
    frontier = [identity]
    while frontier:
        following = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in found:
                    found.add(y)
                    following.append(y)
        frontier = following
    return PermutationGroup(found)


def symmetric(degree: int) -> PermutationGroup:
    return PermutationGroup(itertools.permutations(range(degree)))


def cyclic(order: int) -> PermutationGroup:
    """Циклическая группа как группа сдвигов на order точках."""

    if order == 1:
        return PermutationGroup([(0,)])
    return permutation_group([tuple((i + 1) % order for i in range(order))])


def dihedral(n: int) -> PermutationGroup:
    """Группа симметрий правильного n-угольника порядка 2n (n ≥ 3)."""

    if n < 3:
        raise FinvarError("Диэдральная группа как группа перестановок задаётся при n ≥ 3.")
    rotation = tuple((i + 1) % n for i in range(n))
    reflection = tuple((-i) % n for i in range(n))
    return permutation_group([rotation, reflection])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Прямое произведение; пара (a, b) имеет номер a·|H| + b."""

    mult = (
        G.mult[:, None, :, None] * H.size + H.mult[None, :, None, :]
    ).reshape(G.size * H.size, G.size * H.size)
    labels = [f"({G.label(a)},{H.label(b)})" for a in range(G.size) for b in range(H.size)]
    return FiniteGroup(mult, labels)


def elementary_abelian(q: int, n: int) -> FiniteGroup:
    """Группа (Z_q)^n; вектор кодируется в системе счисления по основанию q."""

    size = q ** n
    codes = np.arange(size)
    digits = [(codes // q ** (n - 1 - i)) % q for i in range(n)]
    total = np.zeros((size, size), dtype=np.int64)
    for i, d in enumerate(digits):
        total += ((d[:, None] + d[None, :]) % q) * q ** (n - 1 - i)
    labels = ["".join(str(int(d[c])) for d in digits) for c in codes] if n else ["0"]
    return FiniteGroup(total, labels)


def heisenberg(p: int) -> FiniteGroup:
    """
    Унитреугольные матрицы 3 × 3 над Z_p порядка p³.

    Матрица с наддиагональю (a, b) и углом c имеет номер a·p² + b·p + c;
    (a, b, c)(a′, b′, c′) = (a + a′, b + b′, c + c′ + a·b′).
    """

    codes = np.arange(p ** 3)
    a, b, c = codes // (p * p), (codes // p) % p, codes % p
    mult = (
        ((a[:, None] + a[None, :]) % p) * p * p
        + ((b[:, None] + b[None, :]) % p) * p
        + (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    )
    return FiniteGroup(mult.astype(np.int64))
