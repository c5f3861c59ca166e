from dataclasses import dataclass

from utils.exceptions import InvalidSignature, UnknownSymbol


@dataclass(frozen=True)
class OpSymbol:
    """
    Символ операции многосортной сигнатуры.

    Attributes:
        name (str): Имя символа.
        arg_sorts (tuple[int, ...]): Сорта аргументов.
        out_sort (int): Сорт значения.
    """

    name: str
    arg_sorts: tuple[int, ...]
    out_sort: int

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True)
class Signature:
    """
    Многосортная сигнатура: число сортов и упорядоченный список символов.

    Attributes:
        sort_count (int): Число сортов.
        symbols (tuple[OpSymbol, ...]): Символы операций.
        sort_names (tuple[str, ...]): Имена сортов (для файлов и вывода).
    """

    sort_count: int
    symbols: tuple[OpSymbol, ...]
    sort_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.sort_count < 1:
            raise InvalidSignature("Число сортов должно быть положительным.")
        names = [symbol.name for symbol in self.symbols]
        if len(set(names)) != len(names):
            raise InvalidSignature(f"Имена символов повторяются: {names}.")
        for symbol in self.symbols:
            sorts = (*symbol.arg_sorts, symbol.out_sort)
            if any(not 0 <= sort < self.sort_count for sort in sorts):
                raise InvalidSignature(
                    f"Символ {symbol.name} ссылается на несуществующий сорт."
                )
        if not self.sort_names:
            default = tuple(f"S{i}" for i in range(self.sort_count))
            object.__setattr__(self, "sort_names", default)
        elif len(self.sort_names) != self.sort_count:
            raise InvalidSignature("Число имён сортов не совпадает с числом сортов.")

    def index(self, name: str) -> int:
        """
        Возвращает номер символа по имени.

        Raises:
            UnknownSymbol: Если символа нет в сигнатуре.
        """

        for i, symbol in enumerate(self.symbols):
            if symbol.name == name:
                return i
        raise UnknownSymbol(f"Символ '{name}' отсутствует в сигнатуре.")

    def matches(self, other: "Signature") -> bool:
        """Сравнивает сигнатуры без учёта имён сортов."""

        return self.sort_count == other.sort_count and self.symbols == other.symbols

    def has_symbol(self, name: str) -> bool:
        return any(symbol.name == name for symbol in self.symbols)

    def sort_index(self, name: str) -> int:
        try:
            return self.sort_names.index(name)
        except ValueError:
            raise UnknownSymbol(f"Сорт '{name}' отсутствует в сигнатуре.")


TAU = Signature(2, (OpSymbol("s", (0, 1), 1),), ("G", "S"))
TAU_STAR = Signature(1, (OpSymbol("d", (0, 0), 0), OpSymbol("f", (0,), 0)), ("C",))
AUTOMATIC = Signature(1, (OpSymbol(".", (0, 0), 0),), ("A",))
GROUP = Signature(1, (OpSymbol("mul", (0, 0), 0),), ("G",))


def is_action_signature(signature: Signature) -> bool:
    """Проверяет, что сигнатура совпадает с двухсортной сигнатурой τ с точностью до имён."""

    return (
        signature.sort_count == 2
        and len(signature.symbols) == 1
        and signature.symbols[0].arg_sorts == (0, 1)
        and signature.symbols[0].out_sort == 1
    )
