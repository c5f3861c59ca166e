class FinvarError(Exception):
    """Базовая ошибка рабочего стенда конечных алгебр."""

    def __init__(self, message="Ошибка при работе с конечной алгеброй."):
        super().__init__(message)


class InvalidSignature(FinvarError):
    """Ошибка, возникающая, если сигнатура задана некорректно."""

    def __init__(self, message="Некорректная сигнатура."):
        super().__init__(message)


class SignatureMismatch(FinvarError):
    """Ошибка, возникающая, если алгебры заданы в разных сигнатурах."""

    def __init__(self, message="Сигнатуры алгебр не совпадают."):
        super().__init__(message)


class SortMismatch(FinvarError):
    """Ошибка, возникающая при несовпадении сортов терма, переменной или элемента."""

    def __init__(self, message="Несовпадение сортов."):
        super().__init__(message)


class UnboundVariable(FinvarError):
    """Ошибка, возникающая, если переменной терма не присвоено значение."""

    def __init__(self, message="Переменной не присвоено значение."):
        super().__init__(message)


class EmptySortUnreachable(FinvarError):
    """Ошибка, возникающая, если замыкание оставляет какой-либо сорт пустым."""

    def __init__(self, message="Замыкание оставляет пустой сорт."):
        super().__init__(message)


class BudgetExceeded(FinvarError):
    """Ошибка, возникающая при превышении заданного лимита вычислений."""

    def __init__(self, message="Превышен лимит вычислений."):
        super().__init__(message)


class CosetOverflow(BudgetExceeded):
    """Ошибка, возникающая, если перечисление смежных классов достигло лимита."""

    def __init__(self, message="Перечисление смежных классов достигло лимита."):
        super().__init__(message)


class NotACongruence(FinvarError):
    """Ошибка, возникающая, если разбиение не согласовано с операциями."""

    def __init__(self, message="Разбиение не является конгруэнцией."):
        super().__init__(message)


class TermSyntaxError(FinvarError):
    """Синтаксическая ошибка в записи терма или тождества."""

    def __init__(self, message="Синтаксическая ошибка в записи терма.", position=0):
        self.position = position
        super().__init__(f"{message} (позиция {position})")


class UnknownSymbol(FinvarError):
    """Ошибка, возникающая при использовании символа, отсутствующего в сигнатуре."""

    def __init__(self, message="Символ отсутствует в сигнатуре."):
        super().__init__(message)


class ArityMismatch(FinvarError):
    """Ошибка, возникающая при неверном числе аргументов операции."""

    def __init__(self, message="Неверное число аргументов операции."):
        super().__init__(message)


class NotAWordTerm(FinvarError):
    """Ошибка, возникающая, если терм не имеет вида [w]y."""

    def __init__(self, message="Терм не является словарным термом [w]y."):
        super().__init__(message)


class NotZeroAdjoined(FinvarError):
    """Ошибка, возникающая, если у алгебры не отмечены нулевые элементы."""

    def __init__(self, message="У алгебры не отмечены нулевые элементы."):
        super().__init__(message)


class NotPrime(FinvarError):
    """Ошибка, возникающая, если параметр должен быть простым числом."""

    def __init__(self, message="Ожидалось простое число."):
        super().__init__(message)


class NotExtendable(FinvarError):
    """Ошибка, возникающая, если отображение образующих не продолжается до автоморфизма."""

    def __init__(self, message="Отображение образующих не продолжается до автоморфизма."):
        super().__init__(message)


class NotAHomomorphism(FinvarError):
    """Ошибка, возникающая, если отображение не является гомоморфизмом."""

    def __init__(self, message="Отображение не является гомоморфизмом."):
        super().__init__(message)


class ActionMismatch(FinvarError):
    """Ошибка, возникающая, если действие задано для другой группы."""

    def __init__(self, message="Действие задано для другой группы."):
        super().__init__(message)


class DomainViolation(FinvarError):
    """Ошибка, возникающая, если частичное отображение выходит за пределы множества."""

    def __init__(self, message="Частичное отображение выходит за пределы множества."):
        super().__init__(message)


class NotInOmegaTauStar(FinvarError):
    """Ошибка, возникающая, если алгебра не удовлетворяет тождествам Ω_τ*."""

    def __init__(
        self,
        message="Алгебра не удовлетворяет тождествам Ω_τ*.",
        identity=None,
        witness=None,
    ):
        self.identity = identity
        self.witness = witness
        super().__init__(message)


class WitnessCheckFailed(FinvarError):
    """Внутренняя ошибка: построенная группа не прошла проверку свойства (∗)."""

    def __init__(self, message="Построенная группа не прошла проверку свойства (∗)."):
        super().__init__(message)


class CosetDivisionFailure(FinvarError):
    """Внутренняя ошибка: второй универсум не является объединением смежных классов."""

    def __init__(self, message="Второй универсум не является объединением смежных классов."):
        super().__init__(message)


class InvalidAlgebraFile(FinvarError):
    """Ошибка, возникающая при чтении некорректного файла алгебры."""

    def __init__(self, message="Некорректный файл алгебры."):
        super().__init__(message)
