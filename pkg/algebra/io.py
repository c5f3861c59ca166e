import json

from algebra.finite_algebra import FiniteAlgebra
from algebra.signature import OpSymbol, Signature
from config.logging_config import log
from utils.exceptions import FinvarError, InvalidAlgebraFile
from utils.utils import read_json, write_json


def algebra_to_json(alg: FiniteAlgebra) -> dict:
    """
    Преобразует алгебру в словарь формата файла алгебры.

    Args:
        alg (FiniteAlgebra): Алгебра.

    Returns:
        dict: Словарь с ключами "sorts", "ops" и необязательными "labels", "metadata".
    """

    names = alg.signature.sort_names
    data = {
        "sorts": [{"name": name, "size": size} for name, size in zip(names, alg.sizes)],
        "ops": [
            {
                "name": symbol.name,
                "args": [names[sort] for sort in symbol.arg_sorts],
                "out": names[symbol.out_sort],
                "table": [int(x) for x in table],
            }
            for symbol, table in zip(alg.signature.symbols, alg.tables)
        ],
    }
    if alg.labels is not None:
        data["labels"] = {name: list(labels) for name, labels in zip(names, alg.labels)}
    if alg.metadata:
        data["metadata"] = alg.metadata
    return data


def algebra_from_json(data: dict) -> FiniteAlgebra:
    """
    Восстанавливает алгебру из словаря формата файла алгебры.

    Raises:
        InvalidAlgebraFile: Если структура словаря некорректна.
    """

    try:
        names = tuple(str(sort["name"]) for sort in data["sorts"])
        sizes = [int(sort["size"]) for sort in data["sorts"]]
        position = {name: i for i, name in enumerate(names)}
        symbols = tuple(
            OpSymbol(
                str(op["name"]),
                tuple(position[name] for name in op["args"]),
                position[op["out"]],
            )
            for op in data["ops"]
        )
        tables = [op["table"] for op in data["ops"]]
        labels = None
        if data.get("labels"):
            labels = [data["labels"][name] for name in names]
        signature = Signature(len(names), symbols, names)
        return FiniteAlgebra(signature, sizes, tables, labels, data.get("metadata"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidAlgebraFile(f"Некорректная структура файла алгебры: {exc}")
    except FinvarError as exc:
        raise InvalidAlgebraFile(f"Некорректная алгебра в файле: {exc}")


def read_algebra(file_path: str) -> FiniteAlgebra:
    """
    Читает алгебру из JSON-файла.

    Raises:
        InvalidAlgebraFile: Если файл не читается или содержит некорректную алгебру.
    """

    try:
        data = read_json(file_path)
    except (IOError, json.JSONDecodeError) as exc:
        log.error(f"Ошибка при чтении файла алгебры {type(exc).__name__}: {exc}")
        raise InvalidAlgebraFile(f"Не удалось прочитать файл {file_path}: {exc}")
    return algebra_from_json(data)


def write_algebra(file_path: str, alg: FiniteAlgebra) -> None:
    write_json(file_path, algebra_to_json(alg))
    log.info(f"Алгебра {alg.sizes} записана в {file_path}.")
