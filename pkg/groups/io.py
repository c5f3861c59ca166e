import json

from config.logging_config import log
from groups.action import GroupAction
from groups.catalog import permutation_group
from groups.finite_group import FiniteGroup
from utils.exceptions import FinvarError, InvalidAlgebraFile
from utils.utils import read_json, write_json


def group_to_json(G: FiniteGroup) -> dict:
    data = {"mult": G.mult.tolist()}
    if G.labels is not None:
        data["labels"] = list(G.labels)
    return data


def group_from_json(data: dict) -> FiniteGroup:
    """
    Восстанавливает группу из словаря.

    Допускаются два вида записи: таблица умножения {"mult": …, "labels"?} или
    порождающие перестановки {"permutations": [[…], …]} с точками от нуля.

    Raises:
        InvalidAlgebraFile: Если структура словаря некорректна.
    """

    try:
        if "permutations" in data:
            return permutation_group([list(p) for p in data["permutations"]])
        return FiniteGroup(data["mult"], data.get("labels"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidAlgebraFile(f"Некорректная структура файла группы: {exc}")
    except FinvarError as exc:
        raise InvalidAlgebraFile(f"Некорректная группа в файле: {exc}")


def action_to_json(action: GroupAction) -> dict:
    return {
        "group": group_to_json(action.group),
        "set_size": action.set_size,
        "act": action.act.tolist(),
    }


def action_from_json(data: dict) -> GroupAction:
    """
    Восстанавливает действие из словаря {"group": …, "set_size": n, "act"?}.

    Если таблица "act" не указана, группа должна быть задана перестановками,
    и берётся её естественное действие.

    Raises:
        InvalidAlgebraFile: Если структура словаря некорректна.
    """

    group = group_from_json(data.get("group", {}))
    try:
        if "act" not in data:
            act = list(group.permutations)
            return GroupAction(group, group.degree, act)
        return GroupAction(group, int(data["set_size"]), data["act"])
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InvalidAlgebraFile(f"Некорректная структура файла действия: {exc}")
    except FinvarError as exc:
        raise InvalidAlgebraFile(f"Некорректное действие в файле: {exc}")


def _read(file_path: str) -> dict:
    try:
        return read_json(file_path)
    except (IOError, json.JSONDecodeError) as exc:
        log.error(f"Ошибка при чтении файла {type(exc).__name__}: {exc}")
        raise InvalidAlgebraFile(f"Не удалось прочитать файл {file_path}: {exc}")


def read_group(file_path: str) -> FiniteGroup:
    return group_from_json(_read(file_path))


def read_action(file_path: str) -> GroupAction:
    return action_from_json(_read(file_path))


def write_group(file_path: str, G: FiniteGroup) -> None:
    write_json(file_path, group_to_json(G))
    log.info(f"Группа порядка {G.size} записана в {file_path}.")


def write_action(file_path: str, action: GroupAction) -> None:
    write_json(file_path, action_to_json(action))
    log.info(f"Действие на {action.set_size} точках записано в {file_path}.")
