import json
import math
import os
from typing import Sequence

import numpy as np

from utils.exceptions import BudgetExceeded, NotPrime


def radix_strides(radices: Sequence[int]) -> list[int]:
    """
    Возвращает веса разрядов смешанной системы счисления (первый разряд старший).

    Args:
        radices (Sequence[int]): Основания разрядов.

    Returns:
        list[int]: Вес каждого разряда.
    """

    strides = [1] * len(radices)
    for i in range(len(radices) - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]
    return strides


def encode_mixed(digits: Sequence[int], radices: Sequence[int]) -> int:
    """
    Кодирует набор разрядов одним числом, первый разряд старший.

    Args:
        digits (Sequence[int]): Значения разрядов.
        radices (Sequence[int]): Основания разрядов.

    Returns:
        int: Код набора.
    """

    code = 0
    for digit, radix in zip(digits, radices):
        code = code * radix + int(digit)
    return code


def decode_mixed(code: int, radices: Sequence[int]) -> tuple[int, ...]:
    """
    Раскладывает код на разряды смешанной системы счисления.

    Args:
        code (int): Код набора.
        radices (Sequence[int]): Основания разрядов.

    Returns:
        tuple[int, ...]: Разряды, первый разряд старший.
    """

    digits = []
    for radix in reversed(radices):
        code, digit = divmod(code, radix)
        digits.append(digit)
    return tuple(reversed(digits))


def decode_columns(count: int, radices: Sequence[int]) -> list[np.ndarray]:
    """
    Возвращает столбцы всех наборов 0..count-1 в лексикографическом порядке.

    Args:
        count (int): Число наборов, равное произведению оснований.
        radices (Sequence[int]): Основания разрядов.

    Returns:
        list[np.ndarray]: Для каждого разряда массив его значений по всем наборам.
    """

    codes = np.arange(count, dtype=np.int64)
    columns = []
    for stride, radix in zip(radix_strides(radices), radices):
        columns.append((codes // stride) % radix)
    return columns


def checked_product(factors: Sequence[int], limit: int, what: str) -> int:
    """
    Перемножает числа с проверкой лимита.

    Args:
        factors (Sequence[int]): Сомножители.
        limit (int): Допустимый максимум произведения.
        what (str): Описание величины для сообщения об ошибке.

    Returns:
        int: Произведение.

    Raises:
        BudgetExceeded: Если произведение превышает лимит.
    """

    total = math.prod(int(f) for f in factors)
    if total > limit:
        raise BudgetExceeded(f"{what}: {total} превышает лимит {limit}.")
    return total


def is_prime(value: int) -> bool:
    if value < 2:
        return False
    return all(value % d for d in range(2, math.isqrt(value) + 1))


def require_prime(*values: int) -> None:
    """
    Проверяет, что все переданные числа простые.

    Raises:
        NotPrime: Если какое-либо число не является простым.
    """

    for value in values:
        if not is_prime(value):
            raise NotPrime(f"Число {value} не является простым.")


def read_json(file_path: str) -> dict:
    with open(file_path, "r", encoding="utf-8") as file_data:
        return json.load(file_data)


def write_json(file_path: str, data: dict) -> None:
    """
    Записывает словарь в JSON-файл, создавая недостающие директории.

    Args:
        file_path (str): Путь к файлу.
        data (dict): Данные для записи.
    """

    folder = os.path.dirname(file_path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as file_data:
        json.dump(data, file_data, indent=2, ensure_ascii=False)
