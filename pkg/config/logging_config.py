import os
import sys

from loguru import logger

from config.settings import settings


def setup_logger(path_log_file: str, level: str = "INFO") -> logger:
    """
    Настраивает логирование loguru для вычислений finvar.

    Подробный журнал (с модулем и функцией, ротацией по 50 МБ и хранением
    последних десяти файлов) пишется в файл. В stderr попадают только
    предупреждения и ошибки, чтобы не смешиваться с текстом отчётов,
    который команды печатают в stdout.

    Args:
        path_log_file (str): Путь к файлу лога.
        level (str): Минимальный уровень сообщений для файла лога.

    Returns:
        logger: Настроенный объект логгера loguru.
    """

    os.makedirs(os.path.dirname(path_log_file), exist_ok=True)

    logger.remove()
    logger.add(sys.stderr, level="WARNING", format="<level>{level}</level>: {message}")
    logger.add(
        path_log_file,
        format="finvar {time:YYYY-MM-DD HH:mm:ss,SSS} {level} {name}:{function} {message}",
        level=level.upper(),
        rotation="50 MB",
        retention=10,
        backtrace=True,
        diagnose=True,
    )

    return logger


log = setup_logger(settings.path_log_file, settings.log_level)
