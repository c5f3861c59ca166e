import os

from dotenv import load_dotenv, find_dotenv
from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict


env_file = find_dotenv(usecwd=True)
if env_file:
    try:
        load_dotenv(env_file)
    except Exception as exc:
        exit(f"Ошибка загрузки .env файла: {exc}")


class Settings(BaseSettings):
    element_budget: int = 200_000
    assignment_budget: int = 10_000_000
    coset_limit: int = 1_000_000
    relator_cap: int = 100_000
    search_budget: int = 2_000_000
    group_check_limit: int = 256
    m_max: int = 3
    seed: int = 20221201
    budget: int | None = None
    path_log_file: str = "logs/finvar.log"
    log_level: str = "INFO"

    model_config = SettingsConfigDict(env_prefix="FINVAR_", extra="ignore")

    def __init__(self, **kwargs):
        """
        Инициализирует экземпляр Settings.

        Общий лимит FINVAR_BUDGET, если задан, заменяет лимиты на число элементов,
        число подстановок и число смежных классов. Относительный путь к файлу лога
        отсчитывается от корня проекта.
        """

        super().__init__(**kwargs)
        project_root = os.path.abspath(
            os.path.join(os.path.dirname(__file__), os.path.pardir)
        )
        if self.budget is not None:
            self.budget = abs(self.budget)
            self.element_budget = self.budget
            self.assignment_budget = self.budget
            self.coset_limit = self.budget

        if not os.path.isabs(self.path_log_file):
            self.path_log_file = os.path.join(project_root, self.path_log_file)


try:
    settings = Settings()
except ValidationError as exc:
    dict_fields = {
        "element_budget": "FINVAR_ELEMENT_BUDGET",
        "assignment_budget": "FINVAR_ASSIGNMENT_BUDGET",
        "coset_limit": "FINVAR_COSET_LIMIT",
        "relator_cap": "FINVAR_RELATOR_CAP",
        "search_budget": "FINVAR_SEARCH_BUDGET",
        "group_check_limit": "FINVAR_GROUP_CHECK_LIMIT",
        "m_max": "FINVAR_M_MAX",
        "seed": "FINVAR_SEED",
        "budget": "FINVAR_BUDGET",
        "path_log_file": "FINVAR_PATH_LOG_FILE",
        "log_level": "FINVAR_LOG_LEVEL",
    }

    wrong_variables = [
        dict_fields[error["loc"][0]]
        for error in exc.errors()
        if error["loc"] and error["loc"][0] in dict_fields
    ]

    variables_str = ", ".join(wrong_variables) or "неизвестно"
    exit(
        f"Некорректные значения переменных окружения: {variables_str}.\n"
        "Исправьте их в окружении или в файле .env."
    )
