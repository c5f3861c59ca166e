import json
import os
from dataclasses import dataclass, field
from typing import Any, Literal

from config.logging_config import log


Status = Literal["PASS", "FAIL", "SKIP"]


def format_inputs(inputs: Any) -> str:
    """Детерминированная запись входных данных проверки."""

    if isinstance(inputs, str):
        return inputs
    return json.dumps(inputs, ensure_ascii=False, sort_keys=True, separators=(",", ":"), default=str)


@dataclass(frozen=True)
class Assertion:
    """
    Одна проверка сценария.

    Attributes:
        status (Status): PASS, FAIL или SKIP.
        operation (str): Вызванная операция.
        inputs (str): Сериализованные входные данные.
        observed (str): Наблюдаемый результат.
    """

    status: Status
    operation: str
    inputs: str
    observed: str

    def line(self, scenario: str) -> str:
        return f"[{self.status}] {scenario}: {self.operation}({self.inputs}) -> {self.observed}"


@dataclass
class ScenarioReport:
    """
    Отчёт о выполнении сценария.

    Attributes:
        scenario (str): Идентификатор сценария.
        parameters (dict): Параметры запуска (зерно, лимиты).
        assertions (list[Assertion]): Проверки в порядке выполнения.
        elapsed (float): Время выполнения в секундах.
        artifacts (list[str]): Пути к записанным файлам.
        skipped_reason (str): Причина пропуска, если сценарий прерван лимитом.
    """

    scenario: str
    parameters: dict = field(default_factory=dict)
    assertions: list[Assertion] = field(default_factory=list)
    elapsed: float = 0.0
    artifacts: list[str] = field(default_factory=list)
    skipped_reason: str = ""

    def check(self, operation: str, inputs: Any, observed: Any, ok: bool) -> bool:
        """Записывает проверку и возвращает её результат."""

        status: Status = "PASS" if ok else "FAIL"
        assertion = Assertion(status, operation, format_inputs(inputs), str(observed))
        self.assertions.append(assertion)
        if not ok:
            log.error(f"Проверка не прошла: {assertion.line(self.scenario)}")
        return ok

    def expect(self, operation: str, inputs: Any, observed: Any, expected: Any) -> bool:
        return self.check(operation, inputs, observed, observed == expected)

    def skip(self, operation: str, inputs: Any, reason: str) -> None:
        self.assertions.append(Assertion("SKIP", operation, format_inputs(inputs), reason))
        self.skipped_reason = self.skipped_reason or reason
        log.warning(f"Сценарий {self.scenario}: {operation} пропущено ({reason}).")

    @property
    def failed(self) -> int:
        return sum(a.status == "FAIL" for a in self.assertions)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def lines(self) -> list[str]:
        return [a.line(self.scenario) for a in self.assertions]


@dataclass
class SuiteReport:
    """Отчёты сценариев, упорядоченные по идентификатору."""

    seed: int
    reports: list[ScenarioReport] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(r.failed for r in self.reports)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def text(self, timings: bool = True) -> str:
        """
        Текст report.txt.

        Строки проверок не зависят от времени выполнения; время выводится
        отдельным блоком в конце и при сравнении запусков отбрасывается.
        """

        lines = [f"# finvar verify-paper seed={self.seed}"]
        for report in sorted(self.reports, key=lambda r: r.scenario):
            lines.extend(report.lines())
        total = sum(len(r.assertions) for r in self.reports)
        lines.append(f"# assertions={total} failed={self.failed}")
        if timings:
            lines.append("# timings")
            for report in sorted(self.reports, key=lambda r: r.scenario):
                lines.append(f"# {report.scenario} {report.elapsed:.2f}s")
        return "\n".join(lines) + "\n"

    def write(self, out_dir: str) -> str:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, "report.txt")
        with open(path, "w", encoding="utf-8") as file:
            file.write(self.text())
        log.info(f"Отчёт записан в {path}.")
        return path


def strip_timings(text: str) -> str:
    """Отбрасывает блок времени выполнения для сравнения отчётов."""

    return text.split("# timings\n", 1)[0]
