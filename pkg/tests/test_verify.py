import pytest

from config.settings import settings
from constructions.automatic import automatic_from_action
from constructions.star import star
from utils.exceptions import BudgetExceeded, FinvarError
from verify import growth
from verify.fragment import automatic_shape, boozer_fragment_check, mapping_total
from verify.growth import CSV_HEADER, GrowthRow, growth_csv, growth_experiment, sizes_increase, write_growth_csv
from verify.report import Assertion, ScenarioReport, SuiteReport, strip_timings
from verify.scenarios import SCENARIOS, min_generation, random_suite, run_scenario, small_algebras, verify_paper_suite


FAST_SCENARIOS = ["apaq", "dihedral-ladder", "free-algebra", "s3-sizes"]


def test_assertion_line():
    assertion = Assertion("PASS", "star", "A(S3)", "18")
    assert assertion.line("s3-sizes") == "[PASS] s3-sizes: star(A(S3)) -> 18"


def test_scenario_report_statuses():
    report = ScenarioReport("demo")
    assert report.expect("size", {"n": 2, "a": 1}, 4, 4)
    assert not report.check("size", [1, 2], 5, False)
    report.skip("holds", "big", "лимит")
    assert [a.status for a in report.assertions] == ["PASS", "FAIL", "SKIP"]
    assert report.assertions[0].inputs == '{"a":1,"n":2}'
    assert report.failed == 1 and not report.passed
    assert report.skipped_reason == "лимит"


def test_suite_text_ignores_timings_after_strip(tmp_path):
    first = ScenarioReport("b", elapsed=1.5)
    first.expect("op", "x", 1, 1)
    second = ScenarioReport("a", elapsed=0.25)
    second.expect("op", "y", 2, 2)
    suite = SuiteReport(7, [first, second])
    text = suite.text()
    lines = text.splitlines()
    assert lines[0] == "# finvar verify-paper seed=7"
    assert lines[1].startswith("[PASS] a:")
    assert "# assertions=2 failed=0" in lines
    assert "# a 0.25s" in lines
    slower = SuiteReport(7, [ScenarioReport("b", assertions=first.assertions, elapsed=9.0), second])
    assert strip_timings(slower.text()) == strip_timings(text) == suite.text(timings=False)
    path = suite.write(str(tmp_path / "out"))
    with open(path, encoding="utf-8") as file:
        assert file.read() == text


def test_fast_scenarios_pass():
    suite = verify_paper_suite(FAST_SCENARIOS, seed=settings.seed)
    assert suite.passed, suite.text()
    assert [r.scenario for r in suite.reports] == sorted(FAST_SCENARIOS)
    assert all(r.assertions for r in suite.reports)


def test_suite_is_deterministic_across_workers():
    sequential = verify_paper_suite(["apaq", "s3-sizes"], seed=3)
    parallel = verify_paper_suite(["s3-sizes", "apaq"], seed=3, workers=2)
    assert strip_timings(sequential.text()) == strip_timings(parallel.text())


def test_unknown_scenario():
    with pytest.raises(KeyError):
        verify_paper_suite(["no-such-scenario"])


def test_budget_turns_scenario_into_skip(monkeypatch):
    def exhausted(report, seed):
        raise BudgetExceeded("лимит исчерпан")

    monkeypatch.setitem(SCENARIOS, "s3-sizes", exhausted)
    report = run_scenario("s3-sizes", 1)
    assert report.passed
    assert report.assertions[0].status == "SKIP"


@pytest.mark.slow
@pytest.mark.parametrize("scenario", ["barr-roundtrip", "boozer-fragment", "build-b", "f1-f2", "omega-tau-star", "witness-sweep"])
def test_long_scenarios_pass(scenario):
    report = run_scenario(scenario, settings.seed)
    assert report.passed, "\n".join(report.lines())


def test_random_suite_is_seeded():
    first, again = random_suite(11, 5), random_suite(11, 5)
    assert [name for name, _ in first] == [name for name, _ in again]
    assert all(a.algebra.same_tables(b.algebra) for (_, a), (_, b) in zip(first, again))
    assert all(A.faithful for _, A in first)


def test_small_algebras_generation():
    names = dict(small_algebras())
    assert min_generation(names["A(C2,2)"].algebra) == 2
    assert min_generation(star(names["A(C2,2)"].algebra)) == 2
    assert min_generation(names["A(C2,1)"].algebra) == 2


def test_boozer_fragment_total_action(s3_action):
    sigma = [list(s3_action.action.act[g]) for g in range(6)]
    report = boozer_fragment_check(s3_action.group, 3, sigma, 3, 2)
    assert report.passed, "\n".join(report.lines())
    operations = {a.operation for a in report.assertions}
    assert {"automatic_shape", "holds", "check_word_identity", "psi0_identities"} <= operations


def test_boozer_fragment_partial_maps():
    report = boozer_fragment_check(1, 2, [{0: 1}], 2, 1)
    assert report.passed
    psi0 = next(a for a in report.assertions if a.operation == "psi0_identities")
    assert psi0.observed == "2"
    assert not mapping_total({0: 1}, 2)
    assert mapping_total([1, 0], 2)


def test_automatic_shape(s3_action):
    assert automatic_shape(automatic_from_action(s3_action))
    with pytest.raises(FinvarError):
        automatic_shape(star(s3_action.algebra))


def test_growth_csv(tmp_path):
    rows = [
        GrowthRow("star", 2, 3, 4, 1, 972, "structural-certificate", True),
        GrowthRow("star", 2, 3, 100, 2, 8748, "bounded-identities", False),
    ]
    text = growth_csv(rows)
    assert text.splitlines() == [
        CSV_HEADER,
        "star,2,3,4,1,972,structural-certificate,true",
        "star,2,3,100,2,8748,bounded-identities,false",
    ]
    assert sizes_increase(rows)
    assert not sizes_increase(rows[::-1])
    path = write_growth_csv(str(tmp_path), rows)
    with open(path, encoding="utf-8") as file:
        assert file.read() == text


def test_growth_skips_rows_over_budget(monkeypatch):
    def exhausted(*args, **kwargs):
        raise BudgetExceeded("слишком много смежных классов")

    monkeypatch.setattr(growth, "build_B", exhausted)
    rows = growth_experiment(2, [4, 8], "zero")
    assert [row.level for row in rows] == ["skipped", "skipped"]
    assert all(row.d == 4 and not row.passed for row in rows)
    assert sizes_increase(rows)


@pytest.mark.slow
def test_growth_smallest_star_row(s3_action):
    (row,) = growth_experiment(2, [4], "star", s3_action)
    assert (row.d, row.c, row.achieved_size) == (3, 1, 972)
    assert row.level == "structural-certificate"
    assert row.passed
