import json
import os

import pytest
from click.testing import CliRunner

from algebra.io import read_algebra, write_algebra
from config.settings import settings
from constructions.action_algebra import build_L
from groups.catalog import cyclic
from main import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def s3_files(tmp_path, s3_action):
    """Файл действия S3 и файл алгебры A(S3, {1, 2, 3}, α)."""

    action = tmp_path / "s3_action.json"
    action.write_text(json.dumps({"group": {"permutations": [[1, 0, 2], [1, 2, 0]]}}), encoding="utf-8")
    algebra = str(tmp_path / "a_s3.json")
    write_algebra(algebra, s3_action.algebra)
    return str(action), algebra


def test_build_action_star_square(runner, tmp_path, s3_files):
    action, _ = s3_files
    built, starred, back = (str(tmp_path / name) for name in ("a.json", "star.json", "back.json"))
    assert runner.invoke(cli, ["build-action", action, built]).exit_code == 0
    assert read_algebra(built).sizes == (6, 3)
    assert runner.invoke(cli, ["star", built, starred]).exit_code == 0
    assert read_algebra(starred).sizes == (18,)
    assert runner.invoke(cli, ["square", starred, back]).exit_code == 0
    assert read_algebra(back).same_tables(read_algebra(built))


def test_zero_and_automatic(runner, tmp_path, s3_files):
    _, algebra = s3_files
    zero, auto = str(tmp_path / "zero.json"), str(tmp_path / "auto.json")
    assert runner.invoke(cli, ["adjoin-zero", algebra, zero]).exit_code == 0
    assert read_algebra(zero).sizes == (7, 4)
    assert runner.invoke(cli, ["automatic", zero, auto]).exit_code == 0
    assert read_algebra(auto).sizes == (10,)


def test_wrong_signature_exits_with_2(runner, tmp_path, s3_files):
    _, algebra = s3_files
    starred = str(tmp_path / "star.json")
    runner.invoke(cli, ["star", algebra, starred])
    result = runner.invoke(cli, ["star", starred, str(tmp_path / "again.json")])
    assert result.exit_code == 2
    assert "Ошибка" in result.output


def test_check_id(runner, tmp_path, s3_files):
    _, algebra = s3_files
    good = tmp_path / "good.txt"
    good.write_text("s(x0, s(x1, y0)) =~ s(x0, s(x1, y0))\n", encoding="utf-8")
    result = runner.invoke(cli, ["check-id", algebra, str(good)])
    assert result.exit_code == 0 and result.output.startswith("[PASS]")
    bad = tmp_path / "bad.txt"
    bad.write_text("s(x0, s(x1, y0)) =~ s(x1, s(x0, y0))\n", encoding="utf-8")
    result = runner.invoke(cli, ["check-id", algebra, str(bad)])
    assert result.exit_code == 1 and "[FAIL]" in result.output


def test_member(runner, tmp_path, s3_files):
    _, algebra = s3_files
    small = str(tmp_path / "l_c2.json")
    write_algebra(small, build_L(cyclic(2), 1).algebra)
    certificate = str(tmp_path / "cert" / "member.json")
    result = runner.invoke(cli, ["member", small, algebra, "--certificate", certificate])
    assert result.exit_code == 0 and result.output.startswith("member")
    assert os.path.exists(certificate)
    c2 = str(tmp_path / "l_c2_2.json")
    write_algebra(c2, build_L(cyclic(2), 2).algebra)
    result = runner.invoke(cli, ["member", algebra, c2])
    assert result.exit_code == 1 and "not a member" in result.output


def test_free_and_vn_basis(runner, tmp_path, s3_files):
    _, algebra = s3_files
    starred = str(tmp_path / "star.json")
    runner.invoke(cli, ["star", algebra, starred])
    result = runner.invoke(cli, ["free", starred, "--gens", "1", str(tmp_path / "free.json")])
    assert result.exit_code == 0 and "(6,)" in result.output
    basis = str(tmp_path / "ids" / "basis.txt")
    result = runner.invoke(cli, ["vn-basis", algebra, "--n", "1", basis])
    assert result.exit_code == 0 and os.path.exists(basis)
    assert runner.invoke(cli, ["check-id", algebra, basis]).exit_code == 0


def test_coset_enum(runner, tmp_path):
    presentation = tmp_path / "d8.txt"
    presentation.write_text("gens: a b; rels: a^2, b^2, [a,b,a], [a,b,b];", encoding="utf-8")
    result = runner.invoke(cli, ["coset-enum", str(presentation), str(tmp_path / "d8.json")])
    assert result.exit_code == 0
    assert "|G| = 8" in result.output


def test_verify_paper_writes_report(runner, tmp_path):
    out = tmp_path / "report"
    result = runner.invoke(cli, ["verify-paper", "--scenario", "s3-sizes", "--seed", "5", "--out", str(out)])
    assert result.exit_code == 0
    assert result.output.startswith("# finvar verify-paper seed=5")
    assert (out / "report.txt").read_text(encoding="utf-8") == result.output


def test_growth_rejects_small_n(runner):
    result = runner.invoke(cli, ["growth", "--n", "1"])
    assert result.exit_code == 2


def test_budget_option(runner, tmp_path, s3_files, monkeypatch):
    for name in ("budget", "element_budget", "assignment_budget", "coset_limit"):
        monkeypatch.setattr(settings, name, getattr(settings, name))
    _, algebra = s3_files
    ids = tmp_path / "omega.txt"
    ids.write_text("s(x0, s(x1, s(x2, y0))) =~ s(x2, s(x1, s(x0, y0)))\n", encoding="utf-8")
    result = runner.invoke(cli, ["--budget", "-10", "check-id", algebra, str(ids)])
    assert settings.assignment_budget == 10
    assert result.exit_code == 2
