import functools
import os
import sys

import click

from algebra.closure import free_algebra
from algebra.io import read_algebra, write_algebra
from algebra.terms import holds
from algebra.variety import in_variety, vn_basis
from config.logging_config import log
from config.settings import settings
from constructions.action_algebra import build_action_algebra
from constructions.automatic import automatic_from_two_sorted
from constructions.star import square, star
from constructions.witness import build_B
from constructions.zero import adjoin_zero
from groups.coset_enum import todd_coxeter
from groups.io import read_action, write_group
from groups.presentation import parse_presentation
from term_lang.parser import format_identity, read_identities, write_identities
from utils.exceptions import FinvarError
from utils.utils import write_json
from verify.growth import FLAVORS, growth_csv, growth_experiment, write_growth_csv
from verify.scenarios import SCENARIOS, verify_paper_suite


def handle_errors(command):
    """
    Переводит FinvarError в код завершения 2 с сообщением об ошибке.
    """

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except FinvarError as exc:
            log.error(f"Ошибка {type(exc).__name__}: {exc}")
            click.echo(f"Ошибка: {exc}", err=True)
            sys.exit(2)

    return wrapper


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"Ожидался список целых чисел через запятую: {text}")


@click.group(name="finvar")
@click.option("--budget", type=int, default=None, help="Общий лимит вместо FINVAR_BUDGET.")
def cli(budget: int | None) -> None:
    """Рабочий стенд конечных многосортных алгебр и многообразий."""

    if budget is not None:
        budget = abs(budget)
        settings.budget = budget
        settings.element_budget = budget
        settings.assignment_budget = budget
        settings.coset_limit = budget


@cli.command("verify-paper")
@click.option("--scenario", "scenarios", multiple=True, type=click.Choice(sorted(SCENARIOS)))
@click.option("--seed", type=int, default=None, help="Зерно генератора случайных наборов.")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@handle_errors
def verify_paper(scenarios, seed, workers, out_dir) -> None:
    """Проверяет утверждения, доступные конечному вычислению."""

    suite = verify_paper_suite(scenarios or None, seed, workers)
    click.echo(suite.text(), nl=False)
    if out_dir:
        suite.write(out_dir)
    if not suite.passed:
        sys.exit(1)


@cli.command("growth")
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--flavor", type=click.Choice(FLAVORS), default="star", show_default=True)
@click.option("--ell", default="4,8,16", show_default=True, help="Список ℓ через запятую.")
@click.option("--k", "k", type=int, default=None, help="Число букв для автоматного варианта.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=None)
@handle_errors
def growth(n, flavor, ell, k, out_dir) -> None:
    """Строит таблицу роста свидетелей B(n, ℓ)."""

    if n < 2:
        raise click.BadParameter("n должно быть не меньше 2.")
    rows = growth_experiment(n, parse_int_list(ell), flavor, k=k)
    click.echo(growth_csv(rows), nl=False)
    if out_dir:
        write_growth_csv(out_dir, rows)
    if any(not row.passed and row.level != "skipped" for row in rows):
        sys.exit(1)


@cli.command("build-action")
@click.argument("action_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def build_action_command(action_file, out_file) -> None:
    """A(G, S, α) по файлу действия."""

    action = read_action(action_file)
    write_algebra(out_file, build_action_algebra(action.group, action).algebra)


@cli.command("star")
@click.argument("in_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def star_command(in_file, out_file) -> None:
    """A* по двухсортной алгебре."""

    write_algebra(out_file, star(read_algebra(in_file)))


@cli.command("square")
@click.argument("in_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def square_command(in_file, out_file) -> None:
    """C□ по алгебре из Ω_τ*."""

    write_algebra(out_file, square(read_algebra(in_file)))


@cli.command("adjoin-zero")
@click.argument("in_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def adjoin_zero_command(in_file, out_file) -> None:
    write_algebra(out_file, adjoin_zero(read_algebra(in_file)))


@cli.command("automatic")
@click.argument("in_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def automatic_command(in_file, out_file) -> None:
    """Автоматная алгебра по двухсортной алгебре (возможно, с нулями)."""

    write_algebra(out_file, automatic_from_two_sorted(read_algebra(in_file)))


@cli.command("build-B")
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--ell", type=int, default=4, show_default=True)
@click.option("--p", "p", type=int, default=3, show_default=True)
@click.option("--q", "q", type=int, default=2, show_default=True)
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def build_B_command(n, ell, p, q, out_file) -> None:
    """B(n, ℓ) с метаданными построения."""

    witness = build_B(n, ell, p, q)
    write_algebra(out_file, witness.algebra)
    click.echo(f"c = {witness.c}, |G_V| = {witness.gv_order}, sizes = {witness.algebra.sizes}")


@cli.command("coset-enum")
@click.argument("presentation_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def coset_enum(presentation_file, out_file) -> None:
    """Перечисление смежных классов по тексту задания группы."""

    with open(presentation_file, "r", encoding="utf-8") as file_data:
        presentation = parse_presentation(file_data.read())
    presented = todd_coxeter(presentation)
    write_group(out_file, presented.group)
    click.echo(f"|G| = {presented.group.size}")


@cli.command("free")
@click.argument("in_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--gens", default="1", show_default=True, help="Число образующих каждого сорта.")
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def free(in_file, gens, out_file) -> None:
    """Свободная алгебра многообразия V(A)."""

    result = free_algebra(read_algebra(in_file), parse_int_list(gens))
    write_algebra(out_file, result.algebra)
    click.echo(f"sizes = {result.algebra.sizes}")


@cli.command("member")
@click.argument("b_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("a_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--certificate", "certificate_file", type=click.Path(dir_okay=False), default=None)
@handle_errors
def member(b_file, a_file, certificate_file) -> None:
    """Решает B ∈ V(A) и записывает сертификат."""

    A = read_algebra(a_file)
    result = in_variety(read_algebra(b_file), A)
    if result:
        click.echo(f"member: m = {result.certificate.exponent}, method = {result.certificate.method}")
        if certificate_file:
            write_json(certificate_file, result.certificate.to_json())
    else:
        click.echo(f"not a member: {format_identity(result.failed_identity, A.signature)}")
        sys.exit(1)


@cli.command("check-id")
@click.argument("in_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("identities_file", type=click.Path(exists=True, dir_okay=False))
@handle_errors
def check_id(in_file, identities_file) -> None:
    """Проверяет тождества из файла перебором подстановок."""

    alg = read_algebra(in_file)
    failed = 0
    for identity in read_identities(identities_file, alg.signature):
        result = holds(alg, identity)
        text = format_identity(identity, alg.signature)
        click.echo(f"[{'PASS' if result else 'FAIL'}] {text}" + ("" if result else f" {result.witness}"))
        failed += not result
    if failed:
        sys.exit(1)


@cli.command("vn-basis")
@click.argument("in_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", "n", type=int, default=1, show_default=True)
@click.argument("out_file", type=click.Path(dir_okay=False))
@handle_errors
def vn_basis_command(in_file, n, out_file) -> None:
    """Базис тождеств A от не более чем n переменных каждого сорта."""

    alg = read_algebra(in_file)
    identities = vn_basis(alg, n)
    folder = os.path.dirname(out_file)
    if folder:
        os.makedirs(folder, exist_ok=True)
    write_identities(out_file, identities, alg.signature)
    click.echo(f"{len(identities)} тождеств")


if __name__ == "__main__":
    cli()
