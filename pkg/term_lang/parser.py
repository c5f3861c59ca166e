import re
from dataclasses import dataclass
from typing import Iterable

from algebra.signature import Signature
from algebra.terms import App, Identity, Term, Var, check_identity
from config.logging_config import log
from utils.exceptions import (
    ArityMismatch,
    FinvarError,
    TermSyntaxError,
    UnknownSymbol,
)


VAR_PREFIXES = ("x", "y", "u", "v", "p", "q", "r", "t")
IDENTITY_SEPARATOR = "=~"

_TOKEN_REGEXP = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9]*)|(=~)|([().,\[\]]))")
_CANONICAL_REGEXP = re.compile(r"^([a-z])(\d+)$")


def var_name(var: Var) -> str:
    """Каноническое имя переменной: префикс сорта и номер."""

    if var.sort >= len(VAR_PREFIXES):
        raise FinvarError(f"Для сорта {var.sort} нет префикса имён переменных.")
    return f"{VAR_PREFIXES[var.sort]}{var.index}"


def dot_symbol(signature: Signature) -> int:
    """
    Номер символа, который обозначается инфиксной точкой.

    Это символ "." либо единственный бинарный символ действия сигнатуры τ.

    Raises:
        UnknownSymbol: Если такого символа нет.
    """

    if signature.has_symbol("."):
        return signature.index(".")
    binary = [i for i, s in enumerate(signature.symbols) if s.arity == 2]
    if len(signature.symbols) == 1 and binary:
        return binary[0]
    raise UnknownSymbol("В сигнатуре нет символа для инфиксной точки.")


@dataclass
class _Token:
    kind: str
    text: str
    position: int


@dataclass
class _Node:
    kind: str
    position: int
    name: str = ""
    children: tuple = ()


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN_REGEXP.match(text, position)
        if match is None:
            start = position + len(text[position:]) - len(text[position:].lstrip())
            raise TermSyntaxError(f"Недопустимый символ '{text[start]}'", start)
        start = match.start(match.lastindex)
        if match.group(1):
            tokens.append(_Token("name", match.group(1), start))
        elif match.group(2):
            tokens.append(_Token("sep", match.group(2), start))
        else:
            tokens.append(_Token(match.group(3), match.group(3), start))
        position = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    """Разбор рекурсивным спуском в синтаксическое дерево с именами переменных."""

    def __init__(self, tokens: list[_Token], signature: Signature) -> None:
        self.tokens = tokens
        self.position = 0
        self.signature = signature

    def peek(self) -> _Token:
        return self.tokens[self.position]

    def take(self, kind: str) -> _Token:
        token = self.peek()
        if token.kind != kind:
            expected = "конец ввода" if kind == "end" else f"'{kind}'"
            found = token.text or "конец ввода"
            raise TermSyntaxError(f"Ожидалось {expected}, получено '{found}'", token.position)
        self.position += 1
        return token

    def term(self) -> _Node:
        left = self.primary()
        if self.peek().kind == ".":
            token = self.take(".")
            right = self.term()
            return _Node("dot", token.position, children=(left, right))
        return left

    def primary(self) -> _Node:
        token = self.peek()
        if token.kind == "(":
            self.take("(")
            inner = self.term()
            self.take(")")
            return inner
        if token.kind == "[":
            self.take("[")
            letters = []
            while self.peek().kind == "name":
                name = self.take("name")
                letters.append(_Node("var", name.position, name.text))
            self.take("]")
            target = self.take("name")
            return _Node(
                "word",
                token.position,
                children=(tuple(letters), _Node("var", target.position, target.text)),
            )
        if token.kind == "name":
            self.take("name")
            if self.peek().kind == "(":
                self.take("(")
                args = []
                if self.peek().kind != ")":
                    args.append(self.term())
                    while self.peek().kind == ",":
                        self.take(",")
                        args.append(self.term())
                self.take(")")
                return _Node("app", token.position, token.text, tuple(args))
            if self.signature.has_symbol(token.text):
                symbol = self.signature.symbols[self.signature.index(token.text)]
                if symbol.arity == 0:
                    return _Node("app", token.position, token.text, ())
            return _Node("var", token.position, token.text)
        found = token.text or "конец ввода"
        raise TermSyntaxError(f"Ожидался терм, получено '{found}'", token.position)


class _Resolver:
    """
    Назначает переменным сорта и номера.

    Имя вида <префикс сорта><номер> сохраняет номер; прочие имена получают
    свободные номера после использованных, в порядке первого вхождения.
    """

    def __init__(self, signature: Signature) -> None:
        self.signature = signature
        self.occurrences: list[tuple[_Node, int | None]] = []

    def symbol(self, node: _Node) -> int:
        try:
            index = self.signature.index(node.name)
        except UnknownSymbol:
            raise UnknownSymbol(f"Символ '{node.name}' отсутствует в сигнатуре (позиция {node.position}).")
        arity = self.signature.symbols[index].arity
        if len(node.children) != arity:
            raise ArityMismatch(
                f"Символ '{node.name}' ожидает {arity} аргументов, получено "
                f"{len(node.children)} (позиция {node.position})."
            )
        return index

    def collect(self, node: _Node, expected: int | None) -> None:
        if node.kind == "var":
            self.occurrences.append((node, expected))
        elif node.kind == "app":
            symbol = self.signature.symbols[self.symbol(node)]
            for child, sort in zip(node.children, symbol.arg_sorts):
                self.collect(child, sort)
        elif node.kind == "dot":
            symbol = self.signature.symbols[dot_symbol(self.signature)]
            self.collect(node.children[0], symbol.arg_sorts[0])
            self.collect(node.children[1], symbol.arg_sorts[1])
        else:
            symbol = self.signature.symbols[dot_symbol(self.signature)]
            letters, target = node.children
            for letter in letters:
                self.collect(letter, symbol.arg_sorts[0])
            self.collect(target, symbol.arg_sorts[1])

    def _canonical(self, name: str) -> tuple[int, int] | None:
        match = _CANONICAL_REGEXP.match(name)
        if match is None or match.group(1) not in VAR_PREFIXES:
            return None
        sort = VAR_PREFIXES.index(match.group(1))
        if sort >= self.signature.sort_count:
            return None
        return sort, int(match.group(2))

    def assign(self) -> dict[tuple[str, int | None], Var]:
        named_sorts: dict[str, int] = {}
        for node, expected in self.occurrences:
            if expected is not None:
                named_sorts.setdefault(node.name, expected)

        used: dict[int, set[int]] = {}
        canonical: dict[str, tuple[int, int]] = {}
        for node, expected in self.occurrences:
            parsed = self._canonical(node.name)
            sort = expected if expected is not None else named_sorts.get(node.name)
            if parsed is not None and (sort is None or parsed[0] == sort):
                canonical[node.name] = parsed
                used.setdefault(parsed[0], set()).add(parsed[1])

        table: dict[tuple[str, int | None], Var] = {}
        fresh: dict[tuple[str, int], Var] = {}
        for node, expected in self.occurrences:
            sort = expected if expected is not None else named_sorts.get(node.name)
            key = (node.name, expected)
            if node.name in canonical and (sort is None or canonical[node.name][0] == sort):
                table[key] = Var(*canonical[node.name])
                continue
            sort = 0 if sort is None else sort
            if (node.name, sort) not in fresh:
                taken = used.setdefault(sort, set())
                index = max(taken) + 1 if taken else 0
                taken.add(index)
                fresh[(node.name, sort)] = Var(sort, index)
            table[key] = fresh[(node.name, sort)]
        return table

    def build(self, node: _Node, expected: int | None, table: dict) -> Term:
        if node.kind == "var":
            return table[(node.name, expected)]
        if node.kind == "app":
            index = self.symbol(node)
            symbol = self.signature.symbols[index]
            return App(
                index,
                tuple(self.build(c, s, table) for c, s in zip(node.children, symbol.arg_sorts)),
            )
        index = dot_symbol(self.signature)
        symbol = self.signature.symbols[index]
        if node.kind == "dot":
            left = self.build(node.children[0], symbol.arg_sorts[0], table)
            right = self.build(node.children[1], symbol.arg_sorts[1], table)
            return App(index, (left, right))
        letters, target = node.children
        result = self.build(target, symbol.arg_sorts[1], table)
        for letter in reversed(letters):
            result = App(index, (self.build(letter, symbol.arg_sorts[0], table), result))
        return result


def _parse_nodes(text: str, signature: Signature, sides: int) -> list[_Node]:
    tokens = _tokenize(text)
    parser = _Parser(tokens, signature)
    nodes = [parser.term()]
    if sides == 2:
        parser.take("sep")
        nodes.append(parser.term())
    parser.take("end")
    return nodes


def parse_term(text: str, signature: Signature) -> Term:
    """
    Разбирает запись терма.

    Грамматика: переменная, применение символа sym(t, …), инфиксная точка
    (правоассоциативная) и словарный терм [x0 x1 …]y.

    Raises:
        TermSyntaxError: При синтаксической ошибке (с позицией).
        UnknownSymbol: Если символа нет в сигнатуре.
        ArityMismatch: При неверном числе аргументов.
    """

    node = _parse_nodes(text, signature, 1)[0]
    resolver = _Resolver(signature)
    resolver.collect(node, None)
    return resolver.build(node, None, resolver.assign())


def parse_identity(text: str, signature: Signature) -> Identity:
    """
    Разбирает тождество вида "lhs =~ rhs"; переменные частей общие.

    Raises:
        TermSyntaxError: При синтаксической ошибке.
        SortMismatch: Если части имеют разные сорта.
    """

    lhs, rhs = _parse_nodes(text, signature, 2)
    resolver = _Resolver(signature)
    resolver.collect(lhs, None)
    resolver.collect(rhs, None)
    table = resolver.assign()
    identity = Identity(resolver.build(lhs, None, table), resolver.build(rhs, None, table))
    check_identity(identity, signature)
    return identity


def format_term(term: Term, signature: Signature) -> str:
    if isinstance(term, Var):
        return var_name(term)
    symbol = signature.symbols[term.symbol]
    if symbol.name == ".":
        left, right = term.children
        left_text = format_term(left, signature)
        if isinstance(left, App) and signature.symbols[left.symbol].name == ".":
            left_text = f"({left_text})"
        return f"{left_text} . {format_term(right, signature)}"
    args = ",".join(format_term(child, signature) for child in term.children)
    return f"{symbol.name}({args})"


def format_identity(identity: Identity, signature: Signature) -> str:
    return (
        f"{format_term(identity.lhs, signature)} {IDENTITY_SEPARATOR} "
        f"{format_term(identity.rhs, signature)}"
    )


def read_identities(file_path: str, signature: Signature) -> list[Identity]:
    """
    Читает тождества из файла: по одному на строку, "#" начинает комментарий.

    Raises:
        TermSyntaxError: Если строка не разбирается; сообщение содержит номер строки.
    """

    identities = []
    with open(file_path, "r", encoding="utf-8") as file_data:
        for number, line in enumerate(file_data, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                identities.append(parse_identity(text, signature))
            except TermSyntaxError as exc:
                log.error(f"Ошибка в строке {number} файла {file_path}: {exc}")
                raise TermSyntaxError(f"Строка {number}: {exc}", exc.position)
    return identities


def write_identities(file_path: str, identities: Iterable[Identity], signature: Signature) -> None:
    with open(file_path, "w", encoding="utf-8") as file_data:
        for identity in identities:
            file_data.write(format_identity(identity, signature) + "\n")
