from dataclasses import dataclass
import re
from textwrap import dedent
from typing import Iterator, Union

TOKEN_PATTERN = re.compile(r'\(|\)|[^\s()]+')
INT_PATTERN = re.compile(r'-?[0-9]+')


class SexprSyntaxError(Exception):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        self.detail = message
        text = dedent(f"""
            I'm trying to read an s-expression program, but I stopped at line {line}, column {column}.
            {message}
        """)
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    column: int


@dataclass(frozen=True)
class SList:
    items: tuple['Node', ...]
    line: int
    column: int


Node = Union[Atom, SList]


def tokenize(text: str) -> Iterator[Token]:
    """
    Splits s-expression text into parentheses and atoms.

    Parameters
    ----------
    text : str
        The source text.

    Yields
    ------
    Token
        Each token with its 1-based line and column.
    """
    for lineno, line in enumerate(text.splitlines(), start=1):
        code = line.split(';', 1)[0]
        for match in TOKEN_PATTERN.finditer(code):
            yield Token(match.group(0), lineno, match.start() + 1)

def read_tree(text: str) -> Node:
    """
    Reads exactly one s-expression from a text.

    The reader keeps its own stack, so deeply nested `(do s B)` chains don't hit
    the interpreter's recursion limit.

    Parameters
    ----------
    text : str
        The source text.

    Returns
    -------
    Node
        The root node.

    Raises
    ------
    SexprSyntaxError
        On unbalanced parentheses, empty input or trailing tokens.
    """
    stack: list[tuple[Token, list[Node]]] = []
    root: Node | None = None
    last_line, last_column = 1, 1
    for token in tokenize(text):
        last_line, last_column = token.line, token.column
        if root is not None:
            raise SexprSyntaxError(
                f"There is an unexpected token '{token.text}' after the program.",
                token.line, token.column
            )
        if token.text == '(':
            stack.append((token, []))
            continue
        if token.text == ')':
            if not stack:
                raise SexprSyntaxError(
                    "There is a ')' without a matching '('.", token.line, token.column
                )
            opener, items = stack.pop()
            node: Node = SList(tuple(items), opener.line, opener.column)
        else:
            node = Atom(token.text, token.line, token.column)
        if stack:
            stack[-1][1].append(node)
        else:
            root = node
    if stack:
        opener, _ = stack[-1]
        raise SexprSyntaxError(
            f"The '(' opened at line {opener.line}, column {opener.column} is never closed.",
            last_line, last_column
        )
    if root is None:
        raise SexprSyntaxError('The input is empty.', last_line, last_column)
    return root

def indent(lines: list[str], level: int = 1, width: int = 2) -> list[str]:
    pad = ' ' * (level * width)
    return [pad + line for line in lines]
