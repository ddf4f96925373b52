from dataclasses import dataclass

from donormatch.core import TokenKind
from donormatch.exceptions import LexError


_KEYWORDS: dict[str, TokenKind] = {
    "select": TokenKind.SELECT,
    "from": TokenKind.FROM,
    "where": TokenKind.WHERE,
    "and": TokenKind.AND,
    "or": TokenKind.OR,
    "not": TokenKind.NOT,
}

_PUNCTUATION: dict[str, TokenKind] = {
    "*": TokenKind.STAR,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "=": TokenKind.EQUALS,
}


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    position: int

    def describe(self) -> str:
        match self.kind:
            case TokenKind.IDENTIFIER:
                return f"identifier '{self.text}'"
            case TokenKind.QUOTED_STRING:
                return f'"{self.text}"'
            case _:
                return f"'{self.text}'"


def _is_identifier_start(ch: str) -> bool:
    return ch == "_" or (ch.isascii() and ch.isalpha())


def _is_identifier_part(ch: str) -> bool:
    return ch == "_" or (ch.isascii() and ch.isalnum())


def tokenize(source: str) -> list[Token]:
    """
    Splits query text into tokens. Keywords match case-insensitively, the
    token text keeps the source spelling. Positions are offsets into `source`.
    """
    tokens: list[Token] = []
    i = 0
    n = len(source)

    while i < n:
        ch = source[i]

        if ch.isspace():
            i += 1
            continue

        if ch in _PUNCTUATION:
            tokens.append(Token(_PUNCTUATION[ch], ch, i))
            i += 1
            continue

        if ch == '"':
            end = source.find('"', i + 1)
            if end == -1:
                raise LexError(i, "Unterminated string literal")
            newline = source.find("\n", i + 1, end)
            if newline != -1:
                raise LexError(i, "Unterminated string literal")
            tokens.append(Token(TokenKind.QUOTED_STRING, source[i + 1:end], i))
            i = end + 1
            continue

        if _is_identifier_start(ch):
            start = i
            while i < n and _is_identifier_part(source[i]):
                i += 1
            word = source[start:i]
            kind = _KEYWORDS.get(word.lower(), TokenKind.IDENTIFIER)
            tokens.append(Token(kind, word, start))
            continue

        raise LexError(i, f"Illegal character {ch!r}")

    return tokens
