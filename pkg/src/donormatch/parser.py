import logging

from donormatch.core import TokenKind
from donormatch.exceptions import ParseError
from donormatch.lexer import Token, tokenize
from donormatch.query_ast import And, ConditionNode, Not, Or, Predicate, QueryAst


class Parser:
    """
    Recursive descent parser for the fuzzy query dialect:

        query     := SELECT STAR FROM table WHERE cond
        table     := ident | quoted
        cond      := term (OR term)*
        term      := factor (AND factor)*
        factor    := NOT factor | LPAREN cond RPAREN | pred
        pred      := LPAREN? ident EQUALS quoted RPAREN?

    AND binds tighter than OR, both associate left. A parenthesis followed by
    `ident =` opens a predicate, any other parenthesis opens a group.
    """

    def __init__(self, tokens: list[Token], source_length: int | None = None) -> None:
        self._logger: logging.Logger = logging.getLogger(self.__class__.__name__)
        self._tokens: list[Token] = tokens
        self._pos: int = 0
        if source_length is None:
            source_length = (tokens[-1].position + len(tokens[-1].text)) if tokens else 0
        self._end: int = source_length

    def parse(self) -> QueryAst:
        self._expect(TokenKind.SELECT, "SELECT")
        self._expect(TokenKind.STAR, "'*'")
        self._expect(TokenKind.FROM, "FROM")
        table = self._expect_any((TokenKind.IDENTIFIER, TokenKind.QUOTED_STRING), "table name")
        if not table.text.strip():
            raise ParseError(table.position, "table name", "empty string")
        self._expect(TokenKind.WHERE, "WHERE")
        condition = self._condition()

        if not self._at_end():
            raise ParseError(self._peek().position, "end of query", self._peek().describe())

        self._logger.debug(f"Parsed query over table '{table.text}'")
        return QueryAst(table.text, condition)

    def _condition(self, first: ConditionNode | None = None) -> ConditionNode:
        node = self._term(first)
        while self._check(TokenKind.OR):
            self._advance()
            node = Or(node, self._term())
        return node

    def _term(self, first: ConditionNode | None = None) -> ConditionNode:
        node = first if first is not None else self._factor()
        while self._check(TokenKind.AND):
            self._advance()
            node = And(node, self._factor())
        return node

    def _factor(self) -> ConditionNode:
        if self._check(TokenKind.NOT):
            self._advance()
            return Not(self._factor())

        if self._check(TokenKind.LPAREN):
            if self._check(TokenKind.IDENTIFIER, 1) and self._check(TokenKind.EQUALS, 2):
                self._advance()
                predicate = self._predicate()
                if self._check(TokenKind.RPAREN):
                    self._advance()
                    return predicate
                # `(a = "x" OR ...)`: the predicate starts a group
                node = self._condition(predicate)
                self._expect(TokenKind.RPAREN, "')'")
                return node
            self._advance()
            node = self._condition()
            self._expect(TokenKind.RPAREN, "')'")
            return node

        if self._check(TokenKind.IDENTIFIER):
            return self._predicate()

        raise self._error("a condition")

    def _predicate(self) -> Predicate:
        attribute = self._expect(TokenKind.IDENTIFIER, "attribute name")
        self._expect(TokenKind.EQUALS, "'='")
        label = self._expect(TokenKind.QUOTED_STRING, "quoted label")
        if not label.text.strip():
            raise ParseError(label.position, "quoted label", "empty string")
        return Predicate(attribute.text, label.text)

    def _at_end(self) -> bool:
        return self._pos >= len(self._tokens)

    def _peek(self, offset: int = 0) -> Token:
        return self._tokens[self._pos + offset]

    def _check(self, kind: TokenKind, offset: int = 0) -> bool:
        index = self._pos + offset
        return index < len(self._tokens) and self._tokens[index].kind is kind

    def _advance(self) -> Token:
        token = self._tokens[self._pos]
        self._pos += 1
        return token

    def _expect(self, kind: TokenKind, expected: str) -> Token:
        return self._expect_any((kind,), expected)

    def _expect_any(self, kinds: tuple[TokenKind, ...], expected: str) -> Token:
        if not self._at_end() and self._peek().kind in kinds:
            return self._advance()
        raise self._error(expected)

    def _error(self, expected: str) -> ParseError:
        if self._at_end():
            return ParseError(self._end, expected, "end of query")
        token = self._peek()
        return ParseError(token.position, expected, token.describe())


def parse(tokens: list[Token], source_length: int | None = None) -> QueryAst:
    return Parser(tokens, source_length).parse()


def parse_query(source: str) -> QueryAst:
    return parse(tokenize(source), len(source))
