from enum import Enum

class TokenKind(Enum):
    SELECT = "SELECT"
    STAR = "*"
    FROM = "FROM"
    WHERE = "WHERE"
    AND = "AND"
    OR = "OR"
    NOT = "NOT"
    LPAREN = "("
    RPAREN = ")"
    EQUALS = "="
    IDENTIFIER = "identifier"
    QUOTED_STRING = "quoted string"
