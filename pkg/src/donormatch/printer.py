import re

from donormatch.query_ast import And, ConditionNode, Not, Or, Predicate, QueryAst


_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEYWORDS = frozenset({"select", "from", "where", "and", "or", "not"})


def _is_bare_identifier(text: str) -> bool:
    return bool(_IDENTIFIER.fullmatch(text)) and text.lower() not in _KEYWORDS


def _wrap(text: str) -> str:
    return f"({text})"


def format_condition(node: ConditionNode) -> str:
    """
    Canonical text of a condition with the fewest parentheses that keep the
    tree shape: predicates are always parenthesised, AND/OR groups only where
    precedence or left associativity demands.
    """
    match node:
        case Predicate(attribute, label):
            return f'({attribute} = "{label}")'
        case Not(child):
            inner = format_condition(child)
            return f"NOT {_wrap(inner) if isinstance(child, And | Or) else inner}"
        case And(left, right):
            lhs = format_condition(left)
            rhs = format_condition(right)
            if isinstance(left, Or):
                lhs = _wrap(lhs)
            if isinstance(right, And | Or):
                rhs = _wrap(rhs)
            return f"{lhs} AND {rhs}"
        case Or(left, right):
            lhs = format_condition(left)
            rhs = format_condition(right)
            if isinstance(right, Or):
                rhs = _wrap(rhs)
            return f"{lhs} OR {rhs}"


def pretty_print(ast: QueryAst) -> str:
    table = ast.table if _is_bare_identifier(ast.table) else f'"{ast.table}"'
    return f"SELECT * FROM {table} WHERE {format_condition(ast.condition)}"
