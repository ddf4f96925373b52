from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Predicate:
    attribute: str
    label: str


@dataclass(frozen=True, slots=True)
class And:
    left: "ConditionNode"
    right: "ConditionNode"


@dataclass(frozen=True, slots=True)
class Or:
    left: "ConditionNode"
    right: "ConditionNode"


@dataclass(frozen=True, slots=True)
class Not:
    child: "ConditionNode"


type ConditionNode = Predicate | And | Or | Not


@dataclass(frozen=True, slots=True)
class QueryAst:
    table: str
    condition: ConditionNode


def predicates(node: ConditionNode) -> list[Predicate]:
    """
    Predicates of a condition tree in left-to-right order.
    """
    match node:
        case Predicate():
            return [node]
        case And(left, right) | Or(left, right):
            return predicates(left) + predicates(right)
        case Not(child):
            return predicates(child)
