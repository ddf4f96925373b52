from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from typing import Protocol

from donormatch.catalog import Catalog, FuzzySet, LinguisticVariable
from donormatch.exceptions import FuzzyError, QueryEvaluationError, UnknownAttributeError
from donormatch.query_ast import And, ConditionNode, Not, Or, Predicate, QueryAst


class FuzzyRecord(Protocol):
    @property
    def id(self) -> str: ...

    def fuzzy_attributes(self) -> Mapping[str, float]: ...


@dataclass(frozen=True, slots=True)
class PredicateDegree:
    attribute: str
    label: str
    value: float
    degree: float


@dataclass(frozen=True, slots=True)
class RankedRow:
    record_id: str
    per_predicate: tuple[PredicateDegree, ...]
    fire_strength: float

    def degree_of(self, attribute: str, label: str) -> float:
        for p in self.per_predicate:
            if p.attribute == attribute and p.label == label:
                return p.degree
        raise KeyError((attribute, label))


def resolve_predicate(predicate: Predicate, catalog: Catalog) -> tuple[LinguisticVariable, FuzzySet]:
    variable = catalog.variable(predicate.attribute)
    return variable, variable.fuzzy_set(predicate.label)


def crisp_value(variable: LinguisticVariable, attributes: Mapping[str, float]) -> float:
    """
    Looks the variable up in `attributes` under its name or any alias.
    """
    lowered = {k.casefold(): v for k, v in attributes.items()}
    for name in variable.names():
        if name.casefold() in lowered:
            return float(lowered[name.casefold()])
    raise UnknownAttributeError(variable.name)


def combine(node: ConditionNode, leaf: Callable[[Predicate], float]) -> float:
    """
    Folds a condition tree with min for AND, max for OR and 1 - x for NOT.
    """
    match node:
        case Predicate():
            return leaf(node)
        case And(left, right):
            return min(combine(left, leaf), combine(right, leaf))
        case Or(left, right):
            return max(combine(left, leaf), combine(right, leaf))
        case Not(child):
            return 1.0 - combine(child, leaf)


def evaluate(cond: ConditionNode, attributes: Mapping[str, float], catalog: Catalog) -> float:
    def leaf(predicate: Predicate) -> float:
        variable, fuzzy_set = resolve_predicate(predicate, catalog)
        return fuzzy_set.degree(crisp_value(variable, attributes))

    return combine(cond, leaf)


def score_record(ast: QueryAst, record: FuzzyRecord, catalog: Catalog) -> RankedRow:
    attributes = record.fuzzy_attributes()
    degrees: dict[Predicate, PredicateDegree] = {}

    def leaf(predicate: Predicate) -> float:
        if predicate not in degrees:
            variable, fuzzy_set = resolve_predicate(predicate, catalog)
            value = crisp_value(variable, attributes)
            degrees[predicate] = PredicateDegree(
                variable.name, fuzzy_set.label, value, fuzzy_set.degree(value)
            )
        return degrees[predicate].degree

    try:
        strength = combine(ast.condition, leaf)
    except FuzzyError as e:
        raise QueryEvaluationError(record.id, e) from e
    return RankedRow(record.id, tuple(degrees.values()), strength)


def run_query(
    ast: QueryAst,
    records: Iterable[FuzzyRecord],
    catalog: Catalog,
    min_strength: float = 0.0,
) -> list[RankedRow]:
    """
    Scores every record and keeps those whose fire strength is strictly above
    `min_strength`, strongest first, ties by record id.
    """
    rows = [score_record(ast, record, catalog) for record in records]
    kept = [row for row in rows if row.fire_strength > min_strength]
    kept.sort(key=lambda row: (-row.fire_strength, row.record_id))
    return kept


@dataclass(frozen=True, slots=True)
class AttributeRow:
    """
    A plain record: an id and its crisp attribute values.
    """
    id: str
    attributes: Mapping[str, float]

    def fuzzy_attributes(self) -> Mapping[str, float]:
        return self.attributes
