import logging
from collections.abc import Collection, Iterable
from dataclasses import dataclass

from pydantic import BaseModel

from donormatch.catalog import Catalog
from donormatch.classifier import Classification, NetworkClassifier
from donormatch.core import IClassifier, IQueryEngine, Verdict
from donormatch.donor import NEVER_DONATED_DAYS, BloodType, DonorRecord
from donormatch.eligibility import EligibilityRule, hard_filter
from donormatch.evaluator import PredicateDegree, RankedRow
from donormatch.exceptions import DonorMatchError, PipelineError
from donormatch.model_store import TrainedModel
from donormatch.query_ast import And, ConditionNode, Not, Or, Predicate, QueryAst, predicates
from donormatch.query_engine import FuzzyQueryEngine


DISPLAY_DECIMALS = 3


@dataclass(frozen=True)
class RankedDonor:
    record: DonorRecord
    degrees: tuple[PredicateDegree, ...]
    fire_strength: float
    nn_confidence: float
    classification: Classification
    condition: ConditionNode


class PredicateExplanation(BaseModel):
    attribute: str
    label: str
    value: float
    degree: float
    degree_display: str


class Explanation(BaseModel):
    record_id: str
    name: str | None = None
    predicates: list[PredicateExplanation]
    trace: str
    fire_strength: float
    priority: str
    nn_confidence_eligible: float | None = None
    nn_confidence_ineligible: float | None = None


def _display(value: float) -> str:
    return f"{value:.{DISPLAY_DECIMALS}f}"


def degrees_by_predicate(condition: ConditionNode, degrees: Iterable[PredicateDegree]) -> dict[Predicate, PredicateDegree]:
    """
    Pairs each distinct predicate of `condition` with its degree. Degrees are
    recorded in first-evaluation order, which is the left-to-right order of
    distinct predicates.
    """
    distinct = list(dict.fromkeys(predicates(condition)))
    return dict(zip(distinct, degrees, strict=True))


def _chain(node: ConditionNode, kind: type[And] | type[Or]) -> list[ConditionNode]:
    if isinstance(node, kind):
        return _chain(node.left, kind) + _chain(node.right, kind)
    return [node]


def combination_trace(condition: ConditionNode, degrees: dict[Predicate, PredicateDegree]) -> str:
    """
    Renders the combination with degrees substituted, e.g.
    `min(0.574, 0.667, 0.324)`. Chains of the same operator are flattened.
    """
    match condition:
        case Predicate():
            return _display(degrees[condition].degree)
        case And():
            return f"min({', '.join(combination_trace(c, degrees) for c in _chain(condition, And))})"
        case Or():
            return f"max({', '.join(combination_trace(c, degrees) for c in _chain(condition, Or))})"
        case Not(child):
            return f"1 - {combination_trace(child, degrees)}"


def _explain(
    record_id: str,
    name: str | None,
    condition: ConditionNode,
    degrees: tuple[PredicateDegree, ...],
    fire_strength: float,
    classification: Classification | None,
) -> Explanation:
    by_predicate = degrees_by_predicate(condition, degrees)
    return Explanation(
        record_id=record_id,
        name=name,
        predicates=[
            PredicateExplanation(
                attribute=d.attribute,
                label=d.label,
                value=d.value,
                degree=d.degree,
                degree_display=_display(d.degree),
            )
            for d in degrees
        ],
        trace=f"{combination_trace(condition, by_predicate)} = {_display(fire_strength)}",
        fire_strength=fire_strength,
        priority=_display(fire_strength),
        nn_confidence_eligible=classification.confidence_eligible if classification else None,
        nn_confidence_ineligible=classification.confidence_ineligible if classification else None,
    )


def explain(ranked: RankedDonor) -> Explanation:
    return _explain(
        ranked.record.id,
        ranked.record.name,
        ranked.condition,
        ranked.degrees,
        ranked.fire_strength,
        ranked.classification,
    )


def explain_row(row: RankedRow, condition: ConditionNode, name: str | None = None) -> Explanation:
    return _explain(row.record_id, name, condition, row.per_predicate, row.fire_strength, None)


class DonorRanker:
    """
    Hard filter, then neural eligibility gate, then fuzzy ranking. The
    network only gates; the fuzzy fire strength is the priority and the
    eligible-class confidence breaks ties.
    """

    def __init__(
        self,
        classifier: IClassifier,
        query_engine: IQueryEngine,
        rule: EligibilityRule | None = None,
    ) -> None:
        self._logger: logging.Logger = logging.getLogger(self.__class__.__name__)
        self.classifier: IClassifier = classifier
        self.query_engine: IQueryEngine = query_engine
        self.rule: EligibilityRule = rule or EligibilityRule()

    def rank(
        self,
        query: str | QueryAst,
        records: Iterable[DonorRecord],
        min_strength: float = 0.0,
        blood_types: Collection[BloodType] | None = None,
    ) -> list[RankedDonor]:
        try:
            ast = self.query_engine.parse(query) if isinstance(query, str) else query
            self.query_engine.check(ast)
        except DonorMatchError as e:
            raise PipelineError("parse", e) from e

        candidates = list(records)
        if blood_types:
            candidates = [r for r in candidates if r.blood_type in blood_types]

        outcome = hard_filter(candidates, self.rule)
        self._logger.debug(f"Hard filter kept {len(outcome.eligible)} of {len(candidates)}")

        gated: list[tuple[DonorRecord, Classification]] = []
        try:
            for record in outcome.eligible:
                result = self.classifier.classify(record.age, record.weight_kg)
                if result.verdict is Verdict.ELIGIBLE:
                    gated.append((record, result))
        except DonorMatchError as e:
            raise PipelineError("classify", e) from e
        self._logger.debug(f"Network gate kept {len(gated)} of {len(outcome.eligible)}")

        by_id = {record.id: (record, result) for record, result in gated}
        try:
            rows = self.query_engine.run(ast, [record for record, _ in gated], min_strength)
        except DonorMatchError as e:
            raise PipelineError("query", e) from e

        ranked = [
            RankedDonor(
                record=by_id[row.record_id][0],
                degrees=row.per_predicate,
                fire_strength=row.fire_strength,
                nn_confidence=by_id[row.record_id][1].confidence_eligible,
                classification=by_id[row.record_id][1],
                condition=ast.condition,
            )
            for row in rows
        ]
        ranked.sort(key=lambda d: (-d.fire_strength, -d.nn_confidence, d.record.id))
        return ranked


def rank_donors(
    query_text: str,
    registry: Iterable[DonorRecord],
    model: TrainedModel,
    catalog: Catalog | None = None,
    rule: EligibilityRule | None = None,
    min_strength: float = 0.0,
    never_donated_days: int = NEVER_DONATED_DAYS,
) -> list[RankedDonor]:
    ranker = DonorRanker(
        NetworkClassifier(model.network, model.normalizer),
        FuzzyQueryEngine(catalog, never_donated_days),
        rule,
    )
    return ranker.rank(query_text, registry, min_strength)
