import logging
from collections.abc import Sequence
from typing import override

from donormatch.catalog import Catalog, standard_catalog
from donormatch.core import IQueryEngine
from donormatch.donor import NEVER_DONATED_DAYS, DonorRecord
from donormatch.evaluator import AttributeRow, RankedRow, resolve_predicate, run_query
from donormatch.parser import parse_query
from donormatch.query_ast import QueryAst, predicates


class FuzzyQueryEngine(IQueryEngine):
    """
    Parses fuzzy queries and ranks donor records against a catalog.
    Donors without a donation history are scored as `never_donated_days` old.
    """

    def __init__(self, catalog: Catalog | None = None, never_donated_days: int = NEVER_DONATED_DAYS) -> None:
        self._logger: logging.Logger = logging.getLogger(self.__class__.__name__)
        self.catalog: Catalog = catalog if catalog is not None else standard_catalog()
        self.never_donated_days: int = never_donated_days

    @override
    def parse(self, text: str) -> QueryAst:
        return parse_query(text)

    @override
    def check(self, ast: QueryAst) -> None:
        """
        Raises `UnknownAttributeError` or `UnknownLabelError` if any predicate
        does not resolve against the catalog.
        """
        for predicate in predicates(ast.condition):
            _ = resolve_predicate(predicate, self.catalog)

    @override
    def run(
        self, ast: QueryAst, records: Sequence[DonorRecord], min_strength: float = 0.0
    ) -> list[RankedRow]:
        self.check(ast)
        rows = run_query(
            ast,
            (AttributeRow(r.id, r.fuzzy_attributes(self.never_donated_days)) for r in records),
            self.catalog,
            min_strength,
        )
        self._logger.debug(f"{len(rows)} of {len(records)} record(s) above strength {min_strength}")
        return rows
