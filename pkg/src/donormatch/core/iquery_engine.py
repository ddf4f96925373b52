from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from donormatch.donor import DonorRecord
    from donormatch.evaluator import RankedRow
    from donormatch.query_ast import QueryAst


class IQueryEngine(ABC):
    @abstractmethod
    def parse(self, text: str) -> QueryAst: ...

    @abstractmethod
    def check(self, ast: QueryAst) -> None: ...

    @abstractmethod
    def run(
        self, ast: QueryAst, records: Sequence[DonorRecord], min_strength: float = 0.0
    ) -> list[RankedRow]: ...
