import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from donormatch.core import RejectionReason
from donormatch.donor import DonorRecord


_logger = logging.getLogger("HardFilter")


class EligibilityRule(BaseModel):
    """
    Crisp donor screen: age within [min_age, max_age] inclusive and body
    weight strictly above `min_weight_exclusive_kg`.
    """
    model_config = ConfigDict(frozen=True)

    min_age: int = 17
    max_age: int = 60
    min_weight_exclusive_kg: float = Field(default=40.0, gt=0)

    @model_validator(mode="after")
    def _check_age_range(self) -> Self:
        if not self.min_age < self.max_age:
            raise ValueError(f"min_age ({self.min_age}) must be below max_age ({self.max_age})")
        return self

    def check(self, age: float, weight_kg: float) -> RejectionReason | None:
        if age < self.min_age:
            return RejectionReason.TOO_YOUNG
        if age > self.max_age:
            return RejectionReason.TOO_OLD
        if not weight_kg > self.min_weight_exclusive_kg:
            return RejectionReason.UNDERWEIGHT
        return None


@dataclass(frozen=True, slots=True)
class FilterOutcome:
    eligible: list[DonorRecord] = field(default_factory=list)
    rejected: list[tuple[DonorRecord, RejectionReason]] = field(default_factory=list)


def hard_filter(records: Iterable[DonorRecord], rule: EligibilityRule | None = None) -> FilterOutcome:
    rule = rule or EligibilityRule()
    outcome = FilterOutcome()

    for record in records:
        reason = rule.check(record.age, record.weight_kg)
        if reason is None:
            outcome.eligible.append(record)
        else:
            outcome.rejected.append((record, reason))

    _logger.debug(f"{len(outcome.eligible)} eligible, {len(outcome.rejected)} rejected")
    return outcome
