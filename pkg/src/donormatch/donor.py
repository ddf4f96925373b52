from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator


NEVER_DONATED_DAYS = 400


class BloodType(Enum):
    A_POS = "A+"
    A_NEG = "A-"
    B_POS = "B+"
    B_NEG = "B-"
    AB_POS = "AB+"
    AB_NEG = "AB-"
    O_POS = "O+"
    O_NEG = "O-"

    @classmethod
    def parse(cls, text: str) -> "BloodType":
        """
        Accepts `A+`, `a-`, `AB−` (unicode minus) and `O Rh+` style spellings.
        """
        normalized = text.strip().upper().replace("−", "-").replace("RH", "").replace(" ", "")
        return cls(normalized)


class DonorRecord(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(min_length=1)
    name: str
    blood_type: BloodType
    age: int = Field(ge=0)
    weight_kg: float = Field(gt=0, allow_inf_nan=False)
    distance_m: float = Field(ge=0, allow_inf_nan=False)
    days_since_donation: int | None = Field(default=None, ge=0)
    phone: str = ""

    @field_validator("id")
    @classmethod
    def _strip_id(cls, value: str) -> str:
        value = value.strip()
        if not value:
            raise ValueError("id must be nonempty")
        return value

    @field_validator("blood_type", mode="before")
    @classmethod
    def _parse_blood_type(cls, value: Any) -> Any:
        if isinstance(value, str):
            try:
                return BloodType.parse(value)
            except ValueError:
                raise ValueError(f"unknown blood type '{value}'") from None
        return value

    @property
    def has_donated(self) -> bool:
        return self.days_since_donation is not None

    def fuzzy_attributes(self, never_donated_days: int = NEVER_DONATED_DAYS) -> dict[str, float]:
        """
        Crisp values for the fuzzy catalog, keyed by the canonical variable names.
        """
        days = self.days_since_donation if self.days_since_donation is not None else never_donated_days
        return {
            "age": float(self.age),
            "distance": self.distance_m,
            "time": float(days),
        }
