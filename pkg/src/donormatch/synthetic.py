import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from donormatch.eligibility import EligibilityRule
from donormatch.exceptions import ConfigurationError


AGE_RANGE: tuple[int, int] = (10, 75)
WEIGHT_RANGE: tuple[float, float] = (30.0, 120.0)


@dataclass(frozen=True, slots=True)
class SyntheticDonor:
    id: str
    age: int
    weight_kg: float
    eligible: bool


def generate_synthetic(
    n: int,
    seed: int,
    noise: float = 0.0,
    rule: EligibilityRule | None = None,
) -> list[SyntheticDonor]:
    """
    Labeled donors with integer age uniform in [10, 75] and weight uniform in
    [30, 120] kg (one decimal). The label is the hard eligibility rule,
    flipped with probability `noise`.
    """
    if n < 0:
        raise ConfigurationError(f"n must be >= 0, got {n}")
    if seed < 0:
        raise ConfigurationError(f"seed must be >= 0, got {seed}")
    if not 0.0 <= noise <= 1.0:
        raise ConfigurationError(f"noise must be a probability, got {noise}")

    rule = rule or EligibilityRule()
    rng = np.random.default_rng(seed)
    ages = rng.integers(AGE_RANGE[0], AGE_RANGE[1], size=n, endpoint=True)
    weights = np.round(rng.uniform(*WEIGHT_RANGE, size=n), 1)
    flips = rng.random(size=n) < noise

    donors: list[SyntheticDonor] = []
    width = len(str(max(n, 1)))
    for i in range(n):
        age, weight = int(ages[i]), float(weights[i])
        eligible = rule.check(age, weight) is None
        donors.append(SyntheticDonor(f"s{i + 1:0{width}d}", age, weight, eligible != bool(flips[i])))
    return donors


def synthetic_csv(donors: list[SyntheticDonor]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["id", "age", "weight_kg", "label"])
    for donor in donors:
        writer.writerow([donor.id, donor.age, f"{donor.weight_kg:.1f}", "eligible" if donor.eligible else "ineligible"])
    return buffer.getvalue()


def write_synthetic(path: Path | str, donors: list[SyntheticDonor]) -> None:
    Path(path).write_text(synthetic_csv(donors), encoding="utf-8")


def synthetic_rows(donors: list[SyntheticDonor]) -> list[tuple[float, float, bool]]:
    return [(float(d.age), d.weight_kg, d.eligible) for d in donors]
