from collections.abc import Sequence
from typing import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from donormatch.exceptions import DegenerateFeatureError, EmptyDatasetError, ShapeMismatchError


class Normalizer(BaseModel):
    """
    Per-feature min-max scaling to [0, 1], clamped outside the fitted range.
    Feature order is (age, weight).
    """
    model_config = ConfigDict(frozen=True)

    minimums: tuple[float, ...]
    maximums: tuple[float, ...]

    @model_validator(mode="after")
    def _check_ranges(self) -> Self:
        if len(self.minimums) != len(self.maximums) or not self.minimums:
            raise ValueError("minimums and maximums must be nonempty and of equal length")
        for i, (lo, hi) in enumerate(zip(self.minimums, self.maximums)):
            if not lo < hi:
                raise ValueError(f"feature {i}: min ({lo}) must be below max ({hi})")
        return self

    @property
    def width(self) -> int:
        return len(self.minimums)

    def transform(self, values: ArrayLike) -> NDArray[np.float64]:
        v = np.asarray(values, dtype=np.float64)
        if v.shape[-1:] != (self.width,):
            raise ShapeMismatchError(f"expected {self.width} features, got shape {v.shape}")
        lo = np.asarray(self.minimums)
        hi = np.asarray(self.maximums)
        return np.clip((v - lo) / (hi - lo), 0.0, 1.0)


def fit_normalizer(raw: Sequence[Sequence[float]]) -> Normalizer:
    data = np.asarray(raw, dtype=np.float64)
    if data.size == 0:
        raise EmptyDatasetError("cannot fit a normalizer on no data")
    if data.ndim != 2:
        raise ShapeMismatchError(f"expected rows of features, got shape {data.shape}")

    lo = data.min(axis=0)
    hi = data.max(axis=0)
    for i in range(data.shape[1]):
        if lo[i] == hi[i]:
            raise DegenerateFeatureError(f"feature {i} is constant ({lo[i]}), cannot scale")
    return Normalizer(minimums=tuple(lo.tolist()), maximums=tuple(hi.tolist()))


def normalize(normalizer: Normalizer, age: float, weight: float) -> NDArray[np.float64]:
    return normalizer.transform([age, weight])
