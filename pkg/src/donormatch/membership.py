import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import override

from donormatch.core import CurveShape, IMembershipCurve
from donormatch.exceptions import CurveError


def _require_finite(shape: CurveShape, *values: float) -> None:
    if not all(math.isfinite(v) for v in values):
        raise CurveError(f"{shape.value} parameters must be finite, got {values}")


@dataclass(frozen=True, slots=True)
class LeftShoulder(IMembershipCurve):
    """
    Degree 1 up to `a`, linear descent to 0 at `b`.
    """
    a: float
    b: float

    def __post_init__(self) -> None:
        _require_finite(self.shape, self.a, self.b)
        if not self.a < self.b:
            raise CurveError(f"left shoulder requires a < b, got a={self.a}, b={self.b}")

    @property
    @override
    def shape(self) -> CurveShape:
        return CurveShape.LEFT_SHOULDER

    @property
    @override
    def params(self) -> tuple[float, ...]:
        return (self.a, self.b)

    @override
    def degree(self, x: float) -> float:
        if x <= self.a:
            return 1.0
        if x >= self.b:
            return 0.0
        return (self.b - x) / (self.b - self.a)


@dataclass(frozen=True, slots=True)
class Triangle(IMembershipCurve):
    """
    0 at `a`, peak 1 at `m`, 0 again at `b`.
    """
    a: float
    m: float
    b: float

    def __post_init__(self) -> None:
        _require_finite(self.shape, self.a, self.m, self.b)
        if not self.a < self.m < self.b:
            raise CurveError(
                f"triangle requires a < m < b, got a={self.a}, m={self.m}, b={self.b}"
            )

    @property
    @override
    def shape(self) -> CurveShape:
        return CurveShape.TRIANGLE

    @property
    @override
    def params(self) -> tuple[float, ...]:
        return (self.a, self.m, self.b)

    @override
    def degree(self, x: float) -> float:
        if x <= self.a or x >= self.b:
            return 0.0
        if x <= self.m:
            return (x - self.a) / (self.m - self.a)
        return (self.b - x) / (self.b - self.m)


@dataclass(frozen=True, slots=True)
class RightShoulder(IMembershipCurve):
    """
    Degree 0 up to `a`, linear ascent to 1 at `b`.
    """
    a: float
    b: float

    def __post_init__(self) -> None:
        _require_finite(self.shape, self.a, self.b)
        if not self.a < self.b:
            raise CurveError(f"right shoulder requires a < b, got a={self.a}, b={self.b}")

    @property
    @override
    def shape(self) -> CurveShape:
        return CurveShape.RIGHT_SHOULDER

    @property
    @override
    def params(self) -> tuple[float, ...]:
        return (self.a, self.b)

    @override
    def degree(self, x: float) -> float:
        if x <= self.a:
            return 0.0
        if x >= self.b:
            return 1.0
        return (x - self.a) / (self.b - self.a)


_ARITY: dict[CurveShape, int] = {
    CurveShape.LEFT_SHOULDER: 2,
    CurveShape.TRIANGLE: 3,
    CurveShape.RIGHT_SHOULDER: 2,
}


def make_curve(shape: CurveShape | str, params: Sequence[float]) -> IMembershipCurve:
    """
    Builds a curve from its shape name and positional parameters,
    e.g. `make_curve("triangle", [17, 33, 60])`.
    """
    try:
        shape = CurveShape(shape)
    except ValueError:
        raise CurveError(f"Unknown curve shape '{shape}'") from None

    if len(params) != _ARITY[shape]:
        raise CurveError(
            f"{shape.value} takes {_ARITY[shape]} parameters, got {len(params)}"
        )

    values = [float(p) for p in params]
    match shape:
        case CurveShape.LEFT_SHOULDER:
            return LeftShoulder(*values)
        case CurveShape.TRIANGLE:
            return Triangle(*values)
        case CurveShape.RIGHT_SHOULDER:
            return RightShoulder(*values)


def membership(curve: IMembershipCurve, x: float) -> float:
    return curve.degree(x)
