from abc import ABC, abstractmethod

from .curve_shape import CurveShape


class IMembershipCurve(ABC):
    @property
    @abstractmethod
    def shape(self) -> CurveShape: ...

    @property
    @abstractmethod
    def params(self) -> tuple[float, ...]: ...

    @abstractmethod
    def degree(self, x: float) -> float: ...
