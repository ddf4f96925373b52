from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from donormatch.classifier import Classification


class IClassifier(ABC):
    @abstractmethod
    def classify(self, age: float, weight: float) -> Classification: ...
