from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from donormatch.model_store import TrainedModel


class IModelStore(ABC):
    @abstractmethod
    def save(self, path: Path, model: TrainedModel) -> None: ...

    @abstractmethod
    def load(self, path: Path) -> TrainedModel: ...
