from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from donormatch.registry_store import Registry


class IRegistryStore(ABC):
    @abstractmethod
    def save(self, path: Path, registry: Registry) -> None: ...

    @abstractmethod
    def load(self, path: Path) -> Registry: ...
