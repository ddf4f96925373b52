import logging
import threading
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import override

from pydantic import ValidationError

from donormatch.core import IRegistryStore
from donormatch.donor import DonorRecord
from donormatch.exceptions import DuplicateIdError, StoreFormatError


STORE_HEADER = "# donormatch registry v1"


class Registry:
    """
    An immutable set of donor records keyed by id, kept in id order.
    """

    def __init__(self, records: Iterable[DonorRecord] = ()) -> None:
        by_id: dict[str, DonorRecord] = {}
        for record in records:
            if record.id in by_id:
                raise DuplicateIdError(record.id, [])
            by_id[record.id] = record
        self._records: tuple[DonorRecord, ...] = tuple(by_id[k] for k in sorted(by_id))

    @property
    def records(self) -> tuple[DonorRecord, ...]:
        return self._records

    def get(self, donor_id: str) -> DonorRecord | None:
        for record in self._records:
            if record.id == donor_id:
                return record
        return None

    def merge(self, records: Iterable[DonorRecord]) -> "Registry":
        """
        A new registry with `records` added; ids already present are rejected.
        """
        return Registry([*self._records, *records])

    def __iter__(self) -> Iterator[DonorRecord]:
        return iter(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, donor_id: object) -> bool:
        return any(record.id == donor_id for record in self._records)

    @override
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Registry):
            return NotImplemented
        return self._records == other._records

    @override
    def __hash__(self) -> int:
        return hash(self._records)

    @override
    def __repr__(self) -> str:
        return f"Registry({len(self._records)} records)"


class NdjsonRegistryStore(IRegistryStore):
    """
    Persists a registry as newline-delimited JSON, one record per line in id
    order, after a single header comment line.
    """

    def __init__(self) -> None:
        self.__lock = threading.Lock()
        self._logger: logging.Logger = logging.getLogger(self.__class__.__name__)

    @override
    def save(self, path: Path, registry: Registry) -> None:
        lines = [STORE_HEADER, *(record.model_dump_json() for record in registry)]
        with self.__lock:
            Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
        self._logger.debug(f"Saved {len(registry)} record(s) to {path}")

    @override
    def load(self, path: Path) -> Registry:
        with self.__lock:
            data = Path(path).read_bytes()
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise StoreFormatError(data.count(b"\n", 0, e.start) + 1, "not valid UTF-8") from e

        records: list[DonorRecord] = []
        seen: set[str] = set()
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            try:
                record = DonorRecord.model_validate_json(line)
            except ValidationError as e:
                raise StoreFormatError(number, str(e.errors()[0]["msg"])) from e
            if record.id in seen:
                raise StoreFormatError(number, f"duplicate id '{record.id}'")
            seen.add(record.id)
            records.append(record)

        self._logger.debug(f"Loaded {len(records)} record(s) from {path}")
        return Registry(records)


def save_store(path: Path | str, registry: Registry) -> None:
    NdjsonRegistryStore().save(Path(path), registry)


def load_store(path: Path | str) -> Registry:
    return NdjsonRegistryStore().load(Path(path))
