import csv
import io
import logging
from collections import defaultdict
from pathlib import Path

from pydantic import ValidationError

from donormatch.donor import DonorRecord
from donormatch.exceptions import CsvError, DuplicateIdError, IngestError, RegistryError


_logger = logging.getLogger("CsvIngest")

REQUIRED_COLUMNS: tuple[str, ...] = (
    "id",
    "name",
    "blood_type",
    "age",
    "weight_kg",
    "distance_m",
    "days_since_donation",
    "phone",
)

# An empty cell in these columns means "no value".
_NULLABLE_COLUMNS = frozenset({"days_since_donation"})


def _validation_errors(row: int, error: ValidationError) -> list[CsvError]:
    errors: list[CsvError] = []
    for detail in error.errors():
        column = str(detail["loc"][0]) if detail["loc"] else None
        errors.append(CsvError(row, column, detail["msg"]))
    return errors


def read_csv_rows(
    path: Path | str, required: tuple[str, ...]
) -> tuple[list[tuple[int, dict[str, str]]], list[CsvError]]:
    """
    Reads a headed CSV file into `(row_number, cells)` pairs, the header being
    row 1. Columns are matched by name in any order. A missing column raises
    at once; ragged rows are returned as errors next to the readable rows.
    """
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        raise IngestError([CsvError(line, None, f"not valid UTF-8 (byte {e.start})")]) from e

    reader = csv.DictReader(io.StringIO(text, newline=""))
    header = [name.strip() for name in reader.fieldnames or []]
    missing = [name for name in required if name not in header]
    if missing:
        raise IngestError([CsvError(1, name, "required column is missing") for name in missing])
    reader.fieldnames = header

    rows: list[tuple[int, dict[str, str]]] = []
    errors: list[CsvError] = []
    for raw in reader:
        number = reader.line_num
        if None in raw:
            errors.append(CsvError(number, None, "row has more fields than the header"))
            continue
        if any(value is None for value in raw.values()):
            errors.append(CsvError(number, None, "row has fewer fields than the header"))
            continue
        rows.append((number, {k: v.strip() for k, v in raw.items()}))

    return rows, errors


def ingest_csv(path: Path | str) -> list[DonorRecord]:
    """
    Loads and validates every donor row of a registry CSV. Either all rows are
    returned or an `IngestError` lists every row-level problem.
    """
    rows, row_errors = read_csv_rows(path, REQUIRED_COLUMNS)
    records: list[DonorRecord] = []
    errors: list[CsvError] = list(row_errors)
    rows_by_id: dict[str, list[int]] = defaultdict(list)

    for number, cells in rows:
        values: dict[str, str | None] = {name: cells[name] for name in REQUIRED_COLUMNS}
        for name in _NULLABLE_COLUMNS:
            if values[name] == "":
                values[name] = None

        try:
            record = DonorRecord.model_validate(values)
        except ValidationError as e:
            errors.extend(_validation_errors(number, e))
            continue

        rows_by_id[record.id].append(number)
        records.append(record)

    problems: list[RegistryError] = []
    problems.extend(sorted(errors, key=lambda e: e.row))
    for donor_id, numbers in rows_by_id.items():
        if len(numbers) > 1:
            problems.append(DuplicateIdError(donor_id, numbers))

    if problems:
        raise IngestError(problems)

    _logger.debug(f"Ingested {len(records)} record(s) from {path}")
    return records


LABELED_COLUMNS: tuple[str, ...] = ("age", "weight_kg", "label")

_LABELS: dict[str, bool] = {
    "eligible": True,
    "1": True,
    "true": True,
    "ineligible": False,
    "0": False,
    "false": False,
}


def ingest_labeled_csv(path: Path | str) -> list[tuple[float, float, bool]]:
    """
    Reads `(age, weight_kg, eligible)` training rows from a CSV with at least
    the columns `age`, `weight_kg` and `label` (eligible/ineligible or 1/0).
    """
    cells_by_row, row_errors = read_csv_rows(path, LABELED_COLUMNS)
    rows: list[tuple[float, float, bool]] = []
    errors: list[CsvError] = list(row_errors)

    for number, cells in cells_by_row:
        try:
            age = float(cells["age"])
        except ValueError:
            errors.append(CsvError(number, "age", f"not a number: '{cells['age']}'"))
            continue
        try:
            weight = float(cells["weight_kg"])
        except ValueError:
            errors.append(CsvError(number, "weight_kg", f"not a number: '{cells['weight_kg']}'"))
            continue
        label = _LABELS.get(cells["label"].lower())
        if label is None:
            errors.append(CsvError(number, "label", f"unknown label '{cells['label']}'"))
            continue
        rows.append((age, weight, label))

    if errors:
        raise IngestError(sorted(errors, key=lambda e: e.row))

    _logger.debug(f"Read {len(rows)} labeled row(s) from {path}")
    return rows
