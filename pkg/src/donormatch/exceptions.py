from typing import Any


class DonorMatchError(Exception):
    pass


# Fuzzy sets and catalogs


class FuzzyError(DonorMatchError):
    pass


class CurveError(FuzzyError):
    pass


class CatalogError(FuzzyError):
    pass


class UnknownAttributeError(FuzzyError):
    def __init__(self, name: str) -> None:
        super().__init__(f"Unknown attribute '{name}'")
        self.name: str = name


class UnknownLabelError(FuzzyError):
    def __init__(self, attribute: str, label: str) -> None:
        super().__init__(f"Unknown label '{label}' for attribute '{attribute}'")
        self.attribute: str = attribute
        self.label: str = label


# Query dialect


def format_position(source: str, position: int) -> str:
    """
    Renders `line:column` followed by the offending source line and a caret.
    Lines and columns are 1-based.
    """
    position = max(0, min(position, len(source)))
    line_start = source.rfind("\n", 0, position) + 1
    line_end = source.find("\n", position)
    if line_end == -1:
        line_end = len(source)
    line_no = source.count("\n", 0, position) + 1
    column = position - line_start + 1
    excerpt = source[line_start:line_end]
    return f"{line_no}:{column}\n  {excerpt}\n  {' ' * (column - 1)}^"


class QueryError(DonorMatchError):
    pass


class LexError(QueryError):
    def __init__(self, position: int, message: str) -> None:
        super().__init__(f"{message} at offset {position}")
        self.position: int = position
        self.message: str = message

    def describe(self, source: str) -> str:
        return f"{self.message} at {format_position(source, self.position)}"


class ParseError(QueryError):
    def __init__(self, position: int, expected: str, found: str) -> None:
        super().__init__(f"Expected {expected} but found {found} at offset {position}")
        self.position: int = position
        self.expected: str = expected
        self.found: str = found

    def describe(self, source: str) -> str:
        return (
            f"expected {self.expected} but found {self.found} at "
            f"{format_position(source, self.position)}"
        )


class QueryEvaluationError(QueryError):
    def __init__(self, record_id: str, cause: FuzzyError) -> None:
        super().__init__(f"Record '{record_id}': {cause}")
        self.record_id: str = record_id
        self.cause: FuzzyError = cause


# Neural network


class NeuralError(DonorMatchError):
    pass


class EmptyDatasetError(NeuralError):
    pass


class ShapeMismatchError(NeuralError):
    pass


class DegenerateFeatureError(NeuralError):
    pass


class TooFewSamplesError(NeuralError):
    pass


class ModelFormatError(NeuralError):
    def __init__(self, line: int | None, message: str) -> None:
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"Invalid model file, {where}{message}")
        self.line: int | None = line
        self.message: str = message


class VersionMismatchError(NeuralError):
    def __init__(self, found: Any, expected: int) -> None:
        super().__init__(f"Model file version {found!r} is not supported (expected {expected})")
        self.found: Any = found
        self.expected: int = expected


# Registry


class RegistryError(DonorMatchError):
    pass


class CsvError(RegistryError):
    def __init__(self, row: int, column: str | None, message: str) -> None:
        where = f"row {row}" + (f", column '{column}'" if column else "")
        super().__init__(f"{where}: {message}")
        self.row: int = row
        self.column: str | None = column
        self.message: str = message


class DuplicateIdError(RegistryError):
    def __init__(self, id: str, rows: list[int]) -> None:
        where = f" (rows {', '.join(map(str, rows))})" if rows else " (already in the registry)"
        super().__init__(f"Duplicate donor id '{id}'{where}")
        self.id: str = id
        self.rows: list[int] = rows


class IngestError(RegistryError):
    def __init__(self, errors: list[RegistryError]) -> None:
        lines = "\n".join(f"  {error}" for error in errors)
        super().__init__(f"{len(errors)} invalid row(s):\n{lines}")
        self.errors: list[RegistryError] = errors


class StoreFormatError(RegistryError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"Invalid store file, line {line}: {message}")
        self.line: int = line
        self.message: str = message


# Pipeline


class PipelineError(DonorMatchError):
    def __init__(self, stage: str, cause: DonorMatchError) -> None:
        super().__init__(f"[{stage}] {cause}")
        self.stage: str = stage
        self.cause: DonorMatchError = cause


# Command line


class ConfigurationError(DonorMatchError):
    pass
