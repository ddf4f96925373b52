import json
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import BaseModel, TypeAdapter, ValidationError

from donormatch.core import IMembershipCurve
from donormatch.exceptions import CatalogError, CurveError, UnknownAttributeError, UnknownLabelError
from donormatch.membership import LeftShoulder, RightShoulder, Triangle, make_curve


def _key(name: str) -> str:
    return name.strip().casefold()


@dataclass(frozen=True, slots=True)
class FuzzySet:
    label: str
    curve: IMembershipCurve
    aliases: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.label.strip():
            raise CatalogError("Fuzzy set label must be nonempty")

    def names(self) -> tuple[str, ...]:
        return (self.label, *self.aliases)

    def degree(self, x: float) -> float:
        return self.curve.degree(x)


@dataclass(frozen=True, slots=True)
class LinguisticVariable:
    """
    A named attribute with its ordered linguistic sets. Labels and aliases
    resolve case-insensitively.
    """
    name: str
    units: str
    sets: tuple[FuzzySet, ...]
    aliases: tuple[str, ...] = ()
    _index: dict[str, FuzzySet] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise CatalogError("Variable name must be nonempty")
        if not self.sets:
            raise CatalogError(f"Variable '{self.name}' has no fuzzy sets")

        index: dict[str, FuzzySet] = {}
        for fuzzy_set in self.sets:
            for name in fuzzy_set.names():
                if _key(name) in index:
                    raise CatalogError(f"Duplicate label '{name}' in variable '{self.name}'")
                index[_key(name)] = fuzzy_set
        object.__setattr__(self, "_index", index)

    def names(self) -> tuple[str, ...]:
        return (self.name, *self.aliases)

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.sets]

    def fuzzy_set(self, label: str) -> FuzzySet:
        try:
            return self._index[_key(label)]
        except KeyError:
            raise UnknownLabelError(self.name, label) from None

    def __getitem__(self, label: str) -> FuzzySet:
        return self.fuzzy_set(label)

    def fuzzify(self, x: float) -> dict[str, float]:
        return {s.label: s.degree(x) for s in self.sets}


class Catalog:
    """
    An immutable collection of linguistic variables, addressable by name or alias.
    """

    def __init__(self, variables: Sequence[LinguisticVariable]) -> None:
        self._variables: tuple[LinguisticVariable, ...] = tuple(variables)
        self._index: dict[str, LinguisticVariable] = {}
        for variable in self._variables:
            for name in variable.names():
                if _key(name) in self._index:
                    raise CatalogError(f"Duplicate variable name '{name}'")
                self._index[_key(name)] = variable

    def variable(self, name: str) -> LinguisticVariable:
        try:
            return self._index[_key(name)]
        except KeyError:
            raise UnknownAttributeError(name) from None

    def __getitem__(self, name: str) -> LinguisticVariable:
        return self.variable(name)

    def __contains__(self, name: str) -> bool:
        return _key(name) in self._index

    def __iter__(self) -> Iterator[LinguisticVariable]:
        return iter(self._variables)

    def __len__(self) -> int:
        return len(self._variables)

    def __repr__(self) -> str:
        return f"Catalog({', '.join(v.name for v in self._variables)})"


def standard_catalog() -> Catalog:
    """
    The built-in donor catalog: age in years, distance in meters and time in
    days since the last donation, three sets each.
    """
    age = LinguisticVariable(
        name="age",
        units="years",
        aliases=("usia",),
        sets=(
            FuzzySet("Muda", LeftShoulder(17, 33), aliases=("Young",)),
            FuzzySet("Baya", Triangle(17, 33, 60), aliases=("Middle", "ParuhBaya")),
            FuzzySet("Tua", RightShoulder(33, 60), aliases=("Old",)),
        ),
    )
    distance = LinguisticVariable(
        name="distance",
        units="meters",
        aliases=("jarak",),
        sets=(
            FuzzySet("Dekat", LeftShoulder(1000, 10000), aliases=("Near",)),
            FuzzySet("AgakJauh", Triangle(1000, 5000, 10000), aliases=("ABitFar",)),
            FuzzySet("Jauh", RightShoulder(1000, 10000), aliases=("Far",)),
        ),
    )
    time = LinguisticVariable(
        name="time",
        units="days",
        aliases=("waktu_donor",),
        sets=(
            FuzzySet("Baru", LeftShoulder(90, 300), aliases=("Recent",)),
            FuzzySet("AgakLama", Triangle(90, 195, 300), aliases=("ShortTerm",)),
            FuzzySet("Lama", RightShoulder(90, 300), aliases=("Old",)),
        ),
    )
    return Catalog([age, distance, time])


class _SetDocument(BaseModel):
    label: str
    shape: str
    params: list[float]
    aliases: list[str] = []


class _VariableDocument(BaseModel):
    units: str = ""
    aliases: list[str] = []
    sets: list[_SetDocument]


_CatalogDocument = TypeAdapter(dict[str, _VariableDocument | list[_SetDocument]])


def catalog_from_dict(document: object) -> Catalog:
    """
    Builds a catalog from `{variable: [{label, shape, params}, ...]}`. A variable
    may instead map to `{units, aliases, sets: [...]}`.
    """
    try:
        parsed = _CatalogDocument.validate_python(document)
    except ValidationError as e:
        raise CatalogError(f"Invalid catalog document: {e}") from e

    variables: list[LinguisticVariable] = []
    for name, spec in parsed.items():
        if isinstance(spec, list):
            spec = _VariableDocument(sets=spec)
        try:
            sets = tuple(
                FuzzySet(s.label, make_curve(s.shape, s.params), tuple(s.aliases))
                for s in spec.sets
            )
        except CurveError as e:
            raise CatalogError(f"Variable '{name}': {e}") from e
        variables.append(LinguisticVariable(name, spec.units, sets, tuple(spec.aliases)))
    return Catalog(variables)


def load_catalog(path: Path | str) -> Catalog:
    data = Path(path).read_bytes()
    try:
        document = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        raise CatalogError(f"Catalog is not valid UTF-8 (line {line})") from e
    except json.JSONDecodeError as e:
        raise CatalogError(f"Catalog is not valid JSON (line {e.lineno}): {e.msg}") from e
    return catalog_from_dict(document)
