# pragma: no cover

from pathlib import Path

from donormatch.core import IClassifier, IModelStore, IQueryEngine, IRegistryStore, RejectionReason, Verdict

from .catalog import Catalog, FuzzySet, LinguisticVariable, load_catalog, standard_catalog
from .classifier import Classification, NetworkClassifier, classify
from .csv_ingest import ingest_csv
from .donor import BloodType, DonorRecord
from .eligibility import EligibilityRule, FilterOutcome, hard_filter
from .evaluator import RankedRow, evaluate, run_query
from .membership import LeftShoulder, RightShoulder, Triangle, membership
from .model_store import JsonModelStore, TrainedModel, load_model, save_model
from .network import Network, NetworkConfig, forward, init_network, sigmoid
from .normalizer import Normalizer, fit_normalizer, normalize
from .parser import parse, parse_query
from .pipeline import DonorRanker, RankedDonor, explain, rank_donors
from .printer import pretty_print
from .query_engine import FuzzyQueryEngine
from .registry_store import NdjsonRegistryStore, Registry, load_store, save_store
from .lexer import tokenize
from .training import cross_validate, train


def create_ranker(
    model_path: Path | str,
    catalog_path: Path | str | None = None,
    rule: EligibilityRule | None = None,
) -> DonorRanker:
    """
    Wires a ranker from a saved model and an optional catalog document.
    """
    model_store: IModelStore = JsonModelStore()
    model = model_store.load(Path(model_path))
    catalog = load_catalog(catalog_path) if catalog_path is not None else standard_catalog()

    classifier: IClassifier = NetworkClassifier(model.network, model.normalizer)
    return DonorRanker(classifier, FuzzyQueryEngine(catalog), rule)


__all__ = [
    "BloodType",
    "Catalog",
    "Classification",
    "DonorRanker",
    "DonorRecord",
    "EligibilityRule",
    "FilterOutcome",
    "FuzzyQueryEngine",
    "FuzzySet",
    "IClassifier",
    "IModelStore",
    "IQueryEngine",
    "IRegistryStore",
    "JsonModelStore",
    "LeftShoulder",
    "LinguisticVariable",
    "NdjsonRegistryStore",
    "Network",
    "NetworkClassifier",
    "NetworkConfig",
    "Normalizer",
    "RankedDonor",
    "RankedRow",
    "Registry",
    "RejectionReason",
    "RightShoulder",
    "TrainedModel",
    "Triangle",
    "Verdict",
    "classify",
    "create_ranker",
    "cross_validate",
    "evaluate",
    "explain",
    "fit_normalizer",
    "forward",
    "hard_filter",
    "ingest_csv",
    "init_network",
    "load_catalog",
    "load_model",
    "load_store",
    "membership",
    "normalize",
    "parse",
    "parse_query",
    "pretty_print",
    "rank_donors",
    "run_query",
    "save_model",
    "save_store",
    "sigmoid",
    "standard_catalog",
    "tokenize",
    "train",
]
