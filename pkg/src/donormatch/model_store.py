import json
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, override

import numpy as np
from pydantic import BaseModel, ValidationError

from donormatch.core import IModelStore
from donormatch.exceptions import ModelFormatError, ShapeMismatchError, VersionMismatchError
from donormatch.network import Network, NetworkConfig
from donormatch.normalizer import Normalizer


MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainedModel:
    network: Network
    normalizer: Normalizer
    config: NetworkConfig


class _Weights(BaseModel):
    w_in_hidden: list[list[float]]
    w_hidden_out: list[list[float]]


class _Biases(BaseModel):
    b_hidden: list[float]
    b_out: list[float]


class _ModelDocument(BaseModel):
    version: int
    config: NetworkConfig
    normalizer: Normalizer
    weights: _Weights
    biases: _Biases


def _to_document(model: TrainedModel) -> dict[str, Any]:
    net = model.network
    return {
        "version": MODEL_FORMAT_VERSION,
        "config": model.config.model_dump(mode="json"),
        "normalizer": model.normalizer.model_dump(mode="json"),
        "weights": {
            "w_in_hidden": net.w_in_hidden.tolist(),
            "w_hidden_out": net.w_hidden_out.tolist(),
        },
        "biases": {
            "b_hidden": net.b_hidden.tolist(),
            "b_out": net.b_out.tolist(),
        },
    }


def _from_document(document: Any) -> TrainedModel:
    if not isinstance(document, dict):
        raise ModelFormatError(1, "top level must be a JSON object")
    version = document.get("version")
    if version != MODEL_FORMAT_VERSION:
        raise VersionMismatchError(version, MODEL_FORMAT_VERSION)

    try:
        parsed = _ModelDocument.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ModelFormatError(None, f"{location}: {first['msg']}") from e

    try:
        network = Network(
            np.array(parsed.weights.w_in_hidden, dtype=np.float64),
            np.array(parsed.biases.b_hidden, dtype=np.float64),
            np.array(parsed.weights.w_hidden_out, dtype=np.float64),
            np.array(parsed.biases.b_out, dtype=np.float64),
        )
    except ValueError as e:
        raise ShapeMismatchError(f"weight arrays are not rectangular: {e}") from e

    if network.layer_sizes != parsed.config.layer_sizes:
        raise ShapeMismatchError(
            f"weights describe a {network.layer_sizes} network, config declares {parsed.config.layer_sizes}"
        )
    if parsed.normalizer.width != network.layer_sizes[0]:
        raise ShapeMismatchError(
            f"normalizer scales {parsed.normalizer.width} feature(s), network takes {network.layer_sizes[0]}"
        )
    return TrainedModel(network, parsed.normalizer, parsed.config)


class JsonModelStore(IModelStore):
    """
    Reads and writes versioned JSON model files. Floats are written with
    shortest round-trip precision, so weights reload bit-exactly.
    """

    def __init__(self) -> None:
        self.__lock = threading.Lock()
        self._logger: logging.Logger = logging.getLogger(self.__class__.__name__)

    @override
    def save(self, path: Path, model: TrainedModel) -> None:
        text = json.dumps(_to_document(model), indent=2)
        with self.__lock:
            Path(path).write_text(text + "\n", encoding="utf-8")
        self._logger.debug(f"Saved {model.network.layer_sizes} model to {path}")

    @override
    def load(self, path: Path) -> TrainedModel:
        with self.__lock:
            data = Path(path).read_bytes()
        try:
            document = json.loads(data.decode("utf-8"))
        except UnicodeDecodeError as e:
            raise ModelFormatError(data.count(b"\n", 0, e.start) + 1, "not valid UTF-8") from e
        except json.JSONDecodeError as e:
            raise ModelFormatError(e.lineno, e.msg) from e
        model = _from_document(document)
        self._logger.debug(f"Loaded {model.network.layer_sizes} model from {path}")
        return model


def save_model(path: Path | str, model: TrainedModel) -> None:
    JsonModelStore().save(Path(path), model)


def load_model(path: Path | str) -> TrainedModel:
    return JsonModelStore().load(Path(path))
