from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Self, overload

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator

from donormatch.exceptions import ShapeMismatchError


type Vector = NDArray[np.float64]
type Matrix = NDArray[np.float64]

PARAM_NAMES: tuple[str, ...] = ("w_in_hidden", "b_hidden", "w_hidden_out", "b_out")

INIT_RANGE = 0.5


class NetworkConfig(BaseModel):
    """
    Architecture and training hyperparameters. Defaults are the reference
    cross-validation setup: one hidden layer of 3 sigmoid units, learning rate
    0.001, momentum 0.9, 100 epochs, error epsilon 0.001, 10 folds.
    """
    model_config = ConfigDict(frozen=True)

    layer_sizes: tuple[int, int, int] = (2, 3, 2)
    learning_rate: float = Field(default=0.001, gt=0)
    momentum: float = Field(default=0.9, ge=0, lt=1)
    max_epochs: int = Field(default=100, ge=1)
    error_epsilon: float = Field(default=0.001, ge=0)
    folds: int = Field(default=10, ge=2)
    rng_seed: int = Field(default=0, ge=0)

    @field_validator("layer_sizes")
    @classmethod
    def _positive_sizes(cls, value: tuple[int, int, int]) -> tuple[int, int, int]:
        if any(size < 1 for size in value):
            raise ValueError(f"layer sizes must be >= 1, got {value}")
        return value


@dataclass(eq=False)
class Network:
    """
    Single-hidden-layer sigmoid network. `w_in_hidden[i][j]` connects input i
    to hidden unit j, `w_hidden_out[j][k]` connects hidden unit j to output k.
    `prev_deltas` holds the last applied update per parameter for momentum.
    """
    w_in_hidden: Matrix
    b_hidden: Vector
    w_hidden_out: Matrix
    b_out: Vector
    prev_deltas: dict[str, NDArray[np.float64]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.w_in_hidden = np.array(self.w_in_hidden, dtype=np.float64)
        self.b_hidden = np.array(self.b_hidden, dtype=np.float64)
        self.w_hidden_out = np.array(self.w_hidden_out, dtype=np.float64)
        self.b_out = np.array(self.b_out, dtype=np.float64)

        n_in, n_hidden = self.w_in_hidden.shape if self.w_in_hidden.ndim == 2 else (0, 0)
        expected = {
            "w_in_hidden": (n_in, n_hidden),
            "b_hidden": (n_hidden,),
            "w_hidden_out": (n_hidden, self.b_out.shape[0] if self.b_out.ndim == 1 else 0),
            "b_out": (self.b_out.shape[0] if self.b_out.ndim == 1 else 0,),
        }
        for name, shape in expected.items():
            actual = getattr(self, name).shape
            if actual != shape or 0 in actual:
                raise ShapeMismatchError(f"'{name}' has shape {actual}, expected {shape}")
            if not np.all(np.isfinite(getattr(self, name))):
                raise ShapeMismatchError(f"'{name}' contains non-finite values")

        for name in PARAM_NAMES:
            if name not in self.prev_deltas:
                self.prev_deltas[name] = np.zeros_like(getattr(self, name))

    @property
    def layer_sizes(self) -> tuple[int, int, int]:
        n_in, n_hidden = self.w_in_hidden.shape
        return (n_in, n_hidden, self.b_out.shape[0])

    def params(self) -> dict[str, NDArray[np.float64]]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> Self:
        return type(self)(
            self.w_in_hidden.copy(),
            self.b_hidden.copy(),
            self.w_hidden_out.copy(),
            self.b_out.copy(),
            {name: delta.copy() for name, delta in self.prev_deltas.items()},
        )

    def same_weights(self, other: "Network") -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.params().values(), other.params().values()))


@overload
def sigmoid(x: float) -> float: ...
@overload
def sigmoid(x: NDArray[np.float64]) -> NDArray[np.float64]: ...
def sigmoid(x: float | NDArray[np.float64]) -> float | NDArray[np.float64]:
    """
    Logistic function, evaluated without overflow for large |x|.
    """
    arr = np.asarray(x, dtype=np.float64)
    z = np.exp(-np.abs(arr))
    out = np.where(arr >= 0, 1.0 / (1.0 + z), z / (1.0 + z))
    if out.ndim == 0:
        return float(out)
    return out


def forward(net: Network, features: ArrayLike) -> tuple[Vector, Vector]:
    x = np.asarray(features, dtype=np.float64)
    if x.shape != (net.layer_sizes[0],):
        raise ShapeMismatchError(f"expected {net.layer_sizes[0]} features, got shape {x.shape}")
    hidden = sigmoid(x @ net.w_in_hidden + net.b_hidden)
    outputs = sigmoid(hidden @ net.w_hidden_out + net.b_out)
    return hidden, outputs


def squared_error(outputs: Vector, target: Vector) -> float:
    """
    E = 1/2 * sum_k (target_k - output_k)^2
    """
    return 0.5 * float(np.sum((target - outputs) ** 2))


def backprop(net: Network, features: ArrayLike, target: ArrayLike) -> tuple[dict[str, NDArray[np.float64]], float]:
    """
    Gradients of the squared error with respect to every parameter, and the
    error itself, for one sample.
    """
    x = np.asarray(features, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    hidden, outputs = forward(net, x)
    if t.shape != outputs.shape:
        raise ShapeMismatchError(f"expected target of shape {outputs.shape}, got {t.shape}")

    delta_out = (outputs - t) * outputs * (1.0 - outputs)
    delta_hidden = (net.w_hidden_out @ delta_out) * hidden * (1.0 - hidden)

    grads = {
        "w_in_hidden": np.outer(x, delta_hidden),
        "b_hidden": delta_hidden,
        "w_hidden_out": np.outer(hidden, delta_out),
        "b_out": delta_out,
    }
    return grads, squared_error(outputs, t)


def init_network(config: NetworkConfig, rng: np.random.Generator | None = None) -> Network:
    """
    Weights uniform in [-0.5, 0.5], biases and momentum memory zero. Without
    an explicit generator the draw is seeded from `config.rng_seed`.
    """
    rng = rng if rng is not None else np.random.default_rng(config.rng_seed)
    n_in, n_hidden, n_out = config.layer_sizes
    return Network(
        w_in_hidden=rng.uniform(-INIT_RANGE, INIT_RANGE, size=(n_in, n_hidden)),
        b_hidden=np.zeros(n_hidden),
        w_hidden_out=rng.uniform(-INIT_RANGE, INIT_RANGE, size=(n_hidden, n_out)),
        b_out=np.zeros(n_out),
    )


def network_from_lists(
    w_in_hidden: Sequence[Sequence[float]],
    b_hidden: Sequence[float],
    w_hidden_out: Sequence[Sequence[float]],
    b_out: Sequence[float],
) -> Network:
    return Network(
        np.array(w_in_hidden, dtype=np.float64),
        np.array(b_hidden, dtype=np.float64),
        np.array(w_hidden_out, dtype=np.float64),
        np.array(b_out, dtype=np.float64),
    )


def reference_network() -> Network:
    """
    A trained 2-3-2 eligibility network used as the reference model
    (inputs: normalized age, normalized body weight).
    """
    return network_from_lists(
        w_in_hidden=[[2.646, 2.530, 1.785], [2.581, 2.462, 1.676]],
        b_hidden=[-2.557, -2.436, -1.608],
        w_hidden_out=[[3.360, -3.327], [3.093, -3.066], [1.580, -1.658]],
        b_out=[-3.690, 3.7],
    )
