import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from donormatch.exceptions import EmptyDatasetError, ShapeMismatchError, TooFewSamplesError
from donormatch.network import Network, NetworkConfig, PARAM_NAMES, backprop, forward, init_network
from donormatch.normalizer import Normalizer, fit_normalizer, normalize


_logger = logging.getLogger("Trainer")

ELIGIBLE_TARGET: tuple[float, float] = (1.0, 0.0)
INELIGIBLE_TARGET: tuple[float, float] = (0.0, 1.0)


@dataclass(frozen=True, eq=False)
class TrainingSample:
    """
    Normalized (age, weight) features with a one-hot target:
    (1, 0) for an eligible donor, (0, 1) for an ineligible one.
    """
    features: NDArray[np.float64]
    target: NDArray[np.float64]

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=np.float64)
        target = np.asarray(self.target, dtype=np.float64)
        if features.ndim != 1 or np.any(features < 0.0) or np.any(features > 1.0):
            raise ShapeMismatchError(f"features must be a vector in [0, 1], got {features}")
        if target.ndim != 1 or np.count_nonzero(target == 1.0) != 1 or np.count_nonzero(target == 0.0) != target.size - 1:
            raise ShapeMismatchError(f"target must be one-hot, got {target}")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "target", target)

    @classmethod
    def labelled(cls, features: ArrayLike, eligible: bool) -> "TrainingSample":
        return cls(np.asarray(features, dtype=np.float64), np.array(ELIGIBLE_TARGET if eligible else INELIGIBLE_TARGET))

    @property
    def label(self) -> int:
        return int(np.argmax(self.target))


@dataclass(frozen=True)
class TrainReport:
    epochs_run: int
    final_mse: float
    mse_history: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class CvReport:
    fold_accuracies: list[float]
    mean_accuracy: float
    folds: list[list[int]] = field(default_factory=list)


def _check_shapes(net: Network, samples: Sequence[TrainingSample], config: NetworkConfig) -> None:
    if not samples:
        raise EmptyDatasetError("no training samples")
    if net.layer_sizes != config.layer_sizes:
        raise ShapeMismatchError(f"network is {net.layer_sizes}, config expects {config.layer_sizes}")
    n_in, _, n_out = config.layer_sizes
    for i, sample in enumerate(samples):
        if sample.features.shape != (n_in,) or sample.target.shape != (n_out,):
            raise ShapeMismatchError(
                f"sample {i} has {sample.features.shape[0]} features and {sample.target.shape[0]} targets, "
                f"expected {n_in} and {n_out}"
            )


def train_step(net: Network, sample: TrainingSample, config: NetworkConfig) -> float:
    """
    One stochastic update with momentum, in place:
    delta(t) = -learning_rate * grad(t) + momentum * delta(t-1).
    Returns the sample's squared error before the update.
    """
    grads, error = backprop(net, sample.features, sample.target)
    for name in PARAM_NAMES:
        delta = -config.learning_rate * grads[name] + config.momentum * net.prev_deltas[name]
        getattr(net, name)[...] += delta
        net.prev_deltas[name] = delta
    return error


def mean_squared_error(net: Network, samples: Sequence[TrainingSample]) -> float:
    if not samples:
        raise EmptyDatasetError("no samples")
    total = 0.0
    for sample in samples:
        _, outputs = forward(net, sample.features)
        total += float(np.mean((sample.target - outputs) ** 2))
    return total / len(samples)


def accuracy(net: Network, samples: Sequence[TrainingSample]) -> float:
    """
    Fraction of samples whose argmax output matches the target. Equal outputs
    resolve to the first class (eligible).
    """
    if not samples:
        raise EmptyDatasetError("no samples")
    hits = 0
    for sample in samples:
        _, outputs = forward(net, sample.features)
        hits += int(np.argmax(outputs) == sample.label)
    return hits / len(samples)


def train(
    net: Network,
    samples: Sequence[TrainingSample],
    config: NetworkConfig,
    rng: np.random.Generator | None = None,
) -> TrainReport:
    """
    Per-sample backpropagation with momentum. Sample order is reshuffled every
    epoch; training stops after `max_epochs` or once the epoch's mean squared
    error drops below `error_epsilon`.
    """
    _check_shapes(net, samples, config)
    rng = rng if rng is not None else np.random.default_rng(config.rng_seed)

    n_out = config.layer_sizes[2]
    history: list[float] = []
    for epoch in range(1, config.max_epochs + 1):
        squared = 0.0
        for index in rng.permutation(len(samples)):
            # 2E / n_out is the sample's mean squared error before its update
            squared += 2.0 * train_step(net, samples[index], config) / n_out

        mse = squared / len(samples)
        history.append(mse)
        if mse < config.error_epsilon:
            _logger.debug(f"Early stop at epoch {epoch}, mse {mse:.6f}")
            return TrainReport(epoch, mse, history)

    _logger.debug(f"Trained {config.max_epochs} epoch(s), final mse {history[-1]:.6f}")
    return TrainReport(config.max_epochs, history[-1], history)


def fold_partition(n: int, k: int, rng: np.random.Generator) -> list[list[int]]:
    """
    Shuffles `range(n)` and splits it into `k` disjoint folds whose sizes
    differ by at most one.
    """
    order = rng.permutation(n)
    return [fold.tolist() for fold in np.array_split(order, k)]


def _run_fold(
    index: int,
    folds: list[list[int]],
    samples: Sequence[TrainingSample],
    config: NetworkConfig,
    seed: np.random.SeedSequence,
) -> float:
    held_out = set(folds[index])
    train_set = [samples[i] for i in range(len(samples)) if i not in held_out]
    test_set = [samples[i] for i in folds[index]]

    rng = np.random.default_rng(seed)
    net = init_network(config, rng)
    _ = train(net, train_set, config, rng)
    score = accuracy(net, test_set)
    _logger.debug(f"Fold {index + 1}/{len(folds)}: accuracy {score:.4f} on {len(test_set)} sample(s)")
    return score


def cross_validate(
    samples: Sequence[TrainingSample],
    config: NetworkConfig,
    max_workers: int = 1,
) -> CvReport:
    """
    k-fold cross-validation with `config.folds` folds. Every fold trains a
    fresh network from its own seeded generator, so results do not depend on
    `max_workers`.
    """
    if len(samples) < config.folds:
        raise TooFewSamplesError(f"{len(samples)} sample(s) cannot fill {config.folds} folds")

    partition_seed, *fold_seeds = np.random.SeedSequence(config.rng_seed).spawn(config.folds + 1)
    folds = fold_partition(len(samples), config.folds, np.random.default_rng(partition_seed))

    def run(index: int) -> float:
        return _run_fold(index, folds, samples, config, fold_seeds[index])

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            scores = list(pool.map(run, range(config.folds)))
    else:
        scores = [run(index) for index in range(config.folds)]

    return CvReport(scores, float(np.mean(scores)), folds)


def prepare_samples(
    rows: Sequence[tuple[float, float, bool]],
    normalizer: Normalizer | None = None,
) -> tuple[Normalizer, list[TrainingSample]]:
    """
    Fits a normalizer on the raw (age, weight) columns unless one is given,
    and turns labeled rows into training samples.
    """
    if not rows:
        raise EmptyDatasetError("no labeled rows")
    normalizer = normalizer or fit_normalizer([(age, weight) for age, weight, _ in rows])
    samples = [
        TrainingSample.labelled(normalize(normalizer, age, weight), eligible)
        for age, weight, eligible in rows
    ]
    return normalizer, samples
