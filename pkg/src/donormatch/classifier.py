import logging
from dataclasses import dataclass
from typing import override

from donormatch.core import IClassifier, Verdict
from donormatch.exceptions import ShapeMismatchError
from donormatch.network import Network, forward
from donormatch.normalizer import Normalizer, normalize


@dataclass(frozen=True, slots=True)
class Classification:
    verdict: Verdict
    confidence_eligible: float
    confidence_ineligible: float

    @property
    def is_eligible(self) -> bool:
        return self.verdict is Verdict.ELIGIBLE


def classify(net: Network, normalizer: Normalizer, age: float, weight: float) -> Classification:
    """
    Runs the network on normalized (age, weight). The first output is the
    eligible class and wins ties.
    """
    _, outputs = forward(net, normalize(normalizer, age, weight))
    eligible, ineligible = float(outputs[0]), float(outputs[1])
    verdict = Verdict.ELIGIBLE if eligible >= ineligible else Verdict.INELIGIBLE
    return Classification(verdict, eligible, ineligible)


class NetworkClassifier(IClassifier):
    def __init__(self, network: Network, normalizer: Normalizer) -> None:
        self._logger: logging.Logger = logging.getLogger(self.__class__.__name__)
        if network.layer_sizes[0] != 2 or network.layer_sizes[2] != 2:
            raise ShapeMismatchError(f"eligibility network must be 2-n-2, got {network.layer_sizes}")
        self.network: Network = network
        self.normalizer: Normalizer = normalizer

    @override
    def classify(self, age: float, weight: float) -> Classification:
        result = classify(self.network, self.normalizer, age, weight)
        self._logger.debug(f"age={age} weight={weight} -> {result.verdict.value} ({result.confidence_eligible:.4f})")
        return result
