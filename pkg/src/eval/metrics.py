"""
Test metrics: confusion matrices, error rates, FPR/FNR, error-specific
rates and confusion-matrix deltas.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.data.dataset import LabeledDataset
from src.nn.architectures import NetworkConfig
from src.nn.losses import bce_loss, predict_labels
from src.nn.network import MlpNetwork
from src.nn.optimizers import optimizer_step
from src.utils.errors import InputError


@dataclass
class EvaluationResult:
    """
    Metrics of one classifier on one test set.

    ``confusion[i, j]`` counts rows of class index i predicted as j. FPR and
    FNR treat ``positive_class`` (a label value) as the positive class and
    are None when no positive class applies.
    """

    confusion: np.ndarray
    class_values: List[int]
    error: float
    fpr: Optional[float] = None
    fnr: Optional[float] = None
    positive_class: Optional[int] = None

    @property
    def n_test(self) -> int:
        return int(self.confusion.sum())

    def class_accuracy(self) -> Dict[int, float]:
        totals = self.confusion.sum(axis=1)
        return {
            value: float(self.confusion[i, i] / totals[i]) if totals[i] else 0.0
            for i, value in enumerate(self.class_values)
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.error,
            "fpr": self.fpr,
            "fnr": self.fnr,
            "positive_class": self.positive_class,
            "class_values": list(self.class_values),
            "confusion": self.confusion.tolist(),
        }


def confusion_matrix(true: np.ndarray, pred: np.ndarray, n_classes: int) -> np.ndarray:
    """Counts of (true, predicted) class-index pairs."""
    matrix = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(matrix, (np.asarray(true, dtype=np.int64), np.asarray(pred, dtype=np.int64)), 1)
    return matrix


def rates_from_confusion(confusion: np.ndarray, positive: int) -> Tuple[float, float]:
    """
    One-vs-rest false positive and false negative rates.

    Args:
        confusion: Square count matrix
        positive: Class index of the positive class

    Returns:
        Tuple[float, float]: FPR and FNR (0 when a denominator is empty)
    """
    tp = confusion[positive, positive]
    fn = confusion[positive].sum() - tp
    fp = confusion[:, positive].sum() - tp
    tn = confusion.sum() - tp - fn - fp
    fpr = float(fp / (fp + tn)) if fp + tn else 0.0
    fnr = float(fn / (fn + tp)) if fn + tp else 0.0
    return fpr, fnr


def predict(net: MlpNetwork, features: np.ndarray) -> np.ndarray:
    """Class-index predictions of a classifier."""
    return predict_labels(net.output_activation, net.predict(features))


def evaluate(net: MlpNetwork, test_set: LabeledDataset,
             positive_class: Optional[int] = None) -> EvaluationResult:
    """
    Score a classifier on a test set.

    Without ``positive_class``, a two-class test set treats the value at
    class index 1 as positive (5 in a 3-vs-5 task with class values
    [3, 5]), so FPR is the share of class-index-0 rows predicted as class
    index 1. With more classes FPR/FNR are reported only when a positive
    class is named (one-vs-rest).
    The chosen value is returned in ``positive_class`` and written to the
    report CSV next to the rates.

    Args:
        net: Trained classifier
        test_set: Held-out rows
        positive_class: Label value treated as positive

    Returns:
        EvaluationResult: Confusion matrix, error and rates
    """
    if test_set.n_rows == 0:
        raise InputError("cannot evaluate on an empty test set")
    pred = predict(net, test_set.features)
    confusion = confusion_matrix(test_set.labels, pred, test_set.n_classes)
    error = 1.0 - float(np.trace(confusion)) / confusion.sum()

    if positive_class is None and test_set.n_classes == 2:
        positive_class = test_set.value_of_index(1)
    fpr = fnr = None
    if positive_class is not None:
        fpr, fnr = rates_from_confusion(confusion, test_set.index_of_value(positive_class))
    return EvaluationResult(confusion, test_set.class_values.tolist(), error, fpr, fnr, positive_class)


def error_specific_rate(net: MlpNetwork, test_set: LabeledDataset,
                        from_class: int, to_class: int) -> float:
    """Fraction of ``from_class`` test rows predicted as ``to_class`` (label values)."""
    from_idx = test_set.index_of_value(from_class)
    to_idx = test_set.index_of_value(to_class)
    rows = test_set.rows_of([from_idx])
    if rows.size == 0:
        raise InputError(f"class {from_class} has no test rows")
    pred = predict(net, test_set.features[rows])
    return float(np.sum(pred == to_idx)) / rows.size


@dataclass
class ConfusionDelta:
    """Row-normalized mean poisoned confusion minus mean clean confusion."""

    delta: np.ndarray
    class_values: List[int]

    def to_dict(self) -> Dict[str, Any]:
        return {"class_values": list(self.class_values), "delta": self.delta.tolist()}


def _row_normalized_mean(results: Sequence[EvaluationResult]) -> np.ndarray:
    mean = np.mean([r.confusion.astype(np.float64) for r in results], axis=0)
    totals = mean.sum(axis=1, keepdims=True)
    if np.any(totals == 0):
        raise InputError("a class has no test rows, its confusion row cannot be normalized")
    return mean / totals


def confusion_delta(clean: Sequence[EvaluationResult],
                    poisoned: Sequence[EvaluationResult]) -> ConfusionDelta:
    """
    Average change of the confusion matrix caused by poisoning.

    Args:
        clean: Results of clean runs
        poisoned: Results of poisoned runs on the same test set

    Returns:
        ConfusionDelta: Rows sum to zero
    """
    if not clean or not poisoned:
        raise InputError("both report groups need at least one result")
    classes = clean[0].class_values
    if any(r.class_values != classes for r in list(clean) + list(poisoned)):
        raise InputError("report groups cover different class sets")
    return ConfusionDelta(_row_normalized_mean(poisoned) - _row_normalized_mean(clean), list(classes))


def distribution_match_accuracy(
    genuine: np.ndarray,
    poison: np.ndarray,
    rng: np.random.Generator,
    network: Optional[NetworkConfig] = None,
    epochs: int = 500,
) -> float:
    """
    Held-out accuracy of a fresh discriminator separating genuine rows from poison.

    Half of each group trains the discriminator (full batch), the other half
    is scored. Accuracy near 0.5 means the poison matches the genuine
    distribution.

    Args:
        genuine: Genuine rows of the poisoning class
        poison: Generated rows
        rng: Generator for the split and initialization
        network: Discriminator architecture (synthetic discriminator by default)
        epochs: Full-batch training steps

    Returns:
        float: Accuracy on the held-out halves
    """
    if genuine.shape[0] < 2 or poison.shape[0] < 2:
        raise InputError("need at least two rows of each group")
    network = network or NetworkConfig.from_preset("synthetic_discriminator")
    x = np.vstack([genuine, poison])
    y = np.concatenate([np.ones(genuine.shape[0]), np.zeros(poison.shape[0])]).reshape(-1, 1)
    order = rng.permutation(x.shape[0])
    half = x.shape[0] // 2
    train, test = order[:half], order[half:]

    net = network.build(x.shape[1], 1, rng)
    for _ in range(epochs):
        out, cache = net.forward(x[train], training=True, rng=rng)
        _, grad = bce_loss(out, y[train])
        grads, _ = net.backward(cache, grad)
        optimizer_step(net, grads, direction="descend")
    pred = (net.predict(x[test]) > 0.5).astype(np.float64)
    return float(np.mean(pred == y[test]))
