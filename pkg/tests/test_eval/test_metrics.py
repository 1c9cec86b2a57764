"""
Tests for evaluation metrics and confusion deltas.
"""
import numpy as np
import pytest

from src.data.dataset import LabeledDataset
from src.eval.metrics import (
    EvaluationResult,
    confusion_delta,
    confusion_matrix,
    distribution_match_accuracy,
    error_specific_rate,
    evaluate,
    predict,
    rates_from_confusion,
)
from src.nn.architectures import NetworkConfig
from src.nn.layers import LayerSpec
from src.nn.network import MlpNetwork
from src.nn.optimizers import OptimizerSpec
from src.utils.errors import InputError


def threshold_net(weight, bias):
    """One sigmoid unit on one feature."""
    return MlpNetwork([LayerSpec(in_dim=1, out_dim=1, activation="sigmoid")],
                      [np.array([[weight]])], [np.array([[bias]])])


@pytest.fixture
def balanced():
    """Values 3 (negative side) and 5 (positive side), two rows each."""
    return LabeledDataset(features=np.array([[-2.0], [-1.0], [1.0], [2.0]]),
                          labels=np.array([0, 0, 1, 1]), class_values=[3, 5])


def result(matrix):
    matrix = np.asarray(matrix)
    return EvaluationResult(matrix, [0, 1], 1 - np.trace(matrix) / matrix.sum())


def test_perfect_predictions(balanced):
    """Test error 0 and a diagonal confusion matrix."""
    out = evaluate(threshold_net(10.0, 0.0), balanced)

    assert out.error == 0.0
    np.testing.assert_array_equal(out.confusion, [[2, 0], [0, 2]])
    assert (out.fpr, out.fnr) == (0.0, 0.0)
    assert out.positive_class == 5


def test_all_one_class(balanced):
    """Test a constant predictor on a balanced binary test set."""
    out = evaluate(threshold_net(0.0, 10.0), balanced)

    assert out.error == 0.5
    assert out.fpr == 1.0 and out.fnr == 0.0
    out = evaluate(threshold_net(0.0, 10.0), balanced, positive_class=3)
    assert out.fpr == 0.0 and out.fnr == 1.0


def test_metrics_match_tally_oracle():
    """Test the confusion matrix and error against a per-row tally."""
    gen = np.random.default_rng(0)
    net = NetworkConfig(hidden=[6], output_activation="softmax").build(3, 4, gen)
    test = LabeledDataset(features=gen.normal(size=(200, 3)), labels=gen.integers(0, 4, size=200))

    out = evaluate(net, test, positive_class=2)

    pred = predict(net, test.features)
    tally = np.zeros((4, 4), dtype=int)
    for t, p in zip(test.labels, pred):
        tally[t, p] += 1
    np.testing.assert_array_equal(out.confusion, tally)
    assert out.error == pytest.approx(np.mean(pred != test.labels))
    np.testing.assert_array_equal(out.confusion.sum(axis=1), np.bincount(test.labels, minlength=4))
    positives = test.labels == 2
    assert out.fpr == pytest.approx(np.mean(pred[~positives] == 2))
    assert out.fnr == pytest.approx(np.mean(pred[positives] != 2))


def test_multiclass_without_positive_class():
    """Test FPR/FNR stay unset for more than two classes."""
    gen = np.random.default_rng(1)
    net = NetworkConfig(output_activation="softmax").build(2, 3, gen)
    test = LabeledDataset(features=gen.normal(size=(30, 2)), labels=np.arange(30) % 3)

    out = evaluate(net, test)

    assert out.fpr is None and out.fnr is None


def test_rates_reconstruct_class_accuracy(balanced):
    """Test FPR/FNR agree with the per-class accuracies."""
    out = evaluate(threshold_net(1.0, 1.5), balanced)
    accuracy = out.class_accuracy()
    assert accuracy[3] == pytest.approx(1.0 - out.fpr)
    assert accuracy[5] == pytest.approx(1.0 - out.fnr)


def test_rates_with_empty_denominators():
    """Test a class missing from the test set gives rate 0."""
    fpr, fnr = rates_from_confusion(np.array([[0, 0], [3, 5]]), 1)
    assert fpr == 0.0 and fnr == pytest.approx(3 / 8)


def test_evaluate_empty(balanced):
    """Test an empty test set."""
    with pytest.raises(InputError):
        evaluate(threshold_net(1.0, 0.0), balanced.subset(np.array([], dtype=int)))


def test_error_specific_rate(balanced):
    """Test the perfect, constant and tally cases."""
    assert error_specific_rate(threshold_net(10.0, 0.0), balanced, 3, 5) == 0.0
    assert error_specific_rate(threshold_net(0.0, 10.0), balanced, 3, 5) == 1.0

    net = threshold_net(1.0, 1.5)
    confusion = evaluate(net, balanced).confusion
    assert error_specific_rate(net, balanced, 3, 5) == confusion[0, 1] / confusion[0].sum()


def test_error_specific_missing_class(balanced):
    """Test a class with no test rows."""
    only_fives = balanced.subset(np.array([2, 3]))
    with pytest.raises(InputError):
        error_specific_rate(threshold_net(1.0, 0.0), only_fives, 3, 5)


def test_confusion_matrix_counts():
    """Test pair counting."""
    np.testing.assert_array_equal(confusion_matrix([0, 1, 1, 1], [0, 0, 1, 1], 2), [[1, 0], [1, 2]])


def test_confusion_delta_by_hand():
    """Test a 2x2 delta computed by hand."""
    clean = [result([[8, 2], [1, 9]])]
    poisoned = [result([[6, 4], [1, 9]]), result([[6, 4], [1, 9]])]

    delta = confusion_delta(clean, poisoned).delta

    np.testing.assert_allclose(delta, [[-0.2, 0.2], [0.0, 0.0]], atol=1e-12)
    np.testing.assert_allclose(delta.sum(axis=1), 0.0, atol=1e-12)


def test_confusion_delta_identical_groups():
    """Test identical groups give a zero delta."""
    group = [result([[5, 1], [2, 7]]), result([[4, 2], [0, 9]])]
    assert not confusion_delta(group, group).delta.any()


def test_confusion_delta_class_mismatch():
    """Test groups over different classes."""
    other = EvaluationResult(np.eye(2, dtype=int), [3, 5], 0.0)
    with pytest.raises(InputError):
        confusion_delta([result([[1, 0], [0, 1]])], [other])


def test_confusion_delta_empty_row():
    """Test a class without test rows cannot be normalized."""
    with pytest.raises(InputError):
        confusion_delta([result([[0, 0], [1, 1]])], [result([[0, 0], [1, 1]])])


def test_distribution_match_accuracy():
    """Test separable groups score near 1 and identical groups near 0.5."""
    gen = np.random.default_rng(0)
    genuine = gen.normal(size=(200, 2))
    net = NetworkConfig(hidden=[16], output_activation="sigmoid",
                        optimizer=OptimizerSpec.sgd(lr=0.01, momentum=0.9))

    far = distribution_match_accuracy(genuine, gen.normal(8.0, 1.0, size=(200, 2)),
                                      np.random.default_rng(1), net, epochs=200)
    same = distribution_match_accuracy(genuine, gen.normal(size=(200, 2)),
                                       np.random.default_rng(1), net, epochs=200)

    assert far > 0.95
    assert abs(same - 0.5) < 0.15


def test_default_positive_class_is_second_class_value():
    """Test the unnamed positive class is the value at class index 1, not the larger value."""
    data = LabeledDataset(features=np.array([[-1.0], [1.0]]), labels=np.array([0, 1]),
                          class_values=[7, 2])
    out = evaluate(threshold_net(0.0, 10.0), data)

    assert out.positive_class == 2
    assert (out.fpr, out.fnr) == (1.0, 0.0)
