"""
Tests for loss functions.
"""
import math

import numpy as np
import pytest

from src.nn.losses import EPS, bce_loss, classifier_loss, cross_entropy_loss, predict_labels
from src.utils.errors import InputError


def numeric_grad(fn, x, step=1e-6):
    grad = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[index] += step
        minus[index] -= step
        grad[index] = (fn(plus) - fn(minus)) / (2 * step)
    return grad


def test_bce_half_is_ln2():
    """Test BCE at 0.5 with target 1."""
    loss, _ = bce_loss([[0.5]], [[1.0]])
    assert loss == pytest.approx(math.log(2), abs=1e-12)


def test_bce_smoothing_at_half_is_ln2():
    """Test smoothing does not change the loss at p = 0.5."""
    loss, _ = bce_loss([[0.5]], [[1.0]], smoothing=0.1)
    assert loss == pytest.approx(math.log(2), abs=1e-12)


def test_bce_smoothing_only_positive_targets():
    """Test negative targets stay at zero under smoothing."""
    loss_plain, _ = bce_loss([[0.3]], [[0.0]])
    loss_smooth, _ = bce_loss([[0.3]], [[0.0]], smoothing=0.2)
    assert loss_plain == loss_smooth


def test_bce_gradient_matches_finite_differences():
    """Test the BCE gradient on a random batch."""
    gen = np.random.default_rng(0)
    p = gen.uniform(0.05, 0.95, size=(6, 2))
    t = (gen.random((6, 2)) < 0.5).astype(float)

    _, grad = bce_loss(p, t, smoothing=0.1)
    numeric = numeric_grad(lambda q: bce_loss(q, t, smoothing=0.1)[0], p)

    np.testing.assert_allclose(grad, numeric, rtol=1e-4, atol=1e-8)


def test_bce_clamps_saturated_predictions():
    """Test predictions of exactly 0 or 1 give a finite loss."""
    loss, grad = bce_loss([[0.0], [1.0]], [[1.0], [0.0]])
    assert np.isfinite(loss)
    assert np.all(np.isfinite(grad))
    assert loss == pytest.approx(-math.log(EPS), rel=1e-6)


def test_bce_rejects_bad_smoothing():
    """Test smoothing outside [0, 0.3]."""
    with pytest.raises(InputError):
        bce_loss([[0.5]], [[1.0]], smoothing=0.5)


def test_bce_rejects_empty_batch():
    """Test an empty batch."""
    with pytest.raises(InputError):
        bce_loss(np.zeros((0, 1)), np.zeros((0, 1)))


def test_cross_entropy_uniform_is_ln_k():
    """Test uniform 10-class predictions cost ln 10."""
    p = np.full((3, 10), 0.1)
    loss, _ = cross_entropy_loss(p, [0, 4, 9])
    assert loss == pytest.approx(math.log(10), abs=1e-12)


def test_cross_entropy_confident_correct_near_zero():
    """Test a one-hot correct prediction costs about nothing."""
    p = np.array([[1.0, 0.0, 0.0]])
    loss, _ = cross_entropy_loss(p, [0])
    assert loss == pytest.approx(0.0, abs=1e-6)


def test_cross_entropy_label_out_of_range():
    """Test labels outside the class range."""
    with pytest.raises(InputError):
        cross_entropy_loss(np.full((1, 3), 1 / 3), [3])


def test_cross_entropy_logit_gradient():
    """Test the fused gradient against finite differences on the logits."""
    gen = np.random.default_rng(1)
    logits = gen.normal(size=(5, 4))
    labels = gen.integers(0, 4, size=5)

    def softmax(z):
        e = np.exp(z - z.max(axis=1, keepdims=True))
        return e / e.sum(axis=1, keepdims=True)

    for smoothing in (0.0, 0.2):
        _, grad = cross_entropy_loss(softmax(logits), labels, smoothing)
        numeric = numeric_grad(lambda z: cross_entropy_loss(softmax(z), labels, smoothing)[0], logits)
        np.testing.assert_allclose(grad, numeric, rtol=1e-4, atol=1e-8)


def test_classifier_loss_dispatch():
    """Test sigmoid outputs use BCE and softmax outputs cross-entropy."""
    sig_loss, _ = classifier_loss("sigmoid", np.array([[0.5], [0.5]]), np.array([0, 1]))
    soft_loss, _ = classifier_loss("softmax", np.full((2, 2), 0.5), np.array([0, 1]))

    assert sig_loss == pytest.approx(math.log(2))
    assert soft_loss == pytest.approx(math.log(2))
    with pytest.raises(InputError):
        classifier_loss("sigmoid", np.array([[0.5]]), np.array([2]))


def test_predict_labels():
    """Test thresholding and argmax."""
    np.testing.assert_array_equal(predict_labels("sigmoid", np.array([[0.2], [0.7]])), [0, 1])
    np.testing.assert_array_equal(predict_labels("softmax", np.array([[0.2, 0.8], [0.6, 0.4]])), [1, 0])
