"""
Tests for victim training.
"""
import numpy as np
import pytest

from src.data.synthetic import TWO_GAUSSIANS, sample_synthetic
from src.eval.config import VictimConfig
from src.eval.metrics import evaluate
from src.eval.victim import train_victim
from src.nn.architectures import NetworkConfig
from src.utils.errors import ConfigurationError, InputError


def test_zero_epochs_is_initialization(two_gaussians):
    """Test no training leaves the initial weights."""
    cfg = VictimConfig(network=NetworkConfig.from_preset("logistic"), epochs=0)

    net = train_victim(cfg, two_gaussians, np.random.default_rng(4))

    initial = cfg.network.build(2, 1, np.random.default_rng(4))
    np.testing.assert_array_equal(net.weights[0], initial.weights[0])


def test_deterministic_per_seed(two_gaussians):
    """Test the same seed trains the same network."""
    cfg = VictimConfig(network=NetworkConfig(hidden=[4], output_activation="sigmoid", dropout_keep=0.5),
                       epochs=5, batch_size=16, seed=3)

    a = train_victim(cfg, two_gaussians)
    b = train_victim(cfg, two_gaussians)

    for x, y in zip(a.weights, b.weights):
        np.testing.assert_array_equal(x, y)


def test_clean_synthetic_logistic():
    """Test the logistic victim on 20 rows per class stays under 15% error."""
    train = sample_synthetic(TWO_GAUSSIANS.with_counts([20, 20]), np.random.default_rng(0))
    test = sample_synthetic(TWO_GAUSSIANS.with_counts([2000, 2000]), np.random.default_rng(1))

    net = train_victim(VictimConfig.synthetic_logistic(), train, np.random.default_rng(2))

    assert evaluate(net, test).error < 0.15


def test_empty_training_set(two_gaussians):
    """Test an empty training set."""
    with pytest.raises(InputError):
        train_victim(VictimConfig(), two_gaussians.subset(np.array([], dtype=int)))


def test_sigmoid_victim_on_three_classes(pixel_dataset):
    """Test a binary architecture on a three-class dataset."""
    with pytest.raises(ConfigurationError):
        train_victim(VictimConfig(network=NetworkConfig.from_preset("logistic"), epochs=1), pixel_dataset)


def test_presets():
    """Test the victim presets."""
    assert VictimConfig.binary().network.hidden == [1024, 512]
    assert VictimConfig.multiclass().network.output_activation == "softmax"
    logistic = VictimConfig.synthetic_logistic(seed=5)
    assert (logistic.epochs, logistic.seed) == (1000, 5)
    assert logistic.network.optimizer.lr == 0.01
