"""
Pytest configuration and fixtures.
"""
import numpy as np
import pytest

from src.data.dataset import LabeledDataset
from src.data.synthetic import TWO_GAUSSIANS, sample_synthetic
from src.nn.architectures import NetworkConfig
from src.nn.optimizers import OptimizerSpec
from src.pgan.config import PganConfig
from src.pgan.model import init_model


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(0)


@pytest.fixture
def two_gaussians():
    """Synthetic two-class dataset, 60 rows per class."""
    return sample_synthetic(TWO_GAUSSIANS.with_counts([60, 60]), np.random.default_rng(1))


@pytest.fixture
def pixel_dataset():
    """Raw 4x4 'images' of digits 3, 5 and 8, 30 rows each."""
    gen = np.random.default_rng(2)
    features, labels = [], []
    for idx, level in enumerate([40, 128, 220]):
        block = np.clip(gen.normal(level, 20.0, size=(30, 16)), 0, 255).round()
        features.append(block)
        labels.append(np.full(30, idx))
    return LabeledDataset(
        features=np.vstack(features),
        labels=np.concatenate(labels),
        class_values=np.array([3, 5, 8]),
        image_shape=(4, 4),
    )


@pytest.fixture
def tiny_pgan_config():
    """Small, fast pGAN configuration on two features."""
    return PganConfig(
        alpha=0.5,
        lam=0.5,
        poison_classes=[1],
        epochs=3,
        batch_m=16,
        noise_dim=2,
        seed=3,
        generator=NetworkConfig(hidden=[6], output_activation="linear",
                                optimizer=OptimizerSpec.adam(lr=1e-3)),
        discriminator=NetworkConfig(hidden=[5], output_activation="sigmoid",
                                    optimizer=OptimizerSpec.sgd(lr=1e-2)),
        classifier=NetworkConfig(hidden=[], output_activation="sigmoid",
                                 optimizer=OptimizerSpec.sgd(lr=1e-2)),
    )


@pytest.fixture
def tiny_model(two_gaussians, tiny_pgan_config):
    """Untrained model sized for ``two_gaussians``."""
    return init_model(two_gaussians, tiny_pgan_config, np.random.default_rng(0))
