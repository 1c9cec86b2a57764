"""
Fixtures shared by the sweep and protocol tests.
"""
import numpy as np
import pytest

from src.config.settings import settings
from src.data.download import IDX_FILES
from src.data.idx import encode_idx_images, encode_idx_labels
from src.data.splits import SplitSpec
from src.defense.detector import DefenseConfig
from src.eval.config import ExperimentConfig, VictimConfig
from src.nn.architectures import NetworkConfig


@pytest.fixture
def make_experiment():
    """Factory for small sweeps: three fractions, two runs, 15 rows per class."""

    def build(**overrides):
        values = dict(
            victim=VictimConfig(network=NetworkConfig.from_preset("victim_logistic"), epochs=20,
                                batch_size=10),
            fractions=[0.0, 0.2, 0.4],
            n_generators=1,
            n_runs=2,
            defense=DefenseConfig(enabled=True, k=3, s=10),
            split=SplitSpec(victim_train_per_class=15, detector_train_per_class=15),
            seed=11,
        )
        values.update(overrides)
        return ExperimentConfig(**values)

    return build


def stroke_templates() -> dict:
    """28x28 stroke masks of a 3 and a 5 that share their three bars."""
    three, five = np.zeros((28, 28)), np.zeros((28, 28))
    for t in (three, five):
        t[5:8, 8:21] = 1.0
        t[13:16, 10:20] = 1.0
        t[21:24, 8:21] = 1.0
    three[5:24, 18:21] = 1.0
    five[5:16, 8:11] = 1.0
    five[13:24, 18:21] = 1.0
    return {3: three, 5: five}


def draw_digits(label: int, n: int, gen: np.random.Generator) -> np.ndarray:
    """Shifted, blended and noisy renderings of one template as uint8 rows."""
    templates = stroke_templates()
    other = 5 if label == 3 else 3
    blend = gen.uniform(0.0, 0.45, size=n)
    ambiguous = gen.random(n) < 0.03
    blend[ambiguous] = gen.uniform(0.45, 0.55, size=int(ambiguous.sum()))
    images = np.empty((n, 28, 28))
    for i in range(n):
        shape = (1 - blend[i]) * templates[label] + blend[i] * templates[other]
        shape = np.roll(shape, tuple(gen.integers(-2, 3, size=2)), axis=(0, 1))
        images[i] = shape * gen.uniform(150, 255) + gen.normal(0, 40, size=(28, 28))
    return np.clip(np.rint(images), 0, 255).astype(np.uint8).reshape(n, 784)


def write_digit_idx(directory, train_per_class: int = 2000, test_per_class: int = 500, seed: int = 0):
    """Write a 3-vs-5 IDX file set (unpacked) with the MNIST file names."""
    gen = np.random.default_rng(seed)
    directory.mkdir(parents=True, exist_ok=True)
    for part, per_class in (("train", train_per_class), ("test", test_per_class)):
        pixels = np.vstack([draw_digits(3, per_class, gen), draw_digits(5, per_class, gen)])
        labels = np.repeat([3, 5], per_class)
        order = gen.permutation(labels.size)
        (directory / IDX_FILES[f"{part}_images"]).with_suffix("").write_bytes(
            encode_idx_images(pixels[order], (28, 28)))
        (directory / IDX_FILES[f"{part}_labels"]).with_suffix("").write_bytes(
            encode_idx_labels(labels[order]))
    return directory


@pytest.fixture(scope="session")
def digits_dir(tmp_path_factory):
    """MNIST under PGAN_DATA_DIR when present, otherwise generated 3-vs-5 stroke digits."""
    mnist = settings.dataset_dir("mnist")
    if all((mnist / name).is_file() or (mnist / name).with_suffix("").is_file() for name in IDX_FILES.values()):
        return mnist
    return write_digit_idx(tmp_path_factory.mktemp("digits"))
