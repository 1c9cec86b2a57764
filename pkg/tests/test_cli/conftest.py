"""
Small config files for end-to-end command runs.
"""
import textwrap

import pytest
from click.testing import CliRunner

PGAN_TABLES = """
[pgan]
alpha = 0.5
lambda = 0.5
poison_classes = [1]
epochs = 3
batch_m = 16
seed = 3

[pgan.generator]
hidden = [6]
output_activation = "linear"

[pgan.discriminator]
hidden = [5]
output_activation = "sigmoid"

[pgan.classifier]
preset = "logistic"
"""

DATASET_TABLE = """
[dataset]
kind = "synthetic"
per_class = 60
test_per_class = 40
seed = 1
"""


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


@pytest.fixture
def train_config(tmp_path):
    path = tmp_path / "train.toml"
    path.write_text('name = "tiny"\n' + DATASET_TABLE + PGAN_TABLES)
    return path


@pytest.fixture
def demo_config(tmp_path):
    path = tmp_path / "demo.toml"
    path.write_text(textwrap.dedent("""
        alphas = [0.0, 1.0]
        pgan_per_class = 40
        victim_per_class = 10
        test_per_class = 30
        n_poison = 4
        cloud_size = 20
        grid_size = 5
        match_epochs = 5
        check_distribution_match = false

        [victim]
        epochs = 10
        batch_size = 100

        [victim.network]
        preset = "victim_logistic"
    """) + PGAN_TABLES)
    return path


@pytest.fixture
def eval_config_factory(tmp_path):
    """Eval config pointing at a generator prefix."""

    def build(generator_prefix):
        path = tmp_path / "eval.toml"
        path.write_text(textwrap.dedent(f"""
            generators = ["{generator_prefix}"]
            attacks = ["pgan", "label_flip"]

            [label_flip]
            source_class = 1
            target_class = 0

            [experiment]
            fractions = [0.0, 0.2]
            n_runs = 2
            seed = 4

            [experiment.split]
            victim_train_per_class = 15
            detector_train_per_class = 15

            [experiment.defense]
            enabled = true
            k = 3
            s = 10

            [experiment.victim]
            epochs = 10
            batch_size = 10

            [experiment.victim.network]
            preset = "victim_logistic"
        """) + DATASET_TABLE)
        return path

    return build


@pytest.fixture
def protocol_config_factory(tmp_path):
    """Eval config for the alpha/lambda/size protocols."""

    def build(generator_prefix=None, with_pgan=True):
        path = tmp_path / "protocol.toml"
        generators = f'generators = ["{generator_prefix}"]\n' if generator_prefix else ""
        path.write_text(generators + textwrap.dedent("""
            alphas = [0.0, 1.0]
            lambda_primes = [0.5, 1.0]
            sizes = [10, 15]
            size_fraction = 0.2

            [experiment]
            fractions = [0.0, 0.2]
            n_runs = 2
            seed = 4

            [experiment.split]
            victim_train_per_class = 15
            detector_train_per_class = 15

            [experiment.defense]
            enabled = false

            [experiment.victim]
            epochs = 10
            batch_size = 10

            [experiment.victim.network]
            preset = "victim_logistic"
        """) + DATASET_TABLE + (PGAN_TABLES if with_pgan else ""))
        return path

    return build
