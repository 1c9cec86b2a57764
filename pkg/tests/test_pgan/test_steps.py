"""
Tests for the discriminator, classifier and generator steps.
"""
import numpy as np
import pytest

from src.data.dataset import LabeledDataset
from src.nn.architectures import NetworkConfig
from src.nn.losses import bce_loss, classifier_loss
from src.nn.optimizers import OptimizerSpec, optimizer_step
from src.pgan.model import init_model
from src.pgan.poison import sample_noise
from src.pgan.steps import (
    classifier_step,
    discriminator_accuracy,
    discriminator_step,
    estimate_objectives,
    generator_loss_and_grads,
    generator_step,
)
from src.utils.errors import InputError


def params(net):
    return [a.copy() for a in net.weights + net.biases]


def assert_same(before, net):
    for a, b in zip(before, net.weights + net.biases):
        np.testing.assert_array_equal(a, b)


def assert_changed(before, net):
    assert any(not np.array_equal(a, b) for a, b in zip(before, net.weights + net.biases))


def real_rows(dataset, n=16):
    return dataset.features[dataset.rows_of([1])[:n]]


def test_discriminator_step_updates_only_discriminator(tiny_model, tiny_pgan_config, two_gaussians):
    """Test a D step leaves G and C alone."""
    g, d, c = params(tiny_model.generator), params(tiny_model.discriminator), params(tiny_model.classifier)

    discriminator_step(tiny_model, tiny_pgan_config, real_rows(two_gaussians), np.random.default_rng(0))

    assert_same(g, tiny_model.generator)
    assert_same(c, tiny_model.classifier)
    assert_changed(d, tiny_model.discriminator)


def test_discriminator_alpha_zero_unchanged(tiny_model, tiny_pgan_config, two_gaussians):
    """Test α = 0 leaves the discriminator untouched."""
    cfg = tiny_pgan_config.model_copy(update={"alpha": 0.0})
    before = params(tiny_model.discriminator)

    discriminator_step(tiny_model, cfg, real_rows(two_gaussians), np.random.default_rng(0))

    assert_same(before, tiny_model.discriminator)


def test_discriminator_objective_by_hand(tiny_model, tiny_pgan_config):
    """Test V on a two-row batch against a direct evaluation."""
    real = np.array([[0.5, 1.0], [0.0, 2.0]])
    z = sample_noise(2, tiny_model.noise_dim, np.random.default_rng(9))
    fake = tiny_model.generator.predict(z)
    p_real = tiny_model.discriminator.predict(real)[:, 0]
    p_fake = tiny_model.discriminator.predict(fake)[:, 0]
    s = tiny_pgan_config.smoothing
    expected = (np.mean((1 - s) * np.log(p_real) + s * np.log(1 - p_real))
                + np.mean(np.log(1 - p_fake)))

    value = discriminator_step(tiny_model, tiny_pgan_config, real, np.random.default_rng(9))

    assert value == pytest.approx(expected, abs=1e-12)


def test_discriminator_empty_batch(tiny_model, tiny_pgan_config):
    """Test an empty real batch."""
    with pytest.raises(InputError):
        discriminator_step(tiny_model, tiny_pgan_config, np.zeros((0, 2)), np.random.default_rng(0))


def test_discriminator_learns_separable_data(two_gaussians, tiny_pgan_config):
    """Test D separates far-away real rows from an untrained G."""
    far = LabeledDataset(
        features=np.random.default_rng(0).normal(6.0, 0.3, size=(100, 2)),
        labels=np.repeat([0, 1], 50),
    )
    cfg = tiny_pgan_config.model_copy(update={
        "alpha": 1.0,
        "discriminator": NetworkConfig(hidden=[8], output_activation="sigmoid",
                                       optimizer=OptimizerSpec.sgd(lr=0.01, momentum=0.9)),
    })
    model = init_model(far, cfg, np.random.default_rng(1))
    real = far.features[far.rows_of([1])]
    rng = np.random.default_rng(2)

    for _ in range(200):
        discriminator_step(model, cfg, real, rng)

    assert discriminator_accuracy(model, real, 200, np.random.default_rng(3)) > 0.9


def test_classifier_step_updates_only_classifier(tiny_model, tiny_pgan_config, two_gaussians):
    """Test a C step leaves G and D alone."""
    g, d, c = params(tiny_model.generator), params(tiny_model.discriminator), params(tiny_model.classifier)

    classifier_step(tiny_model, tiny_pgan_config, two_gaussians.subset(np.arange(0, 120, 5)),
                    np.random.default_rng(0))

    assert_same(g, tiny_model.generator)
    assert_same(d, tiny_model.discriminator)
    assert_changed(c, tiny_model.classifier)


def test_classifier_lambda_zero_is_clean_training(tiny_model, tiny_pgan_config, two_gaussians):
    """Test λ = 0 reproduces a plain descent step on genuine data."""
    cfg = tiny_pgan_config.model_copy(update={"lam": 0.0, "alpha": 0.0})
    genuine = two_gaussians.subset(np.arange(0, 120, 3))
    clean = tiny_model.classifier.copy()

    classifier_step(tiny_model, cfg, genuine, np.random.default_rng(0))
    out, cache = clean.forward(genuine.features)
    _, grad = classifier_loss(clean.output_activation, out, genuine.labels, cfg.smoothing)
    grads, _ = clean.backward(cache, grad)
    optimizer_step(clean, grads, direction="descend")

    assert_same(params(clean), tiny_model.classifier)


def test_classifier_lambda_one_ignores_genuine_rows(tiny_model, tiny_pgan_config, two_gaussians):
    """Test λ = 1 updates depend on generated samples only."""
    cfg = tiny_pgan_config.model_copy(update={"lam": 1.0})
    other = tiny_model.copy()
    first = two_gaussians.subset(np.arange(10))
    second = two_gaussians.subset(np.arange(60, 70))

    classifier_step(tiny_model, cfg, first, np.random.default_rng(5))
    classifier_step(other, cfg, second, np.random.default_rng(5))

    assert_same(params(other.classifier), tiny_model.classifier)


def test_classifier_mixed_loss_by_hand(tiny_model, tiny_pgan_config):
    """Test W on one genuine and one poison row."""
    lam = tiny_pgan_config.lam
    genuine = LabeledDataset(features=np.array([[2.0, -1.0]]), labels=np.array([0]), class_values=[0, 1])
    z = sample_noise(1, tiny_model.noise_dim, np.random.default_rng(4))
    p_genuine = tiny_model.classifier.predict(genuine.features)[0, 0]
    p_poison = tiny_model.classifier.predict(tiny_model.generator.predict(z))[0, 0]
    loss_genuine = -np.log(1 - p_genuine)
    loss_poison = -np.log(p_poison)

    value = classifier_step(tiny_model, tiny_pgan_config, genuine, np.random.default_rng(4))

    assert value == pytest.approx(-(lam * loss_poison + (1 - lam) * loss_genuine), abs=1e-12)


def test_classifier_alpha_one_unchanged(tiny_model, tiny_pgan_config, two_gaussians):
    """Test α = 1 leaves the classifier untouched."""
    cfg = tiny_pgan_config.model_copy(update={"alpha": 1.0})
    before = params(tiny_model.classifier)

    classifier_step(tiny_model, cfg, two_gaussians, np.random.default_rng(0))

    assert_same(before, tiny_model.classifier)


def test_classifier_empty_batch(tiny_model, tiny_pgan_config, two_gaussians):
    """Test an empty genuine batch."""
    with pytest.raises(InputError):
        classifier_step(tiny_model, tiny_pgan_config, two_gaussians.subset(np.array([], dtype=int)),
                        np.random.default_rng(0))


def test_generator_step_updates_only_generator(tiny_model, tiny_pgan_config):
    """Test a G step leaves D and C alone."""
    g, d, c = params(tiny_model.generator), params(tiny_model.discriminator), params(tiny_model.classifier)

    generator_step(tiny_model, tiny_pgan_config, 16, np.random.default_rng(0))

    assert_same(d, tiny_model.discriminator)
    assert_same(c, tiny_model.classifier)
    assert_changed(g, tiny_model.generator)


def test_alpha_one_is_standard_gan(tiny_model, tiny_pgan_config):
    """Test α = 1 gives exactly the non-saturating GAN generator gradient."""
    cfg = tiny_pgan_config.model_copy(update={"alpha": 1.0})
    z = sample_noise(8, tiny_model.noise_dim, np.random.default_rng(1))

    _, grads = generator_loss_and_grads(tiny_model, cfg, z)

    samples, g_cache = tiny_model.generator.forward(z)
    p, d_cache = tiny_model.discriminator.forward(samples)
    _, d_grad = bce_loss(p, np.ones_like(p))
    _, input_grad = tiny_model.discriminator.backward(d_cache, d_grad)
    expected, _ = tiny_model.generator.backward(g_cache, input_grad)
    for (gw, gb), (ew, eb) in zip(grads, expected):
        np.testing.assert_array_equal(gw, ew)
        np.testing.assert_array_equal(gb, eb)


def test_alpha_zero_ignores_discriminator(tiny_model, tiny_pgan_config):
    """Test α = 0 gradients come from the classifier loss only."""
    cfg = tiny_pgan_config.model_copy(update={"alpha": 0.0})
    z = sample_noise(8, tiny_model.noise_dim, np.random.default_rng(1))

    objective, grads = generator_loss_and_grads(tiny_model, cfg, z)

    samples, g_cache = tiny_model.generator.forward(z)
    c = tiny_model.classifier
    out, c_cache = c.forward(samples)
    loss, c_grad = classifier_loss(c.output_activation, out, np.ones(8, dtype=int))
    _, input_grad = c.backward(c_cache, -c_grad)
    expected, _ = tiny_model.generator.backward(g_cache, input_grad)
    assert objective == pytest.approx(-loss)
    for (gw, gb), (ew, eb) in zip(grads, expected):
        np.testing.assert_allclose(gw, ew, atol=1e-15)
        np.testing.assert_allclose(gb, eb, atol=1e-15)


@pytest.mark.parametrize("non_saturating", [True, False])
def test_generator_gradient_matches_finite_differences(two_gaussians, tiny_pgan_config, non_saturating):
    """Test the gradient through one-unit D and C against central differences."""
    cfg = tiny_pgan_config.model_copy(update={
        "alpha": 0.4,
        "non_saturating": non_saturating,
        "generator": NetworkConfig(hidden=[4], activation="tanh"),
        "discriminator": NetworkConfig(output_activation="sigmoid"),
    })
    model = init_model(two_gaussians, cfg, np.random.default_rng(6))
    z = sample_noise(5, model.noise_dim, np.random.default_rng(7))
    _, grads = generator_loss_and_grads(model, cfg, z)

    step = 1e-5
    worst = 0.0
    for layer, (gw, gb) in enumerate(grads):
        for param, grad in ((model.generator.weights[layer], gw), (model.generator.biases[layer], gb)):
            for index in np.ndindex(param.shape):
                original = param[index]
                param[index] = original + step
                plus, _ = generator_loss_and_grads(model, cfg, z)
                param[index] = original - step
                minus, _ = generator_loss_and_grads(model, cfg, z)
                param[index] = original
                numeric = (plus - minus) / (2 * step)
                diff = abs(numeric - grad[index])
                if diff > 1e-9:
                    worst = max(worst, diff / max(abs(numeric), abs(grad[index]), 1e-8))
    assert worst < 1e-4


def test_combined_estimate(tiny_model, tiny_pgan_config, two_gaussians):
    """Test the combined objective is α·V + (1-α)·W and nothing moves."""
    before = params(tiny_model.generator)
    z = sample_noise(10, tiny_model.noise_dim, np.random.default_rng(0))

    est = estimate_objectives(tiny_model, tiny_pgan_config, real_rows(two_gaussians), two_gaussians, z)

    alpha = tiny_pgan_config.alpha
    assert est.combined == pytest.approx(alpha * est.discriminator + (1 - alpha) * est.classifier, abs=1e-10)
    assert 0.0 <= est.discriminator_accuracy <= 1.0
    assert_same(before, tiny_model.generator)
