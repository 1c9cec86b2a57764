"""
Single optimization steps of the three players and objective estimates.

The discriminator ascends α·V(D, G), the classifier ascends (1-α)·W(C, G)
and the generator descends the combined objective. Each step mutates the
network it updates and leaves the other two untouched.
"""
from dataclasses import dataclass
from typing import Any, Optional, Tuple

import numpy as np

from src.data.dataset import LabeledDataset
from src.nn.losses import bce_loss, classifier_loss
from src.nn.network import ParamGrads, add_grads, as_matrix, scale_grads
from src.nn.optimizers import optimizer_step
from src.pgan.config import PganConfig
from src.pgan.model import PganModel
from src.pgan.poison import sample_noise
from src.utils.errors import InputError


@dataclass
class ObjectiveEstimates:
    """Objective values measured on one fixed set of batches."""

    discriminator: float
    classifier: float
    combined: float
    discriminator_accuracy: float


def _real_rows(batch: Any) -> np.ndarray:
    x = as_matrix(batch, "real_batch")
    if x.shape[0] == 0:
        raise InputError("empty batch")
    return x


def _discriminator_value(model: PganModel, real: np.ndarray, fake: np.ndarray,
                         smoothing: float) -> float:
    p_real = model.discriminator.predict(real)
    p_fake = model.discriminator.predict(fake)
    loss_real, _ = bce_loss(p_real, np.ones_like(p_real), smoothing)
    loss_fake, _ = bce_loss(p_fake, np.zeros_like(p_fake), 0.0)
    return -(loss_real + loss_fake)


def _classifier_value(model: PganModel, genuine: LabeledDataset, poison: np.ndarray,
                      lam: float, smoothing: float) -> float:
    c = model.classifier
    loss_genuine, _ = classifier_loss(c.output_activation, c.predict(genuine.features),
                                      genuine.labels, smoothing)
    loss_poison, _ = classifier_loss(c.output_activation, c.predict(poison),
                                     model.poison_labels_for(poison.shape[0]), 0.0)
    return -(lam * loss_poison + (1.0 - lam) * loss_genuine)


def discriminator_step(model: PganModel, cfg: PganConfig, real_batch: Any,
                       rng: np.random.Generator) -> float:
    """
    One ascent step of the discriminator on α·V.

    Real rows are targeted at ``1 - smoothing``; generated rows at 0. With
    α = 0 the objective has no gradient and D is left as it is.

    Args:
        model: Model whose discriminator is updated in place
        cfg: Training config (α, smoothing)
        real_batch: Rows of the poisoning classes
        rng: Generator for noise and dropout

    Returns:
        float: Estimate of V on this batch
    """
    real = _real_rows(real_batch)
    z = sample_noise(real.shape[0], model.noise_dim, rng)
    fake, _ = model.generator.forward(z, training=True, rng=rng)

    d = model.discriminator
    p_real, cache_real = d.forward(real, training=True, rng=rng)
    p_fake, cache_fake = d.forward(fake, training=True, rng=rng)
    loss_real, grad_real = bce_loss(p_real, np.ones_like(p_real), cfg.smoothing)
    loss_fake, grad_fake = bce_loss(p_fake, np.zeros_like(p_fake), 0.0)
    objective = -(loss_real + loss_fake)

    if cfg.alpha > 0.0:
        grads_real, _ = d.backward(cache_real, grad_real)
        grads_fake, _ = d.backward(cache_fake, grad_fake)
        # d(αV)/dθ = -α d(loss)/dθ
        grads = scale_grads(add_grads(grads_real, grads_fake), -cfg.alpha)
        optimizer_step(d, grads, direction="ascend")
    return objective


def classifier_step(model: PganModel, cfg: PganConfig, genuine_batch: LabeledDataset,
                    rng: np.random.Generator) -> float:
    """
    One ascent step of the classifier on (1-α)·W.

    W mixes the genuine loss (smoothed, weight 1-λ) with the loss on freshly
    generated poison carrying the poison labels (weight λ). ``cfg.lam`` is
    the effective λ. With α = 1 the classifier is left as it is.

    Args:
        model: Model whose classifier is updated in place
        cfg: Training config (α, λ, smoothing)
        genuine_batch: Labelled rows of every class the classifier knows
        rng: Generator for noise and dropout

    Returns:
        float: Estimate of W on this batch
    """
    if genuine_batch.n_rows == 0:
        raise InputError("empty batch")
    m = genuine_batch.n_rows
    c = model.classifier
    lam = cfg.lam

    out_genuine, cache_genuine = c.forward(genuine_batch.features, training=True, rng=rng)
    loss_genuine, grad_genuine = classifier_loss(
        c.output_activation, out_genuine, genuine_batch.labels, cfg.smoothing
    )

    z = sample_noise(m, model.noise_dim, rng)
    poison, _ = model.generator.forward(z, training=True, rng=rng)
    out_poison, cache_poison = c.forward(poison, training=True, rng=rng)
    loss_poison, grad_poison = classifier_loss(
        c.output_activation, out_poison, model.poison_labels_for(m), 0.0
    )
    objective = -(lam * loss_poison + (1.0 - lam) * loss_genuine)

    if cfg.alpha < 1.0:
        grads_genuine, _ = c.backward(cache_genuine, grad_genuine)
        grads_poison, _ = c.backward(cache_poison, grad_poison)
        grads = add_grads(scale_grads(grads_genuine, 1.0 - lam), scale_grads(grads_poison, lam))
        grads = scale_grads(grads, -(1.0 - cfg.alpha))
        optimizer_step(c, grads, direction="ascend")
    return objective


def generator_loss_and_grads(model: PganModel, cfg: PganConfig, z: np.ndarray,
                             rng: Optional[np.random.Generator] = None) -> Tuple[float, ParamGrads]:
    """
    Generator objective on a noise batch and its parameter gradients.

    The objective is ``α·A - (1-α)·L_C(poison)`` where A is
    ``E[log(1 - D(G(z)))]`` or, with ``non_saturating``, ``-E[log D(G(z))]``.
    D and C run in inference mode; G runs in training mode when ``rng`` is
    given (dropout) and in inference mode otherwise.

    Args:
        model: Current model
        cfg: Training config (α, non_saturating)
        z: Noise rows
        rng: Dropout generator for the generator's forward pass

    Returns:
        Tuple[float, ParamGrads]: Objective value and d(objective)/d(generator params)
    """
    g = model.generator
    samples, g_cache = g.forward(z, training=rng is not None, rng=rng)

    p, d_cache = model.discriminator.forward(samples, training=False)
    if cfg.non_saturating:
        d_loss, d_grad = bce_loss(p, np.ones_like(p), 0.0)
        d_term = d_loss
    else:
        d_loss, d_grad = bce_loss(p, np.zeros_like(p), 0.0)
        d_term, d_grad = -d_loss, -d_grad
    _, d_input_grad = model.discriminator.backward(d_cache, cfg.alpha * d_grad)

    c = model.classifier
    out, c_cache = c.forward(samples, training=False)
    c_loss, c_grad = classifier_loss(c.output_activation, out,
                                     model.poison_labels_for(samples.shape[0]), 0.0)
    _, c_input_grad = c.backward(c_cache, -(1.0 - cfg.alpha) * c_grad)

    objective = cfg.alpha * d_term - (1.0 - cfg.alpha) * c_loss
    grads, _ = g.backward(g_cache, d_input_grad + c_input_grad)
    return objective, grads


def generator_step(model: PganModel, cfg: PganConfig, m: int,
                   rng: np.random.Generator) -> float:
    """
    One descent step of the generator.

    Args:
        model: Model whose generator is updated in place
        cfg: Training config
        m: Noise batch size
        rng: Generator for noise and dropout

    Returns:
        float: Generator objective on this batch before the update
    """
    z = sample_noise(m, model.noise_dim, rng)
    objective, grads = generator_loss_and_grads(model, cfg, z, rng)
    optimizer_step(model.generator, grads, direction="descend")
    return objective


def estimate_objectives(model: PganModel, cfg: PganConfig, real_batch: Any,
                        genuine_batch: LabeledDataset, z: np.ndarray) -> ObjectiveEstimates:
    """
    Evaluate V, W and their α-weighted sum on fixed batches.

    All three networks run in inference mode and nothing is updated.

    Args:
        model: Current model
        cfg: Training config (α, effective λ, smoothing)
        real_batch: Rows of the poisoning classes
        genuine_batch: Labelled rows of every class
        z: Noise rows for the generated batch

    Returns:
        ObjectiveEstimates: Objective values and discriminator accuracy
    """
    real = _real_rows(real_batch)
    fake = model.generator.predict(z)
    v = _discriminator_value(model, real, fake, cfg.smoothing)
    w = _classifier_value(model, genuine_batch, fake, cfg.lam, cfg.smoothing)

    p_real = model.discriminator.predict(real)
    p_fake = model.discriminator.predict(fake)
    correct = np.sum(p_real > 0.5) + np.sum(p_fake < 0.5)
    accuracy = float(correct) / (p_real.shape[0] + p_fake.shape[0])
    return ObjectiveEstimates(
        discriminator=v,
        classifier=w,
        combined=cfg.alpha * v + (1.0 - cfg.alpha) * w,
        discriminator_accuracy=accuracy,
    )


def discriminator_accuracy(model: PganModel, real_batch: Any, n_fake: int,
                           rng: np.random.Generator) -> float:
    """
    Fraction of real and fresh generated rows the discriminator labels correctly.

    Values near 0.5 mean the discriminator cannot tell poison from genuine
    poisoning-class data.
    """
    real = _real_rows(real_batch)
    fake = model.generator.predict(sample_noise(n_fake, model.noise_dim, rng))
    p_real = model.discriminator.predict(real)
    p_fake = model.discriminator.predict(fake)
    return float(np.sum(p_real > 0.5) + np.sum(p_fake < 0.5)) / (real.shape[0] + n_fake)
