"""
Three-player poisoning GAN: generator, discriminator and surrogate classifier.
"""
from src.pgan.config import PganConfig
from src.pgan.model import PganModel, init_model, load_model, save_model
from src.pgan.poison import PoisonBatch, generate_poison, sample_noise
from src.pgan.steps import (
    classifier_step,
    discriminator_step,
    estimate_objectives,
    generator_loss_and_grads,
    generator_step,
)
from src.pgan.trainer import PganTrainer, TrainingTrace, train_pgan

__all__ = [
    "PganConfig",
    "PganModel",
    "init_model",
    "load_model",
    "save_model",
    "PoisonBatch",
    "generate_poison",
    "sample_noise",
    "classifier_step",
    "discriminator_step",
    "estimate_objectives",
    "generator_loss_and_grads",
    "generator_step",
    "PganTrainer",
    "TrainingTrace",
    "train_pgan",
]
