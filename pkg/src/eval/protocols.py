"""
Experiment protocols built on ``poison_sweep``: detectability (α) sweeps,
λ′ sweeps and training-set-size sweeps.
"""
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.data.dataset import LabeledDataset
from src.eval.config import ExperimentConfig
from src.eval.report import AttackReport
from src.eval.sweep import poison_sweep
from src.pgan.config import PganConfig
from src.pgan.model import PganModel
from src.pgan.trainer import train_pgan
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def generator_seeds(seed: int, n: int) -> List[int]:
    """Independent integer seeds for ``n`` generators."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def train_generators(data: LabeledDataset, cfg: PganConfig, n: int) -> List[PganModel]:
    """Train ``n`` models that differ only in their seed."""
    models = []
    for idx, seed in enumerate(generator_seeds(cfg.seed, n)):
        logger.info(f"Training generator {idx + 1}/{n} (seed {seed})")
        model, _ = train_pgan(data, cfg.model_copy(update={"seed": seed}))
        models.append(model)
    return models


def alpha_sweep(
    data: LabeledDataset,
    pgan_cfg: PganConfig,
    exp: ExperimentConfig,
    alphas: Sequence[float],
    test: Optional[LabeledDataset] = None,
) -> Dict[float, AttackReport]:
    """
    Train ``exp.n_generators`` generators per α and sweep poison fractions.

    Args:
        data: Pool used both for pGAN training and the sweep splits
        pgan_cfg: Base training config (α is replaced)
        exp: Sweep configuration
        alphas: Detectability trade-offs to compare
        test: Fixed test set

    Returns:
        Dict[float, AttackReport]: Report per α
    """
    reports = {}
    for alpha in alphas:
        cfg = pgan_cfg.model_copy(update={"alpha": float(alpha)})
        generators = train_generators(data, cfg, exp.n_generators)
        reports[float(alpha)] = poison_sweep(exp, generators, data, test)
    return reports


def lambda_sweep(
    data: LabeledDataset,
    pgan_cfg: PganConfig,
    exp: ExperimentConfig,
    lambda_primes: Sequence[float],
    test: Optional[LabeledDataset] = None,
) -> Dict[float, AttackReport]:
    """Same as ``alpha_sweep`` over λ′ (λ = λ′·Pr(Y_p), capped at 1)."""
    reports = {}
    for lam_prime in lambda_primes:
        cfg = pgan_cfg.model_copy(update={"lambda_prime": float(lam_prime)})
        generators = train_generators(data, cfg, exp.n_generators)
        reports[float(lam_prime)] = poison_sweep(exp, generators, data, test)
    return reports


def train_size_sweep(
    data: LabeledDataset,
    generators: Sequence[PganModel],
    exp: ExperimentConfig,
    sizes: Sequence[int],
    fraction: float,
    test: Optional[LabeledDataset] = None,
) -> Dict[int, AttackReport]:
    """
    Vary the victim's training samples per class at a fixed poison fraction.

    Each report holds a clean reference (fraction 0) and the poisoned cells.

    Args:
        data: Pool to split
        generators: Trained models
        exp: Base sweep configuration (fractions are replaced)
        sizes: Victim training rows per class
        fraction: Poison fraction
        test: Fixed test set

    Returns:
        Dict[int, AttackReport]: Report per size
    """
    fractions = [0.0] if fraction == 0.0 else [0.0, float(fraction)]
    reports = {}
    for size in sizes:
        split_spec = exp.split.model_copy(update={"victim_train_per_class": int(size)})
        cfg = exp.model_copy(update={"split": split_spec, "fractions": fractions})
        reports[int(size)] = poison_sweep(cfg, generators, data, test)
    return reports
