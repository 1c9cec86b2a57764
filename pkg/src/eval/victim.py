"""
Training the attacked classifier.
"""
from typing import Optional

import numpy as np

from src.data.dataset import LabeledDataset
from src.eval.config import VictimConfig
from src.nn.architectures import classifier_out_dim
from src.nn.losses import classifier_loss
from src.nn.network import MlpNetwork
from src.nn.optimizers import optimizer_step
from src.utils.errors import InputError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def train_victim(cfg: VictimConfig, train_set: LabeledDataset,
                 rng: Optional[np.random.Generator] = None) -> MlpNetwork:
    """
    Train a victim classifier with shuffled mini-batches.

    Args:
        cfg: Architecture and schedule
        train_set: Training rows (normalized like the poison)
        rng: Generator for initialization, shuffling and dropout (``cfg.seed`` when omitted)

    Returns:
        MlpNetwork: Trained network
    """
    if train_set.n_rows == 0:
        raise InputError("cannot train a victim on an empty dataset")
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    out_dim = classifier_out_dim(cfg.network, train_set.n_classes)
    net = cfg.network.build(train_set.n_features, out_dim, rng)

    n = train_set.n_rows
    batch = min(cfg.batch_size, n)
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch):
            rows = order[start:start + batch]
            out, cache = net.forward(train_set.features[rows], training=True, rng=rng)
            _, grad = classifier_loss(net.output_activation, out, train_set.labels[rows])
            grads, _ = net.backward(cache, grad)
            optimizer_step(net, grads, direction="descend")
        if (epoch + 1) % 50 == 0:
            logger.debug(f"Victim epoch {epoch + 1}/{cfg.epochs}")
    return net
