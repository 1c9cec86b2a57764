"""
Alternating training loop of the three-player poisoning GAN.
"""
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.data.dataset import LabeledDataset
from src.data.transforms import filter_classes
from src.pgan.config import PganConfig
from src.pgan.model import PganModel, init_model
from src.pgan.poison import sample_noise
from src.pgan.steps import classifier_step, discriminator_step, estimate_objectives, generator_step
from src.utils.errors import ConfigurationError, FormatError
from src.utils.logging_config import get_logger


@dataclass
class EpochRecord:
    """Objectives after one epoch, on the fixed evaluation batches, plus step means."""

    epoch: int
    discriminator_objective: float
    classifier_objective: float
    combined_objective: float
    discriminator_accuracy: float
    d_step_objective: float
    c_step_objective: float
    g_step_objective: float


@dataclass
class TrainingTrace:
    """Per-epoch training record."""

    records: List[EpochRecord] = field(default_factory=list)

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[EpochRecord]:
        return iter(self.records)

    @property
    def last(self) -> Optional[EpochRecord]:
        return self.records[-1] if self.records else None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.records],
                            columns=list(EpochRecord.__dataclass_fields__))

    def to_jsonl(self, path: Union[str, Path]) -> Path:
        """Write one JSON object per epoch."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as fh:
            for record in self.records:
                fh.write(json.dumps(asdict(record)) + "\n")
        return path

    @classmethod
    def from_jsonl(cls, path: Union[str, Path]) -> "TrainingTrace":
        trace = cls()
        for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
            if not line.strip():
                continue
            try:
                trace.append(EpochRecord(**json.loads(line)))
            except (json.JSONDecodeError, TypeError) as e:
                raise FormatError(f"{path}:{lineno}: not a trace record ({e})") from e
        return trace


def sample_rows(rows: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``m`` row indices, without replacement whenever there are enough rows."""
    return rng.choice(rows, size=m, replace=rows.size < m)


def training_set(dataset: LabeledDataset, cfg: PganConfig) -> LabeledDataset:
    """
    Restrict a dataset to the classes the surrogate classifier learns.

    With ``source_classes`` set, rows of those classes and of the poison
    classes are kept and relabelled; otherwise every class is kept.
    """
    values = set(dataset.class_values.tolist())
    missing = [v for v in cfg.poison_classes if v not in values]
    if missing:
        raise ConfigurationError(f"poison classes {missing} are not in the dataset", "poison_classes")
    if cfg.source_classes is None:
        return dataset
    wanted = sorted(set(cfg.source_classes) | set(cfg.poison_classes))
    missing = [v for v in wanted if v not in values]
    if missing:
        raise ConfigurationError(f"source classes {missing} are not in the dataset", "source_classes")
    if len(wanted) == dataset.n_classes:
        return dataset
    return filter_classes(dataset, [dataset.index_of_value(v) for v in wanted], relabel=True)


class PganTrainer:
    """
    Runs the D / C / G alternation for a fixed number of epochs.

    Initialization, training and evaluation batches draw from independent
    streams spawned from ``cfg.seed``, so a seed fixes the whole run.
    """

    def __init__(self, dataset: LabeledDataset, cfg: PganConfig):
        self.logger = get_logger(self.__class__.__name__)
        self.dataset = training_set(dataset, cfg)

        init_seq, train_seq, eval_seq = np.random.SeedSequence(cfg.seed).spawn(3)
        self.model = init_model(self.dataset, cfg, np.random.default_rng(init_seq))
        self.rng = np.random.default_rng(train_seq)

        self.poison_rows = self.dataset.rows_of(self.model.poison_classes)
        if self.poison_rows.size == 0:
            raise ConfigurationError("the dataset has no rows of the poison classes", "poison_classes")
        self.all_rows = np.arange(self.dataset.n_rows)
        self.lam = cfg.resolve_lambda(self.dataset.prior(self.model.poison_classes))
        self.cfg = cfg.model_copy(update={"lam": self.lam})

        eval_rng = np.random.default_rng(eval_seq)
        m = cfg.batch_m
        self.eval_real = self.dataset.features[sample_rows(self.poison_rows, m, eval_rng)]
        self.eval_genuine = self.dataset.subset(sample_rows(self.all_rows, m, eval_rng))
        self.eval_noise = sample_noise(m, self.model.noise_dim, eval_rng)
        self.trace = TrainingTrace()

    def real_batch(self) -> np.ndarray:
        return self.dataset.features[sample_rows(self.poison_rows, self.cfg.batch_m, self.rng)]

    def genuine_batch(self) -> LabeledDataset:
        return self.dataset.subset(sample_rows(self.all_rows, self.cfg.batch_m, self.rng))

    def run_epoch(self, epoch: int) -> EpochRecord:
        """One epoch: i discriminator, j classifier and k generator steps."""
        cfg = self.cfg
        d_obj = [discriminator_step(self.model, cfg, self.real_batch(), self.rng)
                 for _ in range(cfg.i_steps)]
        c_obj = [classifier_step(self.model, cfg, self.genuine_batch(), self.rng)
                 for _ in range(cfg.j_steps)]
        g_obj = [generator_step(self.model, cfg, cfg.batch_m, self.rng)
                 for _ in range(cfg.k_steps)]

        est = estimate_objectives(self.model, cfg, self.eval_real, self.eval_genuine, self.eval_noise)
        return EpochRecord(
            epoch=epoch,
            discriminator_objective=est.discriminator,
            classifier_objective=est.classifier,
            combined_objective=est.combined,
            discriminator_accuracy=est.discriminator_accuracy,
            d_step_objective=float(np.mean(d_obj)),
            c_step_objective=float(np.mean(c_obj)),
            g_step_objective=float(np.mean(g_obj)),
        )

    def train(self) -> Tuple[PganModel, TrainingTrace]:
        """
        Train for ``cfg.epochs`` epochs.

        Returns:
            Tuple[PganModel, TrainingTrace]: Trained model and per-epoch record
        """
        cfg = self.cfg
        self.logger.info(
            f"Training pGAN: alpha={cfg.alpha}, lambda={self.lam:.4f}, epochs={cfg.epochs}, "
            f"batch={cfg.batch_m}, poison classes {cfg.poison_classes}, "
            f"{self.dataset.n_rows} rows of classes {self.dataset.class_values.tolist()}"
        )
        epochs = tqdm(range(cfg.epochs), desc="Training pGAN", disable=not cfg.show_progress)
        for epoch in epochs:
            record = self.run_epoch(epoch)
            self.trace.append(record)
            if (epoch + 1) % cfg.log_every == 0:
                self.logger.info(
                    f"Epoch {epoch + 1}/{cfg.epochs}: V={record.discriminator_objective:.4f} "
                    f"W={record.classifier_objective:.4f} "
                    f"combined={record.combined_objective:.4f} "
                    f"D accuracy={record.discriminator_accuracy:.3f}"
                )
        return self.model, self.trace


def train_pgan(dataset: LabeledDataset, cfg: PganConfig) -> Tuple[PganModel, TrainingTrace]:
    """
    Train a poisoning GAN on a labelled dataset.

    Args:
        dataset: Training data (normalized features)
        cfg: Training config

    Returns:
        Tuple[PganModel, TrainingTrace]: Trained model and its trace
    """
    return PganTrainer(dataset, cfg).train()
