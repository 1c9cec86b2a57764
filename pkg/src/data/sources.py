"""
Dataset sources: fetch raw data, transform it into a LabeledDataset and
optionally cache the result.
"""
from abc import ABC, abstractmethod
from dataclasses import replace
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.config.settings import settings
from src.data.cache import load_dataset, save_dataset
from src.data.dataset import LabeledDataset
from src.data.download import IDX_FILES, IdxDownloader
from src.data.idx import load_idx
from src.data.synthetic import TWO_GAUSSIANS, GaussianMixtureSpec, sample_synthetic
from src.data.transforms import cap_per_class, filter_classes, normalize
from src.utils.errors import FormatError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

FMNIST_CLASS_NAMES = [
    "t-shirt", "trouser", "pullover", "dress", "coat",
    "sandal", "shirt", "sneaker", "bag", "ankle boot",
]


class DatasetConfig(BaseModel):
    """Which data to load and how to prepare it."""

    kind: Literal["mnist", "fmnist", "idx", "synthetic"] = "mnist"
    data_dir: Optional[Path] = None
    train_images: Optional[Path] = None
    train_labels: Optional[Path] = None
    test_images: Optional[Path] = None
    test_labels: Optional[Path] = None
    classes: Optional[List[int]] = None
    relabel: bool = True
    normalize: Literal["tanh_range", "unit", "none"] = "tanh_range"
    per_class: Optional[int] = Field(default=None, gt=0)
    test_per_class: Optional[int] = Field(default=None, gt=0)
    download: bool = False
    cache_dir: Optional[Path] = None
    mixture: GaussianMixtureSpec = Field(default_factory=lambda: TWO_GAUSSIANS.model_copy())
    seed: int = 0


class BaseDatasetSource(ABC):
    """Abstract base class for dataset sources."""

    def __init__(self):
        """Initialize source."""
        self.logger = get_logger(self.__class__.__name__)

    @abstractmethod
    def fetch(self, **kwargs) -> Any:
        """
        Fetch raw data from the source.

        Returns:
            Any: Raw data
        """
        pass

    @abstractmethod
    def transform(self, raw_data: Any) -> LabeledDataset:
        """
        Transform raw data into a dataset.

        Args:
            raw_data: Raw data from fetch

        Returns:
            LabeledDataset: Parsed dataset
        """
        pass

    def load(self, dataset: LabeledDataset) -> bool:
        """
        Persist the dataset (no-op unless a subclass caches).

        Args:
            dataset: Transformed dataset

        Returns:
            bool: Success status
        """
        return True

    def run(self, **kwargs) -> Tuple[LabeledDataset, Dict[str, Any]]:
        """
        Execute fetch, transform and load.

        Args:
            **kwargs: Arguments passed to fetch

        Returns:
            Tuple[LabeledDataset, Dict[str, Any]]: Dataset and run statistics
        """
        start_time = datetime.now()
        stats: Dict[str, Any] = {
            'started_at': start_time.isoformat(),
            'status': 'running',
            'rows': 0,
            'errors': []
        }

        try:
            self.logger.info("Fetching data...")
            raw_data = self.fetch(**kwargs)

            self.logger.info("Transforming data...")
            dataset = self.transform(raw_data)

            stats['status'] = 'completed' if self.load(dataset) else 'failed'
            stats['rows'] = dataset.n_rows
            stats['classes'] = dataset.class_counts()
            return dataset, stats

        except Exception as e:
            self.logger.error(f"Loading dataset failed: {e}")
            stats['status'] = 'failed'
            stats['errors'].append(str(e))
            raise

        finally:
            end_time = datetime.now()
            stats['completed_at'] = end_time.isoformat()
            stats['duration_seconds'] = (end_time - start_time).total_seconds()


class IdxDatasetSource(BaseDatasetSource):
    """MNIST-style IDX files from disk, downloaded on request."""

    def __init__(
        self,
        name: str = "mnist",
        part: Literal["train", "test"] = "train",
        data_dir: Optional[Path] = None,
        images_path: Optional[Path] = None,
        labels_path: Optional[Path] = None,
        download: bool = False,
        cache_dir: Optional[Path] = None,
    ):
        """
        Initialize source.

        Args:
            name: Dataset name (``mnist``, ``fmnist`` or a custom directory name)
            part: ``train`` or ``test`` files
            data_dir: Directory holding the files (defaults to ``PGAN_DATA_DIR/<name>``)
            images_path: Explicit images file
            labels_path: Explicit labels file
            download: Download missing MNIST/FMNIST archives
            cache_dir: Directory for the binary dataset cache
        """
        super().__init__()
        self.name = name
        self.part = part
        self.data_dir = Path(data_dir) if data_dir else settings.dataset_dir(name)
        self.images_path = images_path
        self.labels_path = labels_path
        self.download = download
        self.cache_path = Path(cache_dir) / f"{name}-{part}.pgands" if cache_dir else None

    def locate(self, key: str) -> Path:
        """Path of one IDX file, preferring the archive over the unpacked file."""
        archive = self.data_dir / IDX_FILES[key]
        for candidate in (archive, archive.with_suffix("")):
            if candidate.exists():
                return candidate
        return archive

    def fetch(self, **kwargs) -> Any:
        """Resolve file paths (or a cached dataset), downloading when allowed."""
        if self.cache_path is not None and self.cache_path.exists():
            self.logger.info(f"Using cached dataset {self.cache_path}")
            return load_dataset(self.cache_path)

        images = self.images_path or self.locate(f"{self.part}_images")
        labels = self.labels_path or self.locate(f"{self.part}_labels")
        if not (Path(images).exists() and Path(labels).exists()):
            if not self.download:
                raise FormatError(
                    f"IDX files for {self.name}/{self.part} not found under {self.data_dir}; "
                    "run `pgan-poison fetch-data` or set PGAN_DATA_DIR"
                )
            files = IdxDownloader(self.name, self.data_dir).fetch_all()
            images, labels = files[f"{self.part}_images"], files[f"{self.part}_labels"]
        return Path(images), Path(labels)

    def transform(self, raw_data: Any) -> LabeledDataset:
        if isinstance(raw_data, LabeledDataset):
            dataset = raw_data
        else:
            dataset = load_idx(*raw_data)
        if self.name == "fmnist" and dataset.class_names is None:
            dataset = replace(dataset, class_names=dict(enumerate(FMNIST_CLASS_NAMES)))
        return dataset

    def load(self, dataset: LabeledDataset) -> bool:
        if self.cache_path is not None and not self.cache_path.exists():
            save_dataset(dataset, self.cache_path)
            self.logger.info(f"Cached dataset to {self.cache_path}")
        return True


class SyntheticDatasetSource(BaseDatasetSource):
    """Samples from a Gaussian mixture."""

    def __init__(self, mixture: GaussianMixtureSpec, rng: np.random.Generator):
        super().__init__()
        self.mixture = mixture
        self.rng = rng

    def fetch(self, **kwargs) -> Any:
        return sample_synthetic(self.mixture, self.rng)

    def transform(self, raw_data: Any) -> LabeledDataset:
        return raw_data


def load_datasets(cfg: DatasetConfig) -> Tuple[LabeledDataset, LabeledDataset]:
    """
    Build the training pool and the test set described by a config.

    Args:
        cfg: Dataset configuration

    Returns:
        Tuple[LabeledDataset, LabeledDataset]: Training pool and test set
    """
    train_seed, test_seed, cap_seed, test_cap_seed = np.random.SeedSequence(cfg.seed).spawn(4)

    if cfg.kind == "synthetic":
        train_counts = [cfg.per_class or c for c in cfg.mixture.counts]
        test_counts = [cfg.test_per_class or c for c in cfg.mixture.counts]
        train, _ = SyntheticDatasetSource(
            cfg.mixture.with_counts(train_counts), np.random.default_rng(train_seed)
        ).run()
        test, _ = SyntheticDatasetSource(
            cfg.mixture.with_counts(test_counts), np.random.default_rng(test_seed)
        ).run()
        if cfg.classes:
            train = filter_classes(train, cfg.classes, cfg.relabel)
            test = filter_classes(test, cfg.classes, cfg.relabel)
        return train, test

    name = "idx" if cfg.kind == "idx" else cfg.kind
    common = dict(data_dir=cfg.data_dir, download=cfg.download, cache_dir=cfg.cache_dir)
    train, _ = IdxDatasetSource(
        name, "train", images_path=cfg.train_images, labels_path=cfg.train_labels, **common
    ).run()
    test, _ = IdxDatasetSource(
        name, "test", images_path=cfg.test_images, labels_path=cfg.test_labels, **common
    ).run()

    if cfg.classes:
        train = filter_classes(train, cfg.classes, cfg.relabel)
        test = filter_classes(test, cfg.classes, cfg.relabel)
    if cfg.normalize != "none":
        train = normalize(train, cfg.normalize)
        test = normalize(test, cfg.normalize)
    train = cap_per_class(train, cfg.per_class, np.random.default_rng(cap_seed))
    test = cap_per_class(test, cfg.test_per_class, np.random.default_rng(test_cap_seed))
    logger.info(
        f"Prepared {cfg.kind}: {train.n_rows} training rows, {test.n_rows} test rows, "
        f"classes {train.class_values.tolist()}"
    )
    return train, test


def dataset_input_files(cfg: DatasetConfig) -> List[Path]:
    """IDX files a config reads (those present on disk); empty for synthetic data."""
    if cfg.kind == "synthetic":
        return []
    files = []
    for part in ("train", "test"):
        source = IdxDatasetSource(
            cfg.kind, part, data_dir=cfg.data_dir,
            images_path=getattr(cfg, f"{part}_images"),
            labels_path=getattr(cfg, f"{part}_labels"),
        )
        for key, explicit in ((f"{part}_images", source.images_path), (f"{part}_labels", source.labels_path)):
            path = Path(explicit) if explicit else source.locate(key)
            if path.exists():
                files.append(path)
    return files
