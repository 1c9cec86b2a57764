"""
The generator / discriminator / classifier triple and its persistence.
"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from src.data.dataset import LabeledDataset, NormalizationInfo
from src.nn.architectures import classifier_out_dim
from src.nn.network import MlpNetwork
from src.nn.optimizers import OptimizerSpec
from src.nn.serialization import load_network, save_network
from src.pgan.config import PganConfig
from src.utils.errors import ConfigurationError, FormatError, InputError, ShapeError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)

COMPONENT_SUFFIXES = (".gen", ".dis", ".clf")
METADATA_SUFFIX = ".json"


@dataclass(eq=False)
class PganModel:
    """
    Three networks trained together.

    ``poison_classes`` are class indices in the classifier's label space;
    ``class_values`` maps those indices back to source label values.
    """

    generator: MlpNetwork
    discriminator: MlpNetwork
    classifier: MlpNetwork
    poison_classes: List[int]
    class_values: np.ndarray
    normalization: Optional[NormalizationInfo] = None

    def __post_init__(self):
        dim = self.generator.out_dim
        if self.discriminator.in_dim != dim or self.classifier.in_dim != dim:
            raise ShapeError(
                f"generator emits {dim} features but discriminator/classifier expect "
                f"{self.discriminator.in_dim}/{self.classifier.in_dim}"
            )
        if self.discriminator.out_dim != 1 or self.discriminator.output_activation != "sigmoid":
            raise ConfigurationError("the discriminator needs a single sigmoid output", "discriminator")
        self.class_values = np.asarray(self.class_values, dtype=np.int64)
        if not self.poison_classes or max(self.poison_classes) >= self.class_values.size:
            raise ConfigurationError(
                f"poison classes {self.poison_classes} are outside the label space", "poison_classes"
            )
        self.poison_classes = sorted(int(c) for c in self.poison_classes)

    @property
    def noise_dim(self) -> int:
        return self.generator.in_dim

    @property
    def n_features(self) -> int:
        return self.generator.out_dim

    @property
    def poison_values(self) -> List[int]:
        return [int(self.class_values[c]) for c in self.poison_classes]

    def poison_labels_for(self, n: int) -> np.ndarray:
        """Class indices for ``n`` poison rows, cycling through the poison classes."""
        return np.resize(np.asarray(self.poison_classes, dtype=np.int64), n)

    def poison_values_for(self, n: int) -> np.ndarray:
        """Source label values for ``n`` poison rows."""
        return self.class_values[self.poison_labels_for(n)]

    def copy(self) -> "PganModel":
        return PganModel(
            self.generator.copy(), self.discriminator.copy(), self.classifier.copy(),
            list(self.poison_classes), self.class_values.copy(), self.normalization,
        )


def init_model(dataset: LabeledDataset, cfg: PganConfig, rng: np.random.Generator) -> PganModel:
    """
    Build freshly initialized networks sized for a training set.

    Args:
        dataset: Training set in the classifier's label space
        cfg: Architectures and poison classes (as label values)
        rng: Generator for weight initialization

    Returns:
        PganModel: Untrained model
    """
    dim = dataset.n_features
    try:
        poison = [dataset.index_of_value(v) for v in cfg.poison_classes]
    except InputError as e:
        raise ConfigurationError(str(e), "poison_classes") from e
    generator = cfg.generator.build(cfg.noise_dim, dim, rng)
    discriminator = cfg.discriminator.build(dim, 1, rng)
    classifier = cfg.classifier.build(dim, classifier_out_dim(cfg.classifier, dataset.n_classes), rng)
    return PganModel(generator, discriminator, classifier, poison, dataset.class_values,
                     dataset.normalization)


def _prefix(path: Union[str, Path]) -> Path:
    path = Path(path)
    if path.suffix in COMPONENT_SUFFIXES + (METADATA_SUFFIX,):
        return path.with_suffix("")
    return path


def component_paths(prefix: Union[str, Path]) -> Dict[str, Path]:
    """File paths of the three networks and the metadata sidecar."""
    base = _prefix(prefix)
    return {
        "generator": base.with_name(base.name + ".gen"),
        "discriminator": base.with_name(base.name + ".dis"),
        "classifier": base.with_name(base.name + ".clf"),
        "metadata": base.with_name(base.name + METADATA_SUFFIX),
    }


def save_model(model: PganModel, prefix: Union[str, Path],
               config: Optional[PganConfig] = None) -> Dict[str, Path]:
    """
    Write the three networks plus a JSON sidecar.

    Args:
        model: Model to persist
        prefix: Path prefix (``.gen``/``.dis``/``.clf``/``.json`` are appended)
        config: Training config recorded in the sidecar

    Returns:
        Dict[str, Path]: Written paths by component
    """
    paths = component_paths(prefix)
    paths["metadata"].parent.mkdir(parents=True, exist_ok=True)
    save_network(model.generator, paths["generator"])
    save_network(model.discriminator, paths["discriminator"])
    save_network(model.classifier, paths["classifier"])

    metadata: Dict[str, Any] = {
        "poison_classes": model.poison_classes,
        "class_values": model.class_values.tolist(),
        "optimizers": {
            "generator": model.generator.optimizer.model_dump(),
            "discriminator": model.discriminator.optimizer.model_dump(),
            "classifier": model.classifier.optimizer.model_dump(),
        },
        "slopes": {
            name: [spec.slope for spec in getattr(model, name).layers]
            for name in ("generator", "discriminator", "classifier")
        },
        "normalization": None if model.normalization is None else {
            "mode": model.normalization.mode,
            "scale": model.normalization.scale,
            "offset": model.normalization.offset,
        },
        "config": None if config is None else config.model_dump(mode="json", by_alias=True),
    }
    paths["metadata"].write_text(json.dumps(metadata, indent=2))
    logger.info(f"Saved pGAN model to {paths['metadata'].with_suffix('')}.*")
    return paths


def load_model(prefix: Union[str, Path]) -> Tuple[PganModel, Optional[PganConfig]]:
    """
    Read a model written by ``save_model``.

    Args:
        prefix: Path prefix or any one of the component files

    Returns:
        Tuple[PganModel, Optional[PganConfig]]: Model and its recorded training config
    """
    paths = component_paths(prefix)
    try:
        metadata = json.loads(paths["metadata"].read_text())
    except FileNotFoundError as e:
        raise FormatError(f"model metadata {paths['metadata']} not found") from e
    except json.JSONDecodeError as e:
        raise FormatError(f"model metadata {paths['metadata']} is not valid JSON: {e}") from e

    optimizers = metadata.get("optimizers", {})
    slopes = metadata.get("slopes", {})

    def load(name: str) -> MlpNetwork:
        spec = optimizers.get(name)
        return load_network(paths[name], OptimizerSpec(**spec) if spec else None, slopes.get(name))

    norm = metadata.get("normalization")
    model = PganModel(
        load("generator"), load("discriminator"), load("classifier"),
        metadata["poison_classes"], np.asarray(metadata["class_values"], dtype=np.int64),
        NormalizationInfo(**norm) if norm else None,
    )
    cfg = metadata.get("config")
    return model, PganConfig.model_validate(cfg) if cfg else None
