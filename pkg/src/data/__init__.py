"""
Dataset ingestion, synthetic sampling, transforms, splits and poison
substitution.
"""
from src.data.dataset import LabeledDataset, NormalizationInfo, concat_datasets
from src.data.idx import load_idx, save_idx
from src.data.transforms import normalize, denormalize, filter_classes, cap_per_class
from src.data.synthetic import GaussianMixtureSpec, TWO_GAUSSIANS, sample_synthetic
from src.data.splits import SplitSpec, split
from src.data.poisoning import substitute_poison, append_poison, poison_count

__all__ = [
    "LabeledDataset",
    "NormalizationInfo",
    "concat_datasets",
    "load_idx",
    "save_idx",
    "normalize",
    "denormalize",
    "filter_classes",
    "cap_per_class",
    "GaussianMixtureSpec",
    "TWO_GAUSSIANS",
    "sample_synthetic",
    "SplitSpec",
    "split",
    "substitute_poison",
    "append_poison",
    "poison_count",
]
