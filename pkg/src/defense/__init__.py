"""
Outlier-detection defense applied before victim training.
"""
from src.defense.detector import (
    DefenseConfig,
    OutlierDetector,
    fit_detector,
    fit_detectors,
    knn_scores,
    load_detectors,
    nearest_rank,
    save_detectors,
)
from src.defense.filtering import ClassFilterCounts, FilterReport, filter_dataset

__all__ = [
    "DefenseConfig",
    "OutlierDetector",
    "fit_detector",
    "fit_detectors",
    "knn_scores",
    "load_detectors",
    "nearest_rank",
    "save_detectors",
    "ClassFilterCounts",
    "FilterReport",
    "filter_dataset",
]
