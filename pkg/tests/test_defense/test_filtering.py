"""
Tests for filtering a training set with outlier detectors.
"""
import numpy as np
import pytest

from src.data.dataset import LabeledDataset
from src.defense.detector import DefenseConfig, OutlierDetector, fit_detectors
from src.defense.filtering import filter_dataset
from src.utils.errors import ConfigurationError


@pytest.fixture
def detectors():
    """Two 1-D detectors around 0 (class 0) and 10 (class 1)."""
    return {
        0: OutlierDetector(0, np.array([[0.0], [1.0], [-1.0]]), k=2, threshold=1.0, percentile=0.9),
        1: OutlierDetector(1, np.array([[10.0], [11.0], [9.0]]), k=2, threshold=1.0, percentile=0.9),
    }


def test_retains_inliers_and_counts_poison(detectors):
    """Test tallies against ground truth."""
    dataset = LabeledDataset(
        features=np.array([[0.0], [5.0], [10.0], [20.0]]),
        labels=np.array([0, 0, 1, 1]),
        poison_mask=np.array([False, True, False, True]),
    )

    retained, report = filter_dataset(dataset, detectors)

    np.testing.assert_array_equal(retained.features[:, 0], [0.0, 10.0])
    assert not retained.poison_mask.any()
    assert report.retained == 2 and report.rejected == 2
    assert report.poison_rejection_rate == 1.0
    assert report.genuine_rejection_rate == 0.0
    assert report.per_class[0].poison_rejected == 1


def test_duplicate_of_reference_point_is_retained(detectors):
    """Test a copy of a reference point always survives."""
    dataset = LabeledDataset(features=np.array([[-1.0]]), labels=np.array([0]), class_values=[0, 1])
    retained, _ = filter_dataset(dataset, detectors)
    assert retained.n_rows == 1


def test_empty_dataset(detectors):
    """Test no rows in, no rows out."""
    dataset = LabeledDataset(features=np.zeros((0, 1)), labels=np.zeros(0), class_values=[0, 1])

    retained, report = filter_dataset(dataset, detectors)

    assert retained.n_rows == 0
    assert report.retained == 0 and report.rejected == 0
    assert report.to_dict()["per_class"] == {}


def test_no_ground_truth(detectors):
    """Test the poison rate is unknown without a mask."""
    dataset = LabeledDataset(features=np.array([[0.0], [10.0]]), labels=np.array([0, 1]))
    _, report = filter_dataset(dataset, detectors)
    assert report.poison_rejection_rate is None
    assert report.to_dict()["poison_rejection_rate"] is None


def test_missing_detector(detectors):
    """Test a class without a detector."""
    dataset = LabeledDataset(features=np.array([[0.0]]), labels=np.array([2]))
    with pytest.raises(ConfigurationError):
        filter_dataset(dataset, detectors)


@pytest.mark.parametrize("percentile, low, high", [(0.95, 0.02, 0.09), (0.90, 0.05, 0.17)])
def test_genuine_rejection_near_complement_of_percentile(percentile, low, high):
    """Test fresh genuine data is rejected at about 1 - percentile."""
    gen = np.random.default_rng(0)
    cov = [[1.0, 0.3], [0.3, 1.0]]
    trusted = LabeledDataset(features=gen.multivariate_normal([0, 0], cov, size=2000), labels=np.zeros(2000))
    fresh = LabeledDataset(features=gen.multivariate_normal([0, 0], cov, size=2000), labels=np.zeros(2000))

    detectors = fit_detectors(trusted, DefenseConfig(k=5, s=20, percentile=percentile), gen)
    _, report = filter_dataset(fresh, detectors)

    assert low <= report.genuine_rejection_rate <= high
