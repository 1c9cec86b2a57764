"""
Tests for the IDX reader and writer.
"""
import gzip
import struct

import numpy as np
import pytest

from src.data.idx import (
    IMAGES_MAGIC,
    LABELS_MAGIC,
    encode_idx_images,
    encode_idx_labels,
    load_idx,
    parse_idx_images,
    parse_idx_labels,
    save_idx,
)
from src.data.transforms import normalize
from src.utils.errors import FormatError


@pytest.fixture
def idx_pair(tmp_path):
    """Two 2x2 images labelled 7 and 1."""
    images = struct.pack(">IIII", IMAGES_MAGIC, 2, 2, 2) + bytes([0, 1, 2, 3, 255, 254, 128, 0])
    labels = struct.pack(">II", LABELS_MAGIC, 2) + bytes([7, 1])
    images_path = tmp_path / "images-idx3-ubyte"
    labels_path = tmp_path / "labels-idx1-ubyte"
    images_path.write_bytes(images)
    labels_path.write_bytes(labels)
    return images_path, labels_path


def test_load_hand_built_fixture(idx_pair):
    """Test bytes map to pixel values row by row."""
    dataset = load_idx(*idx_pair)

    np.testing.assert_array_equal(dataset.features, [[0, 1, 2, 3], [255, 254, 128, 0]])
    assert dataset.image_shape == (2, 2)
    assert dataset.n_classes == 8
    np.testing.assert_array_equal(dataset.labels, [7, 1])


def test_gzip_files(idx_pair, tmp_path):
    """Test compressed archives load like plain files."""
    zipped = []
    for path in idx_pair:
        target = tmp_path / (path.name + ".gz")
        with gzip.open(target, "wb") as f:
            f.write(path.read_bytes())
        zipped.append(target)

    np.testing.assert_array_equal(load_idx(*zipped).features, load_idx(*idx_pair).features)


def test_save_is_byte_identical(idx_pair, tmp_path):
    """Test writing a loaded fixture reproduces its bytes."""
    out_images, out_labels = tmp_path / "out-images", tmp_path / "out-labels"

    save_idx(load_idx(*idx_pair), out_images, out_labels)

    assert out_images.read_bytes() == idx_pair[0].read_bytes()
    assert out_labels.read_bytes() == idx_pair[1].read_bytes()


def test_save_refuses_normalized(idx_pair, tmp_path):
    """Test normalized pixels cannot be written as IDX."""
    dataset = normalize(load_idx(*idx_pair))
    with pytest.raises(FormatError):
        save_idx(dataset, tmp_path / "a", tmp_path / "b")


def test_labels_wrong_magic():
    """Test a labels file with an image magic."""
    with pytest.raises(FormatError, match="magic"):
        parse_idx_labels(struct.pack(">II", IMAGES_MAGIC, 0))


def test_truncated_images():
    """Test a payload shorter than the header promises."""
    data = encode_idx_images(np.zeros((3, 4), dtype=np.uint8), (2, 2))
    with pytest.raises(FormatError, match="payload"):
        parse_idx_images(data[:-1])


def test_count_mismatch(tmp_path):
    """Test image and label files disagreeing on the item count."""
    images = tmp_path / "i"
    labels = tmp_path / "l"
    images.write_bytes(encode_idx_images(np.zeros((2, 1)), (1, 1)))
    labels.write_bytes(encode_idx_labels(np.zeros(3)))

    with pytest.raises(FormatError, match="count"):
        load_idx(images, labels)


def test_missing_file(tmp_path):
    """Test a path that does not exist."""
    with pytest.raises(FormatError):
        load_idx(tmp_path / "nope", tmp_path / "nope2")
