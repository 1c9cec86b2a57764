"""
Binary container for networks.

Layout (little-endian): magic ``PGAN-NET\\0``, version byte, int64 layer
count, then per layer: int64 in_dim, int64 out_dim, int64 activation tag,
float64 dropout keep, float64 weights row-major, float64 biases.

The leaky-ReLU slope is not part of the container. Loaders take it from the
caller (the model sidecar records it) and fall back to 0.1.
"""
import struct
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from src.nn.layers import LayerSpec
from src.nn.network import MlpNetwork
from src.nn.optimizers import OptimizerSpec
from src.utils.errors import FormatError

MAGIC = b"PGAN-NET\0"
VERSION = 1
DEFAULT_SLOPE = 0.1

ACTIVATION_TAGS = {"linear": 0, "leaky_relu": 1, "sigmoid": 2, "tanh": 3, "softmax": 4}
TAG_ACTIVATIONS = {tag: name for name, tag in ACTIVATION_TAGS.items()}


def dumps_network(net: MlpNetwork) -> bytes:
    """Serialize a network's layers and parameters."""
    parts = [MAGIC, struct.pack("<B", VERSION), struct.pack("<q", len(net.layers))]
    for spec, w, b in zip(net.layers, net.weights, net.biases):
        parts.append(struct.pack("<qqq", spec.in_dim, spec.out_dim, ACTIVATION_TAGS[spec.activation]))
        parts.append(struct.pack("<d", spec.dropout_keep))
        parts.append(np.ascontiguousarray(w, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(b, dtype="<f8").tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, size: int, what: str) -> bytes:
        if self.offset + size > len(self.data):
            raise FormatError(f"truncated network container while reading {what}")
        chunk = self.data[self.offset:self.offset + size]
        self.offset += size
        return chunk


def loads_network(data: bytes, optimizer: Optional[OptimizerSpec] = None,
                  slopes: Optional[Sequence[float]] = None) -> MlpNetwork:
    """
    Deserialize a network.

    Args:
        data: Container bytes
        optimizer: Optimizer to attach (state is not persisted)
        slopes: Per-layer leaky-ReLU slopes; layers default to 0.1

    Returns:
        MlpNetwork: Restored network
    """
    reader = _Reader(data)
    if reader.take(len(MAGIC), "magic") != MAGIC:
        raise FormatError("magic: not a PGAN-NET container")
    (version,) = struct.unpack("<B", reader.take(1, "version"))
    if version != VERSION:
        raise FormatError(f"version: unsupported container version {version}")
    (count,) = struct.unpack("<q", reader.take(8, "layer count"))
    if count < 1:
        raise FormatError(f"layer count: invalid value {count}")
    if slopes is not None and len(slopes) != count:
        raise FormatError(f"slopes: {len(slopes)} given for {count} layers")

    layers, weights, biases = [], [], []
    for idx in range(count):
        in_dim, out_dim, tag = struct.unpack("<qqq", reader.take(24, f"layer {idx} header"))
        (keep,) = struct.unpack("<d", reader.take(8, f"layer {idx} dropout keep"))
        if tag not in TAG_ACTIVATIONS:
            raise FormatError(f"layer {idx} activation tag: unknown value {tag}")
        if in_dim < 1 or out_dim < 1:
            raise FormatError(f"layer {idx} dimensions: invalid {in_dim}x{out_dim}")
        layers.append(LayerSpec(
            in_dim=in_dim, out_dim=out_dim, activation=TAG_ACTIVATIONS[tag],
            slope=DEFAULT_SLOPE if slopes is None else float(slopes[idx]), dropout_keep=keep,
        ))
        w = np.frombuffer(reader.take(8 * in_dim * out_dim, f"layer {idx} weights"), dtype="<f8")
        b = np.frombuffer(reader.take(8 * out_dim, f"layer {idx} biases"), dtype="<f8")
        weights.append(w.astype(np.float64).reshape(in_dim, out_dim))
        biases.append(b.astype(np.float64).reshape(1, out_dim))
    if reader.offset != len(data):
        raise FormatError("trailing bytes after the last layer")

    return MlpNetwork(layers, weights, biases, optimizer or OptimizerSpec())


def save_network(net: MlpNetwork, path: Union[str, Path]) -> Path:
    """Write a network container to disk."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps_network(net))
    return path


def load_network(path: Union[str, Path], optimizer: Optional[OptimizerSpec] = None,
                 slopes: Optional[Sequence[float]] = None) -> MlpNetwork:
    """Read a network container from disk."""
    path = Path(path)
    if not path.exists():
        raise FormatError(f"network file not found: {path}")
    return loads_network(path.read_bytes(), optimizer, slopes)
