"""
File helpers: digests and JSON / config-file reading and writing.
"""
import hashlib
import json
import tomllib
from pathlib import Path
from typing import Any, Dict, Union

from src.utils.errors import ConfigurationError

DIGEST_CHUNK = 1 << 20


def sha256_file(path: Union[str, Path]) -> str:
    """Hex SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(DIGEST_CHUNK), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_json(data: Any, path: Union[str, Path], indent: int = 2) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=indent, default=str))
    return path


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Parse a TOML or JSON config file into a dict.

    Args:
        path: ``.toml`` or ``.json`` file

    Returns:
        Dict[str, Any]: Parsed mapping
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file {path} does not exist", "config")
    text = path.read_text()
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigurationError(f"cannot parse {path}: {e}", "config") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path} must hold a table of settings", "config")
    return data
