"""
Loading command configs from TOML/JSON files or run manifests, with
command-line overrides.
"""
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from src.utils.errors import ConfigurationError
from src.utils.io import read_config_file

ModelT = TypeVar("ModelT", bound=BaseModel)


def parse_override(text: str) -> Tuple[str, Any]:
    """
    Split ``dotted.key=value``; the value is parsed as JSON when possible.

    Args:
        text: Override expression

    Returns:
        Tuple[str, Any]: Dotted key and value
    """
    key, sep, raw = text.partition("=")
    if not sep or not key.strip():
        raise ConfigurationError(f"override {text!r} is not of the form key=value", "--set")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def set_dotted(data: Dict[str, Any], dotted: str, value: Any) -> None:
    """Assign ``value`` at a dotted path, creating intermediate tables."""
    parts = dotted.split(".")
    node = data
    for part in parts[:-1]:
        child = node.get(part)
        if child is None:
            child = node[part] = {}
        elif not isinstance(child, dict):
            raise ConfigurationError(f"{part} is not a table", dotted)
        node = child
    node[parts[-1]] = value


def _validation_error(e: ValidationError) -> ConfigurationError:
    first = e.errors()[0]
    field = ".".join(str(p) for p in first["loc"]) or None
    return ConfigurationError(first["msg"], field)


def load_config(
    model: Type[ModelT],
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
    set_expressions: Iterable[str] = (),
) -> ModelT:
    """
    Build a validated config.

    A run manifest (a JSON document with ``command`` and ``config``) is
    accepted in place of a config file; its config snapshot is used.

    Args:
        model: Schema to validate against
        path: Config file, or None for defaults
        overrides: Dotted keys set by dedicated flags (``--seed`` etc.)
        set_expressions: ``key=value`` strings from ``--set``

    Returns:
        ModelT: Validated config
    """
    data: Dict[str, Any] = read_config_file(path) if path is not None else {}
    if "command" in data and isinstance(data.get("config"), dict):
        data = data["config"]
    for expression in set_expressions:
        set_dotted(data, *parse_override(expression))
    for dotted, value in (overrides or {}).items():
        if value is not None:
            set_dotted(data, dotted, value)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise _validation_error(e) from e
