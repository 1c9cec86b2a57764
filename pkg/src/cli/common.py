"""
Options and error handling shared by the experiment commands.
"""
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import click

from src.cli.checks import InvariantChecks
from src.config.settings import settings
from src.utils.errors import ConfigurationError, PganError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def config_options(func):
    """--config, --seed, --out and --set."""
    func = click.option('--set', 'set_expressions', multiple=True, metavar='KEY=VALUE',
                        help='Override any config key (value parsed as JSON)')(func)
    func = click.option('--out', type=click.Path(file_okay=False, path_type=Path),
                        help='Output directory (overrides the config)')(func)
    func = click.option('--seed', type=int, help='Seed (overrides the config)')(func)
    func = click.option('--config', 'config_path', type=click.Path(dir_okay=False, path_type=Path),
                        help='TOML or JSON config file, or a run manifest')(func)
    return func


def output_dir(configured: Optional[Path], command: str) -> Path:
    out = configured or settings.output_dir / command
    out.mkdir(parents=True, exist_ok=True)
    return out


@contextmanager
def command_errors() -> Iterator[None]:
    """
    Map failures to exit codes: configuration problems are usage errors
    (exit 2), everything else aborts with exit 1.
    """
    try:
        yield
    except ConfigurationError as e:
        raise click.UsageError(str(e))
    except (PganError, OSError, ValueError) as e:
        logger.debug("Command failed", exc_info=True)
        click.echo(f"Error: {e}", err=True)
        raise click.Abort()


def enforce_checks(checks: InvariantChecks) -> None:
    """Abort with the first failed check, if any."""
    failure = checks.first_failure
    if failure is not None:
        click.echo(f"Check failed: {failure.name} ({failure.detail})", err=True)
        raise click.Abort()
    click.echo(f"All {len(checks.results)} checks passed")
