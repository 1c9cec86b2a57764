"""
CLI commands for dataset download and inspection.
"""
from pathlib import Path

import click

from src.config.settings import settings
from src.data.download import IdxDownloader
from src.data.sources import IdxDatasetSource
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


@click.command('fetch-data')
@click.option(
    '--dataset',
    type=click.Choice(['mnist', 'fmnist', 'all']),
    default='all',
    show_default=True,
    help='Dataset to download'
)
@click.option(
    '--data-dir',
    type=click.Path(file_okay=False, path_type=Path),
    help='Dataset root (defaults to PGAN_DATA_DIR)'
)
def fetch_data(dataset, data_dir):
    """
    Download the MNIST / Fashion-MNIST IDX archives.

    Example:
        pgan-poison fetch-data --dataset mnist
    """
    names = ['mnist', 'fmnist'] if dataset == 'all' else [dataset]
    root = data_dir or settings.data_dir

    try:
        for name in names:
            click.echo(f"Fetching {name} into {root / name}")
            files = IdxDownloader(name, root / name).fetch_all()

            source = IdxDatasetSource(name, "train", data_dir=root / name)
            _, stats = source.run()

            click.echo("\n" + "=" * 50)
            click.echo(f"{name} ready!")
            click.echo(f"Files: {len(files)}")
            click.echo(f"Status: {stats['status']}")
            click.echo(f"Training rows: {stats['rows']}")
            click.echo(f"Duration: {stats['duration_seconds']:.2f} seconds")

    except Exception as e:
        click.echo(f"Error: {e}", err=True)
        raise click.Abort()
