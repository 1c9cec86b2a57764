#!/usr/bin/env python
"""
Main CLI entry point.
"""
import click

from src.cli.data_commands import fetch_data
from src.cli.eval_commands import eval_cmd
from src.cli.pgan_commands import gen_poison, synth_demo, train_pgan_cmd
from src.utils.logging_config import setup_logging


@click.group()
@click.option('--log-level', default=None, help='Logging level (defaults to PGAN_LOG_LEVEL)')
def cli(log_level):
    """Generative data-poisoning attacks, outlier defense and evaluation."""
    setup_logging(log_level)


cli.add_command(synth_demo)
cli.add_command(train_pgan_cmd)
cli.add_command(gen_poison)
cli.add_command(eval_cmd)
cli.add_command(fetch_data)


if __name__ == '__main__':
    cli()
