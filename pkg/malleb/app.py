"""
Malle constant engine
Command-line entry point
"""

import logging

import click

from malleb import __version__
from malleb.config import ENGINE_CONFIG


@click.group()
@click.version_option(__version__, prog_name='malleb')
@click.option('--log-level', default=ENGINE_CONFIG['log_level'], show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
def cli(log_level):
    """Predicted constants for counting number fields with a given Galois group"""
    logging.basicConfig(level=getattr(logging, log_level.upper()),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


# Import and register commands
from malleb.commands.predict import predict_command, pairs_command
from malleb.commands.embed import embed_command
from malleb.commands.oracle import oracle_command
from malleb.commands.verify import verify_command

cli.add_command(predict_command)
cli.add_command(pairs_command)
cli.add_command(embed_command)
cli.add_command(oracle_command)
cli.add_command(verify_command)


if __name__ == '__main__':
    cli()
