"""
Cyclic embedding command
"""

import json

import click

from malleb.commands import emit, fail
from malleb.errors import MallebError
from malleb.models.embed import embed_cyclic


@click.command('embed')
@click.option('--ell', type=int, required=True, help='Odd prime')
@click.option('--n', 'n', type=int, required=True, help='Degree of the subfield of Q(mu_ell)')
@click.option('--d', 'd', type=int, required=True, help='Order of the cyclic extension')
@click.option('--out', 'out_format', type=click.Choice(['json', 'text']), default='text', show_default=True)
def embed_command(ell, n, d, out_format):
    """Decide whether the degree-n subfield of Q(mu_ell) embeds in a C_d-extension"""
    try:
        status = embed_cyclic(ell, n, d)
        if out_format == 'json':
            emit(json.dumps(status.to_dict()))
        else:
            emit(str(status))
    except MallebError as e:
        fail('Embed', e)
