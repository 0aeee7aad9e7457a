"""
Closed-form oracle command
"""

import json

import click

from malleb.commands import emit, fail
from malleb.errors import MallebError, ParseError
from malleb.models.oracles import run_oracle


def parse_params(text):
    """'ell=3,d=4' -> {'ell': '3', 'd': '4'}"""
    params = {}
    for item in filter(None, (part.strip() for part in (text or '').split(','))):
        key, sep, value = item.partition('=')
        if not sep or not key.strip() or not value.strip():
            raise ParseError(f"Bad oracle parameter '{item}': expected key=value")
        params[key.strip()] = value.strip()
    return params


@click.command('oracle')
@click.option('--name', required=True, help='thm1, rad_wreath, cl2, wreath_bM or embed')
@click.option('--params', 'params_text', default='', help='Comma-separated key=value pairs')
@click.option('--element-cap', type=int, default=None, help='Largest group order to materialize')
@click.option('--out', 'out_format', type=click.Choice(['json', 'text']), default='json', show_default=True)
def oracle_command(name, params_text, element_cap, out_format):
    """Evaluate a closed form and compare it with the engine"""
    try:
        results = run_oracle(name, parse_params(params_text), element_cap)
        if out_format == 'json':
            emit(json.dumps([r.to_dict() for r in results], indent=2, ensure_ascii=False))
        else:
            emit('\n'.join(str(r) for r in results))
    except ValueError as e:
        fail('Oracle', ParseError(f"Bad oracle parameter: {e}"))
    except MallebError as e:
        fail('Oracle', e)
