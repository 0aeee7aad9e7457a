"""
Shared helpers for the command modules
"""

import logging
import math
import sys

import click

from malleb.errors import ValidationError
from malleb.models.abelian import CycloGamma
from malleb.models.invariant import d_of, make_exp
from malleb.models.perm import build_group


def resolve_inputs(group_text, inv, base, element_cap=None):
    """Group, exponent function and cyclotomic data from the command-line strings"""
    group = build_group(group_text, element_cap)
    exp = make_exp(group, inv)
    d = d_of(group, exp)
    gamma = CycloGamma.from_text(base, d)
    if gamma.is_function_field and math.gcd(gamma.q, group.order) != 1:
        raise ValidationError(f"gcd(q, |G|) = gcd({gamma.q}, {group.order}) must be 1")
    return group, exp, gamma


def fail(action, error):
    """Log a handler error, print it and exit with the error's code"""
    logging.error(f"{action} error: {error}")
    click.echo(f"Error: {error}", err=True)
    sys.exit(getattr(error, 'exit_code', 1))


def emit(text, out_path=None):
    """Write a report to stdout or a file"""
    if out_path:
        with open(out_path, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
    else:
        click.echo(text)


def engine_options(command):
    """Options shared by the commands that build a group"""
    options = [
        click.option('--group', 'group_text', required=True, help='Group expression, e.g. "wr(C3,C4)"'),
        click.option('--inv', default='disc', show_default=True, help='disc, rad or table:<file>'),
        click.option('--base', default='Q', show_default=True, help='Q or Fq:q=<q>'),
        click.option('--element-cap', type=int, default=None, help='Largest group order to materialize'),
        click.option('--burnside-cap', type=int, default=None, help='Largest |G(pi,phi)| for full sums'),
        click.option('--jobs', type=int, default=None, help='Worker threads for pair evaluation'),
    ]
    for option in reversed(options):
        command = option(command)
    return command
