"""
Reproduction command
"""

import click

from malleb import verification
from malleb.commands import fail
from malleb.errors import VerificationFailed


@click.command('verify-paper')
@click.option('--only', 'only', multiple=True, help='Run only the named checks (repeatable)')
def verify_command(only):
    """Recompute every tabulated constant; exit 1 if any check fails"""
    steps = verification.STEPS
    if only:
        steps = [(name, step) for name, step in steps if name in only]
        unknown = set(only) - {name for name, _ in steps}
        if unknown:
            raise click.BadParameter(f"unknown checks {', '.join(sorted(unknown))}", param_hint='--only')
    try:
        results = verification.run_verification(steps)
        failed = [name for name, passed in results if not passed]
        if failed:
            raise VerificationFailed(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
        click.echo(f"All {len(results)} checks passed")
    except VerificationFailed as e:
        fail('Verification', e)
