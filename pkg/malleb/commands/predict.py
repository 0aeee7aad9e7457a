"""
Prediction commands
"""

import json

import click

from malleb.commands import emit, engine_options, fail, resolve_inputs
from malleb.config import ENGINE_CONFIG
from malleb.errors import MallebError
from malleb.models.oracles import applicable_oracles
from malleb.models.predict import predict
from malleb.models.twist import within_count


@click.command('predict')
@engine_options
@click.option('--out', 'out_format', type=click.Choice(['json', 'text']), default=None,
              help='Report format (default from MALLEB_OUTPUT)')
@click.option('--output', 'out_path', type=click.Path(dir_okay=False), default=None,
              help='Write the report to a file instead of stdout')
@click.option('--cross-check', is_flag=True, help='Run every counting method on every pair')
def predict_command(group_text, inv, base, element_cap, burnside_cap, jobs, out_format, out_path, cross_check):
    """Compute a, b_M, b_T, the pair table and b_new"""
    try:
        group, exp, gamma = resolve_inputs(group_text, inv, base, element_cap)
        report = predict(group, exp, gamma, jobs=jobs, cross_check=cross_check, cap=burnside_cap)
        report.oracles = applicable_oracles(report)
        out_format = out_format or ENGINE_CONFIG['output']
        emit(report.to_json() if out_format == 'json' else report.to_text(), out_path)
    except MallebError as e:
        fail('Predict', e)


@click.command('pairs')
@engine_options
@click.option('--out', 'out_format', type=click.Choice(['json', 'text']), default=None,
              help='Report format (default from MALLEB_OUTPUT)')
@click.option('--within', is_flag=True, help='Also count minimal classes lying inside each kernel')
@click.option('--cross-check', is_flag=True, help='Run every counting method on every pair')
def pairs_command(group_text, inv, base, element_cap, burnside_cap, jobs, out_format, within, cross_check):
    """List every pair (pi, phi) with its orbit count and lift status"""
    try:
        group, exp, gamma = resolve_inputs(group_text, inv, base, element_cap)
        report = predict(group, exp, gamma, jobs=jobs, cross_check=cross_check, cap=burnside_cap)
        out_format = out_format or ENGINE_CONFIG['output']
        if out_format == 'text':
            text = report.to_text(pairs_only=True)
            if within:
                counts = [f"  within |N|={r.pair.kernel.order}: {within_count(group, exp, gamma, r.pair.kernel.mask)}"
                          for r in report.results]
                text = text + '\n' + '\n'.join(counts)
            emit(text)
            return
        rows = []
        for result in report.results:
            row = result.to_dict(methods=cross_check)
            if within:
                row['within'] = within_count(group, exp, gamma, result.pair.kernel.mask)
            rows.append(row)
        emit(json.dumps({
            'meta': report.to_dict()['meta'],
            'a': report.a,
            'pairs': rows,
        }, indent=2, ensure_ascii=False))
    except MallebError as e:
        fail('Pairs', e)

