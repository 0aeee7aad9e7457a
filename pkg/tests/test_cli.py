"""
Tests for the command-line surface
"""

import json

import pytest
from click.testing import CliRunner

from malleb.app import cli
from malleb.commands.oracle import parse_params
from malleb.errors import ParseError


@pytest.fixture
def runner():
    return CliRunner()


def test_predict_json(runner):
    result = runner.invoke(cli, ['predict', '--group', 'wr(C3,C4)', '--inv', 'rad', '--base', 'Q', '--out', 'json'])
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data['b_T'] == 29
    assert data['b_M'] == 19
    assert data['b_new'] == 19
    assert {p['subfield']['name']: p['b'] for p in data['pairs']} == {
        'Q(i)': 17, 'Q(√3)': 17, 'Q(μ3)': 29, 'Q': 19}


def test_predict_output_is_byte_stable(runner):
    args = ['predict', '--group', 'wr(C3,C4)', '--inv', 'disc', '--out', 'json']
    first = runner.invoke(cli, args).stdout
    assert runner.invoke(cli, args).stdout == first
    assert json.loads(first)['oracles'][0]['name'] == 'thm1.b_T'


def test_predict_text_to_file(runner, tmp_path):
    path = tmp_path / 'report.txt'
    result = runner.invoke(cli, ['predict', '--group', 'S3', '--inv', 'disc', '--out', 'text', '--output', str(path)])
    assert result.exit_code == 0, result.output
    assert 'b_T = 1' in path.read_text(encoding='utf-8')


def test_predict_function_field(runner):
    result = runner.invoke(cli, ['predict', '--group', 'wr(C3,C4)', '--inv', 'disc', '--base', 'Fq:q=5'])
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert data['meta']['base'] == 'Fq:q=5'
    assert data['b_new'] == 2


def test_pairs_within(runner):
    result = runner.invoke(cli, ['pairs', '--group', 'wr(C3,C4)', '--inv', 'rad', '--within', '--out', 'json'])
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert 'b_T' not in data
    assert len(data['pairs']) == 4
    trivial = next(p for p in data['pairs'] if p['subfield']['name'] == 'Q')
    assert trivial['within'] == 19


def test_pairs_cross_check_text(runner):
    result = runner.invoke(cli, ['pairs', '--group', 'wr(C3,C2)', '--inv', 'rad', '--cross-check', '--out', 'text'])
    assert result.exit_code == 0, result.output
    assert 'wr(C3,C2)' in result.stdout


@pytest.mark.parametrize('args, exit_code', [
    (['predict', '--group', 'wr(C3'], 2),
    (['predict', '--group', 'C4', '--inv', 'weights'], 2),
    (['predict', '--group', 'wr(C3,C4)', '--base', 'Fq:q=2'], 2),
    (['predict', '--group', 'S12', '--element-cap', '1000'], 3),
    (['predict'], 2),
    (['frobnicate'], 2),
    (['embed', '--ell', '4', '--n', '1', '--d', '2'], 2),
    (['oracle', '--name', 'thm1', '--params', 'ell=3'], 2),
    (['oracle', '--name', 'thm1', '--params', 'ell=three,d=4'], 2),
    (['verify-paper', '--only', 'Nothing'], 2),
])
def test_exit_codes(runner, args, exit_code):
    assert runner.invoke(cli, args).exit_code == exit_code


def test_embed_text(runner):
    result = runner.invoke(cli, ['embed', '--ell', '3', '--n', '2', '--d', '4'])
    assert result.exit_code == 0
    assert result.stdout.strip() == 'obstructed: 3, infinity'


def test_embed_json(runner):
    result = runner.invoke(cli, ['embed', '--ell', '13', '--n', '4', '--d', '4', '--out', 'json'])
    assert json.loads(result.stdout) == {'verdict': 'liftable', 'places': [], 'rule': 'abelian-local'}


def test_oracle_command(runner):
    result = runner.invoke(cli, ['oracle', '--name', 'thm1', '--params', 'ell=3,d=4'])
    assert result.exit_code == 0, result.output
    data = json.loads(result.stdout)
    assert [r['name'] for r in data] == ['thm1.b_T', 'thm1.b']
    assert all(r['agree'] for r in data)


def test_parse_params():
    assert parse_params('ell=3, d=4') == {'ell': '3', 'd': '4'}
    assert parse_params('') == {}
    with pytest.raises(ParseError):
        parse_params('ell')


def test_verify_single_check(runner):
    result = runner.invoke(cli, ['verify-paper', '--only', 'Embedding table'])
    assert result.exit_code == 0, result.output
    assert 'All 1 checks passed' in result.stdout


@pytest.mark.slow
def test_verify_paper(runner):
    result = runner.invoke(cli, ['verify-paper'])
    assert result.exit_code == 0, result.output
