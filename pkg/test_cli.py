#!/usr/bin/env python3
"""
pcat 명령줄 인터페이스 테스트 (종료 코드, CSV/매니페스트 출력)
"""

import math
import os
import shlex
import sys

import pandas as pd
import pytest
import yaml
from click.testing import CliRunner

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from pcat import __version__
from pcat.cli.exporter import read_manifest
from pcat.cli.main import cli

@pytest.fixture
def runner():
    return CliRunner()

@pytest.fixture
def small_config(tmp_path):
    """fig1/fig2 를 빠르게 돌리는 축소 설정"""
    path = tmp_path / 'settings.yaml'
    path.write_text(yaml.safe_dump({
        'quadrature': {'radial_nodes': 64, 'azimuthal_nodes': 64, 'r_max_in_widths': 8.0,
                       'target_tol': 1e-13, 'max_doublings': 2},
        'theta': {'min': 0.0, 'max': math.pi / 2, 'steps': 7},
        'figures': {
            'fig1': {'widths': [0.0, 0.3], 'alpha': 15.0, 'alpha_saturation': 20.0,
                     'alpha_negative': -15.0, 'saturation_tol': 1e-6},
            'fig2': {'width': 0.6, 'alphas': [1.0, 0.0]},
        },
    }), encoding='utf-8')
    return str(path)

def test_version(runner):
    result = runner.invoke(cli, ['--version'])
    assert result.exit_code == 0
    assert __version__ in result.output

def test_chsh_plane_wave_curve(runner, tmp_path):
    out = str(tmp_path / 'chsh.csv')
    result = runner.invoke(cli, ['chsh', '--alpha', '0', '--width', '0', '--theta-steps', '181', '--out', out])
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert len(frame) == 181
    assert list(frame.columns) == ['theta_rad', 'F', 'E_00', 'E_0m', 'E_p0', 'E_pm', 'est_error']
    assert frame.loc[60, 'F'] == pytest.approx(2.5, abs=1e-9)
    assert frame.loc[0, 'F'] == pytest.approx(2.0, abs=1e-12)

    with open(out, encoding='utf-8') as f:
        row = f.read().splitlines()[61].split(',')
    assert row[1] == '2.50000000000'

    manifest = read_manifest(out)
    assert manifest['command'] == 'pcat chsh'
    assert shlex.split(manifest['command_line']) == [
        'pcat', 'chsh', '--alpha', '0', '--width', '0', '--theta-steps', '181', '--out', out,
    ]
    assert manifest['version'] == __version__
    assert manifest['param.theta_steps'] == '181'
    assert 'quadrature.radial_nodes' in manifest
    assert 'wall_clock_seconds' in manifest

def test_degrees_and_plot(runner, tmp_path):
    out = str(tmp_path / 'curve.csv')
    result = runner.invoke(cli, ['chsh', '--theta-steps', '5', '--degrees', '--plot', '--out', out])
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert list(frame.columns[:3]) == ['theta_rad', 'theta_deg', 'F']
    assert frame['theta_deg'].iloc[-1] == pytest.approx(90.0)
    assert os.path.exists(str(tmp_path / 'curve.svg'))

def test_output_directory_is_created(runner, tmp_path):
    out = str(tmp_path / 'nested' / 'dir' / 'chsh.csv')
    result = runner.invoke(cli, ['chsh', '--theta-steps', '3', '--out', out])
    assert result.exit_code == 0, result.output
    assert os.path.exists(out)

@pytest.mark.parametrize("args", [
    ['chsh', '--theta-steps', '0'],
    ['chsh', '--width', '-1'],
    ['chsh', '--alpha', 'nan'],
    ['oracle', '--samples', '100'],
    ['sweep', '--widths', '0,abc'],
    ['compare', '--width', '0.3'],
])
def test_usage_errors_exit_one(runner, tmp_path, args):
    result = runner.invoke(cli, args + ['--out', str(tmp_path / 'bad.csv')])
    assert result.exit_code == 1
    assert not os.path.exists(str(tmp_path / 'bad.csv'))

def test_missing_config_exits_one(runner, tmp_path):
    result = runner.invoke(cli, ['chsh', '--config', str(tmp_path / 'missing.yaml'),
                                 '--out', str(tmp_path / 'x.csv')])
    assert result.exit_code == 1

def test_unconverged_quadrature_exits_two(runner, tmp_path):
    out = str(tmp_path / 'chsh.csv')
    result = runner.invoke(cli, ['chsh', '--width', '0.6', '--radial-nodes', '2', '--azimuthal-nodes', '2',
                                 '--tol', '1e-15', '--theta-steps', '3', '--out', out])
    assert result.exit_code == 2
    assert not os.path.exists(out)

def test_normalization_failure_exits_two(runner, tmp_path, monkeypatch):
    import pcat.correlator.transfer as transfer_module
    monkeypatch.setattr(transfer_module, 'state_norms', lambda particle, width, spec=None: (1.0, 1.0, 1e-6))
    out = str(tmp_path / 'chsh.csv')
    result = runner.invoke(cli, ['chsh', '--width', '0.3', '--theta-steps', '3', '--out', out])
    assert result.exit_code == 2
    assert not os.path.exists(out)

def test_fig3_unconverged_exits_two(runner, tmp_path):
    result = runner.invoke(cli, ['fig3', '--alpha', '0.5', '--width', '0.6', '--radial-nodes', '2',
                                 '--azimuthal-nodes', '2', '--theta-steps', '3',
                                 '--out', str(tmp_path / 'fig3.csv')])
    assert result.exit_code == 2

@pytest.mark.parametrize("extra", [[], ['--stability']])
def test_fig3_rest_frame_is_zero(runner, tmp_path, extra):
    out = str(tmp_path / 'fig3.csv')
    result = runner.invoke(cli, ['fig3', '--alpha', '0', '--width', '0', '--out', out] + extra)
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert len(frame) == 19
    assert (frame['delta_F'] == 0.0).all()
    if extra:
        assert frame['stable'].all()
        assert read_manifest(out)['stable_2_digits'] == 'True'

@pytest.mark.slow
def test_fig3_default_scenario_is_stable(runner, tmp_path):
    out = str(tmp_path / 'fig3.csv')
    result = runner.invoke(cli, ['fig3', '--theta-steps', '3', '--stability', '--out', out])
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert frame['stable'].all()
    assert (frame['delta_F'].abs() > 0).any()
    assert read_manifest(out)['stable_2_digits'] == 'True'

def test_fig1_with_small_config(runner, tmp_path, small_config):
    out = str(tmp_path / 'fig1.csv')
    result = runner.invoke(cli, ['fig1', '--config', small_config, '--out', out])
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert len(frame) == 7
    for column in ('F_W0', 'F_W0_sat', 'F_W0_neg', 'est_error_W0', 'F_W0.3', 'F_W0.3_sat'):
        assert column in frame.columns
    assert frame.loc[2, 'F_W0'] == pytest.approx(2.5, abs=1e-9)
    assert frame.loc[2, 'F_W0.3'] < frame.loc[2, 'F_W0']
    assert read_manifest(out)['saturated'] == 'True'

def test_fig2_with_small_config(runner, tmp_path, small_config):
    out = str(tmp_path / 'fig2.csv')
    result = runner.invoke(cli, ['fig2', '--config', small_config, '--out', out])
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert list(frame.columns) == ['theta_rad', 'F_alpha1', 'est_error_alpha1', 'F_alpha0', 'est_error_alpha0']
    assert frame.loc[2, 'F_alpha1'] > frame.loc[2, 'F_alpha0']

def test_sweep_row_order(runner, tmp_path):
    out = str(tmp_path / 'sweep.csv')
    result = runner.invoke(cli, ['sweep', '--widths', '0,0.3', '--alphas', '0,1', '--theta', '0.2,0.5',
                                 '--out', out])
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert list(frame.columns) == ['width', 'alpha', 'theta_rad', 'F', 'est_error', 'converged']
    assert frame['width'].tolist() == [0.0] * 4 + [0.3] * 4
    assert frame['alpha'].tolist() == [0.0, 0.0, 1.0, 1.0] * 2
    assert frame['theta_rad'].tolist() == [0.2, 0.5] * 4

def test_sweep_parallel_matches_serial(runner, tmp_path):
    serial, parallel = str(tmp_path / 'serial.csv'), str(tmp_path / 'parallel.csv')
    args = ['sweep', '--widths', '0.3,0.6', '--alphas', '0']
    assert runner.invoke(cli, args + ['--out', serial]).exit_code == 0
    assert runner.invoke(cli, args + ['--jobs', '2', '--out', parallel]).exit_code == 0
    with open(serial, 'rb') as a, open(parallel, 'rb') as b:
        assert a.read() == b.read()

def test_bell_run_is_byte_reproducible(runner, tmp_path):
    first, second = str(tmp_path / 'first.csv'), str(tmp_path / 'second.csv')
    for out in (first, second):
        result = runner.invoke(cli, ['oracle', '--pairs', '10000', '--seed', '7', '--out', out])
        assert result.exit_code == 0, result.output
    with open(first, 'rb') as a, open(second, 'rb') as b:
        assert a.read() == b.read()

    frame = pd.read_csv(first)
    assert len(frame) == 4
    assert (frame[['n_pp', 'n_pm', 'n_mp', 'n_mm']].sum(axis=1) == 10000).all()
    assert read_manifest(first)['seed.bell'] == '7'

def test_oracle_table(runner, tmp_path):
    out = str(tmp_path / 'oracle.csv')
    result = runner.invoke(cli, ['oracle', '--samples', '10000', '--seed', '3', '--width', '0.6', '--out', out])
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert len(frame) == 32
    assert frame['particle'].tolist() == ['A'] * 16 + ['B'] * 16
    manifest = read_manifest(out)
    assert manifest['seed.monte_carlo'] == '3'
    assert 'disagreements' in manifest

def test_compare_reports_effective_width(runner, tmp_path):
    out = str(tmp_path / 'compare.csv')
    result = runner.invoke(cli, ['compare', '--alpha', '1', '--width', '0.3', '--theta-steps', '5',
                                 '--plot', '--out', out])
    assert result.exit_code == 0, result.output

    frame = pd.read_csv(out)
    assert len(frame) == 1
    assert 0.0 < frame.loc[0, 'width_eff'] < 0.3
    assert frame.loc[0, 'doppler_on_axis'] == pytest.approx(math.e)
    assert os.path.exists(str(tmp_path / 'compare.svg'))

if __name__ == "__main__":
    pytest.main([__file__, "-v"])
