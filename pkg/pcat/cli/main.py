"""
pcat 명령줄 인터페이스

종료 코드: 0 성공, 1 사용법/설정 오류, 2 수치 오류 (비수렴, 상쇄 가드, 내부 검증 실패).
진단 메시지는 모두 stderr 로 출력합니다.
"""

import functools
import logging
import math
import sys
from typing import Any, Callable, List, Optional, Sequence, Tuple

import click
import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table

from .. import __version__
from ..core.config_manager import ConfigManager
from ..exceptions import (
    CancellationError,
    ConsistencyError,
    PcatConfigurationError,
    PcatDomainError,
    PcatError,
    QuadratureError,
)
from ..numerics.quadrature import QuadratureSpec
from ..utils import performance_monitor, setup_pcat_logger
from .exporter import RunManifest, add_degree_column, export_frame, summary_rows
from .plotting import plot_curves
from .sweep import (
    SweepResult,
    bell_table,
    chsh_table,
    compare_table,
    fig1_table,
    fig2_table,
    fig3_table,
    oracle_table,
    sweep_table,
    theta_grid,
)

console = Console()
error_console = Console(stderr=True)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

class PcatGroup(click.Group):
    """click 의 기본 종료 코드를 pcat 규약(0/1/2)으로 바꾸는 명령 그룹"""

    def main(self, args: Optional[Sequence[str]] = None, prog_name: Optional[str] = None,
             complete_var: Optional[str] = None, standalone_mode: bool = True, **extra: Any) -> Any:
        argv = list(sys.argv[1:] if args is None else args)
        extra.setdefault('obj', {'argv': argv})
        try:
            rv = super().main(argv, prog_name, complete_var, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            error_console.print("[red]중단되었습니다[/red]")
            sys.exit(EXIT_USAGE)
        except (QuadratureError, CancellationError, ConsistencyError) as e:
            error_console.print(f"[red]수치 오류:[/red] {e}")
            sys.exit(EXIT_NUMERICAL)
        except (PcatConfigurationError, PcatDomainError, FileNotFoundError) as e:
            error_console.print(f"[red]설정 오류:[/red] {e}")
            sys.exit(EXIT_USAGE)
        except PcatError as e:
            error_console.print(f"[red]오류 발생:[/red] {e}")
            sys.exit(EXIT_USAGE)

        if not standalone_mode:
            return rv
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)

class RunContext:
    """한 명령 실행에 필요한 설정, 적분 설정, 출력 옵션"""

    def __init__(self, config: ConfigManager, spec: QuadratureSpec, jobs: int,
                 degrees: bool, plot: bool, logger: logging.Logger) -> None:
        self.config = config
        self.spec = spec
        self.jobs = jobs
        self.degrees = degrees
        self.plot = plot
        self.logger = logger

    def grid(self, theta_min: Optional[float], theta_max: Optional[float], steps: Optional[int],
             default_steps: Optional[int] = None) -> np.ndarray:
        return theta_grid(
            self.config.get('theta.min', 0.0) if theta_min is None else theta_min,
            self.config.get('theta.max', math.pi / 2) if theta_max is None else theta_max,
            steps or default_steps or int(self.config.get('theta.steps', 181)),
        )

    def emit(self, result: SweepResult, output_path: str, manifest: RunManifest, title: str = '',
             ylabel: str = 'F(ϑ)') -> str:
        frame = add_degree_column(result.frame) if self.degrees else result.frame
        manifest.max_est_error = result.max_est_error
        manifest.extra.update(result.extra)

        path = export_frame(
            frame, output_path, manifest,
            significant_digits=int(self.config.get('output.significant_digits', 12)),
            line_terminator=self.config.get('output.line_terminator', '\n'),
            encoding=self.config.get('output.encoding', 'utf-8'),
        )
        if self.plot and result.curves:
            plot_curves(result.plot_axis(), result.curves, path, title, ylabel, self.degrees)

        _print_summary(path, frame, manifest)
        return path

def _print_summary(path: str, frame: pd.DataFrame, manifest: RunManifest) -> None:
    table = Table(title=f"{manifest.command} 결과")
    table.add_column("항목", style="cyan")
    table.add_column("값", style="green")
    table.add_row("파일", path)
    for key, value in summary_rows(frame).items():
        table.add_row(key, value)
    for key, value in sorted(manifest.extra.items()):
        table.add_row(str(key), str(value))
    console.print(table)

def _parse_floats(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(',') if v.strip()]
    except ValueError:
        raise click.BadParameter(f"쉼표로 구분한 실수 목록이어야 합니다: {value}")

def common_options(func: Callable) -> Callable:
    """적분 설정, 출력 형식, 설정 파일, 로그 수준 옵션"""
    options = [
        click.option('--radial-nodes', type=click.IntRange(min=1), default=None, help='반지름 방향 노드 수'),
        click.option('--azimuthal-nodes', type=click.IntRange(min=1), default=None, help='방위각 방향 노드 수'),
        click.option('--tol', type=float, default=None, help='노드 배가 오차 목표'),
        click.option('--jobs', type=click.IntRange(min=1), default=1, show_default=True, help='병렬 작업자 수'),
        click.option('--degrees', is_flag=True, help='theta_deg 열 추가'),
        click.option('--plot', is_flag=True, help='SVG 그래프도 저장'),
        click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
                     help='설정 파일 경로'),
        click.option('--verbose', '-v', is_flag=True, help='상세 로그 출력'),
    ]

    @functools.wraps(func)
    def wrapper(*args: Any, radial_nodes: Optional[int], azimuthal_nodes: Optional[int], tol: Optional[float],
                jobs: int, degrees: bool, plot: bool, config_path: Optional[str], verbose: bool,
                **kwargs: Any) -> Any:
        logger = setup_pcat_logger('pcat', logging.DEBUG if verbose else logging.INFO)
        for handler in logger.handlers:
            if isinstance(handler, logging.StreamHandler):
                handler.setStream(sys.stderr)

        config = ConfigManager(config_path)
        base = QuadratureSpec.from_config(config)
        spec = QuadratureSpec(
            n_radial=radial_nodes or base.n_radial,
            n_azimuthal=azimuthal_nodes or base.n_azimuthal,
            r_max_in_widths=base.r_max_in_widths,
            target_tol=base.target_tol if tol is None else tol,
            max_doublings=base.max_doublings,
        )
        run = RunContext(config, spec, jobs, degrees, plot, logger)
        return func(run, *args, **kwargs)

    decorated: Callable = wrapper
    for option in reversed(options):
        decorated = option(decorated)
    return decorated

def theta_options(func: Callable) -> Callable:
    func = click.option('--theta-steps', type=click.IntRange(min=1), default=None, help='ϑ 격자 점 수')(func)
    func = click.option('--theta-max', type=float, default=None, help='ϑ 최댓값 (rad)')(func)
    func = click.option('--theta-min', type=float, default=None, help='ϑ 최솟값 (rad)')(func)
    return func

def _manifest(**parameters: Any) -> RunManifest:
    ctx = click.get_current_context()
    root = ctx.find_root().obj or {}
    return RunManifest(command=f"pcat {ctx.info_name}",
                       parameters={k: v for k, v in parameters.items() if v is not None},
                       arguments=list(root.get('argv', [])))

@click.group(cls=PcatGroup)
@click.version_option(__version__, prog_name='pcat')
def cli() -> None:
    """pcat - 움직이는 검출기의 편광 상관(CHSH) 계산 도구"""
    pass

@cli.command('chsh')
@click.option('--alpha', type=float, default=0.0, show_default=True, help='검출기 A 의 rapidity α')
@click.option('--width', type=float, default=0.0, show_default=True, help='정규화된 파동 묶음 폭 W')
@theta_options
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default='chsh.csv', show_default=True)
@common_options
def cmd_chsh(run: RunContext, alpha: float, width: float, theta_min: Optional[float], theta_max: Optional[float],
             theta_steps: Optional[int], output_path: str) -> None:
    """F(ϑ) 곡선 계산"""
    grid = run.grid(theta_min, theta_max, theta_steps)
    manifest = _manifest(alpha=alpha, width=width, theta_min=float(grid[0]), theta_max=float(grid[-1]),
                         theta_steps=len(grid))
    manifest.spec = run.spec

    with performance_monitor("CHSH 곡선 계산", run.logger):
        result = chsh_table(grid, alpha, width, run.spec)
    run.emit(result, output_path, manifest, title=f"α={alpha:g}, W={width:g}")

@cli.command('fig1')
@theta_options
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default='fig1.csv', show_default=True)
@common_options
def cmd_fig1(run: RunContext, theta_min: Optional[float], theta_max: Optional[float], theta_steps: Optional[int],
             output_path: str) -> None:
    """큰 α 극한에서 폭별 F(ϑ)"""
    cfg = run.config
    grid = run.grid(theta_min, theta_max, theta_steps)
    widths = cfg.get('figures.fig1.widths', [0.0, 0.3, 0.6, 1.0])
    alpha = float(cfg.get('figures.fig1.alpha', 15.0))
    manifest = _manifest(widths=widths, alpha=alpha, theta_steps=len(grid))
    manifest.spec = run.spec

    with performance_monitor("fig1 계산", run.logger):
        result = fig1_table(
            grid, widths, alpha,
            float(cfg.get('figures.fig1.alpha_saturation', 20.0)),
            float(cfg.get('figures.fig1.alpha_negative', -15.0)),
            run.spec, run.jobs,
            float(cfg.get('figures.fig1.saturation_tol', 1e-6)),
        )
    run.emit(result, output_path, manifest, title=f"α={alpha:g}")

@cli.command('fig2')
@theta_options
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default='fig2.csv', show_default=True)
@common_options
def cmd_fig2(run: RunContext, theta_min: Optional[float], theta_max: Optional[float], theta_steps: Optional[int],
             output_path: str) -> None:
    """고정 폭에서 α 별 F(ϑ)"""
    cfg = run.config
    grid = run.grid(theta_min, theta_max, theta_steps)
    width = float(cfg.get('figures.fig2.width', 0.6))
    alphas = cfg.get('figures.fig2.alphas', [2.0, 1.0, 0.0, -1.0, -2.0, -4.0])
    manifest = _manifest(width=width, alphas=alphas, theta_steps=len(grid))
    manifest.spec = run.spec

    with performance_monitor("fig2 계산", run.logger):
        result = fig2_table(grid, width, alphas, run.spec, run.jobs)
    run.emit(result, output_path, manifest, title=f"W={width:g}")

@cli.command('fig3')
@click.option('--alpha', type=float, default=None, help='α (기본값: 설정 파일)')
@click.option('--width', type=float, default=None, help='W (기본값: 설정 파일)')
@theta_options
@click.option('--stability', is_flag=True, help='노드를 배가해 다시 계산하고 유효숫자 2자리 일치 여부 기록')
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default='fig3.csv', show_default=True)
@common_options
def cmd_fig3(run: RunContext, alpha: Optional[float], width: Optional[float], theta_min: Optional[float],
             theta_max: Optional[float], theta_steps: Optional[int], stability: bool, output_path: str) -> None:
    """ΔF(ϑ) = F(ϑ; α, W) - F(ϑ; 0, W)"""
    cfg = run.config
    alpha = float(cfg.get('figures.fig3.alpha', 2.6e-5)) if alpha is None else alpha
    width = float(cfg.get('figures.fig3.width', 1e-3)) if width is None else width
    grid = run.grid(theta_min, theta_max, theta_steps, int(cfg.get('figures.fig3.steps', 19)))
    manifest = _manifest(alpha=alpha, width=width, theta_steps=len(grid), stability=stability)
    manifest.spec = run.spec

    with performance_monitor("fig3 계산", run.logger):
        result = fig3_table(grid, alpha, width, run.spec,
                            float(cfg.get('figures.fig3.guard_fraction', 0.1)), stability)
    run.emit(result, output_path, manifest, title=f"α={alpha:g}, W={width:g}", ylabel='ΔF(ϑ)')

@cli.command('oracle')
@click.option('--samples', type=click.IntRange(min=10_000), default=None, help='Monte Carlo 표본 수')
@click.option('--seed', type=int, default=None, help='난수 시드')
@click.option('--alpha', type=float, default=0.0, show_default=True)
@click.option('--width', type=float, default=0.6, show_default=True)
@click.option('--pairs', type=click.IntRange(min=1), default=None, help='지정하면 Bell 실험 시뮬레이션 모드')
@click.option('--theta', type=float, default=math.pi / 6, show_default=True, help='Bell 실험 모드의 ϑ')
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default='oracle.csv', show_default=True)
@common_options
def cmd_oracle(run: RunContext, samples: Optional[int], seed: Optional[int], alpha: float, width: float,
               pairs: Optional[int], theta: float, output_path: str) -> None:
    """Monte Carlo 교차 검증 또는 유한 N Bell 실험"""
    cfg = run.config
    seed = int(cfg.get('oracle.seed', 7)) if seed is None else seed

    if pairs is not None:
        manifest = _manifest(pairs=pairs, theta=theta)
        manifest.seeds['bell'] = seed
        with performance_monitor("Bell 실험 시뮬레이션", run.logger):
            result = bell_table(theta, pairs, seed)
        run.emit(result, output_path, manifest)
        return

    samples = int(cfg.get('oracle.samples', 10_000_000)) if samples is None else samples
    manifest = _manifest(samples=samples, alpha=alpha, width=width)
    manifest.spec = run.spec
    manifest.seeds['monte_carlo'] = seed
    with performance_monitor("Monte Carlo 교차 검증", run.logger):
        result = oracle_table(alpha, width, samples, seed,
                              int(cfg.get('oracle.shard_size', 500_000)), run.spec,
                              float(cfg.get('oracle.z_threshold', 3.0)))
    run.emit(result, output_path, manifest)

@cli.command('sweep')
@click.option('--widths', callback=_parse_floats, default='0,0.3,0.6,1.0', show_default=True,
              help='쉼표로 구분한 W 목록')
@click.option('--alphas', callback=_parse_floats, default='0', show_default=True, help='쉼표로 구분한 α 목록')
@click.option('--theta', 'thetas', callback=_parse_floats, default=None, help='쉼표로 구분한 ϑ 목록 (기본값: π/6)')
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default='sweep.csv', show_default=True)
@common_options
def cmd_sweep(run: RunContext, widths: List[float], alphas: List[float], thetas: Optional[List[float]],
              output_path: str) -> None:
    """(W, α) 격자 위의 F(ϑ) 표"""
    thetas = thetas or [math.pi / 6]
    manifest = _manifest(widths=widths, alphas=alphas, thetas=thetas, jobs=run.jobs)
    manifest.spec = run.spec

    with performance_monitor("파라미터 스윕", run.logger):
        result = sweep_table(widths, alphas, thetas, run.spec, run.jobs)
    run.emit(result, output_path, manifest)

@cli.command('compare')
@click.option('--alpha', type=float, required=True, help='검출기 A 의 rapidity α')
@click.option('--width', type=float, required=True, help='정규화된 파동 묶음 폭 W')
@click.option('--theta', type=float, default=math.pi / 6, show_default=True, help='W_eff 를 맞출 ϑ')
@theta_options
@click.option('--out', 'output_path', type=click.Path(dir_okay=False), default='compare.csv', show_default=True)
@common_options
def cmd_compare(run: RunContext, alpha: float, width: float, theta: float, theta_min: Optional[float],
                theta_max: Optional[float], theta_steps: Optional[int], output_path: str) -> None:
    """정지 검출기에서 같은 F(ϑ) 를 주는 유효 폭 W_eff 보고"""
    grid = run.grid(theta_min, theta_max, theta_steps)
    manifest = _manifest(alpha=alpha, width=width, theta=theta, theta_steps=len(grid))
    manifest.spec = run.spec

    with performance_monitor("유효 폭 계산", run.logger):
        result = compare_table(alpha, width, theta, grid, run.spec)
    run.emit(result, output_path, manifest, title=f"W_eff={result.extra['width_eff']:.4g}")

def main(argv: Optional[Tuple[str, ...]] = None) -> None:
    cli.main(args=argv, prog_name='pcat')

if __name__ == '__main__':
    main()
