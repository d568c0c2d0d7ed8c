"""
계산 결과를 CSV 와 실행 매니페스트(sidecar)로 저장하는 모듈입니다.
"""

import logging
import os
import shlex
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional

import numpy as np
import pandas as pd

from .. import __version__
from ..exceptions import PcatConfigurationError
from ..numerics.quadrature import QuadratureSpec
from ..validators import PcatValidator

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = '.manifest'

@dataclass
class RunManifest:
    """데이터 파일 하나에 대응하는 실행 기록

    Attributes:
        command: 실행한 명령 경로 (예: 'pcat chsh')
        parameters: 명령 옵션 값
        spec: 적분 설정 (없으면 생략)
        seeds: 난수 시드
        max_est_error: 적분 est_error 최댓값
        extra: 명령별 추가 항목 (포화 확인값, 안정성 플래그 등)
        arguments: 프로그램 이름 뒤의 실제 명령줄 인자 (재실행용)
    """

    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    spec: Optional[QuadratureSpec] = None
    seeds: Dict[str, int] = field(default_factory=dict)
    max_est_error: Optional[float] = None
    extra: Dict[str, Any] = field(default_factory=dict)
    arguments: List[str] = field(default_factory=list)
    started_at: float = field(default_factory=time.perf_counter)

    def command_line(self) -> str:
        if not self.arguments:
            return self.command
        return shlex.join([self.command.split()[0]] + list(self.arguments))

    def to_lines(self, data_file: str) -> List[str]:
        lines = [
            f"command={self.command}",
            f"command_line={self.command_line()}",
            f"version={__version__}",
            f"data_file={os.path.basename(data_file)}",
        ]
        lines += [f"param.{key}={_format_value(value)}" for key, value in sorted(self.parameters.items())]
        if self.spec is not None:
            lines += [f"quadrature.{key}={_format_value(value)}" for key, value in self.spec.as_dict().items()]
        lines += [f"seed.{key}={value}" for key, value in sorted(self.seeds.items())]
        if self.max_est_error is not None:
            lines.append(f"max_est_error={self.max_est_error:.6e}")
        lines += [f"{key}={_format_value(value)}" for key, value in sorted(self.extra.items())]
        lines.append(f"wall_clock_seconds={time.perf_counter() - self.started_at:.3f}")
        return lines

def _format_value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ','.join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)

def manifest_path(data_file: str) -> str:
    return data_file + MANIFEST_SUFFIX

def add_degree_column(frame: pd.DataFrame, column: str = 'theta_rad') -> pd.DataFrame:
    """theta_rad 바로 뒤에 표시용 theta_deg 열을 넣습니다."""
    if column not in frame.columns:
        return frame
    frame = frame.copy()
    frame.insert(frame.columns.get_loc(column) + 1, 'theta_deg', np.degrees(frame[column].to_numpy()))
    return frame

def export_frame(frame: pd.DataFrame, output_path: str, manifest: RunManifest,
                 significant_digits: int = 12, line_terminator: str = '\n',
                 encoding: str = 'utf-8') -> str:
    """DataFrame 을 CSV 로, 매니페스트를 <file>.manifest 로 저장합니다.

    Args:
        frame: 저장할 결과표
        output_path: CSV 경로
        manifest: 실행 기록
        significant_digits: 실수 유효숫자 (끝자리 0 유지)

    Returns:
        str: 저장된 CSV 경로

    Raises:
        PcatConfigurationError: 잘못된 경로 또는 빈 결과표
    """
    output_path = PcatValidator.validate_file_path(output_path)
    significant_digits = PcatValidator.validate_positive_int(significant_digits, "significant_digits")
    if frame.empty:
        raise PcatConfigurationError(f"저장할 결과가 없습니다: {output_path}")

    # 출력 디렉토리 확인 및 생성
    output_dir = os.path.dirname(output_path)
    if output_dir and not os.path.exists(output_dir):
        os.makedirs(output_dir)
        logger.info(f"출력 디렉토리 생성: {output_dir}")

    frame.to_csv(output_path, index=False, float_format=f"%#.{significant_digits}g",
                 lineterminator=line_terminator, encoding=encoding)

    with open(manifest_path(output_path), 'w', encoding=encoding, newline='') as f:
        f.write(line_terminator.join(manifest.to_lines(output_path)) + line_terminator)

    logger.info(f"출력 파일: {output_path} ({len(frame)}행)")
    return output_path

def read_manifest(path: str) -> Dict[str, str]:
    """key=value 매니페스트를 dict 로 읽습니다 (CSV 경로나 매니페스트 경로 모두 허용)."""
    if not path.endswith(MANIFEST_SUFFIX):
        path = manifest_path(path)
    entries: Dict[str, str] = {}
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            line = line.rstrip('\n')
            if not line:
                continue
            key, _, value = line.partition('=')
            entries[key] = value
    return entries

def frame_max(frame: pd.DataFrame, prefix: str = 'est_error') -> Optional[float]:
    """prefix 로 시작하는 열들의 최댓값"""
    columns = [c for c in frame.columns if str(c).startswith(prefix)]
    if not columns:
        return None
    return float(np.nanmax(frame[columns].to_numpy(dtype=float)))

def summary_rows(frame: pd.DataFrame) -> Mapping[str, str]:
    rows = {'rows': str(len(frame)), 'columns': ', '.join(map(str, frame.columns))}
    max_error = frame_max(frame)
    if max_error is not None:
        rows['max est_error'] = f"{max_error:.3e}"
    return rows
