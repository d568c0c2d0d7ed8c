"""
pcat 입력 검증 유틸리티
"""

import math
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .exceptions import PcatConfigurationError, PcatDomainError

PARTICLES = ('A', 'B')

class PcatValidator:
    """물리 파라미터 및 실행 옵션 검증 클래스"""

    @staticmethod
    def validate_finite(value: float, name: str) -> float:
        """유한한 실수인지 검증

        Args:
            value: 검증할 값
            name: 오류 메시지에 표시할 이름

        Returns:
            float: 검증된 값

        Raises:
            PcatConfigurationError: 숫자가 아니거나 NaN/inf인 경우
        """
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise PcatConfigurationError(f"{name}은(는) 실수여야 합니다: {value!r}")

        if not math.isfinite(value):
            raise PcatConfigurationError(f"{name}은(는) 유한한 값이어야 합니다: {value}")

        return value

    @staticmethod
    def validate_width(width: float, allow_zero: bool = True) -> float:
        """정규화된 파동 묶음 폭 W 검증

        Args:
            width: W = w/|p|
            allow_zero: W = 0 (평면파 극한) 허용 여부

        Returns:
            float: 검증된 폭

        Raises:
            PcatDomainError: 음수이거나 (allow_zero=False일 때) 0인 경우
        """
        width = PcatValidator.validate_finite(width, "width")

        if width < 0 or (width == 0 and not allow_zero):
            bound = "0 이상" if allow_zero else "0보다 큰 값"
            raise PcatDomainError(f"width는 {bound}이어야 합니다: {width}")

        return width

    @staticmethod
    def validate_velocity(velocity: float) -> float:
        """광속 단위 속도 검증 (|v| < 1)

        Raises:
            PcatDomainError: |v| >= 1인 경우
        """
        velocity = PcatValidator.validate_finite(velocity, "velocity")

        if abs(velocity) >= 1.0:
            raise PcatDomainError(f"속도는 |v| < 1 이어야 합니다: {velocity}")

        return velocity

    @staticmethod
    def validate_particle(particle: str) -> str:
        """광자 식별자 검증 ('A' 또는 'B')"""
        if not particle or not isinstance(particle, str):
            raise PcatConfigurationError("particle은 비어있지 않은 문자열이어야 합니다")

        particle = particle.strip().upper()

        if particle not in PARTICLES:
            raise PcatConfigurationError(
                f"지원하지 않는 광자 식별자입니다: {particle}. "
                f"지원되는 값: {', '.join(PARTICLES)}"
            )

        return particle

    @staticmethod
    def validate_positive_int(value: int, name: str, minimum: int = 1) -> int:
        """최솟값 이상의 정수인지 검증

        Raises:
            PcatConfigurationError: 정수가 아니거나 minimum보다 작은 경우
        """
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise PcatConfigurationError(f"{name}은(는) 정수여야 합니다: {value!r}")

        if value < minimum:
            raise PcatConfigurationError(f"{name}은(는) {minimum} 이상이어야 합니다: {value}")

        return int(value)

    @staticmethod
    def validate_theta_grid(theta_grid: Iterable[float]) -> np.ndarray:
        """ϑ 격자 검증 (비어있지 않고 순증가)

        Returns:
            np.ndarray: 검증된 1차원 격자

        Raises:
            PcatConfigurationError: 비었거나 증가하지 않는 경우
        """
        grid = np.asarray(list(theta_grid), dtype=float)

        if grid.ndim != 1 or grid.size == 0:
            raise PcatConfigurationError("theta 격자는 비어있지 않은 1차원 배열이어야 합니다")

        if not np.all(np.isfinite(grid)):
            raise PcatConfigurationError("theta 격자에 NaN/inf가 포함되어 있습니다")

        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise PcatConfigurationError("theta 격자는 순증가해야 합니다")

        return grid

    @staticmethod
    def validate_float_list(values: Sequence[float], name: str) -> List[float]:
        """쉼표 구분 목록 등에서 온 실수 목록 검증"""
        if not values:
            raise PcatConfigurationError(f"{name} 목록이 비어 있습니다")
        return [PcatValidator.validate_finite(v, name) for v in values]

    @staticmethod
    def validate_file_path(file_path: Optional[str]) -> str:
        """파일 경로 검증

        Raises:
            PcatConfigurationError: 잘못된 파일 경로인 경우
        """
        if not file_path or not isinstance(file_path, str):
            raise PcatConfigurationError("file_path는 비어있지 않은 문자열이어야 합니다")

        file_path = file_path.strip()

        if not file_path:
            raise PcatConfigurationError("file_path는 빈 문자열일 수 없습니다")

        # 위험한 문자 검사
        for char in ['<', '>', '"', '|', '?', '*']:
            if char in file_path:
                raise PcatConfigurationError(f"파일 경로에 허용되지 않는 문자가 포함되어 있습니다: {char}")

        return file_path
