"""
결과 곡선을 SVG 로 그리는 모듈입니다 (--plot 옵션).
"""

import logging
import os
from typing import Mapping, Sequence

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

logger = logging.getLogger(__name__)

def plot_curves(theta: Sequence[float], curves: Mapping[str, Sequence[float]], output_path: str,
                title: str = '', ylabel: str = 'F(ϑ)', degrees: bool = False) -> str:
    """ϑ 에 대한 여러 곡선을 하나의 그림으로 저장합니다.

    Args:
        theta: 가로축 (라디안)
        curves: 범례 이름 → 값
        output_path: 저장 경로 (.svg 가 아니면 확장자를 붙입니다)
        degrees: 가로축을 도 단위로 표시
    """
    if not output_path.lower().endswith('.svg'):
        output_path = os.path.splitext(output_path)[0] + '.svg'

    x = np.degrees(np.asarray(theta, dtype=float)) if degrees else np.asarray(theta, dtype=float)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        for label, values in curves.items():
            ax.plot(x, np.asarray(values, dtype=float), label=label)
        ax.set_xlabel('ϑ [deg]' if degrees else 'ϑ [rad]')
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc='best')
        fig.tight_layout()
        fig.savefig(output_path, format='svg')
    finally:
        plt.close(fig)

    logger.info(f"그래프 저장: {output_path}")
    return output_path
