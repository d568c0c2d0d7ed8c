"""
수치 적분 모듈을 제공하는 패키지입니다.
"""

from .quadrature import IntegralResult, QuadratureSpec, integrate_polar, polar_nodes

__all__ = ['IntegralResult', 'QuadratureSpec', 'integrate_polar', 'polar_nodes']
