"""
설정 관리 기능을 제공하는 패키지입니다.
"""

from .config_manager import ConfigManager

__all__ = ['ConfigManager']
