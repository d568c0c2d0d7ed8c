#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
설정 파일을 관리하는 모듈
"""

import logging
import os
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILENAME = 'settings.yaml'

class ConfigManager:
    def __init__(self, config_path: Optional[str] = None) -> None:
        self.config_path = config_path or self._get_default_path()
        self.config_data = self._load_config()

    def _get_default_path(self) -> str:
        return os.path.join(os.path.dirname(os.path.abspath(__file__)), DEFAULT_CONFIG_FILENAME)

    def _load_config(self) -> Dict[str, Any]:
        if not os.path.exists(self.config_path):
            raise FileNotFoundError(f"Config file not found: {self.config_path}")

        with open(self.config_path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)

        logger.debug(f"설정 파일 로드: {self.config_path}")
        return data or {}

    def get(self, key: str, default: Any = None) -> Any:
        """
        설정값을 가져옵니다.

        Args:
            key (str): 설정 키 (점으로 구분된 경로)
            default: 기본값

        Returns:
            설정값 또는 기본값
        """
        value: Any = self.config_data

        try:
            for k in key.split('.'):
                value = value[k]
            return value
        except (KeyError, TypeError):
            logger.warning(f"설정 키 '{key}'를 찾을 수 없습니다. 기본값 '{default}'를 사용합니다.")
            return default

    def all(self) -> Dict[str, Any]:
        return self.config_data
