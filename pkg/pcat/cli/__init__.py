"""
pcat 명령줄 인터페이스 패키지입니다.
"""

from .exporter import RunManifest, export_frame, read_manifest
from .main import cli, main

__all__ = ['RunManifest', 'export_frame', 'read_manifest', 'cli', 'main']
