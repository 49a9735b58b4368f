import logging
import logging.config
import os
from typing import Optional

import yaml
from colorlog import ColoredFormatter

from config.settings import settings

_CONSOLE_FORMAT = "%(log_color)s%(levelname)-8s%(reset)s | %(asctime)s | %(name)s | %(message)s"


def _fallback_handler() -> logging.Handler:
    """YAML 설정이 없을 때 사용하는 컬러 콘솔 핸들러"""
    handler = logging.StreamHandler()
    handler.setFormatter(
        ColoredFormatter(
            _CONSOLE_FORMAT,
            datefmt="%Y-%m-%d %H:%M:%S",
            log_colors={
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "bold_red",
            },
        )
    )
    return handler


def setup_logging(level: Optional[str] = None) -> None:
    """
    log_config.yaml 을 읽어 로깅을 구성합니다.

    Args:
        level: root 로그 레벨. 없으면 DCA_LOG_LEVEL 환경변수 값을 사용
    """
    level = (level or settings.log_level).upper()
    path = settings.log_config_path

    if os.path.exists(path):
        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
        config.setdefault("root", {})["level"] = level
        logging.config.dictConfig(config)
    else:
        root = logging.getLogger()
        if not root.handlers:
            root.addHandler(_fallback_handler())
        root.setLevel(level)
