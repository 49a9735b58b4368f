"""
명령 공통 유틸리티: 설정 해석, 오류 → 종료 코드, 아티팩트 저장
"""

import functools
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import typer

from cli.schemas.run_config import RunConfig, parse_overrides, resolve_config
from config.settings import settings
from exceptions import DCABaseException, DCAInvariantError
from src.data.dataset import LabeledDataset
from src.data.formats import (
    load_dataset,
    write_embeddings,
    write_embeddings_csv,
    write_metadata,
)
from src.data.synthetic import generate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USER_ERROR = 1
EXIT_INVARIANT = 2

ConfigOption = typer.Option(None, "--config", "-c", help="`key = value` 설정 파일")
SetOption = typer.Option(None, "--set", help="임의 설정 덮어쓰기 (key=value, 반복 가능)")


def handle_errors(func: Callable) -> Callable:
    """예외를 한 줄 진단과 종료 코드로 변환 (도메인 오류 1, 불변식 위반과 예상 밖 오류 2)"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DCAInvariantError as e:
            logger.debug("invariant violation", exc_info=True)
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(code=EXIT_INVARIANT)
        except DCABaseException as e:
            logger.debug("command failed", exc_info=True)
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(code=EXIT_USER_ERROR)
        except typer.Exit:
            raise
        except Exception as e:
            logger.debug("unexpected failure", exc_info=True)
            first_line = str(e).splitlines()[0] if str(e) else ""
            typer.echo(f"error: [INTERNAL_ERROR] {type(e).__name__}: {first_line}", err=True)
            raise typer.Exit(code=EXIT_INVARIANT)

    return wrapper


def load_config(
    config_file: Optional[Path], set_values: Optional[List[str]], **flags: Any
) -> RunConfig:
    """기본값 < 설정 파일 < --set < 명시 플래그"""
    overrides: Dict[str, Any] = dict(parse_overrides(set_values))
    overrides.update({k: v for k, v in flags.items() if v is not None})
    cfg = resolve_config(config_file, overrides)
    logger.debug(f"resolved config: {cfg.metadata()}")
    return cfg


def output_path(cfg: RunConfig, default_name: str) -> Path:
    if cfg.output:
        return Path(cfg.output)
    return Path(settings.output_dir) / default_name


def load_or_generate(cfg: RunConfig) -> LabeledDataset:
    """data 경로가 있으면 읽고, 없으면 설정대로 합성"""
    if cfg.data:
        return load_dataset(cfg.data)
    return generate(cfg.synth_spec())


def save_dataset(dataset: LabeledDataset, path: Path, metadata: Dict[str, Any]) -> None:
    """확장자가 .csv 면 주석 헤더 CSV, 아니면 바이너리 + 사이드카"""
    if path.suffix.lower() == ".csv":
        write_embeddings_csv(dataset.features, dataset.labels, path, metadata)
    else:
        write_embeddings(dataset.features, dataset.labels, path)
        write_metadata(path, metadata)
