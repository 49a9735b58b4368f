from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import typer

from cli.schemas.run_config import RunConfig
from exceptions import create_validation_error
from src.data.dataset import LabeledDataset, split_by_identity, split_query_gallery
from src.embedder.checkpoint import read_checkpoint
from src.metric.types import EmbeddingBatch
from src.retrieval.evaluator import EvalMode, RetrievalReport, evaluate
from src.retrieval.report import render_table, write_report_csv

from .common import (
    ConfigOption,
    SetOption,
    handle_errors,
    load_config,
    load_or_generate,
    output_path,
)


def _embedded_split(cfg: RunConfig) -> Tuple[EmbeddingBatch, EmbeddingBatch]:
    """평가용 샘플을 query/gallery 로 나누고 (체크포인트가 있으면) 임베딩"""
    dataset = load_or_generate(cfg)
    _, heldout = split_by_identity(dataset, cfg.holdout)
    query, gallery = split_query_gallery(heldout, cfg.queries)

    if cfg.checkpoint is None:
        return query.to_batch(), gallery.to_batch()

    model = read_checkpoint(cfg.checkpoint, normalize_output=cfg.normalize)
    if model.input_dim != dataset.dim:
        raise create_validation_error(
            f"checkpoint expects {model.input_dim}-dim inputs, data has {dataset.dim}",
            field_name="input_dim",
            field_value=dataset.dim,
            expected=str(model.input_dim),
        )

    def _embed(part: LabeledDataset) -> EmbeddingBatch:
        return EmbeddingBatch(model.embed(part.features), part.labels)

    return _embed(query), _embed(gallery)


def _run(cfg: RunConfig, modes: Sequence[EvalMode], default_name: str) -> None:
    queries, gallery = _embedded_split(cfg)
    reports: List[RetrievalReport] = [
        evaluate(queries, gallery, mode, cfg.lam) for mode in modes
    ]
    path = output_path(cfg, default_name)
    write_report_csv(reports, path, cfg.metadata())
    typer.echo(render_table(reports))
    typer.echo(f"report: {path}")


@handle_errors
def eval_command(
    config: Optional[Path] = ConfigOption,
    set_values: Optional[List[str]] = SetOption,
    data: Optional[Path] = typer.Option(None, help="데이터 파일 (없으면 합성)"),
    checkpoint: Optional[Path] = typer.Option(None, help="체크포인트 (없으면 데이터를 임베딩으로 간주)"),
    mode: Optional[EvalMode] = typer.Option(None, help="euclidean | dca_rerank"),
    lam: Optional[float] = typer.Option(None, "--lambda", help="dca_rerank 의 λ"),
    seed: Optional[int] = typer.Option(None, help="시드 (합성 데이터)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="리포트 CSV"),
):
    """query/gallery 검색 평가 (mAP, CMC)"""
    cfg = load_config(
        config,
        set_values,
        data=str(data) if data else None,
        checkpoint=str(checkpoint) if checkpoint else None,
        mode=mode,
        lam=lam,
        seed=seed,
        output=str(out) if out else None,
    )
    _run(cfg, [cfg.mode], "eval.csv")


@handle_errors
def rerank(
    config: Optional[Path] = ConfigOption,
    set_values: Optional[List[str]] = SetOption,
    data: Optional[Path] = typer.Option(None, help="데이터 파일 (없으면 합성)"),
    checkpoint: Optional[Path] = typer.Option(None, help="체크포인트 (없으면 데이터를 임베딩으로 간주)"),
    lam: Optional[float] = typer.Option(None, "--lambda", help="λ"),
    seed: Optional[int] = typer.Option(None, help="시드 (합성 데이터)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="리포트 CSV"),
):
    """Euclidean 순위와 DCA 재순위를 나란히 평가"""
    cfg = load_config(
        config,
        set_values,
        data=str(data) if data else None,
        checkpoint=str(checkpoint) if checkpoint else None,
        lam=lam,
        seed=seed,
        output=str(out) if out else None,
    )
    _run(cfg, [EvalMode.EUCLIDEAN, EvalMode.DCA_RERANK], "rerank.csv")
