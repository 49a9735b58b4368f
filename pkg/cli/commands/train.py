from pathlib import Path
from typing import List, Optional

import pandas as pd
import typer

from src.data.dataset import split_by_identity
from src.data.formats import comment_header, write_metadata, write_text
from src.embedder.checkpoint import write_checkpoint
from src.embedder.model import MlpModel
from src.embedder.trainer import train as train_embedder
from src.metric.losses import LossVariant

from .common import (
    ConfigOption,
    SetOption,
    handle_errors,
    load_config,
    load_or_generate,
    output_path,
)

CHECKPOINT_NAME = "model.bin"
HISTORY_NAME = "history.csv"
HISTORY_COLUMNS = ["step", "loss", "active_fraction", "lr"]


@handle_errors
def train(
    config: Optional[Path] = ConfigOption,
    set_values: Optional[List[str]] = SetOption,
    data: Optional[Path] = typer.Option(None, help="학습 데이터 (없으면 합성)"),
    loss: Optional[LossVariant] = typer.Option(None, help="손실 종류"),
    margin: Optional[float] = typer.Option(None, help="margin α"),
    lam: Optional[float] = typer.Option(None, "--lambda", help="λ"),
    steps: Optional[int] = typer.Option(None, help="학습 step 수"),
    lr: Optional[float] = typer.Option(None, help="학습률"),
    dims: Optional[int] = typer.Option(None, help="임베딩 차원"),
    seed: Optional[int] = typer.Option(None, help="시드"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="출력 디렉터리"),
):
    """
    MLP 임베더 학습

    identity 마다 마지막 holdout 개 샘플은 평가용으로 남기고 나머지로 학습합니다.
    출력: <out>/model.bin (+ .meta.json), <out>/history.csv
    """
    cfg = load_config(
        config,
        set_values,
        data=str(data) if data else None,
        loss=loss,
        margin=margin,
        lam=lam,
        steps=steps,
        lr=lr,
        dims=dims,
        seed=seed,
        output=str(out) if out else None,
    )
    metadata = cfg.metadata()
    dataset = load_or_generate(cfg)
    train_set, _ = split_by_identity(dataset, cfg.holdout)

    model = MlpModel.initialize(
        input_dim=dataset.dim,
        hidden=cfg.hidden,
        output_dim=cfg.dims,
        seed=cfg.seed,
        normalize_output=cfg.normalize,
    )
    result = train_embedder(train_set, model, cfg.train_config())

    out_dir = output_path(cfg, "train")
    checkpoint = out_dir / CHECKPOINT_NAME
    write_checkpoint(result.model, checkpoint)
    write_metadata(checkpoint, metadata)

    history = pd.DataFrame(
        [[r.step, r.loss, r.active_fraction, r.lr] for r in result.history],
        columns=HISTORY_COLUMNS,
    )
    write_text(out_dir / HISTORY_NAME, comment_header(metadata) + history.to_csv(index=False))

    final = f"{result.losses[-1]:.6f}" if result.history else "n/a"
    typer.echo(f"checkpoint: {checkpoint}")
    typer.echo(f"final loss: {final}")
