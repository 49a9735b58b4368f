from pathlib import Path
from typing import List, Optional

import numpy as np
import typer

from cli.schemas.run_config import RunConfig
from exceptions import create_numeric_error
from src.embedder.gradcheck import check_parameter_gradients
from src.embedder.model import MlpModel
from src.metric.gradients import FiniteDifferenceReport, finite_difference_check
from src.metric.losses import LossVariant
from src.metric.types import EmbeddingBatch

from .common import ConfigOption, SetOption, handle_errors, load_config


def _random_check(cfg: RunConfig, rng: np.random.Generator, end_to_end: bool) -> FiniteDifferenceReport:
    labels = np.repeat(np.arange(cfg.check_P), cfg.check_K)
    features = rng.standard_normal((labels.size, cfg.check_dim))
    loss_cfg = cfg.loss_config()
    if not end_to_end:
        return finite_difference_check(
            EmbeddingBatch(features, labels), loss_cfg, h=cfg.h, n_jobs=cfg.n_jobs
        )
    model = MlpModel.initialize(
        input_dim=cfg.check_dim,
        hidden=[cfg.check_dim],
        output_dim=cfg.check_dim,
        seed=int(rng.integers(2**32)),
        normalize_output=cfg.normalize,
    )
    return check_parameter_gradients(model, features, labels, loss_cfg, h=cfg.h)


@handle_errors
def gradcheck(
    config: Optional[Path] = ConfigOption,
    set_values: Optional[List[str]] = SetOption,
    loss: Optional[LossVariant] = typer.Option(None, help="손실 종류"),
    margin: Optional[float] = typer.Option(None, help="margin α"),
    lam: Optional[float] = typer.Option(None, "--lambda", help="λ"),
    h: Optional[float] = typer.Option(None, help="중앙 차분 간격"),
    seed: Optional[int] = typer.Option(None, help="시드"),
    end_to_end: bool = typer.Option(False, "--end-to-end", help="MLP 파라미터까지 검사"),
):
    """
    해석적 gradient 와 중앙 차분 비교

    차분 구간이 kink 를 넘을 수 있는 배치는 버리고 다시 뽑습니다.
    최대 상대 오차가 threshold 미만이면 종료 코드 0.
    """
    cfg = load_config(config, set_values, loss=loss, margin=margin, lam=lam, h=h, seed=seed)
    rng = np.random.default_rng(cfg.seed)

    for attempt in range(1, cfg.max_attempts + 1):
        report = _random_check(cfg, rng, end_to_end)
        if report.smooth:
            break
    else:
        raise create_numeric_error(
            f"no smooth batch found in {cfg.max_attempts} attempts",
            quantity="smooth_batches",
            observed=0,
            threshold=1,
        )

    typer.echo(
        f"{cfg.loss.display_name}: max relative error {report.max_relative_error:.3e} "
        f"over {report.coordinates} coordinates (attempt {attempt}, h={cfg.h:g})"
    )
    if report.max_relative_error >= cfg.threshold:
        raise create_numeric_error(
            f"max relative error {report.max_relative_error:.3e} exceeds {cfg.threshold:g}",
            quantity="max_relative_error",
            observed=report.max_relative_error,
            threshold=cfg.threshold,
        )
