from pathlib import Path
from typing import List, Optional

import typer

from src.data.synthetic import generate

from .common import ConfigOption, SetOption, handle_errors, load_config, output_path, save_dataset


@handle_errors
def synth(
    config: Optional[Path] = ConfigOption,
    set_values: Optional[List[str]] = SetOption,
    identities: Optional[int] = typer.Option(None, help="identity 수"),
    samples_per_identity: Optional[int] = typer.Option(None, help="identity 당 샘플 수"),
    input_dim: Optional[int] = typer.Option(None, help="입력 차원"),
    separation: Optional[float] = typer.Option(None, help="최소 centroid 거리 (σ 단위)"),
    sigma: Optional[float] = typer.Option(None, help="노이즈 표준편차"),
    seed: Optional[int] = typer.Option(None, help="시드"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="출력 파일 (.bin 또는 .csv)"),
):
    """합성 identity-cluster 데이터셋 생성"""
    cfg = load_config(
        config,
        set_values,
        identities=identities,
        samples_per_identity=samples_per_identity,
        input_dim=input_dim,
        separation=separation,
        sigma=sigma,
        seed=seed,
        output=str(out) if out else None,
    )
    dataset = generate(cfg.synth_spec())
    path = output_path(cfg, "synthetic.bin")
    save_dataset(dataset, path, cfg.metadata())
    typer.echo(str(path))
