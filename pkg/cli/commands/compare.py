from pathlib import Path
from typing import List, Optional

import typer
from tabulate import tabulate

from src.data.formats import comment_header, write_text
from src.pipelines.comparison.pipeline import run_comparison

from .common import (
    ConfigOption,
    SetOption,
    handle_errors,
    load_config,
    load_or_generate,
    output_path,
)


@handle_errors
def compare(
    config: Optional[Path] = ConfigOption,
    set_values: Optional[List[str]] = SetOption,
    data: Optional[Path] = typer.Option(None, help="데이터 파일 (없으면 합성)"),
    margins: Optional[str] = typer.Option(None, help="margin 목록 (쉼표 구분)"),
    lambdas: Optional[str] = typer.Option(None, help="DCA 계열 λ 목록 (쉼표 구분)"),
    dims_grid: Optional[str] = typer.Option(None, "--dims", help="임베딩 차원 목록 (쉼표 구분)"),
    steps: Optional[int] = typer.Option(None, help="셀당 학습 step 수"),
    seed: Optional[int] = typer.Option(None, help="기준 시드 (셀 i 는 seed + i)"),
    n_jobs: Optional[int] = typer.Option(None, help="병렬 셀 수"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="결과 CSV"),
):
    """{TRI, DCA} × {BH, BA} × margin (× λ × 차원) 비교 표"""
    cfg = load_config(
        config,
        set_values,
        data=str(data) if data else None,
        margins=margins,
        lambdas=lambdas,
        dims_grid=dims_grid,
        steps=steps,
        seed=seed,
        n_jobs=n_jobs,
        output=str(out) if out else None,
    )
    table = run_comparison(cfg.comparison_spec(), load_or_generate(cfg))

    path = output_path(cfg, "compare.csv")
    write_text(path, comment_header(cfg.metadata()) + table.to_csv(index=False))
    typer.echo(
        tabulate(table, headers="keys", showindex=False, floatfmt=".4f", tablefmt="github")
    )
    typer.echo(f"table: {path}")
