# src/pipelines/comparison/pipeline.py
"""
손실 종류 × margin × λ × 임베딩 차원 비교 그리드

모든 셀은 같은 합성 데이터셋을 쓰고, 셀 i 의 학습 시드는 seed + i 입니다.
결과는 셀마다 한 행 (type_margin, dims, lambda, mAP, rank1).
"""

from typing import Annotated, Any, Dict, List, Optional, Tuple

import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel, Field

from src.data.dataset import LabeledDataset
from src.data.synthetic import generate
from src.metric.losses import ABLATION_MARGINS, DEFAULT_LAMBDA, LossConfig, LossVariant
from src.pipelines.base.pipeline import BasePipeline, StepFunc
from src.pipelines.base.state import BasePipelineState
from src.pipelines.experiment.pipeline import ExperimentSpec, run_experiment
from src.retrieval.evaluator import EvalMode
from utils.naming import cell_name

COMPARE_COLUMNS = ["type_margin", "dims", "lambda", "mAP", "rank1"]


class GridCell(BaseModel):
    index: int
    variant: LossVariant
    margin: float
    lam: Optional[float]
    dims: int

    @property
    def name(self) -> str:
        return cell_name(self.variant, self.margin)


class ComparisonSpec(BaseModel):
    """비교 그리드 설정"""

    base: ExperimentSpec = Field(default_factory=ExperimentSpec)
    variants: List[LossVariant] = Field(default_factory=lambda: list(LossVariant))
    margins: List[Annotated[float, Field(ge=0.0)]] = Field(
        default_factory=lambda: list(ABLATION_MARGINS)
    )
    lambdas: List[Annotated[float, Field(ge=0.0, le=1.0)]] = Field(
        default_factory=lambda: [DEFAULT_LAMBDA], description="DCA 계열에만 적용"
    )
    dims: List[Annotated[int, Field(ge=1)]] = Field(
        default_factory=lambda: [16], description="임베딩 차원 목록"
    )
    n_jobs: int = Field(1, description="병렬 셀 수 (joblib, -1 이면 전체 코어)")


def grid_cells(spec: ComparisonSpec) -> List[GridCell]:
    """dims → variant → margin → λ 순서의 셀 목록"""
    cells: List[GridCell] = []
    for dims in spec.dims:
        for variant in spec.variants:
            for margin in spec.margins:
                lambdas = spec.lambdas if variant.uses_dca else [None]
                for lam in lambdas:
                    cells.append(
                        GridCell(
                            index=len(cells),
                            variant=variant,
                            margin=margin,
                            lam=lam,
                            dims=dims,
                        )
                    )
    return cells


def cell_spec(base: ExperimentSpec, cell: GridCell) -> ExperimentSpec:
    """셀 하나의 ExperimentSpec (Euclidean 평가만)"""
    loss = LossConfig(
        variant=cell.variant,
        margin=cell.margin,
        lam=cell.lam if cell.lam is not None else base.train.loss.lam,
        detach_context=base.train.loss.detach_context,
    )
    train_cfg = base.train.model_copy(
        update={"seed": base.train.seed + cell.index, "loss": loss}
    )
    return base.model_copy(
        update={
            "train": train_cfg,
            "output_dim": cell.dims,
            "eval_modes": [EvalMode.EUCLIDEAN],
        }
    )


def run_cell(base: ExperimentSpec, cell: GridCell, dataset: LabeledDataset) -> Dict[str, Any]:
    report = run_experiment(cell_spec(base, cell), dataset).report(EvalMode.EUCLIDEAN)
    return {
        "type_margin": cell.name,
        "dims": cell.dims,
        "lambda": "" if cell.lam is None else cell.lam,
        "mAP": report.map,
        "rank1": report.rank(1),
    }


class ComparisonPipeline(BasePipeline):
    def __init__(self, spec: Optional[ComparisonSpec] = None, **kwargs):
        self.spec = spec or ComparisonSpec()
        super().__init__(config=self.spec.model_dump(mode="json"), **kwargs)

    def _build_steps(self) -> List[Tuple[str, StepFunc]]:
        return [
            ("load_data", self._load_data),
            ("run_grid", self._run_grid),
        ]

    def _load_data(self, state: BasePipelineState) -> Dict[str, Any]:
        dataset = state["outputs"].get("dataset")
        return {"dataset": dataset if dataset is not None else generate(self.spec.base.synth)}

    def _run_grid(self, state: BasePipelineState) -> Dict[str, Any]:
        dataset = state["outputs"]["dataset"]
        cells = grid_cells(self.spec)
        self.logger.info(f"📋 비교 그리드 {len(cells)} 셀 (n_jobs={self.spec.n_jobs})")
        rows = Parallel(n_jobs=self.spec.n_jobs)(
            delayed(run_cell)(self.spec.base, cell, dataset) for cell in cells
        )
        return {"table": pd.DataFrame(rows, columns=COMPARE_COLUMNS)}


def run_comparison(
    spec: ComparisonSpec, dataset: Optional[LabeledDataset] = None
) -> pd.DataFrame:
    """비교 그리드 실행 후 결과 표 반환 (셀 순서 유지)"""
    return ComparisonPipeline(spec).run({"dataset": dataset})["outputs"]["table"]
