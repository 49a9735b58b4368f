# src/pipelines/experiment/pipeline.py
"""
합성 데이터 → identity 분할 → MLP 학습 → query/gallery 평가
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from src.data.dataset import LabeledDataset, split_by_identity, split_query_gallery
from src.data.synthetic import SynthSpec, generate
from src.embedder.model import MlpModel
from src.embedder.trainer import StepRecord, TrainConfig, train
from src.metric.types import EmbeddingBatch
from src.pipelines.base.pipeline import BasePipeline, StepFunc
from src.pipelines.base.state import BasePipelineState
from src.retrieval.evaluator import EvalMode, RetrievalReport, evaluate


class ExperimentSpec(BaseModel):
    """한 번의 학습 + 평가 설정"""

    synth: SynthSpec = Field(default_factory=SynthSpec)
    train: TrainConfig = Field(default_factory=TrainConfig)
    hidden: List[int] = Field(default_factory=lambda: [64], description="은닉층 폭")
    output_dim: int = Field(16, ge=1, description="임베딩 차원 D_emb")
    normalize_output: bool = Field(False, description="출력 L2 정규화")
    holdout_per_identity: int = Field(8, ge=1, description="identity 당 평가용 샘플 수")
    queries_per_identity: int = Field(2, ge=1, description="평가 샘플 중 query 수")
    eval_modes: List[EvalMode] = Field(
        default_factory=lambda: [EvalMode.EUCLIDEAN, EvalMode.DCA_RERANK]
    )


@dataclass
class ExperimentResult:
    model: MlpModel
    history: List[StepRecord]
    reports: List[RetrievalReport]

    def report(self, mode: EvalMode) -> RetrievalReport:
        return next(r for r in self.reports if r.mode is EvalMode(mode))


def embed_split(
    model: MlpModel, query: LabeledDataset, gallery: LabeledDataset
) -> Tuple[EmbeddingBatch, EmbeddingBatch]:
    return (
        EmbeddingBatch(model.embed(query.features), query.labels),
        EmbeddingBatch(model.embed(gallery.features), gallery.labels),
    )


class ExperimentPipeline(BasePipeline):
    """학습 후 평가까지 한 번에 실행"""

    def __init__(self, spec: Optional[ExperimentSpec] = None, **kwargs):
        self.spec = spec or ExperimentSpec()
        super().__init__(config=self.spec.model_dump(mode="json"), **kwargs)

    def _build_steps(self) -> List[Tuple[str, StepFunc]]:
        return [
            ("load_data", self._load_data),
            ("split", self._split),
            ("initialize_model", self._initialize_model),
            ("train", self._train),
            ("evaluate", self._evaluate),
        ]

    def _load_data(self, state: BasePipelineState) -> Dict[str, Any]:
        dataset = state["outputs"].get("dataset")
        return {"dataset": dataset if dataset is not None else generate(self.spec.synth)}

    def _split(self, state: BasePipelineState) -> Dict[str, Any]:
        train_set, heldout = split_by_identity(
            state["outputs"]["dataset"], self.spec.holdout_per_identity
        )
        query, gallery = split_query_gallery(heldout, self.spec.queries_per_identity)
        return {"train_set": train_set, "query": query, "gallery": gallery}

    def _initialize_model(self, state: BasePipelineState) -> Dict[str, Any]:
        model = MlpModel.initialize(
            input_dim=state["outputs"]["dataset"].dim,
            hidden=self.spec.hidden,
            output_dim=self.spec.output_dim,
            seed=self.spec.train.seed,
            normalize_output=self.spec.normalize_output,
        )
        return {"initial_model": model}

    def _train(self, state: BasePipelineState) -> Dict[str, Any]:
        outputs = state["outputs"]
        result = train(outputs["train_set"], outputs["initial_model"], self.spec.train)
        return {"model": result.model, "history": result.history}

    def _evaluate(self, state: BasePipelineState) -> Dict[str, Any]:
        outputs = state["outputs"]
        queries, gallery = embed_split(outputs["model"], outputs["query"], outputs["gallery"])
        lam = self.spec.train.loss.lam
        reports = [evaluate(queries, gallery, mode, lam) for mode in self.spec.eval_modes]
        return {"reports": reports}


def run_experiment(
    spec: ExperimentSpec, dataset: Optional[LabeledDataset] = None
) -> ExperimentResult:
    """ExperimentPipeline 실행 후 결과만 추려서 반환"""
    state = ExperimentPipeline(spec).run({"dataset": dataset})
    outputs = state["outputs"]
    return ExperimentResult(
        model=outputs["model"], history=outputs["history"], reports=outputs["reports"]
    )
