"""
CLI 실행 설정 (평탄한 key-value)

우선순위: 기본값 < `key = value` 설정 파일 < 명령행 플래그
알 수 없는 키는 거부합니다.
"""

from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from config.settings import settings
from exceptions import create_configuration_error, create_resource_error
from src.data.synthetic import SynthSpec
from src.embedder.trainer import TrainConfig
from src.metric.losses import (
    ABLATION_MARGINS,
    DEFAULT_LAMBDA,
    DEFAULT_MARGIN,
    LossConfig,
    LossVariant,
)
from src.metric.mining import PkSpec
from src.pipelines.comparison.pipeline import ComparisonSpec
from src.pipelines.experiment.pipeline import ExperimentSpec
from src.retrieval.evaluator import EvalMode


class RunConfig(BaseModel):
    # 손실
    loss: LossVariant = Field(LossVariant.DCA_BH, description="tri_bh | tri_ba | dca_bh | dca_ba")
    margin: float = Field(DEFAULT_MARGIN, ge=0.0, description="margin α")
    lam: float = Field(DEFAULT_LAMBDA, alias="lambda", ge=0.0, le=1.0, description="λ")
    nonzero_average: Optional[bool] = Field(None, description="0 이 아닌 hinge 만 평균")
    detach_context: bool = Field(False, description="Jaccard 행렬을 상수로 취급")

    # PK 샘플링
    P: int = Field(8, ge=2, description="배치당 identity 수")
    K: int = Field(4, ge=2, description="identity 당 샘플 수")

    # 모델 / 학습
    dims: int = Field(16, ge=1, description="임베딩 차원")
    hidden: List[int] = Field(default_factory=lambda: [64], description="은닉층 폭")
    normalize: bool = Field(False, description="출력 L2 정규화")
    steps: int = Field(300, ge=0, description="학습 step 수")
    lr: float = Field(1e-3, gt=0.0, description="학습률")
    seed: int = Field(42, ge=0, description="시드")

    # 합성 데이터
    identities: int = Field(16, ge=2)
    samples_per_identity: int = Field(32, ge=2)
    input_dim: int = Field(8, ge=1)
    separation: float = Field(10.0, gt=0.0, description="최소 centroid 거리 (σ 단위)")
    sigma: float = Field(1.0, gt=0.0)

    # 평가
    mode: EvalMode = Field(EvalMode.EUCLIDEAN, description="euclidean | dca_rerank")
    holdout: int = Field(8, ge=1, description="identity 당 평가용 샘플 수")
    queries: int = Field(2, ge=1, description="identity 당 query 수")

    # gradcheck
    h: float = Field(1e-5, ge=1e-8, le=1e-3, description="중앙 차분 간격")
    threshold: float = Field(1e-5, gt=0.0, description="허용 최대 상대 오차")
    max_attempts: int = Field(50, ge=1, description="매끄러운 배치를 찾기 위한 최대 재샘플 횟수")
    check_P: int = Field(3, ge=2, description="검사 배치의 identity 수")
    check_K: int = Field(3, ge=2, description="검사 배치의 identity 당 샘플 수")
    check_dim: int = Field(4, ge=1, description="검사 배치의 feature 차원")

    # compare
    margins: List[float] = Field(default_factory=lambda: list(ABLATION_MARGINS))
    lambdas: List[float] = Field(default_factory=lambda: [DEFAULT_LAMBDA])
    dims_grid: List[int] = Field(default_factory=lambda: [16])
    n_jobs: int = Field(default_factory=lambda: settings.n_jobs)

    # 경로
    data: Optional[str] = Field(None, description="데이터/임베딩 파일")
    checkpoint: Optional[str] = Field(None, description="체크포인트 파일")
    output: Optional[str] = Field(None, description="출력 파일 또는 디렉터리")

    model_config = {"extra": "forbid", "populate_by_name": True}

    @field_validator("hidden", "margins", "lambdas", "dims_grid", mode="before")
    @classmethod
    def _split_list(cls, value):
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    # 하위 설정으로 변환
    def loss_config(self) -> LossConfig:
        return LossConfig(
            variant=self.loss,
            margin=self.margin,
            lam=self.lam,
            nonzero_average=self.nonzero_average,
            detach_context=self.detach_context,
        )

    def pk_spec(self) -> PkSpec:
        return PkSpec(P=self.P, K=self.K, seed=self.seed)

    def synth_spec(self) -> SynthSpec:
        return SynthSpec(
            identities=self.identities,
            samples_per_identity=self.samples_per_identity,
            input_dim=self.input_dim,
            cluster_separation=self.separation,
            noise_sigma=self.sigma,
            seed=self.seed,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            steps=self.steps,
            lr=self.lr,
            seed=self.seed,
            loss=self.loss_config(),
            pk=self.pk_spec(),
        )

    def experiment_spec(self) -> ExperimentSpec:
        return ExperimentSpec(
            synth=self.synth_spec(),
            train=self.train_config(),
            hidden=self.hidden,
            output_dim=self.dims,
            normalize_output=self.normalize,
            holdout_per_identity=self.holdout,
            queries_per_identity=self.queries,
            eval_modes=[self.mode],
        )

    def comparison_spec(self) -> ComparisonSpec:
        return ComparisonSpec(
            base=self.experiment_spec(),
            margins=self.margins,
            lambdas=self.lambdas,
            dims=self.dims_grid,
            n_jobs=self.n_jobs,
        )

    def metadata(self) -> Dict[str, Any]:
        """아티팩트에 기록할 해석된 설정 (시드 포함)"""
        dumped = self.model_dump(mode="json", by_alias=True)
        return {
            key: ",".join(str(v) for v in value) if isinstance(value, list) else value
            for key, value in dumped.items()
        }


def parse_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    `key = value` 줄 형식의 설정 파일 읽기

    빈 줄과 `#` 로 시작하는 줄은 무시합니다.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise create_resource_error(
            f"cannot read config file {path}: {e}",
            resource_type="config",
            resource_path=str(path),
            cause=e,
        )

    values: Dict[str, str] = {}
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise create_configuration_error(
                f"{path}:{number}: expected 'key = value', got {raw!r}",
                config_key=str(path),
                config_value=raw,
            )
        values[key.strip()] = value.strip()
    return values


def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "config"
    return f"{location}: {first['msg']}"


def _canonical(values: Mapping[str, Any]) -> Dict[str, Any]:
    """`lam` 은 `lambda` 의 별칭"""
    return {("lambda" if key == "lam" else key): value for key, value in values.items()}


def resolve_config(
    config_file: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """
    기본값 < 설정 파일 < 플래그 순서로 합친 RunConfig

    Raises:
        DCAConfigurationError: 알 수 없는 키, 잘못된 값
    """
    values: Dict[str, Any] = {}
    if config_file is not None:
        values.update(_canonical(parse_config_file(config_file)))
    values.update(_canonical({k: v for k, v in (overrides or {}).items() if v is not None}))

    try:
        config = RunConfig.model_validate(values)
        # 하위 설정의 검증까지 여기서 끝냄
        config.comparison_spec()
    except ValidationError as e:
        raise create_configuration_error(_describe(e), cause=e)
    return config


def parse_overrides(pairs: Optional[List[str]]) -> Dict[str, str]:
    """`--set key=value` 목록을 dict 로"""
    values: Dict[str, str] = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise create_configuration_error(
                f"--set expects key=value, got {pair!r}", config_key="set", config_value=pair
            )
        values[key.strip()] = value.strip()
    return values
