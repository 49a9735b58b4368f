from typing import Any, Dict, Optional, TypedDict


class BasePipelineState(TypedDict, total=False):
    """모든 Pipeline 이 공유하는 기본 상태"""

    # 공통 식별자
    pipeline_id: str

    # 진행 상황 추적
    current_step: str
    processing_status: str  # "pending", "running", "completed", "failed"
    progress_percentage: float
    total_steps: int

    # 에러 관리
    error_message: str
    error: Optional[BaseException]

    # 단계별 소요 시간 (초)
    step_seconds: Dict[str, float]

    # 단계 결과물
    outputs: Dict[str, Any]
