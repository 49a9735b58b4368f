# src/pipelines/base/pipeline.py
import logging
import time
import uuid
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, List, Optional, Tuple

from langgraph.graph import END, StateGraph

from exceptions import DCABaseException, create_invariant_error
from src.pipelines.base.state import BasePipelineState

StepFunc = Callable[[BasePipelineState], Dict[str, Any]]

ERROR_HANDLER = "error_handler"


class BasePipeline(ABC):
    """
    LangGraph 기반 Pipeline 추상 클래스

    단계마다 노드 하나, 실패하면 error_handler 노드를 거쳐 END.
    각 단계는 state 를 받아 outputs 에 합칠 dict 를 돌려줍니다.
    """

    def __init__(
        self,
        config: Optional[Dict[str, Any]] = None,
        checkpointer: Optional[Any] = None,
        logger: Optional[logging.Logger] = None,
    ):
        self.config = config or {}

        # LangGraph 핵심 구성요소
        # state 에 numpy 배열과 모델이 들어가므로 checkpointer 는 요청할 때만 사용
        self.checkpointer = checkpointer
        self.workflow: Optional[StateGraph] = None
        self.compiled_graph = None

        # Pipeline 메타데이터
        self.pipeline_name = self.__class__.__name__
        self.logger = logger or logging.getLogger(f"src.pipelines.{self.pipeline_name}")

        self.steps = self._build_steps()

        # 워크플로우 빌드
        self._build_and_compile()

    def _get_default_state(self) -> BasePipelineState:
        """기본 상태 반환"""
        return {
            "pipeline_id": str(uuid.uuid4()),
            "current_step": "initialized",
            "processing_status": "pending",
            "progress_percentage": 0.0,
            "total_steps": len(self.steps),
            "error_message": "",
            "error": None,
            "step_seconds": {},
            "outputs": {},
        }

    @abstractmethod
    def _build_steps(self) -> List[Tuple[str, StepFunc]]:
        """(단계 이름, 함수) 목록 (하위 클래스에서 구현)"""

    def _get_node_list(self) -> List[str]:
        return [name for name, _ in self.steps]

    def _get_state_schema(self) -> type:
        return BasePipelineState

    def _build_and_compile(self):
        """워크플로우 빌드 및 컴파일"""
        self.workflow = self._build_workflow()
        self.compiled_graph = self.workflow.compile(checkpointer=self.checkpointer)

    def _build_workflow(self) -> StateGraph:
        workflow = StateGraph(self._get_state_schema())
        for name, func in self.steps:
            workflow.add_node(name, self._create_node_wrapper(name, func))
        workflow.add_node(ERROR_HANDLER, self._error_handler_node)
        workflow.set_entry_point(self.steps[0][0])

        nodes = self._get_node_list()
        for idx, node in enumerate(nodes):
            next_node = nodes[idx + 1] if idx + 1 < len(nodes) else END
            workflow.add_conditional_edges(
                node,
                self._route_next_step,
                {next_node: next_node, ERROR_HANDLER: ERROR_HANDLER},
            )
        workflow.add_edge(ERROR_HANDLER, END)
        return workflow

    # 실행 관련 메서드
    def invoke(self, inputs: Optional[Dict[str, Any]] = None) -> BasePipelineState:
        """그래프를 끝까지 실행하고 최종 state 반환 (실패해도 예외 없이 failed 상태)"""
        initial_state = self._get_default_state()
        initial_state["outputs"] = dict(inputs or {})
        initial_state["processing_status"] = "running"
        self.logger.info(f"🚀 {self.pipeline_name} 시작 ({len(self.steps)} 단계)")

        config = {"configurable": {"thread_id": initial_state["pipeline_id"]}}
        return self.compiled_graph.invoke(initial_state, config)

    def run(self, inputs: Optional[Dict[str, Any]] = None) -> BasePipelineState:
        """
        모든 단계 실행

        도메인 예외는 그대로, 그 밖의 예외는 DCAInvariantError 로 다시 올립니다.
        """
        state = self.invoke(inputs)
        if state.get("processing_status") == "failed":
            error = state.get("error")
            if isinstance(error, DCABaseException):
                raise error
            step = state.get("current_step", "")
            raise create_invariant_error(
                f"{self.pipeline_name} step '{step}' crashed: {error}",
                invariant=f"{self.pipeline_name}.{step}",
            ) from error

        total = sum(state["step_seconds"].values())
        self.logger.info(f"✅ {self.pipeline_name} 완료 ({total:.2f}s)")
        return state

    #### Utility 메서드 ####

    def _route_next_step(self, state: BasePipelineState) -> str:
        """공통 라우팅 함수: 실패 시 에러 핸들러, 마지막 단계 다음은 END"""
        if state.get("processing_status") == "failed":
            return ERROR_HANDLER
        nodes = self._get_node_list()
        idx = nodes.index(state["current_step"])
        return nodes[idx + 1] if idx + 1 < len(nodes) else END

    # 상태 관리 메서드
    def _update_progress(self, current_step: str) -> Dict[str, Any]:
        """현재 진행 상태 업데이트"""
        nodes = self._get_node_list()
        idx = nodes.index(current_step) + 1
        progress = (idx / len(nodes)) * 100 if nodes else 100.0
        return {
            "current_step": current_step,
            "progress_percentage": progress,
            "processing_status": "running" if progress < 100 else "completed",
        }

    def _handle_error(self, error: Exception, step: str) -> Dict[str, Any]:
        """에러 처리: 상태를 failed 로 표시"""
        return {
            "current_step": step,
            "processing_status": "failed",
            "error_message": str(error),
            "error": error,
        }

    def _error_handler_node(self, state: BasePipelineState) -> Dict[str, Any]:
        self.logger.error(
            f"❌ {self.pipeline_name} 중단 ({state.get('current_step')}): "
            f"{state.get('error_message')}"
        )
        return {"processing_status": "failed"}

    # 유틸리티 메서드
    def _create_node_wrapper(
        self, name: str, node_func: StepFunc
    ) -> Callable[[BasePipelineState], Dict[str, Any]]:
        """단계 함수 래퍼 (에러 처리, 로깅, 시간 측정)"""

        def wrapper(state: BasePipelineState) -> Dict[str, Any]:
            self.logger.debug(f"Executing step: {name}")
            start_time = time.perf_counter()
            try:
                result = node_func(state)
            except DCABaseException as e:
                self.logger.error(f"Step {name} failed: {e}")
                return self._handle_error(e, name)
            except Exception as e:
                self.logger.error(f"Step {name} failed: {e}", exc_info=True)
                return self._handle_error(e, name)

            execution_time = time.perf_counter() - start_time
            self.logger.info(f"Step {name} completed in {execution_time:.2f}s")
            return {
                "outputs": {**state["outputs"], **(result or {})},
                "step_seconds": {**state["step_seconds"], name: execution_time},
                **self._update_progress(name),
            }

        return wrapper
