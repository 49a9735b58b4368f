"""
DCA-Metric 시스템의 기본 예외 클래스들

모든 커스텀 예외는 이 기본 예외들을 상속받아 구현합니다.
CLI는 DCAInvariantError 를 종료 코드 2로, 나머지 DCABaseException 을 1로 매핑합니다.
"""

from typing import Any, Dict, Optional


class DCABaseException(Exception):
    """
    DCA-Metric 시스템의 모든 예외의 기본 클래스
    """

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ):
        """
        기본 예외 초기화

        Args:
            message: 에러 메시지
            error_code: 에러 코드 (로깅/CLI 진단용)
            details: 추가 세부 정보
            cause: 원인이 된 예외
        """
        super().__init__(message)

        self.message = message
        self.error_code = error_code or self.__class__.__name__.upper()
        self.details = details or {}
        self.cause = cause

    def to_dict(self) -> Dict[str, Any]:
        """예외를 딕셔너리로 변환"""
        return {
            "error_type": self.__class__.__name__,
            "error_code": self.error_code,
            "message": self.message,
            "details": self.details,
            "cause": str(self.cause) if self.cause else None,
        }

    def __str__(self) -> str:
        return f"[{self.error_code}] {self.message}"

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(message={self.message!r}, error_code={self.error_code!r})"


class DCAConfigurationError(DCABaseException):
    """설정 관련 오류"""


class DCAValidationError(DCABaseException):
    """입력 데이터 검증 오류"""


class DCAResourceError(DCABaseException):
    """리소스 관련 오류 (파일 입출력 등)"""


class DCANumericError(DCABaseException):
    """수치 계산 관련 오류 (gradient check 실패 등)"""


class DCAInvariantError(DCABaseException):
    """내부 불변식 위반 (버그)"""


# 예외 생성 헬퍼 함수들
def create_configuration_error(
    message: str,
    config_key: Optional[str] = None,
    config_value: Optional[Any] = None,
    cause: Optional[Exception] = None,
) -> DCAConfigurationError:
    """설정 오류 생성 헬퍼"""
    details = {}
    if config_key:
        details["config_key"] = config_key
    if config_value is not None:
        details["config_value"] = str(config_value)

    return DCAConfigurationError(
        message=message, error_code="CONFIG_ERROR", details=details, cause=cause
    )


def create_validation_error(
    message: str,
    field_name: Optional[str] = None,
    field_value: Optional[Any] = None,
    expected: Optional[str] = None,
) -> DCAValidationError:
    """검증 오류 생성 헬퍼"""
    details = {}
    if field_name:
        details["field_name"] = field_name
    if field_value is not None:
        details["field_value"] = str(field_value)
    if expected:
        details["expected"] = expected

    return DCAValidationError(
        message=message, error_code="VALIDATION_ERROR", details=details
    )


def create_resource_error(
    message: str,
    resource_type: Optional[str] = None,
    resource_path: Optional[str] = None,
    cause: Optional[Exception] = None,
) -> DCAResourceError:
    """리소스 오류 생성 헬퍼"""
    details = {}
    if resource_type:
        details["resource_type"] = resource_type
    if resource_path:
        details["resource_path"] = resource_path

    return DCAResourceError(
        message=message, error_code="IO_ERROR", details=details, cause=cause
    )


def create_numeric_error(
    message: str,
    quantity: Optional[str] = None,
    observed: Optional[float] = None,
    threshold: Optional[float] = None,
) -> DCANumericError:
    """수치 오류 생성 헬퍼"""
    details: Dict[str, Any] = {}
    if quantity:
        details["quantity"] = quantity
    if observed is not None:
        details["observed"] = observed
    if threshold is not None:
        details["threshold"] = threshold

    return DCANumericError(
        message=message, error_code="NUMERIC_ERROR", details=details
    )


def create_invariant_error(message: str, invariant: str) -> DCAInvariantError:
    """불변식 위반 오류 생성 헬퍼"""
    return DCAInvariantError(
        message=message,
        error_code="INVARIANT_VIOLATION",
        details={"invariant": invariant},
    )
