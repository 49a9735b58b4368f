"""
바이너리 아티팩트(임베딩 파일, 체크포인트) 포맷 관련 예외 클래스들
"""

from typing import Optional

from .base_exceptions import DCAResourceError


class ArtifactFormatError(DCAResourceError):
    """아티팩트 포맷 기본 예외"""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        artifact_kind: Optional[str] = None,
        **kwargs,
    ):
        super().__init__(message, **kwargs)

        if path:
            self.details["path"] = path
        if artifact_kind:
            self.details["artifact_kind"] = artifact_kind


class BadMagicError(ArtifactFormatError):
    """매직 바이트 불일치"""


class VersionMismatchError(ArtifactFormatError):
    """지원하지 않는 포맷 버전"""


class TruncatedFileError(ArtifactFormatError):
    """헤더에 선언된 길이와 실제 payload 길이 불일치"""


def create_bad_magic_error(
    path: str, artifact_kind: str, expected: bytes, found: bytes
) -> BadMagicError:
    """매직 오류 생성"""
    return BadMagicError(
        message=f"{path}: expected magic {expected!r}, found {found!r}",
        error_code="BAD_MAGIC",
        path=path,
        artifact_kind=artifact_kind,
    )


def create_version_error(
    path: str, artifact_kind: str, expected: int, found: int
) -> VersionMismatchError:
    """버전 오류 생성"""
    return VersionMismatchError(
        message=f"{path}: unsupported {artifact_kind} version {found} (expected {expected})",
        error_code="VERSION_MISMATCH",
        path=path,
        artifact_kind=artifact_kind,
        details={"expected_version": expected, "found_version": found},
    )


def create_truncation_error(
    path: str, artifact_kind: str, expected_bytes: int, found_bytes: int
) -> TruncatedFileError:
    """길이 불일치 오류 생성"""
    return TruncatedFileError(
        message=(
            f"{path}: {artifact_kind} payload is {found_bytes} bytes, "
            f"header declares {expected_bytes}"
        ),
        error_code="TRUNCATED_FILE",
        path=path,
        artifact_kind=artifact_kind,
        details={"expected_bytes": expected_bytes, "found_bytes": found_bytes},
    )
