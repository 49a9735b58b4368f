"""
RetrievalReport 출력: 사람이 읽는 표와 CSV (metric, mode, lambda, value)
"""

from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from tabulate import tabulate

from src.data.formats import PathLike, comment_header, write_text

from .evaluator import RetrievalReport

TABLE_RANKS = (1, 5, 10)
CSV_COLUMNS = ["metric", "mode", "lambda", "value"]


def report_rows(report: RetrievalReport) -> List[Dict[str, Any]]:
    """mAP 다음에 CMC 의 모든 rank"""
    lam = "" if report.lam is None else report.lam
    rows = [{"metric": "mAP", "mode": report.mode.value, "lambda": lam, "value": report.map}]
    for k, value in enumerate(report.cmc, start=1):
        rows.append(
            {"metric": f"rank{k}", "mode": report.mode.value, "lambda": lam, "value": value}
        )
    return rows


def render_table(
    reports: Sequence[RetrievalReport], ranks: Sequence[int] = TABLE_RANKS
) -> str:
    headers = ["mode", "lambda", "mAP"] + [f"rank{k}" for k in ranks]
    body = [
        [r.mode.value, "-" if r.lam is None else r.lam, r.map] + [r.rank(k) for k in ranks]
        for r in reports
    ]
    return tabulate(body, headers=headers, floatfmt=".4f", tablefmt="github")


def reports_to_frame(reports: Sequence[RetrievalReport]) -> pd.DataFrame:
    rows = [row for report in reports for row in report_rows(report)]
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def write_report_csv(
    reports: Sequence[RetrievalReport],
    path: PathLike,
    metadata: Optional[Dict[str, Any]] = None,
) -> None:
    """설정을 `#` 주석으로 앞에 붙인 CSV 저장 (같은 입력이면 같은 바이트)"""
    frame = reports_to_frame(reports)
    write_text(path, comment_header(metadata) + frame.to_csv(index=False))
