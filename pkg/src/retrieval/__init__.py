from .evaluator import (
    EvalMode,
    RetrievalReport,
    average_precisions,
    evaluate,
    query_gallery_distances,
)
from .report import render_table, report_rows, reports_to_frame, write_report_csv

__all__ = [
    "EvalMode",
    "RetrievalReport",
    "average_precisions",
    "evaluate",
    "query_gallery_distances",
    "render_table",
    "report_rows",
    "reports_to_frame",
    "write_report_csv",
]
