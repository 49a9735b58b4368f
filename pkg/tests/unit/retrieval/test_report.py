"""
tests/unit/retrieval/test_report.py

검색 결과 표/CSV 출력 테스트
"""

import pytest

from src.retrieval.evaluator import EvalMode, RetrievalReport
from src.retrieval.report import (
    CSV_COLUMNS,
    render_table,
    report_rows,
    reports_to_frame,
    write_report_csv,
)


@pytest.fixture
def reports():
    return [
        RetrievalReport(map=0.75, cmc=[0.5, 1.0], per_query_ap=[0.5, 1.0], mode=EvalMode.EUCLIDEAN),
        RetrievalReport(
            map=1.0, cmc=[1.0, 1.0], per_query_ap=[1.0, 1.0], mode=EvalMode.DCA_RERANK, lam=0.5
        ),
    ]


@pytest.mark.unit
class TestReportRows:
    def test_map_then_every_rank(self, reports):
        rows = report_rows(reports[0])
        assert [r["metric"] for r in rows] == ["mAP", "rank1", "rank2"]
        assert rows[0]["value"] == 0.75
        assert rows[0]["lambda"] == ""

    def test_frame_columns(self, reports):
        frame = reports_to_frame(reports)
        assert list(frame.columns) == CSV_COLUMNS
        assert len(frame) == 6
        assert frame.iloc[3]["mode"] == "dca_rerank"


@pytest.mark.unit
class TestOutputs:
    def test_table_contains_ranks(self, reports):
        table = render_table(reports)
        assert "rank1" in table and "rank10" in table
        assert "0.7500" in table
        assert "dca_rerank" in table

    def test_csv_is_deterministic(self, reports, tmp_path):
        write_report_csv(reports, tmp_path / "a.csv", metadata={"seed": 1})
        write_report_csv(reports, tmp_path / "b.csv", metadata={"seed": 1})
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_csv_layout(self, reports, tmp_path):
        path = tmp_path / "r.csv"
        write_report_csv(reports, path, metadata={"seed": 1})
        lines = path.read_text().splitlines()
        assert lines[0] == "# seed = 1"
        assert lines[1] == "metric,mode,lambda,value"
        assert lines[2] == "mAP,euclidean,,0.75"
        assert lines[5] == "mAP,dca_rerank,0.5,1.0"
