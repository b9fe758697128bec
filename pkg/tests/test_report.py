import pytest

from cobarkit.cli import main
from cobarkit.gradedlin import Field
from cobarkit.report import PASS, SKIP, UNSTABLE, paper_report


@pytest.fixture(scope="module")
def report_q():
    return paper_report()


def test_all_rows_pass(report_q):
    assert [r.id for r in report_q.rows] == ["F1", "E1a", "E1b", "E1c", "E2a", "E2b", "E2c",
                                            "FS", "C1", "C2", "C3", "C4"]
    assert all(r.status == PASS for r in report_q.rows), report_q.render()
    assert report_q.ok and report_q.exit_code == 0


def test_render_and_dict(report_q):
    text = report_q.render()
    assert "12/12 rows pass" in text
    d = report_q.as_dict()
    assert d["ok"] and len(d["rows"]) == 12 and d["notes"]


def test_positive_characteristic_skips_com_rows():
    rep = paper_report(Field(5))
    skipped = {r.id for r in rep.rows if r.status == SKIP}
    assert skipped == {"E1b", "E1c", "E2a", "FS"}
    assert all(r.status == PASS for r in rep.rows if r.status != SKIP)
    assert rep.exit_code == 0


def test_short_schedule_is_unstable():
    rep = paper_report(schedule=[3])
    unstable = {r.id for r in rep.rows if r.status == UNSTABLE}
    assert {"E1b", "E2b", "C4"} <= unstable
    assert rep.exit_code == 2


def test_cli_exit(capsys):
    assert main(["paper-report"]) == 0
    assert "12/12 rows pass" in capsys.readouterr().out
