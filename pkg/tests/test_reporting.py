import json

import pandas as pd

from core.structure import CheckReport
from utils.helpers import format_report, print_summary, reports_frame
from utils.report_generator import CertificateWriter

PARAMS_1_3 = {"n": 1, "p": 3, "deg": 1, "modulus": [0, 1]}
PARAMS_2_3 = {"n": 2, "p": 3, "deg": 2, "modulus": [1, 0, 1]}

REPORTS = [
    CheckReport(check='der-inn', params=PARAMS_1_3, status='pass', dims={"der": 3, "inn": 3}),
    CheckReport(check='roots', params=PARAMS_2_3, status='fail', witness={"root": [1, 0]}),
    CheckReport(check='centralizers', params=PARAMS_2_3, status='infeasible', reason="too small"),
]


def test_format_report():
    line = format_report(REPORTS[0])
    assert "der-inn" in line and "PASS" in line and "der=3" in line
    assert "(too small)" in format_report(REPORTS[2])


def test_reports_frame():
    df = reports_frame(REPORTS)
    assert list(df['status']) == ['pass', 'fail', 'infeasible']
    assert df.loc[0, 'dims'] == "der=3, inn=3"


def test_print_summary(capsys):
    print_summary(REPORTS, title="TEST")
    out = capsys.readouterr().out
    assert "BY CONFIGURATION" in out
    assert "roots at n=2, p=3, deg=2" in out


def test_certificate_files(tmp_path):
    paths = CertificateWriter(tmp_path, timestamp="20260101_000000").write_all(REPORTS, name="suite")
    assert paths['certificate'].name == "CERTIFICATE_SUITE_20260101_000000.jsonl"
    lines = paths['certificate'].read_text(encoding="utf-8").splitlines()
    assert [json.loads(line)["check"] for line in lines] == ['der-inn', 'roots', 'centralizers']
    summary = pd.read_csv(paths['summary'])
    assert list(summary['check']) == ['der-inn', 'roots', 'centralizers']


def test_nothing_to_write(tmp_path):
    assert CertificateWriter(tmp_path).write_all([]) == {}
