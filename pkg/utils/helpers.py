"""
Helper Functions
Banners, report lines and summary tables for the text output format.
"""

from typing import Dict, List, Optional, Sequence

import pandas as pd

from core.structure import CheckReport

STATUS_MARKS = {'pass': '✅', 'fail': '❌', 'infeasible': '⚠️'}


def print_banner(subtitle: Optional[str] = None):
    """Print welcome banner."""
    print("\n" + "=" * 100)
    print("🧮 WITTCHECK: DERIVATIONS OF JACOBSON-WITT ALGEBRAS".center(100))
    if subtitle:
        print(subtitle.center(100))
    print("=" * 100 + "\n")


def _flatten(values: Dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in values.items())


def format_report(report: CheckReport) -> str:
    mark = STATUS_MARKS.get(report.status, '?')
    line = f"{mark} {report.check:<20} {report.status.upper():<10} {_flatten(report.dims)}"
    if report.reason:
        line += f"  ({report.reason})"
    if report.elapsed_ms:
        line += f"  [{report.elapsed_ms} ms]"
    return line


def reports_frame(reports: Sequence[CheckReport]) -> pd.DataFrame:
    rows = []
    for r in reports:
        rows.append({
            'check': r.check,
            'n': r.params.get('n'),
            'p': r.params.get('p'),
            'deg': r.params.get('deg'),
            'status': r.status,
            'dims': _flatten(r.dims),
            'elapsed_ms': r.elapsed_ms,
            'reason': r.reason or '',
        })
    return pd.DataFrame(rows, columns=['check', 'n', 'p', 'deg', 'status', 'dims',
                                       'elapsed_ms', 'reason'])


def print_reports(reports: List[CheckReport]):
    for report in reports:
        print(format_report(report))
        if report.witness and report.status == 'fail':
            print(f"   ↳ witness: {report.witness}")


def print_summary(reports: List[CheckReport], title: str = "VERIFICATION SUMMARY"):
    """Counts per status and, for several configurations, a pass table."""
    print("\n" + "=" * 100)
    print(f"📊 {title}".center(100))
    print("=" * 100)

    if not reports:
        print("\n⚠️ No checks were run")
        print("=" * 100 + "\n")
        return

    df = reports_frame(reports)
    print(f"\n{'📋 STATUS COUNTS':.^100}")
    counts = df['status'].value_counts()
    for status in ('pass', 'fail', 'infeasible'):
        print(f"{STATUS_MARKS[status]} {status}: {int(counts.get(status, 0))}")

    if df[['n', 'p', 'deg']].drop_duplicates().shape[0] > 1:
        print(f"\n{'🗂 BY CONFIGURATION':.^100}")
        table = df.pivot_table(index=['n', 'p', 'deg'], columns='check', values='status',
                               aggfunc='first', fill_value='-')
        print(table.to_string())

    failed = df[df['status'] == 'fail']
    if not failed.empty:
        print(f"\n{'❌ FAILED CHECKS':.^100}")
        for _, row in failed.iterrows():
            print(f"  • {row['check']} at n={row['n']}, p={row['p']}, deg={row['deg']}")
    print("=" * 100)
