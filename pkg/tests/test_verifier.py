import pytest

from config import DEFAULT_CHECKS
from core.errors import BadParam
from core.structure import CheckReport
from core.verifier import (
    AlgebraConfig,
    CheckRunner,
    exit_code,
    expand_checks,
    overall_status,
    run_checks,
)


def report(status):
    return CheckReport(check='x', params={}, status=status)


class TestAlgebraConfig:
    def test_degree_defaults_to_n(self):
        config = AlgebraConfig(n=2, p=3)
        assert config.deg == 2
        assert config.field().order == 9
        assert config.algebra().dim == 18
        assert config.label() == "W_2 over F_3^2"

    def test_bad_rank(self):
        with pytest.raises(BadParam):
            AlgebraConfig(n=0, p=3)

    def test_modulus_is_normalized(self):
        assert AlgebraConfig(n=1, p=3, deg=2, modulus=[1, 0, 1]).modulus == (1, 0, 1)


class TestCheckSelection:
    def test_all_excludes_properties(self):
        assert expand_checks(['all']) == DEFAULT_CHECKS
        assert 'properties' not in expand_checks(['all'])

    def test_canonical_order(self):
        assert expand_checks(['roots', 'der-inn', 'roots']) == ['der-inn', 'roots']

    def test_unknown_check(self):
        with pytest.raises(BadParam):
            expand_checks(['der-inn', 'bogus'])


class TestRunner:
    def test_counterexample_passes(self):
        reports = run_checks(AlgebraConfig(n=1, p=2), ['counterexample'])
        assert [r.status for r in reports] == ['pass']
        assert exit_code(reports) == 0

    def test_refusals_become_infeasible(self):
        reports = run_checks(AlgebraConfig(n=1, p=2), ['centralizers', 'graded-vanishing'])
        assert [r.status for r in reports] == ['infeasible', 'infeasible']
        assert all(r.reason for r in reports)
        assert exit_code(reports) == 3

    def test_missing_regular_vector_is_infeasible(self):
        reports = run_checks(AlgebraConfig(n=2, p=3, deg=1), ['roots'])
        assert reports[0].status == 'infeasible'

    def test_dimension_cap(self):
        reports = run_checks(AlgebraConfig(n=2, p=3, dim_cap=10), ['der-inn', 'counterexample'])
        assert [r.status for r in reports] == ['infeasible', 'pass']
        assert "cap" in reports[0].reason

    def test_elapsed_only_with_timings(self):
        quiet = CheckRunner(AlgebraConfig(n=1, p=3)).run_one('der-inn')
        assert quiet.elapsed_ms == 0

    def test_jobs_do_not_change_output(self):
        names = ['der-inn', 'centralizers', 'determining-pair', 'delta-support']
        serial = run_checks(AlgebraConfig(n=1, p=3, seed=7), names)
        parallel = run_checks(AlgebraConfig(n=1, p=3, seed=7, jobs=4), names)
        assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]
        assert [r.check for r in parallel] == names


class TestStatus:
    @pytest.mark.parametrize("statuses, expected, code", [
        (['pass', 'pass'], 'pass', 0),
        (['pass', 'infeasible'], 'infeasible', 3),
        (['infeasible', 'fail'], 'fail', 1),
        ([], 'pass', 0),
    ])
    def test_worst_status_wins(self, statuses, expected, code):
        reports = [report(s) for s in statuses]
        assert overall_status(reports) == expected
        assert exit_code(reports) == code
