import pytest

from core.property_suite import PropertySuite

SUITES = ['field_axioms', 'truncated_laws', 'jacobi', 'operator_leibniz',
          'grading', 'torus_stability', 'rank_nullity']


@pytest.mark.parametrize("fixture", ["w1_f2", "w2_f3", "w2_f4", "w2_f9"])
def test_all_suites_pass(request, fixture):
    algebra = request.getfixturevalue(fixture)
    report = PropertySuite(algebra, seed=11, trials=40).report()
    assert report.status == 'pass', report.witness
    assert report.dims == {name: 40 for name in SUITES}
    assert report.details["failures"] == {name: 0 for name in SUITES}


def test_reports_are_reproducible(w2_f3):
    first = PropertySuite(w2_f3, seed=5, trials=20).report().to_dict()
    second = PropertySuite(w2_f3, seed=5, trials=20).report().to_dict()
    assert first == second
    assert first["details"]["seed"] == 5


def test_individual_suite(w1_f3):
    result = PropertySuite(w1_f3, trials=25).jacobi()
    assert result.name == 'jacobi'
    assert result.cases == 25
    assert result.passed
    assert result.first_failure is None
