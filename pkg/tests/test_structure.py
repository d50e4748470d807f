import numpy as np
import pytest

from core.errors import UNSOLVABLE, BadParam, CharTwoUnsupported, ExcludedConfiguration, FieldTooSmall
from core.galois_field import GaloisField, default_regular
from core.structure import StructureAnalyzer, basis_weight
from core.witt_algebra import WittAlgebra


def D(A, i):
    return A.basis_element((0,) * A.n, i)


class TestDerivations:
    def test_w1_f3_has_only_inner_derivations(self, w1_f3):
        report = StructureAnalyzer(w1_f3).der_equals_inn()
        assert report.status == 'pass'
        assert report.dims == {"der": 3, "inn": 3, "equal": True}
        assert report.details["leibniz_recheck"] == "all"

    def test_w1_f2(self, w1_f2):
        report = StructureAnalyzer(w1_f2).der_equals_inn()
        assert report.passed
        assert report.dims["der"] == 2

    def test_w2_f4(self, w2_f4):
        report = StructureAnalyzer(w2_f4).der_equals_inn()
        assert report.passed
        assert report.dims["der"] == 8

    def test_leibniz_violation_of_identity(self, w1_f3):
        analyzer = StructureAnalyzer(w1_f3)
        assert analyzer.leibniz_violations(np.eye(3, dtype=np.int64), range(3))


class TestCentralizers:
    def test_torus_element(self, w1_f3):
        analyzer = StructureAnalyzer(w1_f3)
        x_D = w1_f3.basis_element((1,), 1)
        C = analyzer.centralizer(x_D)
        assert C == analyzer.span([x_D])

    def test_centralizer_of_empty_set_is_everything(self, w1_f3):
        assert StructureAnalyzer(w1_f3).centralizer_of_set([]).dim == 3

    def test_normalizer_of_torus(self, w2_f3):
        analyzer = StructureAnalyzer(w2_f3)
        torus = analyzer.span(w2_f3.torus_basis())
        assert analyzer.normalizer(torus) == torus
        assert analyzer.is_subalgebra(torus)
        assert analyzer.is_abelian(w2_f3.torus_basis())

    def test_centralizer_check(self, w1_f3):
        report = StructureAnalyzer(w1_f3).centralizer_check()
        assert report.passed
        assert report.dims["centralizer_script_D1"] == 1
        assert report.dims["sum_squares_meet_torus"] == 0

    @pytest.mark.parametrize("fixture", ["w2_f4", "w2_f9"])
    def test_centralizer_check_rank_two(self, request, fixture):
        algebra = request.getfixturevalue(fixture)
        report = StructureAnalyzer(algebra).centralizer_check()
        assert report.passed, report.witness
        assert report.dims["centralizer_d_lambda"] == 2
        assert report.dims["centralizer_script_D1"] == 2
        if algebra.p > 2:
            assert report.dims["sum_squares_meet_torus"] == 0
        else:
            assert "sum_squares_meet_torus" not in report.dims

    def test_centralizer_check_needs_regular_vectors(self, w2_f3):
        with pytest.raises(FieldTooSmall):
            StructureAnalyzer(w2_f3).centralizer_check()

    def test_excluded_configuration(self, w1_f2):
        with pytest.raises(ExcludedConfiguration):
            StructureAnalyzer(w1_f2).centralizer_check()
        with pytest.raises(ExcludedConfiguration):
            StructureAnalyzer(w1_f2).torus_cartan_check()


class TestScriptD:
    def test_odd_characteristic_signs(self, w2_f3):
        report = StructureAnalyzer(w2_f3).script_d_check()
        assert report.passed
        assert report.details["observed_signs"] == [1, -1]
        assert report.details["last_power_vanishes"]

    def test_characteristic_two(self, w2_f4):
        report = StructureAnalyzer(w2_f4).script_d_check()
        assert report.passed
        assert report.details["observed_signs"] == [1, 1]
        assert report.details["squares"]
        assert report.details["generator_images"]


class TestTori:
    def test_torus_cartan(self, w2_f3):
        report = StructureAnalyzer(w2_f3).torus_cartan_check()
        assert report.passed, report.witness
        assert report.dims == {"T_1": 2, "T_2": 2}

    def test_torus_cartan_char_two_skips_higher_tori(self, w2_f4):
        report = StructureAnalyzer(w2_f4).torus_cartan_check()
        assert report.passed, report.witness
        assert report.details["tori"] == [1]
        assert "skipped" in report.details

    def test_psi_substitution(self, w2_f3, w2_f4):
        analyzer = StructureAnalyzer(w2_f3)
        T = w2_f3.trunc
        assert analyzer.psi_substitution(2).images == [T.x(1), T.x(2) + T.x(1) ** 2]
        with pytest.raises(BadParam):
            analyzer.psi_substitution(3)
        with pytest.raises(CharTwoUnsupported):
            StructureAnalyzer(w2_f4).psi_substitution(2)

    def test_graded_vanishing(self, w2_f3, w2_f4):
        assert StructureAnalyzer(w2_f3).graded_vanishing_check().passed
        with pytest.raises(CharTwoUnsupported):
            StructureAnalyzer(w2_f4).graded_vanishing_check()


class TestDeterminingPair:
    def test_pair_for_odd_p(self, w1_f3):
        analyzer = StructureAnalyzer(w1_f3)
        lam = default_regular(w1_f3.field, 1)
        d1, d2, branch = analyzer.determining_pair(lam)
        assert d1 == w1_f3.basis_element((1,), 1)
        assert d2 == w1_f3.sum_squares()
        assert branch.startswith("p>2")

    def test_recover_zero(self, w1_f3):
        analyzer = StructureAnalyzer(w1_f3)
        lam = default_regular(w1_f3.field, 1)
        assert analyzer.recover_inner(w1_f3.zero, w1_f3.zero, lam).is_zero()

    def test_recover_round_trip(self, w1_f3):
        analyzer = StructureAnalyzer(w1_f3)
        lam = default_regular(w1_f3.field, 1)
        d1, d2, _ = analyzer.determining_pair(lam)
        a = w1_f3.element({((0,), 1): 2, ((2,), 1): 1})
        got = analyzer.recover_inner(w1_f3.bracket(a, d1), w1_f3.bracket(a, d2), lam)
        assert got == a

    def test_inconsistent_pair(self, w1_f3):
        # [a, x D] never has an x D component
        analyzer = StructureAnalyzer(w1_f3)
        lam = default_regular(w1_f3.field, 1)
        v1 = w1_f3.basis_element((1,), 1)
        assert analyzer.recover_inner(v1, w1_f3.zero, lam) is UNSOLVABLE

    def test_check(self, w1_f3):
        report = StructureAnalyzer(w1_f3).determining_pair_check()
        assert report.passed
        assert report.dims["intersection"] == 0

    @pytest.mark.parametrize("fixture, branch", [("w2_f4", "p=2"), ("w2_f9", "p>2")])
    def test_check_rank_two(self, request, fixture, branch):
        algebra = request.getfixturevalue(fixture)
        report = StructureAnalyzer(algebra).determining_pair_check()
        assert report.passed, report.witness
        assert report.dims["intersection"] == 0
        assert report.details["branch"].startswith(branch)

    def test_char_two_uses_script_d(self, w2_f4):
        lam = default_regular(w2_f4.field, 2)
        d1, d2, branch = StructureAnalyzer(w2_f4).determining_pair(lam)
        assert d2 == w2_f4.script_d(1)
        assert branch.startswith("p=2")


class TestRootsAndIsomorphisms:
    def test_basis_weight(self):
        assert basis_weight(3, (0, 2), 1) == (2, 2)
        assert basis_weight(3, (1, 0), 1) == (0, 0)

    def test_root_decomposition(self, w2_f9):
        analyzer = StructureAnalyzer(w2_f9)
        decomposition = analyzer.root_decomposition(default_regular(w2_f9.field, 2))
        assert decomposition.total_dim() == w2_f9.dim
        assert decomposition.torus.dim == 2
        assert len(decomposition.parts) == 8
        assert decomposition.part((1, 0)).dim == 2

    def test_weight_eigenvalue(self, w2_f9):
        analyzer = StructureAnalyzer(w2_f9)
        lam = default_regular(w2_f9.field, 2)
        # x1 x2 D2 has root (1, 0), so ad d_lambda scales it by lambda_1
        assert analyzer.weight_eigenvalue(lam, (1, 1), 2) == lam.entries[0]
        X = w2_f9.basis_element((1, 1), 2)
        assert w2_f9.bracket(w2_f9.d_lambda(lam, 1), X) == X * lam.entries[0]

    def test_root_parts_are_eigenspaces(self, w2_f9):
        analyzer = StructureAnalyzer(w2_f9)
        lam = default_regular(w2_f9.field, 2)
        ad_d = w2_f9.ad_matrix(w2_f9.d_lambda(lam, 1)).matrix
        for root, U in analyzer.root_decomposition(lam).parts.items():
            eigen = lam.pairing(root)
            for v in U.rows:
                assert np.array_equal(ad_d @ v, w2_f9.field.vmul(v, eigen))

    def test_roots_check(self, w2_f9):
        report = StructureAnalyzer(w2_f9).roots_check()
        assert report.passed, report.witness
        assert report.dims["total"] == 18

    def test_change_of_variables(self, w2_f9):
        report = StructureAnalyzer(w2_f9).change_of_variables_check()
        assert report.passed, report.witness

    def test_phi_rejects_zero_leading_coefficient(self, w2_f3):
        with pytest.raises(BadParam):
            StructureAnalyzer(w2_f3).phi_iso([0, 1])

    def test_psi_respects_brackets(self, w2_f3):
        iso = StructureAnalyzer(w2_f3).psi_iso(1)
        assert iso.is_invertible()
        assert iso.bracket_failures() == []
        assert iso(D(w2_f3, 2)) == D(w2_f3, 2)


@pytest.mark.slow
def test_der_equals_inn_w2_f5():
    report = StructureAnalyzer(WittAlgebra(GaloisField(5), 2)).der_equals_inn()
    assert report.passed
    assert report.dims["der"] == 50
