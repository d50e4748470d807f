import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import (
    BadParam,
    CharTwoUnsupported,
    ContextMismatch,
    IndexOutOfRange,
    Infeasible,
    NotADerivation,
)
from core.galois_field import GaloisField
from core.witt_algebra import LinearOperator, WittAlgebra
from core.exact_linalg import ExactMatrix

F3 = GaloisField(3)
W2 = WittAlgebra(F3, 2)

elements = st.lists(st.integers(0, 2), min_size=18, max_size=18).map(
    lambda v: W2.from_vector(np.array(v)))


def D(A, i):
    return A.basis_element((0,) * A.n, i)


class TestBasis:
    def test_dimension(self, w1_f3, w2_f3, w2_f4):
        assert w1_f3.dim == 3
        assert w2_f3.dim == 18
        assert w2_f4.dim == 8

    def test_basis_order(self, w2_f3):
        assert w2_f3.basis[:3] == [((0, 0), 1), ((0, 0), 2), ((0, 1), 1)]
        assert w2_f3.index[((2, 2), 2)] == 17

    def test_repr(self, w2_f3, w2_f9, gf9):
        X = w2_f3.element({((1, 1), 1): 1, ((0, 0), 2): 2})
        assert repr(X) == "2*D2 + x1*x2*D1"
        Y = w2_f9.element({((1, 0), 1): gf9([1, 1])})
        assert repr(Y) == "(1+t)*x1*D1"
        assert repr(w2_f3.zero) == "0"

    def test_bad_direction(self, w2_f3):
        with pytest.raises(IndexOutOfRange):
            w2_f3.basis_element((0, 0), 3)

    def test_foreign_elements(self, w2_f3, w2_f9):
        with pytest.raises(ContextMismatch):
            w2_f3.bracket(D(w2_f3, 1), D(w2_f9, 1))


class TestBracket:
    def test_bracket_formula(self, w2_f3):
        x1_D2 = w2_f3.basis_element((1, 0), 2)
        assert w2_f3.bracket(D(w2_f3, 1), x1_D2) == D(w2_f3, 2)

    def test_euler_weights(self, w2_f3):
        x1_D1 = w2_f3.basis_element((1, 0), 1)
        X = w2_f3.basis_element((2, 1), 2)
        # [x1 D1, x1^2 x2 D2] = 2 x1^2 x2 D2
        assert w2_f3.bracket(x1_D1, X) == X * 2

    def test_truncation(self, w1_f3):
        x2 = w1_f3.basis_element((2,), 1)
        assert w1_f3.bracket(x2, x2).is_zero()
        # [x D, x^2 D] = x^2 D
        assert w1_f3.bracket(w1_f3.basis_element((1,), 1), x2) == x2

    def test_characteristic_two_bracket(self, w2_f4):
        # [x2 D2, x1 x2 D1] = x1 x2 D1
        x2_D2 = w2_f4.basis_element((0, 1), 2)
        x1x2_D1 = w2_f4.basis_element((1, 1), 1)
        assert w2_f4.bracket(x2_D2, x1x2_D1) == x1x2_D1

    def test_structure_constants(self, w2_f3):
        a = w2_f3.index[((0, 0), 1)]
        b = w2_f3.index[((1, 0), 2)]
        assert w2_f3.structure_constants(a, b) == {w2_f3.index[((0, 0), 2)]: 1}
        assert w2_f3.structure_constants(a, a) == {}

    @settings(max_examples=30)
    @given(elements, elements, elements)
    def test_alternating_and_jacobi(self, X, Y, Z):
        assert W2.bracket(X, X).is_zero()
        assert W2.bracket(X, Y) == -W2.bracket(Y, X)
        jacobi = (W2.bracket(W2.bracket(X, Y), Z) + W2.bracket(W2.bracket(Y, Z), X)
                  + W2.bracket(W2.bracket(Z, X), Y))
        assert jacobi.is_zero()

    @settings(max_examples=30)
    @given(elements, elements)
    def test_bracket_is_operator_commutator(self, X, Y):
        f = W2.trunc.poly({(1, 2): 1, (2, 0): 2, (0, 1): 1})
        lhs = W2.apply(W2.bracket(X, Y), f)
        rhs = W2.apply(X, W2.apply(Y, f)) - W2.apply(Y, W2.apply(X, f))
        assert lhs == rhs


class TestGradingAndAd:
    def test_graded_parts(self, w2_f3):
        X = D(w2_f3, 1) + w2_f3.basis_element((1, 1), 2)
        parts = w2_f3.graded_parts(X)
        assert parts.degrees() == [-1, 1]
        assert parts.part(-1) == D(w2_f3, 1)
        assert parts.part(0).is_zero()
        assert parts.reconstruct() == X
        assert list(w2_f3.degree_range) == [-1, 0, 1, 2, 3]

    def test_ad_matrix_columns(self, w2_f3):
        ad = w2_f3.ad_matrix(D(w2_f3, 1))
        v = w2_f3.to_vector(w2_f3.basis_element((1, 0), 2))
        assert np.array_equal(ad.matrix @ v, w2_f3.to_vector(D(w2_f3, 2)))

    def test_ad_of_euler_element_is_diagonal(self, w1_f3):
        ad = w1_f3.ad_matrix(w1_f3.basis_element((1,), 1))
        # diag(-1, 0, 1) on D, x D, x^2 D
        assert np.array_equal(ad.matrix.data, np.diag([2, 0, 1]))

    def test_ad_of_d_is_nilpotent(self, w1_f3):
        ad = w1_f3.ad_matrix(D(w1_f3, 1))
        # column j holds [D, e_j]: x D -> D, x^2 D -> 2 x D
        assert np.array_equal(ad.matrix.data, [[0, 1, 0], [0, 0, 2], [0, 0, 0]])
        square = w1_f3.operator_compose(ad, ad)
        assert not square.is_zero()
        assert w1_f3.operator_compose(square, ad).is_zero()

    def test_support_drops_cancelled_terms(self, w2_f4, gf4):
        x1_D2 = w2_f4.basis_element((1, 0), 2)
        assert w2_f4.support(x1_D2 + x1_D2 * gf4.gen) == {((1, 0), 2)}
        assert w2_f4.support(x1_D2 + x1_D2) == set()

    def test_dim_cap(self, gf3):
        small = WittAlgebra(gf3, 2, dim_cap=10)
        assert not small.within_cap()
        with pytest.raises(Infeasible):
            small.ad_matrix(D(small, 1))


class TestOperators:
    def test_apply(self, w1_f3):
        T = w1_f3.trunc
        assert w1_f3.apply(D(w1_f3, 1), T.x(1) ** 2) == T.x(1) * 2

    def test_operator_round_trip(self, w2_f3):
        X = w2_f3.element({((1, 0), 1): 1, ((2, 1), 2): 2, ((0, 0), 2): 1})
        op = w2_f3.as_operator(X)
        assert w2_f3.is_derivation_operator(op)
        assert w2_f3.operator_to_element(op) == X

    def test_identity_is_not_a_derivation(self, w2_f3):
        identity = LinearOperator('A', ExactMatrix.identity(w2_f3.field, w2_f3.trunc.dim))
        with pytest.raises(NotADerivation):
            w2_f3.operator_to_element(identity)

    def test_operator_power(self, w1_f3):
        assert w1_f3.operator_pow(D(w1_f3, 1), 3).is_zero()
        assert not w1_f3.operator_pow(D(w1_f3, 1), 2).is_zero()
        with pytest.raises(BadParam):
            w1_f3.operator_pow(D(w1_f3, 1), -1)

    def test_operator_power_matches_composition(self, w2_f3):
        X = w2_f3.script_d(1)
        op = w2_f3.as_operator(X)
        cube = w2_f3.operator_compose(op, w2_f3.operator_compose(op, op))
        assert w2_f3.operator_pow(X, 3) == cube
        assert w2_f3.operator_pow(X, 1) == op


class TestEnumeration:
    def test_order_first_coordinate_least_significant(self, w1_f2):
        listed = list(w1_f2.enumerate_elements())
        e_minus, e_zero = D(w1_f2, 1), w1_f2.basis_element((1,), 1)
        assert listed == [w1_f2.zero, e_minus, e_zero, e_minus + e_zero]

    def test_too_many_elements(self):
        with pytest.raises(Infeasible):
            list(WittAlgebra(GaloisField(5), 1).enumerate_elements())


class TestDistinguishedElements:
    def test_script_d(self, w2_f3, w2_f4):
        assert repr(w2_f3.script_d(1)) == "D1 + x1^2*D2"
        assert w2_f3.script_d(2) == D(w2_f3, 2)
        assert repr(w2_f4.script_d(1)) == "D1 + x1*D2"

    def test_torus_and_tori(self, w2_f3):
        x1_D1, x2_D2 = w2_f3.torus_basis()
        assert w2_f3.i_k(1) == x1_D1 + x2_D2
        assert w2_f3.i_k(2) == x1_D1 + x2_D2 * 2
        assert w2_f3.h(2) == x2_D2 + w2_f3.basis_element((1, 0), 2)
        assert w2_f3.t_k_basis(2) == [w2_f3.i_k(2), w2_f3.hh(2)]
        assert w2_f3.hh(2) == x2_D2 + w2_f3.basis_element((2, 0), 2)

    def test_first_torus_basis(self, w2_f3):
        x1_D1, x2_D2 = w2_f3.torus_basis()
        x1_D2 = w2_f3.basis_element((1, 0), 2)
        assert w2_f3.t_k_basis(1) == [x1_D1 + x2_D2, x2_D2 + x1_D2]

    def test_d_lambda(self, w2_f9, gf9):
        lam = [gf9.one, gf9.gen]
        d = w2_f9.d_lambda(lam, 1)
        assert d == w2_f9.element({((1, 0), 1): 1, ((0, 1), 2): gf9.gen})
        with pytest.raises(BadParam):
            w2_f9.d_lambda(lam, 3)

    def test_characteristic_two_refusals(self, w2_f4):
        with pytest.raises(CharTwoUnsupported):
            w2_f4.sum_squares()
        with pytest.raises(CharTwoUnsupported):
            w2_f4.hh(2)

    def test_special_lookup(self, w2_f3):
        assert w2_f3.special('script_D', i=1) == w2_f3.script_d(1)
        assert w2_f3.special('tau_term', j=2) == w2_f3.basis_element((2, 2), 2)
        with pytest.raises(BadParam):
            w2_f3.special('nope')
        with pytest.raises(BadParam):
            w2_f3.special('script_D', bogus=1)
