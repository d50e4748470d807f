"""
Property Suites
Seeded randomized checks of the algebraic laws every module relies on.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
from tqdm import tqdm

from config import DEFAULT_SEED, PROPERTY_TRIALS, SHOW_PROGRESS
from core.exact_linalg import ExactMatrix, intersect, kernel, rank, span_of, subspace_sum
from core.structure import CheckReport, algebra_params
from core.witt_algebra import WittAlgebra, WittElement
from utils.logger import logger


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int = 0
    first_failure: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


class PropertySuite:
    """Each suite draws `trials` cases from its own seeded generator."""

    def __init__(self, algebra: WittAlgebra, seed: int = DEFAULT_SEED, trials: int = PROPERTY_TRIALS):
        self.algebra = algebra
        self.field = algebra.field
        self.trunc = algebra.trunc
        self.seed = seed
        self.trials = trials

    def _rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, 100 + salt])

    def _sparse_element(self, rng: np.random.Generator, max_terms: int = 3) -> WittElement:
        A = self.algebra
        k = int(rng.integers(1, max_terms + 1))
        picks = rng.choice(A.dim, size=min(k, A.dim), replace=False)
        values = self.field.random_values(rng, size=len(picks), nonzero=True)
        return A.element({A.basis[int(j)]: self.field.wrap(int(v)) for j, v in zip(picks, values)})

    def _run(self, name: str, salt: int, case: Callable[[np.random.Generator], Optional[dict]]) -> SuiteResult:
        rng = self._rng(salt)
        result = SuiteResult(name, self.trials)
        for _ in tqdm(range(self.trials), desc=name, disable=not SHOW_PROGRESS):
            problem = case(rng)
            if problem is not None:
                result.failures += 1
                if result.first_failure is None:
                    result.first_failure = problem
        if result.failures:
            logger.warning(f"⚠️ Property suite {name}: {result.failures} failures")
        return result

    # ==========================================
    # SUITES
    # ==========================================

    def field_axioms(self) -> SuiteResult:
        F = self.field
        q = F.order

        def case(rng):
            a, b, c = (F.wrap(int(v)) for v in F.random_values(rng, size=3))
            if (a + b) + c != a + (b + c) or (a * b) * c != a * (b * c):
                return {"law": "associativity", "a": a.value, "b": b.value, "c": c.value}
            if a + b != b + a or a * b != b * a:
                return {"law": "commutativity", "a": a.value, "b": b.value}
            if a * (b + c) != a * b + a * c:
                return {"law": "distributivity", "a": a.value, "b": b.value, "c": c.value}
            if (a + b) ** F.p != a ** F.p + b ** F.p:
                return {"law": "frobenius", "a": a.value, "b": b.value}
            if not a.is_zero():
                if a * a.inverse() != F.one or a ** (q - 1) != F.one:
                    return {"law": "inverse", "a": a.value}
            return None

        return self._run("field_axioms", 1, case)

    def truncated_laws(self) -> SuiteResult:
        T = self.trunc

        def case(rng):
            f, g, h = (T.random_poly(rng, density=0.3) for _ in range(3))
            if T.poly_mul(f, g) != T.poly_mul(g, f):
                return {"law": "commutativity"}
            if T.poly_mul(T.poly_mul(f, g), h) != T.poly_mul(f, T.poly_mul(g, h)):
                return {"law": "associativity"}
            i = int(rng.integers(1, T.n + 1))
            j = int(rng.integers(1, T.n + 1))
            fg = T.poly_mul(f, g)
            if T.d_i(i, fg) != T.poly_mul(T.d_i(i, f), g) + T.poly_mul(f, T.d_i(i, g)):
                return {"law": "leibniz", "i": i}
            if T.d_i(i, T.d_i(j, f)) != T.d_i(j, T.d_i(i, f)):
                return {"law": "commuting partials", "i": i, "j": j}
            power = f
            for _ in range(T.p):
                power = T.d_i(i, power)
            if not power.is_zero():
                return {"law": "nilpotent partials", "i": i}
            allowed = {a + b for a in T.degree(f) for b in T.degree(g)}
            if not T.degree(fg) <= allowed:
                return {"law": "grading"}
            return None

        return self._run("truncated_laws", 2, case)

    def jacobi(self) -> SuiteResult:
        A = self.algebra

        def case(rng):
            X, Y, Z = (self._sparse_element(rng) for _ in range(3))
            if not A.bracket(X, X).is_zero():
                return {"law": "alternating", "x": repr(X)}
            total = (A.bracket(A.bracket(X, Y), Z) + A.bracket(A.bracket(Y, Z), X)
                     + A.bracket(A.bracket(Z, X), Y))
            if not total.is_zero():
                return {"law": "jacobi", "x": repr(X), "y": repr(Y), "z": repr(Z)}
            return None

        return self._run("jacobi", 3, case)

    def operator_leibniz(self) -> SuiteResult:
        """W_n acts on A_n by derivations, and the action turns brackets into commutators."""
        A = self.algebra
        T = self.trunc

        def case(rng):
            X, Y = self._sparse_element(rng), self._sparse_element(rng)
            f, g = T.random_poly(rng, density=0.3), T.random_poly(rng, density=0.3)
            if A.apply(X, T.poly_mul(f, g)) != T.poly_mul(A.apply(X, f), g) + T.poly_mul(f, A.apply(X, g)):
                return {"law": "leibniz", "x": repr(X)}
            commutator = A.apply(X, A.apply(Y, f)) - A.apply(Y, A.apply(X, f))
            if A.apply(A.bracket(X, Y), f) != commutator:
                return {"law": "commutator", "x": repr(X), "y": repr(Y)}
            return None

        return self._run("operator_leibniz", 4, case)

    def grading(self) -> SuiteResult:
        A = self.algebra

        def case(rng):
            X, Y = self._sparse_element(rng), self._sparse_element(rng)
            px, py = A.graded_parts(X), A.graded_parts(Y)
            if px.reconstruct() != X:
                return {"law": "reconstruction", "x": repr(X)}
            for i in px.degrees():
                for j in py.degrees():
                    Z = A.bracket(px.part(i), py.part(j))
                    if any(d != i + j for d in A.graded_parts(Z).degrees()):
                        return {"law": "degree", "i": i, "j": j}
            return None

        return self._run("grading", 5, case)

    def torus_stability(self) -> SuiteResult:
        A = self.algebra
        F = self.field
        torus = A.torus_basis()

        def case(rng):
            coeffs = F.random_values(rng, size=A.n)
            t = A.zero
            for c, x in zip(coeffs, torus):
                t = t + x * F.wrap(int(c))
            key = A.basis[int(rng.integers(0, A.dim))]
            image = A.bracket(t, A.element({key: 1}))
            if not set(image.terms) <= {key}:
                return {"law": "monomial line", "key": [list(key[0]), key[1]]}
            return None

        return self._run("torus_stability", 6, case)

    def rank_nullity(self) -> SuiteResult:
        F = self.field

        def case(rng):
            rows, cols = (int(v) for v in rng.integers(1, 8, size=2))
            data = F.random_values(rng, size=(rows, cols))
            # sprinkle zeros so that kernels are not always trivial
            data = np.where(rng.random((rows, cols)) < 0.4, 0, data)
            M = ExactMatrix(F, data)
            K = kernel(M)
            if rank(M) + K.dim != cols:
                return {"law": "rank-nullity", "shape": [rows, cols]}
            if any((M @ v).any() for v in K.rows):
                return {"law": "kernel", "shape": [rows, cols]}
            U = span_of(F, list(F.random_values(rng, size=(2, cols))), cols)
            V = span_of(F, list(F.random_values(rng, size=(2, cols))), cols)
            meet = intersect(U, V)
            if U.dim + V.dim != subspace_sum(U, V).dim + meet.dim:
                return {"law": "dimension formula", "cols": cols}
            if not (U.contains_space(meet) and V.contains_space(meet)):
                return {"law": "intersection inclusion", "cols": cols}
            return None

        return self._run("rank_nullity", 7, case)

    # ==========================================
    # REPORT
    # ==========================================

    def run_all(self) -> List[SuiteResult]:
        return [self.field_axioms(), self.truncated_laws(), self.jacobi(), self.operator_leibniz(),
                self.grading(), self.torus_stability(), self.rank_nullity()]

    def report(self) -> CheckReport:
        results = self.run_all()
        failed = [r for r in results if not r.passed]
        witness = {r.name: r.first_failure for r in failed} if failed else None
        return CheckReport(
            check='properties',
            params=algebra_params(self.algebra),
            status='fail' if failed else 'pass',
            dims={r.name: r.cases for r in results},
            witness=witness,
            details={"seed": self.seed, "failures": {r.name: r.failures for r in results}},
        )
