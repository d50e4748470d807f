"""
Structure Analyzer
Centralizers, normalizers, derivation spaces, root decompositions, the substitution
isomorphisms, the determining pair, and the checks built on top of them.
"""

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from config import (
    DEFAULT_SEED,
    LEIBNIZ_RECHECK_FULL_DIM,
    LEIBNIZ_RECHECK_SAMPLE,
    PHI_TRIALS,
    RANDOM_REGULAR_VECTORS,
    ROUNDTRIP_TRIALS,
    SHOW_PROGRESS,
)
from core.element_io import element_to_dict
from core.errors import (
    UNSOLVABLE,
    BadParam,
    CharTwoUnsupported,
    ContextMismatch,
    ExcludedConfiguration,
    Unsolvable,
)
from core.exact_linalg import (
    ExactMatrix,
    SparseMatrix,
    SubspaceBasis,
    annihilator,
    intersect,
    kernel,
    solve,
    span_of,
)
from core.galois_field import FieldElement, RegularVector, default_regular, random_regular
from core.truncated import SubstitutionMap
from core.witt_algebra import LinearOperator, WittAlgebra, WittElement
from utils.logger import logger


# ==========================================
# REPORTS
# ==========================================

@dataclass
class CheckReport:
    check: str
    params: dict
    status: str                                   # pass | fail | infeasible
    dims: dict = dc_field(default_factory=dict)
    witness: Optional[dict] = None
    elapsed_ms: int = 0
    details: dict = dc_field(default_factory=dict)
    reason: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == 'pass'

    def to_dict(self) -> dict:
        out = {
            "check": self.check,
            "params": self.params,
            "status": self.status,
            "dims": self.dims,
            "witness": self.witness,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.details:
            out["details"] = self.details
        if self.reason:
            out["reason"] = self.reason
        return out


def algebra_params(algebra: WittAlgebra) -> dict:
    F = algebra.field
    return {"n": algebra.n, "p": F.p, "deg": F.m, "modulus": list(F.modulus)}


@dataclass
class RootDecomposition:
    lam: RegularVector
    torus: SubspaceBasis
    parts: Dict[Tuple[int, ...], SubspaceBasis]

    def total_dim(self) -> int:
        return self.torus.dim + sum(U.dim for U in self.parts.values())

    def part(self, root: Sequence[int]) -> Optional[SubspaceBasis]:
        return self.parts.get(tuple(root))


def basis_weight(p: int, alpha: Sequence[int], i: int) -> Tuple[int, ...]:
    """Root of x^alpha D_i: alpha - e_i reduced mod p."""
    return tuple((a - (1 if k == i - 1 else 0)) % p for k, a in enumerate(alpha))


# ==========================================
# INDUCED ISOMORPHISMS
# ==========================================

class InducedIsomorphism:
    """
    The Lie map E -> s ∘ E ∘ s^-1 induced by an invertible substitution s of truncated algebras.

    `apply` evaluates the conjugate on generators, E~ = sum_j s(E(s^-1(y_j))) D~_j;
    `conjugate_operator` forms the same map with operator matrices.
    """

    def __init__(self, source: WittAlgebra, target: WittAlgebra, substitution: SubstitutionMap):
        if substitution.source != source.trunc or substitution.target != target.trunc:
            raise ContextMismatch("substitution does not connect the given algebras")
        self.source = source
        self.target = target
        self.substitution = substitution
        self.inverse_substitution = substitution.inverse()

    @cached_property
    def _pulled_generators(self):
        return [self.inverse_substitution.apply(self.target.trunc.x(j))
                for j in range(1, self.target.n + 1)]

    def apply(self, E: WittElement) -> WittElement:
        components = [self.substitution.apply(self.source.apply(E, f))
                      for f in self._pulled_generators]
        return self.target.from_components(components)

    __call__ = apply

    def conjugate_operator(self, E: WittElement) -> WittElement:
        M = self.substitution.matrix
        M_inv = self.inverse_substitution.matrix
        op = self.source.as_operator(E)
        conj = LinearOperator('A', M @ op.matrix @ M_inv)
        return self.target.operator_to_element(conj)

    @cached_property
    def basis_images(self) -> List[WittElement]:
        return [self.apply(e) for e in self.source.basis_elements()]

    def is_invertible(self) -> bool:
        vectors = [self.target.to_vector(Y) for Y in self.basis_images]
        return span_of(self.target.field, vectors, self.target.dim).dim == self.source.dim

    def bracket_failures(self, limit: int = 1) -> List[Tuple[int, int]]:
        """Basis pairs (a, b) with f([e_a, e_b]) != [f(e_a), f(e_b)]."""
        images = self.basis_images
        basis = self.source.basis_elements()
        bad = []
        for a in range(self.source.dim):
            for b in range(a + 1, self.source.dim):
                lhs = self.apply(self.source.bracket(basis[a], basis[b]))
                if lhs != self.target.bracket(images[a], images[b]):
                    bad.append((a, b))
                    if len(bad) >= limit:
                        return bad
        return bad


# ==========================================
# ANALYZER
# ==========================================

class StructureAnalyzer:
    """Linear-algebraic questions about one WittAlgebra."""

    def __init__(self, algebra: WittAlgebra, seed: int = DEFAULT_SEED):
        self.algebra = algebra
        self.field = algebra.field
        self.seed = seed
        self.params = algebra_params(algebra)
        self._pair_cache: Dict[tuple, ExactMatrix] = {}

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    # --- refusals ---
    def is_excluded(self) -> bool:
        return self.algebra.n == 1 and self.algebra.p == 2

    def require_simple(self, what: str):
        if self.is_excluded():
            raise ExcludedConfiguration(f"{what} excludes W_1 in characteristic 2 (not simple)")

    def require_odd(self, what: str):
        if self.algebra.p == 2:
            raise CharTwoUnsupported(f"{what} needs p > 2")

    # --- subspaces of W_n ---
    def span(self, elements: Sequence[WittElement]) -> SubspaceBasis:
        return span_of(self.field, [self.algebra.to_vector(X) for X in elements], self.algebra.dim)

    def elements_of(self, U: SubspaceBasis) -> List[WittElement]:
        return [self.algebra.from_vector(v) for v in U.rows]

    def full_space(self) -> SubspaceBasis:
        return span_of(self.field, list(np.eye(self.algebra.dim, dtype=np.int64)), self.algebra.dim)

    def centralizer(self, X: WittElement) -> SubspaceBasis:
        return kernel(self.algebra.ad_matrix(X).matrix)

    def centralizer_of_set(self, S: Sequence[WittElement]) -> SubspaceBasis:
        if not S:
            self.algebra.require_cap("centralizer")
            return self.full_space()
        stacked = np.vstack([self.algebra.ad_matrix(X).matrix.data for X in S])
        return kernel(ExactMatrix(self.field, stacked))

    def normalizer(self, U: SubspaceBasis) -> SubspaceBasis:
        """{y : [u, y] in U for every u in U}."""
        self.algebra.require_cap("normalizer")
        ann = annihilator(U)
        if ann.dim == 0 or U.dim == 0:
            return self.full_space()
        blocks = [self.field.vmatmul(ann.rows, self.algebra.ad_matrix(u).matrix.data)
                  for u in self.elements_of(U)]
        return kernel(ExactMatrix(self.field, np.vstack(blocks)))

    def is_subalgebra(self, U: SubspaceBasis) -> bool:
        elems = self.elements_of(U)
        for a, X in enumerate(elems):
            for Y in elems[a + 1:]:
                if not U.contains(self.algebra.to_vector(self.algebra.bracket(X, Y))):
                    return False
        return True

    def is_abelian(self, elements: Sequence[WittElement]) -> bool:
        return all(self.algebra.bracket(X, Y).is_zero()
                   for a, X in enumerate(elements) for Y in elements[a + 1:])

    # ==========================================
    # DERIVATIONS
    # ==========================================

    def derivation_system(self) -> SparseMatrix:
        """
        Rows of D[e_a, e_b] - [D e_a, e_b] - [e_a, D e_b] = 0 for a < b, one per component k.

        The unknown D[r, c] sits in column r*dim + c.
        """
        A = self.algebra
        A.require_cap("derivation system")
        F = self.field
        dim = A.dim
        rows: List[Dict[int, int]] = []

        def put(row: Dict[int, int], col: int, value: int):
            v = F.add(row.get(col, 0), value)
            if v:
                row[col] = v
            else:
                row.pop(col, None)

        for a in range(dim):
            for b in range(a + 1, dim):
                block: Dict[int, Dict[int, int]] = {}
                for c, s in A.structure_constants(a, b).items():
                    for k in range(dim):
                        put(block.setdefault(k, {}), k * dim + c, s)
                for r in range(dim):
                    for k, s in A.structure_constants(r, b).items():
                        put(block.setdefault(k, {}), r * dim + a, F.neg(s))
                    for k, s in A.structure_constants(a, r).items():
                        put(block.setdefault(k, {}), r * dim + b, F.neg(s))
                rows.extend(row for row in block.values() if row)
        logger.info(f"✓ Derivation system for {A}: {len(rows)} rows, {dim * dim} unknowns")
        return SparseMatrix(F, dim * dim, rows)

    def derivation_space(self) -> SubspaceBasis:
        return kernel(self.derivation_system())

    @cached_property
    def _basis_ads(self) -> List[np.ndarray]:
        return [self.algebra.ad_matrix(e).matrix.data for e in self.algebra.basis_elements()]

    def inner_space(self) -> SubspaceBasis:
        dim = self.algebra.dim
        return span_of(self.field, [m.reshape(-1) for m in self._basis_ads], dim * dim)

    def leibniz_violations(self, D: np.ndarray, indices: Sequence[int]) -> List[int]:
        """Basis indices a where D ad(e_a) - ad(e_a) D != ad(D e_a)."""
        F = self.field
        ads = self._basis_ads
        bad = []
        for a in indices:
            lhs = F.vsub(F.vmatmul(D, ads[a]), F.vmatmul(ads[a], D))
            rhs = np.zeros_like(lhs)
            for r in np.nonzero(D[:, a])[0]:
                rhs = F.vadd(rhs, F.vmul(ads[r], int(D[r, a])))
            if not np.array_equal(lhs, rhs):
                bad.append(int(a))
        return bad

    def der_equals_inn(self) -> CheckReport:
        A = self.algebra
        dim = A.dim
        der = self.derivation_space()
        inn = self.inner_space()
        equal = der == inn

        if dim <= LEIBNIZ_RECHECK_FULL_DIM:
            indices = list(range(dim))
        else:
            indices = sorted(self.rng(1).choice(dim, size=LEIBNIZ_RECHECK_SAMPLE, replace=False).tolist())
        failing = None
        for v in der.rows:
            bad = self.leibniz_violations(v.reshape(dim, dim), indices)
            if bad:
                failing = {"basis_index": bad[0]}
                break
        contained = der.contains_space(inn)

        ok = equal and contained and failing is None and der.dim == inn.dim
        return CheckReport(
            check='der-inn',
            params=self.params,
            status='pass' if ok else 'fail',
            dims={"der": der.dim, "inn": inn.dim, "equal": equal},
            witness=failing,
            details={"inn_in_der": contained,
                     "leibniz_recheck": "all" if len(indices) == dim else f"sample of {len(indices)}"},
        )

    # ==========================================
    # ROOTS
    # ==========================================

    def weight_eigenvalue(self, lam: RegularVector, alpha: Sequence[int], i: int) -> FieldElement:
        """Eigenvalue of ad d_lambda on x^alpha D_i."""
        return self.field.wrap(lam.pairing(basis_weight(self.algebra.p, alpha, i)))

    def root_decomposition(self, lam: RegularVector) -> RootDecomposition:
        """Split W_n into eigenspaces of ad d_lambda; the root mu part has eigenvalue lambda(mu)."""
        A = self.algebra
        if len(lam) != A.n or lam.field != self.field:
            raise BadParam(f"regular vector must have {A.n} entries in {self.field}")
        F = self.field
        ad_d = A.ad_matrix(A.d_lambda(lam, 1)).matrix.data
        eye = np.eye(A.dim, dtype=np.int64)
        parts: Dict[Tuple[int, ...], SubspaceBasis] = {}
        torus = None
        # lambda regular: distinct roots give distinct eigenvalues
        for root in itertools.product(range(A.p), repeat=A.n):
            U = kernel(ExactMatrix(F, F.vsub(ad_d, eye * lam.pairing(root))))
            if not any(root):
                torus = U
            elif U.dim:
                parts[root] = U
        return RootDecomposition(lam, torus, parts)

    # ==========================================
    # ISOMORPHISMS
    # ==========================================

    def psi_substitution(self, k: int) -> SubstitutionMap:
        """x_1 -> x_1 and x_i -> x_i + x_1 (k = 1) or x_i + x_1^(1 + [i = k]) (k >= 2)."""
        A = self.algebra
        T = A.trunc
        if not isinstance(k, int) or not 1 <= k <= A.n:
            raise BadParam(f"k must lie in 1..{A.n}, got {k}")
        if k >= 2 and A.p == 2:
            raise CharTwoUnsupported("psi_k with k >= 2 needs x_1^2 != 0")
        images = [T.x(1)]
        for i in range(2, A.n + 1):
            shift = T.x(1) ** 2 if (k >= 2 and i == k) else T.x(1)
            images.append(T.x(i) + shift)
        return SubstitutionMap(T, T, images)

    def psi_iso(self, k: int) -> InducedIsomorphism:
        return InducedIsomorphism(self.algebra, self.algebra, self.psi_substitution(k))

    def phi_iso(self, c: Sequence[Union[FieldElement, int]]) -> InducedIsomorphism:
        """x_i -> c_i y_1 + (1 - [i = 1]) y_i, into the same algebra in variables y."""
        A = self.algebra
        if len(c) != A.n:
            raise BadParam(f"phi needs {A.n} coefficients, got {len(c)}")
        c = [self.field(x) for x in c]
        if c[0].is_zero():
            raise BadParam("phi needs c_1 != 0")
        target = WittAlgebra(self.field, A.n, A.dim_cap, var='y')
        Y = target.trunc
        images = [Y.x(1) * c[0]] + [Y.x(1) * c[i - 1] + Y.x(i) for i in range(2, A.n + 1)]
        return InducedIsomorphism(A, target, SubstitutionMap(A.trunc, Y, images))

    def phi_closed_form(self, iso: InducedIsomorphism, c: Sequence[FieldElement],
                        alpha: Sequence[int], i: int) -> WittElement:
        """Expected image of x^alpha D_i under the induced phi."""
        target = iso.target
        head = iso.substitution.image_of_monomial(alpha)
        if i >= 2:
            return target.from_components([head if j == i else target.trunc.zero
                                           for j in range(1, target.n + 1)])
        scale = c[0].inverse()
        components = [head * scale] + [head * (-(c[j - 1] * scale)) for j in range(2, target.n + 1)]
        return target.from_components(components)

    # ==========================================
    # DETERMINING PAIR
    # ==========================================

    def determining_pair(self, lam: RegularVector) -> Tuple[WittElement, WittElement, str]:
        self.require_simple("the determining pair")
        A = self.algebra
        d1 = A.d_lambda(lam, 1)
        if A.p > 2:
            return d1, A.sum_squares(), "p>2: (d_lambda, sum x_i^2 D_i)"
        return d1, A.script_d(1), "p=2: (d_lambda, script_D_1)"

    def _pair_system(self, d1: WittElement, d2: WittElement) -> ExactMatrix:
        key = (d1, d2)
        cache = self._pair_cache
        if key not in cache:
            # [a, d] = -ad(d) a
            blocks = [self.field.vneg(self.algebra.ad_matrix(d).matrix.data) for d in (d1, d2)]
            cache[key] = ExactMatrix(self.field, np.vstack(blocks))
        return cache[key]

    def recover_inner(self, v1: WittElement, v2: WittElement,
                      lam: RegularVector) -> Union[WittElement, Unsolvable]:
        """The a with [a, d_1] = v1 and [a, d_2] = v2, or UNSOLVABLE."""
        d1, d2, _ = self.determining_pair(lam)
        M = self._pair_system(d1, d2)
        b = np.concatenate([self.algebra.to_vector(v1), self.algebra.to_vector(v2)])
        sol = solve(M, b)
        if sol is UNSOLVABLE:
            return UNSOLVABLE
        if not sol.unique:
            logger.warning(f"⚠️ Determining pair of {self.algebra} leaves a {sol.kernel.dim}-dim ambiguity")
        return self.algebra.from_vector(sol.particular)

    # ==========================================
    # CHECKS
    # ==========================================

    def _report(self, name: str, ok: bool, dims: dict, witness=None, details=None) -> CheckReport:
        if not ok:
            logger.warning(f"⚠️ Check {name} failed for {self.params}")
        return CheckReport(check=name, params=self.params, status='pass' if ok else 'fail',
                           dims=dims, witness=witness, details=details or {})

    def _regular_vectors(self, count: int, salt: int) -> List[RegularVector]:
        rng = self.rng(salt)
        return [default_regular(self.field, self.algebra.n)] + \
            [random_regular(self.field, self.algebra.n, rng) for _ in range(count - 1)]

    def script_d_check(self) -> CheckReport:
        """Powers of D_1 against the elements script_D_i, with the sign found by computation."""
        A = self.algebra
        p = A.p
        ds = [A.script_d(i) for i in range(1, A.n + 1)]
        d1_op = A.as_operator(ds[0])
        signs, witness = [], None
        for i, Di in enumerate(ds, start=1):
            power = A.operator_pow(d1_op, p ** (i - 1))
            E = A.operator_to_element(power)
            if E == Di:
                observed = 1
            elif E == -Di:
                observed = -1
            else:
                observed = 0
            signs.append(observed)
            expected = 1 if (i % 2 == 1 or p == 2) else -1
            if observed != expected and witness is None:
                witness = {"i": i, "power": element_to_dict(E), "script_D": element_to_dict(Di)}

        nilpotent = A.operator_pow(ds[-1], p).is_zero()
        derivations = all(A.is_derivation_operator(A.as_operator(Di)) for Di in ds)

        generator_images = squares = True
        if p == 2:
            T = A.trunc
            zero_op = LinearOperator('A', ExactMatrix.zeros(self.field, T.dim, T.dim))
            for i, Di in enumerate(ds, start=1):
                successor = A.as_operator(ds[i]) if i < A.n else zero_op
                if A.operator_pow(Di, 2) != successor:
                    squares = False
                # D_i(x_j) = [i = j] for j <= i, x_i * ... * x_{j-1} for j > i
                for j in range(1, A.n + 1):
                    if j <= i:
                        expected_img = T.one if j == i else T.zero
                    else:
                        expected_img = T.monomial(tuple(1 if i - 1 <= k <= j - 2 else 0
                                                        for k in range(A.n)))
                    if A.apply(Di, T.x(j)) != expected_img:
                        generator_images = False

        ok = witness is None and nilpotent and derivations and generator_images and squares
        details = {"observed_signs": signs, "last_power_vanishes": nilpotent}
        if p == 2:
            details.update({"generator_images": generator_images, "squares": squares})
        return self._report('script-d', ok, dims={"n": A.n, "operator_dim": A.trunc.dim},
                            witness=witness, details=details)

    def centralizer_check(self) -> CheckReport:
        self.require_simple("centralizer lemma")
        A = self.algebra
        torus = self.span(A.torus_basis())
        dims = {}
        witness = None

        regular_ok = True
        for lam in tqdm(self._regular_vectors(RANDOM_REGULAR_VECTORS, 2), desc="centralizers",
                        disable=not SHOW_PROGRESS):
            C = self.centralizer(A.d_lambda(lam, 1))
            if C != torus:
                regular_ok = False
                witness = {"lambda": [list(x.coeffs) for x in lam], "dim": C.dim}
                break
        dims["centralizer_d_lambda"] = torus.dim if regular_ok else witness["dim"]

        D1 = A.script_d(1)
        C_d = self.centralizer(D1)
        script_span = self.span([A.script_d(i) for i in range(1, A.n + 1)])
        script_ok = C_d == script_span
        dims["centralizer_script_D1"] = C_d.dim

        closure_ok = self.is_subalgebra(C_d) and C_d.contains(A.to_vector(D1))
        squares_ok = True
        if A.p > 2:
            S = A.sum_squares()
            C_s = self.centralizer(S)
            meet = intersect(C_s, torus)
            squares_ok = meet.dim == 0
            closure_ok = closure_ok and self.is_subalgebra(C_s) and C_s.contains(A.to_vector(S))
            dims["centralizer_sum_squares"] = C_s.dim
            dims["sum_squares_meet_torus"] = meet.dim

        ok = regular_ok and script_ok and squares_ok and closure_ok
        return self._report('centralizers', ok, dims, witness,
                            details={"regular_vectors": RANDOM_REGULAR_VECTORS,
                                     "subalgebras": closure_ok})

    def torus_cartan_check(self) -> CheckReport:
        self.require_simple("Cartan subalgebra lemma")
        A = self.algebra
        T = A.trunc
        torus_elems = A.torus_basis()
        torus = self.span(torus_elems)
        failures = []

        if self.centralizer_of_set(torus_elems) != torus or self.normalizer(torus) != torus:
            failures.append("torus")

        ks = list(range(1, A.n + 1)) if A.p > 2 else [1]
        dims = {}
        for k in ks:
            basis = A.t_k_basis(k)
            U = self.span(basis)
            dims[f"T_{k}"] = U.dim
            if U.dim != A.n or not self.is_abelian(basis):
                failures.append(f"T_{k} shape")
            if self.centralizer_of_set(basis) != U:
                failures.append(f"T_{k} centralizer")
            if self.normalizer(U) != U:
                failures.append(f"T_{k} normalizer")

            iso = self.psi_iso(k)
            if not iso.is_invertible() or iso.bracket_failures():
                failures.append(f"psi_{k} homomorphism")
            if self.span([iso(t) for t in torus_elems]) != U:
                failures.append(f"psi_{k} image")

            # closed forms of psi_k on the torus generators
            x1 = T.x(1)
            first = [x1] + [(-x1) for _ in range(2, A.n + 1)]
            if k >= 2:
                first[k - 1] = x1 ** 2 * (-2)
            if iso(torus_elems[0]) != A.from_components(first):
                failures.append(f"psi_{k}(x_1 D_1)")
            for l in range(2, A.n + 1):
                expected = A.hh(k) if (k >= 2 and l == k) else A.h(l)
                if iso(torus_elems[l - 1]) != expected:
                    failures.append(f"psi_{k}(x_{l} D_{l})")

        details = {"tori": ks}
        if A.p == 2 and A.n >= 2:
            details["skipped"] = "T_k for k >= 2 needs p > 2"
        return self._report('torus-cartan', not failures, dims,
                            witness={"failures": failures} if failures else None, details=details)

    def graded_vanishing_check(self) -> CheckReport:
        self.require_odd("graded vanishing")
        A = self.algebra
        p = A.p
        bad = []

        C_s = self.centralizer(A.sum_squares())
        for X in self.elements_of(C_s):
            parts = A.graded_parts(X)
            if not parts.part(-1).is_zero() or not parts.part(0).is_zero():
                bad.append({"centralizer": "sum_squares", "element": element_to_dict(X)})
                break

        nu = [1] * A.n
        half = (p + 1) // 2
        C_nu = self.centralizer(A.d_lambda(nu, half))
        bound = (p - 1) // 2
        for X in self.elements_of(C_nu):
            parts = A.graded_parts(X)
            if any(not parts.part(d).is_zero() for d in range(-1, bound)):
                bad.append({"centralizer": f"d_nu^({half})", "element": element_to_dict(X)})
                break

        return self._report('graded-vanishing', not bad,
                            dims={"centralizer_sum_squares": C_s.dim, "centralizer_d_nu": C_nu.dim},
                            witness={"violations": bad} if bad else None,
                            details={"vanishing_below": bound})

    def determining_pair_check(self) -> CheckReport:
        A = self.algebra
        lam = default_regular(self.field, A.n)
        d1, d2, branch = self.determining_pair(lam)
        C1, C2 = self.centralizer(d1), self.centralizer(d2)
        meet = intersect(C1, C2)
        ok = meet.dim == 0

        if not self.recover_inner(A.zero, A.zero, lam).is_zero():
            ok = False

        rng = self.rng(3)
        witness = None
        for _ in tqdm(range(ROUNDTRIP_TRIALS), desc="roundtrip", disable=not SHOW_PROGRESS):
            a = A.random_element(rng)
            got = self.recover_inner(A.bracket(a, d1), A.bracket(a, d2), lam)
            if got is UNSOLVABLE or got != a:
                ok = False
                witness = {"a": element_to_dict(a)}
                break

        return self._report('determining-pair', ok,
                            dims={"centralizer_d1": C1.dim, "centralizer_d2": C2.dim,
                                  "intersection": meet.dim, "trials": ROUNDTRIP_TRIALS},
                            witness=witness, details={"branch": branch})

    def roots_check(self) -> CheckReport:
        A = self.algebra
        F = self.field
        lam = random_regular(F, A.n, self.rng(4))
        decomposition = self.root_decomposition(lam)
        torus = self.span(A.torus_basis())
        d = A.d_lambda(lam, 1)
        ad_d = A.ad_matrix(d).matrix
        torus_ads = [A.ad_matrix(t).matrix for t in A.torus_basis()]

        witness = None
        for root, U in decomposition.parts.items():
            eigen = lam.pairing(root)
            for v in U.rows:
                if not np.array_equal(ad_d @ v, F.vmul(v, eigen)):
                    witness = {"root": list(root), "reason": "eigenvalue"}
                for t_ad, r in zip(torus_ads, root):
                    if not np.array_equal(t_ad @ v, F.vmul(v, F.scalar(r))):
                        witness = {"root": list(root), "reason": "torus stability"}
            if witness:
                break

        # x^alpha D_i sits in its root part with eigenvalue lambda(alpha - e_i)
        placement_ok = True
        for alpha, i in A.basis:
            e = A.to_vector(A.basis_element(alpha, i))
            eigen = self.weight_eigenvalue(lam, alpha, i)
            part = decomposition.parts.get(basis_weight(A.p, alpha, i), decomposition.torus)
            if not (part.contains(e) and np.array_equal(ad_d @ e, F.vmul(e, eigen.value))):
                placement_ok = False
                break

        total = decomposition.total_dim()
        ok = (witness is None and placement_ok and total == A.dim
              and decomposition.torus == torus)
        return self._report('roots', ok,
                            dims={"total": total, "torus": decomposition.torus.dim,
                                  "roots": len(decomposition.parts)},
                            witness=witness)

    def change_of_variables_check(self) -> CheckReport:
        A = self.algebra
        rng = self.rng(5)
        choices = [[1] + [0] * (A.n - 1)]
        for _ in range(PHI_TRIALS):
            c = [int(x) for x in self.field.random_values(rng, size=A.n)]
            c[0] = int(self.field.random_values(rng, nonzero=True))
            choices.append(c)

        failures = []
        for t, raw in enumerate(choices):
            c = [self.field.wrap(x) for x in raw]
            iso = self.phi_iso(c)
            if not iso.is_invertible():
                failures.append({"trial": t, "reason": "not invertible"})
                continue
            if iso.bracket_failures():
                failures.append({"trial": t, "reason": "bracket"})
            for (alpha, i), image in zip(A.basis, iso.basis_images):
                if image != self.phi_closed_form(iso, c, alpha, i):
                    failures.append({"trial": t, "reason": "closed form", "alpha": list(alpha), "i": i})
                    break
            sample = A.basis_elements()[:: max(1, A.dim // 4)]
            if any(iso.conjugate_operator(E) != iso(E) for E in sample):
                failures.append({"trial": t, "reason": "operator conjugation"})
            # top-degree normalization: x^tau * sum c_i D_i goes to phi(x^tau) D~_1
            top = A.from_components([A.trunc.monomial(A.trunc.tau) * ci for ci in c])
            head = iso.substitution.image_of_monomial(A.trunc.tau)
            expected = iso.target.from_components([head] + [iso.target.trunc.zero] * (A.n - 1))
            if iso(top) != expected:
                failures.append({"trial": t, "reason": "top term"})

        return self._report('change-of-variables', not failures,
                            dims={"trials": len(choices), "dim": A.dim},
                            witness={"failures": failures} if failures else None)
