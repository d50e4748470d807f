"""
Two-Local Analyzer
Pointwise maps on W_n, the pair witness solver, derivation tests for full maps,
the W_1 / F_2 counterexample and the support check behind the main theorem.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from tqdm import tqdm

from config import DEFAULT_SEED, DELTA_SAMPLE_SIZE, SHOW_PROGRESS
from core.element_io import element_from_dict, element_to_dict, field_from_dict
from core.errors import (
    UNSOLVABLE,
    BadParam,
    DomainNotFull,
    ElementFormatError,
    Infeasible,
    OutOfDomain,
    Unsolvable,
    WittCheckError,
)
from core.exact_linalg import ExactMatrix, inverse, solve, span_of, intersect
from core.galois_field import GaloisField, default_regular
from core.structure import CheckReport, StructureAnalyzer, algebra_params
from core.witt_algebra import WittAlgebra, WittElement
from utils.logger import logger

COUNTEREXAMPLE_RULE = "k_-1 e_-1 + k_0 e_0 -> k_0 e_-1 if k_-1 != 0 else 0"
WITNESS_LIST_LIMIT = 64


# ==========================================
# POINTWISE MAPS
# ==========================================

@dataclass
class PointwiseMap:
    """A finite table X -> Delta(X); no linearity is assumed."""
    algebra: WittAlgebra
    domain: List[WittElement]
    images: List[WittElement]
    rule: Optional[str] = None

    def __post_init__(self):
        self.domain = list(self.domain)
        self.images = list(self.images)
        if len(self.domain) != len(self.images):
            raise BadParam(f"{len(self.domain)} domain entries but {len(self.images)} images")
        self._slot = {}
        for k, X in enumerate(self.domain):
            if X in self._slot:
                raise BadParam(f"domain entry {X!r} appears twice")
            self._slot[X] = k

    def __call__(self, X: WittElement) -> WittElement:
        k = self._slot.get(X)
        if k is None:
            raise OutOfDomain(f"{X!r} is not in the domain of the map")
        return self.images[k]

    def __contains__(self, X: WittElement) -> bool:
        return X in self._slot

    def __len__(self):
        return len(self.domain)

    def is_full(self) -> bool:
        return len(self.domain) == self.algebra.element_count()

    def to_dict(self) -> dict:
        doc = {
            "config": algebra_params(self.algebra),
            "pairs": [{"x": element_to_dict(X), "fx": element_to_dict(Y)}
                      for X, Y in zip(self.domain, self.images)],
        }
        if self.rule:
            doc["rule"] = self.rule
        return doc

    @classmethod
    def from_dict(cls, doc: dict, dim_cap: Optional[int] = None) -> 'PointwiseMap':
        try:
            config = doc["config"]
            pairs = doc["pairs"]
            field = field_from_dict({"p": config["p"], "deg": config["deg"],
                                     "modulus": config.get("modulus")})
            n = int(config["n"])
        except (KeyError, TypeError, ValueError) as e:
            raise ElementFormatError(f"malformed map document: {e}") from e
        algebra = WittAlgebra(field, n) if dim_cap is None else WittAlgebra(field, n, dim_cap)
        try:
            domain = [element_from_dict(pair["x"], algebra) for pair in pairs]
            images = [element_from_dict(pair["fx"], algebra) for pair in pairs]
            return cls(algebra, domain, images, doc.get("rule"))
        except (KeyError, TypeError) as e:
            raise ElementFormatError(f"malformed map pair: {e}") from e
        except BadParam as e:
            raise ElementFormatError(str(e)) from e


def zero_map(algebra: WittAlgebra, domain: Sequence[WittElement]) -> PointwiseMap:
    return PointwiseMap(algebra, domain, [algebra.zero] * len(domain), rule="zero")


def restriction_of_ad(b: WittElement, domain: Sequence[WittElement]) -> PointwiseMap:
    A = b.algebra
    return PointwiseMap(A, domain, [A.bracket(b, X) for X in domain], rule=f"ad({b!r})")


def counterexample_algebra() -> WittAlgebra:
    return WittAlgebra(GaloisField(2, 1), 1)


def counterexample_map() -> PointwiseMap:
    """k_-1 e_-1 + k_0 e_0 -> k_0 e_-1 when k_-1 != 0, else 0; e_-1 = D_1, e_0 = x_1 D_1."""
    A = counterexample_algebra()
    e_minus = A.basis_element((0,), 1)
    domain = list(A.enumerate_elements())
    images = []
    for X in domain:
        k_minus = X.coefficient((0,), 1)
        k_zero = X.coefficient((1,), 1)
        images.append(e_minus * k_zero if not k_minus.is_zero() else A.zero)
    return PointwiseMap(A, domain, images, rule=COUNTEREXAMPLE_RULE)


# ==========================================
# ANALYZER
# ==========================================

class TwoLocalAnalyzer:
    """Witness solving and map classification over one WittAlgebra."""

    def __init__(self, algebra: WittAlgebra, seed: int = DEFAULT_SEED, jobs: int = 1):
        self.algebra = algebra
        self.field = algebra.field
        self.seed = seed
        self.jobs = max(1, jobs)
        self.params = algebra_params(algebra)
        self._neg_ad: Dict[WittElement, np.ndarray] = {}

    def _minus_ad(self, X: WittElement) -> np.ndarray:
        cached = self._neg_ad.get(X)
        if cached is None:
            # [a, X] = -ad(X) a
            cached = self.field.vneg(self.algebra.ad_matrix(X).matrix.data)
            self._neg_ad[X] = cached
        return cached

    def _check_map(self, delta: PointwiseMap):
        if delta.algebra != self.algebra:
            raise BadParam(f"map lives on {delta.algebra}, analyzer on {self.algebra}")

    def witness_for_pair(self, delta: PointwiseMap, x: WittElement,
                         y: WittElement) -> Union[WittElement, Unsolvable]:
        """Some a with [a, x] = Delta(x) and [a, y] = Delta(y), or UNSOLVABLE."""
        self._check_map(delta)
        fx, fy = delta(x), delta(y)
        A = self.algebra
        M = ExactMatrix(self.field, np.vstack([self._minus_ad(x), self._minus_ad(y)]))
        b = np.concatenate([A.to_vector(fx), A.to_vector(fy)])
        sol = solve(M, b)
        if sol is UNSOLVABLE:
            return UNSOLVABLE
        a = A.from_vector(sol.particular)
        if A.bracket(a, x) != fx or A.bracket(a, y) != fy:
            raise WittCheckError(f"solver returned {a!r}, which is not a witness")
        return a

    def is_two_local(self, delta: PointwiseMap) -> CheckReport:
        self._check_map(delta)
        pairs = list(itertools.product(range(len(delta)), repeat=2))

        def run(pair):
            i, j = pair
            return self.witness_for_pair(delta, delta.domain[i], delta.domain[j])

        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(run, pairs))
        else:
            results = [run(pair) for pair in tqdm(pairs, desc="pairs", disable=not SHOW_PROGRESS)]

        failed = next(((i, j) for (i, j), a in zip(pairs, results) if a is UNSOLVABLE), None)
        homogeneous = self.homogeneity_failure(delta) is None
        witness = None
        if failed is not None:
            i, j = failed
            witness = {"x": element_to_dict(delta.domain[i]), "y": element_to_dict(delta.domain[j])}
        elif len(pairs) <= WITNESS_LIST_LIMIT:
            witness = {"witnesses": [{"x": i, "y": j, "a": element_to_dict(a)}
                                     for (i, j), a in zip(pairs, results)]}
        details = {"homogeneous": homogeneous}
        if delta.rule:
            details["rule"] = delta.rule
        return CheckReport(check='two-local', params=self.params,
                           status='pass' if failed is None else 'fail',
                           dims={"domain": len(delta), "pairs": len(pairs)},
                           witness=witness, details=details)

    def homogeneity_failure(self, delta: PointwiseMap) -> Optional[Tuple[int, int]]:
        """First (domain index, scalar) with Delta(kx) != k Delta(x), both points in the domain."""
        for idx, X in enumerate(delta.domain):
            for k in self.field.elements():
                kX = X * k
                if kX in delta and delta(kX) != delta.images[idx] * k:
                    return idx, k.value
        return None

    def is_derivation_map(self, delta: PointwiseMap) -> CheckReport:
        """Additivity, homogeneity and Leibniz on the whole (finite) algebra."""
        self._check_map(delta)
        if not delta.is_full():
            if self._is_basis(delta.domain):
                return self._linear_derivation_report(delta)
            raise DomainNotFull("a derivation test needs the whole algebra or a basis as domain")
        A = self.algebra
        dom = delta.domain
        witness = None

        for i, j in itertools.combinations_with_replacement(range(len(dom)), 2):
            x, y = dom[i], dom[j]
            if delta(x + y) != delta(x) + delta(y):
                witness = {"property": "additivity", "x": element_to_dict(x), "y": element_to_dict(y)}
                break
        if witness is None:
            failure = self.homogeneity_failure(delta)
            if failure is not None:
                idx, k = failure
                witness = {"property": "homogeneity", "x": element_to_dict(dom[idx]), "k": k}
        if witness is None:
            for x, y in itertools.product(dom, repeat=2):
                if delta(A.bracket(x, y)) != A.bracket(delta(x), y) + A.bracket(x, delta(y)):
                    witness = {"property": "leibniz", "x": element_to_dict(x), "y": element_to_dict(y)}
                    break

        return CheckReport(check='derivation', params=self.params,
                           status='pass' if witness is None else 'fail',
                           dims={"domain": len(dom)}, witness=witness,
                           details={"rule": delta.rule} if delta.rule else {})

    def _is_basis(self, elements: Sequence[WittElement]) -> bool:
        A = self.algebra
        if len(elements) != A.dim:
            return False
        return span_of(self.field, [A.to_vector(X) for X in elements], A.dim).dim == A.dim

    def _linear_derivation_report(self, delta: PointwiseMap) -> CheckReport:
        """Treat Delta as the linear map fixed by its values on a basis."""
        A = self.algebra
        F = self.field
        B = ExactMatrix(F, np.stack([A.to_vector(X) for X in delta.domain], axis=1))
        images = ExactMatrix(F, np.stack([A.to_vector(Y) for Y in delta.images], axis=1))
        D = (images @ inverse(B)).data
        bad = StructureAnalyzer(A, self.seed).leibniz_violations(D, range(A.dim))
        witness = {"property": "leibniz", "basis_index": bad[0]} if bad else None
        return CheckReport(check='derivation', params=self.params,
                           status='pass' if not bad else 'fail',
                           dims={"domain": len(delta)}, witness=witness,
                           details={"linear_extension": True})

    # ==========================================
    # W_1 OVER F_2
    # ==========================================

    def _require_counterexample_algebra(self):
        A = self.algebra
        if (A.n, A.p, self.field.m) != (1, 2, 1):
            raise Infeasible("the exhaustive scan only runs on W_1 over F_2")

    def exhaustive_scan_w1_p2(self) -> CheckReport:
        """Classify all 4^4 self-maps of W_1(F_2)."""
        self._require_counterexample_algebra()
        A = self.algebra
        elements = list(A.enumerate_elements())
        target = counterexample_map()
        two_local, derivations = [], []
        zero_fixed = homogeneous = True

        for images in itertools.product(elements, repeat=len(elements)):
            delta = PointwiseMap(A, elements, list(images))
            is_local = self.is_two_local(delta).passed
            is_der = self.is_derivation_map(delta).passed
            if is_local:
                two_local.append(delta)
                zero_fixed = zero_fixed and delta(A.zero).is_zero()
                homogeneous = homogeneous and self.homogeneity_failure(delta) is None
            if is_der:
                derivations.append(delta)

        local_images = [d.images for d in two_local]
        der_images = [d.images for d in derivations]
        contained = all(images in local_images for images in der_images)
        strict = target.images in local_images and target.images not in der_images
        ok = contained and strict and zero_fixed and homogeneous and len(derivations) == 4

        return CheckReport(check='exhaustive-scan', params=self.params,
                           status='pass' if ok else 'fail',
                           dims={"maps": len(elements) ** len(elements),
                                 "two_local": len(two_local), "derivations": len(derivations)},
                           details={"derivations_are_two_local": contained,
                                    "counterexample_strict": strict,
                                    "zero_fixed": zero_fixed, "homogeneous": homogeneous})

    def counterexample_check(self) -> CheckReport:
        """Two-local but not a derivation, with the expected witnesses."""
        analyzer = self if (self.algebra == counterexample_algebra()) else \
            TwoLocalAnalyzer(counterexample_algebra(), self.seed, self.jobs)
        A = analyzer.algebra
        delta = counterexample_map()
        e_minus = A.basis_element((0,), 1)
        e_zero = A.basis_element((1,), 1)

        local = analyzer.is_two_local(delta)
        derivation = analyzer.is_derivation_map(delta)
        expected_pair = {"property": "additivity",
                         "x": element_to_dict(e_minus), "y": element_to_dict(e_zero)}
        pair_witness = analyzer.witness_for_pair(delta, e_minus, e_minus + e_zero)
        scan = analyzer.exhaustive_scan_w1_p2()

        ok = (local.passed and not derivation.passed and derivation.witness == expected_pair
              and pair_witness == e_minus and scan.passed)
        if not ok:
            logger.warning("⚠️ Counterexample check failed")
        return CheckReport(
            check='counterexample', params=algebra_params(A),
            status='pass' if ok else 'fail',
            dims={"pairs": local.dims["pairs"], **scan.dims},
            witness={"additivity_failure": derivation.witness,
                     "pair_witness": element_to_dict(pair_witness)
                     if pair_witness is not UNSOLVABLE else None},
            details={"two_local": local.status, "derivation": derivation.status,
                     "rule": COUNTEREXAMPLE_RULE},
        )

    # ==========================================
    # SUPPORT OF TWO-LOCAL MAPS
    # ==========================================

    def delta_support_check(self) -> CheckReport:
        """
        Monomial lines are stable under the torus; a sampled map that is two-local against
        the determining pair and kills it sends each X into the span of supp(X).
        """
        structure = StructureAnalyzer(self.algebra, self.seed)
        structure.require_simple("support check")
        A = self.algebra
        F = self.field

        stable = True
        for t in A.torus_basis():
            for key in A.basis:
                image = A.bracket(t, A.element({key: 1}))
                if not set(image.terms) <= {key}:
                    stable = False

        lam = default_regular(F, A.n)
        d1, d2, branch = structure.determining_pair(lam)
        C1 = structure.elements_of(structure.centralizer(d1))
        C2 = structure.elements_of(structure.centralizer(d2))
        rng = structure.rng(6)

        wanted = DELTA_SAMPLE_SIZE
        if A.field.order ** A.dim < 4 * DELTA_SAMPLE_SIZE:
            wanted = min(wanted, A.element_count() // 2)
        sample = []
        while len(sample) < wanted:
            X = A.random_element(rng, density=0.3)
            if X not in sample and X != d1 and X != d2:
                sample.append(X)

        images = []
        nontrivial = 0
        for X in sample:
            V1 = span_of(F, [A.to_vector(A.bracket(c, X)) for c in C1], A.dim)
            V2 = span_of(F, [A.to_vector(A.bracket(c, X)) for c in C2], A.dim)
            V = intersect(V1, V2)
            coords = F.random_values(rng, size=V.dim)
            v = F.vmatmul(coords[None, :], V.rows).reshape(-1) if V.dim else np.zeros(A.dim, np.int64)
            images.append(A.from_vector(v))
            nontrivial += int(V.dim > 0)

        delta = PointwiseMap(A, sample + [d1, d2], images + [A.zero, A.zero], rule="sampled")
        witness = None
        for X in sample:
            for d in (d1, d2):
                if self.witness_for_pair(delta, X, d) is UNSOLVABLE:
                    witness = {"reason": "pair", "x": element_to_dict(X)}
                    break
            if witness:
                break
            if not set(delta(X).terms) <= set(X.terms):
                witness = {"reason": "support", "x": element_to_dict(X)}
                break

        ok = stable and witness is None
        return CheckReport(check='delta-support', params=self.params,
                           status='pass' if ok else 'fail',
                           dims={"sample": len(sample), "nonzero_images": nontrivial},
                           witness=witness, details={"torus_stable": stable, "branch": branch})
