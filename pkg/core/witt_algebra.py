"""
Witt Algebra
Elements of W_n = Der(A_n), the bracket, the grading, the action on A_n and the
distinguished elements used by the structure checks.

Basis order is fixed: exponent vectors lexicographically ascending, then direction.
"""

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from config import DIM_CAP, FULL_ENUMERATION_LIMIT
from core.errors import (
    BadParam,
    CharTwoUnsupported,
    ContextMismatch,
    DimensionMismatch,
    IndexOutOfRange,
    Infeasible,
    NotADerivation,
    WittCheckError,
)
from core.exact_linalg import ExactMatrix
from core.galois_field import FieldElement, GaloisField, format_coeffs
from core.truncated import Monomial, TruncatedAlgebra, TruncPoly, format_monomial
from utils.logger import logger

BasisKey = Tuple[Monomial, int]


class WittAlgebra:
    """W_n over `field` in variables var1..varn."""

    def __init__(self, field: GaloisField, n: int, dim_cap: int = DIM_CAP, var: str = 'x'):
        self.trunc = TruncatedAlgebra(field, n, var)
        self.field = field
        self.n = n
        self.p = field.p
        self.var = var
        self.dim_cap = dim_cap
        self._structure: Dict[Tuple[int, int], Dict[int, int]] = {}

    def __eq__(self, other):
        return (isinstance(other, WittAlgebra) and other.field == self.field
                and other.n == self.n and other.var == self.var)

    def __hash__(self):
        return hash((self.field, self.n, self.var))

    def __repr__(self):
        return f"W_{self.n}({self.field}, var='{self.var}')"

    @property
    def dim(self) -> int:
        return self.n * self.p ** self.n

    def within_cap(self) -> bool:
        return self.dim <= self.dim_cap

    def require_cap(self, what: str = "this computation"):
        if not self.within_cap():
            raise Infeasible(f"{what} needs dimension {self.dim} > dim cap {self.dim_cap}")

    # --- basis ---
    @cached_property
    def basis(self) -> List[BasisKey]:
        return [(alpha, i) for alpha in self.trunc.monomials for i in range(1, self.n + 1)]

    @cached_property
    def index(self) -> Dict[BasisKey, int]:
        return {key: k for k, key in enumerate(self.basis)}

    def basis_element(self, alpha: Sequence[int], i: int) -> 'WittElement':
        return self.element({(tuple(alpha), i): 1})

    def basis_elements(self) -> List['WittElement']:
        return [WittElement(self, {key: 1}) for key in self.basis]

    # --- constructors ---
    def element(self, terms: Dict[BasisKey, Union[int, FieldElement]]) -> 'WittElement':
        F = self.field
        clean: Dict[BasisKey, int] = {}
        for (alpha, i), c in terms.items():
            self.trunc._check_monomial(alpha)
            self.trunc._check_direction(i)
            key = (tuple(alpha), i)
            v = F.add(clean.get(key, 0), self.trunc._coefficient(c))
            if v:
                clean[key] = v
            else:
                clean.pop(key, None)
        return WittElement(self, clean)

    @property
    def zero(self) -> 'WittElement':
        return WittElement(self, {})

    def from_components(self, polys: Sequence[TruncPoly]) -> 'WittElement':
        """sum_j polys[j-1] * D_j."""
        if len(polys) != self.n:
            raise DimensionMismatch(f"{len(polys)} components for {self.n} directions")
        terms = {}
        for j, f in enumerate(polys, start=1):
            self.trunc._check_member(f)
            for alpha, c in f.terms.items():
                terms[(alpha, j)] = c
        return WittElement(self, terms)

    def components(self, X: 'WittElement') -> List[TruncPoly]:
        self._check(X)
        parts: List[Dict[Monomial, int]] = [{} for _ in range(self.n)]
        for (alpha, i), c in X.terms.items():
            parts[i - 1][alpha] = c
        return [TruncPoly(self.trunc, part) for part in parts]

    def _check(self, X: 'WittElement'):
        if not isinstance(X, WittElement) or X.algebra != self:
            raise ContextMismatch(f"{X!r} is not an element of {self}")

    # ==========================================
    # BRACKET
    # ==========================================

    def _basis_bracket(self, a: int, b: int) -> Dict[int, int]:
        """[e_a, e_b] as {basis index: encoding}, cached per pair."""
        cached = self._structure.get((a, b))
        if cached is not None:
            return cached
        (alpha, i), (beta, j) = self.basis[a], self.basis[b]
        F = self.field
        out: Dict[int, int] = {}
        # [x^a D_i, x^b D_j] = b_i x^(a+b-e_i) D_j - a_j x^(a+b-e_j) D_i
        for coeff, drop, direction in ((beta[i - 1], i, j), (-alpha[j - 1], j, i)):
            if coeff % self.p == 0:
                continue
            gamma = tuple(x + y - (1 if k == drop - 1 else 0)
                          for k, (x, y) in enumerate(zip(alpha, beta)))
            if any(g > self.p - 1 for g in gamma):
                continue
            k = self.index[(gamma, direction)]
            v = F.add(out.get(k, 0), F.scalar(coeff))
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        self._structure[(a, b)] = out
        return out

    def structure_constants(self, a: int, b: int) -> Dict[int, int]:
        """Nonzero coordinates of [e_a, e_b], keyed by basis index."""
        return dict(self._basis_bracket(a, b))

    def bracket(self, X: 'WittElement', Y: 'WittElement') -> 'WittElement':
        self._check(X)
        self._check(Y)
        F = self.field
        acc: Dict[int, int] = {}
        for kx, a in X.terms.items():
            ia = self.index[kx]
            for ky, b in Y.terms.items():
                ab = F.mul(a, b)
                for k, s in self._basis_bracket(ia, self.index[ky]).items():
                    acc[k] = F.add(acc.get(k, 0), F.mul(ab, s))
        return WittElement(self, {self.basis[k]: v for k, v in acc.items() if v})

    # ==========================================
    # GRADING AND SUPPORT
    # ==========================================

    def graded_parts(self, X: 'WittElement') -> 'GradedDecomposition':
        self._check(X)
        parts: Dict[int, Dict[BasisKey, int]] = {}
        for (alpha, i), c in X.terms.items():
            parts.setdefault(sum(alpha) - 1, {})[(alpha, i)] = c
        return GradedDecomposition(self, {d: WittElement(self, t) for d, t in parts.items()})

    def support(self, X: 'WittElement') -> Set[BasisKey]:
        self._check(X)
        return set(X.terms)

    @property
    def degree_range(self) -> range:
        return range(-1, self.n * (self.p - 1))

    # ==========================================
    # COORDINATES, AD AND OPERATORS ON A_n
    # ==========================================

    def to_vector(self, X: 'WittElement') -> np.ndarray:
        self._check(X)
        v = np.zeros(self.dim, dtype=np.int64)
        for key, c in X.terms.items():
            v[self.index[key]] = c
        return v

    def from_vector(self, v) -> 'WittElement':
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"coordinate vector of length {v.shape} for dimension {self.dim}")
        return WittElement(self, {self.basis[k]: int(v[k]) for k in np.nonzero(v)[0]})

    def ad_matrix(self, X: 'WittElement') -> 'LinearOperator':
        """Column j holds the coordinates of [X, e_j]."""
        self._check(X)
        self.require_cap("ad matrix")
        F = self.field
        M = np.zeros((self.dim, self.dim), dtype=np.int64)
        for kx, a in X.terms.items():
            ia = self.index[kx]
            for j in range(self.dim):
                for k, s in self._basis_bracket(ia, j).items():
                    M[k, j] = F.add(int(M[k, j]), F.mul(a, s))
        return LinearOperator('W', ExactMatrix(F, M))

    def apply(self, X: 'WittElement', f: TruncPoly) -> TruncPoly:
        """X(f) = sum a_{alpha,i} x^alpha D_i(f)."""
        self._check(X)
        out = self.trunc.zero
        for i, comp in enumerate(self.components(X), start=1):
            if comp.is_zero():
                continue
            df = self.trunc.d_i(i, f)
            if not df.is_zero():
                out = out + self.trunc.poly_mul(comp, df)
        return out

    def as_operator(self, X: 'WittElement') -> 'LinearOperator':
        """Matrix of X acting on A_n in the monomial basis."""
        self._check(X)
        columns = [self.trunc.to_vector(self.apply(X, self.trunc.monomial(beta)))
                   for beta in self.trunc.monomials]
        return LinearOperator('A', ExactMatrix(self.field, np.stack(columns, axis=1)))

    def operator_image(self, op: 'LinearOperator', f: TruncPoly) -> TruncPoly:
        if op.carrier != 'A' or op.matrix.rows != self.trunc.dim:
            raise DimensionMismatch(f"operator does not act on {self.trunc}")
        return self.trunc.from_vector(op.matrix @ self.trunc.to_vector(f))

    def is_derivation_operator(self, op: 'LinearOperator') -> bool:
        """Leibniz law on every pair of basis monomials."""
        T = self.trunc
        images = {alpha: self.operator_image(op, T.monomial(alpha)) for alpha in T.monomials}
        for a_idx, alpha in enumerate(T.monomials):
            xa = T.monomial(alpha)
            for beta in T.monomials[a_idx:]:
                xb = T.monomial(beta)
                lhs = self.operator_image(op, T.poly_mul(xa, xb))
                rhs = T.poly_mul(images[alpha], xb) + T.poly_mul(xa, images[beta])
                if lhs != rhs:
                    return False
        return True

    def operator_to_element(self, op: 'LinearOperator') -> 'WittElement':
        """Read a derivation off the images of the generators: E = sum_j E(x_j) D_j."""
        if not self.is_derivation_operator(op):
            raise NotADerivation("operator violates the Leibniz law on A_n")
        return self.from_components([self.operator_image(op, self.trunc.x(j))
                                     for j in range(1, self.n + 1)])

    @staticmethod
    def operator_compose(first: 'LinearOperator', second: 'LinearOperator') -> 'LinearOperator':
        """first ∘ second."""
        return first @ second

    def operator_pow(self, X: Union['WittElement', 'LinearOperator'], k: int) -> 'LinearOperator':
        if k < 0:
            raise BadParam(f"operator power must be non-negative, got {k}")
        op = X if isinstance(X, LinearOperator) else self.as_operator(X)
        result = LinearOperator('A', ExactMatrix.identity(self.field, self.trunc.dim))
        base = op
        while k:
            if k & 1:
                result = self.operator_compose(result, base)
            base = self.operator_compose(base, base)
            k >>= 1
        return result

    # ==========================================
    # SAMPLING AND ENUMERATION
    # ==========================================

    def random_element(self, rng: np.random.Generator, density: float = 0.5) -> 'WittElement':
        values = self.field.random_values(rng, size=self.dim)
        keep = rng.random(self.dim) < density
        return self.from_vector(np.where(keep, values, 0))

    def element_count(self) -> int:
        return self.field.order ** self.dim

    def enumerate_elements(self) -> Iterator['WittElement']:
        """Every element, first coordinate least significant."""
        total = self.element_count()
        if total > FULL_ENUMERATION_LIMIT:
            raise Infeasible(f"{self} has too many elements to enumerate")
        q = self.field.order
        for code in range(total):
            v = np.zeros(self.dim, dtype=np.int64)
            for k in range(self.dim):
                v[k] = code % q
                code //= q
            yield self.from_vector(v)

    # ==========================================
    # DISTINGUISHED ELEMENTS
    # ==========================================

    def _unit(self, k: int) -> Monomial:
        return tuple(1 if j == k - 1 else 0 for j in range(self.n))

    def _power(self, k: int, e: int) -> Monomial:
        return tuple(e if j == k - 1 else 0 for j in range(self.n))

    def d_lambda(self, lam: Sequence[Union[FieldElement, int]], k: int = 1) -> 'WittElement':
        """sum_i lam_i x_i^k D_i."""
        if len(lam) != self.n:
            raise BadParam(f"coefficient vector needs {self.n} entries, got {len(lam)}")
        if not 0 <= k <= self.p - 1:
            raise BadParam(f"exponent k must lie in 0..{self.p - 1}, got {k}")
        return self.element({(self._power(i, k), i): c for i, c in enumerate(lam, start=1)})

    def script_d(self, i: int) -> 'WittElement':
        """D_i + sum_{j=i}^{n-1} (prod_{k=i}^{j} x_k^(p-1)) D_{j+1}."""
        self.trunc._check_direction(i)
        terms = {((0,) * self.n, i): 1}
        for j in range(i, self.n):
            alpha = tuple(self.p - 1 if i - 1 <= k <= j - 1 else 0 for k in range(self.n))
            terms[(alpha, j + 1)] = 1
        return self.element(terms)

    def torus_basis(self) -> List['WittElement']:
        return [self.basis_element(self._unit(i), i) for i in range(1, self.n + 1)]

    def i_k(self, k: int = 1) -> 'WittElement':
        """I_1 = sum x_i D_i; I_k = x_k D_k + I_1 for k >= 2."""
        self.trunc._check_direction(k)
        total = self.element({(self._unit(i), i): 1 for i in range(1, self.n + 1)})
        if k == 1:
            return total
        return total + self.basis_element(self._unit(k), k)

    def h(self, j: int) -> 'WittElement':
        """x_j D_j + x_1 D_j, for 2 <= j <= n."""
        self.trunc._check_direction(j)
        if j < 2:
            raise BadParam("h_j is defined for 2 <= j <= n")
        return self.element({(self._unit(j), j): 1, (self._unit(1), j): 1})

    def hh(self, k: int) -> 'WittElement':
        """x_k D_k + x_1^2 D_k, for 2 <= k <= n and p > 2."""
        self.trunc._check_direction(k)
        if k < 2:
            raise BadParam("hh_k is defined for 2 <= k <= n")
        if self.p == 2:
            raise CharTwoUnsupported("x_1^2 vanishes in characteristic 2")
        return self.element({(self._unit(k), k): 1, (self._power(1, 2), k): 1})

    def t_k_basis(self, k: int = 1) -> List['WittElement']:
        self.trunc._check_direction(k)
        if k == 1:
            return [self.i_k(1)] + [self.h(j) for j in range(2, self.n + 1)]
        if self.p == 2:
            raise CharTwoUnsupported("the tori T_k with k >= 2 need p > 2")
        return ([self.i_k(k)] + [self.h(j) for j in range(2, self.n + 1) if j != k]
                + [self.hh(k)])

    def sum_squares(self) -> 'WittElement':
        if self.p == 2:
            raise CharTwoUnsupported("sum of x_i^2 D_i vanishes in characteristic 2")
        return self.element({(self._power(i, 2), i): 1 for i in range(1, self.n + 1)})

    def tau_term(self, j: int) -> 'WittElement':
        self.trunc._check_direction(j)
        return self.basis_element(self.trunc.tau, j)

    _SPECIALS = {
        'd_lambda_k': 'd_lambda',
        'script_D': 'script_d',
        'torus_basis': 'torus_basis',
        'I_k': 'i_k',
        'h_j': 'h',
        'hh_k': 'hh',
        'T_k_basis': 't_k_basis',
        'sum_squares': 'sum_squares',
        'tau_term': 'tau_term',
    }

    def special(self, name: str, **params):
        """Named constructor lookup, e.g. special('script_D', i=1)."""
        method = self._SPECIALS.get(name)
        if method is None:
            raise BadParam(f"unknown distinguished element '{name}'")
        try:
            return getattr(self, method)(**params)
        except TypeError as e:
            if isinstance(e, WittCheckError):
                raise
            raise BadParam(f"bad parameters for '{name}': {e}") from e


class WittElement:
    """Sparse element sum a_{alpha,i} x^alpha D_i; no zero coefficients are stored."""

    __slots__ = ('algebra', 'terms')

    def __init__(self, algebra: WittAlgebra, terms: Dict[BasisKey, int]):
        self.algebra = algebra
        self.terms = terms

    @property
    def field(self) -> GaloisField:
        return self.algebra.field

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, alpha: Sequence[int], i: int) -> FieldElement:
        return self.field.wrap(self.terms.get((tuple(alpha), i), 0))

    def sorted_terms(self) -> List[Tuple[BasisKey, int]]:
        return sorted(self.terms.items())

    def _combine(self, other: 'WittElement', negate: bool) -> 'WittElement':
        if not isinstance(other, WittElement):
            return NotImplemented
        if other.algebra != self.algebra:
            raise ContextMismatch(f"{self.algebra} and {other.algebra} differ")
        F = self.field
        out = dict(self.terms)
        for key, c in other.terms.items():
            v = F.sub(out.get(key, 0), c) if negate else F.add(out.get(key, 0), c)
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return WittElement(self.algebra, out)

    def __add__(self, other):
        return self._combine(other, False)

    def __sub__(self, other):
        return self._combine(other, True)

    def __neg__(self):
        return WittElement(self.algebra, {k: self.field.neg(c) for k, c in self.terms.items()})

    def __mul__(self, c):
        value = self.algebra.trunc._coefficient(c)
        if not value:
            return self.algebra.zero
        return WittElement(self.algebra, {k: self.field.mul(v, value) for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, WittElement) and other.algebra == self.algebra
                and other.terms == self.terms)

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        pieces = []
        for (alpha, i), c in self.sorted_terms():
            coeff = format_coeffs(self.field.decode(c))
            head = format_monomial(alpha, self.algebra.var)
            body = f"{head}*D{i}" if head else f"D{i}"
            if coeff == "1":
                pieces.append(body)
            elif "+" in coeff:
                pieces.append(f"({coeff})*{body}")
            else:
                pieces.append(f"{coeff}*{body}")
        return " + ".join(pieces)


@dataclass
class GradedDecomposition:
    algebra: WittAlgebra
    parts: Dict[int, WittElement] = dc_field(default_factory=dict)

    def part(self, degree: int) -> WittElement:
        return self.parts.get(degree, self.algebra.zero)

    def degrees(self) -> List[int]:
        return sorted(self.parts)

    def reconstruct(self) -> WittElement:
        total = self.algebra.zero
        for d in self.degrees():
            total = total + self.parts[d]
        return total


@dataclass(eq=False)
class LinearOperator:
    """A square matrix acting on A_n ('A') or on W_n ('W')."""
    carrier: str
    matrix: ExactMatrix

    def __post_init__(self):
        if self.carrier not in ('A', 'W'):
            raise BadParam(f"unknown carrier '{self.carrier}'")
        if self.matrix.rows != self.matrix.cols:
            raise DimensionMismatch(f"operator matrix must be square, got {self.matrix.shape}")

    def __matmul__(self, other: 'LinearOperator') -> 'LinearOperator':
        if other.carrier != self.carrier:
            raise DimensionMismatch("operators act on different spaces")
        return LinearOperator(self.carrier, self.matrix @ other.matrix)

    def __sub__(self, other: 'LinearOperator') -> 'LinearOperator':
        return LinearOperator(self.carrier, self.matrix - other.matrix)

    def __add__(self, other: 'LinearOperator') -> 'LinearOperator':
        return LinearOperator(self.carrier, self.matrix + other.matrix)

    def __neg__(self) -> 'LinearOperator':
        return LinearOperator(self.carrier, -self.matrix)

    def __eq__(self, other):
        return (isinstance(other, LinearOperator) and other.carrier == self.carrier
                and other.matrix == self.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    @property
    def size(self) -> int:
        return self.matrix.rows


def make_algebra(field: GaloisField, n: int, dim_cap: int = DIM_CAP, var: str = 'x') -> WittAlgebra:
    algebra = WittAlgebra(field, n, dim_cap, var)
    logger.info(f"✓ Built {algebra}, dimension {algebra.dim}")
    return algebra
