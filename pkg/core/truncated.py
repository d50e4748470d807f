"""
Truncated Polynomial Algebra
F[x_1..x_n]/(x_1^p..x_n^p): monomials, sparse polynomials, partial derivatives,
and algebra maps given by the images of the generators.
"""

import itertools
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from core.errors import (
    UNSOLVABLE,
    ArityMismatch,
    BadParam,
    DescriptorMismatch,
    IndexOutOfRange,
)
from core.exact_linalg import ExactMatrix, inverse
from core.galois_field import FieldElement, GaloisField, format_coeffs

Monomial = Tuple[int, ...]


class _ZeroMonomial:
    """Product of monomials that overflowed the truncation."""

    def __repr__(self):
        return "Zero"

    def __bool__(self):
        return False


ZERO = _ZeroMonomial()


def mono_mul(alpha: Sequence[int], beta: Sequence[int], p: int) -> Union[Monomial, _ZeroMonomial]:
    if len(alpha) != len(beta):
        raise ArityMismatch(f"monomials {tuple(alpha)} and {tuple(beta)} have different arity")
    out = tuple(a + b for a, b in zip(alpha, beta))
    if any(e > p - 1 for e in out):
        return ZERO
    return out


def mono_degree(alpha: Sequence[int]) -> int:
    return sum(alpha)


def format_monomial(alpha: Sequence[int], var: str = 'x') -> str:
    parts = []
    for i, e in enumerate(alpha, start=1):
        if e == 1:
            parts.append(f"{var}{i}")
        elif e > 1:
            parts.append(f"{var}{i}^{e}")
    return "*".join(parts)


class TruncatedAlgebra:
    """The algebra A_n over `field`, with variables named var1..varn."""

    def __init__(self, field: GaloisField, n: int, var: str = 'x'):
        if not isinstance(n, int) or n < 1:
            raise BadParam(f"number of variables must be a positive integer, got {n}")
        self.field = field
        self.n = n
        self.p = field.p
        self.var = var

    def __eq__(self, other):
        return (isinstance(other, TruncatedAlgebra) and other.field == self.field
                and other.n == self.n and other.var == self.var)

    def __hash__(self):
        return hash((self.field, self.n, self.var))

    def __repr__(self):
        return f"TruncatedAlgebra(n={self.n}, var='{self.var}', field={self.field})"

    @property
    def dim(self) -> int:
        return self.p ** self.n

    @property
    def tau(self) -> Monomial:
        return (self.p - 1,) * self.n

    @cached_property
    def monomials(self) -> List[Monomial]:
        """All exponent vectors, lexicographically ascending."""
        return list(itertools.product(range(self.p), repeat=self.n))

    @cached_property
    def _positions(self) -> Dict[Monomial, int]:
        return {alpha: k for k, alpha in enumerate(self.monomials)}

    def mono_key(self, alpha: Sequence[int]) -> int:
        """Mixed-radix key alpha_1 + alpha_2*p + ... + alpha_n*p^(n-1)."""
        self._check_monomial(alpha)
        return sum(a * self.p ** k for k, a in enumerate(alpha))

    def mono_index(self, alpha: Sequence[int]) -> int:
        """Position of alpha in the lexicographic basis order."""
        self._check_monomial(alpha)
        return self._positions[tuple(alpha)]

    def _check_monomial(self, alpha: Sequence[int]):
        if len(alpha) != self.n:
            raise ArityMismatch(f"monomial {tuple(alpha)} does not have {self.n} exponents")
        if any(not 0 <= a <= self.p - 1 for a in alpha):
            raise BadParam(f"exponents of {tuple(alpha)} must lie in 0..{self.p - 1}")

    # --- constructors ---
    def poly(self, terms: Dict[Sequence[int], Union[int, FieldElement]]) -> 'TruncPoly':
        clean: Dict[Monomial, int] = {}
        for alpha, c in terms.items():
            self._check_monomial(alpha)
            value = self._coefficient(c)
            if value:
                clean[tuple(alpha)] = self.field.add(clean.get(tuple(alpha), 0), value)
        return TruncPoly(self, {a: v for a, v in clean.items() if v})

    def _coefficient(self, c) -> int:
        if isinstance(c, FieldElement):
            if c.field != self.field:
                raise DescriptorMismatch(f"coefficient from {c.field} used in {self.field}")
            return c.value
        return self.field.scalar(c)

    def monomial(self, alpha: Sequence[int], c: Union[int, FieldElement] = 1) -> 'TruncPoly':
        return self.poly({tuple(alpha): c})

    def x(self, i: int) -> 'TruncPoly':
        self._check_direction(i)
        return self.monomial(tuple(1 if k == i - 1 else 0 for k in range(self.n)))

    @property
    def one(self) -> 'TruncPoly':
        return self.monomial((0,) * self.n)

    @property
    def zero(self) -> 'TruncPoly':
        return TruncPoly(self, {})

    def _check_direction(self, i: int):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise IndexOutOfRange(f"direction {i} outside 1..{self.n}")

    # --- operations ---
    def poly_mul(self, f: 'TruncPoly', g: 'TruncPoly') -> 'TruncPoly':
        self._check_member(f)
        self._check_member(g)
        F = self.field
        out: Dict[Monomial, int] = {}
        for alpha, a in f.terms.items():
            for beta, b in g.terms.items():
                gamma = mono_mul(alpha, beta, self.p)
                if gamma is ZERO:
                    continue
                out[gamma] = F.add(out.get(gamma, 0), F.mul(a, b))
        return TruncPoly(self, {k: v for k, v in out.items() if v})

    def d_i(self, i: int, f: 'TruncPoly') -> 'TruncPoly':
        """Partial derivative: D_i(x^alpha) = alpha_i x^(alpha - e_i)."""
        self._check_direction(i)
        self._check_member(f)
        F = self.field
        out: Dict[Monomial, int] = {}
        for alpha, c in f.terms.items():
            if alpha[i - 1] == 0:
                continue
            v = F.mul(F.scalar(alpha[i - 1]), c)
            if v:
                lowered = alpha[:i - 1] + (alpha[i - 1] - 1,) + alpha[i:]
                out[lowered] = v
        return TruncPoly(self, out)

    def degree(self, f: 'TruncPoly') -> Set[int]:
        return {mono_degree(alpha) for alpha in f.terms}

    def _check_member(self, f: 'TruncPoly'):
        if f.algebra != self:
            raise DescriptorMismatch(f"{f!r} belongs to {f.algebra}, not {self}")

    # --- coordinates ---
    def to_vector(self, f: 'TruncPoly') -> np.ndarray:
        self._check_member(f)
        v = np.zeros(self.dim, dtype=np.int64)
        for alpha, c in f.terms.items():
            v[self._positions[alpha]] = c
        return v

    def from_vector(self, v) -> 'TruncPoly':
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.dim,):
            raise ArityMismatch(f"coordinate vector of length {v.shape} for dimension {self.dim}")
        return TruncPoly(self, {self.monomials[k]: int(v[k]) for k in np.nonzero(v)[0]})

    def random_poly(self, rng: np.random.Generator, density: float = 0.5) -> 'TruncPoly':
        values = self.field.random_values(rng, size=self.dim)
        keep = rng.random(self.dim) < density
        return self.from_vector(np.where(keep, values, 0))


class TruncPoly:
    """Sparse element of a TruncatedAlgebra; no zero coefficients are stored."""

    __slots__ = ('algebra', 'terms')

    def __init__(self, algebra: TruncatedAlgebra, terms: Dict[Monomial, int]):
        self.algebra = algebra
        self.terms = terms

    @property
    def field(self) -> GaloisField:
        return self.algebra.field

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, alpha: Sequence[int]) -> FieldElement:
        return self.field.wrap(self.terms.get(tuple(alpha), 0))

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.algebra.n, 0)

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items())

    def _combine(self, other: 'TruncPoly', sign: int) -> 'TruncPoly':
        self.algebra._check_member(other)
        F = self.field
        out = dict(self.terms)
        for alpha, c in other.terms.items():
            c = c if sign > 0 else F.neg(c)
            v = F.add(out.get(alpha, 0), c)
            if v:
                out[alpha] = v
            else:
                out.pop(alpha, None)
        return TruncPoly(self.algebra, out)

    def __add__(self, other: 'TruncPoly') -> 'TruncPoly':
        return self._combine(other, 1)

    def __sub__(self, other: 'TruncPoly') -> 'TruncPoly':
        return self._combine(other, -1)

    def __neg__(self) -> 'TruncPoly':
        return TruncPoly(self.algebra, {a: self.field.neg(c) for a, c in self.terms.items()})

    def __mul__(self, other) -> 'TruncPoly':
        if isinstance(other, TruncPoly):
            return self.algebra.poly_mul(self, other)
        c = self.algebra._coefficient(other)
        if not c:
            return self.algebra.zero
        return TruncPoly(self.algebra, {a: self.field.mul(v, c) for a, v in self.terms.items()})

    def __rmul__(self, other) -> 'TruncPoly':
        return self.__mul__(other)

    def __pow__(self, e: int) -> 'TruncPoly':
        result = self.algebra.one
        for _ in range(e):
            result = self.algebra.poly_mul(result, self)
        return result

    def __eq__(self, other):
        return (isinstance(other, TruncPoly) and other.algebra == self.algebra
                and other.terms == self.terms)

    def __hash__(self):
        return hash((self.algebra, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        pieces = []
        for alpha, c in self.sorted_terms():
            coeff = format_coeffs(self.field.decode(c))
            mono = format_monomial(alpha, self.algebra.var)
            if not mono:
                pieces.append(coeff if "+" not in coeff else f"({coeff})")
            elif coeff == "1":
                pieces.append(mono)
            else:
                pieces.append(f"({coeff})*{mono}" if "+" in coeff else f"{coeff}*{mono}")
        return " + ".join(pieces)


# ==========================================
# ALGEBRA MAPS
# ==========================================

class SubstitutionMap:
    """
    The algebra homomorphism source -> target sending x_i to images[i-1].

    Images must have zero constant term so that every x_i^p still maps to 0.
    """

    def __init__(self, source: TruncatedAlgebra, target: TruncatedAlgebra,
                 images: Sequence[TruncPoly]):
        if source.field != target.field:
            raise DescriptorMismatch("source and target are defined over different fields")
        if len(images) != source.n:
            raise ArityMismatch(f"{len(images)} generator images for {source.n} variables")
        for f in images:
            target._check_member(f)
            if f.constant_term():
                raise BadParam(f"generator image {f!r} has a nonzero constant term")
        self.source = source
        self.target = target
        self.images = list(images)

    @cached_property
    def _powers(self) -> List[List[TruncPoly]]:
        table = []
        for f in self.images:
            row = [self.target.one]
            for _ in range(1, self.source.p):
                row.append(self.target.poly_mul(row[-1], f))
            table.append(row)
        return table

    def image_of_monomial(self, alpha: Sequence[int]) -> TruncPoly:
        result = self.target.one
        for i, e in enumerate(alpha):
            if e:
                result = self.target.poly_mul(result, self._powers[i][e])
        return result

    def apply(self, f: TruncPoly) -> TruncPoly:
        self.source._check_member(f)
        out = self.target.zero
        for alpha, c in f.terms.items():
            out = out + self.image_of_monomial(alpha) * self.source.field.wrap(c)
        return out

    __call__ = apply

    @cached_property
    def matrix(self) -> ExactMatrix:
        """Column j holds the image of the j-th source monomial."""
        columns = [self.target.to_vector(self.image_of_monomial(alpha))
                   for alpha in self.source.monomials]
        return ExactMatrix(self.source.field, np.stack(columns, axis=1))

    def is_invertible(self) -> bool:
        return inverse(self.matrix) is not UNSOLVABLE

    def inverse(self) -> 'SubstitutionMap':
        inv = inverse(self.matrix)
        if inv is UNSOLVABLE:
            raise BadParam("substitution is not invertible")
        images = []
        for i in range(1, self.target.n + 1):
            coords = inv @ self.target.to_vector(self.target.x(i))
            images.append(self.source.from_vector(coords))
        return SubstitutionMap(self.target, self.source, images)

    def compose(self, other: 'SubstitutionMap') -> 'SubstitutionMap':
        """self after other."""
        if other.target != self.source:
            raise DescriptorMismatch("maps cannot be composed")
        return SubstitutionMap(other.source, self.target, [self.apply(f) for f in other.images])
