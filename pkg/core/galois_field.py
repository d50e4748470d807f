"""
Finite Field Arithmetic
Exact arithmetic in F_p and F_{p^m} = F_p[t]/(modulus), plus regular vectors.

Elements are encoded as integers c_0 + c_1*p + ... + c_{m-1}*p^(m-1), so the prime
subfield element k is encoded as k itself. Scalar operations work on encodings; the
`v*` methods are their numpy counterparts used by the linear-algebra kernels.
"""

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import CACHE_DIR, FIELD_TABLE_LIMIT, IRREDUCIBLE_CACHE_FILE
from core.errors import (
    BadModulus,
    BadParam,
    DescriptorMismatch,
    DivisionByZero,
    FieldTooSmall,
    NonPrime,
    NotRegular,
)
from utils.logger import logger


# ==========================================
# PRIMES AND POLYNOMIALS OVER F_p
# ==========================================

def is_prime(p: int) -> bool:
    """Deterministic trial division."""
    if not isinstance(p, int) or p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> List[int]:
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    """Product of two ascending coefficient lists over F_p."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    """Remainder of a modulo the monic polynomial b, padded to deg(b) entries."""
    db = len(b) - 1
    r = [c % p for c in a] + [0] * max(0, db - len(a))
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c:
            for j in range(db + 1):
                r[k - db + j] = (r[k - db + j] - c * b[j]) % p
    return r[:db]


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= m/2."""
    m = len(coeffs) - 1
    if m < 1 or coeffs[-1] % p == 0:
        return False
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not any(_poly_mod(coeffs, divisor, p)):
                return False
    return True


def _cache_path() -> Optional[Path]:
    if not CACHE_DIR:
        return None
    return Path(CACHE_DIR) / IRREDUCIBLE_CACHE_FILE


def _read_cache() -> dict:
    path = _cache_path()
    if path is None or not path.exists():
        return {}
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (OSError, ValueError) as e:
        logger.warning(f"⚠️ Ignoring unreadable modulus cache {path}: {e}")
        return {}


def _write_cache(table: dict):
    path = _cache_path()
    if path is None:
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(table, f, indent=2, sort_keys=True)
    except OSError as e:
        logger.warning(f"⚠️ Could not write modulus cache {path}: {e}")


def default_modulus(p: int, m: int) -> Tuple[int, ...]:
    """
    Lexicographically smallest monic irreducible of degree m.

    Coefficient tuples (c_0, ..., c_{m-1}) are scanned in ascending order.
    """
    key = f"{p},{m}"
    table = _read_cache()
    cached = table.get(key)
    if cached is not None and len(cached) == m + 1 and is_irreducible(cached, p):
        return tuple(cached)

    for tail in itertools.product(range(p), repeat=m):
        candidate = list(tail) + [1]
        if is_irreducible(candidate, p):
            if _cache_path() is not None:
                table[key] = candidate
                _write_cache(table)
            return tuple(candidate)
    raise BadModulus(f"no irreducible polynomial of degree {m} over F_{p}")  # unreachable for primes


# ==========================================
# FIELD DESCRIPTOR
# ==========================================

class GaloisField:
    """The field F_p[t]/(modulus) of order p^m."""

    def __init__(self, p: int, m: int = 1, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise NonPrime(f"characteristic {p} is not prime")
        if not isinstance(m, int) or m < 1:
            raise BadModulus(f"extension degree must be a positive integer, got {m}")

        if modulus is None:
            modulus = default_modulus(p, m)
        else:
            modulus = [int(c) for c in modulus]
            if len(modulus) != m + 1:
                raise BadModulus(f"modulus {modulus} does not have degree {m}")
            if any(c < 0 or c >= p for c in modulus):
                raise BadModulus(f"modulus coefficients must lie in 0..{p - 1}")
            if modulus[-1] != 1:
                raise BadModulus(f"modulus {modulus} is not monic")
            if not is_irreducible(modulus, p):
                raise BadModulus(f"modulus {modulus} is reducible over F_{p}")

        self.p = p
        self.m = m
        self.modulus: Tuple[int, ...] = tuple(modulus)
        self.order = p ** m
        self._powers = [p ** k for k in range(m)]

    # --- identity ---
    def __eq__(self, other):
        return (isinstance(other, GaloisField)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    def to_dict(self) -> dict:
        return {"p": self.p, "deg": self.m, "modulus": list(self.modulus)}

    # --- encodings ---
    def encode(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.m:
            raise BadParam(f"{len(coeffs)} coefficients given for a degree-{self.m} field")
        value = 0
        for k, c in enumerate(coeffs):
            value += (int(c) % self.p) * self._powers[k]
        return value

    def decode(self, value: int) -> Tuple[int, ...]:
        out = []
        for _ in range(self.m):
            out.append(value % self.p)
            value //= self.p
        return tuple(out)

    def scalar(self, k: int) -> int:
        """Encoding of the prime subfield element k mod p."""
        return int(k) % self.p

    def wrap(self, value: int) -> 'FieldElement':
        return FieldElement(self, int(value))

    def __call__(self, x: Union[int, Sequence[int], 'FieldElement']) -> 'FieldElement':
        """Coerce an int (prime subfield), a coefficient list or an element."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise DescriptorMismatch(f"{x!r} belongs to {x.field}, not {self}")
            return x
        if isinstance(x, (int, np.integer)):
            return FieldElement(self, self.scalar(int(x)))
        return FieldElement(self, self.encode(list(x)))

    @property
    def zero(self) -> 'FieldElement':
        return FieldElement(self, 0)

    @property
    def one(self) -> 'FieldElement':
        return FieldElement(self, 1)

    @property
    def gen(self) -> 'FieldElement':
        """The residue class of t (equal to -modulus[0] when m = 1)."""
        if self.m == 1:
            return FieldElement(self, (-self.modulus[0]) % self.p)
        return FieldElement(self, self.p)

    def elements(self) -> Iterator['FieldElement']:
        for v in range(self.order):
            yield FieldElement(self, v)

    def random_values(self, rng: np.random.Generator, size=None, nonzero: bool = False):
        low = 1 if nonzero else 0
        return rng.integers(low, self.order, size=size, dtype=np.int64)

    # --- scalar arithmetic on encodings ---
    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.m == 1:
            return (a + b) % p
        res, pk = 0, 1
        while a or b:
            res += ((a % p + b % p) % p) * pk
            a //= p
            b //= p
            pk *= p
        return res

    def neg(self, a: int) -> int:
        p = self.p
        if self.m == 1:
            return (-a) % p
        res, pk = 0, 1
        while a:
            res += ((-(a % p)) % p) * pk
            a //= p
            pk *= p
        return res

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        tables = self._tables
        if tables is not None:
            exp_list, log_list = tables[2], tables[3]
            return exp_list[log_list[a] + log_list[b]]
        return self._mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"zero has no inverse in {self}")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        tables = self._tables
        if tables is not None:
            exp_list, log_list = tables[2], tables[3]
            return exp_list[(self.order - 1 - log_list[a]) % (self.order - 1)]
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.m == 1:
            return pow(a, e, self.p)
        tables = self._tables
        if tables is not None:
            exp_list, log_list = tables[2], tables[3]
            return exp_list[(log_list[a] * e) % (self.order - 1)]
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            e >>= 1
        return result

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _poly_mul(self.decode(a), self.decode(b), self.p)
        return self.encode(_poly_mod(prod, self.modulus, self.p))

    @cached_property
    def _tables(self):
        """(exp, log) numpy tables and list copies for extension fields of moderate order."""
        if self.m == 1 or self.order > FIELD_TABLE_LIMIT:
            return None
        q = self.order
        factors = _prime_factors(q - 1)

        def slow_pow(a, e):
            result, base = 1, a
            while e:
                if e & 1:
                    result = self._mul_poly(result, base)
                base = self._mul_poly(base, base)
                e >>= 1
            return result

        generator = next(g for g in range(2, q)
                         if all(slow_pow(g, (q - 1) // r) != 1 for r in factors))
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, generator)
        exp[q - 1:] = exp[:q - 1]
        return exp, log, exp.tolist(), log.tolist()

    # --- vectorized arithmetic (numpy int64 arrays of encodings) ---
    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        p = self.p
        if self.m == 1:
            return (a + b) % p
        res = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pk in self._powers:
            res += (((a // pk) % p + (b // pk) % p) % p) * pk
        return res

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        p = self.p
        if self.m == 1:
            return (-a) % p
        res = np.zeros(a.shape, dtype=np.int64)
        for pk in self._powers:
            res += ((-((a // pk) % p)) % p) * pk
        return res

    def vsub(self, a, b) -> np.ndarray:
        if self.m == 1:
            return (np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64)) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        tables = self._tables
        if tables is None:
            return np.vectorize(self.mul, otypes=[np.int64])(a, b)
        exp, log = tables[0], tables[1]
        prod = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, prod)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("zero entry has no inverse")
        return np.vectorize(self.inv, otypes=[np.int64])(a)

    def vsum(self, a, axis=None) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        p = self.p
        if self.m == 1:
            return a.sum(axis=axis) % p
        res = None
        for pk in self._powers:
            digit = (((a // pk) % p).sum(axis=axis) % p) * pk
            res = digit if res is None else res + digit
        return res

    def vmatmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            raise DescriptorMismatch(f"cannot multiply {A.shape} by {B.shape}")
        if self.m == 1:
            return (A @ B) % self.p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for j in range(A.shape[1]):
            column = A[:, j:j + 1]
            if not column.any():
                continue
            out = self.vadd(out, self.vmul(column, B[j:j + 1, :]))
        return out


# ==========================================
# FIELD ELEMENTS
# ==========================================

@dataclass(frozen=True)
class FieldElement:
    field: GaloisField
    value: int

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.field.decode(self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DescriptorMismatch(f"{self.field} and {other.field} are different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.scalar(int(other))
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.value, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(v, self.value))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.value, v))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, int(e)))

    def inverse(self) -> 'FieldElement':
        return FieldElement(self.field, self.field.inv(self.value))

    def __repr__(self):
        return format_coeffs(self.coeffs)


def format_coeffs(coeffs: Sequence[int]) -> str:
    """Render an ascending coefficient list as a polynomial in t."""
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            power = "t" if k == 1 else f"t^{k}"
            parts.append(power if c == 1 else f"{c}{power}")
    return "+".join(parts) if parts else "0"


def ff_make(p: int, m: int = 1, modulus: Optional[Sequence[int]] = None) -> GaloisField:
    """Build a field descriptor, choosing the default modulus when none is given."""
    field = GaloisField(p, m, modulus)
    logger.info(f"✓ Field {field} ready (order {field.order})")
    return field


_ARITH_OPS = {
    'add': lambda a, b: a + b,
    'sub': lambda a, b: a - b,
    'mul': lambda a, b: a * b,
    'inv': lambda a: a.inverse(),
    'neg': lambda a: -a,
    'pow': lambda a, e: a ** e,
}


def ff_arith(op: str, *operands):
    """Dispatch one of add, sub, mul, inv, neg, pow on field elements."""
    if op not in _ARITH_OPS:
        raise BadParam(f"unknown field operation '{op}'")
    elements = [x for x in operands if isinstance(x, FieldElement)]
    if elements and any(x.field != elements[0].field for x in elements):
        raise DescriptorMismatch("operands belong to different fields")
    return _ARITH_OPS[op](*operands)


# ==========================================
# REGULAR VECTORS
# ==========================================

def _rank_mod_p(rows: List[List[int]], p: int) -> int:
    """Rank of a small integer matrix over F_p."""
    A = [[x % p for x in row] for row in rows]
    if not A:
        return 0
    n_rows, n_cols = len(A), len(A[0])
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if A[i][c]), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(n_rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
        if r == n_rows:
            break
    return r


def is_regular(lams: Sequence[FieldElement]) -> bool:
    """True iff the entries are linearly independent over the prime subfield."""
    lams = list(lams)
    if not lams:
        raise BadParam("a regular vector needs at least one entry")
    field = lams[0].field
    if any(x.field != field for x in lams):
        raise DescriptorMismatch("entries belong to different fields")
    # m x n coefficient matrix, column i = coefficients of lambda_i
    matrix = [[lam.coeffs[k] for lam in lams] for k in range(field.m)]
    return _rank_mod_p(matrix, field.p) == len(lams)


@dataclass(frozen=True)
class RegularVector:
    entries: Tuple[FieldElement, ...]

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(self.entries))
        if not is_regular(self.entries):
            raise NotRegular(f"{list(self.entries)} is not linearly independent over F_p")

    @property
    def field(self) -> GaloisField:
        return self.entries[0].field

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(x.value for x in self.entries)

    def pairing(self, mu: Sequence[int]) -> int:
        """(lambda, mu) for mu with prime-field entries, as an encoding."""
        F = self.field
        acc = 0
        for lam, k in zip(self.values, mu):
            acc = F.add(acc, F.mul(lam, F.scalar(k)))
        return acc

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def default_regular(field: GaloisField, n: int) -> RegularVector:
    """(1, t, ..., t^(n-1)); needs an extension degree of at least n."""
    if n < 1:
        raise BadParam(f"n must be positive, got {n}")
    if field.m < n:
        raise FieldTooSmall(f"{field} has degree {field.m} < n = {n}; no regular vector exists")
    return RegularVector(tuple(field.wrap(field.p ** k) for k in range(n)))


def random_regular(field: GaloisField, n: int, rng: np.random.Generator,
                   max_tries: int = 10000) -> RegularVector:
    """Rejection-sample a regular vector from a seeded generator."""
    if field.m < n:
        raise FieldTooSmall(f"{field} has degree {field.m} < n = {n}; no regular vector exists")
    for _ in range(max_tries):
        entries = [field.wrap(int(v)) for v in field.random_values(rng, size=n)]
        if is_regular(entries):
            return RegularVector(tuple(entries))
    raise NotRegular(f"no regular vector found in {max_tries} draws")  # practically unreachable
