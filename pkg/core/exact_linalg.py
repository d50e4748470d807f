"""
Exact Linear Algebra
Row reduction, kernels, affine solves and subspace operations over a GaloisField.

Entries are field encodings held in int64 numpy arrays. Small or dense systems are
reduced with vectorized row operations; wide sparse systems (the derivation system)
go through dictionary rows. Both paths return the unique reduced row-echelon form.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import SPARSE_DENSITY_THRESHOLD, SPARSE_MIN_COLUMNS
from core.errors import UNSOLVABLE, DescriptorMismatch, DimensionMismatch, Unsolvable
from core.galois_field import FieldElement, GaloisField
from utils.logger import logger


# ==========================================
# MATRICES
# ==========================================

@dataclass(eq=False)
class ExactMatrix:
    """Dense matrix of field encodings."""
    field: GaloisField
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.int64)
        if self.data.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {self.data.shape}")

    @classmethod
    def zeros(cls, field: GaloisField, rows: int, cols: int) -> 'ExactMatrix':
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: GaloisField, n: int) -> 'ExactMatrix':
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def from_rows(cls, field: GaloisField, rows: Sequence[Sequence]) -> 'ExactMatrix':
        """Rows of FieldElements or prime-field integers."""
        data = [[x.value if isinstance(x, FieldElement) else field.scalar(x) for x in row]
                for row in rows]
        if data and len({len(r) for r in data}) > 1:
            raise DimensionMismatch("rows have different lengths")
        return cls(field, np.array(data, dtype=np.int64).reshape(len(data), -1))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def density(self) -> float:
        size = self.data.size
        return float(np.count_nonzero(self.data)) / size if size else 0.0

    def is_zero(self) -> bool:
        return not self.data.any()

    def _check(self, other: 'ExactMatrix'):
        if other.field != self.field:
            raise DescriptorMismatch(f"{self.field} and {other.field} are different fields")

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            self._check(other)
            return ExactMatrix(self.field, self.field.vmatmul(self.data, other.data))
        vec = np.asarray(other, dtype=np.int64)
        if vec.shape[0] != self.cols:
            raise DimensionMismatch(f"cannot apply {self.shape} matrix to length {vec.shape[0]}")
        return self.field.vmatmul(self.data, vec.reshape(self.cols, -1)).reshape(-1)

    def __add__(self, other: 'ExactMatrix') -> 'ExactMatrix':
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return ExactMatrix(self.field, self.field.vadd(self.data, other.data))

    def __sub__(self, other: 'ExactMatrix') -> 'ExactMatrix':
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return ExactMatrix(self.field, self.field.vsub(self.data, other.data))

    def __neg__(self) -> 'ExactMatrix':
        return ExactMatrix(self.field, self.field.vneg(self.data))

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and other.field == self.field
                and other.shape == self.shape and np.array_equal(other.data, self.data))

    @property
    def T(self) -> 'ExactMatrix':
        return ExactMatrix(self.field, self.data.T.copy())

    def to_sparse(self) -> 'SparseMatrix':
        rows = []
        for row in self.data:
            nz = np.nonzero(row)[0]
            rows.append({int(c): int(row[c]) for c in nz})
        return SparseMatrix(self.field, self.cols, rows)


@dataclass
class SparseMatrix:
    """Rows stored as {column: nonzero encoding}."""
    field: GaloisField
    cols: int
    rows: List[Dict[int, int]]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def density(self) -> float:
        size = len(self.rows) * self.cols
        return self.nnz / size if size else 0.0

    def to_dense(self) -> ExactMatrix:
        data = np.zeros((len(self.rows), self.cols), dtype=np.int64)
        for i, row in enumerate(self.rows):
            for c, v in row.items():
                data[i, c] = v
        return ExactMatrix(self.field, data)


MatrixLike = Union[ExactMatrix, SparseMatrix]


# ==========================================
# ROW REDUCTION
# ==========================================

def _rref_dense(field: GaloisField, A: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    A = np.array(A, dtype=np.int64, copy=True)
    n_rows, n_cols = A.shape
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r] = field.vmul(A[r], field.inv(lead))
        column = A[:, c].copy()
        column[r] = 0
        mask = column != 0
        if mask.any():
            A[mask] = field.vsub(A[mask], field.vmul(column[mask][:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _rref_sparse(field: GaloisField, rows: Iterable[Dict[int, int]]) -> Dict[int, Dict[int, int]]:
    """Pivot column -> normalized row (pivot entry 1), fully back-substituted."""
    # identical rows add nothing; short rows first keeps fill-in low
    unique = {tuple(sorted((c, v) for c, v in row.items() if v)) for row in rows}
    unique.discard(())
    ordered = sorted(unique, key=lambda t: (len(t), t))

    pivots: Dict[int, Dict[int, int]] = {}
    for items in ordered:
        r = dict(items)
        while r:
            c = min(r)
            v = r[c]
            prow = pivots.get(c)
            if prow is None:
                inv = field.inv(v)
                pivots[c] = {k: field.mul(x, inv) for k, x in r.items()}
                break
            for k, x in prow.items():
                nv = field.sub(r.get(k, 0), field.mul(v, x))
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)

    # back-substitution, highest pivot first; finished rows touch only free columns
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for k in [k for k in row if k != c and k in pivots]:
            v = row.get(k)
            if not v:
                continue
            for kk, x in pivots[k].items():
                nv = field.sub(row.get(kk, 0), field.mul(v, x))
                if nv:
                    row[kk] = nv
                else:
                    row.pop(kk, None)
    return pivots


def _prefers_sparse(M: MatrixLike) -> bool:
    return M.cols > SPARSE_MIN_COLUMNS and M.density() < SPARSE_DENSITY_THRESHOLD


class Echelon:
    """Reduced row-echelon form of a matrix, in dense or sparse storage."""

    def __init__(self, field: GaloisField, cols: int, pivots: List[int],
                 dense: Optional[np.ndarray] = None,
                 sparse: Optional[Dict[int, Dict[int, int]]] = None):
        self.field = field
        self.cols = cols
        self.pivots = pivots
        self._dense = dense
        self._sparse = sparse

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def to_dense(self) -> np.ndarray:
        if self._dense is None:
            data = np.zeros((len(self.pivots), self.cols), dtype=np.int64)
            for i, c in enumerate(self.pivots):
                for k, v in self._sparse[c].items():
                    data[i, k] = v
            self._dense = data
        return self._dense

    def free_columns(self) -> List[int]:
        pivot_set = set(self.pivots)
        return [c for c in range(self.cols) if c not in pivot_set]

    def kernel_matrix(self) -> np.ndarray:
        """One kernel vector per free column f: 1 at f, minus column f at the pivots."""
        free = self.free_columns()
        K = np.zeros((len(free), self.cols), dtype=np.int64)
        if not free:
            return K
        if self._sparse is None:
            R = self._dense
            for t, f in enumerate(free):
                K[t, f] = 1
                if self.pivots:
                    K[t, self.pivots] = self.field.vneg(R[:, f])
        else:
            slot = {f: t for t, f in enumerate(free)}
            for f, t in slot.items():
                K[t, f] = 1
            for c, row in self._sparse.items():
                for k, v in row.items():
                    if k != c:
                        K[slot[k], c] = self.field.neg(v)
        return K


def echelon(M: MatrixLike, method: str = 'auto') -> Echelon:
    """Reduce M; method is 'auto', 'dense' or 'sparse'."""
    field = M.field
    use_sparse = _prefers_sparse(M) if method == 'auto' else method == 'sparse'
    if use_sparse:
        rows = M.rows if isinstance(M, SparseMatrix) else M.to_sparse().rows
        table = _rref_sparse(field, rows)
        logger.info(f"✓ Sparse elimination: {len(rows)} rows x {M.cols} cols, rank {len(table)}")
        return Echelon(field, M.cols, sorted(table), sparse=table)
    dense = M.to_dense() if isinstance(M, SparseMatrix) else M
    R, pivots = _rref_dense(field, dense.data)
    return Echelon(field, M.cols, pivots, dense=R)


def rref(M: MatrixLike, method: str = 'auto') -> Tuple[np.ndarray, List[int]]:
    ech = echelon(M, method)
    return ech.to_dense(), list(ech.pivots)


def rank(M: MatrixLike, method: str = 'auto') -> int:
    return echelon(M, method).rank


# ==========================================
# SUBSPACES
# ==========================================

class SubspaceBasis:
    """A subspace of field^ambient held as its reduced row-echelon basis."""

    def __init__(self, field: GaloisField, ambient: int, rows: np.ndarray, pivots: Sequence[int]):
        self.field = field
        self.ambient = ambient
        self.rows = np.asarray(rows, dtype=np.int64).reshape(len(pivots), ambient)
        self.pivots = tuple(pivots)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def vectors(self) -> List[np.ndarray]:
        return [row.copy() for row in self.rows]

    def reduce(self, v) -> np.ndarray:
        """Remainder of v after subtracting its pivot-coordinate combination."""
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.ambient,):
            raise DimensionMismatch(f"vector of length {v.shape} in ambient {self.ambient}")
        if not self.pivots:
            return v.copy()
        coords = v[list(self.pivots)]
        return self.field.vsub(v, self.field.vmatmul(coords[None, :], self.rows).reshape(-1))

    def contains(self, v) -> bool:
        return not self.reduce(v).any()

    def contains_space(self, other: 'SubspaceBasis') -> bool:
        _check_compatible(self, other)
        return all(self.contains(row) for row in other.rows)

    def coordinates(self, v) -> Optional[np.ndarray]:
        """Coefficients of v in the echelon basis, or None when v is outside."""
        if not self.contains(v):
            return None
        v = np.asarray(v, dtype=np.int64)
        return v[list(self.pivots)] if self.pivots else np.zeros(0, dtype=np.int64)

    def to_matrix(self) -> ExactMatrix:
        return ExactMatrix(self.field, self.rows.copy())

    def __eq__(self, other):
        return (isinstance(other, SubspaceBasis) and other.field == self.field
                and other.ambient == self.ambient and other.pivots == self.pivots
                and np.array_equal(other.rows, self.rows))

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient}, field={self.field})"


def _check_compatible(U: SubspaceBasis, V: SubspaceBasis):
    if U.field != V.field:
        raise DescriptorMismatch(f"{U.field} and {V.field} are different fields")
    if U.ambient != V.ambient:
        raise DimensionMismatch(f"ambient dimensions {U.ambient} and {V.ambient} differ")


def span_of(field: GaloisField, vectors, ambient: Optional[int] = None,
            method: str = 'auto') -> SubspaceBasis:
    """Echelon basis of the span of the given vectors (rows)."""
    vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vectors:
        if ambient is None:
            raise DimensionMismatch("ambient dimension needed for an empty span")
        return SubspaceBasis(field, ambient, np.zeros((0, ambient), dtype=np.int64), [])
    if ambient is None:
        ambient = int(vectors[0].shape[0])
    if any(v.shape != (ambient,) for v in vectors):
        raise DimensionMismatch(f"all vectors must have length {ambient}")
    R, pivots = rref(ExactMatrix(field, np.vstack(vectors)), method)
    return SubspaceBasis(field, ambient, R, pivots)


def kernel(M: MatrixLike, method: str = 'auto') -> SubspaceBasis:
    """Null space {v : Mv = 0}."""
    ech = echelon(M, method)
    K = ech.kernel_matrix()
    if K.shape[0] == 0:
        return SubspaceBasis(M.field, M.cols, K, [])
    return span_of(M.field, list(K), M.cols)


@dataclass
class AffineSolution:
    """particular + span(kernel)."""
    particular: np.ndarray
    kernel: SubspaceBasis

    @property
    def unique(self) -> bool:
        return self.kernel.dim == 0


def solve(M: ExactMatrix, b) -> Union[AffineSolution, Unsolvable]:
    """All x with Mx = b, or UNSOLVABLE. The particular solution has free coordinates 0."""
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if b.shape[0] != M.rows:
        raise DimensionMismatch(f"right-hand side has length {b.shape[0]}, matrix has {M.rows} rows")
    augmented = ExactMatrix(M.field, np.hstack([M.data, b[:, None]]))
    R, pivots = rref(augmented)
    if pivots and pivots[-1] == M.cols:
        return UNSOLVABLE
    x = np.zeros(M.cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, -1]
    return AffineSolution(x, kernel(M))


def annihilator(U: SubspaceBasis) -> SubspaceBasis:
    """{w : w.u = 0 for every u in U}."""
    if U.dim == 0:
        return span_of(U.field, list(np.eye(U.ambient, dtype=np.int64)), U.ambient)
    return kernel(U.to_matrix())


def _zassenhaus(U: SubspaceBasis, V: SubspaceBasis) -> Tuple[SubspaceBasis, SubspaceBasis]:
    """(U + V, U ∩ V) from one reduction of [[U, U], [V, 0]]."""
    _check_compatible(U, V)
    m = U.ambient
    top = np.hstack([U.rows, U.rows])
    bottom = np.hstack([V.rows, np.zeros_like(V.rows)])
    stacked = np.vstack([top, bottom])
    if stacked.shape[0] == 0:
        empty = span_of(U.field, [], m)
        return empty, empty
    R, pivots = rref(ExactMatrix(U.field, stacked))
    cut = sum(1 for c in pivots if c < m)
    total = span_of(U.field, list(R[:cut, :m]), m)
    common = span_of(U.field, list(R[cut:, m:]), m)
    return total, common


def subspace_sum(U: SubspaceBasis, V: SubspaceBasis) -> SubspaceBasis:
    _check_compatible(U, V)
    return span_of(U.field, list(U.rows) + list(V.rows), U.ambient)


def intersect(U: SubspaceBasis, V: SubspaceBasis) -> SubspaceBasis:
    return _zassenhaus(U, V)[1]


def subspace_equal(U: SubspaceBasis, V: SubspaceBasis) -> bool:
    _check_compatible(U, V)
    return U == V


def inverse(M: ExactMatrix) -> Union[ExactMatrix, Unsolvable]:
    """Inverse of a square matrix, or UNSOLVABLE when it is singular."""
    n = M.rows
    if M.cols != n:
        raise DimensionMismatch(f"cannot invert a {M.shape} matrix")
    R, pivots = rref(ExactMatrix(M.field, np.hstack([M.data, np.eye(n, dtype=np.int64)])), 'dense')
    if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] >= n:
        return UNSOLVABLE
    return ExactMatrix(M.field, R[:n, n:])
