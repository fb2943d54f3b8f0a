# === exact_linalg.py (exact rational echelon forms, kernels, solves on sympy DomainMatrix) ===
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

# Below this many columns elimination runs on the dense format.
DENSE_COLUMN_LIMIT = 64


def as_rational(value):
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def to_qq(value):
    value = as_rational(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value):
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


class SparseMatrix:
    """rows x cols matrix over Q stored as {(row, col): Fraction}, zeros never stored."""

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError(f"bad shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.entries = {}
        for (i, j), value in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            value = as_rational(value)
            if value:
                self.entries[(i, j)] = value

    @classmethod
    def from_rows(cls, rows, cols=None):
        if cols is None:
            cols = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, value in enumerate(row):
                if value:
                    entries[(i, j)] = value
        return cls(len(rows), cols, entries)

    @classmethod
    def from_columns(cls, columns, rows):
        entries = {}
        for j, column in enumerate(columns):
            if len(column) != rows:
                raise ValueError("column length mismatch")
            for i, value in enumerate(column):
                if value:
                    entries[(i, j)] = value
        return cls(rows, len(columns), entries)

    @classmethod
    def from_domain_matrix(cls, dm):
        rows, cols = dm.shape
        entries = {}
        for i, row in dm.to_dod().items():
            for j, value in row.items():
                entries[(i, j)] = from_qq(value)
        return cls(rows, cols, entries)

    def to_domain_matrix(self):
        dod = {}
        for (i, j), value in self.entries.items():
            dod.setdefault(i, {})[j] = to_qq(value)
        dm = DomainMatrix.from_dod(dod, (self.rows, self.cols), QQ)
        return dm.to_dense() if self.cols < DENSE_COLUMN_LIMIT else dm

    def row_dicts(self):
        out = [{} for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            out[i][j] = value
        return out

    def to_rows(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), value in self.entries.items():
            out[i][j] = value
        return out

    def mul_vector(self, vector):
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), value in self.entries.items():
            if vector[j]:
                out[i] += value * vector[j]
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


# ===== ELIMINATION =====

def _rref_domain(m):
    if not m.entries:
        return None, []
    reduced, pivots = m.to_domain_matrix().rref()
    return reduced, list(pivots)


def rref(m):
    """Reduced row echelon form and the strictly increasing pivot columns."""
    reduced, pivots = _rref_domain(m)
    if reduced is None:
        return SparseMatrix(m.rows, m.cols), []
    return SparseMatrix.from_domain_matrix(reduced), pivots


def rank(m):
    if not m.entries:
        return 0
    return m.to_domain_matrix().rank()


def kernel_basis(m):
    """Basis of {v : m v = 0}, one vector per free column in ascending order, that column set to 1."""
    reduced, pivots = _rref_domain(m)
    if reduced is None:
        return [[Fraction(int(i == j)) for i in range(m.cols)] for j in range(m.cols)]
    if len(pivots) == m.cols:
        return []
    # field rref has unit pivots, so the free coordinate comes out as 1
    null = reduced.nullspace_from_rref(pivots)
    return [[from_qq(v) for v in row] for row in null.to_list()]


def solve(m, rhs):
    """Some x with m x = rhs (free variables set to 0), or None when inconsistent."""
    if len(rhs) != m.rows:
        raise ValueError("rhs length must equal the row count")
    entries = dict(m.entries)
    for i, value in enumerate(rhs):
        if value:
            entries[(i, m.cols)] = value
    reduced, pivots = rref(SparseMatrix(m.rows, m.cols + 1, entries))
    if pivots and pivots[-1] == m.cols:
        return None
    rows = reduced.row_dicts()
    x = [Fraction(0)] * m.cols
    for row_index, col in enumerate(pivots):
        x[col] = rows[row_index].get(m.cols, Fraction(0))
    return x


def in_span(vectors, v):
    """Coefficients c with sum c_i vectors[i] = v, or None."""
    if not vectors:
        return [] if not any(v) else None
    length = len(v)
    if any(len(vec) != length for vec in vectors):
        raise ValueError("all vectors must have the same length")
    return solve(SparseMatrix.from_columns(vectors, length), list(v))


def complement_basis(subspace, vectors):
    """Indices of a greedy selection of `vectors` whose span complements span(subspace).

    Pivot columns of [subspace | vectors] are exactly the columns outside the span
    of the columns before them.
    """
    columns = list(subspace) + list(vectors)
    if not vectors:
        return []
    length = len(columns[0])
    if any(len(col) != length for col in columns):
        raise ValueError("all vectors must have the same length")
    _, pivots = rref(SparseMatrix.from_columns(columns, length))
    offset = len(subspace)
    return [p - offset for p in pivots if p >= offset]
