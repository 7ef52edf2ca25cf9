"""Dense bit-packed linear algebra over GF(2).

Rows of a matrix are Python integers acting as bit vectors (bit j =
column j), so the hot row operation is a single big-int XOR.  Everything
here is pure and deterministic: pivots are chosen at the lowest nonzero
column with rows scanned top-down, which keeps every downstream
computation byte-reproducible.  All values are immutable after
construction and safe to share across threads.

Vectors are plain ints with the same bit layout as rows, and matrices
act on column vectors: ``m.mul_vec(v)`` computes ``m @ v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


def vec_from_bits(bits: Sequence[int]) -> int:
    v = 0
    for j, b in enumerate(bits):
        if b & 1:
            v |= 1 << j
    return v


def vec_to_bits(v: int, width: int) -> list[int]:
    return [(v >> j) & 1 for j in range(width)]


@dataclass(frozen=True)
class BitMatrix:
    """Immutable GF(2) matrix with bit-packed rows."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        if self.cols < 0:
            raise ValueError("negative column count")
        mask = (1 << self.cols) - 1
        for r in self.rows:
            if r < 0 or r & ~mask:
                raise ValueError("row has bits outside the column range")

    # constructors

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "BitMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return BitMatrix(tuple(vec_from_bits(r) for r in rows), cols)

    @staticmethod
    def from_row_ints(rows: Sequence[int], cols: int) -> "BitMatrix":
        return BitMatrix(tuple(rows), cols)

    @staticmethod
    def from_columns(columns: Sequence[int], nrows: int) -> "BitMatrix":
        out = [0] * nrows
        for j, c in enumerate(columns):
            while c:
                low = c & -c
                out[low.bit_length() - 1] |= 1 << j
                c ^= low
        return BitMatrix(tuple(out), len(columns))

    @staticmethod
    def identity(n: int) -> "BitMatrix":
        return BitMatrix(tuple(1 << i for i in range(n)), n)

    @staticmethod
    def zeros(nrows: int, cols: int) -> "BitMatrix":
        return BitMatrix((0,) * nrows, cols)

    # queries

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        v = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                v |= 1 << i
        return v

    def to_lists(self) -> list[list[int]]:
        return [vec_to_bits(r, self.cols) for r in self.rows]

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)

    # algebra

    def mul_vec(self, v: int) -> int:
        """Matrix times column vector; v has one bit per column."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """Standard product self @ other over GF(2)."""
        if self.cols != other.nrows:
            raise ValueError(
                f"shape mismatch: ({self.nrows}x{self.cols}) @ ({other.nrows}x{other.cols})"
            )
        out = []
        for r in self.rows:
            acc = 0
            k = r
            while k:
                low = k & -k
                acc ^= other.rows[low.bit_length() - 1]
                k ^= low
            out.append(acc)
        return BitMatrix(tuple(out), other.cols)

    def transpose(self) -> "BitMatrix":
        return BitMatrix(tuple(self.column(j) for j in range(self.cols)), self.nrows)

    def add(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols or self.nrows != other.nrows:
            raise ValueError("shape mismatch in add")
        return BitMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.cols)

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        """Vertical concatenation."""
        if self.cols != other.cols:
            raise ValueError("column mismatch in stack")
        return BitMatrix(self.rows + other.rows, self.cols)

    def rank(self) -> int:
        return len(row_reduce(self).pivots)


@dataclass(frozen=True)
class EchelonForm:
    """Reduced row-echelon form together with its pivot columns."""

    matrix: BitMatrix
    pivots: tuple[int, ...]


def row_reduce(m: BitMatrix) -> EchelonForm:
    """Deterministic reduced row-echelon form over GF(2).

    Pivots are the lowest-index nonzero columns, rows are scanned
    top-down, and each pivot column is cleared everywhere else, so the
    result is canonical for the row space of ``m``.
    """
    rows = list(m.rows)
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == len(rows):
            break
        bit = 1 << c
        pivot_row = -1
        for i in range(r, len(rows)):
            if rows[i] & bit:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
    return EchelonForm(BitMatrix(tuple(rows), m.cols), tuple(pivots))


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of the right null space {x : m @ x = 0}.

    Returns one vector per free column, in increasing column order, so
    the row count is cols(m) - rank(m).
    """
    ech = row_reduce(m)
    pivot_of_row = {p: i for i, p in enumerate(ech.pivots)}
    pivot_set = set(ech.pivots)
    out = []
    for j in range(m.cols):
        if j in pivot_set:
            continue
        v = 1 << j
        for p, i in pivot_of_row.items():
            if (ech.matrix.rows[i] >> j) & 1:
                v |= 1 << p
        out.append(v)
    return BitMatrix(tuple(out), m.cols)


def solve(m: BitMatrix, b: int) -> Optional[int]:
    """One solution of m @ x = b, or None when none exists.

    Deterministic: free coordinates are set to 0.
    """
    sols = solve_many(m, [b])
    return sols[0]


def solve_many(m: BitMatrix, bs: Sequence[int]) -> list[Optional[int]]:
    """Solve m @ x = b for several right-hand sides with one reduction."""
    n = m.cols
    aug = []
    for i, r in enumerate(m.rows):
        extra = 0
        for k, b in enumerate(bs):
            if (b >> i) & 1:
                extra |= 1 << (n + k)
        aug.append(r | extra)
    # eliminate with pivots restricted to the coefficient columns
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == len(aug):
            break
        bit = 1 << c
        pivot_row = -1
        for i in range(r, len(aug)):
            if aug[i] & bit:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        for i in range(len(aug)):
            if i != r and aug[i] & bit:
                aug[i] ^= aug[r]
        pivots.append(c)
        r += 1
    coeff_mask = (1 << n) - 1
    out: list[Optional[int]] = []
    for k in range(len(bs)):
        kbit = 1 << (n + k)
        if any(row & kbit and not (row & coeff_mask) for row in aug):
            out.append(None)
            continue
        x = 0
        for i, p in enumerate(pivots):
            if aug[i] & kbit:
                x |= 1 << p
        out.append(x)
    return out


def quotient_basis(sub: BitMatrix, ambient_dim: int) -> tuple[BitMatrix, BitMatrix]:
    """Representatives and projection for the quotient by a subspace.

    ``sub`` holds spanning vectors of the subspace as rows.  Returns
    ``(reps, projection)`` where the rows of ``reps`` are standard basis
    vectors completing the subspace to the ambient space, and
    ``projection`` maps ambient coordinates to quotient coordinates.
    ``projection @ incl(sub) = 0`` and ``projection @ incl(reps) = id``.
    """
    if sub.cols != ambient_dim:
        raise ValueError("subspace vectors do not live in the ambient space")
    ech = row_reduce(sub)
    pivot_set = set(ech.pivots)
    free_cols = [j for j in range(ambient_dim) if j not in pivot_set]
    reps = BitMatrix(tuple(1 << j for j in free_cols), ambient_dim)
    # projection: reduce a vector modulo the echelon rows of sub, then
    # read off the coordinates at the free columns
    proj_rows = []
    for k, jk in enumerate(free_cols):
        row = 1 << jk
        for i, p in enumerate(ech.pivots):
            if (ech.matrix.rows[i] >> jk) & 1:
                row |= 1 << p
        proj_rows.append(row)
    proj = BitMatrix(tuple(proj_rows), ambient_dim)
    return reps, proj


def left_kernel(m: BitMatrix) -> BitMatrix:
    """Basis of the left null space {v : v @ m = 0}.

    Computed by reducing the rows augmented with an identity block, so
    wide matrices never need to be transposed.
    """
    n = m.cols
    aug = [r | (1 << (n + i)) for i, r in enumerate(m.rows)]
    r = 0
    for c in range(n):
        if r == len(aug):
            break
        bit = 1 << c
        pivot_row = -1
        for i in range(r, len(aug)):
            if aug[i] & bit:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        for i in range(len(aug)):
            if i != r and aug[i] & bit:
                aug[i] ^= aug[r]
        r += 1
    coeff_mask = (1 << n) - 1
    out = [row >> n for row in aug if not (row & coeff_mask)]
    return BitMatrix(tuple(out), m.nrows)


class RowSpan:
    """Incrementally built echelon span of row vectors.

    Maintains one stored row per pivot with every other stored row
    cleared at that pivot, so membership tests and coordinates are
    single reduction passes.  Deterministic given insertion order.
    """

    def __init__(self, width: int):
        self.width = width
        self._rows: dict[int, int] = {}  # pivot -> row

    def reduce(self, v: int) -> int:
        # stored rows carry no bits at other pivots, so one pass suffices
        for p, row in self._rows.items():
            if (v >> p) & 1:
                v ^= row
        return v

    def insert(self, v: int) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        v = self.reduce(v)
        if v == 0:
            return False
        p = (v & -v).bit_length() - 1
        for q, row in self._rows.items():
            if (row >> p) & 1:
                self._rows[q] = row ^ v
        self._rows[p] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self) -> list[int]:
        """Canonical basis rows ordered by pivot column."""
        return [self._rows[p] for p in sorted(self._rows)]

    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def coords(self, v: int) -> Optional[int]:
        """Coordinates of v in the canonical basis, or None if outside."""
        pivots = self.pivots()
        c = 0
        for k, p in enumerate(pivots):
            if (v >> p) & 1:
                c |= 1 << k
        w = v
        for k, p in enumerate(pivots):
            if (c >> k) & 1:
                w ^= self._rows[p]
        if w != 0:
            return None
        return c
