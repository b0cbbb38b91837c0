"""Matrices over tower fields: row reduction, null spaces, and the
subfield expansion that turns a parity-check matrix over F_{q^m} into
one over F_q.

Rows are stored as tuples of packed digit indices.  Elimination over
GF(2) (the dominant case in the experiments) runs on integer bitmasks;
other fields take the generic path.  Matrices are immutable.
"""

from __future__ import annotations

from .errors import Duplicate, IndexOutOfRange, LevelMismatch
from .gf import Felt, FieldSpec


class FMatrix:
    """Immutable row-major matrix over one (spec, level)."""

    __slots__ = ("spec", "level", "nrows", "ncols", "rows")

    def __init__(self, spec: FieldSpec, level: int, rows, ncols: int | None = None):
        rows = [tuple(r) for r in rows]
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise IndexOutOfRange("ragged rows")
        elif ncols is None:
            raise IndexOutOfRange("empty matrix needs an explicit column count")
        self.spec = spec
        self.level = level
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = tuple(rows)

    @classmethod
    def from_felts(cls, rows: list[list[Felt]]) -> "FMatrix":
        spec, level = rows[0][0].spec, rows[0][0].level
        for r in rows:
            for x in r:
                if x.spec is not spec or x.level != level:
                    raise LevelMismatch("mixed levels in matrix")
        return cls(spec, level, [[x.idx for x in r] for r in rows])

    @classmethod
    def identity(cls, spec: FieldSpec, level: int, n: int) -> "FMatrix":
        return cls(spec, level, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def entry(self, i: int, j: int) -> Felt:
        return Felt(self.spec, self.level, self.rows[i][j])

    def row_felts(self, i: int) -> list[Felt]:
        return [Felt(self.spec, self.level, c) for c in self.rows[i]]

    def __eq__(self, other):
        return (
            isinstance(other, FMatrix)
            and (other.spec is self.spec or other.spec == self.spec)
            and other.level == self.level
            and other.rows == self.rows
            and other.ncols == self.ncols
        )

    def __repr__(self):
        return f"FMatrix({self.nrows}x{self.ncols}, level={self.level})"

    def _is_gf2(self) -> bool:
        return self.spec.p == 2 and self.level == 0


# --- GF(2) bitmask engine ----------------------------------------------


def _pack_gf2(rows, ncols: int) -> list[int]:
    packed = []
    for r in rows:
        acc = 0
        for j, v in enumerate(r):
            if v:
                acc |= 1 << j
        packed.append(acc)
    return packed


def _unpack_gf2(packed: list[int], ncols: int) -> list[tuple[int, ...]]:
    return [tuple((m >> j) & 1 for j in range(ncols)) for m in packed]


def _rref_gf2(packed: list[int], ncols: int) -> tuple[list[int], list[int]]:
    rows = list(packed)
    pivots = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


# --- generic engine ------------------------------------------------------


def _rref_generic(spec: FieldSpec, level: int, rows, ncols: int):
    mul, sub, inv = spec.mul, spec.sub, spec.inv
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead_inv = inv(level, rows[r][col])
        if lead_inv != 1:
            rows[r] = [mul(level, c, lead_inv) for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                tgt = rows[i]
                src = rows[r]
                rows[i] = [sub(level, tgt[j], mul(level, factor, src[j])) for j in range(ncols)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def rref(M: FMatrix) -> tuple[FMatrix, tuple[int, ...]]:
    """Unique reduced row echelon form (zero rows dropped) and pivot columns."""
    if M._is_gf2():
        packed, pivots = _rref_gf2(_pack_gf2(M.rows, M.ncols), M.ncols)
        return FMatrix(M.spec, 0, _unpack_gf2(packed, M.ncols), M.ncols), tuple(pivots)
    rows, pivots = _rref_generic(M.spec, M.level, M.rows, M.ncols)
    return FMatrix(M.spec, M.level, rows, M.ncols), tuple(pivots)


def rank(M: FMatrix) -> int:
    return rref(M)[0].nrows


def null_space_basis(M: FMatrix) -> FMatrix:
    """Rows span {v : M v^T = 0}; one row per free column of the rref."""
    R, pivots = rref(M)
    spec, level, n = M.spec, M.level, M.ncols
    pivot_set = set(pivots)
    free = [j for j in range(n) if j not in pivot_set]
    neg = spec.neg
    basis = []
    for j in free:
        v = [0] * n
        v[j] = 1
        for r, pc in enumerate(pivots):
            c = R.rows[r][j]
            if c:
                v[pc] = neg(level, c)
        basis.append(v)
    return FMatrix(spec, level, basis, n)


def mat_mul(A: FMatrix, B: FMatrix) -> FMatrix:
    if A.spec is not B.spec or A.level != B.level:
        raise LevelMismatch("matrix level mismatch")
    if A.ncols != B.nrows:
        raise IndexOutOfRange("inner dimensions differ")
    spec, level = A.spec, A.level
    if A._is_gf2():
        packed_b = _pack_gf2(B.rows, B.ncols)
        out = []
        for arow in A.rows:
            acc = 0
            for j, v in enumerate(arow):
                if v:
                    acc ^= packed_b[j]
            out.append(acc)
        return FMatrix(spec, 0, _unpack_gf2(out, B.ncols), B.ncols)
    mul, add = spec.mul, spec.add
    out = []
    for arow in A.rows:
        row = [0] * B.ncols
        for k, v in enumerate(arow):
            if v == 0:
                continue
            brow = B.rows[k]
            for j in range(B.ncols):
                if brow[j]:
                    row[j] = add(level, row[j], mul(level, v, brow[j]))
        out.append(row)
    return FMatrix(spec, level, out, B.ncols)


def mat_vec(A: FMatrix, v: list[int]) -> list[int]:
    """A * v^T on packed indices."""
    if len(v) != A.ncols:
        raise IndexOutOfRange("vector length mismatch")
    spec, level = A.spec, A.level
    mul, add = spec.mul, spec.add
    out = []
    for row in A.rows:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = add(level, acc, mul(level, x, y))
        out.append(acc)
    return out


def transpose(M: FMatrix) -> FMatrix:
    return FMatrix(M.spec, M.level, list(zip(*M.rows)) if M.nrows else [], M.nrows)


def inverse(M: FMatrix) -> FMatrix | None:
    """Inverse of a square matrix, or None if singular."""
    n = M.nrows
    if n != M.ncols:
        raise IndexOutOfRange("inverse needs a square matrix")
    spec, level = M.spec, M.level
    aug = [list(M.rows[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    A = FMatrix(spec, level, aug, 2 * n)
    R, pivots = rref(A)
    if list(pivots[:n]) != list(range(n)) or R.nrows < n:
        return None
    return FMatrix(spec, level, [row[n:] for row in R.rows], n)


def row_space_equal(A: FMatrix, B: FMatrix) -> bool:
    if A.ncols != B.ncols:
        return False
    return rref(A)[0].rows == rref(B)[0].rows


def row_space_contains(A: FMatrix, B: FMatrix) -> bool:
    """True iff every row of B lies in the row space of A."""
    RA = rref(A)[0]
    stacked = FMatrix(A.spec, A.level, list(RA.rows) + list(B.rows), A.ncols)
    return rank(stacked) == RA.nrows


def restrict_columns(M: FMatrix, indices: list[int]) -> FMatrix:
    """Column submatrix H|_I; indices ascending and duplicate-free."""
    if not indices:
        raise IndexOutOfRange("empty index set")
    if any(j < 0 or j >= M.ncols for j in indices):
        raise IndexOutOfRange("column index out of range")
    if len(set(indices)) != len(indices):
        raise Duplicate("repeated column index")
    if list(indices) != sorted(indices):
        raise IndexOutOfRange("indices must be ascending")
    return FMatrix(M.spec, M.level, [[row[j] for j in indices] for row in M.rows], len(indices))


def subfield_expand(M: FMatrix, target_level: int) -> FMatrix:
    """Expand each entry into its coordinate tuple over the target stage.

    Each source row becomes m = [level : target] rows; the kernel over
    the target field is preserved: for v with entries in the target
    stage, M v^T = 0 iff expanded(M) v^T = 0.
    """
    spec = M.spec
    if target_level > M.level:
        raise LevelMismatch("target stage must lie below the matrix level")
    m = spec.dims[M.level] // spec.dims[target_level]
    base = spec.orders[target_level]
    out = []
    for row in M.rows:
        chunks_per_entry = []
        for x in row:
            chunks = []
            for _ in range(m):
                x, c = divmod(x, base)
                chunks.append(c)
            chunks_per_entry.append(chunks)
        for j in range(m):
            out.append([chunks[j] for chunks in chunks_per_entry])
    return FMatrix(spec, target_level, out, M.ncols)


# --- text form -----------------------------------------------------------


def matrix_to_text(M: FMatrix) -> str:
    spec = M.spec
    head = f"{M.nrows} {M.ncols} {M.level}"
    lines = [head]
    for row in M.rows:
        lines.append(" ".join(spec.felt_str(Felt(spec, M.level, c)) for c in row))
    return "\n".join(lines)


def matrix_from_text(spec: FieldSpec, text: str) -> FMatrix:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    nrows, ncols, level = (int(x) for x in lines[0].split())
    rows = []
    for ln in lines[1 : 1 + nrows]:
        rows.append([spec.felt_from_str(level, tok).idx for tok in ln.split()])
        if len(rows[-1]) != ncols:
            raise IndexOutOfRange("row width mismatch in matrix text")
    return FMatrix(spec, level, rows, ncols)
