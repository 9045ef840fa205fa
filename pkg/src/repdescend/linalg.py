"""Dense exact linear algebra over a FieldDesc.

Matrices hold packed element codes in a numpy int64 array; all arithmetic is
exact.  Elimination uses plain Gaussian elimination with deterministic
pivoting (first nonzero entry scanning top to bottom), so results are
bit-reproducible.  Inconsistent systems and singular inversions are reported
as ``None`` values, never exceptions.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import FieldMismatch
from .fields import FieldDesc, FieldElem


class Matrix:
    """An immutable rows x cols matrix over a FieldDesc."""

    __slots__ = ("field", "rows", "cols", "codes")

    def __init__(self, field: FieldDesc, codes: np.ndarray):
        codes = np.ascontiguousarray(codes, dtype=np.int64)
        if codes.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        self.field = field
        self.rows, self.cols = codes.shape
        codes.flags.writeable = False
        self.codes = codes

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_rows(field: FieldDesc, rows: Sequence[Sequence[FieldElem | int]]) -> "Matrix":
        data = [[e.code if isinstance(e, FieldElem) else int(e) % field.p for e in r] for r in rows]
        arr = np.array(data, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(len(rows), 0)
        return Matrix(field, arr)

    @staticmethod
    def zeros(field: FieldDesc, rows: int, cols: int) -> "Matrix":
        return Matrix(field, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(field: FieldDesc, n: int) -> "Matrix":
        return Matrix(field, np.eye(n, dtype=np.int64))

    @staticmethod
    def scalar(field: FieldDesc, n: int, value: FieldElem) -> "Matrix":
        m = np.eye(n, dtype=np.int64) * value.code
        return Matrix(field, m)

    # -- basic structure -----------------------------------------------------

    def entry(self, i: int, j: int) -> FieldElem:
        return FieldElem(self.field, int(self.codes[i, j]))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.codes.shape == other.codes.shape
            and bool((self.codes == other.codes).all())
        )

    def __hash__(self) -> int:
        return hash((self.field, self.codes.shape, self.codes.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        return bool((self.codes == 0).all())

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.codes.T)

    def hstack(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, np.hstack([self.codes, other.codes]))

    def vstack(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, np.vstack([self.codes, other.codes]))

    def submatrix(self, rows: slice | Sequence[int], cols: slice | Sequence[int]) -> "Matrix":
        sub = self.codes[rows][:, cols]
        return Matrix(self.field, sub)

    def _same_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"matrix over {other.field!r} used with {self.field!r}")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, self.field.vadd(self.codes, other.codes))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self.field, self.field.vsub(self.codes, other.codes))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.field.vneg(self.codes))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix(self.field, self.field.vmatmul(self.codes, other.codes))

    def scale(self, c: FieldElem) -> "Matrix":
        return Matrix(self.field, self.field.vmul(self.codes, np.int64(c.code)))

    def trace(self) -> FieldElem:
        acc = 0
        for i in range(min(self.rows, self.cols)):
            acc = self.field.code_add(acc, int(self.codes[i, i]))
        return FieldElem(self.field, acc)

    def power(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("matrix power requires a square matrix")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def flatten(self) -> np.ndarray:
        """Row-major code vector (a copy)."""
        return self.codes.reshape(-1).copy()

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        dec = self.field.decode(self.codes).reshape(self.rows * self.cols, self.field.n)
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[int(c) for c in row] for row in dec],
        }

    @staticmethod
    def from_dict(field: FieldDesc, d: dict) -> "Matrix":
        rows, cols = int(d["rows"]), int(d["cols"])
        entries = d["entries"]
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match rows*cols")
        codes = np.array([field.code_of_coords(e) for e in entries], dtype=np.int64)
        return Matrix(field, codes.reshape(rows, cols))


def block_diag(field: FieldDesc, blocks: Iterable[Matrix]) -> Matrix:
    blocks = list(blocks)
    r = sum(b.rows for b in blocks)
    c = sum(b.cols for b in blocks)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for b in blocks:
        out[i : i + b.rows, j : j + b.cols] = b.codes
        i += b.rows
        j += b.cols
    return Matrix(field, out)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product over the common field."""
    a._same_field(b)
    f = a.field
    big = f.vmul(
        a.codes.reshape(a.rows, 1, a.cols, 1), b.codes.reshape(1, b.rows, 1, b.cols)
    )
    return Matrix(f, big.reshape(a.rows * b.rows, a.cols * b.cols))


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------


def _rref_inplace(field: FieldDesc, m: np.ndarray) -> tuple[int, list[int]]:
    """Reduce m (mutable code array) to RREF; return (rank, pivot columns)."""
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        col = m[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = field.code_inv(int(m[r, c]))
        if inv != 1:
            m[r] = field.vmul(m[r], np.int64(inv))
        factors = m[:, c].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            m[hit] = field.vsub(m[hit], field.vmul(factors[hit, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return r, pivots


def rref(m: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row-echelon form, rank, and pivot column indices."""
    work = m.codes.copy()
    rank, pivots = _rref_inplace(m.field, work)
    return Matrix(m.field, work), rank, pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


def solve_right(a: Matrix, b: Matrix) -> Matrix | None:
    """Some X with a @ X = b, free variables set to zero; None if inconsistent."""
    a._same_field(b)
    if a.rows != b.rows:
        raise ValueError("a and b must have the same number of rows")
    aug = np.hstack([a.codes, b.codes])
    r, pivots = _rref_inplace(a.field, aug)
    for c in pivots:
        if c >= a.cols:
            return None
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = aug[i, a.cols :]
    return Matrix(a.field, x)


def kernel_basis(a: Matrix) -> Matrix:
    """Columns form a deterministic basis of the right kernel of a."""
    work = a.codes.copy()
    _, pivots = _rref_inplace(a.field, work)
    pivset = set(pivots)
    free = [c for c in range(a.cols) if c not in pivset]
    out = np.zeros((a.cols, len(free)), dtype=np.int64)
    f = a.field
    for k, fc in enumerate(free):
        out[fc, k] = 1
        for i, pc in enumerate(pivots):
            out[pc, k] = f.code_neg(int(work[i, fc]))
    return Matrix(a.field, out)


def invert(a: Matrix) -> Matrix | None:
    """Inverse of a square matrix, or None when singular."""
    if a.rows != a.cols:
        raise ValueError("only square matrices can be inverted")
    aug = np.hstack([a.codes.copy(), np.eye(a.rows, dtype=np.int64)])
    r, pivots = _rref_inplace(a.field, aug)
    if r < a.rows:
        return None
    return Matrix(a.field, aug[:, a.rows :])


def entrywise_frobenius(a: Matrix, iterate: int = 1) -> Matrix:
    """Apply the Frobenius x -> x^p `iterate` times to every entry."""
    return Matrix(a.field, a.field.vfrob(a.codes, iterate))


def embed_matrix(a: Matrix, target: FieldDesc) -> Matrix:
    """Entrywise canonical embedding into a larger field."""
    from .fields import canonical_embedding

    emb = canonical_embedding(a.field, target)
    return Matrix(target, emb.apply_array(a.codes))


# ---------------------------------------------------------------------------
# characteristic / minimal polynomials (small and exact)
# ---------------------------------------------------------------------------


def charpoly(a: Matrix) -> tuple[int, ...]:
    """Characteristic polynomial codes, low-to-high, via Hessenberg reduction."""
    if a.rows != a.cols:
        raise ValueError("characteristic polynomial requires a square matrix")
    f = a.field
    n = a.rows
    if n == 0:
        return (1,)
    h = [[int(c) for c in row] for row in a.codes]
    # similarity reduction to upper Hessenberg form
    for j in range(n - 2):
        piv = None
        for i in range(j + 1, n):
            if h[i][j]:
                piv = i
                break
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = f.code_inv(h[j + 1][j])
        for i in range(j + 2, n):
            if h[i][j]:
                t = f.code_mul(h[i][j], inv)
                for c in range(n):
                    h[i][c] = f.code_sub(h[i][c], f.code_mul(t, h[j + 1][c]))
                for r in range(n):
                    h[r][j + 1] = f.code_add(h[r][j + 1], f.code_mul(t, h[r][i]))
    # p_k(t) = (t - h[k][k]) p_{k-1}(t) - sum_i h[i][k] (prod subdiag) p_{i-1}(t)
    polys: list[list[int]] = [[1]]
    for k in range(n):
        prev = polys[k]
        cur = [0] * (k + 2)
        for idx, c in enumerate(prev):  # t * prev
            cur[idx + 1] = c
        neg = f.code_neg(h[k][k])
        for idx, c in enumerate(prev):
            cur[idx] = f.code_add(cur[idx], f.code_mul(neg, c))
        prod = 1
        for i in range(k - 1, -1, -1):
            prod = f.code_mul(prod, h[i + 1][i])
            if prod == 0:
                break
            coeff = f.code_mul(h[i][k], prod)
            if coeff:
                neg_c = f.code_neg(coeff)
                for idx, c in enumerate(polys[i]):
                    cur[idx] = f.code_add(cur[idx], f.code_mul(neg_c, c))
        polys.append(cur)
    return tuple(polys[n])


def minpoly(a: Matrix) -> tuple[int, ...]:
    """Minimal polynomial codes, low-to-high, monic."""
    if a.rows != a.cols:
        raise ValueError("minimal polynomial requires a square matrix")
    f = a.field
    n = a.rows
    if n == 0:
        return (1,)
    d2 = n * n
    powers = [Matrix.identity(f, n)]
    stack = powers[0].flatten()[None, :]
    while True:
        k = len(powers)
        nxt = powers[-1] @ a
        target = Matrix(f, nxt.flatten()[None, :].T)
        basis = Matrix(f, stack.T)
        sol = solve_right(basis, target)
        if sol is not None:
            coeffs = [f.code_neg(int(sol.codes[i, 0])) for i in range(k)]
            return tuple(coeffs) + (1,)
        powers.append(nxt)
        stack = np.vstack([stack, nxt.flatten()[None, :]])
        if k > d2:
            raise AssertionError("minimal polynomial search exceeded dimension bound")
