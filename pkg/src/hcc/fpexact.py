"""Exact dense linear algebra over the prime field F_p.

Vectors are rows throughout: a matrix acts on the right of a row vector
(``v -> v M``), so every kernel here is a left kernel and
``kernel_dim(M) == M.rows - rank(M)``.

The Smith normal form uses exactly two kinds of elementary operations,
both recorded so the factorization can be replayed:

* ``T(i, j, q)``: as a row operation, add ``q`` times row ``i`` to row
  ``j``; as a column operation, add ``q`` times column ``j`` to column
  ``i``.
* ``S(i, j)``: swap rows (or columns) ``i`` and ``j``.

No scaling operation is ever emitted, so the diagonal of the normal form
consists of nonzero field elements that are *not* normalized to 1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "CapExceededError",
    "DEFAULT_ENTRY_CAP",
    "ElementaryOp",
    "FpMatrix",
    "SnfResult",
    "block_diagonal",
    "check_entry_count",
    "check_prime",
    "entry_cap",
    "inv_mod",
    "is_prime",
    "kernel_dim",
    "rank",
    "rref",
    "set_entry_cap",
    "smith_normal_form",
]

DEFAULT_ENTRY_CAP = 1 << 22

_entry_cap = int(os.environ.get("HCC_MATRIX_CAP", DEFAULT_ENTRY_CAP))


class CapExceededError(ValueError):
    """A matrix or multiplication table would exceed the entry cap."""


def entry_cap() -> int:
    """Current cap on the number of entries of a single matrix."""
    return _entry_cap


def set_entry_cap(cap: int) -> None:
    """Override the entry cap (also settable via ``HCC_MATRIX_CAP``)."""
    global _entry_cap
    cap = int(cap)
    if cap < 1:
        raise ValueError("entry cap must be positive")
    _entry_cap = cap


def check_entry_count(count: int, what: str = "matrix") -> None:
    if count > _entry_cap:
        raise CapExceededError(
            f"{what} needs {count} entries, above the cap of {_entry_cap} "
            "(override with set_entry_cap() or HCC_MATRIX_CAP)"
        )


def is_prime(p: int) -> bool:
    if p < 2:
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


def check_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus must be a prime integer, got {p!r}")


def inv_mod(a: int, p: int) -> int:
    """Inverse of a nonzero residue modulo the prime ``p``."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 is not invertible")
    return pow(a, p - 2, p)


class FpMatrix:
    """Immutable dense matrix with entries in F_p."""

    __slots__ = ("_a", "p")

    def __init__(self, rows: int, cols: int, entries: Sequence[int], p: int):
        check_prime(p)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        check_entry_count(rows * cols, "matrix")
        a = np.asarray(entries, dtype=np.int64).reshape(rows, cols) % p
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "p", p)
        a.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @classmethod
    def _wrap(cls, a: np.ndarray, p: int) -> "FpMatrix":
        # internal: a already reduced mod p, int64, 2-d
        m = object.__new__(cls)
        object.__setattr__(m, "_a", a)
        object.__setattr__(m, "p", p)
        a.setflags(write=False)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int, cols: int | None = None) -> "FpMatrix":
        rows = [list(r) for r in rows]
        if rows:
            cols = len(rows[0])
            if any(len(r) != cols for r in rows):
                raise ValueError("ragged rows")
        elif cols is None:
            cols = 0
        flat = [x for r in rows for x in r]
        return cls(len(rows), cols, flat, p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        check_prime(p)
        check_entry_count(rows * cols, "matrix")
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        check_prime(p)
        check_entry_count(n * n, "matrix")
        return cls._wrap(np.eye(n, dtype=np.int64) % p, p)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying int64 array."""
        return self._a

    def entry(self, i: int, j: int) -> int:
        return int(self._a[i, j])

    def __getitem__(self, ij) -> int:
        i, j = ij
        return int(self._a[i, j])

    def row(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a[i])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a[:, j])

    def to_rows(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self._a]

    def transpose(self) -> "FpMatrix":
        return FpMatrix._wrap(np.ascontiguousarray(self._a.T), self.p)

    def is_zero(self) -> bool:
        return not self._a.any()

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if not isinstance(other, FpMatrix):
            return NotImplemented
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        check_entry_count(self.rows * other.cols, "matrix product")
        p = self.p
        # chunk the inner dimension so int64 accumulation cannot overflow
        step = max(1, (1 << 62) // max(1, (p - 1) ** 2))
        acc = np.zeros((self.rows, other.cols), dtype=np.int64)
        for s in range(0, max(self.cols, 1), step):
            if s >= self.cols:
                break
            acc = (acc + self._a[:, s : s + step] @ other._a[s : s + step]) % p
        return FpMatrix._wrap(acc, p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self._a.shape == other._a.shape and bool(
            np.array_equal(self._a, other._a)
        )

    __hash__ = None  # mutable-free but we don't need hashing

    def __repr__(self) -> str:
        return f"FpMatrix({self.rows}x{self.cols} mod {self.p})"


@dataclass(frozen=True)
class ElementaryOp:
    """A recorded elementary operation, either T(i, j, q) or S(i, j)."""

    kind: str  # "T" or "S"
    i: int
    j: int
    q: int = 0

    def __post_init__(self):
        if self.kind not in ("T", "S"):
            raise ValueError(f"unknown operation kind {self.kind!r}")
        if self.kind == "T" and self.q == 0:
            raise ValueError("T operation requires a nonzero multiplier")
        if self.kind == "S" and self.i == self.j:
            raise ValueError("S operation requires distinct indices")


def _apply_row(op: ElementaryOp, a: np.ndarray, p: int) -> None:
    if op.kind == "S":
        a[[op.i, op.j]] = a[[op.j, op.i]]
    else:
        a[op.j] = (a[op.j] + op.q * a[op.i]) % p


def _apply_col(op: ElementaryOp, a: np.ndarray, p: int) -> None:
    if op.kind == "S":
        a[:, [op.i, op.j]] = a[:, [op.j, op.i]]
    else:
        a[:, op.i] = (a[:, op.i] + op.q * a[:, op.j]) % p


@dataclass(frozen=True)
class SnfResult:
    """Smith normal form of a matrix, as a replayable factorization.

    Applying ``left_ops`` (in order, as row operations) and then
    ``right_ops`` (in order, as column operations) to the input matrix
    yields a matrix that is zero outside the leading diagonal block
    ``diag(diagonal)`` of size ``rank``.
    """

    diagonal: tuple[int, ...]
    left_ops: tuple[ElementaryOp, ...]
    right_ops: tuple[ElementaryOp, ...]
    rank: int

    def replay(self, m: FpMatrix) -> FpMatrix:
        """Apply the recorded operations to ``m`` and return the result."""
        a = m.array.copy()
        for op in self.left_ops:
            _apply_row(op, a, m.p)
        for op in self.right_ops:
            _apply_col(op, a, m.p)
        return FpMatrix._wrap(a, m.p)


def block_diagonal(diagonal: Sequence[int], rows: int, cols: int, p: int) -> FpMatrix:
    """The ``rows x cols`` matrix with ``diagonal`` in its leading block."""
    a = np.zeros((rows, cols), dtype=np.int64)
    for k, d in enumerate(diagonal):
        a[k, k] = d % p
    return FpMatrix._wrap(a, p)


def _echelon(a: np.ndarray, p: int, reduced: bool = False) -> list[int]:
    """Row-reduce ``a`` in place; returns the pivot column indices.

    Pivot rows are scaled to 1, which is fine here: this routine backs
    rank and membership computations, not the recorded normal form.
    """
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r] = a[r] * inv_mod(piv, p) % p
        below = r + 1 + np.nonzero(a[r + 1 :, c])[0]
        if below.size:
            a[below] = (a[below] - np.outer(a[below, c], a[r])) % p
        if reduced and r:
            above = np.nonzero(a[:r, c])[0]
            if above.size:
                a[above] = (a[above] - np.outer(a[above, c], a[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def rank(m: FpMatrix) -> int:
    """F_p-rank via Gaussian elimination."""
    a = m.array.copy()
    return len(_echelon(a, m.p))


def kernel_dim(m: FpMatrix) -> int:
    """Dimension of the left kernel ``{v : v M = 0}``."""
    return m.rows - rank(m)


def rref(m: FpMatrix) -> tuple[FpMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and its pivot columns."""
    a = m.array.copy()
    pivots = _echelon(a, m.p, reduced=True)
    return FpMatrix._wrap(a, m.p), tuple(pivots)


def smith_normal_form(m: FpMatrix) -> SnfResult:
    """Diagonalize over F_p using only T and S operations.

    The pivot at each step is the first nonzero entry of the active
    submatrix in column-major scan order (columns left to right, each
    searched top to bottom), which makes the recorded operation sequence
    deterministic.
    """
    p = m.p
    a = m.array.copy()
    n_rows, n_cols = a.shape
    left: list[ElementaryOp] = []
    right: list[ElementaryOp] = []
    k = 0
    while k < min(n_rows, n_cols):
        pivot = None
        for c in range(k, n_cols):
            nz = np.nonzero(a[k:, c])[0]
            if nz.size:
                pivot = (k + int(nz[0]), c)
                break
        if pivot is None:
            break
        pi, pc = pivot
        if pi != k:
            op = ElementaryOp("S", k, pi)
            left.append(op)
            _apply_row(op, a, p)
        if pc != k:
            op = ElementaryOp("S", k, pc)
            right.append(op)
            _apply_col(op, a, p)
        inv = inv_mod(int(a[k, k]), p)
        for i in range(k + 1, n_rows):
            if a[i, k]:
                q = (-int(a[i, k]) * inv) % p
                op = ElementaryOp("T", k, i, q)
                left.append(op)
                _apply_row(op, a, p)
        for c in range(k + 1, n_cols):
            if a[k, c]:
                q = (-int(a[k, c]) * inv) % p
                op = ElementaryOp("T", c, k, q)
                right.append(op)
                _apply_col(op, a, p)
        k += 1
    diagonal = tuple(int(a[i, i]) for i in range(k))
    return SnfResult(diagonal=diagonal, left_ops=tuple(left), right_ops=tuple(right), rank=k)
