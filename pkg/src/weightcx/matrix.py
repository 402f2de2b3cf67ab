"""Immutable dense matrices over a :class:`~weightcx.rings.RingSpec`."""

from __future__ import annotations

from fractions import Fraction

from .rings import INTEGERS, QQ, RingError, RingSpec


class ShapeError(ValueError):
    pass


class ExactMatrix:
    """A rows x cols matrix with exact entries, stored row-major as tuples.

    Entries are normalized on construction (residues reduced, fractions in
    lowest terms) so equality is structural.
    """

    __slots__ = ("ring", "rows", "cols", "_data", "_hash")

    def __init__(self, ring, rows, cols, data=None, _trusted=False):
        if not isinstance(ring, RingSpec):
            raise RingError(f"expected RingSpec, got {ring!r}")
        if rows < 0 or cols < 0:
            raise ShapeError("negative dimension")
        self.ring = ring
        self.rows = rows
        self.cols = cols
        if data is None:
            z = ring.zero()
            self._data = tuple(tuple(z for _ in range(cols)) for _ in range(rows))
        elif _trusted:
            self._data = data
        else:
            data = [list(r) for r in data]
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ShapeError(f"entry count does not match {rows}x{cols}")
            c = ring.coerce
            self._data = tuple(tuple(c(x) for x in r) for r in data)
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def _raw(cls, ring, rows, cols, data):
        """Build from lists holding results of arithmetic on valid scalars."""
        if ring.kind == INTEGERS:
            data = tuple(map(tuple, data))
        else:
            c = ring.reduce
            data = tuple(tuple(c(x) for x in r) for r in data)
        return cls(ring, rows, cols, data, _trusted=True)

    @classmethod
    def from_rows(cls, ring, rows):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(ring, 0, 0)
        return cls(ring, len(rows), len(rows[0]), rows)

    @classmethod
    def from_columns(cls, ring, nrows, columns):
        columns = [list(c) for c in columns]
        data = [[columns[j][i] for j in range(len(columns))] for i in range(nrows)]
        return cls(ring, nrows, len(columns), data)

    @classmethod
    def zeros(cls, ring, rows, cols):
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring, n):
        one, z = ring.one(), ring.zero()
        data = tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))
        return cls(ring, n, n, data, _trusted=True)

    @classmethod
    def scalar(cls, ring, n, c):
        c = ring.coerce(c)
        z = ring.zero()
        data = tuple(tuple(c if i == j else z for j in range(n)) for i in range(n))
        return cls(ring, n, n, data, _trusted=True)

    @classmethod
    def diagonal(cls, ring, entries, rows=None, cols=None):
        entries = list(entries)
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, e in enumerate(entries):
            data[i][i] = e
        return cls(ring, rows, cols, data)

    # -- access -------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i):
        return self._data[i]

    def column(self, j):
        return tuple(r[j] for r in self._data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def tolist(self):
        return [list(r) for r in self._data]

    def entries(self):
        """Row-major flat tuple of entries."""
        return tuple(x for r in self._data for x in r)

    def is_zero(self):
        return all(x == 0 for r in self._data for x in r)

    def is_square(self):
        return self.rows == self.cols

    def is_identity(self):
        return self == ExactMatrix.identity(self.ring, self.rows) if self.is_square() else False

    # -- algebra ----------------------------------------------------------
    def _check_ring(self, other):
        if other.ring != self.ring:
            raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check_ring(other)
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        c = self.ring.reduce
        data = tuple(tuple(c(a + b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        return ExactMatrix(self.ring, self.rows, self.cols, data, _trusted=True)

    def __neg__(self):
        c = self.ring.reduce
        data = tuple(tuple(c(-a) for a in r) for r in self._data)
        return ExactMatrix(self.ring, self.rows, self.cols, data, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        s = self.ring.coerce(s)
        c = self.ring.reduce
        data = tuple(tuple(c(s * a) for a in r) for r in self._data)
        return ExactMatrix(self.ring, self.rows, self.cols, data, _trusted=True)

    def __matmul__(self, other):
        self._check_ring(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._data)) if other.rows else [()] * other.cols
        c = self.ring.reduce
        z = self.ring.zero()
        data = tuple(
            tuple(c(sum(a * b for a, b in zip(r, col))) if r else z for col in cols)
            for r in self._data
        )
        return ExactMatrix(self.ring, self.rows, other.cols, data, _trusted=True)

    def __pow__(self, k):
        if not self.is_square():
            raise ShapeError("power of a non-square matrix")
        out = ExactMatrix.identity(self.ring, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def T(self):
        data = tuple(zip(*self._data)) if self.rows else tuple(() for _ in range(self.cols))
        return ExactMatrix(self.ring, self.cols, self.rows, data, _trusted=True)

    def submatrix(self, rows, cols):
        rows = list(rows)
        cols = list(cols)
        data = tuple(tuple(self._data[i][j] for j in cols) for i in rows)
        return ExactMatrix(self.ring, len(rows), len(cols), data, _trusted=True)

    def hstack(self, *others):
        out = [list(r) for r in self._data]
        cols = self.cols
        for o in others:
            self._check_ring(o)
            if o.rows != self.rows:
                raise ShapeError("hstack row mismatch")
            for r, s in zip(out, o._data):
                r.extend(s)
            cols += o.cols
        return ExactMatrix(self.ring, self.rows, cols, tuple(tuple(r) for r in out), _trusted=True)

    def vstack(self, *others):
        data = list(self._data)
        rows = self.rows
        for o in others:
            self._check_ring(o)
            if o.cols != self.cols:
                raise ShapeError("vstack column mismatch")
            data.extend(o._data)
            rows += o.rows
        return ExactMatrix(self.ring, rows, self.cols, tuple(data), _trusted=True)

    def change_ring(self, ring, f=None):
        """Entrywise image under ``f`` (default: coercion) in ``ring``."""
        f = f or ring.coerce
        data = tuple(tuple(ring.coerce(f(x)) for x in r) for r in self._data)
        return ExactMatrix(ring, self.rows, self.cols, data, _trusted=True)

    def lift(self):
        """Integer lift of a modular matrix (entries in [0, n))."""
        from .rings import ZZ
        if not self.ring.is_modular:
            raise RingError("lift only applies to residue rings")
        return ExactMatrix(ZZ, self.rows, self.cols, self._data, _trusted=True)

    def det(self):
        if not self.is_square():
            raise ShapeError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self.ring.one()
        if self.ring == QQ:
            return _det_field(self.tolist())
        # fraction-free Bareiss over Z; residue rings via the integer lift
        d = _bareiss([list(r) for r in self._data])
        return self.ring.coerce(d)

    # -- protocol -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(self.ring.format(x) for x in r) + "]" for r in self._data)
        return f"ExactMatrix({self.ring}, {self.rows}x{self.cols}, [{body}])"

    def to_json(self):
        return [[self.ring.format(x) for x in r] for r in self._data]

    @classmethod
    def from_json(cls, ring, obj, rows=None, cols=None):
        if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
            raise ValueError("matrix must be a JSON array of arrays")
        if not obj:
            return cls(ring, rows or 0, cols or 0)
        parsed = [[Fraction(x) if ring == QQ else _parse_int(x) for x in r] for r in obj]
        m = cls(ring, len(parsed), len(parsed[0]), parsed)
        if (rows is not None and m.rows != rows) or (cols is not None and m.cols != cols):
            raise ShapeError(f"expected {rows}x{cols} matrix, got {m.rows}x{m.cols}")
        return m


def _parse_int(x):
    if isinstance(x, bool):
        raise ValueError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x.strip())
    raise ValueError(f"bad matrix entry {x!r}")


def _bareiss(a):
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_field(a):
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def block_diag(ring, blocks):
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            data[r0 + i][c0:c0 + b.cols] = b.row(i)
        r0 += b.rows
        c0 += b.cols
    return ExactMatrix(ring, rows, cols, data)


def block(ring, grid, row_sizes, col_sizes):
    """Assemble a block matrix; ``None`` entries are zero blocks."""
    data = [[0] * sum(col_sizes) for _ in range(sum(row_sizes))]
    r0 = 0
    for bi, rs in enumerate(row_sizes):
        c0 = 0
        for bj, cs in enumerate(col_sizes):
            b = grid[bi][bj]
            if b is not None:
                if b.shape != (rs, cs):
                    raise ShapeError(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                for i in range(rs):
                    data[r0 + i][c0:c0 + cs] = b.row(i)
            c0 += cs
        r0 += rs
    return ExactMatrix(ring, len(data), sum(col_sizes), data)
