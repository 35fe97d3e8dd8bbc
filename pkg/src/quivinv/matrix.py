"""Dense immutable matrices over an exact scalar backend."""

from __future__ import annotations

from .fields import QQ, FieldError


class ShapeError(ValueError):
    pass


class Matrix:
    __slots__ = ("rows", "nrows", "ncols", "field")

    def __init__(self, rows, field=QQ, ncols=None):
        rows = tuple(tuple(field(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != ncols:
                raise ShapeError("ragged matrix rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self.field = field

    @classmethod
    def _raw(cls, rows, field, ncols):
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m.field = field
        return m

    @classmethod
    def from_entries(cls, nrows, ncols, entries, field=QQ):
        entries = list(entries)
        if len(entries) != nrows * ncols:
            raise ShapeError(f"expected {nrows * ncols} entries, got {len(entries)}")
        return cls([entries[i * ncols:(i + 1) * ncols] for i in range(nrows)], field, ncols)

    @classmethod
    def zeros(cls, nrows, ncols=None, field=QQ):
        if ncols is None:
            ncols = nrows
        z = field.zero
        return cls._raw(tuple((z,) * ncols for _ in range(nrows)), field, ncols)

    @classmethod
    def identity(cls, n, field=QQ):
        z, o = field.zero, field.one
        return cls._raw(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), field, n)

    @classmethod
    def J(cls, n, field=QQ):
        """The block matrix [[0, E], [-E, 0]] of the standard symplectic form."""
        if n % 2:
            raise ShapeError("J(n) needs even n")
        h = n // 2
        z, o = field.zero, field.one
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                if i < h and j == i + h:
                    row.append(o)
                elif i >= h and j == i - h:
                    row.append(-o)
                else:
                    row.append(z)
            rows.append(tuple(row))
        return cls._raw(tuple(rows), field, n)

    @classmethod
    def diagonal(cls, values, field=QQ):
        values = [field(v) for v in values]
        n = len(values)
        z = field.zero
        return cls._raw(tuple(tuple(values[i] if i == j else z for j in range(n)) for i in range(n)), field, n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_square(self):
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        return [x for row in self.rows for x in row]

    def _check_same(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field != self.field:
            raise FieldError(f"mixing {self.field!r} and {other.field!r}")
        if other.shape != self.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_same(other)
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                           self.field, self.ncols)

    def __sub__(self, other):
        self._check_same(other)
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                           self.field, self.ncols)

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.field, self.ncols)

    def scale(self, c):
        c = self.field(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.field, self.ncols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if other.field != self.field:
                raise FieldError(f"mixing {self.field!r} and {other.field!r}")
            if self.ncols != other.nrows:
                raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
            cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
            z = self.field.zero
            rows = []
            for r in self.rows:
                row = []
                for c in cols:
                    s = z
                    for a, b in zip(r, c):
                        if a and b:
                            s = s + a * b
                    row.append(s)
                rows.append(tuple(row))
            return Matrix._raw(tuple(rows), self.field, other.ncols)
        return self.scale(other)

    __matmul__ = __mul__

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if not self.is_square or k < 0:
            raise ShapeError("power needs a square matrix and k >= 0")
        result = Matrix.identity(self.nrows, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    @property
    def T(self):
        return Matrix._raw(tuple(zip(*self.rows)) if self.nrows else tuple(() for _ in range(self.ncols)),
                           self.field, self.nrows)

    def transpose(self):
        return self.T

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix([{body}], {self.field!r})"

    def is_symmetric(self):
        return self.is_square and self == self.T

    def is_skew(self):
        return self.is_square and self == -self.T

    def is_zero(self):
        return all(not x for r in self.rows for x in r)

    def trace(self):
        if not self.is_square:
            raise ShapeError("trace of a non-square matrix")
        s = self.field.zero
        for i in range(self.nrows):
            s = s + self.rows[i][i]
        return s

    def det(self):
        """Determinant; Gaussian elimination over a field, Berkowitz otherwise."""
        if not self.is_square:
            raise ShapeError("determinant of a non-square matrix")
        if not getattr(self.field, "is_field", False):
            from .linalg import char_poly_coeffs

            n = self.nrows
            return char_poly_coeffs(self)[-1] if n else self.field.one
        n = self.nrows
        a = [list(r) for r in self.rows]
        d = self.field.one
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return self.field.zero
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            p = a[c][c]
            d = d * p
            inv = self.field.one / p
            for r in range(c + 1, n):
                f = a[r][c]
                if f:
                    f = f * inv
                    row_c = a[c]
                    a[r] = [x - f * y for x, y in zip(a[r], row_c)]
        return d

    def inverse(self):
        if not self.is_square:
            raise ShapeError("inverse of a non-square matrix")
        n = self.nrows
        one, zero = self.field.one, self.field.zero
        a = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            a[c], a[piv] = a[piv], a[c]
            inv = one / a[c][c]
            a[c] = [x * inv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return Matrix._raw(tuple(tuple(r[n:]) for r in a), self.field, n)

    def map(self, fn, field):
        return Matrix._raw(tuple(tuple(fn(x) for x in r) for r in self.rows), field, self.ncols)

    def submatrix(self, rows, cols):
        return Matrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), self.field, len(cols))

    def to_json(self):
        return [[self.field.to_json(x) for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, field=QQ):
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ShapeError("a matrix must be a JSON array of arrays")
        ncols = len(data[0]) if data else 0
        return cls(data, field, ncols)
