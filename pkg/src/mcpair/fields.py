"""Exact linear algebra over the rationals and small prime fields.

Scalars are plain python objects (Fraction for the rationals, canonical
int residues for F_p); a Field object supplies the arithmetic so the rest
of the package never branches on the field kind.  Everything is exact:
no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence


class Field:
    """Arithmetic dispatch for one coefficient field."""

    name: str
    characteristic: int

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n: int):
        raise NotImplementedError

    def from_rational(self, q: Fraction):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def parse(self, text: str):
        """Read a scalar literal: "3", "-2", or "3/4"."""
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self.div(self.from_int(int(num)), self.from_int(int(den)))
        return self.from_int(int(text))

    def format(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "Q"
    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def from_int(self, n: int):
        return Fraction(n)

    def from_rational(self, q: Fraction):
        return q


class PrimeField(Field):
    """F_p with residues stored in [0, p)."""

    def __init__(self, p: int):
        if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        if p > 2**31:
            raise ValueError("prime too large")
        self.p = p
        self.name = f"F{p}"
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n: int):
        return n % self.p

    def from_rational(self, q: Fraction):
        # denominator must be a unit mod p
        return self.div(self.from_int(q.numerator), self.from_int(q.denominator))


QQ = RationalField()

_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def as_scalar(field: Field, c):
    """Coerce an int, Fraction or already-converted scalar into the field."""
    if isinstance(c, int):
        return field.from_int(c)
    if isinstance(c, Fraction):
        return field.from_rational(c)
    return c


def field_by_name(name: str) -> Field:
    """Resolve "Q" or "F<p>" to a Field instance."""
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise ValueError(f"unknown field {name!r}")


Vector = tuple


def vec_add(field: Field, u: Sequence, v: Sequence) -> Vector:
    return tuple(field.add(a, b) for a, b in zip(u, v, strict=True))


def vec_sub(field: Field, u: Sequence, v: Sequence) -> Vector:
    return tuple(field.sub(a, b) for a, b in zip(u, v, strict=True))


def vec_scale(field: Field, c, v: Sequence) -> Vector:
    return tuple(field.mul(c, a) for a in v)


def vec_zero(field: Field, n: int) -> Vector:
    return (field.zero,) * n


def vec_is_zero(field: Field, v: Sequence) -> bool:
    return all(field.is_zero(a) for a in v)


class Matrix:
    """Immutable dense matrix over one field.

    Rows are tuples of scalars.  Vectors passed to apply/solve are plain
    sequences read as column vectors.
    """

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: Field, rows: Iterable[Sequence], ncols: Optional[int] = None):
        rows = tuple(tuple(r) for r in rows)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("empty matrix needs explicit ncols")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def zero(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field, [(field.zero,) * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(
            field,
            [tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)],
            n,
        )

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], nrows: Optional[int] = None) -> "Matrix":
        if columns:
            nrows = len(columns[0])
        elif nrows is None:
            raise ValueError("no columns: need explicit nrows")
        return cls(field, [tuple(col[i] for col in columns) for i in range(nrows)], len(columns))

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: Optional[int] = None) -> "Matrix":
        return cls(field, rows, ncols)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field is other.field
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field.name, self.ncols, self.rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other, same=True)
        f = self.field
        return Matrix(
            f,
            [tuple(f.add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other, same=True)
        f = self.field
        return Matrix(
            f,
            [tuple(f.sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, [tuple(f.neg(a) for a in r) for r in self.rows], self.ncols)

    def scale(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, [tuple(f.mul(c, a) for a in r) for r in self.rows], self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch: {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        f = self.field
        cols = other.ncols
        out = []
        for r in self.rows:
            row = []
            for j in range(cols):
                acc = f.zero
                for k, a in enumerate(r):
                    if not f.is_zero(a):
                        acc = f.add(acc, f.mul(a, other.rows[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(f, out, cols)

    def apply(self, v: Sequence) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        f = self.field
        out = []
        for r in self.rows:
            acc = f.zero
            for a, x in zip(r, v):
                if not f.is_zero(a) and not f.is_zero(x):
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [self.column(j) for j in range(self.ncols)], self.nrows)

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(a) for r in self.rows for a in r)

    def _check_shape(self, other: "Matrix", same: bool = False):
        if same and (self.nrows != other.nrows or self.ncols != other.ncols):
            raise ValueError("shape mismatch")

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot columns.

        Pivot choice is the first row with a nonzero entry in the current
        column, so bases derived from this are reproducible across runs.
        """
        f = self.field
        rows = [list(r) for r in self.rows]
        pivots = []
        pr = 0
        for col in range(self.ncols):
            sel = None
            for i in range(pr, len(rows)):
                if not f.is_zero(rows[i][col]):
                    sel = i
                    break
            if sel is None:
                continue
            rows[pr], rows[sel] = rows[sel], rows[pr]
            piv = rows[pr][col]
            if piv != f.one:
                c = f.inv(piv)
                rows[pr] = [f.mul(c, a) for a in rows[pr]]
            for i in range(len(rows)):
                if i != pr and not f.is_zero(rows[i][col]):
                    c = rows[i][col]
                    rows[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(rows[i], rows[pr])]
            pivots.append(col)
            pr += 1
            if pr == len(rows):
                break
        return Matrix(f, [tuple(r) for r in rows], self.ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])


def kernel_basis(m: Matrix) -> list[Vector]:
    """Basis of ker(m) as column vectors; count = cols - rank."""
    f = m.field
    red, pivots = m.rref()
    pivot_set = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivot_set]
    basis = []
    for j in free:
        v = [f.zero] * m.ncols
        v[j] = f.one
        # read the pivot coordinates off the reduced rows
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(red.rows[i][j])
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, b: Sequence) -> Optional[tuple[Vector, list[Vector]]]:
    """One exact solution of m x = b plus a kernel basis, or None."""
    if len(b) != m.nrows:
        raise ValueError("dimension mismatch")
    f = m.field
    aug = Matrix(f, [tuple(r) + (bb,) for r, bb in zip(m.rows, b)], m.ncols + 1)
    red, pivots = aug.rref()
    if m.ncols in pivots:
        return None
    x = [f.zero] * m.ncols
    for i, pc in enumerate(pivots):
        x[pc] = red.rows[i][m.ncols]
    return tuple(x), kernel_basis(m)


def row_space_basis(field: Field, vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """Echelonized basis of the span of the given vectors."""
    if not vectors:
        return []
    red, pivots = Matrix(field, vectors, dim).rref()
    return [red.rows[i] for i in range(len(pivots))]


def quotient_representatives(field: Field, sub: Sequence[Sequence], ambient_dim: int) -> list[Vector]:
    """Vectors completing a basis of span(sub) to a basis of field^ambient_dim.

    Standard basis vectors are tried in index order, so output is stable.
    """
    span = Subspace(field, ambient_dim, sub)
    out = []
    for j in range(ambient_dim):
        e = [field.zero] * ambient_dim
        e[j] = field.one
        if span.insert(tuple(e)):
            out.append(tuple(e))
    return out


class Subspace:
    """Incrementally maintained echelonized span inside field^n."""

    def __init__(self, field: Field, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        self.field = field
        self.ambient_dim = ambient_dim
        self.rows: list[Vector] = []   # each with leading 1, echelon order
        self.pivots: list[int] = []
        for v in vectors:
            self.insert(tuple(v))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Sequence) -> Vector:
        """Residual of v after eliminating all pivot coordinates."""
        f = self.field
        v = list(v)
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not f.is_zero(c):
                for k in range(p, self.ambient_dim):
                    v[k] = f.sub(v[k], f.mul(c, row[k]))
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return vec_is_zero(self.field, self.reduce(v))

    def insert(self, v: Sequence) -> bool:
        """Add v to the span; True if the dimension grew."""
        f = self.field
        r = self.reduce(v)
        for p in range(self.ambient_dim):
            if not f.is_zero(r[p]):
                r = vec_scale(f, f.inv(r[p]), r)
                # back-substitute into the existing rows to keep full reduction
                for i, row in enumerate(self.rows):
                    c = row[p]
                    if not f.is_zero(c):
                        self.rows[i] = vec_sub(f, row, vec_scale(f, c, r))
                at = sum(1 for q in self.pivots if q < p)
                self.rows.insert(at, r)
                self.pivots.insert(at, p)
                return True
        return False

    def basis(self) -> list[Vector]:
        return list(self.rows)


def coordinates(field: Field, basis: Sequence[Sequence], v: Sequence) -> Optional[Vector]:
    """Coefficients expressing v in the given spanning set, if any."""
    if not basis:
        return () if vec_is_zero(field, v) else None
    sol = solve(Matrix.from_columns(field, basis), v)
    return None if sol is None else sol[0]
