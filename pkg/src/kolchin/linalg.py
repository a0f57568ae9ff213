"""Exact dense linear algebra over Q and F_p.

Conventions used everywhere in this package: vectors are rows and
matrices act on the right (v -> v * m), so every kernel and fixed space
below is a left kernel.  Subspaces are stored with a reduced
row-echelon basis, which makes set equality structural equality.

Row reduction over Q runs fraction-free (Bareiss) elimination on
denominator-cleared rows to keep intermediate entries as bounded
integers; over F_p it is plain Gauss-Jordan.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .fields import Field, Scalar


class NotInvariantError(ValueError):
    """Raised when a subspace is not invariant under a requested action."""

    def __init__(self, vector, image):
        self.vector = tuple(vector)
        self.image = tuple(image)
        super().__init__(
            f"subspace is not invariant: basis vector {self.vector} maps to {self.image}"
        )


def _norm(x: Scalar) -> Scalar:
    # keep integer-valued rationals as plain ints (fast, canonical)
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError("fraction-free elimination produced an inexact division")
    return q


class Matrix:
    """Immutable dense matrix with exact entries over a fixed field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: Field, rows: Iterable[Sequence], ncols: int | None = None):
        data = tuple(tuple(field.of(x) for x in row) for row in rows)
        if data:
            ncols = len(data[0])
            if any(len(r) != ncols for r in data):
                raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        self.field = field
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def _raw(cls, field: Field, rows: tuple, ncols: int) -> "Matrix":
        # trusted constructor: rows already canonical scalars
        m = object.__new__(cls)
        m.field = field
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls._raw(
            field, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def zero(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        return cls._raw(field, tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def hstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        nrows = mats[0].nrows
        if any(m.nrows != nrows or m.field != mats[0].field for m in mats):
            raise ValueError("hstack needs equal row counts over one field")
        rows = tuple(
            tuple(x for m in mats for x in m.rows[i]) for i in range(nrows)
        )
        return cls._raw(mats[0].field, rows, sum(m.ncols for m in mats))

    @classmethod
    def vstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        ncols = mats[0].ncols
        if any(m.ncols != ncols or m.field != mats[0].field for m in mats):
            raise ValueError("vstack needs equal column counts over one field")
        rows = tuple(r for m in mats for r in m.rows)
        return cls._raw(mats[0].field, rows, ncols)

    def _require_same_shape(self, other: "Matrix"):
        if self.field != other.field or self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape or field mismatch")

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.ncols != other.nrows:
            raise ValueError("shape or field mismatch in product")
        cols = tuple(zip(*other.rows)) if other.rows else ()
        p = self.field.p
        if p is None:
            rows = tuple(
                tuple(_norm(sum(a * b for a, b in zip(row, col))) for col in cols)
                for row in self.rows
            )
        else:
            rows = tuple(
                tuple(sum(a * b for a, b in zip(row, col)) % p for col in cols)
                for row in self.rows
            )
        return Matrix._raw(self.field, rows, other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._require_same_shape(other)
        p = self.field.p
        if p is None:
            rows = tuple(
                tuple(_norm(a + b) for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        else:
            rows = tuple(
                tuple((a + b) % p for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        return Matrix._raw(self.field, rows, self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._require_same_shape(other)
        p = self.field.p
        if p is None:
            rows = tuple(
                tuple(_norm(a - b) for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        else:
            rows = tuple(
                tuple((a - b) % p for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        return Matrix._raw(self.field, rows, self.ncols)

    def __neg__(self) -> "Matrix":
        p = self.field.p
        if p is None:
            rows = tuple(tuple(-a for a in r) for r in self.rows)
        else:
            rows = tuple(tuple((-a) % p for a in r) for r in self.rows)
        return Matrix._raw(self.field, rows, self.ncols)

    def scale(self, s) -> "Matrix":
        s = self.field.of(s)
        p = self.field.p
        if p is None:
            rows = tuple(tuple(_norm(s * a) for a in r) for r in self.rows)
        else:
            rows = tuple(tuple(s * a % p for a in r) for r in self.rows)
        return Matrix._raw(self.field, rows, self.ncols)

    def __pow__(self, k: int) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.field, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.field, tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def trace(self) -> Scalar:
        if self.nrows != self.ncols:
            raise ValueError("trace of a non-square matrix")
        t = sum(self.rows[i][i] for i in range(self.nrows))
        return t % self.field.p if self.field.p is not None else _norm(t)

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        ech = rref(self)
        if ech.rank != self.nrows:
            raise ValueError("matrix is singular")
        return ech.transform

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(
            x == (1 if i == j else 0)
            for i, row in enumerate(self.rows)
            for j, x in enumerate(row)
        )

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.field, self.ncols, self.rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"Matrix({self.field}, [{body}])"


@dataclass(frozen=True)
class Echelon:
    """Reduced row-echelon form with the witnessing row transform.

    ``transform`` is invertible and ``transform * input == reduced``;
    its rows below ``rank`` span the left kernel of the input.
    """

    reduced: Matrix
    pivots: tuple[int, ...]
    rank: int
    transform: Matrix


def rref(m: Matrix) -> Echelon:
    """Unique reduced row-echelon form of ``m``, with transform."""
    n, w = m.nrows, m.ncols
    field = m.field
    p = field.p
    # augmented working rows [m | I]
    aug = [list(m.rows[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    width = w + n
    pivots: list[int] = []

    if p is None:
        # clear denominators row by row, then run Bareiss on integers
        for row in aug:
            d = lcm(*(x.denominator for x in row if isinstance(x, Fraction))) if any(
                isinstance(x, Fraction) for x in row
            ) else 1
            if d != 1:
                for j in range(width):
                    row[j] = int(row[j] * d) if isinstance(row[j], Fraction) else row[j] * d
        prev = 1
        r = 0
        for c in range(w):
            piv = next((i for i in range(r, n) if aug[i][c]), None)
            if piv is None:
                continue
            if piv != r:
                aug[r], aug[piv] = aug[piv], aug[r]
            pc = aug[r][c]
            for i in range(r + 1, n):
                aic = aug[i][c]
                rowi, rowr = aug[i], aug[r]
                if prev == 1:
                    aug[i] = [pc * rowi[j] - aic * rowr[j] for j in range(width)]
                else:
                    aug[i] = [
                        _exact_div(pc * rowi[j] - aic * rowr[j], prev) for j in range(width)
                    ]
            prev = pc
            pivots.append(c)
            r += 1
            if r == n:
                break
        # normalise pivots to 1 and eliminate upwards, now in exact rationals
        for k in reversed(range(len(pivots))):
            c = pivots[k]
            pc = aug[k][c]
            if pc != 1:
                aug[k] = [_norm(Fraction(x, pc)) for x in aug[k]]
            for i in range(k):
                f = aug[i][c]
                if f:
                    rowk = aug[k]
                    aug[i] = [_norm(x - f * y) for x, y in zip(aug[i], rowk)]
    else:
        r = 0
        for c in range(w):
            piv = next((i for i in range(r, n) if aug[i][c]), None)
            if piv is None:
                continue
            if piv != r:
                aug[r], aug[piv] = aug[piv], aug[r]
            inv = pow(aug[r][c], -1, p)
            aug[r] = [x * inv % p for x in aug[r]]
            for i in range(n):
                if i != r and aug[i][c]:
                    f = aug[i][c]
                    rowr = aug[r]
                    aug[i] = [(x - f * y) % p for x, y in zip(aug[i], rowr)]
            pivots.append(c)
            r += 1
            if r == n:
                break

    reduced = Matrix._raw(field, tuple(tuple(row[:w]) for row in aug), w)
    transform = Matrix._raw(field, tuple(tuple(row[w:]) for row in aug), n)
    return Echelon(reduced, tuple(pivots), len(pivots), transform)


def express_in_rows(m: Matrix, target: Sequence[Scalar], ech: Echelon | None = None):
    """Coefficients x with x * m == target, or None if target is not in the row span."""
    if ech is None:
        ech = rref(m)
    field = m.field
    t = [field.of(x) for x in target]
    if len(t) != m.ncols:
        raise ValueError("length mismatch")
    p = field.p
    coeffs = []
    for k, c in enumerate(ech.pivots):
        f = t[c]
        coeffs.append(f)
        if f:
            rowk = ech.reduced.rows[k]
            if p is None:
                t = [_norm(x - f * y) for x, y in zip(t, rowk)]
            else:
                t = [(x - f * y) % p for x, y in zip(t, rowk)]
    if any(t):
        return None
    # x = coeffs * (first rank rows of the transform)
    x = [0] * m.nrows
    for k, f in enumerate(coeffs):
        if f:
            rowk = ech.transform.rows[k]
            x = [xi + f * yi for xi, yi in zip(x, rowk)]
    if p is None:
        return tuple(_norm(xi) for xi in x)
    return tuple(xi % p for xi in x)


class RowSpan:
    """Mutable row space kept in reduced echelon form; used for closures."""

    __slots__ = ("field", "width", "rows", "pivots")

    def __init__(self, field: Field, width: int):
        self.field = field
        self.width = width
        self.rows: list[list] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence[Scalar]) -> list:
        p = self.field.p
        v = list(vec)
        for row, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                if p is None:
                    v = [_norm(x - f * y) for x, y in zip(v, row)]
                else:
                    v = [(x - f * y) % p for x, y in zip(v, row)]
        return v

    def contains(self, vec: Sequence[Scalar]) -> bool:
        return not any(self.reduce(vec))

    def absorb(self, vec: Sequence[Scalar]) -> bool:
        """Add ``vec`` to the span; True iff the dimension grew."""
        v = self.reduce(vec)
        lead = next((j for j, x in enumerate(v) if x), None)
        if lead is None:
            return False
        p = self.field.p
        if p is None:
            inv = Fraction(1, 1) / v[lead]
            v = [_norm(inv * x) for x in v]
        else:
            inv = pow(v[lead], -1, p)
            v = [inv * x % p for x in v]
        for i, row in enumerate(self.rows):
            f = row[lead]
            if f:
                if p is None:
                    self.rows[i] = [_norm(x - f * y) for x, y in zip(row, v)]
                else:
                    self.rows[i] = [(x - f * y) % p for x, y in zip(row, v)]
        at = next((i for i, c in enumerate(self.pivots) if c > lead), len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, lead)
        return True

    def to_subspace(self) -> "Subspace":
        basis = Matrix._raw(
            self.field, tuple(tuple(r) for r in self.rows), self.width
        )
        return Subspace._raw(self.field, self.width, basis, tuple(self.pivots))


class Subspace:
    """Subspace of row vectors, stored as a canonical RREF basis.

    Two subspaces are equal as sets iff their stored bases are equal,
    so ``==`` decides subspace equality.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: Field, ambient_dim: int, rows: Iterable[Sequence]):
        m = Matrix(field, rows, ncols=ambient_dim)
        if m.ncols != ambient_dim:
            raise ValueError("row length does not match the ambient dimension")
        ech = rref(m)
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = Matrix._raw(field, ech.reduced.rows[: ech.rank], ambient_dim)
        self.pivots = ech.pivots

    @classmethod
    def _raw(cls, field, ambient_dim, basis, pivots) -> "Subspace":
        s = object.__new__(cls)
        s.field = field
        s.ambient_dim = ambient_dim
        s.basis = basis
        s.pivots = pivots
        return s

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls._raw(field, ambient_dim, Matrix.zero(field, 0, ambient_dim), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls._raw(
            field, ambient_dim, Matrix.identity(field, ambient_dim), tuple(range(ambient_dim))
        )

    @classmethod
    def from_matrix(cls, m: Matrix) -> "Subspace":
        """Row space of ``m``."""
        return cls(m.field, m.ncols, m.rows)

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def is_zero(self) -> bool:
        return self.basis.nrows == 0

    def is_full(self) -> bool:
        return self.basis.nrows == self.ambient_dim

    def complement_coordinates(self) -> tuple[int, ...]:
        """Non-pivot standard coordinates: a deterministic complement basis."""
        pivset = set(self.pivots)
        return tuple(j for j in range(self.ambient_dim) if j not in pivset)

    def reduce(self, vec: Sequence[Scalar]) -> tuple:
        """Canonical coset representative: pivot coordinates eliminated."""
        p = self.field.p
        v = [self.field.of(x) for x in vec]
        for row, c in zip(self.basis.rows, self.pivots):
            f = v[c]
            if f:
                if p is None:
                    v = [_norm(x - f * y) for x, y in zip(v, row)]
                else:
                    v = [(x - f * y) % p for x, y in zip(v, row)]
        return tuple(v)

    def contains_vector(self, vec: Sequence[Scalar]) -> bool:
        return not any(self.reduce(vec))

    def contains(self, other: "Subspace") -> bool:
        self._require_compatible(other)
        return all(self.contains_vector(r) for r in other.basis.rows)

    def _require_compatible(self, other: "Subspace"):
        if self.field != other.field or self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces live in different ambient spaces")

    def sum(self, other: "Subspace") -> "Subspace":
        self._require_compatible(other)
        return Subspace(
            self.field, self.ambient_dim, self.basis.rows + other.basis.rows
        )

    def intersection(self, other: "Subspace") -> "Subspace":
        self._require_compatible(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.ambient_dim)
        stacked = Matrix.vstack([self.basis, other.basis])
        ker = kernel(stacked)
        k1 = self.basis.nrows
        rows = [
            tuple(sum(z[i] * self.basis.rows[i][j] for i in range(k1))
                  for j in range(self.ambient_dim))
            for z in ker.basis.rows
        ]
        return Subspace(self.field, self.ambient_dim, rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of {self.field}^{self.ambient_dim})"


def kernel(m: Matrix) -> Subspace:
    """Left kernel {v : v * m = 0}, canonical."""
    ech = rref(m)
    rows = ech.transform.rows[ech.rank:]
    return Subspace(m.field, m.nrows, rows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a.sum(b)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    return a.intersection(b)


def fixed_space(mats: Sequence[Matrix]) -> Subspace:
    """Common fixed vectors {v : v * m = v for every m}."""
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].nrows
    field = mats[0].field
    for m in mats:
        if m.nrows != m.ncols or m.nrows != n or m.field != field:
            raise ValueError("matrices must be square of one size over one field")
    one = Matrix.identity(field, n)
    stacked = Matrix.hstack([m - one for m in mats])
    return kernel(stacked)


def quotient_action(m: Matrix, w: Subspace) -> Matrix:
    """Matrix of the action induced by ``m`` on V/w.

    The quotient carries the deterministic basis given by the non-pivot
    standard coordinates of ``w``.  Raises NotInvariantError when some
    basis vector of ``w`` leaves ``w`` under ``m``.
    """
    if m.nrows != m.ncols or m.nrows != w.ambient_dim or m.field != w.field:
        raise ValueError("matrix does not act on the subspace's ambient space")
    for v in w.basis.rows:
        img = tuple(
            sum(v[i] * m.rows[i][j] for i in range(m.nrows)) for j in range(m.ncols)
        )
        if not w.contains_vector(img):
            raise NotInvariantError(v, img)
    free = w.complement_coordinates()
    rows = []
    for j in free:
        red = w.reduce(m.rows[j])  # e_j * m is row j of m
        rows.append(tuple(red[c] for c in free))
    return Matrix(m.field, rows, ncols=len(free))


class Flag:
    """Strictly ascending chain of subspaces 0 = W_0 < W_1 < ... < W_k = V."""

    __slots__ = ("field", "ambient_dim", "steps")

    def __init__(self, steps: Sequence[Subspace]):
        if not steps:
            raise ValueError("empty flag")
        field = steps[0].field
        n = steps[0].ambient_dim
        if any(s.field != field or s.ambient_dim != n for s in steps):
            raise ValueError("flag steps live in different spaces")
        if not steps[0].is_zero():
            raise ValueError("flag must start at the zero subspace")
        if not steps[-1].is_full():
            raise ValueError("flag must end at the full space")
        for a, b in zip(steps, steps[1:]):
            if not (b.contains(a) and b.dim > a.dim):
                raise ValueError("flag steps must be strictly ascending")
        self.field = field
        self.ambient_dim = n
        self.steps = tuple(steps)

    @property
    def degree(self) -> int:
        """Number of strict inclusions in the chain."""
        return len(self.steps) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Flag) and self.steps == other.steps

    def __hash__(self) -> int:
        return hash(self.steps)

    def __repr__(self) -> str:
        dims = " < ".join(str(s.dim) for s in self.steps)
        return f"Flag(dims {dims} in {self.field}^{self.ambient_dim})"


def assemble_flag_basis(f: Flag) -> Matrix:
    """Invertible base change adapted to the flag.

    Rows list a basis of W_1 first, then extend step by step; with the
    right action v -> v * g, conjugating by this matrix puts any flag-
    compatible generator into triangular form.
    """
    span = RowSpan(f.field, f.ambient_dim)
    rows = []
    for step in f.steps[1:]:
        for row in step.basis.rows:
            if span.absorb(row):
                rows.append(row)
    m = Matrix._raw(f.field, tuple(rows), f.ambient_dim)
    if m.nrows != f.ambient_dim or rref(m).rank != f.ambient_dim:
        raise ValueError("malformed flag: assembled basis is not invertible")
    return m
