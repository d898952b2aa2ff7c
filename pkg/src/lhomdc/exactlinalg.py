"""Exact dense linear algebra over Q and prime fields.

Scalars are plain Python numbers: ``Fraction`` for the rationals and ``int``
residues in ``[0, p)`` for a prime field. Everything is immutable; a morphism
from an n-dimensional space to an m-dimensional one is an m x n ``Mat`` acting
on column vectors.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Vector = tuple


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field of order ``p``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not (2 <= self.p < 2**31) or not _is_prime(self.p):
                raise ValueError(f"not a prime below 2^31: {self.p!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __str__(self):
        return "Q" if self.p is None else f"F{self.p}"

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Accepts ``Q``, ``F5``, ``Fp5`` or a bare prime ``5``."""
        t = text.strip()
        if t.upper() in ("Q", "QQ"):
            return cls(None)
        m = re.fullmatch(r"(?:[Ff][Pp]?)?(\d+)", t)
        if not m:
            raise ValueError(f"unknown field {text!r}")
        return cls(int(m.group(1)))

    # scalar arithmetic

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def __call__(self, x) -> Fraction | int:
        """Coerce an int, Fraction or scalar string into this field."""
        if isinstance(x, str):
            return self.parse_scalar(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def norm(self, x):
        return x if self.p is None else x % self.p

    def inv(self, x):
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def parse_scalar(self, text: str):
        t = text.strip()
        if self.p is None:
            m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", t)
            if not m:
                raise ValueError(f"bad rational {text!r}")
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ValueError(f"zero denominator in {text!r}")
            return Fraction(int(m.group(1)), den)
        if not re.fullmatch(r"[+-]?\d+", t):
            raise ValueError(f"bad residue {text!r}")
        return int(t) % self.p

    def format_scalar(self, x) -> str:
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x)


Q = FieldSpec(None)


def Fp(p: int) -> FieldSpec:
    return FieldSpec(p)


@dataclass(frozen=True)
class Mat:
    """Dense immutable matrix; ``entries`` is a tuple of row tuples."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.field, self.rows, self.cols, self.entries))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Mat):
            return NotImplemented
        # hashes are cached, so this rejects most unequal pairs cheaply
        return hash(self) == hash(other) and (self.field, self.rows, self.cols, self.entries) == (
            other.field, other.rows, other.cols, other.entries)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [tuple(field(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(field, len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence], nrows: int) -> "Mat":
        cols = [tuple(c) for c in columns]
        entries = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls(field, nrows, len(cols), entries)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Mat":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Mat":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Mat":
        entries = tuple(tuple(r[j] for r in self.entries) for j in range(self.cols))
        return Mat(self.field, self.cols, self.rows, entries)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        if self.field != other.field:
            raise ValueError("field mismatch")
        return matmul(self, other)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length does not match matrix")
        norm = self.field.norm
        return tuple(norm(sum(a * b for a, b in zip(r, v))) for r in self.entries)

    def scale(self, s) -> "Mat":
        s = self.field(s)
        norm = self.field.norm
        return Mat(self.field, self.rows, self.cols, tuple(tuple(norm(s * x) for x in r) for r in self.entries))

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        norm = self.field.norm
        return Mat(self.field, self.rows, self.cols,
                   tuple(tuple(norm(a + b) for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.entries]

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format_scalar(x) for x in r) for r in self.entries)
        return f"Mat[{self.field}]({self.rows}x{self.cols}: {body})"


@lru_cache(maxsize=1 << 16)
def matmul(a: Mat, b: Mat) -> Mat:
    norm = a.field.norm
    bt = tuple(zip(*b.entries)) if b.rows else tuple(() for _ in range(b.cols))
    entries = tuple(
        tuple(norm(sum(x * y for x, y in zip(r, c))) if r else a.field.zero for c in bt)
        for r in a.entries
    )
    return Mat(a.field, a.rows, b.cols, entries)


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product; basis of the tensor product ordered as ``i * dim_b + j``."""
    norm = a.field.norm
    rows = []
    for ra in a.entries:
        for rb in b.entries:
            rows.append(tuple(norm(x * y) for x in ra for y in rb))
    return Mat(a.field, a.rows * b.rows, a.cols * b.cols, tuple(rows))


def block_diag(a: Mat, b: Mat) -> Mat:
    z = a.field.zero
    rows = [r + (z,) * b.cols for r in a.entries] + [(z,) * a.cols + r for r in b.entries]
    return Mat(a.field, a.rows + b.rows, a.cols + b.cols, tuple(rows))


def hstack(field: FieldSpec, nrows: int, mats: Iterable[Mat]) -> Mat:
    mats = list(mats)
    rows = tuple(tuple(x for m in mats for x in m.entries[i]) for i in range(nrows))
    return Mat(field, nrows, sum(m.cols for m in mats), rows)


def _rref_rows(field: FieldSpec, rows: list[list], ncols: int, limit: int | None = None):
    """In-place Gauss-Jordan on ``rows``; pivots are searched in columns < ``limit``."""
    norm, inv = field.norm, field.inv
    limit = ncols if limit is None else limit
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        piv = next((k for k in range(r, nrows) if rows[k][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        row = rows[r]
        s = inv(row[c])
        if s != 1:
            row = [norm(x * s) for x in row]
            rows[r] = row
        for k in range(nrows):
            if k != r:
                fac = rows[k][c]
                if fac != 0:
                    rows[k] = [norm(x - fac * y) for x, y in zip(rows[k], row)]
        pivots.append(c)
        r += 1
    return pivots


@lru_cache(maxsize=1 << 16)
def rref(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns (first nonzero pivot, column order)."""
    rows = [list(r) for r in m.entries]
    pivots = _rref_rows(m.field, rows, m.cols)
    return Mat(m.field, m.rows, m.cols, tuple(tuple(r) for r in rows)), tuple(pivots)


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def canonical_rows(field: FieldSpec, ncols: int, vectors: Iterable[Sequence]) -> tuple:
    """Nonzero rows of the RREF of the matrix whose rows are ``vectors``.

    This is the canonical basis of the span, used as subspace identity.
    """
    rows = [list(v) for v in vectors]
    pivots = _rref_rows(field, rows, ncols)
    return tuple(tuple(r) for r in rows[: len(pivots)])


def _kernel_vectors(m: Mat) -> list[Vector]:
    red, pivots = rref(m)
    f = m.field
    free = [c for c in range(m.cols) if c not in pivots]
    out = []
    for fc in free:
        v = [f.zero] * m.cols
        v[fc] = f.one
        for r, pc in enumerate(pivots):
            v[pc] = f.norm(-red.entries[r][fc])
        out.append(tuple(v))
    return out


def _basis_mat(field: FieldSpec, n: int, rows: tuple) -> Mat:
    return Mat.from_columns(field, rows, n)


@lru_cache(maxsize=1 << 16)
def kernel(m: Mat) -> Mat:
    """Canonical basis (as columns) of the null space of ``m``."""
    rows = canonical_rows(m.field, m.cols, _kernel_vectors(m))
    return _basis_mat(m.field, m.cols, rows)


@lru_cache(maxsize=1 << 16)
def image(m: Mat) -> Mat:
    """Canonical basis (as columns) of the column space of ``m``."""
    rows = canonical_rows(m.field, m.rows, m.columns())
    return _basis_mat(m.field, m.rows, rows)


def solve(m: Mat, b: Sequence) -> Vector | None:
    """Some ``x`` with ``m x = b``, or None if ``b`` is not in the image.

    Free variables are set to zero.
    """
    if len(b) != m.rows:
        raise ValueError(f"rhs of length {len(b)} for a {m.rows}-row matrix")
    f = m.field
    rows = [list(r) + [f(x)] for r, x in zip(m.entries, b)]
    pivots = _rref_rows(f, rows, m.cols + 1, limit=m.cols)
    for r in rows[len(pivots):]:
        if r[-1] != 0:
            return None
    x = [f.zero] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][-1]
    return tuple(x)


def left_inverse(m: Mat) -> Mat:
    """A matrix ``L`` with ``L m = I`` for ``m`` of full column rank."""
    f = m.field
    n = m.rows
    ident = Mat.identity(f, n).entries
    rows = [list(r) + list(e) for r, e in zip(m.entries, ident)]
    pivots = _rref_rows(f, rows, m.cols + n, limit=m.cols)
    if len(pivots) != m.cols:
        raise ValueError("matrix does not have full column rank")
    return Mat(f, m.cols, n, tuple(tuple(r[m.cols:]) for r in rows[: m.cols]))


def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise ValueError("only square matrices are invertible")
    return left_inverse(m)


def is_invertible(m: Mat) -> bool:
    return m.rows == m.cols and rank(m) == m.rows
