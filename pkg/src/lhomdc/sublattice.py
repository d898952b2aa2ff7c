"""Subspace lattice of a fixed ambient space, with direct and inverse images.

A ``Subspace`` stores the nonzero rows of the reduced row echelon form of any
spanning set. That form is unique, so two subspaces are equal as subobjects
exactly when their dataclass fields are equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .exactlinalg import FieldSpec, Mat, canonical_rows, kernel, _kernel_vectors


class AmbientMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Subspace:
    field: FieldSpec
    ambient_dim: int
    rows: tuple  # canonical basis vectors, RREF order

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.field, self.ambient_dim, self.rows))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Mat:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return Mat.from_columns(self.field, self.rows, self.ambient_dim)

    @property
    def is_bottom(self) -> bool:
        return not self.rows

    @property
    def is_top(self) -> bool:
        return len(self.rows) == self.ambient_dim

    def __contains__(self, v: Sequence) -> bool:
        return _reduce(self, tuple(self.field(x) for x in v)) is None

    def __le__(self, other: "Subspace") -> bool:
        return leq(self, other)

    def __or__(self, other: "Subspace") -> "Subspace":
        return join(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return meet(self, other)

    def __repr__(self):
        fmt = self.field.format_scalar
        vecs = ", ".join("(" + ",".join(fmt(x) for x in r) + ")" for r in self.rows)
        return f"Subspace[{self.field}^{self.ambient_dim}]{{{vecs}}}"


def span(field: FieldSpec, ambient_dim: int, vectors: Iterable[Sequence]) -> Subspace:
    vecs = [tuple(field(x) for x in v) for v in vectors]
    for v in vecs:
        if len(v) != ambient_dim:
            raise AmbientMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
    return Subspace(field, ambient_dim, canonical_rows(field, ambient_dim, vecs))


def column_span(m: Mat) -> Subspace:
    return Subspace(m.field, m.rows, canonical_rows(m.field, m.rows, m.columns()))


def bottom(field: FieldSpec, ambient_dim: int) -> Subspace:
    return Subspace(field, ambient_dim, ())


def top(field: FieldSpec, ambient_dim: int) -> Subspace:
    o, z = field.one, field.zero
    rows = tuple(tuple(o if i == j else z for j in range(ambient_dim)) for i in range(ambient_dim))
    return Subspace(field, ambient_dim, rows)


def kernel_of(m: Mat) -> Subspace:
    return column_span(kernel(m))


def image_of(m: Mat) -> Subspace:
    return column_span(m)


def _check(s: Subspace, t: Subspace):
    if s.field != t.field or s.ambient_dim != t.ambient_dim:
        raise AmbientMismatch(
            f"subspaces of {s.field}^{s.ambient_dim} and {t.field}^{t.ambient_dim} are not comparable"
        )


def _reduce(t: Subspace, v: tuple):
    """Reduce ``v`` against the RREF rows of ``t``; None if it reduces to zero."""
    norm = t.field.norm
    v = list(v)
    for row in t.rows:
        pc = next(i for i, x in enumerate(row) if x != 0)
        c = v[pc]
        if c != 0:
            v = [norm(a - c * b) for a, b in zip(v, row)]
    return None if all(x == 0 for x in v) else v


@lru_cache(maxsize=1 << 18)
def leq(s: Subspace, t: Subspace) -> bool:
    """Containment, by solving every basis vector of ``s`` into ``t``."""
    _check(s, t)
    if s.dim > t.dim:
        return False
    return all(_reduce(t, v) is None for v in s.rows)


@lru_cache(maxsize=1 << 16)
def join(s: Subspace, t: Subspace) -> Subspace:
    _check(s, t)
    if leq(s, t):
        return t
    if leq(t, s):
        return s
    return Subspace(s.field, s.ambient_dim, canonical_rows(s.field, s.ambient_dim, s.rows + t.rows))


@lru_cache(maxsize=1 << 16)
def meet(s: Subspace, t: Subspace) -> Subspace:
    _check(s, t)
    if leq(s, t):
        return s
    if leq(t, s):
        return t
    f, n = s.field, s.ambient_dim
    # x = S a = T b  <=>  [S | -T] (a, b) = 0
    stacked = Mat.from_columns(f, s.rows + tuple(tuple(f.norm(-x) for x in r) for r in t.rows), n)
    vecs = []
    k = s.dim
    for sol in _kernel_vectors(stacked):
        a = sol[:k]
        vecs.append(tuple(f.norm(sum(a[i] * s.rows[i][j] for i in range(k))) for j in range(n)))
    return Subspace(f, n, canonical_rows(f, n, vecs))


@lru_cache(maxsize=1 << 16)
def direct_image(f: Mat, s: Subspace) -> Subspace:
    """{ f x : x in s }, a subspace of the codomain of ``f``."""
    if f.cols != s.ambient_dim or f.field != s.field:
        raise AmbientMismatch(f"map of shape {f.shape} applied to a subspace of dimension {s.ambient_dim}")
    return Subspace(f.field, f.rows, canonical_rows(f.field, f.rows, [f.apply(v) for v in s.rows]))


@lru_cache(maxsize=1 << 16)
def annihilator(t: Subspace) -> Mat:
    """Matrix ``N`` with ``t = ker N``."""
    m = Mat(t.field, t.dim, t.ambient_dim, t.rows)
    ann = _kernel_vectors(m)
    return Mat(t.field, len(ann), t.ambient_dim, tuple(ann))


@lru_cache(maxsize=1 << 16)
def inverse_image(f: Mat, t: Subspace) -> Subspace:
    """{ x : f x in t }, a subspace of the domain of ``f``."""
    if f.rows != t.ambient_dim or f.field != t.field:
        raise AmbientMismatch(f"map of shape {f.shape} pulled back along a subspace of dimension {t.ambient_dim}")
    if t.is_top:
        return top(f.field, f.cols)
    return kernel_of(annihilator(t) @ f)
