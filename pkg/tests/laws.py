"""Lattice laws of the subspace calculus, and agreement with the set oracle."""
from __future__ import annotations

import random

from lhomdc.exactlinalg import FieldSpec, Mat
from lhomdc.sublattice import (
    Subspace, bottom, direct_image, image_of, inverse_image, join, kernel_of, leq, meet, span, top,
)
import oracles


def random_matrix(rng: random.Random, f: FieldSpec, rows: int, cols: int, density: float = 0.6) -> Mat:
    def entry():
        if rng.random() > density:
            return 0
        if f.p is None:
            return f.parse_scalar(f"{rng.randint(-3, 3)}/{rng.randint(1, 3)}")
        return rng.randrange(f.p)
    return Mat.from_rows(f, [[entry() for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_subspace(rng: random.Random, f: FieldSpec, n: int) -> Subspace:
    k = rng.randint(0, n)
    return span(f, n, random_matrix(rng, f, k, n).tolist())


def lattice_law_failures(f: Mat, S: Subspace, S2: Subspace, T: Subspace, T2: Subspace) -> list[str]:
    """Names of the laws that fail for f: A -> B, S, S2 <= A, T, T2 <= B."""
    bad = []
    # a third subspace of A above S, for the modular law
    Z = join(S, inverse_image(f, T))
    if join(S, meet(S2, Z)) != meet(join(S, S2), Z):
        bad.append("modularity")
    if leq(direct_image(f, S), T) != leq(S, inverse_image(f, T)):
        bad.append("adjunction")
    if inverse_image(f, direct_image(f, S)) != join(S, kernel_of(f)):
        bad.append("unit")
    if direct_image(f, inverse_image(f, T)) != meet(T, image_of(f)):
        bad.append("counit")
    if direct_image(f, join(S, S2)) != join(direct_image(f, S), direct_image(f, S2)):
        bad.append("direct image preserves join")
    if inverse_image(f, meet(T, T2)) != meet(inverse_image(f, T), inverse_image(f, T2)):
        bad.append("inverse image preserves meet")
    if leq(S, S2) and not leq(direct_image(f, S), direct_image(f, S2)):
        bad.append("direct image monotone")
    if leq(T, T2) and not leq(inverse_image(f, T), inverse_image(f, T2)):
        bad.append("inverse image monotone")
    m = meet(S, S2)
    if not (leq(m, S) and leq(m, S2) and leq(S, join(S, S2)) and leq(S2, join(S, S2))):
        bad.append("bounds")
    if join(S, bottom(S.field, S.ambient_dim)) != S or meet(S, top(S.field, S.ambient_dim)) != S:
        bad.append("units of join and meet")
    return bad


def as_set(s: Subspace) -> frozenset:
    return oracles.span_set(s.field.p, s.ambient_dim, s.rows)


def oracle_disagreements(f: Mat, S: Subspace, S2: Subspace, T: Subspace) -> list[str]:
    """Compare every lattice operation with explicit vector sets (prime fields)."""
    p, rows = f.field.p, f.tolist()
    A, B = as_set(S), as_set(S2)
    bad = []
    if leq(S, S2) != (A <= B):
        bad.append("leq")
    if as_set(join(S, S2)) != oracles.sum_set(p, A, B):
        bad.append("join")
    if as_set(meet(S, S2)) != A & B:
        bad.append("meet")
    if as_set(direct_image(f, S)) != oracles.direct_image_set(p, rows, A):
        bad.append("direct_image")
    if as_set(inverse_image(f, T)) != oracles.inverse_image_set(p, rows, f.cols, as_set(T)):
        bad.append("inverse_image")
    if as_set(kernel_of(f)) != oracles.kernel_set(p, rows, f.cols):
        bad.append("kernel")
    if f.rows and as_set(image_of(f)) != oracles.image_set(p, rows, f.cols):
        bad.append("image")
    return bad
