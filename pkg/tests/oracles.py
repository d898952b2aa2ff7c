"""Brute-force oracles over small prime fields: subspaces as explicit vector sets."""
from __future__ import annotations

import itertools


def all_vectors(p: int, n: int):
    return list(itertools.product(range(p), repeat=n))


def span_set(p: int, n: int, gens) -> frozenset:
    out = set()
    gens = [tuple(g) for g in gens]
    for coeffs in itertools.product(range(p), repeat=len(gens)):
        out.add(tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) % p for i in range(n)))
    if not gens:
        out.add((0,) * n)
    return frozenset(out)


def apply(p: int, rows, x) -> tuple:
    return tuple(sum(a * b for a, b in zip(r, x)) % p for r in rows)


def kernel_set(p: int, rows, ncols: int) -> frozenset:
    return frozenset(x for x in all_vectors(p, ncols) if not any(apply(p, rows, x)))


def image_set(p: int, rows, ncols: int) -> frozenset:
    nrows = len(rows)
    return frozenset(apply(p, rows, x) for x in all_vectors(p, ncols)) if nrows else frozenset({()})


def sum_set(p: int, a: frozenset, b: frozenset) -> frozenset:
    return frozenset(tuple((x + y) % p for x, y in zip(u, v)) for u in a for v in b)


def direct_image_set(p: int, rows, s: frozenset) -> frozenset:
    return frozenset(apply(p, rows, x) for x in s)


def inverse_image_set(p: int, rows, ncols: int, t: frozenset) -> frozenset:
    return frozenset(x for x in all_vectors(p, ncols) if apply(p, rows, x) in t)


def log_size(p: int, s: frozenset) -> int:
    n, k = len(s), 0
    while n > 1:
        n //= p
        k += 1
    return k
