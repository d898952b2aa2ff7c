"""Double complexes on a finite grid.

Row index ``i`` grows downward and column index ``j`` rightward. ``hmaps[i][j]``
goes from (i, j) to (i, j+1) and ``vmaps[i][j]`` from (i, j) to (i+1, j).
Squares commute (no sign convention). Anything outside the grid is a zero
object, so every missing map is a zero map to or from the zero space.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from pathlib import Path
from typing import Iterator

from .exactlinalg import FieldSpec, Mat, block_diag, inverse, is_invertible, kron

GridIndex = tuple  # (row, col)


class ShapeError(ValueError):
    """A stored matrix does not fit the dimensions of its source/target."""


class DocumentError(ValueError):
    pass


class ParseError(DocumentError):
    def __init__(self, msg, line=None, col=None):
        loc = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(msg + loc)
        self.line, self.col = line, col


class SchemaError(DocumentError):
    pass


class ValidationFailure(DocumentError):
    def __init__(self, report: "ValidationReport"):
        super().__init__(f"document is not a double complex: {len(report.violations)} violation(s)")
        self.report = report


@dataclass(frozen=True)
class ChainComplex:
    field: FieldSpec
    dims: tuple
    maps: tuple  # maps[i]: dims[i] -> dims[i+1]

    def __post_init__(self):
        if len(self.maps) != max(len(self.dims) - 1, 0):
            raise ShapeError("need exactly len(dims) - 1 maps")
        for i, m in enumerate(self.maps):
            if m.shape != (self.dims[i + 1], self.dims[i]):
                raise ShapeError(f"map {i} has shape {m.shape}, expected {(self.dims[i + 1], self.dims[i])}")
        for i in range(len(self.maps) - 1):
            if not (self.maps[i + 1] @ self.maps[i]).is_zero():
                raise ValueError(f"not a complex: d{i + 1} d{i} != 0")

    def __len__(self):
        return len(self.dims)


@dataclass(frozen=True)
class Violation:
    law: str  # "horizontal" | "vertical" | "commuting"
    at: GridIndex

    def describe(self) -> str:
        i, j = self.at
        if self.law == "horizontal":
            return f"h({i},{j + 1}) h({i},{j}) != 0"
        if self.law == "vertical":
            return f"v({i + 1},{j}) v({i},{j}) != 0"
        return f"v({i},{j + 1}) h({i},{j}) != h({i + 1},{j}) v({i},{j})"


@dataclass
class ValidationReport:
    violations: list = dc_field(default_factory=list)
    checked: dict = dc_field(default_factory=lambda: {"horizontal": 0, "vertical": 0, "commuting": 0})

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "checked": dict(self.checked),
            "violations": [
                {"law": v.law, "position": list(v.at), "detail": v.describe()} for v in self.violations
            ],
        }


@dataclass(frozen=True)
class DoubleComplex:
    field: FieldSpec
    dims: tuple  # R x C tuple of tuples
    hmaps: tuple  # R x (C-1)
    vmaps: tuple  # (R-1) x C

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.field, self.dims, self.hmaps, self.vmaps))
            object.__setattr__(self, "_hash", h)
        return h

    def __post_init__(self):
        R, C = self.rows, self.cols
        if R < 1 or C < 1 or any(len(r) != C for r in self.dims):
            raise ShapeError("dims must be a non-empty rectangular grid")
        if any(d < 0 for r in self.dims for d in r):
            raise ShapeError("negative dimension")
        if len(self.hmaps) != R or any(len(r) != C - 1 for r in self.hmaps):
            raise ShapeError("hmaps grid has the wrong shape")
        if len(self.vmaps) != R - 1 or any(len(r) != C for r in self.vmaps):
            raise ShapeError("vmaps grid has the wrong shape")
        for i in range(R):
            for j in range(C - 1):
                m = self.hmaps[i][j]
                if m.field != self.field or m.shape != (self.dims[i][j + 1], self.dims[i][j]):
                    raise ShapeError(f"hmap at ({i},{j}) has shape {m.shape}, expected "
                                     f"{(self.dims[i][j + 1], self.dims[i][j])}")
        for i in range(R - 1):
            for j in range(C):
                m = self.vmaps[i][j]
                if m.field != self.field or m.shape != (self.dims[i + 1][j], self.dims[i][j]):
                    raise ShapeError(f"vmap at ({i},{j}) has shape {m.shape}, expected "
                                     f"{(self.dims[i + 1][j], self.dims[i][j])}")

    @property
    def rows(self) -> int:
        return len(self.dims)

    @property
    def cols(self) -> int:
        return len(self.dims[0]) if self.dims else 0

    def positions(self) -> Iterator[GridIndex]:
        for i in range(self.rows):
            for j in range(self.cols):
                yield (i, j)

    def inside(self, i: int, j: int) -> bool:
        return 0 <= i < self.rows and 0 <= j < self.cols

    def dim(self, i: int, j: int) -> int:
        return self.dims[i][j] if self.inside(i, j) else 0

    def h(self, i: int, j: int) -> Mat:
        """Horizontal map (i, j) -> (i, j+1), zero when either end is padding."""
        if self.inside(i, j) and self.inside(i, j + 1):
            return self.hmaps[i][j]
        return Mat.zeros(self.field, self.dim(i, j + 1), self.dim(i, j))

    def v(self, i: int, j: int) -> Mat:
        """Vertical map (i, j) -> (i+1, j), zero when either end is padding."""
        if self.inside(i, j) and self.inside(i + 1, j):
            return self.vmaps[i][j]
        return Mat.zeros(self.field, self.dim(i + 1, j), self.dim(i, j))

    def diag(self, i: int, j: int) -> Mat:
        """Diagonal (i, j) -> (i+1, j+1), taken through (i, j+1)."""
        return self.v(i, j + 1) @ self.h(i, j)

    @classmethod
    def from_maps(cls, field: FieldSpec, dims, hmaps: dict, vmaps: dict) -> "DoubleComplex":
        """Build from dicts keyed by (i, j); absent maps are zero."""
        dims = tuple(tuple(r) for r in dims)
        R, C = len(dims), len(dims[0])
        hm = tuple(tuple(hmaps.get((i, j)) or Mat.zeros(field, dims[i][j + 1], dims[i][j])
                         for j in range(C - 1)) for i in range(R))
        vm = tuple(tuple(vmaps.get((i, j)) or Mat.zeros(field, dims[i + 1][j], dims[i][j])
                         for j in range(C)) for i in range(R - 1))
        return cls(field, dims, hm, vm)

    @classmethod
    def zero(cls, field: FieldSpec, dims) -> "DoubleComplex":
        return cls.from_maps(field, dims, {}, {})


@dataclass(frozen=True)
class ObjectContext:
    """The maps around one object A: d into A from the left, c from above,
    p = c a diagonally, and e, f, q = g e out of it."""

    at: GridIndex
    dimA: int
    e: Mat
    f: Mat
    c: Mat
    d: Mat
    p: Mat
    q: Mat
    a: Mat
    g: Mat

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.at, self.dimA, self.e, self.f, self.c, self.d, self.p, self.q, self.a, self.g))
            object.__setattr__(self, "_hash", h)
        return h


def validate(dc: DoubleComplex) -> ValidationReport:
    rep = ValidationReport()
    R, C = dc.rows, dc.cols
    for i in range(R):
        for j in range(C - 2):
            rep.checked["horizontal"] += 1
            if not (dc.hmaps[i][j + 1] @ dc.hmaps[i][j]).is_zero():
                rep.violations.append(Violation("horizontal", (i, j)))
    for i in range(R - 2):
        for j in range(C):
            rep.checked["vertical"] += 1
            if not (dc.vmaps[i + 1][j] @ dc.vmaps[i][j]).is_zero():
                rep.violations.append(Violation("vertical", (i, j)))
    for i in range(R - 1):
        for j in range(C - 1):
            rep.checked["commuting"] += 1
            if dc.vmaps[i][j + 1] @ dc.hmaps[i][j] != dc.hmaps[i + 1][j] @ dc.vmaps[i][j]:
                rep.violations.append(Violation("commuting", (i, j)))
    rep.violations.sort(key=lambda v: (v.at, v.law))
    return rep


@lru_cache(maxsize=1 << 12)
def context(dc: DoubleComplex, at: GridIndex) -> ObjectContext:
    i, j = at
    if not dc.inside(i, j):
        raise IndexError(f"position {at} outside a {dc.rows}x{dc.cols} grid")
    c = dc.v(i - 1, j)
    a = dc.h(i - 1, j - 1)
    e = dc.h(i, j)
    g = dc.v(i, j + 1)
    return ObjectContext(
        at=(i, j), dimA=dc.dims[i][j],
        e=e, f=dc.v(i, j), c=c, d=dc.h(i, j - 1),
        p=c @ a, q=g @ e, a=a, g=g,
    )


def tensor_complex(c1: ChainComplex, c2: ChainComplex) -> DoubleComplex:
    """Rows indexed by ``c1``, columns by ``c2``; h = id (x) d2, v = d1 (x) id."""
    if c1.field != c2.field:
        raise ValueError("field mismatch")
    f = c1.field
    R, C = len(c1), len(c2)
    dims = tuple(tuple(c1.dims[i] * c2.dims[j] for j in range(C)) for i in range(R))
    hm = tuple(tuple(kron(Mat.identity(f, c1.dims[i]), c2.maps[j]) for j in range(C - 1)) for i in range(R))
    vm = tuple(tuple(kron(c1.maps[i], Mat.identity(f, c2.dims[j])) for j in range(C)) for i in range(R - 1))
    return DoubleComplex(f, dims, hm, vm)


def direct_sum(x: DoubleComplex, y: DoubleComplex) -> DoubleComplex:
    if x.field != y.field or (x.rows, x.cols) != (y.rows, y.cols):
        raise ValueError("direct sum needs equal fields and grid shapes")
    dims = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(x.dims, y.dims))
    hm = tuple(tuple(block_diag(a, b) for a, b in zip(r, s)) for r, s in zip(x.hmaps, y.hmaps))
    vm = tuple(tuple(block_diag(a, b) for a, b in zip(r, s)) for r, s in zip(x.vmaps, y.vmaps))
    return DoubleComplex(x.field, dims, hm, vm)


def change_basis(dc: DoubleComplex, gauge: dict) -> DoubleComplex:
    """Conjugate every map by invertible matrices ``gauge[(i, j)]`` (old -> new coordinates)."""
    inv = {k: inverse(t) for k, t in gauge.items()}
    hm = tuple(tuple(gauge[(i, j + 1)] @ dc.hmaps[i][j] @ inv[(i, j)] for j in range(dc.cols - 1))
               for i in range(dc.rows))
    vm = tuple(tuple(gauge[(i + 1, j)] @ dc.vmaps[i][j] @ inv[(i, j)] for j in range(dc.cols))
               for i in range(dc.rows - 1))
    return DoubleComplex(dc.field, dc.dims, hm, vm)


# random generation

_MODES = ("tensor", "zero", "exact_rows", "direct_sum")


@dataclass(frozen=True)
class GenConfig:
    mode: str = "tensor"
    rows: int = 3
    cols: int = 3
    dim_max: int = 4
    field: FieldSpec = FieldSpec(2)
    seed: int = 0


def _rand_scalar(rng: random.Random, f: FieldSpec):
    if f.p is None:
        return f(rng.randint(-3, 3))
    return rng.randrange(f.p)


def _rand_invertible(rng: random.Random, f: FieldSpec, n: int) -> Mat:
    while True:
        m = Mat.from_rows(f, [[_rand_scalar(rng, f) for _ in range(n)] for _ in range(n)], cols=n)
        if is_invertible(m):
            return m


def random_chain_complex(rng: random.Random, f: FieldSpec, length: int, dim_max: int,
                         exact: bool = False) -> ChainComplex:
    """Direct sum of staircases 0 -> k = k -> 0 and (unless ``exact``) homology
    summands, in randomly changed bases. Staircases never leave the window, so
    an ``exact`` complex is exact at every position, ends included."""
    stairs = [0] * max(length - 1, 0)  # stairs[k]: summands k -> k+1
    used = [0] * length
    for k in range(length - 1):
        room = dim_max - max(used[k], used[k + 1])
        if room > 0:
            stairs[k] = rng.randint(1, room) if rng.random() < 0.8 else rng.randint(0, room)
            used[k] += stairs[k]
            used[k + 1] += stairs[k]
    hom = [0 if exact else rng.randint(0, dim_max - used[k]) for k in range(length)]
    dims = [used[k] + hom[k] for k in range(length)]
    # basis at position k: [incoming stairs | outgoing stairs | homology]
    maps = []
    for k in range(length - 1):
        inc = stairs[k - 1] if k > 0 else 0
        ent = [[f.zero] * dims[k] for _ in range(dims[k + 1])]
        for t in range(stairs[k]):
            ent[t][inc + t] = f.one
        maps.append(Mat(f, dims[k + 1], dims[k], tuple(tuple(r) for r in ent)))
    gauge = [_rand_invertible(rng, f, n) for n in dims]
    maps = [gauge[k + 1] @ m @ inverse(gauge[k]) for k, m in enumerate(maps)]
    return ChainComplex(f, tuple(dims), tuple(maps))


def _split_bound(rng: random.Random, dim_max: int) -> tuple[int, int]:
    a = rng.randint(1, max(1, dim_max))
    return a, max(1, dim_max // a)


def _gauge(rng: random.Random, dc: DoubleComplex) -> DoubleComplex:
    return change_basis(dc, {(i, j): _rand_invertible(rng, dc.field, dc.dims[i][j]) for i, j in dc.positions()})


def _tensor(rng, f, R, C, dim_max, exact_rows=False) -> DoubleComplex:
    a, b = _split_bound(rng, dim_max)
    c1 = random_chain_complex(rng, f, R, a)
    c2 = random_chain_complex(rng, f, C, b, exact=exact_rows)
    return tensor_complex(c1, c2)


def generate(cfg: GenConfig) -> DoubleComplex:
    """Deterministic random double complex; valid by construction."""
    if cfg.mode not in _MODES:
        raise ValueError(f"unknown mode {cfg.mode!r}; expected one of {_MODES}")
    if cfg.rows < 1 or cfg.cols < 1 or cfg.dim_max < 0:
        raise ValueError("grid bounds must be positive and dim_max non-negative")
    rng = random.Random(f"{cfg.mode}:{cfg.field}:{cfg.rows}x{cfg.cols}:{cfg.dim_max}:{cfg.seed}")
    f, R, C = cfg.field, cfg.rows, cfg.cols
    if cfg.mode == "zero" or cfg.dim_max == 0:
        return DoubleComplex.zero(f, [[rng.randint(0, cfg.dim_max) for _ in range(C)] for _ in range(R)])
    if cfg.mode == "tensor":
        return _gauge(rng, _tensor(rng, f, R, C, cfg.dim_max))
    if cfg.mode == "exact_rows":
        return _gauge(rng, _tensor(rng, f, R, C, cfg.dim_max, exact_rows=True))
    m1 = rng.randint(1, max(1, cfg.dim_max - 1))
    m2 = max(1, cfg.dim_max - m1)
    x = _tensor(rng, f, R, C, m1)
    y = _tensor(rng, f, R, C, m2)
    dc = direct_sum(x, y)
    # keep within the bound even when a summand hit its own cap
    if max(max(r) for r in dc.dims) > cfg.dim_max:
        dc = x
    return _gauge(rng, dc)


# serialization

def _field_doc(f: FieldSpec):
    return "Q" if f.p is None else {"Fp": f.p}


def _enc(f: FieldSpec, x):
    return f.format_scalar(x) if f.p is None else x


def to_document(dc: DoubleComplex) -> dict:
    f = dc.field
    hm, vm = {}, {}
    for i in range(dc.rows):
        for j in range(dc.cols - 1):
            m = dc.hmaps[i][j]
            if m.rows and m.cols:
                hm[f"{i},{j}"] = [[_enc(f, x) for x in r] for r in m.entries]
    for i in range(dc.rows - 1):
        for j in range(dc.cols):
            m = dc.vmaps[i][j]
            if m.rows and m.cols:
                vm[f"{i},{j}"] = [[_enc(f, x) for x in r] for r in m.entries]
    return {"field": _field_doc(f), "rows": dc.rows, "cols": dc.cols,
            "dims": [list(r) for r in dc.dims], "hmaps": hm, "vmaps": vm}


def dumps(dc: DoubleComplex) -> str:
    return json.dumps(to_document(dc), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def save(dc: DoubleComplex, path) -> None:
    Path(path).write_text(dumps(dc), encoding="utf-8", newline="\n")


def _parse_field(doc) -> FieldSpec:
    raw = doc.get("field")
    try:
        if raw == "Q":
            return FieldSpec(None)
        if isinstance(raw, dict) and set(raw) == {"Fp"} and isinstance(raw["Fp"], int):
            return FieldSpec(raw["Fp"])
    except ValueError as exc:
        raise SchemaError(f"field: {exc}") from exc
    raise SchemaError(f'field must be "Q" or {{"Fp": <prime>}}, got {raw!r}')


def _parse_scalar(f: FieldSpec, x, where: str):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"{where}: scalar must be an integer or a string, got {x!r}")
    try:
        return f(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _parse_maps(f, doc, key, dims, R, C, target) -> dict:
    raw = doc.get(key, {})
    if not isinstance(raw, dict):
        raise SchemaError(f"{key} must be an object")
    out = {}
    for k, rows in raw.items():
        try:
            i, j = (int(t) for t in k.split(","))
        except ValueError:
            raise SchemaError(f'{key}: bad key {k!r}, expected "i,j"') from None
        if not (0 <= i < R and 0 <= j < C):
            raise SchemaError(f"{key}[{k}] outside the grid")
        ti, tj = target(i, j)
        if not (0 <= ti < R and 0 <= tj < C):
            raise SchemaError(f"{key}[{k}] points outside the grid")
        m, n = dims[ti][tj], dims[i][j]
        if not isinstance(rows, list) or len(rows) != m or any(not isinstance(r, list) or len(r) != n for r in rows):
            raise SchemaError(f"{key}[{k}] must be a {m}x{n} matrix")
        out[(i, j)] = Mat(f, m, n, tuple(tuple(_parse_scalar(f, x, f"{key}[{k}]") for x in r) for r in rows))
    return out


def from_document(doc) -> DoubleComplex:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    unknown = set(doc) - {"field", "rows", "cols", "dims", "hmaps", "vmaps"}
    if unknown:
        raise SchemaError(f"unknown keys {sorted(unknown)}")
    f = _parse_field(doc)
    R, C = doc.get("rows"), doc.get("cols")
    if not isinstance(R, int) or not isinstance(C, int) or R < 1 or C < 1:
        raise SchemaError("rows and cols must be positive integers")
    dims = doc.get("dims")
    if (not isinstance(dims, list) or len(dims) != R
            or any(not isinstance(r, list) or len(r) != C for r in dims)
            or any(not isinstance(d, int) or isinstance(d, bool) or d < 0 for r in dims for d in r)):
        raise SchemaError(f"dims must be a {R}x{C} grid of non-negative integers")
    hm = _parse_maps(f, doc, "hmaps", dims, R, C, lambda i, j: (i, j + 1))
    vm = _parse_maps(f, doc, "vmaps", dims, R, C, lambda i, j: (i + 1, j))
    for i in range(R):
        for j in range(C):
            if j + 1 < C and dims[i][j] and dims[i][j + 1] and (i, j) not in hm:
                raise SchemaError(f'hmaps["{i},{j}"] missing')
            if i + 1 < R and dims[i][j] and dims[i + 1][j] and (i, j) not in vm:
                raise SchemaError(f'vmaps["{i},{j}"] missing')
    return DoubleComplex.from_maps(f, dims, hm, vm)


def loads(text: str, check: bool = True) -> DoubleComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    dc = from_document(doc)
    if check:
        rep = validate(dc)
        if not rep.ok:
            raise ValidationFailure(rep)
    return dc


def load(path, check: bool = True) -> DoubleComplex:
    return loads(Path(path).read_text(encoding="utf-8"), check=check)
