"""L-homologies of the objects of a double complex.

Around an object A the kernels of e, f, q generate one lattice and the images
of c, d, p another; every L-homology is a subquotient U/V with U from the
first, V from the second and V <= U. There are eighteen of them.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .dcomplex import DoubleComplex, GridIndex, ObjectContext, context
from .exactlinalg import Mat, is_invertible, left_inverse
from .sublattice import (
    Subspace, direct_image, image_of, inverse_image, join, kernel_of, leq, meet,
)


@dataclass(frozen=True)
class KernelLattice:
    ker_e: Subspace
    ker_f: Subspace
    ker_e_join_ker_f: Subspace
    ker_e_meet_ker_f: Subspace
    ker_q: Subspace


@dataclass(frozen=True)
class ImageLattice:
    im_c: Subspace
    im_d: Subspace
    im_c_join_im_d: Subspace
    im_c_meet_im_d: Subspace
    im_p: Subspace


class LKind(Enum):
    """The eighteen kinds, in table reading order (left column, then right).

    Value: (display name, ascii name, numerator, denominator, (M_c, M_d)).
    """

    A_h = ("A_h", "Ah", "ker_e", "im_d", ("d", "e"))
    vee_A_h = ("∨A_h", "vAh", "ker_e_join_ker_f", "im_d", ("d", "ef"))
    d_A_h = ("ᵈA_h", "dAh", "ker_q", "im_d", ("d", "q"))
    A_v = ("A_v", "Av", "ker_f", "im_c", ("c", "f"))
    vee_A_v = ("∨A_v", "vAv", "ker_e_join_ker_f", "im_c", ("c", "ef"))
    d_A_v = ("ᵈA_v", "dAv", "ker_q", "im_c", ("c", "q"))
    star_A = ("⋆A", "starA", "ker_e_meet_ker_f", "im_p", ("p", "ef"))
    h_A_d = ("ʰA_d", "hAd", "ker_e", "im_p", ("p", "e"))
    v_A_d = ("ᵛA_d", "VAd", "ker_f", "im_p", ("p", "f"))
    vee_A_d = ("∨A_d", "vAd", "ker_e_join_ker_f", "im_p", ("p", "ef"))
    A_d = ("A_d", "Ad", "ker_q", "im_p", ("p", "q"))
    vee_A_star = ("∨A_⋆", "vAstar", "ker_e_join_ker_f", "im_c_join_im_d", ("cd", "ef"))
    A_star = ("A_⋆", "Astar", "ker_q", "im_c_join_im_d", ("cd", "q"))
    star_A_wedge = ("⋆A_∧", "starAw", "ker_e_meet_ker_f", "im_c_meet_im_d", ("cd", "ef"))
    h_A_wedge = ("ʰA_∧", "hAw", "ker_e", "im_c_meet_im_d", ("cd", "e"))
    v_A_wedge = ("ᵛA_∧", "VAw", "ker_f", "im_c_meet_im_d", ("cd", "f"))
    d_A_wedge = ("ᵈA_∧", "dAw", "ker_q", "im_c_meet_im_d", ("cd", "q"))
    vee_A_wedge = ("∨A_∧", "vAw", "ker_e_join_ker_f", "im_c_meet_im_d", ("cd", "ef"))

    @property
    def label(self) -> str:
        return self.value[0]

    @property
    def ascii(self) -> str:
        return self.value[1]

    @property
    def numerator(self) -> str:
        return self.value[2]

    @property
    def denominator(self) -> str:
        return self.value[3]

    @property
    def lcomplex(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Incoming and outgoing morphisms of the L-complex, e.g. (('c', 'd'), ('q',))."""
        mc, md = self.value[4]
        return tuple(mc), tuple(md)

    @classmethod
    def parse(cls, name: str) -> "LKind":
        for k in cls:
            if name in (k.name, k.ascii, k.label):
                return k
        raise ValueError(f"unknown L-homology kind {name!r}")


KINDS = tuple(LKind)


@lru_cache(maxsize=4096)
def lattices(ctx: ObjectContext) -> tuple[KernelLattice, ImageLattice]:
    ke, kf, kq = kernel_of(ctx.e), kernel_of(ctx.f), kernel_of(ctx.q)
    ic, id_, ip = image_of(ctx.c), image_of(ctx.d), image_of(ctx.p)
    K = KernelLattice(ke, kf, join(ke, kf), meet(ke, kf), kq)
    I = ImageLattice(ic, id_, join(ic, id_), meet(ic, id_), ip)
    # inclusions that hold in any double complex
    assert leq(K.ker_e_join_ker_f, kq), f"Ker e v Ker f not in Ker q at {ctx.at}"
    assert leq(ip, I.im_c_meet_im_d), f"Im p not in Im c ^ Im d at {ctx.at}"
    assert leq(id_, ke) and leq(ic, kf), f"not a complex at {ctx.at}"
    return K, I


def lattice_element(ctx: ObjectContext, name: str) -> Subspace:
    K, I = lattices(ctx)
    return getattr(K if name.startswith("ker") else I, name)


@dataclass(frozen=True)
class Subquotient:
    """U/V inside one ambient space, with a fixed basis of U/V.

    ``reps`` are rows of U's canonical basis that are independent modulo V.
    """

    U: Subspace
    V: Subspace
    reps: tuple

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.U, self.V, self.reps))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def field(self):
        return self.U.field

    @property
    def ambient_dim(self) -> int:
        return self.U.ambient_dim

    @property
    def dim(self) -> int:
        return self.U.dim - self.V.dim

    @property
    def trivial(self) -> bool:
        return self.dim == 0

    def same_value(self, other: "Subquotient") -> bool:
        return self.U == other.U and self.V == other.V

    def coords(self, x) -> tuple:
        """Coordinates of the class of ``x`` (an element of U) in the basis ``reps``."""
        L = _coordinate_map(self)
        y = L.apply(x)
        return y[: len(self.reps)]


def subquotient(U: Subspace, V: Subspace, reverse: bool = False) -> Subquotient:
    """Subquotient with representatives chosen greedily along U's canonical
    basis (back to front when ``reverse``)."""
    if not leq(V, U):
        raise ValueError("denominator is not contained in numerator")
    if V == U:
        return Subquotient(U, V, ())
    if V.is_bottom:
        return Subquotient(U, V, U.rows[::-1] if reverse else U.rows)
    f = U.field
    need = U.dim - V.dim
    # echelon rows (pivot, vector with 1 at pivot), grown one vector at a time
    ech = [(next(i for i, x in enumerate(r) if x != 0), r) for r in V.rows]
    reps = []
    for row in (reversed(U.rows) if reverse else U.rows):
        if len(reps) == need:
            break
        v = list(row)
        for pc, e in ech:
            c = v[pc]
            if c != 0:
                v = [f.norm(a - c * b) for a, b in zip(v, e)]
        pc = next((i for i, x in enumerate(v) if x != 0), None)
        if pc is not None:
            inv = f.inv(v[pc])
            ech.append((pc, tuple(f.norm(x * inv) for x in v)))
            reps.append(row)
    return Subquotient(U, V, tuple(reps))


@lru_cache(maxsize=1 << 14)
def _coordinate_map(sq: Subquotient) -> Mat:
    B = Mat.from_columns(sq.field, sq.reps + sq.V.rows, sq.ambient_dim)
    return left_inverse(B)


@lru_cache(maxsize=1 << 14)
def _quotient_projection(sq: Subquotient) -> Mat:
    """First ``dim`` rows of the coordinate map: U -> U/V in the reps basis."""
    L = _coordinate_map(sq)
    return Mat(L.field, sq.dim, L.cols, L.entries[: sq.dim])


def l_homology(ctx: ObjectContext, kind: LKind) -> Subquotient:
    return _l_homology(ctx, kind)


@lru_cache(maxsize=1 << 14)
def _l_homology(ctx: ObjectContext, kind: LKind) -> Subquotient:
    return subquotient(lattice_element(ctx, kind.numerator), lattice_element(ctx, kind.denominator))


def all_l_homologies(ctx: ObjectContext) -> dict[LKind, Subquotient]:
    return {k: _l_homology(ctx, k) for k in KINDS}


@dataclass(frozen=True)
class CanonMorphism:
    """Map U/P -> V/Q induced by ``underlying``; ``matrix`` is in the reps bases."""

    src: Subquotient
    tgt: Subquotient
    underlying: Mat
    matrix: Mat

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.src, self.tgt, self.underlying, self.matrix))
            object.__setattr__(self, "_hash", h)
        return h

    @property
    def is_isomorphism(self) -> bool:
        return is_invertible(self.matrix)


def preconditions(src: Subquotient, tgt: Subquotient, underlying: Mat) -> tuple[bool, bool]:
    """(u(P) <= Q, U <= u^-1(V)) for u: A -> B, src = U/P, tgt = V/Q."""
    if underlying.cols != src.ambient_dim or underlying.rows != tgt.ambient_dim:
        raise ValueError(f"map of shape {underlying.shape} does not go from dimension "
                         f"{src.ambient_dim} to {tgt.ambient_dim}")
    return (leq(direct_image(underlying, src.V), tgt.V),
            leq(src.U, inverse_image(underlying, tgt.U)))


def induced_morphism(src: Subquotient, tgt: Subquotient, underlying: Mat) -> CanonMorphism | None:
    """The canonical morphism, or None when a precondition fails."""
    a, b = preconditions(src, tgt, underlying)
    if not (a and b):
        return None
    return _induced(src, tgt, underlying)


@lru_cache(maxsize=1 << 16)
def _induced(src: Subquotient, tgt: Subquotient, underlying: Mat) -> CanonMorphism:
    R = Mat.from_columns(src.field, src.reps, src.ambient_dim)
    matrix = _quotient_projection(tgt) @ (underlying @ R)
    return CanonMorphism(src, tgt, underlying, matrix)


def identity_morphism(sq: Subquotient) -> CanonMorphism:
    return CanonMorphism(sq, sq, Mat.identity(sq.field, sq.ambient_dim), Mat.identity(sq.field, sq.dim))


def compose(m1: CanonMorphism, m2: CanonMorphism) -> CanonMorphism:
    """``m2`` after ``m1``."""
    if m1.tgt != m2.src:
        raise ValueError("morphisms are not composable: target and source subquotients differ")
    return _compose(m1, m2)


@lru_cache(maxsize=1 << 16)
def _compose(m1: CanonMorphism, m2: CanonMorphism) -> CanonMorphism:
    return CanonMorphism(m1.src, m2.tgt, m2.underlying @ m1.underlying, m2.matrix @ m1.matrix)


def homology_table(dc: DoubleComplex) -> dict[GridIndex, dict[LKind, Subquotient]]:
    return {at: all_l_homologies(context(dc, at)) for at in dc.positions()}


def report_rows(dc: DoubleComplex, at: GridIndex | None = None, kinds=None) -> list[dict]:
    """One row per (position, kind) in grid order, then table order."""
    positions = [at] if at is not None else list(dc.positions())
    kinds = KINDS if kinds is None else kinds
    out = []
    for pos in positions:
        ctx = context(dc, pos)
        for k in kinds:
            sq = l_homology(ctx, k)
            out.append({"position": list(pos), "kind": k.ascii, "label": k.label,
                        "dim_U": sq.U.dim, "dim_V": sq.V.dim, "dim": sq.dim, "trivial": sq.trivial})
    return out


def diagonal_complex(dc: DoubleComplex) -> DoubleComplex:
    """The double complex of the diagonal homologies Ker q / Im p with induced maps."""
    diag = {at: l_homology(context(dc, at), LKind.A_d) for at in dc.positions()}
    dims = [[diag[(i, j)].dim for j in range(dc.cols)] for i in range(dc.rows)]
    hm, vm = {}, {}
    for i, j in dc.positions():
        if j + 1 < dc.cols:
            m = induced_morphism(diag[(i, j)], diag[(i, j + 1)], dc.hmaps[i][j])
            assert m is not None, f"no induced horizontal map at {(i, j)}"
            hm[(i, j)] = m.matrix
        if i + 1 < dc.rows:
            m = induced_morphism(diag[(i, j)], diag[(i + 1, j)], dc.vmaps[i][j])
            assert m is not None, f"no induced vertical map at {(i, j)}"
            vm[(i, j)] = m.matrix
    return DoubleComplex.from_maps(dc.field, dims, hm, vm)
