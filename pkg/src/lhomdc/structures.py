"""Order structures on the L-homologies of an object, exactness of sequences
of subquotients, and the named exact sequences of a double complex.

``hook``: X/Y -> U/V when X <= U and V <= Y (join (X v U)/(Y ^ V)).
``prec``: a canonical morphism X/Y -> U/V exists along a structural map.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .dcomplex import DoubleComplex, GridIndex, context
from .exactlinalg import Mat
from .lhomology import (
    KINDS, CanonMorphism, LKind, Subquotient, all_l_homologies, induced_morphism, l_homology,
    lattices, preconditions, subquotient,
)
from .reports import CheckLog
from .sublattice import AmbientMismatch, direct_image, inverse_image, join, leq, meet

K = LKind


@dataclass(frozen=True, order=True)
class HomologyId:
    at: GridIndex
    kind: LKind

    def __str__(self):
        return f"{self.kind.ascii}@{self.at[0]},{self.at[1]}"


def homology(dc: DoubleComplex, hid: HomologyId) -> Subquotient:
    return l_homology(context(dc, hid.at), hid.kind)


def _same_ambient(h: Subquotient, g: Subquotient):
    if h.field != g.field or h.ambient_dim != g.ambient_dim:
        raise AmbientMismatch("subquotients of different objects")


def hook_leq(h: Subquotient, g: Subquotient) -> bool:
    _same_ambient(h, g)
    return leq(h.U, g.U) and leq(g.V, h.V)


def hook_join(h: Subquotient, g: Subquotient) -> Subquotient:
    _same_ambient(h, g)
    return subquotient(join(h.U, g.U), meet(h.V, g.V))


def prec_leq(h: Subquotient, g: Subquotient) -> bool:
    """Within one object: a canonical morphism along the identity exists."""
    _same_ambient(h, g)
    return leq(h.V, g.V) and leq(h.U, g.U)


# triviality propagation: (label, premises, conclusions)
TRIVIALITY_IMPLICATIONS = (
    ("a", (K.h_A_wedge, K.h_A_d, K.vee_A_d, K.vee_A_h, K.d_A_h, K.d_A_wedge, K.A_d), (K.A_h,)),
    ("b", (K.v_A_wedge, K.v_A_d, K.vee_A_d, K.vee_A_v, K.d_A_v, K.d_A_wedge, K.A_d), (K.A_v,)),
    ("c", (K.A_d,), KINDS),
)


@dataclass
class PosetReport:
    relation: str
    at: GridIndex
    values: dict  # LKind -> Subquotient
    edges: list  # (LKind, LKind) with a <= b
    top: LKind | None
    bottom: LKind | None
    classes: list  # value-equivalence classes of kinds, table order
    hasse: list  # (class index, class index) cover relations
    checks: list = field(default_factory=list)  # CheckLog
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        return {
            "relation": self.relation, "position": list(self.at),
            "edges": [[a.ascii, b.ascii] for a, b in self.edges],
            "top": self.top.ascii if self.top else None,
            "bottom": self.bottom.ascii if self.bottom else None,
            "classes": [[k.ascii for k in c] for c in self.classes],
            "hasse": [[a, b] for a, b in self.hasse],
            "checks": [c.to_json() for c in self.checks],
            "notes": self.notes, "passed": self.ok,
        }

    def to_dot(self) -> str:
        i, j = self.at
        lines = [f'digraph "{self.relation}_{i}_{j}" {{', "  rankdir=BT;", "  node [shape=box];"]
        for n, cls in enumerate(self.classes):
            label = ", ".join(k.ascii for k in cls)
            lines.append(f'  n{n} [label="{label}\\ndim {self.values[cls[0]].dim}"];')
        for a, b in self.hasse:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _order_report(relation: str, at, values: dict, rel) -> PosetReport:
    kinds = list(values)
    R = {(a, b): rel(values[a], values[b]) for a in kinds for b in kinds}
    edges = [(a, b) for a in kinds for b in kinds if R[(a, b)]]
    classes = []
    for k in kinds:
        for cls in classes:
            if values[cls[0]].same_value(values[k]):
                cls.append(k)
                break
        else:
            classes.append([k])
    axioms = CheckLog("poset axioms")
    for a in kinds:
        axioms.record(R[(a, a)], law="reflexive", kind=a.ascii)
    for a, b in itertools.combinations(kinds, 2):
        if R[(a, b)] and R[(b, a)]:
            axioms.record(values[a].same_value(values[b]), law="antisymmetric", pair=[a.ascii, b.ascii])
    for a, b, c in itertools.product(kinds, repeat=3):
        if R[(a, b)] and R[(b, c)]:
            axioms.record(R[(a, c)], law="transitive", triple=[a.ascii, b.ascii, c.ascii])
    tops = [t for t in kinds if all(R[(a, t)] for a in kinds)]
    bots = [b for b in kinds if all(R[(b, a)] for a in kinds)]
    reps = [c[0] for c in classes]
    hasse = []
    for x, y in itertools.permutations(range(len(reps)), 2):
        a, b = reps[x], reps[y]
        if R[(a, b)] and not any(R[(a, reps[z])] and R[(reps[z], b)]
                                 for z in range(len(reps)) if z not in (x, y)):
            hasse.append((x, y))
    rep = PosetReport(relation, at, values, edges, None, None, [tuple(c) for c in classes], sorted(hasse))
    rep.checks.append(axioms)
    rep.notes["tops"] = [t.ascii for t in tops]
    rep.notes["bottoms"] = [b.ascii for b in bots]
    rep.notes["value_coincidences"] = len(kinds) - len(classes)
    rep._R, rep._tops, rep._bots = R, tops, bots
    return rep


def semilattice_report(ctx) -> PosetReport:
    """The hook order on the eighteen homologies: axioms, join as least upper
    bound, closure of the join, A_d on top, and the triviality implications."""
    values = all_l_homologies(ctx)
    rep = _order_report("hook", ctx.at, values, hook_leq)
    R = rep._R
    top = CheckLog("A_d is the top element")
    top.record(K.A_d in rep._tops, tops=rep.notes["tops"])
    rep.top = K.A_d if K.A_d in rep._tops else (rep._tops[0] if rep._tops else None)
    rep.bottom = rep._bots[0] if rep._bots else None

    closure, lub = CheckLog("join closed in the eighteen"), CheckLog("join is least upper bound")
    recipe = CheckLog("join closed on recipes")
    by_recipe = {(k.numerator, k.denominator): k for k in KINDS}
    for a, b in itertools.product(KINDS, repeat=2):
        j = hook_join(values[a], values[b])
        match = next((k for k in KINDS if values[k].same_value(j)), None)
        closure.record(match is not None, pair=[a.ascii, b.ascii])
        num = _join_name(a.numerator, b.numerator)
        den = _meet_name(a.denominator, b.denominator)
        recipe.record((num, den) in by_recipe, pair=[a.ascii, b.ascii], recipe=[num, den])
        if match is None:
            continue
        ok = R[(a, match)] and R[(b, match)]
        ok = ok and all(R[(match, k)] for k in KINDS if R[(a, k)] and R[(b, k)])
        lub.record(ok, pair=[a.ascii, b.ascii], join=match.ascii)

    triv = CheckLog("triviality implications")
    fired = 0
    for tag, premises, conclusions in TRIVIALITY_IMPLICATIONS:
        for p in premises:
            if values[p].trivial:
                fired += 1
                for c in conclusions:
                    triv.record(values[c].trivial, part=tag, premise=p.ascii, conclusion=c.ascii)
    mech = CheckLog("hook below trivial is trivial")
    for a, b in itertools.product(KINDS, repeat=2):
        if R[(a, b)] and values[b].trivial:
            mech.record(values[a].trivial, pair=[a.ascii, b.ascii])
    rep.checks += [top, closure, recipe, lub, triv, mech]
    rep.notes["trivial_premises"] = fired
    return rep


_KER_ORDER = {  # numerator lattice elements as subsets of {e, f, q} generators
    "ker_e_meet_ker_f": 0, "ker_e": 1, "ker_f": 2, "ker_e_join_ker_f": 3, "ker_q": 4,
}


def _join_name(x: str, y: str) -> str:
    # chain ker_e ^ ker_f <= {ker_e, ker_f} <= ker_e v ker_f <= ker_q
    if x == y:
        return x
    if {x, y} == {"ker_e", "ker_f"}:
        return "ker_e_join_ker_f"
    return max(x, y, key=_KER_ORDER.get)


_IM_ORDER = {"im_p": 0, "im_c_meet_im_d": 1, "im_c": 2, "im_d": 2, "im_c_join_im_d": 3}


def _meet_name(x: str, y: str) -> str:
    if x == y:
        return x
    if {x, y} == {"im_c", "im_d"}:
        return "im_c_meet_im_d"
    return min(x, y, key=_IM_ORDER.get)


def poset_report(ctx) -> PosetReport:
    """The canonical-morphism order within one object: axioms, bottom star-A,
    top A-star, and both readings of the hook/prec comparison."""
    values = all_l_homologies(ctx)
    ident = Mat.identity(ctx.e.field, ctx.dimA)

    def rel(h, g):
        a, b = preconditions(h, g, ident)
        return a and b

    rep = _order_report("prec", ctx.at, values, rel)
    R = rep._R
    bounds = CheckLog("star-A bottom and A-star top")
    bounds.record(K.star_A in rep._bots, bottoms=rep.notes["bottoms"])
    bounds.record(K.A_star in rep._tops, tops=rep.notes["tops"])
    rep.bottom = K.star_A if K.star_A in rep._bots else (rep._bots[0] if rep._bots else None)
    rep.top = K.A_star if K.A_star in rep._tops else (rep._tops[0] if rep._tops else None)

    conj = CheckLog("hook and prec iff numerator below and equal denominators")
    literal_failures = []
    for a, b in itertools.product(KINDS, repeat=2):
        h, g = values[a], values[b]
        hk, pr = hook_leq(h, g), R[(a, b)]
        same_den = h.V == g.V
        conj.record((hk and pr) == (leq(h.U, g.U) and same_den), pair=[a.ascii, b.ascii])
        if (hk == pr) != same_den:
            literal_failures.append([a.ascii, b.ascii])
    rep.checks += [bounds, conj]
    rep.notes["literal_reading_failures"] = len(literal_failures)
    rep.notes["literal_reading_examples"] = literal_failures[:5]
    return rep


@dataclass(frozen=True)
class MeetWitness:
    at: GridIndex
    pair: tuple
    numerator_dim: int  # dim(Ker e ^ Ker f)
    denominator_dim: int  # dim(Im c v Im d)


def meet_witness(dc: DoubleComplex) -> MeetWitness | None:
    """First object where (Ker e ^ Ker f)/(Im c v Im d) is not a subquotient,
    so A_h and A_v have no meet."""
    for at in dc.positions():
        Kl, Il = lattices(context(dc, at))
        if not leq(Il.im_c_join_im_d, Kl.ker_e_meet_ker_f):
            return MeetWitness(at, (K.A_h, K.A_v), Kl.ker_e_meet_ker_f.dim, Il.im_c_join_im_d.dim)
    return None


def structural_map(dc: DoubleComplex, src: GridIndex, tgt: GridIndex) -> Mat:
    """Identity, horizontal step, vertical step or diagonal between grid objects."""
    (i, j), (k, l) = src, tgt
    if not (dc.inside(i, j) and dc.inside(k, l)):
        raise ValueError(f"positions {src}, {tgt} not both in the grid")
    di, dj = k - i, l - j
    if (di, dj) == (0, 0):
        return Mat.identity(dc.field, dc.dims[i][j])
    if (di, dj) == (0, 1):
        return dc.h(i, j)
    if (di, dj) == (1, 0):
        return dc.v(i, j)
    if (di, dj) == (1, 1):
        return dc.diag(i, j)
    raise ValueError(f"no structural morphism from {src} to {tgt}")


def prec(src: HomologyId, tgt: HomologyId, dc: DoubleComplex) -> CanonMorphism | None:
    u = structural_map(dc, src.at, tgt.at)
    return induced_morphism(homology(dc, src), homology(dc, tgt), u)


class PreconditionError(ValueError):
    pass


def exactness_sides(h1: Subquotient, h2: Subquotient, h3: Subquotient, u1: Mat, u2: Mat):
    """(u1(U1) v V2, u2^-1(V3) ^ U2): the image and kernel numerators at h2."""
    for n, (s, t, u) in enumerate(((h1, h2, u1), (h2, h3, u2)), 1):
        a, b = preconditions(s, t, u)
        if not (a and b):
            raise PreconditionError(f"step {n}: no canonical morphism "
                                    f"({'image of denominator' if not a else 'numerator'} condition fails)")
    lhs = join(direct_image(u1, h1.U), h2.V)
    rhs = meet(inverse_image(u2, h3.V), h2.U)
    return lhs, rhs


def exactness_check(h1: Subquotient, h2: Subquotient, h3: Subquotient, u1: Mat, u2: Mat) -> bool:
    lhs, rhs = exactness_sides(h1, h2, h3, u1, u2)
    return lhs == rhs


def exact_by_enumeration(h1: Subquotient, h2: Subquotient, h3: Subquotient, u1: Mat, u2: Mat,
                         limit: int = 1 << 12) -> bool | None:
    """Exactness at h2 by listing vectors: the set u1(U1) + V2 against the set
    of x in U2 with u2(x) in V3. None when the field is Q or a listing would
    exceed ``limit`` elements."""
    f = h2.field
    if f.p is None:
        return None
    p = f.p

    def members(gens, n):
        if p ** len(gens) > limit:
            raise OverflowError
        out = set()
        for coeffs in itertools.product(range(p), repeat=len(gens)):
            out.add(tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) % p for i in range(n)))
        return out

    n2 = h2.ambient_dim
    try:
        image = members([u1.apply(x) for x in h1.U.rows] + list(h2.V.rows), n2)
        R3 = members(h3.V.rows, h3.ambient_dim)
        kern = {x for x in members(h2.U.rows, n2) if u2.apply(x) in R3}
    except OverflowError:
        return None
    return image == kern


# the twelve sequences: objects A (reference), B = right of A, C = above A
_OFFSETS = {"A": (0, 0), "B": (0, 1), "C": (-1, 0)}

_TRIPLES = (
    (("A", K.A_h), ("A", K.A_star), ("B", K.star_A)),
    (("A", K.h_A_d), ("A", K.d_A_v), ("B", K.v_A_d)),
    (("A", K.h_A_d), ("A", K.A_star), ("B", K.vee_A_d)),
    (("C", K.A_v), ("C", K.A_star), ("A", K.star_A)),
    (("C", K.v_A_d), ("C", K.d_A_h), ("A", K.h_A_d)),
    (("C", K.v_A_d), ("C", K.A_star), ("A", K.vee_A_d)),
    (("C", K.A_star), ("A", K.A_h), ("A", K.A_star)),
    (("C", K.A_star), ("A", K.star_A), ("A", K.A_v)),
    (("C", K.A_star), ("A", K.h_A_d), ("A", K.d_A_v)),
    (("A", K.A_star), ("B", K.A_v), ("B", K.A_star)),
    (("A", K.A_star), ("B", K.star_A), ("B", K.A_h)),
    (("A", K.A_star), ("B", K.v_A_d), ("B", K.d_A_h)),
)


def sequence_name(triple) -> str:
    """e.g. ``Ah@A>Astar@A>starA@B``."""
    return ">".join(f"{k.ascii}@{tag}" for tag, k in triple)


SEQUENCES = {sequence_name(t): t for t in _TRIPLES}

SALAMANDER_SEGMENTS = (sequence_name(_TRIPLES[0]), sequence_name(_TRIPLES[10]))


def sequence_ids(seq_id: str, at: GridIndex) -> list[HomologyId] | None:
    out = []
    for tag, kind in SEQUENCES[seq_id]:
        di, dj = _OFFSETS[tag]
        out.append(HomologyId((at[0] + di, at[1] + dj), kind))
    return out


@dataclass
class SuiteReport:
    entries: list = field(default_factory=list)
    iso_entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e["exact"] for e in self.entries) and all(e["isomorphism"] for e in self.iso_entries)

    def failures(self) -> list:
        return [e for e in self.entries if not e["exact"]] + [e for e in self.iso_entries if not e["isomorphism"]]

    def to_json(self) -> dict:
        return {"sequences": self.entries, "isomorphisms": self.iso_entries, "passed": self.ok,
                "n_checked": len(self.entries), "n_iso_checked": len(self.iso_entries),
                "n_failures": len(self.failures())}


def check_sequence(dc: DoubleComplex, ids: list[HomologyId], oracle: bool = False) -> dict:
    h = [homology(dc, x) for x in ids]
    u1 = structural_map(dc, ids[0].at, ids[1].at)
    u2 = structural_map(dc, ids[1].at, ids[2].at)
    lhs, rhs = exactness_sides(h[0], h[1], h[2], u1, u2)
    out = {"exact": lhs == rhs, "lhs_dim": lhs.dim, "rhs_dim": rhs.dim}
    if oracle:
        found = exact_by_enumeration(h[0], h[1], h[2], u1, u2)
        if found is not None:
            out["oracle_exact"] = found
    return out


def salamander_isomorphisms(dc: DoubleComplex) -> list[dict]:
    """At every horizontal edge A -> B with A_h and B_h trivial: is the induced
    A_star -> star_B an isomorphism?"""
    out = []
    for i, j in dc.positions():
        if j + 1 >= dc.cols:
            continue
        a, b = context(dc, (i, j)), context(dc, (i, j + 1))
        if not (l_homology(a, K.A_h).trivial and l_homology(b, K.A_h).trivial):
            continue
        m = induced_morphism(l_homology(a, K.A_star), l_homology(b, K.star_A), dc.hmaps[i][j])
        out.append({"position": [i, j], "sequence": "top_iso",
                    "exists": m is not None, "isomorphism": bool(m is not None and m.is_isomorphism),
                    "src_dim": l_homology(a, K.A_star).dim, "tgt_dim": l_homology(b, K.star_A).dim})
    return out


def sequence_suite(dc: DoubleComplex, sequences=None, oracle: bool = False) -> SuiteReport:
    """Check each named sequence wherever all its objects lie in the grid."""
    rep = SuiteReport()
    names = list(SEQUENCES) if sequences is None else list(sequences)
    for at in dc.positions():
        for name in names:
            ids = sequence_ids(name, at)
            if not all(dc.inside(*x.at) for x in ids):
                continue
            try:
                res = check_sequence(dc, ids, oracle)
            except PreconditionError as exc:
                res = {"exact": False, "lhs_dim": None, "rhs_dim": None, "error": str(exc)}
            rep.entries.append({"position": list(at), "sequence": name, **res})
    rep.iso_entries = salamander_isomorphisms(dc)
    return rep


def salamander(dc: DoubleComplex) -> SuiteReport:
    return sequence_suite(dc, SALAMANDER_SEGMENTS)


# exploratory search over composable structural pairs

def _steps(dc: DoubleComplex, at: GridIndex):
    i, j = at
    for di, dj in ((0, 1), (1, 0), (1, 1)):
        if dc.inside(i + di, j + dj):
            yield (i + di, j + dj)


def composable_pairs(dc: DoubleComplex):
    """X -> Y -> Z along non-identity structural maps (three distinct objects)."""
    for x in dc.positions():
        for y in _steps(dc, x):
            for z in _steps(dc, y):
                yield x, y, z


def search_type_iv(dc: DoubleComplex, budget: int) -> tuple[list[dict], int]:
    """Every kind triple over X -> Y -> Z with both canonical morphisms that is
    exact in the middle. Returns (witnesses, candidates examined)."""
    witnesses, examined = [], 0
    if budget <= 0:
        return witnesses, 0
    for x, y, z in composable_pairs(dc):
        u1, u2 = structural_map(dc, x, y), structural_map(dc, y, z)
        HX = all_l_homologies(context(dc, x))
        HY = all_l_homologies(context(dc, y))
        HZ = all_l_homologies(context(dc, z))
        for b in KINDS:
            hb = HY[b]
            srcs = [a for a in KINDS if all(preconditions(HX[a], hb, u1))]
            tgts = [c for c in KINDS if all(preconditions(hb, HZ[c], u2))]
            if not srcs or not tgts:
                continue
            rhs = {c: meet(inverse_image(u2, HZ[c].V), hb.U) for c in tgts}
            for a in srcs:
                lhs = join(direct_image(u1, HX[a].U), hb.V)
                for c in tgts:
                    if examined >= budget:
                        return witnesses, examined
                    examined += 1
                    if lhs == rhs[c]:
                        witnesses.append({
                            "objects": [list(x), list(y), list(z)],
                            "kinds": [a.ascii, b.ascii, c.ascii],
                            "dims": [HX[a].dim, hb.dim, HZ[c].dim],
                            "degenerate": hb.trivial,
                        })
    return witnesses, examined


def type_one_report(dc: DoubleComplex) -> dict:
    """Counts of exact kind triples H -> H' -> H'' over a single object (identity maps)."""
    exact_nontrivial, exact_degenerate, candidates = [], 0, 0
    for at in dc.positions():
        ctx = context(dc, at)
        H = all_l_homologies(ctx)
        ident = Mat.identity(dc.field, ctx.dimA)
        for a, b, c in itertools.product(KINDS, repeat=3):
            if not (prec_leq(H[a], H[b]) and prec_leq(H[b], H[c])):
                continue
            candidates += 1
            if exactness_check(H[a], H[b], H[c], ident, ident):
                if H[b].trivial:
                    exact_degenerate += 1
                else:
                    exact_nontrivial.append({"position": list(at), "kinds": [a.ascii, b.ascii, c.ascii]})
    return {"candidates": candidates, "exact_degenerate": exact_degenerate,
            "exact_nontrivial": len(exact_nontrivial), "examples": exact_nontrivial[:10]}
