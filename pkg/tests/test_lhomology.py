from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import F2, F3, FIELDS, QQ
from lhomdc.dcomplex import DoubleComplex, GenConfig, context, direct_sum, generate, validate
from lhomdc.exactlinalg import Mat
from lhomdc.lhomology import (
    KINDS, LKind, all_l_homologies, compose, diagonal_complex, identity_morphism, induced_morphism,
    l_homology, lattices, report_rows, subquotient,
)
from lhomdc.sublattice import bottom, leq, top
import oracles

K = LKind


def test_eighteen_kinds_in_table_order():
    assert len(KINDS) == 18 and len({k.ascii for k in KINDS}) == 18
    groups = Counter(k.denominator for k in KINDS)
    order = ["im_d", "im_c", "im_p", "im_c_join_im_d", "im_c_meet_im_d"]
    assert [groups[d] for d in order] == [3, 3, 5, 2, 5]
    # table order keeps each denominator contiguous
    seen = [k.denominator for k in KINDS]
    assert [d for n, d in enumerate(seen) if n == 0 or seen[n - 1] != d] == order


def test_kind_metadata_and_parsing():
    assert K.A_d.numerator == "ker_q" and K.A_d.denominator == "im_p"
    assert K.A_star.lcomplex == (("c", "d"), ("q",))
    for k in KINDS:
        assert K.parse(k.ascii) is k and K.parse(k.label) is k
    with pytest.raises(ValueError):
        K.parse("Ax")


def test_zero_context():
    dc = DoubleComplex.zero(QQ, [[2, 3], [1, 4]])
    for at in dc.positions():
        ctx = context(dc, at)
        n = ctx.dimA
        Kl, Il = lattices(ctx)
        assert Kl.ker_e == Kl.ker_f == Kl.ker_q == top(QQ, n)
        assert Il.im_c == Il.im_d == Il.im_p == bottom(QQ, n)
        assert all(h.dim == n for h in all_l_homologies(ctx).values())


def test_invertible_outgoing_map():
    dc = DoubleComplex.from_maps(QQ, [[2, 2]], {(0, 0): Mat.from_rows(QQ, [[1, 2], [3, 4]])}, {})
    Kl, _ = lattices(context(dc, (0, 0)))
    assert Kl.ker_e == bottom(QQ, 2) and Kl.ker_e_meet_ker_f == bottom(QQ, 2)


def _oracle_lattice(ctx):
    p = 2
    n = ctx.dimA
    ker = {name: oracles.kernel_set(p, m.tolist(), n) for name, m in (("e", ctx.e), ("f", ctx.f), ("q", ctx.q))}
    im = {name: oracles.image_set(p, m.tolist(), m.cols) if m.rows else frozenset({()})
          for name, m in (("c", ctx.c), ("d", ctx.d), ("p", ctx.p))}
    return {
        "ker_e": ker["e"], "ker_f": ker["f"], "ker_q": ker["q"],
        "ker_e_join_ker_f": oracles.sum_set(p, ker["e"], ker["f"]), "ker_e_meet_ker_f": ker["e"] & ker["f"],
        "im_c": im["c"], "im_d": im["d"], "im_p": im["p"],
        "im_c_join_im_d": oracles.sum_set(p, im["c"], im["d"]), "im_c_meet_im_d": im["c"] & im["d"],
    }


@pytest.mark.parametrize("seed", range(6))
def test_lattices_and_dims_match_enumeration(seed):
    dc = generate(GenConfig("tensor", 3, 3, 4, F2, seed))
    for at in dc.positions():
        ctx = context(dc, at)
        expect = _oracle_lattice(ctx)
        Kl, Il = lattices(ctx)
        for name, want in expect.items():
            got = getattr(Kl if name.startswith("ker") else Il, name)
            assert oracles.span_set(2, ctx.dimA, got.rows) == want, name
        for k, h in all_l_homologies(ctx).items():
            assert h.dim == oracles.log_size(2, expect[k.numerator]) - oracles.log_size(2, expect[k.denominator])


@given(st.sampled_from(["tensor", "direct_sum", "exact_rows"]), st.sampled_from(FIELDS), st.integers(0, 300))
def test_diagram_inclusions(mode, f, seed):
    dc = generate(GenConfig(mode, 3, 3, 5, f, seed))
    for at in dc.positions():
        Kl, Il = lattices(context(dc, at))
        assert leq(Il.im_p, Il.im_c_meet_im_d)
        assert leq(Il.im_c_join_im_d, Kl.ker_e_join_ker_f)
        assert leq(Kl.ker_e_join_ker_f, Kl.ker_q)
        for h in all_l_homologies(context(dc, at)).values():
            assert leq(h.V, h.U) and h.dim == h.U.dim - h.V.dim
            assert h.trivial == (h.U == h.V)


def test_exact_rows_kill_horizontal_homology():
    dc = generate(GenConfig("exact_rows", 4, 4, 6, F3, 8))
    assert all(l_homology(context(dc, at), K.A_h).dim == 0 for at in dc.positions())


def test_report_rows_shape():
    dc = generate(GenConfig("tensor", 2, 3, 4, F2, 0))
    rows = report_rows(dc)
    assert len(rows) == 18 * 6
    assert [r["kind"] for r in rows[:18]] == [k.ascii for k in KINDS]
    assert len(report_rows(dc, (1, 2), [K.A_h])) == 1


def test_induced_identity_and_unrestricted():
    dc = generate(GenConfig("tensor", 3, 3, 4, QQ, 3))
    ctx = context(dc, (1, 1))
    h = l_homology(ctx, K.A_star)
    m = induced_morphism(h, h, Mat.identity(QQ, ctx.dimA))
    assert m.matrix == Mat.identity(QQ, h.dim)
    # numerator with zero denominator into the whole target: the restricted map
    src = subquotient(h.U, bottom(QQ, ctx.dimA))
    n = ctx.e.rows
    tgt = subquotient(top(QQ, n), bottom(QQ, n))
    m = induced_morphism(src, tgt, ctx.e)
    assert m.matrix == ctx.e @ Mat.from_columns(QQ, src.reps, ctx.dimA)


def test_failed_precondition_returns_none():
    dc = DoubleComplex.from_maps(QQ, [[1, 1]], {(0, 0): Mat.identity(QQ, 1)}, {})
    a, b = l_homology(context(dc, (0, 0)), K.A_star), l_homology(context(dc, (0, 1)), K.A_star)
    # Ker q at the source is everything but the target numerator Ker q / Im d... A_star has U = top, V = im
    assert induced_morphism(a, b, dc.h(0, 0)) is not None
    star_b = l_homology(context(dc, (0, 1)), K.star_A)
    assert induced_morphism(b, star_b, Mat.identity(QQ, 1)) is None


@pytest.mark.parametrize("mode", ["tensor", "exact_rows", "direct_sum"])
def test_astar_to_star_b_along_e_always_exists(mode):
    for seed in range(5):
        dc = generate(GenConfig(mode, 3, 4, 5, QQ, seed))
        for i, j in dc.positions():
            if j + 1 < dc.cols:
                a = l_homology(context(dc, (i, j)), K.A_star)
                b = l_homology(context(dc, (i, j + 1)), K.star_A)
                assert induced_morphism(a, b, dc.h(i, j)) is not None


def test_compose_identity_and_chain():
    dc = generate(GenConfig("tensor", 3, 3, 5, F3, 11))
    for i, j in dc.positions():
        if j + 1 >= dc.cols:
            continue
        a = l_homology(context(dc, (i, j)), K.A_star)
        sb = l_homology(context(dc, (i, j + 1)), K.star_A)
        bh = l_homology(context(dc, (i, j + 1)), K.A_h)
        m1 = induced_morphism(a, sb, dc.h(i, j))
        assert compose(identity_morphism(a), m1).matrix == m1.matrix
        m2 = induced_morphism(sb, bh, Mat.identity(F3, sb.ambient_dim))
        direct = induced_morphism(a, bh, dc.h(i, j))
        if m2 is not None and direct is not None:
            assert compose(m1, m2).matrix == direct.matrix
    z = DoubleComplex.zero(F3, [[1, 2]])
    a = identity_morphism(l_homology(context(z, (0, 0)), K.A_star))
    b = identity_morphism(l_homology(context(z, (0, 1)), K.A_star))
    with pytest.raises(ValueError):
        compose(a, b)


@given(st.sampled_from(FIELDS), st.integers(0, 200), st.data())
def test_commuting_squares_of_induced_maps(f, seed, data):
    dc = generate(GenConfig("tensor", 2, 2, 4, f, seed))
    kinds = [data.draw(st.sampled_from(KINDS)) for _ in range(4)]
    X, Y, Z, W = (l_homology(context(dc, at), k) for at, k in zip([(0, 0), (0, 1), (1, 0), (1, 1)], kinds))
    top_path = (induced_morphism(X, Y, dc.h(0, 0)), induced_morphism(Y, W, dc.v(0, 1)))
    left_path = (induced_morphism(X, Z, dc.v(0, 0)), induced_morphism(Z, W, dc.h(1, 0)))
    if None in top_path or None in left_path:
        return
    assert compose(*top_path).matrix == compose(*left_path).matrix


def _change_of_basis(a, b):
    """Coordinates of a's representatives in b's basis (same U/V)."""
    cols = [b.coords(x) for x in a.reps]
    return Mat.from_columns(a.field, cols, b.dim)


@given(st.sampled_from(FIELDS), st.integers(0, 300), st.data())
def test_induced_matrix_independent_of_representatives(f, seed, data):
    dc = generate(GenConfig(data.draw(st.sampled_from(["tensor", "direct_sum"])), 2, 3, 5, f, seed))
    i, j = data.draw(st.sampled_from([(0, 0), (0, 1), (1, 0), (1, 1)]))
    tgt_at = data.draw(st.sampled_from([t for t in [(i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1)]
                                        if dc.inside(*t)]))
    u = {(0, 0): Mat.identity(f, dc.dims[i][j]), (0, 1): dc.h(i, j), (1, 0): dc.v(i, j),
         (1, 1): dc.diag(i, j)}[(tgt_at[0] - i, tgt_at[1] - j)]
    s = l_homology(context(dc, (i, j)), data.draw(st.sampled_from(KINDS)))
    t = l_homology(context(dc, tgt_at), data.draw(st.sampled_from(KINDS)))
    m = induced_morphism(s, t, u)
    if m is None:
        return
    s_rev, t_rev = subquotient(s.U, s.V, reverse=True), subquotient(t.U, t.V, reverse=True)
    m_rev = induced_morphism(s_rev, t_rev, u)
    assert m_rev.matrix @ _change_of_basis(s, s_rev) == _change_of_basis(t, t_rev) @ m.matrix


def test_diagonal_complex_of_zero_complex():
    dc = DoubleComplex.zero(F2, [[1, 2], [3, 0]])
    d = diagonal_complex(dc)
    assert d.dims == dc.dims and all(m.is_zero() for r in d.hmaps for m in r)


@given(st.sampled_from(["tensor", "exact_rows", "direct_sum", "zero"]), st.sampled_from(FIELDS),
       st.integers(1, 4), st.integers(1, 4), st.integers(0, 500))
def test_diagonal_complex_is_valid(mode, f, r, c, seed):
    dc = generate(GenConfig(mode, r, c, 5, f, seed))
    d = diagonal_complex(dc)
    assert validate(d).ok
    assert d.dims == tuple(tuple(l_homology(context(dc, (i, j)), K.A_d).dim for j in range(c)) for i in range(r))


@given(st.sampled_from(FIELDS), st.integers(0, 300), st.integers(0, 300))
def test_diagonal_complex_commutes_with_direct_sums(f, s1, s2):
    x = generate(GenConfig("tensor", 3, 3, 3, f, s1))
    y = generate(GenConfig("exact_rows", 3, 3, 3, f, s2))
    assert diagonal_complex(direct_sum(x, y)) == direct_sum(diagonal_complex(x), diagonal_complex(y))
