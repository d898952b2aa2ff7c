import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, F3, FIELDS, QQ
from lhomdc.dcomplex import DoubleComplex, GenConfig, generate
from lhomdc.exactlinalg import Mat
from lhomdc.fibcat import (
    build, cartesian_lift, check_cartesian, com_dot, hlg_dot, verify_adjunctions, verify_all,
    verify_faithful_amnestic, verify_fibration,
)
from lhomdc.lhomology import KINDS, LKind
from lhomdc.structures import HomologyId, prec_leq

K = LKind


def test_single_object_graph():
    g = build(DoubleComplex.zero(QQ, [[2]]))
    assert len(g.com.arrows) == 1 and len(g.hlg.nodes) == 18
    assert g.hlg.fiber((0, 0)) == [HomologyId((0, 0), k) for k in KINDS]
    # all eighteen coincide on a zero-map object, so every pair is joined
    assert len(g.hlg.arrows) == 18 * 18 and len(g.hlg.representatives((0, 0))) == 1


def test_fiber_arrows_match_prec():
    dc = generate(GenConfig("tensor", 2, 2, 4, F3, 6))
    g = build(dc)
    for at in dc.positions():
        H = {k: g.hlg.values[HomologyId(at, k)] for k in KINDS}
        want = {(a, b) for a in KINDS for b in KINDS if prec_leq(H[a], H[b])}
        got = {(s.kind, t.kind) for s, t in g.hlg.arrows if s.at == at and t.at == at}
        assert got == want


def test_functor_sends_arrows_to_structural_maps():
    g = build(generate(GenConfig("direct_sum", 2, 3, 4, F2, 2)))
    for (s, t), m in g.hlg.arrows.items():
        arr = g.functor.on_arrow(s, t)
        assert (arr.src, arr.tgt) == (g.functor.on_object(s), g.functor.on_object(t))
        assert m.underlying == arr.mat


def test_identity_arrow_lifts_to_identity():
    g = build(generate(GenConfig("tensor", 2, 2, 4, QQ, 1)))
    phi = g.com.arrow((1, 1), (1, 1))
    lift = cartesian_lift(g, phi, HomologyId((1, 1), K.A_v))
    assert lift.source == lift.target and lift.morphism.matrix == Mat.identity(QQ, lift.morphism.matrix.rows)
    assert check_cartesian(g, lift) == []
    with pytest.raises(ValueError):
        cartesian_lift(g, phi, HomologyId((0, 0), K.A_v))


def test_star_source_candidate_is_not_cartesian():
    # k -> k by the identity: e is injective so star-X = 0, while X_star = k
    # maps to the target over phi without factoring through star-X
    one = Mat.identity(F2, 1)
    g = build(DoubleComplex.from_maps(F2, [[1, 1]], {(0, 0): one}, {}))
    phi = g.com.arrow((0, 0), (0, 1))
    target = HomologyId((0, 1), K.A_star)
    good = cartesian_lift(g, phi, target)
    assert good.source == HomologyId((0, 0), K.A_star) and check_cartesian(g, good) == []
    bad = cartesian_lift(g, phi, target, K.star_A)
    assert bad.source == HomologyId((0, 0), K.star_A)
    assert any(p["reason"] == "no factorization" for p in check_cartesian(g, bad))


@settings(max_examples=12)
@given(st.sampled_from(["tensor", "exact_rows", "direct_sum", "zero"]), st.sampled_from(FIELDS),
       st.integers(1, 3), st.integers(1, 3), st.integers(0, 500))
def test_verify_all_on_generated(mode, f, r, c, seed):
    out = verify_all(generate(GenConfig(mode, r, c, 4, f, seed)))
    assert out["passed"], [x for x in out["reports"] if not x["passed"]]


def test_reports_are_individually_usable():
    g = build(generate(GenConfig("tensor", 3, 3, 4, F3, 0)))
    fa = verify_faithful_amnestic(g)
    assert fa.ok and fa.stats["hlg_nodes"] == 9 * 18
    fib = verify_fibration(g)
    assert fib.ok and fib.stats["lifts"] == 18 * len(g.com.arrows)
    assert verify_adjunctions(g).ok


def test_dot_output():
    g = build(generate(GenConfig("tensor", 2, 2, 3, F2, 0)))
    dot = com_dot(g)
    assert dot.startswith("digraph com") and dot.count("->") == 4 + 1
    full, coarse = hlg_dot(g), hlg_dot(g, include_fiber_arrows=False)
    assert full.count("cluster_") == 4 and coarse.count("->") < full.count("->")
