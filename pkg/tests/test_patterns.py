from __future__ import annotations

from fractions import Fraction

import pytest

from transfactor.errors import ParameterError
from transfactor.hypergraph import Hypergraph
from transfactor.patterns import (
    FactorComplex,
    Pattern,
    automorphism_count,
    distinct_copies,
    expand,
    f_complex,
    is_strictly_one_balanced,
    m_one,
    one_density,
    standard_patterns,
    verify_expansion_claims,
)

from oracles import naive_copy_count, naive_m_one, naive_strictly_balanced

K3 = Hypergraph.complete(2, 3)
P3 = Hypergraph.from_edges(2, 3, [(0, 1), (1, 2)])
TWO_EDGES = Hypergraph.from_edges(2, 4, [(0, 1), (2, 3)])
C4 = Hypergraph.from_edges(2, 4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def test_one_density_values():
    assert one_density(K3) == Fraction(3, 2)
    for k in (2, 3, 4):
        single = Hypergraph.from_edges(k, k, [tuple(range(k))])
        assert one_density(single) == Fraction(1, k - 1)
    star = expand(Pattern.from_graph(K3)).graph
    assert one_density(star) == Fraction(3, 5)


def test_one_density_rejects_single_vertex():
    with pytest.raises(ParameterError):
        one_density(Hypergraph(2, 1))


def test_m_one_values():
    assert m_one(K3) == Fraction(3, 2)
    # both sub-densities of the 2-edge path are 1; oracle enumerates subsets
    assert m_one(P3) == Fraction(1) == naive_m_one(P3)
    # single edge beats the whole graph's 2/3
    assert m_one(TWO_EDGES) == Fraction(1) == naive_m_one(TWO_EDGES)


def test_strict_balance_certificates():
    ok, witness = is_strictly_one_balanced(K3)
    assert ok and witness is None
    ok, witness = is_strictly_one_balanced(TWO_EDGES)
    assert not ok
    assert witness is not None and witness.edge_count == 1
    ok, _ = is_strictly_one_balanced(C4)
    assert ok


def test_balance_matches_oracle_on_corpus():
    for name, pat in standard_patterns().items():
        got, _ = is_strictly_one_balanced(pat.graph)
        assert got == naive_strictly_balanced(pat.graph), name
        assert pat.m1 == naive_m_one(pat.graph), name
        if got:
            assert pat.m1 == pat.d1, name
        assert pat.m1 >= pat.d1, name


def test_expand_shapes():
    star = expand(Pattern.from_graph(K3))
    assert star.graph.k == 3 and star.graph.n == 6 and star.graph.edge_count == 3
    single = expand(Pattern.from_graph(Hypergraph.from_edges(2, 2, [(0, 1)])))
    assert single.graph.k == 3 and single.graph.n == 3 and single.graph.edge_count == 1
    k4 = expand(Pattern.from_graph(Hypergraph.complete(2, 4)))
    assert k4.graph.k == 3 and k4.graph.n == 10 and k4.graph.edge_count == 6
    # added vertices each appear in exactly one edge
    for star_pat in (star, single, k4):
        for cv in star_pat.color_vertices:
            assert sum(1 for e in star_pat.graph.edges if cv in e) == 1


def test_expansion_claims_k3():
    rep = verify_expansion_claims(Pattern.from_graph(K3))
    assert rep.all_hold
    assert rep.expansion_strictly_balanced
    assert rep.m1_expansion == Fraction(3, 5)


def test_expansion_claims_path():
    rep = verify_expansion_claims(Pattern.from_graph(P3))
    assert rep.all_hold
    assert rep.m1_expansion == Fraction(1, 2)


def test_expansion_claims_unbalanced_base():
    rep = verify_expansion_claims(Pattern.from_graph(TWO_EDGES))
    assert rep.balance_inherited  # vacuous: base is not strictly balanced
    assert rep.m1_identity_holds
    assert rep.m1_expansion == Fraction(1, 2)


def test_expansion_claims_whole_corpus():
    for name, pat in standard_patterns().items():
        rep = verify_expansion_claims(pat)
        assert rep.all_hold, name
        # exact rational identity, cross-multiplied form
        assert rep.m1_expansion * (1 + rep.m1_base) == rep.m1_base, name


def test_automorphism_counts():
    assert automorphism_count(K3) == 6
    assert automorphism_count(P3) == 2
    assert automorphism_count(C4) == 8
    assert automorphism_count(TWO_EDGES) == 8


def test_f_complex_counts():
    k4 = Hypergraph.complete(2, 4)
    assert f_complex(k4, Pattern.from_graph(K3)).copy_count == 4
    assert f_complex(k4, Pattern.from_graph(Hypergraph.from_edges(2, 2, [(0, 1)]))).copy_count == 6
    assert f_complex(k4, Pattern.from_graph(P3)).copy_count == 12


def test_f_complex_matches_injection_oracle():
    hosts = [
        Hypergraph.complete(2, 5),
        Hypergraph.from_edges(2, 5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)]),
        Hypergraph.from_edges(2, 6, [(0, 1), (2, 3), (4, 5), (1, 2), (3, 4)]),
    ]
    pats = [Pattern.from_graph(g) for g in (K3, P3, TWO_EDGES, C4)]
    for H in hosts:
        for pat in pats:
            assert f_complex(H, pat).copy_count == naive_copy_count(pat.graph, H)


def test_f_complex_multiplicity():
    # on K4, three different 2-edge paths span each vertex triple
    k4 = Hypergraph.complete(2, 4)
    multi = f_complex(k4, Pattern.from_graph(P3)).multiset()
    assert set(multi.values()) == {3}
    assert len(multi) == 4


def test_complex_perfect_matching_count():
    # two disjoint triangles: each triple holds one K3 copy
    H = Hypergraph.from_edges(2, 6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
    cx = f_complex(H, Pattern.from_graph(K3))
    assert cx.copy_count == 2
    assert cx.perfect_matching_count() == 1
    # K4 with the single-edge pattern: complex PMs = perfect matchings of K4
    cx2 = f_complex(Hypergraph.complete(2, 4), Pattern.from_graph(Hypergraph.from_edges(2, 2, [(0, 1)])))
    assert cx2.perfect_matching_count() == 3


def test_distinct_copies_respects_allowed_and_require():
    k5 = Hypergraph.complete(2, 5)
    inside = distinct_copies(K3, k5, allowed=[0, 1, 2, 3])
    assert len(inside) == 4
    pinned = distinct_copies(K3, k5, require={0: 2})
    assert all(2 in verts for verts, _ in pinned)
    assert len(pinned) == 6  # triangles of K5 through one vertex
