import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg.errors import BudgetExceeded
from steinberg.lattice_complexes import (
    ComplexSpec,
    LatticeOracle,
    MIXED,
    SIGMA,
    STANDARD,
    TWO_ADDITIVE,
    INVALID,
    build_lattice_complex,
    classify_simplex,
    classify_vectors,
    lagrangian_summand,
    link_perp_identity,
    simplex_sigma_data,
    sigma_edges_and_minimal_mixed,
    star_decomposition,
)
from steinberg.symplectic import Line, _omega

e1, f1, e2, f2 = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)


def add(*vs):
    return tuple(map(sum, zip(*vs)))


def test_classifier_examples():
    assert classify_simplex([e1, e2]).tag == STANDARD
    c = classify_simplex([add(e1, e2), e1, e2])
    assert c.tag == TWO_ADDITIVE and c.relation[0] == Line(add(e1, e2))
    c = classify_simplex([e2, f2])
    assert c.tag == SIGMA
    c = classify_simplex([add(e1, e2), e1, e2, f2])
    assert c.tag == MIXED and set(c.sigma_pair) == {Line(e2), Line(f2)}
    assert classify_simplex([e1, add(e1, (0, 0, 0, 2))]).tag == INVALID


def test_classifier_pairings():
    assert classify_simplex([e1, f1, e2]).tag == SIGMA
    assert classify_simplex([e1, add(f1, f2), e2]).tag == INVALID
    # two σ pairs are never a simplex
    assert classify_simplex([e1, f1, e2, f2]).tag == INVALID


def brute_tag(vs):
    """Oracle: try every ordering against the literal clauses."""
    from steinberg.linalg import max_minors_gcd

    def standard(ws):
        return all(_omega(a, b) == 0 for a, b in itertools.combinations(ws, 2)) and max_minors_gcd(list(ws)) == 1

    def pm(a, b):
        return {tuple(s * x + t * y for x, y in zip(a, b)) for s in (1, -1) for t in (1, -1)}

    def two_add(w):
        return len(w) >= 3 and standard(w[1:]) and (w[0] in pm(w[1], w[2]) or tuple(-x for x in w[0]) in pm(w[1], w[2]))

    def sigma(w):
        k = len(w) - 1
        return (k >= 1 and standard(w[:-1]) and abs(_omega(w[k], w[k - 1])) == 1
                and all(_omega(w[k], w[i]) == 0 for i in range(k - 1)))

    if standard(vs):
        return STANDARD
    perms = list(itertools.permutations(vs))
    if any(two_add(p) for p in perms):
        return TWO_ADDITIVE
    if any(sigma(p) for p in perms):
        return SIGMA
    if any(len(p) >= 4 and sigma(p[1:]) and two_add(p[:-1]) for p in perms):
        return MIXED
    return INVALID


pool = [e1, f1, e2, f2, add(e1, e2), add(e1, f2), add(e2, f1), (1, 0, -1, 0), (1, 1, 0, 0), (0, 0, 1, 1)]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(pool), min_size=1, max_size=4, unique=True), st.randoms())
def test_classifier_matches_brute_force_and_is_order_free(vs, rnd):
    from steinberg.symplectic import canonical_vector

    vs = [canonical_vector(v) for v in vs]
    if len(set(vs)) != len(vs):
        return
    tag = classify_vectors(vs).tag
    assert tag == brute_tag(vs)
    shuffled = vs[:]
    rnd.shuffle(shuffled)
    assert classify_vectors(shuffled).tag == tag


def test_relative_two_additive_edge():
    spec = ComplexSpec("Idelta", m=1, n=1, bound=2)
    # {⟨e_1 + v⟩, ⟨v⟩} with frozen e_1 is 2-additive in genus 2
    v = (0, 0, 1, 0)
    assert LatticeOracle(spec).admits([Line.of(v), Line.of((1, 0, 1, 0))])
    assert classify_simplex([(1, 0, 1, 0), v], spec).tag == TWO_ADDITIVE


def test_IA_n1_b1():
    K = build_lattice_complex(ComplexSpec("IA", 0, 1, 1))
    assert [L.rep for L in K.vertices] == [(0, 1), (1, -1), (1, 0), (1, 1)]
    assert all(K.tags[e] == SIGMA for e in K.complex.simplices(1))
    ID = build_lattice_complex(ComplexSpec("Idelta", 0, 1, 1))
    assert ID.complex == K.complex.skeleton(0)


def test_restricted_to_W():
    K = build_lattice_complex(ComplexSpec("I", 0, 2, 1, restrict_to_W=True))
    assert all(L.rep[-1] == 0 for L in K.vertices)
    assert all(K.tags[s] == STANDARD for s in K.complex.all_simplices())


def test_BA_inside_summand():
    V = lagrangian_summand(0, 2)
    K = build_lattice_complex(ComplexSpec("BA", 0, 2, 2, V=V))
    assert all(L.rep[1] == 0 and L.rep[3] == 0 for L in K.vertices)
    assert set(K.tags.values()) <= {STANDARD, TWO_ADDITIVE}
    assert TWO_ADDITIVE in K.tags.values()


def test_spec_validation():
    with pytest.raises(ValueError):
        ComplexSpec("IA", 0, 2, 1, restrict_to_W=True)
    with pytest.raises(ValueError):
        ComplexSpec("B", 0, 2, 1)
    with pytest.raises(ValueError):
        ComplexSpec("BA", 0, 1, 1, V=((1, 0), (0, 1)))


def test_vertex_budget():
    with pytest.raises(BudgetExceeded):
        build_lattice_complex(ComplexSpec("IA", 0, 2, 3), vertex_budget=50)


def test_sigma_and_mixed_data():
    cls, edge, minimal = simplex_sigma_data([add(e1, e2), e1, e2, f2])
    assert cls.tag == MIXED and edge == tuple(sorted([Line(e2), Line(f2)]))
    assert minimal == [tuple(sorted(Line(v) for v in [add(e1, e2), e1, e2, f2]))]
    K = build_lattice_complex(ComplexSpec("IA", 0, 1, 2))
    rep = sigma_edges_and_minimal_mixed(K)
    assert rep.passed and all(rep.sigma_edge[e] == e for e in K.sigma_edges)


def test_sigma_triangles_n2():
    K = build_lattice_complex(ComplexSpec("IA", 0, 2, 1))
    rep = sigma_edges_and_minimal_mixed(K)
    assert rep.passed
    rng = random.Random(0)
    tri = [s for s, t in K.tags.items() if t == SIGMA and len(s) == 3]
    for s in rng.sample(tri, 10):
        a, b = rep.sigma_edge[s]
        (c,) = set(s) - {a, b}
        assert _omega(c.rep, a.rep) == 0 and _omega(c.rep, b.rep) == 0


def test_star_decomposition_n2():
    K = build_lattice_complex(ComplexSpec("IA", 0, 2, 1))
    assert star_decomposition(K).passed


def test_link_perp_standard_and_skew_edges():
    K = build_lattice_complex(ComplexSpec("IA", 0, 2, 2))
    assert link_perp_identity(K, (Line(e2), Line(f2))).passed
    skew = (Line(e2), Line(add(e1, f2)))
    assert skew in set(K.sigma_edges)
    assert link_perp_identity(K, skew).passed
    K1 = build_lattice_complex(ComplexSpec("IA", 0, 1, 2))
    assert all(link_perp_identity(K1, e).passed for e in K1.sigma_edges)
