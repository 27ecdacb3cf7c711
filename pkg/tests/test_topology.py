import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg.chains import Chain, desuspend, orient, permutation_sign, suspend
from steinberg.topology import (
    ChainComplexZ,
    Poset,
    PosetMap,
    SimplicialComplex,
    barycentric,
    cm_certificate,
    face_poset,
    fundamental_group_attempt,
    homology_basis,
    is_connected_through,
    is_homology_basis,
    is_spherical,
    join,
    join_suspend,
    quillen_vdkl_check,
    reduced_homology,
    relative_homology,
)


def random_complex(rng, nverts=6, nfacets=5, maxdim=3):
    facets = []
    for _ in range(nfacets):
        k = rng.randint(1, maxdim + 1)
        facets.append(tuple(rng.sample(range(nverts), k)))
    return SimplicialComplex(facets)


complexes = st.builds(lambda seed: random_complex(random.Random(seed)), st.integers(0, 10_000))


def boundary_of_simplex(n):
    return SimplicialComplex(itertools.combinations(range(n + 1), n))


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([2, 0, 1]) == 1
    assert permutation_sign([1, 1]) == 0
    assert orient([3, 1, 2]) == ((1, 2, 3), 1)


def test_chain_arithmetic_and_boundary():
    c = Chain.simplex([1, 0])
    assert c == -Chain.simplex([0, 1])
    assert c.boundary() == Chain.from_terms([((0,), 1), ((1,), -1)])
    tri = Chain.simplex([0, 1, 2])
    assert tri.boundary().boundary().is_zero()
    assert (2 * tri - tri - tri).is_zero()


def test_suspension_roundtrip():
    z = Chain.from_terms([((0,), 1), ((1,), -1)])
    y = suspend(z, 2, 3)
    assert y.boundary().is_zero()
    assert desuspend(y, 2, 3) == z
    assert desuspend(Chain.simplex([0, 2]), 2, 3) is None


def test_small_homology():
    pts = SimplicialComplex([(0,), (1,), (2,)])
    assert reduced_homology(pts).b(0) == 2
    empty = SimplicialComplex([])
    assert reduced_homology(empty).b(-1) == 1
    assert not is_connected_through(empty, -1)
    circle = boundary_of_simplex(2)
    h = reduced_homology(circle)
    assert h.b(1) == 1 and h.b(0) == 0
    assert is_spherical(circle, 1)


def test_projective_plane_torsion():
    # the 6-vertex triangulation of RP^2
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
             (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    h = reduced_homology(SimplicialComplex(faces))
    assert h.t(1) == [2] and h.b(1) == 0 and h.b(2) == 0


def test_link_and_star():
    K = boundary_of_simplex(2)
    assert K.link((0,)) == SimplicialComplex([(1,), (2,)])
    assert K.star((0,)) == SimplicialComplex([(0, 1), (0, 2)])
    assert K.link((0, 1)).dim == -1
    with pytest.raises(ValueError):
        K.link((0, 1, 2))


def test_order_complex_examples():
    chain = Poset([0, 1, 2], lt=lambda a, b: a < b)
    assert chain.order_complex().f_vector() == [3, 3, 1]
    anti = Poset(["a", "b", "c"], lt=lambda a, b: False)
    assert anti.order_complex().f_vector() == [3]


def test_subspaces_of_F2_cubed():
    from steinberg.symplectic import Subspace

    vecs = [v for v in itertools.product(range(2), repeat=3) if any(v)]
    subs = {Subspace([v], 3, 2) for v in vecs} | {Subspace([a, b], 3, 2) for a, b in itertools.combinations(vecs, 2)}
    P = Poset(subs, lt=lambda U, V: U.dim < V.dim and U.issubspace(V))
    assert P.order_complex().f_vector() == [14, 21]
    assert reduced_homology(P.order_complex()).b(1) == 8


def test_join_and_suspension_map():
    S0a = SimplicialComplex([(0,), (1,)])
    S0b = SimplicialComplex([(2,), (3,)])
    J, sigma = join_suspend(S0a, S0b)
    assert reduced_homology(J).b(1) == 1 and J.f_vector() == [4, 4]
    y = sigma(Chain.from_terms([((0,), 1), ((1,), -1)]))
    assert y.boundary().is_zero() and len(y) == 4
    with pytest.raises(ValueError):
        join(S0a, S0a)


@settings(max_examples=40, deadline=None)
@given(complexes, complexes)
def test_join_formula(K, L):
    L = SimplicialComplex([tuple(v + 100 for v in s) for s in L.maximal_simplices()])
    hK, hL, hJ = reduced_homology(K), reduced_homology(L), reduced_homology(join(K, L))
    # over Q: b̃_{k+1}(K∗L) = Σ_{i+j=k} b̃_i(K) b̃_j(L) when all groups are free
    if hK.is_free() and hL.is_free():
        for k in range(-1, K.dim + L.dim + 2):
            expect = sum(hK.b(i) * hL.b(k - i) for i in range(-1, k + 2))
            assert hJ.b(k + 1) == expect


@settings(max_examples=40, deadline=None)
@given(complexes)
def test_barycentric_is_a_chain_map(K):
    for k in range(1, K.dim + 1):
        for s in K.simplices(k):
            c = Chain.simplex(s)
            assert barycentric(c).boundary() == barycentric(c.boundary().restrict(lambda f: len(f) > 0))


def test_barycentric_edge():
    b = barycentric(Chain.simplex([0, 1]))
    assert b == Chain.from_terms([(((0,), (0, 1)), 1), (((1,), (0, 1)), -1)])


@settings(max_examples=30, deadline=None)
@given(complexes)
def test_subdivision_preserves_homology(K):
    sd = face_poset(K).order_complex()
    assert reduced_homology(sd).betti == reduced_homology(K).betti
    assert reduced_homology(sd).torsion == reduced_homology(K).torsion


@settings(max_examples=30, deadline=None)
@given(complexes, st.randoms())
def test_homology_invariant_under_relabeling(K, rnd):
    perm = list(range(6))
    rnd.shuffle(perm)
    K2 = SimplicialComplex([tuple(perm[v] for v in s) for s in K.maximal_simplices()])
    assert reduced_homology(K2).betti == reduced_homology(K).betti


@settings(max_examples=30, deadline=None)
@given(complexes)
def test_homology_basis_is_a_basis(K):
    C = ChainComplexZ(K)
    h = C.homology()
    for k in range(-1, K.dim + 1):
        basis = homology_basis(C, k)
        assert len(basis) == h.b(k)
        if h.is_free():
            assert is_homology_basis(basis, C, k)


def test_is_homology_basis_rejects_multiples():
    K = boundary_of_simplex(2)
    C = ChainComplexZ(K)
    z = Chain.from_terms([((0, 1), 1), ((1, 2), 1), ((0, 2), -1)])
    assert is_homology_basis([z], C, 1)
    assert not is_homology_basis([2 * z], C, 1)


def test_relative_homology_of_graph_mod_vertices():
    G = SimplicialComplex([(0, 1), (1, 2), (0, 2), (2, 3)])
    h = relative_homology(G, G.skeleton(0))
    assert h.b(1) == 4 and h.b(0) == 0


def test_cm_certificate_examples():
    assert cm_certificate(face_poset(boundary_of_simplex(2)), 1).passed
    for n in range(1, 5):
        assert cm_certificate(face_poset(boundary_of_simplex(n)), n - 1).passed
    bad = face_poset(SimplicialComplex([(0, 1), (2,)]))
    cert = cm_certificate(bad, 1)
    assert not cert.passed and cert.witness["part"] in ("whole", "upper", "lower", "interval")


def test_quillen_identity_and_violation():
    P = face_poset(boundary_of_simplex(2))
    ident = PosetMap(P, P, lambda x: x, strict=True)
    assert quillen_vdkl_check(ident, "quillen", d=1).passed
    bad_src = face_poset(SimplicialComplex([(0, 1), (2,)]))
    point = Poset(["*"])
    const = PosetMap(bad_src, point, lambda x: "*")
    rep = quillen_vdkl_check(const, "vdkl", theta=0, t={"*": 1})
    assert rep.passed  # fiber nonempty is all that is asked
    rep = quillen_vdkl_check(const, "vdkl", theta=0, t={"*": 2})
    assert not rep.passed and rep.failures[0]["hypothesis"] == "fiber connectivity"


def test_poset_map_must_be_monotone():
    P = Poset([0, 1], lt=lambda a, b: a < b)
    with pytest.raises(ValueError):
        PosetMap(P, P, lambda x: 1 - x)


def test_fundamental_group_attempt():
    disk = SimplicialComplex([(0, 1, 2), (0, 2, 3)])
    assert fundamental_group_attempt(disk) == "proven"
    assert fundamental_group_attempt(boundary_of_simplex(2)) == "inconclusive"
    assert fundamental_group_attempt(SimplicialComplex([(0,), (1,)])) == "disconnected"
    assert fundamental_group_attempt(boundary_of_simplex(3)) == "proven"
