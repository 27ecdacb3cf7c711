import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg.errors import MalformedMatrixError, NotSymplecticError
from steinberg.linalg import IntMatrix
from steinberg.symplectic import (
    GroundRing,
    Line,
    SpElement,
    Subspace,
    SymplecticSpace,
    canonical_vector,
    embed_block,
    enumerate_isotropic_Fq,
    enumerate_sl2_Z,
    enumerate_sp_Fq,
    format_matrix,
    gaussian_binomial,
    gram_matrix,
    is_symplectic,
    isotropic_count,
    omega_eval,
    parse_matrix,
    perp,
    sample_sp_Z,
    symplectic_completion,
    transvection,
)

F2 = GroundRing.finite_field(2)


def brute_isotropic(n, q, d):
    """Oracle: all d-dim subspaces of F_q^{2n} found from spanning d-tuples of vectors."""
    N = 2 * n
    vecs = [v for v in itertools.product(range(q), repeat=N) if any(v)]
    found = set()
    for tup in itertools.combinations(vecs, d):
        V = Subspace(tup, N, q)
        if V.dim == d and V.is_isotropic():
            found.add(V)
    return found


def test_gram_and_basis_order():
    sp = SymplecticSpace(2)
    assert gram_matrix(1) == IntMatrix([[0, 1], [-1, 0]])
    assert sp.e(2) == (0, 0, 1, 0) and sp.f(2) == (0, 0, 0, 1)
    assert omega_eval(sp.e(1), sp.f(1)) == 1
    assert omega_eval(sp.f(1), sp.e(1)) == -1
    assert omega_eval(sp.e(1), sp.f(2)) == 0


def test_omega_mod_p():
    sp = SymplecticSpace(1, GroundRing.finite_field(3))
    assert omega_eval((2, 0), (0, 2), sp) == 1


def test_ground_ring_validation():
    with pytest.raises(ValueError):
        GroundRing.finite_field(4)
    assert str(F2) == "F_2"


def test_canonical_vector_and_lines():
    assert canonical_vector((0, -2, 4)) == (0, 1, -2)
    assert canonical_vector((2, 4), 5) == (1, 2)
    assert Line.of((-3, -6)) == Line.of((1, 2))
    assert Line.of((1, 2)).norm == 2


@pytest.mark.parametrize("n,q", [(1, 2), (1, 3), (2, 2)])
def test_isotropic_enumeration_matches_brute_force(n, q):
    for d in range(1, n + 1):
        got = set(enumerate_isotropic_Fq(n, q, d))
        assert got == brute_isotropic(n, q, d)
        assert len(got) == isotropic_count(n, q, d)


def test_counts():
    assert gaussian_binomial(4, 2, 2) == 35
    assert isotropic_count(2, 2, 1) == 15 and isotropic_count(2, 2, 2) == 15
    assert isotropic_count(2, 3, 2) == 40


def test_subspace_operations():
    U = Subspace([(1, 0, 0), (0, 1, 0)], 3)
    W = Subspace([(0, 1, 0), (0, 0, 1)], 3)
    assert (U + W).dim == 3
    assert U.intersection(W) == Subspace([(0, 1, 0)], 3)
    assert Subspace([(2, 1, 0)], 3).rows == ((Fraction(1), Fraction(1, 2), Fraction(0)),)
    assert Subspace([(1, 0, 0)], 3).issubspace(U)
    assert not W.issubspace(U)


def test_perp_of_line():
    sp = SymplecticSpace(2)
    H = Subspace([sp.e(1)], 4)
    P = perp(H, sp)
    assert P.dim == 3 and H.issubspace(P)
    assert not P.contains_vector(sp.f(1))


def test_sp_group_orders():
    assert len(enumerate_sp_Fq(1, 2)) == 6
    assert len(enumerate_sp_Fq(1, 3)) == 24
    assert len(enumerate_sp_Fq(2, 2)) == 720


def test_sl2_enumeration_is_exact():
    bound = 2
    brute = 0
    for a, b, c, d in itertools.product(range(-bound, bound + 1), repeat=4):
        brute += a * d - b * c == 1
    els = enumerate_sl2_Z(bound)
    assert len(els) == brute
    assert all(is_symplectic(M.matrix, M.space) for M in els)


def test_inverse_and_product():
    sp = SymplecticSpace(2)
    for M in sample_sp_Z(2, 3, 15, seed=3):
        assert M @ M.inverse() == SpElement.identity(sp)
        assert M.max_entry() <= 3


def test_non_symplectic_rejected():
    with pytest.raises(NotSymplecticError):
        SpElement([[1, 1], [0, 2]], SymplecticSpace(1))


def test_transvection_is_symplectic():
    sp = SymplecticSpace(2)
    T = transvection((1, 2, 0, 1), sp)
    assert is_symplectic(T.matrix, sp)


vectors4 = st.tuples(*[st.integers(-3, 3)] * 4)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(sample_sp_Z(2, 3, 40, seed=11)))
def test_completion_sends_last_pair(M):
    v, w = M.column(2), M.column(3)
    S = symplectic_completion(v, w)
    assert S.column(2) == v and S.column(3) == w
    assert is_symplectic(S.matrix, S.space)


def test_completion_rejects_bad_pairs():
    with pytest.raises(ValueError):
        symplectic_completion((1, 0, 0, 0), (0, 2, 0, 0))
    with pytest.raises(ValueError):
        symplectic_completion((2, 0, 0, 0), (0, 1, 0, 0))


def test_embed_block():
    A = SpElement([[1, 1], [0, 1]], SymplecticSpace(1))
    M = embed_block(A, 2)
    assert M.column(1) == (1, 1, 0, 0) and M.column(3) == (0, 0, 0, 1)


def test_matrix_text_roundtrip():
    A = parse_matrix("1,2;3,4")
    assert format_matrix(A) == "1,2;3,4"
    with pytest.raises(MalformedMatrixError):
        parse_matrix("1,2;3")
    with pytest.raises(MalformedMatrixError):
        parse_matrix("1,x")
