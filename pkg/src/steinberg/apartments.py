"""Apartment classes, the map α and the relative decomposition of (IA, I^δ).

Λ(n) = {1, 1̄, …, n, n̄} is encoded by the integers 0..2n−1 with a ↦ 2(a−1) and
ā ↦ 2a−1, which matches the column order of :class:`SpElement` and the basis
order e_1, f_1, …, e_n, f_n.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .chains import Chain, desuspend, face_tuple, suspend
from .errors import BudgetExceeded, TruncationError
from .lattice_complexes import (
    ComplexSpec,
    LatticeComplex,
    LatticeOracle,
    SIGMA,
    link_perp_identity,
    oriented_pair,
    reduce_to_perp,
)
from .linalg import SparseIntMatrix, elementary_divisors
from .symplectic import (
    GroundRing,
    IntMatrix,
    Line,
    SpElement,
    Subspace,
    SymplecticSpace,
    enumerate_sp_Fq,
    symplectic_completion,
)
from .topology import (
    ChainComplexZ,
    SimplicialComplex,
    barycentric,
    homology_basis,
    is_homology_basis,
    reduced_homology,
    relative_homology,
)


# -- the index set Λ(n) -------------------------------------------------------

def lam(a: int, barred: bool = False) -> int:
    return 2 * (a - 1) + int(barred)


def partner(j: int) -> int:
    """The involution a ↔ ā."""
    return j ^ 1


def lam_label(j: int) -> str:
    a = j // 2 + 1
    return f"{a}bar" if j % 2 else str(a)


def is_standard_index_set(I) -> bool:
    s = set(I)
    return not any(j in s and partner(j) in s for j in s)


def is_sigma_index_set(I, n: int) -> bool:
    """Standard away from the last pair, and containing both n and n̄."""
    s = set(I)
    if not {2 * n - 2, 2 * n - 1} <= s:
        return False
    return is_standard_index_set(s - {2 * n - 2, 2 * n - 1})


@lru_cache(maxsize=None)
def beta_boundary_complex(n: int) -> SimplicialComplex:
    """∂β_n: the boundary of the n-dimensional cross-polytope on Λ(n)."""
    facets = [tuple(2 * i + b for i, b in enumerate(bits)) for bits in itertools.product((0, 1), repeat=n)]
    return SimplicialComplex(facets)


@lru_cache(maxsize=None)
def beta_complex(n: int) -> SimplicialComplex:
    """β_n = ∂β_n together with the σ subsets (those containing {n, n̄})."""
    facets = list(beta_boundary_complex(n).maximal_simplices())
    for bits in itertools.product((0, 1), repeat=n - 1):
        facets.append(tuple(2 * i + b for i, b in enumerate(bits)) + (2 * n - 2, 2 * n - 1))
    return SimplicialComplex(facets)


def beta_pair_homology(n: int):
    return relative_homology(beta_complex(n), beta_boundary_complex(n))


@lru_cache(maxsize=None)
def _fundamental(n: int) -> Chain:
    if n == 0:
        return Chain({(): 1})
    if n == 1:
        return Chain.from_terms([((0,), 1), ((1,), -1)])
    return suspend(_fundamental(n - 1), 2 * n - 2, 2 * n - 1)


def fundamental_class(n: int) -> Chain:
    """ξ_{n−1} ∈ C_{n−1}(∂β_n): ξ_0 = [1] − [1̄], then iterated suspension."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _fundamental(n).copy()


def relative_fundamental_cycle(n: int) -> Chain:
    """c ∈ C_n(β_n) with ∂c = ξ_{n−1}; it generates H_n(β_n, ∂β_n)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    z = _fundamental(n - 1)
    c = z.join_vertex(2 * n - 2).join_vertex(2 * n - 1)
    return c if n % 2 == 0 else -c


@lru_cache(maxsize=None)
def _subdivided_fundamental(n: int) -> Chain:
    return barycentric(_fundamental(n))


# -- apartment classes ---------------------------------------------------------

def _span_map(M: SpElement):
    p, N = M.space.p, M.space.dim
    cols = M.columns()

    def f(I):
        return Subspace([cols[j] for j in I], N, p)

    return f


def apartment_class(M: SpElement) -> Chain:
    """[M] = ∂M_#(b(ξ)): flags of spans M_I = ⟨M_a : a ∈ I⟩ over Q or F_p."""
    n = M.space.n
    out = _subdivided_fundamental(n).pushforward(_span_map(M))
    if len(out) != len(_subdivided_fundamental(n)):
        raise AssertionError("∂M is not injective on flags")
    return out


def translate(c: Chain, S: SpElement) -> Chain:
    """Image of a flag chain under S."""
    return c.pushforward(lambda V: V.apply(S.matrix))


def spanning_chain_map(c: Chain, p: int = 0) -> Chain:
    """s_#: a flag of simplices (tuples of lines) goes to the flag of their spans.

    Flags whose spans repeat are degenerate and vanish.
    """
    def span(face):
        reps = [L.rep for L in face]
        return Subspace(reps, len(reps[0]), p)

    return c.pushforward(span)


@dataclass
class AlphaResult:
    chain: Chain
    boundary: Chain
    lines: tuple[Line, ...]
    relative_cycle: bool
    bound: int

    def to_json(self) -> dict:
        return {
            "chain": chain_to_json(self.chain),
            "boundary": chain_to_json(self.boundary),
            "relative_cycle": self.relative_cycle,
            "bound": self.bound,
        }


def required_bound(M: SpElement) -> int:
    return M.max_entry()


def alpha_map(M: SpElement, bound: int) -> AlphaResult:
    """α(M) = M^α_#(c), the image of the relative fundamental cycle in (IA, I^δ)."""
    if M.space.p:
        raise ValueError("α is defined for integral matrices")
    n = M.space.n
    need = required_bound(M)
    if need > bound:
        raise TruncationError(f"columns of M exceed the bound {bound}", need)
    lines = tuple(Line.of(c) for c in M.columns())
    if len(set(lines)) != 2 * n:
        raise AssertionError("M^α is not injective on vertices")
    chain = relative_fundamental_cycle(n).pushforward(lambda j: lines[j])
    bnd = chain.boundary()
    ia = LatticeOracle(ComplexSpec("IA", 0, n, bound))
    idelta = LatticeOracle(ComplexSpec("Idelta", 0, n, bound))
    ok = all(ia.admits(s) for s in chain.support())
    ok = ok and all(idelta.admits(s) for s in bnd.support())
    expected = fundamental_class(n).pushforward(lambda j: lines[j])
    ok = ok and bnd == expected
    return AlphaResult(chain, bnd, lines, ok, bound)


@dataclass
class FactorizationReport:
    matrix: IntMatrix
    passed: bool
    sign: int
    lhs: Chain
    rhs: Chain
    relative_cycle: bool

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix.rows()],
            "passed": self.passed,
            "sign": self.sign,
            "mode": {1: "exact", -1: "negated", 0: "mismatch"}[self.sign],
            "relative_cycle": self.relative_cycle,
            "lhs": chain_to_json(self.lhs),
            "rhs": chain_to_json(self.rhs),
        }


def verify_factorization(M: SpElement, bound: int) -> FactorizationReport:
    """s_# b_# ∂ α(M) against [M] as literal flag chains over Q."""
    a = alpha_map(M, bound)
    lhs = spanning_chain_map(barycentric(a.boundary))
    rhs = apartment_class(SpElement(M.matrix, SymplecticSpace(M.space.n), check=False))
    if lhs == rhs:
        sign = 1
    elif lhs == -rhs:
        sign = -1
    else:
        sign = 0
    return FactorizationReport(M.matrix, sign != 0 and a.relative_cycle, sign, lhs, rhs, a.relative_cycle)


# -- rank one: the truncated IA, I^δ pair ----------------------------------------------

@dataclass
class RankOneReport:
    bound: int
    skeleton_match: bool
    all_edges_sigma: bool
    relative_rank: int
    relative_free: bool
    sigma_edges: int
    generators_hit: bool
    matrices: int
    homology: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (self.skeleton_match and self.all_edges_sigma and self.relative_free
                and self.relative_rank == self.sigma_edges and self.generators_hit)

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "skeleton_match": self.skeleton_match,
            "all_edges_sigma": self.all_edges_sigma,
            "relative_rank": self.relative_rank,
            "relative_free": self.relative_free,
            "sigma_edges": self.sigma_edges,
            "generators_hit": self.generators_hit,
            "matrices": self.matrices,
            "homology": self.homology,
            "passed": self.passed,
        }


def rank_one_check(bound: int) -> RankOneReport:
    from .lattice_complexes import build_lattice_complex
    from .symplectic import enumerate_sl2_Z

    IA = build_lattice_complex(ComplexSpec("IA", 0, 1, bound))
    ID = build_lattice_complex(ComplexSpec("Idelta", 0, 1, bound))
    skeleton = ID.complex == IA.complex.skeleton(0)
    edges = IA.complex.simplices(1)
    all_sigma = all(IA.tags[e] == SIGMA for e in edges) and IA.complex.dim <= 1
    h = relative_homology(IA.complex, ID.complex)
    rank = h.b(1)
    free = h.is_free() and all(h.b(k) == 0 for k in h.betti if k != 1)
    # every σ edge {⟨v⟩, ⟨w⟩} is realized by the matrix with columns v, w
    hit = set()
    good = True
    mats = enumerate_sl2_Z(bound)
    for M in mats:
        a = alpha_map(M, bound)
        if len(a.chain) != 1 or abs(next(iter(a.chain.terms.values()))) != 1 or not a.relative_cycle:
            good = False
            continue
        hit.add(a.chain.support()[0])
    hits_all = good and hit == set(IA.sigma_edges)
    return RankOneReport(bound, skeleton, all_sigma, rank, free, len(IA.sigma_edges), hits_all, len(mats),
                         h.to_json())


# -- decomposition of H_n(IA, I^δ) over σ edges ----------------------------------------

@dataclass
class EdgeSummand:
    edge: tuple
    link_vertices: int
    local_rank: int
    local_torsion: list[int]
    link_rank: int
    suspension_iso: bool
    connecting_iso: bool
    link_perp: bool

    @property
    def passed(self) -> bool:
        return (self.suspension_iso and self.connecting_iso and self.link_perp
                and self.local_rank == self.link_rank and not self.local_torsion)


@dataclass
class DecompositionReport:
    n: int
    bound: int
    relative_rank: int
    relative_torsion: list[int]
    summand_rank: int
    summand_torsion: list[int]
    sigma_edges: int
    basis_union: bool | None
    summands: list[EdgeSummand]

    @property
    def ranks_agree(self) -> bool:
        return self.relative_rank == self.summand_rank and sorted(self.relative_torsion) == sorted(self.summand_torsion)

    @property
    def passed(self) -> bool:
        return self.ranks_agree and self.basis_union is not False and all(s.passed for s in self.summands)

    def to_json(self) -> dict:
        bad = [s for s in self.summands if not s.passed]
        return {
            "n": self.n,
            "bound": self.bound,
            "relative_rank": self.relative_rank,
            "relative_torsion": self.relative_torsion,
            "summand_rank": self.summand_rank,
            "summand_torsion": self.summand_torsion,
            "sigma_edges": self.sigma_edges,
            "ranks_agree": self.ranks_agree,
            "basis_union": self.basis_union,
            "summands_passed": sum(s.passed for s in self.summands),
            "failures": [[list(v.rep) for v in s.edge] for s in bad[:20]],
            "passed": self.passed,
        }


def edge_lift(z: Chain, a, b, degree: int) -> Chain:
    """x = ±z∗[a, b] with ∂x = Σz; a relative cycle of (Star(Δ), Star(Δ) ∩ I^δ)."""
    x = z.join_vertex(a).join_vertex(b)
    return x if degree % 2 == 0 else -x


def relative_decomposition(K: LatticeComplex, check_link_perp: bool = True,
                           check_union: bool = True) -> DecompositionReport:
    spec = K.spec
    if spec.kind != "IA" or spec.m:
        raise ValueError("needs an absolute IA instance")
    n = spec.n
    L = K.subcomplex_of_kind("Idelta")
    C = ChainComplexZ(K.complex, L)
    H = C.homology()
    summands = []
    lifts: list[Chain] = []
    s_rank, s_tors = 0, []
    for e in K.sigma_edges:
        v, w = oriented_pair(e)
        a, b = Line.of(v), Line.of(w)
        star = K.complex.star(e)
        inter = star.intersection(L)
        local = ChainComplexZ(star, inter)
        hl = local.homology()
        link = K.complex.link(e)
        link_c = ChainComplexZ(link)
        hlink = link_c.homology()
        zs = homology_basis(link_c, n - 2)
        ys = [suspend(z, a, b) for z in zs]
        xs = [edge_lift(z, a, b, n - 2) for z in zs]
        susp = is_homology_basis(ys, ChainComplexZ(inter), n - 1) and hlink.is_free()
        conn = all(x.boundary() == y for x, y in zip(xs, ys)) and is_homology_basis(xs, local, n)
        lp = link_perp_identity(K, e).passed if check_link_perp else True
        s_rank += hl.b(n)
        s_tors += hl.t(n)
        lifts += xs
        summands.append(EdgeSummand(e, len(link.vertices()), hl.b(n), hl.t(n), hlink.b(n - 2), susp, conn, lp))
    union = is_homology_basis(lifts, C, n) if check_union else None
    return DecompositionReport(n, spec.bound, H.b(n), H.t(n), s_rank, s_tors, len(K.sigma_edges), union, summands)


# -- two routes into the Δ^⊥ building at n = 2 -----------------------------------------

@dataclass
class ClaimReport:
    matrix: IntMatrix
    reduced: IntMatrix
    route1: Chain
    route2: Chain
    passed: bool

    def to_json(self) -> dict:
        return {
            "matrix": [list(r) for r in self.matrix.rows()],
            "reduced": [list(r) for r in self.reduced.rows()],
            "route1": chain_to_json(self.route1),
            "route2": chain_to_json(self.route2),
            "passed": self.passed,
        }


def reduced_matrix(M: SpElement, S: SpElement) -> SpElement:
    """M̃ ∈ Sp(Δ^⊥): the upper-left block of S^{-1}M in the coordinates given by S."""
    n = M.space.n
    T = (S.inverse() @ M).matrix
    k = 2 * (n - 1)
    for i in range(2 * n):
        for j in range(2 * n):
            if (i >= k or j >= k) and T[i, j] != int(i == j):
                raise ValueError("M does not fix the chosen σ pair")
    return SpElement([[T[i, j] for j in range(k)] for i in range(k)], SymplecticSpace(n - 1))


def claim_identification(M: SpElement, v, w, bound: int) -> ClaimReport:
    """Both routes from M to H̃_0 of the building of Δ^⊥ (n = 2)."""
    n = M.space.n
    if n != 2:
        raise ValueError("the identification is decided by chain equality only for n = 2")
    v, w = tuple(v), tuple(w)
    if M.column(2 * n - 2) != v or M.column(2 * n - 1) != w:
        raise ValueError("columns n, n̄ of M must be v, w")
    S = symplectic_completion(v, w)
    Mt = reduced_matrix(M, S)
    # route 1: α(M), restricted to Star(Δ), then δ, Σ^{-1}, coordinates on Δ^⊥, b and s
    a_res = alpha_map(M, bound)
    la, lb = Line.of(v), Line.of(w)
    in_star = a_res.chain.restrict(lambda s: la in s and lb in s)
    y = in_star.boundary()
    z = desuspend(y, la, lb)
    if z is None or not a_res.relative_cycle:
        raise AssertionError("δ α(M) is not a suspension")
    z_perp = z.pushforward(lambda u: Line.of(reduce_to_perp(S, u.rep)))
    small = LatticeOracle(ComplexSpec("Idelta", 0, n - 1, max(1, max((u.norm for s in z_perp.support() for u in s), default=1))))
    if not all(small.admits(s) for s in z_perp.support()):
        raise AssertionError("desuspended class is not in I^δ(Δ^⊥)")
    route1 = spanning_chain_map(barycentric(z_perp))
    route2 = apartment_class(Mt)
    return ClaimReport(M.matrix, Mt.matrix, route1, route2, route1 == route2)


def sample_fixing_pair(count: int, bound: int, seed: int = 0) -> list[SpElement]:
    """Sampled M ∈ Sp_4(Z) with M e_2 = e_2, M f_2 = f_2 and entries ≤ bound."""
    from .symplectic import embed_block, sample_sp_Z

    return [embed_block(A, 2) for A in sample_sp_Z(1, bound, count, seed=seed)]


# -- the span of apartment classes over F_q -------------------------------------------

@dataclass
class SpanReport:
    n: int
    q: int
    st_rank: int
    group_order: int
    distinct_classes: int
    span_rank: int
    saturated: bool
    all_cycles: bool
    all_nonzero: bool
    equivariance_checked: int = 0
    equivariance_ok: bool = True

    @property
    def full(self) -> bool:
        return self.span_rank == self.st_rank and self.saturated and self.all_cycles

    @property
    def passed(self) -> bool:
        return self.full and self.all_nonzero and self.equivariance_ok

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "st_rank": self.st_rank,
            "solomon_tits_rank": self.q ** (self.n * self.n),
            "group_order": self.group_order,
            "distinct_classes": self.distinct_classes,
            "span_rank": self.span_rank,
            "saturated": self.saturated,
            "all_cycles": self.all_cycles,
            "all_nonzero": self.all_nonzero,
            "full": self.full,
            "equivariance_checked": self.equivariance_checked,
            "equivariance_ok": self.equivariance_ok,
            "passed": self.passed,
        }


def apartment_span_Fq(n: int, q: int, equivariance_pairs: int = 0, seed: int = 0,
                      budget: int = 100_000) -> SpanReport:
    from .buildings import build_building

    group = enumerate_sp_Fq(n, q, budget=budget)
    Bd = build_building("full", n, q, budget=budget)
    K = Bd.order_complex()
    C = ChainComplexZ(K)
    k = n - 1
    st = reduced_homology(K).b(k)
    dk = C.boundary_matrix(k)
    cols: dict[int, dict[int, int]] = {}
    seen: dict[tuple, int] = {}
    all_cycles = True
    for g in group:
        vec = C.vector(apartment_class(g), k)
        if dk.matvec(vec):
            all_cycles = False
        key = tuple(sorted(vec.items()))
        if key not in seen:
            seen[key] = len(cols)
            cols[len(cols)] = vec
    A = SparseIntMatrix(C.rank(k), len(cols), cols)
    div = elementary_divisors(A)
    # top degree: H̃_{n−1} = Z_{n−1}, so nonzero cycles are nonzero classes
    nonzero = all(cols[j] for j in cols)
    rep = SpanReport(n, q, st, len(group), len(cols), len(div), all(d == 1 for d in div), all_cycles, nonzero)
    if equivariance_pairs:
        rng = random.Random(seed)
        ok = True
        for _ in range(equivariance_pairs):
            S, M = rng.choice(group), rng.choice(group)
            if apartment_class(S @ M) != translate(apartment_class(M), S):
                ok = False
        rep.equivariance_checked = equivariance_pairs
        rep.equivariance_ok = ok
    return rep


# -- serialization ------------------------------------------------------------------

def _vertex_json(v):
    if isinstance(v, Line):
        return list(v.rep)
    if isinstance(v, Subspace):
        return [[str(x) for x in r] for r in v.rows]
    if isinstance(v, tuple):
        return [_vertex_json(x) for x in v]
    return v


def chain_to_json(c: Chain) -> list:
    return [{"simplex": [_vertex_json(v) for v in s], "coefficient": k} for s, k in c.items()]
