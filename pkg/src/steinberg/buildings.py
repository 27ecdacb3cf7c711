"""Symplectic Tits buildings over F_q and flag chains over Q."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .chains import Chain
from .errors import BudgetExceeded
from .symplectic import (
    GroundRing,
    Subspace,
    SymplecticSpace,
    enumerate_isotropic_Fq,
    gaussian_binomial,
    isotropic_count,
    perp,
    _rref_cells,
)
from .topology import Poset, cm_certificate, reduced_homology

DEFAULT_BUDGET = 1000
VARIANTS = ("full", "restricted", "upper", "typeA")


@dataclass
class BuildingPoset:
    variant: str
    n: int
    q: int
    poset: Poset
    m: int = 0

    @property
    def ground(self) -> GroundRing:
        return GroundRing.finite_field(self.q)

    @property
    def elements(self) -> list[Subspace]:
        return self.poset.elements

    def order_complex(self):
        return self.poset.order_complex()

    def summary(self) -> dict:
        return {
            "variant": self.variant,
            "n": self.n,
            "m": self.m,
            "ground": str(self.ground),
            "elements": len(self.poset),
            "cover_relations": len(self.poset.cover_relations()),
        }


def _inclusion_poset(elements: list[Subspace]) -> Poset:
    by_dim: dict[int, list[Subspace]] = {}
    for V in elements:
        by_dim.setdefault(V.dim, []).append(V)
    rel = []
    dims = sorted(by_dim)
    for a, b in zip(dims, dims[1:]):
        for V in by_dim[a]:
            for U in by_dim[b]:
                if V.issubspace(U):
                    rel.append((V, U))
    if all(b == a + 1 for a, b in zip(dims, dims[1:])):
        return Poset(elements, relations=rel)
    return Poset(elements, lt=lambda V, U: V.dim < U.dim and V.issubspace(U))


def in_W(V: Subspace) -> bool:
    """V ⊆ W = ⟨e_1, f_1, …, e_{n−1}, f_{n−1}, e_n⟩, i.e. the f_n-coordinate vanishes on V."""
    return all(r[-1] == 0 for r in V.rows)


def frozen_span(m: int, N: int, p: int) -> Subspace:
    return Subspace([tuple(int(j == 2 * i) for j in range(N)) for i in range(m)], N, p)


def build_building(variant: str, n: int, q: int, m: int = 0, budget: int = DEFAULT_BUDGET) -> BuildingPoset:
    """Finite building posets.

    full       isotropic subspaces of F_q^{2n}
    restricted those contained in W
    upper      isotropic subspaces of F_q^{2(m+n)} properly containing ⟨e_1..e_m⟩
    typeA      nontrivial proper subspaces of F_q^n
    """
    if variant == "typeA":
        total = sum(gaussian_binomial(n, d, q) for d in range(1, n))
        if total > budget:
            raise BudgetExceeded(f"{total} subspaces exceed the budget {budget}")
        elems = [Subspace(M, n, q) for d in range(1, n) for M in _rref_cells(n, d, q)]
        return BuildingPoset(variant, n, q, _inclusion_poset(elems))
    if variant not in VARIANTS:
        raise ValueError(f"unknown building variant {variant!r}")
    genus = n + m if variant == "upper" else n
    total = sum(isotropic_count(genus, q, d) for d in range(1, genus + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} isotropic subspaces exceed the budget {budget}")
    elems: list[Subspace] = []
    for d in range(1, genus + 1):
        elems.extend(enumerate_isotropic_Fq(genus, q, d, budget=budget))
    if variant == "restricted":
        elems = [V for V in elems if in_W(V)]
    elif variant == "upper":
        E = frozen_span(m, 2 * genus, q)
        elems = [V for V in elems if V.dim > m and E.issubspace(V)]
    return BuildingPoset(variant, n, q, _inclusion_poset(elems), m=m if variant == "upper" else 0)


def solomon_tits_rank(n: int, q: int) -> int:
    return q ** (n * n)


@dataclass
class LemmaReport:
    n: int
    q: int
    closure: bool = True
    isomorphism: bool = True
    cone: bool = True
    contractible: bool = True
    cm: bool = True
    witnesses: list[dict] = field(default_factory=list)
    homology: dict | None = None

    @property
    def passed(self) -> bool:
        return self.closure and self.isomorphism and self.cone and self.contractible and self.cm

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "closure": self.closure,
            "isomorphism": self.isomorphism,
            "cone": self.cone,
            "contractible": self.contractible,
            "cm": self.cm,
            "passed": self.passed,
            "homology": self.homology,
            "witnesses": [{k: str(v) for k, v in w.items()} for w in self.witnesses[:20]],
            "certification_level": "homological",
        }


def verify_restriction_lemmas(n: int, q: int, budget: int = DEFAULT_BUDGET) -> LemmaReport:
    """Adding ⟨e_n⟩, the upper-link isomorphism, and the cone structure of T^ω_n(W) over F_q."""
    B = build_building("restricted", n, q, budget=budget)
    P = B.poset
    space = SymplecticSpace(n, GroundRing.finite_field(q))
    N = 2 * n
    en = Subspace([space.e(n)], N, q)
    rep = LemmaReport(n, q)
    elems = set(P.elements)

    def add_en(V: Subspace) -> Subspace:
        return V + en

    # adding ⟨e_n⟩ stays inside T(W)
    f = {}
    for V in P.elements:
        U = add_en(V)
        if U not in elems:
            rep.closure = False
            rep.witnesses.append({"lemma": "closure", "V": V})
        f[V] = U

    # upper links above Q ⊇ ⟨e_n⟩ against the genus n−1 building on ⟨e_n, f_n⟩^⊥
    pair = Subspace([space.e(n), space.f(n)], N, q)
    complement = perp(pair, space)
    small = [V for V in (build_building("full", n - 1, q, budget=budget).elements if n > 1 else [])]

    def embed(V: Subspace) -> Subspace:
        return Subspace([r + (0, 0) for r in V.rows], N, q)

    small_embedded = {embed(V) for V in small}
    for Qs in P.elements:
        if not en.issubspace(Qs):
            continue
        upper = set(P.up[Qs])
        Q0 = Qs.intersection(complement)
        if Q0.dim == 0:
            target = set(small_embedded)
        else:
            target = {V for V in small_embedded if Q0.issubspace(V) and V.dim > Q0.dim}
        fwd = {V: V.intersection(complement) for V in upper}
        bwd = {U: en + U for U in target}
        ok = set(fwd.values()) <= target and set(bwd.values()) <= upper
        ok = ok and all(bwd[fwd[V]] == V for V in upper) and all(fwd[bwd[U]] == U for U in target)
        ok = ok and all(fwd[V].issubspace(fwd[W]) for V in upper for W in upper if V.issubspace(W))
        ok = ok and all(bwd[U].issubspace(bwd[X]) for U in target for X in target if U.issubspace(X))
        if not ok:
            rep.isomorphism = False
            rep.witnesses.append({"lemma": "isomorphism", "Q": Qs})

    # f(V) = ⟨e_n⟩ + V: monotone, V ≤ f(V), f∘f = f, image coned at ⟨e_n⟩
    for V in P.elements:
        if not (P.le(V, f[V]) and f[f[V]] == f[V] and P.le(en, f[V])):
            rep.cone = False
            rep.witnesses.append({"lemma": "cone", "V": V})
        for U in P.up[V]:
            if not P.le(f[V], f[U]):
                rep.cone = False
                rep.witnesses.append({"lemma": "monotone", "V": V, "U": U})
    h = reduced_homology(P.order_complex())
    rep.homology = h.to_json()
    rep.contractible = h.vanishes()
    if not rep.contractible:
        rep.witnesses.append({"lemma": "contractible", "homology": h.to_json()})
    cert = cm_certificate(P, n - 1)
    rep.cm = cert.passed
    if not cert.passed:
        rep.witnesses.append({"lemma": "cm", "failure": cert.witness})
    return rep


def flag_chain(flags) -> Chain:
    """QFlagChain from pairs (flag, coefficient); flags must be strictly increasing."""
    out = Chain()
    for flag, c in flags:
        flag = tuple(flag)
        for a, b in zip(flag, flag[1:]):
            if not (a.dim < b.dim and a.issubspace(b)):
                raise ValueError("flag is not strictly increasing")
        out.add_simplex(flag, c)
    return out


def q_chain_boundary(c: Chain) -> Chain:
    return c.boundary()


def frame_complex(n: int, q: int, budget: int = DEFAULT_BUDGET):
    """Sets of lines of F_q^{2n} that are independent and pairwise ω-orthogonal."""
    from .topology import SimplicialComplex

    lines = enumerate_isotropic_Fq(n, q, 1, budget=budget)
    space = SymplecticSpace(n, GroundRing.finite_field(q))
    faces = []
    for k in range(1, n + 1):
        for combo in itertools.combinations(lines, k):
            reps = [L.rows[0] for L in combo]
            V = Subspace(reps, 2 * n, q)
            if V.dim == k and V.is_isotropic():
                faces.append(combo)
    if len(faces) > budget:
        raise BudgetExceeded(f"{len(faces)} frames exceed the budget {budget}")
    return SimplicialComplex(faces), space


def span_poset_map(n: int, q: int, budget: int = DEFAULT_BUDGET):
    """P(frames) → T^ω_n(F_q), Δ ↦ ⟨Δ⟩: the finite-field analog of the span map."""
    from .topology import PosetMap, face_poset

    K, _ = frame_complex(n, q, budget)
    P = face_poset(K)
    T = build_building("full", n, q, budget=budget).poset
    return PosetMap(P, T, lambda s: Subspace([L.rows[0] for L in s], 2 * n, q), strict=True)
