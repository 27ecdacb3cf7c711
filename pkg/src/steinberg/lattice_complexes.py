"""Simplicial complexes of lines in Z^{2(m+n)}: I, I^δ, I^{σ,δ}, IA, B and BA.

Vertices are canonical primitive vectors of sup-norm at most ``bound``. A set of
lines is a simplex of a kind when it classifies as one of the admitted species
and every facet is again a simplex; this keeps each instance a genuine
simplicial complex (the largest subcomplex made of admitted species).

In relative mode (m > 0) the frozen lines e_1, …, e_m are implicit: Δ is a
simplex iff Δ ∪ {e_1, …, e_m} is a simplex of the genus m+n complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .chains import face_tuple, vkey
from .errors import BudgetExceeded
from .linalg import hermite_normal_form, max_minors_gcd, saturate
from .symplectic import Line, Subspace, canonical_vector, symplectic_completion, _omega
from .topology import SimplicialComplex

STANDARD, TWO_ADDITIVE, SIGMA, MIXED, INVALID = "standard", "two_additive", "sigma", "mixed", "invalid"

KIND_TAGS = {
    "I": frozenset({STANDARD}),
    "Idelta": frozenset({STANDARD, TWO_ADDITIVE}),
    "Isigmadelta": frozenset({STANDARD, TWO_ADDITIVE, SIGMA}),
    "IA": frozenset({STANDARD, TWO_ADDITIVE, SIGMA, MIXED}),
    "B": frozenset({STANDARD}),
    "BA": frozenset({STANDARD, TWO_ADDITIVE}),
}
KIND_ALIASES = {
    "I^δ": "Idelta", "I^delta": "Idelta", "delta": "Idelta",
    "I^{σ,δ}": "Isigmadelta", "I^sigmadelta": "Isigmadelta", "sigmadelta": "Isigmadelta",
}

DEFAULT_VERTEX_BUDGET = 20_000
DEFAULT_SIMPLEX_BUDGET = 3_000_000


def normalize_kind(kind: str) -> str:
    kind = KIND_ALIASES.get(kind, kind)
    if kind not in KIND_TAGS:
        raise ValueError(f"unknown complex kind {kind!r}")
    return kind


@dataclass(frozen=True)
class ComplexSpec:
    kind: str
    m: int = 0
    n: int = 1
    bound: int = 1
    restrict_to_W: bool = False
    V: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", normalize_kind(self.kind))
        if self.m < 0 or self.n < 1 or self.bound < 1:
            raise ValueError("need m ≥ 0, n ≥ 1 and bound ≥ 1")
        if self.restrict_to_W and self.kind not in ("I", "Idelta"):
            raise ValueError("restrict_to_W is only defined for I and I^δ")
        if self.V is not None:
            if self.kind not in ("B", "BA"):
                raise ValueError("an ambient summand V is only used by B and BA")
            rows = saturate([tuple(map(int, r)) for r in self.V])
            if any(len(r) != 2 * self.genus for r in rows):
                raise ValueError("V must lie in Z^{2(m+n)}")
            if any(_omega(a, b) for a, b in itertools.combinations(rows, 2)):
                raise ValueError("V must be isotropic")
            object.__setattr__(self, "V", tuple(rows))
        elif self.kind in ("B", "BA"):
            raise ValueError("B and BA need an ambient summand V")

    @property
    def genus(self) -> int:
        return self.m + self.n

    @property
    def tags(self) -> frozenset:
        return KIND_TAGS[self.kind]

    def with_kind(self, kind: str) -> "ComplexSpec":
        return ComplexSpec(kind, self.m, self.n, self.bound, self.restrict_to_W, self.V)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m,
            "n": self.n,
            "bound": self.bound,
            "restrict_to_W": self.restrict_to_W,
            "V": [list(r) for r in self.V] if self.V is not None else None,
        }


def lagrangian_summand(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Z^{m+n} = ⟨e_1, …, e_{m+n}⟩ ∩ Z^{2(m+n)}."""
    N = 2 * (m + n)
    return tuple(tuple(int(j == 2 * i) for j in range(N)) for i in range(m + n))


@dataclass
class SimplexClass:
    tag: str
    witness: tuple = ()
    relation: tuple | None = None  # two_additive: (v0, s1, v1, s2, v2) with v0 = s1·v1 + s2·v2
    sigma_pair: tuple | None = None

    def to_json(self) -> dict:
        def rep(x):
            return list(x.rep) if isinstance(x, Line) else x

        return {
            "tag": self.tag,
            "witness": [rep(v) for v in self.witness],
            "relation": [rep(x) for x in self.relation] if self.relation else None,
            "sigma_pair": [rep(x) for x in self.sigma_pair] if self.sigma_pair else None,
        }


def _is_standard(vs: Sequence[tuple[int, ...]]) -> bool:
    if not vs:
        return True
    return _is_standard_sorted(tuple(sorted(vs)))


@lru_cache(maxsize=1 << 20)
def _is_standard_sorted(vs: tuple[tuple[int, ...], ...]) -> bool:
    for a, b in itertools.combinations(vs, 2):
        if _omega(a, b):
            return False
    return max_minors_gcd(vs) == 1


def _additive(v0, v1, v2):
    """Signs (s1, s2) with v0 = s1·v1 + s2·v2, or None."""
    for s2 in (1, -1):
        w = tuple(a + s2 * b for a, b in zip(v1, v2))
        if any(w) and canonical_vector(w) == v0:
            s1 = 1 if next(x for x in w if x) > 0 else -1
            # v0 = s1 * (v1 + s2 v2)
            return s1, s1 * s2
    return None


def classify_vectors(vs: Sequence[tuple[int, ...]]) -> SimplexClass:
    """Classify distinct canonical primitive vectors (sorted input gives deterministic witnesses)."""
    vs = sorted(set(tuple(v) for v in vs))
    k1 = len(vs)
    if k1 == 0:
        return SimplexClass(INVALID)
    if _is_standard(vs):
        return SimplexClass(STANDARD, tuple(vs))
    # candidates for the additive vertex v0 are tried longest first
    by_length = sorted(range(k1), key=lambda i: (-sum(abs(x) for x in vs[i]), vs[i]))
    # 2-additive: v0 = ±v1 ± v2 and Δ \ v0 standard
    for i0 in by_length:
        v0 = vs[i0]
        rest = vs[:i0] + vs[i0 + 1 :]
        if len(rest) < 2 or not _is_standard(rest):
            continue
        for a, b in itertools.combinations(rest, 2):
            signs = _additive(v0, a, b)
            if signs:
                others = [v for v in rest if v not in (a, b)]
                return SimplexClass(TWO_ADDITIVE, (v0, a, b, *others), relation=(v0, signs[0], a, signs[1], b))
    # σ: ω(v_k, v_{k−1}) = ±1, ω(v_k, v_i) = 0 otherwise, Δ \ v_k standard
    for ik in range(k1):
        vk = vs[ik]
        rest = vs[:ik] + vs[ik + 1 :]
        if not rest or not _is_standard(rest):
            continue
        pair = [abs(_omega(vk, r)) for r in rest]
        if sorted(pair)[-1] == 1 and pair.count(1) == 1 and all(x in (0, 1) for x in pair):
            p = rest[pair.index(1)]
            others = [v for v in rest if v != p]
            return SimplexClass(SIGMA, (*others, p, vk), sigma_pair=(p, vk))
    # mixed: Δ \ v_0 is σ and Δ \ v_k is 2-additive for one ordering v_0, …, v_k
    for i0, ik in ((i, j) for i in by_length for j in range(k1) if j != i):
        v0, vk = vs[i0], vs[ik]
        R = [v for j, v in enumerate(vs) if j not in (i0, ik)]
        if len(R) < 2 or not _is_standard(R):
            continue
        for p in R:
            if abs(_omega(vk, p)) != 1 or any(_omega(vk, r) for r in R if r != p):
                continue
            pool = R if len(R) == 2 else [r for r in R if r != p]
            for a, b in itertools.combinations(pool, 2):
                if len(R) == 2 and p == a:
                    a, b = b, a
                signs = _additive(v0, a, b)
                if signs:
                    mid = [r for r in R if r not in (a, b, p)]
                    order = (v0, a, b, *mid, p, vk) if p not in (a, b) else (v0, a, b, vk)
                    return SimplexClass(MIXED, order, relation=(v0, signs[0], a, signs[1], b), sigma_pair=(p, vk))
    return SimplexClass(INVALID, tuple(vs))


def _as_line(v) -> Line:
    return v if isinstance(v, Line) else Line.of(v)


def _lineify(cls: SimplexClass) -> SimplexClass:
    def conv(x):
        return Line(x) if isinstance(x, tuple) else x

    return SimplexClass(
        cls.tag,
        tuple(conv(v) for v in cls.witness),
        tuple(conv(x) for x in cls.relation) if cls.relation else None,
        tuple(conv(x) for x in cls.sigma_pair) if cls.sigma_pair else None,
    )


def frozen_lines(m: int, genus: int) -> list[Line]:
    N = 2 * genus
    return [Line(tuple(int(j == 2 * i) for j in range(N))) for i in range(m)]


def classify_simplex(simplex: Iterable, spec: ComplexSpec | None = None) -> SimplexClass:
    """Species of a set of lines; in relative mode the frozen e_i are added first."""
    lines = [_as_line(v) for v in simplex]
    if len(set(lines)) != len(lines):
        return SimplexClass(INVALID)
    reps = [L.rep for L in lines]
    if spec is not None and spec.m:
        N = 2 * spec.genus
        reps = reps + [L.rep for L in frozen_lines(spec.m, spec.genus)]
        if any(len(r) != N for r in reps) or len(set(reps)) != len(reps):
            return SimplexClass(INVALID)
    return _lineify(classify_vectors(reps))


class LatticeOracle:
    """Membership in a lattice complex without enumerating it."""

    def __init__(self, spec: ComplexSpec):
        self.spec = spec
        self.N = 2 * spec.genus
        self.frozen = tuple(L.rep for L in frozen_lines(spec.m, spec.genus))
        self._memo: dict[frozenset, bool] = {}
        self._tag: dict[frozenset, str] = {}
        self._V = Subspace(spec.V, self.N) if spec.V is not None else None

    def tag(self, reps: Iterable[tuple[int, ...]]) -> str:
        key = frozenset(reps)
        t = self._tag.get(key)
        if t is None:
            t = classify_vectors(list(key)).tag
            self._tag[key] = t
        return t

    def _admitted(self, key: frozenset) -> bool:
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        ok = self.tag(key) in self.spec.tags
        if ok and len(key) > 1:
            for v in key:
                if not self._admitted(key - {v}):
                    ok = False
                    break
        self._memo[key] = ok
        return ok

    def vertex_ok(self, rep: tuple[int, ...], check_bound: bool = True) -> bool:
        spec = self.spec
        if len(rep) != self.N:
            return False
        if check_bound and max(abs(x) for x in rep) > spec.bound:
            return False
        for i in range(spec.m):
            if rep[2 * i + 1] != 0:
                return False
        if spec.m and all(x == 0 for j, x in enumerate(rep) if j >= 2 * spec.m or j % 2):
            return False
        if spec.restrict_to_W and rep[-1] != 0:
            return False
        if self._V is not None and not self._V.contains_vector(rep):
            return False
        if spec.m:
            return self._admitted(frozenset((rep,) + self.frozen))
        return True

    def admits(self, simplex: Iterable, check_bound: bool = True) -> bool:
        reps = [_as_line(v).rep for v in simplex]
        if not reps or len(set(reps)) != len(reps):
            return False
        if not all(self.vertex_ok(r, check_bound) for r in reps):
            return False
        return self._admitted(frozenset(tuple(reps) + self.frozen))

    def simplex_tag(self, simplex: Iterable) -> str:
        reps = [_as_line(v).rep for v in simplex]
        return self.tag(tuple(reps) + self.frozen)


def bounded_lattice_vectors(basis: Sequence[Sequence[int]], bound: int) -> list[tuple[int, ...]]:
    """Nonzero vectors of the lattice spanned by ``basis`` with sup-norm ≤ bound."""
    H = hermite_normal_form(basis)
    if not H:
        return []
    N = len(H[0])
    pivots = [next(j for j, x in enumerate(r) if x) for r in H]
    out = []

    def rec(i, v):
        if i == len(H):
            if any(v) and max(abs(x) for x in v) <= bound:
                out.append(tuple(v))
            return
        row, p = H[i], pivots[i]
        piv = row[p]
        lo = -((bound + v[p]) // piv)
        hi = (bound - v[p]) // piv
        for c in range(lo, hi + 1):
            rec(i + 1, [a + c * b for a, b in zip(v, row)] if c else v)

    rec(0, [0] * N)
    return out


def candidate_vertices(spec: ComplexSpec) -> list[Line]:
    N = 2 * spec.genus
    basis = spec.V if spec.V is not None else [tuple(int(i == j) for j in range(N)) for i in range(N)]
    lines = set()
    for v in bounded_lattice_vectors(basis, spec.bound):
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 1 and next(x for x in v if x) > 0:
            lines.add(v)
    return [Line(v) for v in sorted(lines)]


@dataclass
class LatticeComplex:
    spec: ComplexSpec
    complex: SimplicialComplex
    tags: dict[tuple, str]
    sigma_edges: list[tuple]
    oracle: LatticeOracle = field(repr=False, default=None)

    @property
    def vertices(self) -> list[Line]:
        return self.complex.vertices()

    def simplices_with_tag(self, tag: str) -> list[tuple]:
        return sorted((s for s, t in self.tags.items() if t == tag), key=lambda s: (len(s), [vkey(v) for v in s]))

    def tag_counts(self) -> dict[str, dict[int, int]]:
        out: dict[str, dict[int, int]] = {}
        for s, t in self.tags.items():
            d = out.setdefault(t, {})
            d[len(s) - 1] = d.get(len(s) - 1, 0) + 1
        return {t: dict(sorted(v.items())) for t, v in sorted(out.items())}

    def subcomplex_of_kind(self, kind: str) -> SimplicialComplex:
        allowed = KIND_TAGS[normalize_kind(kind)]
        keep = [s for s, t in self.tags.items() if t in allowed]
        # faces of admitted simplices inherit admission because tags only shrink the species set
        sub = SimplicialComplex(keep, closed=True)
        if not sub.check_closed():
            sub = _largest_closed(keep)
        return sub


def _largest_closed(simplices: list[tuple]) -> SimplicialComplex:
    present = set(simplices)
    changed = True
    while changed:
        changed = False
        for s in sorted(present, key=len):
            if len(s) > 1 and any(s[:i] + s[i + 1 :] not in present for i in range(len(s))):
                present.discard(s)
                changed = True
    return SimplicialComplex(present, closed=True)


def build_lattice_complex(spec: ComplexSpec, vertex_budget: int = DEFAULT_VERTEX_BUDGET,
                          simplex_budget: int = DEFAULT_SIMPLEX_BUDGET) -> LatticeComplex:
    oracle = LatticeOracle(spec)
    verts = [L for L in candidate_vertices(spec) if oracle.vertex_ok(L.rep)]
    if len(verts) > vertex_budget:
        raise BudgetExceeded(f"{len(verts)} vertices exceed the budget {vertex_budget}")
    frozen = oracle.frozen
    tags: dict[tuple, str] = {}
    level = []
    for v in verts:
        s = (v,)
        tags[s] = oracle.simplex_tag(s)
        level.append(s)
    rank = {v: i for i, v in enumerate(verts)}
    nbrs: dict[Line, set] = {v: set() for v in verts}
    edges = []
    for a, b in itertools.combinations(verts, 2):
        key = frozenset((a.rep, b.rep) + frozen)
        if oracle._admitted(key):
            nbrs[a].add(b)
            nbrs[b].add(a)
            edges.append((a, b))
    for e in edges:
        tags[e] = oracle.tag((e[0].rep, e[1].rep) + frozen)
    level = edges
    total = len(tags)
    while level:
        present = set(level)
        nxt = []
        for s in level:
            common = set.intersection(*(nbrs[v] for v in s))
            last = rank[s[-1]]
            for u in sorted((u for u in common if rank[u] > last), key=rank.__getitem__):
                t = s + (u,)
                if any(t[:i] + t[i + 1 :] not in present for i in range(len(t) - 1)):
                    continue
                key = frozenset(tuple(v.rep for v in t) + frozen)
                if oracle._admitted(key):
                    nxt.append(t)
                    tags[t] = oracle.tag(key)
        total += len(nxt)
        if total > simplex_budget:
            raise BudgetExceeded(f"more than {simplex_budget} simplices")
        level = nxt
    # vertices are sorted by rep, which is the vkey order, so tuples are canonical
    K = SimplicialComplex(tags.keys(), closed=True)
    assert K.check_closed()
    sigma_edges = [e for e in K.simplices(1) if tags[e] == SIGMA]
    return LatticeComplex(spec, K, tags, sigma_edges, oracle)


@dataclass
class SigmaMixedReport:
    sigma_edge: dict[tuple, tuple]
    minimal_mixed: dict[tuple, tuple]
    violations: list[dict]

    @property
    def passed(self) -> bool:
        return not self.violations


def simplex_sigma_data(simplex: Iterable, spec: ComplexSpec | None = None):
    """σ edge (from the witness) and minimal mixed faces of a single σ or mixed set of lines."""
    lines = [_as_line(v) for v in simplex]
    cls = classify_simplex(lines, spec)
    if cls.tag not in (SIGMA, MIXED):
        return cls, None, []
    edge = face_tuple(cls.sigma_pair)
    minimal = []
    if cls.tag == MIXED:
        mixed_faces = [
            face_tuple(f)
            for k in range(2, len(lines) + 1)
            for f in itertools.combinations(lines, k)
            if classify_simplex(f, spec).tag == MIXED
        ]
        minimal = [f for f in mixed_faces if not any(set(g) < set(f) for g in mixed_faces)]
    return cls, edge, minimal


def sigma_edges_and_minimal_mixed(K: LatticeComplex) -> SigmaMixedReport:
    """Assign each σ / mixed simplex its σ edge and each mixed simplex its minimal mixed face."""
    if K.spec.kind != "IA":
        raise ValueError("needs an IA instance")
    sig, mins, bad = {}, {}, []
    sigma_set = set(K.sigma_edges)
    for s, t in K.tags.items():
        if t not in (SIGMA, MIXED):
            continue
        inside = [e for e in itertools.combinations(s, 2) if e in sigma_set]
        if len(inside) != 1:
            bad.append({"simplex": s, "problem": "sigma edge not unique", "edges": inside})
        else:
            sig[s] = inside[0]
        if t == MIXED:
            faces = [face_tuple(f) for k in range(2, len(s) + 1) for f in itertools.combinations(s, k)
                     if K.tags.get(face_tuple(f)) == MIXED]
            minimal = [f for f in faces if not any(set(g) < set(f) for g in faces)]
            if len(minimal) != 1:
                bad.append({"simplex": s, "problem": "minimal mixed face not unique", "faces": minimal})
            else:
                mins[s] = minimal[0]
    return SigmaMixedReport(sig, mins, bad)


def oriented_pair(edge: Sequence[Line]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Primitive (v, w) spanning the σ edge with ω(v, w) = 1."""
    a, b = edge
    v, w = a.rep, b.rep
    om = _omega(v, w)
    if abs(om) != 1:
        raise ValueError(f"{edge} is not a σ edge")
    if om == -1:
        w = tuple(-x for x in w)
    return v, w


def reduce_to_perp(S, u: Sequence[int]) -> tuple[int, ...]:
    """Coordinates in Δ^⊥ ≅ Z^{2(n−1)} of a vector u ∈ Δ^⊥, via S^{-1}."""
    x = S.inverse().apply(u)
    if x[-2] or x[-1]:
        raise ValueError(f"{u} is not in the complement")
    return x[:-2]


@dataclass
class LinkPerpReport:
    edge: tuple
    passed: bool
    vertex_match: bool
    simplex_match: bool
    link_f_vector: list[int]
    image_bound: int
    completion: object = None

    def to_json(self) -> dict:
        return {
            "edge": [list(v.rep) for v in self.edge],
            "passed": self.passed,
            "vertex_match": self.vertex_match,
            "simplex_match": self.simplex_match,
            "link_f_vector": self.link_f_vector,
            "image_bound": self.image_bound,
        }


def link_perp_identity(K: LatticeComplex, edge: Sequence[Line]) -> LinkPerpReport:
    """Compare Link_IA(Δ) with I^δ(Δ^⊥) after re-coordinatizing Δ^⊥ to genus n−1."""
    spec = K.spec
    if spec.kind != "IA" or spec.m:
        raise ValueError("needs an absolute IA instance")
    edge = face_tuple(edge)
    v, w = oriented_pair(edge)
    S = symplectic_completion(v, w)
    link = K.complex.link(edge)
    dperp = [u for u in K.vertices if _omega(u.rep, v) == 0 and _omega(u.rep, w) == 0]
    vertex_match = set(link.vertices()) == set(dperp)
    images = {u: Line.of(reduce_to_perp(S, u.rep)) for u in dperp}
    image_bound = max((L.norm for L in images.values()), default=0)
    simplex_match = True
    if spec.n == 1:
        simplex_match = link.dim == -1 and not dperp
    else:
        small = LatticeOracle(ComplexSpec("Idelta", 0, spec.n - 1, max(image_bound, 1)))
        # every link simplex must map to an I^δ simplex, and every I^δ simplex on the image vertices must come from one
        link_set = set(link.all_simplices())
        for s in link_set:
            if not small.admits([images[u] for u in s]):
                simplex_match = False
                break
        if simplex_match:
            todo = [(u,) for u in dperp]
            seen = set()
            while todo:
                s = todo.pop()
                for u in dperp:
                    if vkey(u) <= vkey(s[-1]):
                        continue
                    t = s + (u,)
                    if t in seen:
                        continue
                    seen.add(t)
                    if small.admits([images[x] for x in t]):
                        if t not in link_set:
                            simplex_match = False
                            todo = []
                            break
                        todo.append(t)
    return LinkPerpReport(edge, vertex_match and simplex_match, vertex_match, simplex_match,
                          link.f_vector(), image_bound, S)


@dataclass
class StarDecompositionReport:
    covers: bool
    disjoint: bool
    join_identity: bool
    star_acyclic: bool
    failures: list[dict]

    @property
    def passed(self) -> bool:
        return self.covers and self.disjoint and self.join_identity and self.star_acyclic


def star_decomposition(K: LatticeComplex, check_acyclic: bool = True) -> StarDecompositionReport:
    """IA = I^δ ∪ ⋃ Star(Δ), stars meet only inside I^δ, Star(Δ) ∩ I^δ = Link(Δ) ∗ ∂Δ."""
    from .topology import join, reduced_homology

    delta_tags = KIND_TAGS["Idelta"]
    sigma_set = set(K.sigma_edges)
    failures = []
    covers = disjoint = True
    maximal = K.complex.maximal_simplices()
    sig_in: dict[tuple, set] = {}
    for T in maximal:
        sig_in[T] = {e for e in itertools.combinations(T, 2) if e in sigma_set}
    # for Γ ∉ I^δ, the σ edges Δ with Γ ∪ Δ a simplex are those inside the maximal cofaces of Γ
    for s, t in K.tags.items():
        if t in delta_tags:
            continue
        owners = set()
        for T in K.complex.cofaces(s):
            if T in sig_in:
                owners |= sig_in[T]
        if not owners:
            covers = False
            failures.append({"simplex": s, "problem": "not in any star"})
        elif len(owners) > 1:
            disjoint = False
            failures.append({"simplex": s, "problem": "in several stars", "edges": sorted(owners)})
    Idelta = K.subcomplex_of_kind("Idelta")
    join_ok = acyclic = True
    for e in K.sigma_edges:
        star = K.complex.star(e)
        inter = star.intersection(Idelta)
        link = K.complex.link(e)
        boundary = SimplicialComplex([(e[0],), (e[1],)], closed=True)
        if inter != join(link, boundary):
            join_ok = False
            failures.append({"edge": e, "problem": "Star ∩ I^δ != Link ∗ ∂Δ"})
        if check_acyclic and not reduced_homology(star).vanishes():
            acyclic = False
            failures.append({"edge": e, "problem": "star not acyclic"})
    return StarDecompositionReport(covers, disjoint, join_ok, acyclic, failures)
