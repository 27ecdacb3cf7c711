"""Finite posets, simplicial complexes and exact integral homology.

"Spherical" and "connected" are certified homologically: a complex is called
homologically d-spherical when dim ≤ d, its reduced homology vanishes below
degree d and is free in degree d.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .chains import Chain, face_tuple, permutation_sign, vkey
from .linalg import SparseIntMatrix, elementary_divisors, integer_rank

HOMOLOGICAL = "homological"


class SimplicialComplex:
    """Finite simplicial complex; simplices are tuples sorted by :func:`vkey`."""

    def __init__(self, simplices: Iterable[Iterable[Hashable]] = (), closed: bool = False):
        faces: dict[int, set[tuple]] = {}
        pending = [face_tuple(s) for s in simplices]
        if closed:
            for s in pending:
                if s:
                    faces.setdefault(len(s) - 1, set()).add(s)
        else:
            seen: set[tuple] = set()
            for s in pending:
                if not s or s in seen:
                    continue
                for k in range(1, len(s) + 1):
                    for sub in itertools.combinations(s, k):
                        if sub not in seen:
                            seen.add(sub)
                            faces.setdefault(k - 1, set()).add(sub)
        self._faces = faces
        self._sorted: dict[int, list[tuple]] = {}
        self._by_vertex: dict | None = None

    @classmethod
    def from_maximal(cls, simplices: Iterable[Iterable[Hashable]]) -> "SimplicialComplex":
        return cls(simplices)

    def check_closed(self) -> bool:
        for k, fs in self._faces.items():
            if k == 0:
                continue
            lower = self._faces.get(k - 1, set())
            for s in fs:
                for i in range(len(s)):
                    if s[:i] + s[i + 1 :] not in lower:
                        return False
        return True

    @property
    def dim(self) -> int:
        return max(self._faces, default=-1)

    def simplices(self, k: int) -> list[tuple]:
        if k not in self._sorted:
            self._sorted[k] = sorted(self._faces.get(k, ()), key=lambda s: [vkey(v) for v in s])
        return self._sorted[k]

    def all_simplices(self) -> list[tuple]:
        return [s for k in range(self.dim + 1) for s in self.simplices(k)]

    def vertices(self) -> list:
        return [s[0] for s in self.simplices(0)]

    def f_vector(self) -> list[int]:
        return [len(self._faces.get(k, ())) for k in range(self.dim + 1)]

    def __len__(self) -> int:
        return sum(self.f_vector())

    def __contains__(self, simplex) -> bool:
        s = face_tuple(simplex)
        return s in self._faces.get(len(s) - 1, ())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return {k: v for k, v in self._faces.items() if v} == {k: v for k, v in other._faces.items() if v}

    def issubcomplex(self, other: "SimplicialComplex") -> bool:
        return all(s in other._faces.get(k, ()) for k, fs in self._faces.items() for s in fs)

    def maximal_simplices(self) -> list[tuple]:
        out = []
        for k in range(self.dim, -1, -1):
            higher = self._faces.get(k + 1, set())
            covered = set()
            for s in higher:
                for i in range(len(s)):
                    covered.add(s[:i] + s[i + 1 :])
            out.extend(s for s in self.simplices(k) if s not in covered)
        return sorted(out, key=lambda s: (len(s), [vkey(v) for v in s]))

    def _index(self):
        if self._by_vertex is None:
            idx: dict = {}
            for fs in self._faces.values():
                for s in fs:
                    for v in s:
                        idx.setdefault(v, []).append(s)
            self._by_vertex = idx
        return self._by_vertex

    def cofaces(self, simplex) -> list[tuple]:
        """All simplices containing ``simplex``."""
        s = face_tuple(simplex)
        if not s:
            return self.all_simplices()
        pool = self._index().get(s[0], [])
        ss = set(s)
        return [t for t in pool if ss.issubset(t)]

    def link(self, simplex) -> "SimplicialComplex":
        s = face_tuple(simplex)
        if s and s not in self:
            raise ValueError(f"{s} is not a simplex")
        ss = set(s)
        return SimplicialComplex((tuple(v for v in t if v not in ss) for t in self.cofaces(s)), closed=True)

    def star(self, simplex) -> "SimplicialComplex":
        s = face_tuple(simplex)
        if s and s not in self:
            raise ValueError(f"{s} is not a simplex")
        out = set()
        for t in self.cofaces(s):
            for k in range(1, len(t) + 1):
                out.update(itertools.combinations(t, k))
        return SimplicialComplex(out, closed=True)

    def full_subcomplex(self, vertices: Iterable) -> "SimplicialComplex":
        vs = set(vertices)
        return SimplicialComplex(
            (s for fs in self._faces.values() for s in fs if vs.issuperset(s)), closed=True
        )

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex((s for d, fs in self._faces.items() if d <= k for s in fs), closed=True)

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(itertools.chain(self.all_simplices(), other.all_simplices()), closed=True)

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(
            (s for k, fs in self._faces.items() for s in fs if s in other._faces.get(k, ())), closed=True
        )

    def chain_complex(self, relative_to: "SimplicialComplex | None" = None) -> "ChainComplexZ":
        return ChainComplexZ(self, relative_to)

    def to_json(self) -> dict:
        return {
            "vertices": [_vertex_json(v) for v in self.vertices()],
            "maximal_simplices": [[_vertex_json(v) for v in s] for s in self.maximal_simplices()],
        }

    def __repr__(self) -> str:
        return f"SimplicialComplex(f={self.f_vector()})"


def _vertex_json(v):
    from .symplectic import Line, Subspace

    if isinstance(v, Line):
        return list(v.rep)
    if isinstance(v, Subspace):
        return [[str(x) for x in r] for r in v.rows]
    if isinstance(v, (tuple, frozenset)):
        return [_vertex_json(x) for x in v]
    return v


class ChainComplexZ:
    """Simplicial chain complex over Z with augmentation (reduced), or of a pair."""

    def __init__(self, K: SimplicialComplex, L: SimplicialComplex | None = None, check: bool = True):
        self.relative = L is not None
        top = K.dim
        self.bases: dict[int, list[tuple]] = {}
        for k in range(top + 1):
            basis = K.simplices(k)
            if L is not None:
                lk = L._faces.get(k, set())
                basis = [s for s in basis if s not in lk]
            self.bases[k] = basis
        if L is None:
            self.bases[-1] = [()]
        else:
            self.bases[-1] = []
        self.index = {k: {s: i for i, s in enumerate(b)} for k, b in self.bases.items()}
        self.boundaries: dict[int, SparseIntMatrix] = {}
        for k in range(0, top + 1):
            lower = self.index[k - 1]
            cols = {}
            for j, s in enumerate(self.bases[k]):
                col = {}
                for i in range(len(s)):
                    r = lower.get(s[:i] + s[i + 1 :])
                    if r is not None:
                        col[r] = col.get(r, 0) + (1 if i % 2 == 0 else -1)
                cols[j] = col
            self.boundaries[k] = SparseIntMatrix(len(self.bases[k - 1]), len(self.bases[k]), cols)
        self.top = top
        if check:
            for k in range(1, top + 1):
                if not self.boundaries[k - 1].compose(self.boundaries[k]).is_zero():
                    raise AssertionError(f"∂∂ != 0 in degree {k}")

    def boundary_matrix(self, k: int) -> SparseIntMatrix:
        if k in self.boundaries:
            return self.boundaries[k]
        return SparseIntMatrix(len(self.bases.get(k - 1, [])), len(self.bases.get(k, [])))

    def rank(self, k: int) -> int:
        return len(self.bases.get(k, []))

    def vector(self, chain: Chain, k: int) -> dict[int, int]:
        """Coordinates of a degree-k chain; simplices of the subcomplex are dropped."""
        idx = self.index.get(k, {})
        out = {}
        for s, c in chain.terms.items():
            if len(s) - 1 != k:
                raise ValueError(f"chain term {s} is not of degree {k}")
            i = idx.get(s)
            if i is None:
                if not self.relative:
                    raise KeyError(f"{s} is not a {k}-simplex")
                continue
            out[i] = out.get(i, 0) + c
        return {i: c for i, c in out.items() if c}

    def homology(self) -> "HomologyReport":
        lo = -1 if not self.relative else 0
        divs = {k: elementary_divisors(self.boundary_matrix(k)) for k in range(lo, self.top + 2)}
        betti, torsion = {}, {}
        for k in range(lo, self.top + 1):
            rk = len(divs.get(k, [])) if k >= 0 else 0
            rk1 = len(divs.get(k + 1, []))
            betti[k] = self.rank(k) - rk - rk1
            torsion[k] = [d for d in divs.get(k + 1, []) if d > 1]
        counts = {k: self.rank(k) for k in range(lo, self.top + 1)}
        return HomologyReport(betti, torsion, counts, reduced=not self.relative)


@dataclass
class HomologyReport:
    betti: dict[int, int]
    torsion: dict[int, list[int]]
    cell_counts: dict[int, int] = field(default_factory=dict)
    reduced: bool = True
    certification_level: str = "exact"

    def __post_init__(self):
        lhs = sum((-1) ** k * b for k, b in self.betti.items())
        rhs = sum((-1) ** k * c for k, c in self.cell_counts.items())
        if self.cell_counts and lhs != rhs:
            raise AssertionError(f"Euler characteristic mismatch: {lhs} != {rhs}")

    def b(self, k: int) -> int:
        return self.betti.get(k, 0)

    def t(self, k: int) -> list[int]:
        return self.torsion.get(k, [])

    def is_free(self) -> bool:
        return not any(self.torsion.values())

    def vanishes(self) -> bool:
        return self.is_free() and not any(self.betti.values())

    def vanishes_through(self, k: int) -> bool:
        return all(self.b(i) == 0 and not self.t(i) for i in self.betti if i <= k)

    def concentrated_in(self, d: int) -> bool:
        return all((b == 0 or i == d) for i, b in self.betti.items()) and self.is_free()

    def to_json(self) -> dict:
        return {
            "reduced": self.reduced,
            "betti": {str(k): v for k, v in sorted(self.betti.items())},
            "torsion": {str(k): v for k, v in sorted(self.torsion.items()) if v},
        }


def reduced_homology(K: SimplicialComplex) -> HomologyReport:
    return ChainComplexZ(K).homology()


def relative_homology(K: SimplicialComplex, L: SimplicialComplex) -> HomologyReport:
    if not L.issubcomplex(K):
        raise ValueError("L is not a subcomplex of K")
    return ChainComplexZ(K, L).homology()


def is_spherical(K: SimplicialComplex, d: int, report: HomologyReport | None = None) -> bool:
    """Homologically d-spherical: dim ≤ d, H̃_i = 0 for i < d, H̃_d free."""
    if K.dim > d:
        return False
    h = report or reduced_homology(K)
    return all(h.b(i) == 0 for i in h.betti if i < d) and not any(h.t(i) for i in h.betti if i <= d)


def is_connected_through(K: SimplicialComplex, k: int, report: HomologyReport | None = None) -> bool:
    """Homological k-connectivity: H̃_i(K) = 0 for i ≤ k (k = −1 means nonempty)."""
    if k < -1:
        return True
    h = report or reduced_homology(K)
    return h.vanishes_through(k)


def is_homology_basis(cycles: Sequence[Chain], C: ChainComplexZ, k: int) -> bool:
    """True iff the classes of ``cycles`` form a Z-basis of H_k (which must be free)."""
    vecs = [C.vector(z, k) for z in cycles]
    dk = C.boundary_matrix(k)
    for v in vecs:
        if dk.matvec(v):
            return False
    nk = C.rank(k)
    z_rank = nk - integer_rank(dk)
    b_div = elementary_divisors(C.boundary_matrix(k + 1))
    if any(d > 1 for d in b_div):
        return False
    h_rank = z_rank - len(b_div)
    if len(vecs) != h_rank:
        return False
    # boundaries together with the cycles must span the saturated lattice Z_k
    bnd = C.boundary_matrix(k + 1)
    cols = dict(bnd.cols)
    off = bnd.ncols
    for j, v in enumerate(vecs):
        cols[off + j] = v
    M = SparseIntMatrix(nk, off + len(vecs), cols)
    div = elementary_divisors(M)
    return len(div) == z_rank and all(d == 1 for d in div)


class Poset:
    """Finite poset given by a strict order; elements are sorted by :func:`vkey`."""

    def __init__(self, elements: Iterable, lt: Callable | None = None, relations: Iterable | None = None):
        elems = sorted(set(elements), key=vkey)
        self.elements = elems
        up: dict = {x: set() for x in elems}
        if lt is not None:
            for x in elems:
                for y in elems:
                    if x != y and lt(x, y):
                        up[x].add(y)
        if relations is not None:
            for x, y in relations:
                up[x].add(y)
            changed = True
            while changed:
                changed = False
                for x in elems:
                    extra = set()
                    for y in up[x]:
                        extra |= up[y]
                    if not extra <= up[x]:
                        up[x] |= extra
                        changed = True
        for x in elems:
            if x in up[x]:
                raise ValueError(f"relation is not irreflexive at {x!r}")
        self.up = {x: frozenset(s) for x, s in up.items()}
        down: dict = {x: set() for x in elems}
        for x, ys in self.up.items():
            for y in ys:
                down[y].add(x)
        self.down = {x: frozenset(s) for x, s in down.items()}
        self._height: dict | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.up

    def lt(self, x, y) -> bool:
        return y in self.up[x]

    def le(self, x, y) -> bool:
        return x == y or y in self.up[x]

    def check_transitive(self) -> bool:
        return all(self.up[y] <= self.up[x] for x in self.elements for y in self.up[x])

    def height(self, x) -> int:
        if self._height is None:
            h: dict = {}
            for y in sorted(self.elements, key=lambda e: len(self.down[e])):
                h[y] = 1 + max((h[z] for z in self.down[y]), default=-1)
            self._height = h
        return self._height[x]

    def dimension(self) -> int:
        return max((self.height(x) for x in self.elements), default=-1)

    def cover_relations(self) -> list[tuple]:
        out = []
        for x in self.elements:
            for y in self.up[x]:
                if not any(y in self.up[z] for z in self.up[x]):
                    out.append((x, y))
        return sorted(out, key=lambda p: (vkey(p[0]), vkey(p[1])))

    def subposet(self, elems: Iterable) -> "Poset":
        keep = set(elems)
        P = Poset.__new__(Poset)
        P.elements = [x for x in self.elements if x in keep]
        P.up = {x: self.up[x] & keep for x in P.elements}
        P.down = {x: self.down[x] & keep for x in P.elements}
        P._height = None
        return P

    def lower(self, x) -> "Poset":
        return self.subposet(self.down[x])

    def upper(self, x) -> "Poset":
        return self.subposet(self.up[x])

    def interval(self, x, y) -> "Poset":
        return self.subposet(self.up[x] & self.down[y])

    def chains(self) -> list[tuple]:
        out = []
        rank = {x: i for i, x in enumerate(self.elements)}

        def extend(chain):
            out.append(tuple(chain))
            last = chain[-1]
            for y in sorted(self.up[last], key=rank.__getitem__):
                chain.append(y)
                extend(chain)
                chain.pop()

        for x in self.elements:
            extend([x])
        return out

    def order_complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.chains(), closed=True)


def order_complex(P: Poset) -> SimplicialComplex:
    return P.order_complex()


def face_poset(K: SimplicialComplex) -> Poset:
    """Poset of nonempty simplices of K ordered by inclusion (elements are tuples)."""
    simplices = K.all_simplices()
    rel = []
    present = set(simplices)
    for s in simplices:
        for i in range(len(s)):
            f = s[:i] + s[i + 1 :]
            if f in present:
                rel.append((f, s))
    return Poset(simplices, relations=rel)


def link_star(K: SimplicialComplex, simplex) -> tuple[SimplicialComplex, SimplicialComplex]:
    return K.link(simplex), K.star(simplex)


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    if set(K.vertices()) & set(L.vertices()):
        raise ValueError("join of complexes with common vertices")
    km = K.maximal_simplices() or [()]
    lm = L.maximal_simplices() or [()]
    return SimplicialComplex(a + b for a in km for b in lm)


def join_suspend(K: SimplicialComplex, L: SimplicialComplex):
    """The join K ∗ L and, when L is two points {a < b}, the chain map z ↦ z∗a − z∗b."""
    J = join(K, L)
    sigma = None
    if L.dim == 0 and len(L.vertices()) == 2:
        from .chains import suspend

        a, b = L.vertices()

        def sigma(z: Chain) -> Chain:
            return suspend(z, a, b)

    return J, sigma


def barycentric(chain: Chain) -> Chain:
    """b([v_0..v_k]) = Σ_π sgn(π) [F_0^π ⊂ … ⊂ F_k^π], F_i^π = {v_π(0), …, v_π(i)}."""
    out = Chain()
    for key, c in chain.terms.items():
        k = len(key)
        for perm in itertools.permutations(range(k)):
            sign = permutation_sign(list(perm))
            flag = tuple(face_tuple(key[perm[j]] for j in range(i + 1)) for i in range(k))
            out.add_simplex(flag, sign * c)
    return out


def barycentric_chain_map(K: SimplicialComplex):
    """Barycentric subdivision (order complex of the face poset) and b."""
    return face_poset(K).order_complex(), barycentric


@dataclass
class CMCertificate:
    passed: bool
    dimension: int
    failures: list[dict] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)
    certification_level: str = HOMOLOGICAL

    @property
    def witness(self):
        return self.failures[0] if self.failures else None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "dimension": self.dimension,
            "checked": self.checked,
            "failures": [{k: str(v) for k, v in f.items()} for f in self.failures[:20]],
            "certification_level": self.certification_level,
        }


def cm_certificate(P: Poset, d: int, max_failures: int = 10) -> CMCertificate:
    """Check P is Cohen–Macaulay of dimension d via spherical lower links, upper links and intervals."""
    failures: list[dict] = []
    checked = {"whole": 0, "lower": 0, "upper": 0, "interval": 0}

    def need(sub: Poset, deg: int, what: str, where):
        K = sub.order_complex()
        checked[what] += 1
        if not is_spherical(K, deg):
            h = reduced_homology(K)
            failures.append({"part": what, "at": where, "expected_dimension": deg, "homology": h.to_json()})

    need(P, d, "whole", "P")
    for x in P.elements:
        if len(failures) >= max_failures:
            break
        hx = P.height(x)
        need(P.lower(x), hx - 1, "lower", x)
        need(P.upper(x), d - hx - 1, "upper", x)
        for y in sorted(P.up[x], key=vkey):
            need(P.interval(x, y), P.height(y) - hx - 2, "interval", (x, y))
    return CMCertificate(not failures, d, failures, checked)


class PosetMap:
    def __init__(self, source: Poset, target: Poset, assignment: Callable | dict, strict: bool = False):
        self.source = source
        self.target = target
        f = assignment if callable(assignment) else assignment.__getitem__
        self.values = {x: f(x) for x in source.elements}
        for x in source.elements:
            if self.values[x] not in target:
                raise ValueError(f"image of {x!r} is not in the target")
        self.strict = strict
        for x in source.elements:
            for y in source.up[x]:
                fx, fy = self.values[x], self.values[y]
                ok = target.lt(fx, fy) if strict else target.le(fx, fy)
                if not ok:
                    raise ValueError(f"map is not {'strictly ' if strict else ''}increasing at {x!r} < {y!r}")

    def __call__(self, x):
        return self.values[x]

    def fiber_below(self, y) -> Poset:
        return self.source.subposet(x for x, fx in self.values.items() if self.target.le(fx, y))


@dataclass
class HypothesisReport:
    mode: str
    passed: bool
    failures: list[dict] = field(default_factory=list)
    checked: int = 0
    certification_level: str = HOMOLOGICAL

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "passed": self.passed,
            "checked": self.checked,
            "failures": [{k: str(v) for k, v in f.items()} for f in self.failures[:20]],
            "certification_level": self.certification_level,
        }


def quillen_vdkl_check(f: PosetMap, mode: str = "quillen", d: int | None = None,
                       theta: int | None = None, t: Callable | dict | None = None) -> HypothesisReport:
    """Check the hypotheses of Quillen's fiber theorem or of the van der Kallen–Looijenga criterion."""
    Y = f.target
    failures: list[dict] = []
    checked = 0
    if mode == "quillen":
        if d is None:
            raise ValueError("quillen mode needs the dimension d")
        if not f.strict:
            raise ValueError("quillen mode needs a strictly increasing map")
        cert = cm_certificate(Y, d)
        checked += 1
        if not cert.passed:
            failures.append({"hypothesis": "target CM", "at": "Y", "detail": cert.witness})
        for y in Y.elements:
            fib = f.fiber_below(y)
            c = cm_certificate(fib, Y.height(y))
            checked += 1
            if not c.passed:
                failures.append({"hypothesis": "fiber CM", "at": y, "detail": c.witness})
    elif mode == "vdkl":
        if theta is None or t is None:
            raise ValueError("vdkl mode needs theta and t")
        tf = t if callable(t) else t.__getitem__
        tv = {y: tf(y) for y in Y.elements}
        for y in Y.elements:
            if any(tv[z] >= tv[y] for z in Y.down[y]):
                raise ValueError(f"t is not increasing below {y!r}")
        for y in Y.elements:
            checked += 2
            fib = f.fiber_below(y).order_complex()
            if not is_connected_through(fib, tv[y] - 2):
                failures.append({"hypothesis": "fiber connectivity", "at": y, "required": tv[y] - 2})
            up = Y.upper(y).order_complex()
            if not is_connected_through(up, theta - tv[y] - 1):
                failures.append({"hypothesis": "upper link connectivity", "at": y, "required": theta - tv[y] - 1})
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return HypothesisReport(mode, not failures, failures, checked)


def _free_reduce(word: list[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    while len(out) >= 2 and out[0][0] == out[-1][0] and out[0][1] == -out[-1][1]:
        out = out[1:-1]
    return out


def fundamental_group_attempt(K: SimplicialComplex, max_rounds: int = 10_000, max_length: int = 200) -> str:
    """Try to prove π_1(K) = 1 by Tietze moves on the edge-path presentation.

    Returns "proven" or "inconclusive" ("disconnected" for a disconnected K).
    """
    verts = K.vertices()
    if not verts:
        return "inconclusive"
    adj: dict = {v: [] for v in verts}
    for a, b in K.simplices(1):
        adj[a].append(b)
        adj[b].append(a)
    root = verts[0]
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u], key=vkey):
            if w not in seen:
                seen.add(w)
                tree.add(face_tuple((u, w)))
                queue.append(w)
    if len(seen) != len(verts):
        return "disconnected"
    gens = {e: i for i, e in enumerate(e for e in K.simplices(1) if e not in tree)}

    def letter(a, b):
        e = face_tuple((a, b))
        if e in tree:
            return []
        return [(gens[e], 1 if e == (a, b) else -1)]

    relators = []
    for a, b, c in K.simplices(2):
        w = _free_reduce(letter(a, b) + letter(b, c) + letter(c, a))
        if w:
            relators.append(w)
    alive = set(gens.values())
    for _ in range(max_rounds):
        if not alive:
            return "proven"
        relators = [r for r in (_free_reduce(r) for r in relators) if r]
        target = None
        for idx, r in enumerate(relators):
            counts: dict[int, int] = {}
            for g, _e in r:
                counts[g] = counts.get(g, 0) + 1
            single = [g for g, c in counts.items() if c == 1]
            if single:
                target = (idx, single[0])
                break
        if target is None:
            return "inconclusive"
        idx, g = target
        r = relators.pop(idx)
        pos = next(i for i, (h, _e) in enumerate(r) if h == g)
        e = r[pos][1]
        # r = u g^e v = 1  =>  g^e = u^{-1} v^{-1}, i.e. g = (v u)^{-e}
        rest = r[pos + 1 :] + r[:pos]
        repl = rest if e == -1 else [(h, -x) for h, x in reversed(rest)]
        new = []
        for s in relators:
            w = []
            for h, x in s:
                if h == g:
                    w.extend(repl if x == 1 else [(hh, -xx) for hh, xx in reversed(repl)])
                else:
                    w.append((h, x))
            if len(w) > max_length:
                return "inconclusive"
            new.append(w)
        relators = new
        alive.discard(g)
    return "inconclusive"


def _unimodular_inverse(R: list[list[int]]) -> list[list[int]]:
    from fractions import Fraction

    n = len(R)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(R)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c])
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c]
        A[c] = [x / inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    out = [[x for x in row[n:]] for row in A]
    if any(x.denominator != 1 for row in out for x in row):
        raise ArithmeticError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def homology_basis(C: ChainComplexZ, k: int) -> list[Chain]:
    """Cycles whose classes form a basis of the free part of H_k."""
    from .linalg import _snf_dense, integer_kernel_basis

    nk = C.rank(k)
    if nk == 0:
        return []
    Z = integer_kernel_basis(C.boundary_matrix(k).to_dense())
    if not Z:
        return []
    pivots = [next(j for j, x in enumerate(z) if x) for z in Z]
    bnd = C.boundary_matrix(k + 1)
    coords = []
    for j in range(bnd.ncols):
        b = [0] * nk
        for i, v in bnd.cols.get(j, {}).items():
            b[i] = v
        a = []
        for z, p in zip(Z, pivots):
            q, r = divmod(b[p], z[p])
            if r:
                raise ArithmeticError("boundary outside the cycle lattice")
            a.append(q)
            if q:
                b = [x - q * y for x, y in zip(b, z)]
        if any(b):
            raise ArithmeticError("boundary outside the cycle lattice")
        coords.append(a)
    r = len(Z)
    if coords:
        diag, _, Rm = _snf_dense(coords, track=True)
        rank = len(diag)
    else:
        Rm, rank = [[int(i == j) for j in range(r)] for i in range(r)], 0
    Rinv = _unimodular_inverse(Rm)
    out = []
    basis = C.bases[k]
    for i in range(rank, r):
        vec = [sum(Rinv[i][l] * Z[l][t] for l in range(r)) for t in range(nk)]
        out.append(Chain({basis[t]: c for t, c in enumerate(vec) if c}))
    return out
