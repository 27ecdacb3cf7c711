"""The symplectic module (Z^{2n}, ω) and its rational / finite-field variants.

Coordinates follow the basis order e_1, f_1, ..., e_n, f_n, so coordinate
``2(a-1)`` is the e_a-coordinate, ``2a-1`` the f_a-coordinate. Column ``j`` of a
symplectic matrix is indexed by the j-th element of 1 < 1̄ < 2 < 2̄ < ...
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, MalformedMatrixError
from .linalg import (
    IntMatrix,
    field_rank_kernel,
    hermite_normal_form,
    is_prime,
    rref,
    saturate,
    xgcd,
)


@dataclass(frozen=True)
class GroundRing:
    kind: str  # "integers", "rationals" or "finite_field"
    p: int = 0

    def __post_init__(self):
        if self.kind == "finite_field":
            if not is_prime(self.p):
                raise ValueError(f"F_{self.p}: modulus must be prime")
        elif self.kind in ("integers", "rationals"):
            if self.p:
                raise ValueError("characteristic-zero rings carry p = 0")
        else:
            raise ValueError(f"unknown ground ring {self.kind!r}")

    @classmethod
    def finite_field(cls, p: int) -> "GroundRing":
        return cls("finite_field", p)

    def __str__(self) -> str:
        return {"integers": "Z", "rationals": "Q"}.get(self.kind, f"F_{self.p}")


INTEGERS = GroundRing("integers")
RATIONALS = GroundRing("rationals")


def ground_for(p: int) -> GroundRing:
    return GroundRing.finite_field(p) if p else INTEGERS


@dataclass(frozen=True)
class SymplecticSpace:
    n: int
    ground: GroundRing = INTEGERS

    @property
    def p(self) -> int:
        return self.ground.p

    @property
    def dim(self) -> int:
        return 2 * self.n

    def gram(self) -> IntMatrix:
        return gram_matrix(self.n)

    def omega(self, u: Sequence[int], v: Sequence[int]):
        return omega_eval(u, v, self)

    def basis_vector(self, index: int) -> tuple[int, ...]:
        return tuple(int(i == index) for i in range(self.dim))

    def e(self, a: int) -> tuple[int, ...]:
        return self.basis_vector(2 * (a - 1))

    def f(self, a: int) -> tuple[int, ...]:
        return self.basis_vector(2 * a - 1)


def gram_matrix(n: int) -> IntMatrix:
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[2 * i][2 * i + 1] = 1
        rows[2 * i + 1][2 * i] = -1
    return IntMatrix(rows, 2 * n)


def _omega(u: Sequence, v: Sequence):
    return sum(u[i] * v[i + 1] - u[i + 1] * v[i] for i in range(0, len(u), 2))


def omega_eval(u: Sequence, v: Sequence, space: SymplecticSpace | None = None):
    if len(u) != len(v) or len(u) % 2:
        raise ValueError(f"vectors of lengths {len(u)} and {len(v)} are not in one symplectic space")
    if space is not None and len(u) != space.dim:
        raise ValueError(f"expected vectors of length {space.dim}")
    val = _omega(u, v)
    if space is not None and space.p:
        return val % space.p
    return val


def _as_rows(M) -> tuple[tuple[int, ...], ...]:
    if isinstance(M, IntMatrix):
        return M.rows()
    if isinstance(M, SpElement):
        return M.matrix.rows()
    return tuple(tuple(int(x) for x in r) for r in M)


def is_symplectic(M, space: SymplecticSpace) -> bool:
    """True iff ``Mᵀ J M == J`` exactly (mod p over F_p)."""
    rows = _as_rows(M)
    N = space.dim
    if len(rows) != N or any(len(r) != N for r in rows):
        raise ValueError(f"expected a {N}x{N} matrix")
    cols = list(zip(*rows))
    p = space.p
    for a in range(N):
        for b in range(a, N):
            val = _omega(cols[a], cols[b])
            want = 1 if (a % 2 == 0 and b == a + 1) else 0
            if p:
                val %= p
            if val != want:
                return False
    return True


def canonical_vector(v: Sequence[int], p: int = 0) -> tuple[int, ...]:
    """Canonical spanning vector of ⟨v⟩: primitive with positive lead over Z, lead 1 over F_p."""
    if p:
        v = [x % p for x in v]
        lead = next((x for x in v if x), 0)
        if not lead:
            raise ValueError("zero vector spans no line")
        inv = pow(lead, -1, p)
        return tuple((x * inv) % p for x in v)
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector spans no line")
    lead = next(x for x in v if x)
    if lead < 0:
        g = -g
    return tuple(int(x) // g for x in v)


@dataclass(frozen=True, order=True)
class Line:
    """A rank-1 summand of Z^{2n} (or a line of F_p^{2n}) with its canonical spanning vector."""

    rep: tuple[int, ...]
    p: int = 0

    @classmethod
    def of(cls, v: Sequence[int], p: int = 0) -> "Line":
        return cls(canonical_vector(v, p), p)

    def __post_init__(self):
        if canonical_vector(self.rep, self.p) != tuple(self.rep):
            raise ValueError(f"{self.rep} is not a canonical line representative")

    @property
    def norm(self) -> int:
        return max(abs(x) for x in self.rep)

    def to_subspace(self) -> "Subspace":
        return Subspace.span([self.rep], self.p)

    def __repr__(self) -> str:
        return f"<{','.join(map(str, self.rep))}>"


class Subspace:
    """A subspace of Q^N or F_p^N stored by its reduced row echelon basis."""

    __slots__ = ("p", "ambient", "rows", "pivots", "_hash")

    def __init__(self, rows: Iterable[Sequence], ambient: int, p: int = 0):
        R, piv = rref([list(r) for r in rows], p) if rows else ([], [])
        if not p:
            R = [[Fraction(x) for x in r] for r in R]
        self.p = p
        self.ambient = ambient
        self.rows = tuple(tuple(r) for r in R)
        self.pivots = tuple(piv)
        self._hash = hash((p, ambient, self.rows))

    @classmethod
    def span(cls, vectors: Iterable[Sequence], p: int = 0, ambient: int | None = None) -> "Subspace":
        vectors = [tuple(v) for v in vectors]
        if ambient is None:
            if not vectors:
                raise ValueError("ambient dimension needed for the zero subspace")
            ambient = len(vectors[0])
        return cls(vectors, ambient, p)

    @classmethod
    def whole(cls, ambient: int, p: int = 0) -> "Subspace":
        return cls([tuple(int(i == j) for j in range(ambient)) for i in range(ambient)], ambient, p)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def sort_key(self):
        return (self.dim, self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.p == other.p and self.ambient == other.ambient and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        def fmt(x):
            return str(x)

        body = ";".join(",".join(fmt(x) for x in r) for r in self.rows)
        return f"Subspace[{'F_%d' % self.p if self.p else 'Q'}]({body})"

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise ValueError("vector length mismatch")
        p = self.p
        w = [x % p for x in v] if p else [Fraction(x) for x in v]
        for row, c in zip(self.rows, self.pivots):
            f = w[c]
            if f:
                if p:
                    w = [(a - f * b) % p for a, b in zip(w, row)]
                else:
                    w = [a - f * b for a, b in zip(w, row)]
        return not any(w)

    def issubspace(self, other: "Subspace") -> bool:
        """``self ⊆ other``."""
        if self.dim > other.dim:
            return False
        return all(other.contains_vector(r) for r in self.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.rows + other.rows, self.ambient, self.p)

    def integral_rows(self) -> list[tuple[int, ...]]:
        """Rows scaled to primitive integer vectors (char 0) or residues (char p)."""
        if self.p:
            return [tuple(r) for r in self.rows]
        out = []
        for r in self.rows:
            den = 1
            for x in r:
                den = den * x.denominator // gcd(den, x.denominator)
            out.append(canonical_vector([int(x * den) for x in r]))
        return out

    def intersection(self, other: "Subspace") -> "Subspace":
        # x = a·A = b·B  <=>  (a, -b) in the left kernel of [A; B]
        A, B = self.integral_rows(), other.integral_rows()
        if not A or not B:
            return Subspace([], self.ambient, self.p)
        stacked = [list(r) for r in A] + [list(r) for r in B]
        cols = list(zip(*stacked))
        _, ker = field_rank_kernel(cols, self.p or "Q")
        vecs = []
        for k in ker:
            v = [0] * self.ambient
            for coeff, r in zip(k[: len(A)], A):
                if coeff:
                    v = [x + coeff * y for x, y in zip(v, r)]
            vecs.append(v)
        return Subspace(vecs, self.ambient, self.p)

    def apply(self, M) -> "Subspace":
        """Image under the matrix ``M`` acting on column vectors."""
        rows = _as_rows(M)
        imgs = []
        for r in self.integral_rows():
            imgs.append(tuple(sum(a * x for a, x in zip(row, r)) for row in rows))
        return Subspace(imgs, self.ambient, self.p)

    def is_isotropic(self) -> bool:
        rows = self.integral_rows()
        p = self.p
        for u, v in itertools.combinations(rows, 2):
            val = _omega(u, v)
            if (val % p) if p else val:
                return False
        return True

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All vectors of a finite-field subspace."""
        if not self.p:
            raise ValueError("only finite-field subspaces have finitely many vectors")
        p = self.p
        for coeffs in itertools.product(range(p), repeat=self.dim):
            v = [0] * self.ambient
            for c, r in zip(coeffs, self.rows):
                if c:
                    v = [(x + c * y) % p for x, y in zip(v, r)]
            yield tuple(v)

    def lines(self) -> list[Line]:
        return sorted({Line.of(v, self.p) for v in self.vectors() if any(v)})


def isotropic_subspace(vectors: Iterable[Sequence], space: SymplecticSpace) -> Subspace:
    """Validated nontrivial proper isotropic subspace spanned by ``vectors``."""
    V = Subspace.span(vectors, space.p, space.dim)
    if not 1 <= V.dim <= space.n:
        raise ValueError(f"dimension {V.dim} outside 1..{space.n}")
    if not V.is_isotropic():
        raise ValueError("subspace is not isotropic")
    return V


def perp(H: Subspace, space: SymplecticSpace) -> Subspace:
    """Symplectic complement ``{v : ω(v, h) = 0 for all h in H}``."""
    N = space.dim
    if H.ambient != N:
        raise ValueError("subspace not in this symplectic space")
    if H.dim == 0:
        return Subspace.whole(N, H.p)
    J = gram_matrix(space.n).rows()
    # ω(h, v) = hᵀ J v
    eqs = [tuple(sum(h[i] * J[i][j] for i in range(N)) for j in range(N)) for h in H.integral_rows()]
    _, ker = field_rank_kernel(eqs, H.p or "Q")
    return Subspace(ker, N, H.p)


def saturate_isotropic(V: Subspace) -> list[tuple[int, ...]]:
    """HNF basis of the lattice summand ``V ∩ Z^{2n}``."""
    if V.p:
        raise ValueError("saturation is defined over Q")
    return saturate(V.integral_rows())


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def isotropic_count(n: int, q: int, d: int) -> int:
    """Number of isotropic d-dimensional subspaces of F_q^{2n}."""
    count = gaussian_binomial(n, d, q)
    for i in range(d):
        count *= q ** (n - i) + 1
    return count


def _rref_cells(N: int, d: int, q: int) -> Iterator[list[list[int]]]:
    for pivots in itertools.combinations(range(N), d):
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, N) if c not in pivots]
        for vals in itertools.product(range(q), repeat=len(free)):
            M = [[0] * N for _ in range(d)]
            for r, pc in enumerate(pivots):
                M[r][pc] = 1
            for (r, c), x in zip(free, vals):
                M[r][c] = x
            yield M


def enumerate_isotropic_Fq(n: int, q: int, d: int, budget: int = 100_000) -> list[Subspace]:
    """All isotropic d-subspaces of F_q^{2n}, sorted canonically."""
    if not is_prime(q):
        raise ValueError(f"q = {q} must be prime")
    if not 1 <= d <= n:
        raise ValueError(f"dimension {d} outside 1..{n}")
    expected = isotropic_count(n, q, d)
    if expected > budget:
        raise BudgetExceeded(f"{expected} isotropic {d}-spaces exceed the budget {budget}")
    out = []
    for M in _rref_cells(2 * n, d, q):
        if all(_omega(u, v) % q == 0 for u, v in itertools.combinations(M, 2)):
            out.append(Subspace(M, 2 * n, q))
    out.sort(key=Subspace.sort_key)
    assert len(out) == expected
    return out


class SpElement:
    """A symplectic matrix; column j is indexed by the j-th element of Λ(n)."""

    __slots__ = ("matrix", "space")

    def __init__(self, matrix, space: SymplecticSpace, check: bool = True):
        rows = _as_rows(matrix)
        if space.p:
            rows = tuple(tuple(x % space.p for x in r) for r in rows)
        self.matrix = IntMatrix(rows, space.dim)
        self.space = space
        if check and not is_symplectic(self.matrix, space):
            from .errors import NotSymplecticError

            raise NotSymplecticError(f"matrix {self.matrix.tolist()} is not symplectic over {space.ground}")

    @classmethod
    def identity(cls, space: SymplecticSpace) -> "SpElement":
        return cls(IntMatrix.identity(space.dim), space, check=False)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], space: SymplecticSpace) -> "SpElement":
        return cls(IntMatrix.from_columns(cols), space)

    def column(self, j: int) -> tuple[int, ...]:
        return self.matrix.col(j)

    def columns(self) -> tuple[tuple[int, ...], ...]:
        return self.matrix.columns()

    def __matmul__(self, other: "SpElement") -> "SpElement":
        if self.space != other.space:
            raise ValueError("elements of different groups")
        return SpElement(self.matrix @ other.matrix, self.space, check=False)

    def inverse(self) -> "SpElement":
        J = gram_matrix(self.space.n)
        return SpElement(-(J @ self.matrix.T @ J), self.space, check=False)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        w = self.matrix.apply(v)
        if self.space.p:
            w = tuple(x % self.space.p for x in w)
        return w

    def max_entry(self) -> int:
        return max(abs(x) for r in self.matrix.rows() for x in r)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpElement):
            return NotImplemented
        return self.space == other.space and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.space, self.matrix))

    def __repr__(self) -> str:
        return f"SpElement({format_matrix(self.matrix)})"


def transvection(v: Sequence[int], space: SymplecticSpace, sign: int = 1) -> SpElement:
    """x ↦ x + sign·ω(x, v)·v."""
    N = space.dim
    cols = []
    for j in range(N):
        x = space.basis_vector(j)
        c = sign * _omega(x, v)
        cols.append(tuple(x[i] + c * v[i] for i in range(N)))
    return SpElement(IntMatrix.from_columns(cols), space, check=False)


def standard_generators(space: SymplecticSpace) -> list[SpElement]:
    """Transvections along e_i, f_i, e_i + e_j and their inverses (a generating set)."""
    n = space.n
    vecs = []
    for a in range(1, n + 1):
        vecs += [space.e(a), space.f(a)]
    for a, b in itertools.combinations(range(1, n + 1), 2):
        vecs.append(tuple(x + y for x, y in zip(space.e(a), space.e(b))))
    gens = []
    for v in vecs:
        gens.append(transvection(v, space, 1))
        if space.p != 2:
            gens.append(transvection(v, space, -1))
    return gens


def enumerate_sp_Fq(n: int, q: int, budget: int = 100_000) -> list[SpElement]:
    """Sp_{2n}(F_q) by breadth-first closure from transvection generators."""
    space = SymplecticSpace(n, GroundRing.finite_field(q))
    order = q ** (n * n)
    for i in range(1, n + 1):
        order *= q ** (2 * i) - 1
    if order > budget:
        raise BudgetExceeded(f"|Sp_{2 * n}(F_{q})| = {order} exceeds the budget {budget}")
    gens = standard_generators(space)
    identity = SpElement.identity(space)
    seen = {identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = s @ g
            if h not in seen:
                seen.add(h)
                queue.append(h)
    assert len(seen) == order, (len(seen), order)
    return sorted(seen, key=lambda g: g.matrix.rows())


def enumerate_sl2_Z(bound: int) -> list[SpElement]:
    """Every element of Sp_2(Z) = SL_2(Z) with all entries of absolute value ≤ bound."""
    space = SymplecticSpace(1)
    out = []
    r = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(r, repeat=4):
        if a * d - b * c == 1:
            out.append(SpElement([[a, b], [c, d]], space, check=False))
    return out


def sample_sp_Z(n: int, bound: int, count: int, seed: int = 0, max_steps: int = 200_000) -> list[SpElement]:
    """Distinct elements of Sp_{2n}(Z) with entries ≤ bound, from a bounded random walk.

    Steps are products with standard generators; steps leaving the entry bound
    are rejected. Deterministic for a fixed seed.
    """
    space = SymplecticSpace(n)
    rng = random.Random(seed)
    gens = standard_generators(space)
    identity = SpElement.identity(space)
    found: list[SpElement] = []
    seen = {identity}
    g = identity
    for step in range(max_steps):
        if len(found) >= count:
            break
        if step % 25 == 0:
            g = identity
        s = rng.choice(gens)
        h = s @ g if rng.random() < 0.5 else g @ s
        if h.max_entry() > bound:
            continue
        g = h
        if g not in seen:
            seen.add(g)
            found.append(g)
    if len(found) < count:
        raise BudgetExceeded(f"only {len(found)} distinct elements found within {max_steps} steps")
    return found


def embed_block(A: SpElement, n: int) -> SpElement:
    """A ⊕ identity: acts as A on the first 2k coordinates of Z^{2n}."""
    k = A.space.n
    N = 2 * n
    rows = [[int(i == j) for j in range(N)] for i in range(N)]
    for i in range(2 * k):
        for j in range(2 * k):
            rows[i][j] = A.matrix[i, j]
    return SpElement(rows, SymplecticSpace(n, A.space.ground), check=False)


def _bezout(values: Sequence[int]) -> tuple[int, list[int]]:
    g, coeffs = 0, [0] * len(values)
    for i, v in enumerate(values):
        g2, x, y = xgcd(g, v)
        coeffs = [c * x for c in coeffs]
        coeffs[i] = y
        g = g2
    return g, coeffs


def _symplectic_basis(basis: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Symplectic basis x_1, y_1, ... of a unimodular lattice given by any Z-basis."""
    if not basis:
        return []
    x = basis[0]
    pairings = [_omega(x, b) for b in basis]
    g, coeffs = _bezout(pairings)
    if g != 1:
        raise ValueError("lattice is not unimodular for ω")
    y = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(len(x)))

    def project(z):
        a, b = _omega(z, y), _omega(z, x)
        return tuple(zi - a * xi + b * yi for zi, xi, yi in zip(z, x, y))

    rest = hermite_normal_form([project(b) for b in basis])
    return [x, y] + _symplectic_basis(rest)


def symplectic_completion(v: Sequence[int], w: Sequence[int]) -> SpElement:
    """S in Sp_{2n}(Z) with S·e_n = v and S·f_n = w (requires ω(v, w) = 1, v primitive)."""
    v, w = tuple(map(int, v)), tuple(map(int, w))
    if len(v) != len(w) or len(v) % 2:
        raise ValueError("v and w must lie in one Z^{2n}")
    if _omega(v, w) != 1:
        raise ValueError(f"ω(v, w) = {_omega(v, w)} != 1")
    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        raise ValueError(f"{v} is not primitive")
    N = len(v)
    n = N // 2

    def project(z):
        a, b = _omega(z, w), _omega(z, v)
        return tuple(zi - a * vi + b * wi for zi, vi, wi in zip(z, v, w))

    unit = [tuple(int(i == j) for j in range(N)) for i in range(N)]
    complement = hermite_normal_form([project(z) for z in unit])
    cols = _symplectic_basis(complement) + [v, w]
    S = SpElement(IntMatrix.from_columns(cols), SymplecticSpace(n))
    return S


def parse_matrix(text: str) -> IntMatrix:
    """Parse ``"a,b;c,d"`` (rows separated by ';', entries by ',')."""
    try:
        rows = [[int(x) for x in r.split(",")] for r in text.strip().split(";")]
    except ValueError as exc:
        raise MalformedMatrixError(f"cannot parse matrix text {text!r}: {exc}") from None
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise MalformedMatrixError(f"ragged matrix text {text!r}")
    return IntMatrix(rows)


def format_matrix(M) -> str:
    return ";".join(",".join(str(x) for x in r) for r in _as_rows(M))
