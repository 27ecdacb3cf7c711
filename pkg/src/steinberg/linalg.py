"""Exact integer and finite-field linear algebra.

Everything here works with Python integers (and ``fractions.Fraction`` for
rational elimination); there is no floating point anywhere in this module.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

# Matrices with more than this fraction of nonzero entries are reduced densely.
DENSITY_THRESHOLD = 0.25
# Matrices with at most this many entries always take the dense path.
SMALL_DENSE_SIZE = 400


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


class IntMatrix:
    """Immutable dense matrix of arbitrary-precision integers."""

    __slots__ = ("_rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(int(i == j) for j in range(n)) for i in range(n))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "IntMatrix":
        if not cols:
            return cls(())
        return cls(zip(*cols), len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {idx} outside a {self.nrows}x{self.ncols} matrix")
        return self._rows[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.nrows:
            raise IndexError(i)
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return tuple(r[j] for r in self._rows)

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.col(j) for j in range(self.ncols))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(zip(*self._rows), self.nrows) if self.nrows else IntMatrix.zeros(self.ncols, 0)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix(
            (tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self._rows),
            other.ncols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self._rows)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(((-x for x in r) for r in self._rows), self.ncols)

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det([list(r) for r in self._rows])

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})"


class SparseIntMatrix:
    """Column-major sparse integer matrix: ``cols[j][i]`` holds entry (i, j)."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: dict[int, dict[int, int]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = {}
        for j, col in (cols or {}).items():
            if not 0 <= j < ncols:
                raise IndexError(j)
            entries = {i: v for i, v in col.items() if v}
            for i in entries:
                if not 0 <= i < nrows:
                    raise IndexError(i)
            if entries:
                self.cols[j] = entries

    @classmethod
    def from_dense(cls, A: IntMatrix | Sequence[Sequence[int]]) -> "SparseIntMatrix":
        A = A if isinstance(A, IntMatrix) else IntMatrix(A)
        cols: dict[int, dict[int, int]] = {}
        for i, r in enumerate(A.rows()):
            for j, v in enumerate(r):
                if v:
                    cols.setdefault(j, {})[i] = v
        return cls(A.nrows, A.ncols, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def density(self) -> float:
        size = self.nrows * self.ncols
        return self.nnz() / size if size else 0.0

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {idx} outside a {self.nrows}x{self.ncols} matrix")
        return self.cols.get(j, {}).get(i, 0)

    def to_dense(self) -> IntMatrix:
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in self.cols.items():
            for i, v in col.items():
                rows[i][j] = v
        return IntMatrix(rows, self.ncols)

    def matvec(self, x: dict[int, int]) -> dict[int, int]:
        """Multiply by a sparse column vector given as ``{index: value}``."""
        out: dict[int, int] = {}
        for j, c in x.items():
            for i, v in self.cols.get(j, {}).items():
                out[i] = out.get(i, 0) + v * c
        return {i: v for i, v in out.items() if v}

    def compose(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = {j: self.matvec(col) for j, col in other.cols.items()}
        return SparseIntMatrix(self.nrows, other.ncols, cols)

    def is_zero(self) -> bool:
        return not self.cols


def _as_dense_lists(A) -> list[list[int]]:
    if isinstance(A, IntMatrix):
        return A.tolist()
    if isinstance(A, SparseIntMatrix):
        return A.to_dense().tolist()
    return [list(map(int, r)) for r in A]


def bareiss_det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    M = [r[:] for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = M[k][k]
        for i in range(k + 1, n):
            aik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SmithNormalForm:
    """``left @ A @ right == form()``, with ``diagonal`` the nonzero invariant factors."""

    diagonal: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    rank: int

    def form(self) -> IntMatrix:
        m, n = self.left.nrows, self.right.ncols
        return IntMatrix(
            (tuple(self.diagonal[i] if i == j and i < self.rank else 0 for j in range(n)) for i in range(m)),
            n,
        )


def _snf_dense(A: list[list[int]], track: bool):
    m = len(A)
    n = len(A[0]) if m else 0
    A = [r[:] for r in A]
    L = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    R = [[int(i == j) for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        if track:
            L[i], L[k] = L[k], L[i]

    def swap_cols(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        if track:
            for r in R:
                r[j], r[k] = r[k], r[j]

    def add_row(dst, src, f):  # row dst += f * row src
        if f:
            rd, rs = A[dst], A[src]
            for j in range(n):
                if rs[j]:
                    rd[j] += f * rs[j]
            if track:
                ld, ls = L[dst], L[src]
                for j in range(m):
                    if ls[j]:
                        ld[j] += f * ls[j]

    def add_col(dst, src, f):  # col dst += f * col src
        if f:
            for r in A:
                if r[src]:
                    r[dst] += f * r[src]
            if track:
                for r in R:
                    if r[src]:
                        r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t + 1, m):
                    v = A[i][t]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, "r")
                for j in range(t + 1, n):
                    v = A[t][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if track:
                L[t] = [-x for x in L[t]]
        t += 1
    diag = tuple(A[i][i] for i in range(t))
    return diag, L, R


def smith_normal_form(A: IntMatrix | Sequence[Sequence[int]]) -> SmithNormalForm:
    """Smith normal form with unimodular transforms.

    Minimal-absolute-value pivoting; the zero matrix gives an empty diagonal.
    """
    rows = _as_dense_lists(A)
    if isinstance(A, (IntMatrix, SparseIntMatrix)):
        m, n = A.shape
    else:
        m, n = len(rows), (len(rows[0]) if rows else 0)
    diag, L, R = _snf_dense(rows, track=True)
    return SmithNormalForm(diag, IntMatrix(L, m), IntMatrix(R, n), len(diag))


def _sparse_unit_elimination(rows: dict[int, dict[int, int]], cols: dict[int, set[int]]) -> int:
    """Eliminate +-1 pivots in place, Markowitz-style; returns the number removed."""
    ones = 0
    progress = True
    while progress:
        progress = False
        heap = [(len(rs), c) for c, rs in cols.items() if rs]
        heapq.heapify(heap)
        while heap:
            length, c = heapq.heappop(heap)
            rs = cols.get(c)
            if not rs:
                continue
            if len(rs) != length:
                heapq.heappush(heap, (len(rs), c))
                continue
            pivot_row = None
            for r in rs:
                v = rows[r][c]
                if v == 1 or v == -1:
                    if pivot_row is None or len(rows[r]) < len(rows[pivot_row]):
                        pivot_row = r
            if pivot_row is None:
                continue
            prow = rows[pivot_row]
            p = prow[c]
            for r2 in list(rs):
                if r2 == pivot_row:
                    continue
                row2 = rows[r2]
                f = row2[c] * p
                for c2, v in prow.items():
                    nv = row2.get(c2, 0) - f * v
                    if nv:
                        if c2 not in row2:
                            cols[c2].add(r2)
                        row2[c2] = nv
                    elif c2 in row2:
                        del row2[c2]
                        cols[c2].discard(r2)
            for c2 in prow:
                cols[c2].discard(pivot_row)
            del rows[pivot_row]
            del cols[c]
            ones += 1
            progress = True
    return ones


def elementary_divisors(A, density_threshold: float = DENSITY_THRESHOLD) -> list[int]:
    """Nonzero invariant factors of ``A`` in divisibility order.

    Sparse inputs first lose their unit pivots by elimination; the leftover
    block goes through the dense Smith reduction.
    """
    if isinstance(A, SparseIntMatrix):
        sp = A
    else:
        sp = SparseIntMatrix.from_dense(A if isinstance(A, IntMatrix) else IntMatrix(A))
    m, n = sp.shape
    if m * n <= SMALL_DENSE_SIZE or sp.density() > density_threshold:
        return list(_snf_dense(sp.to_dense().tolist(), track=False)[0])
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for j, col in sp.cols.items():
        cols[j] = set(col)
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    ones = _sparse_unit_elimination(rows, cols)
    live_rows = sorted(r for r, d in rows.items() if d)
    live_cols = sorted(c for c, s in cols.items() if s)
    rest: list[int] = []
    if live_rows and live_cols:
        cidx = {c: k for k, c in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for k, r in enumerate(live_rows):
            for c, v in rows[r].items():
                dense[k][cidx[c]] = v
        rest = list(_snf_dense(dense, track=False)[0])
    return [1] * ones + rest


def integer_rank(A) -> int:
    return len(elementary_divisors(A))


def rref(rows: Sequence[Sequence[int]], p: int = 0) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over Q (``p == 0``) or F_p.

    Returns the nonzero rows and their pivot columns. Over Q the entries are
    ``Fraction`` values; over F_p they are residues in ``range(p)``.
    """
    if p:
        M = [[x % p for x in r] for r in rows]
    else:
        M = [[Fraction(x) for x in r] for r in rows]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        if p:
            inv = pow(M[r][c], -1, p)
            M[r] = [(x * inv) % p for x in M[r]]
        else:
            inv = M[r][c]
            M[r] = [x / inv for x in M[r]]
        pr = M[r]
        for i in range(nrows):
            if i != r and M[i][c]:
                f = M[i][c]
                if p:
                    M[i] = [(a - f * b) % p for a, b in zip(M[i], pr)]
                else:
                    M[i] = [a - f * b for a, b in zip(M[i], pr)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def _normalize_kernel_vector(v: list, p: int) -> tuple[int, ...]:
    if p:
        lead = next(x for x in v if x)
        inv = pow(lead, -1, p)
        return tuple((x * inv) % p for x in v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def field_rank_kernel(A, field: str | int = "Q") -> tuple[int, list[tuple[int, ...]]]:
    """Rank and a kernel basis of ``A`` over Q (``field="Q"``) or F_p (``field=p``).

    Kernel vectors are normalized: over Q primitive integer vectors with positive
    leading entry, over F_p leading entry 1.
    """
    if field in ("Q", 0, None):
        p = 0
    else:
        p = int(field)
        if not is_prime(p):
            raise ValueError(f"{field} is not a prime modulus")
    rows = _as_dense_lists(A)
    if isinstance(A, (IntMatrix, SparseIntMatrix)):
        ncols = A.ncols
    else:
        ncols = len(rows[0]) if rows else 0
    R, pivots = rref(rows, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    kernel = []
    zero = 0 if p else Fraction(0)
    one = 1 if p else Fraction(1)
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(R, pivots):
            v[pc] = (-row[f]) % p if p else -row[f]
        kernel.append(_normalize_kernel_vector(v, p))
    return len(pivots), kernel


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Positive pivots, entries above each pivot reduced into ``[0, pivot)``;
    zero rows are dropped, so the result is the unique HNF basis.
    """
    M = [list(map(int, r)) for r in rows if any(r)]
    if not M:
        return []
    ncols = len(M[0])
    out: list[list[int]] = []
    pivcols: list[int] = []
    for c in range(ncols):
        nz = [r for r in M if r[c]]
        if not nz:
            continue
        rest = [r for r in M if not r[c]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[c]))
            p = nz[0]
            new = [p]
            for r in nz[1:]:
                q = r[c] // p[c]
                r = [a - q * b for a, b in zip(r, p)]
                if r[c]:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            nz = new
        piv = nz[0]
        if piv[c] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        pivcols.append(c)
        M = rest
        if not M:
            break
    for k in range(len(out)):
        c = pivcols[k]
        for i in range(k):
            q = out[i][c] // out[k][c]
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[k])]
    return [tuple(r) for r in out]


def integer_kernel_basis(A) -> list[tuple[int, ...]]:
    """HNF basis of the lattice ``{x in Z^cols : A x = 0}``."""
    rows = _as_dense_lists(A)
    if isinstance(A, (IntMatrix, SparseIntMatrix)):
        m, n = A.shape
    else:
        m, n = len(rows), (len(rows[0]) if rows else 0)
    if m == 0:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    diag, _, R = _snf_dense(rows, track=True)
    r = len(diag)
    kernel = [tuple(R[i][j] for i in range(n)) for j in range(r, n)]
    return hermite_normal_form(kernel)


def saturate(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """HNF basis of ``span_Q(rows) ∩ Z^N``."""
    rows = [list(map(int, r)) for r in rows if any(r)]
    if not rows:
        return []
    ortho = integer_kernel_basis(rows)
    if not ortho:
        n = len(rows[0])
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel_basis(ortho)


def max_minors_gcd(rows: Sequence[Sequence[int]]) -> int:
    """gcd of all full-size minors of a k x N integer matrix (0 if rank < k)."""
    k = len(rows)
    if k == 0:
        return 1
    n = len(rows[0])
    # minors through a zero column vanish
    live = [c for c in range(n) if any(r[c] for r in rows)]
    g = 0
    for cols in itertools.combinations(live, k):
        d = bareiss_det([[r[c] for c in cols] for r in rows])
        if d:
            g = gcd(g, d)
            if g == 1:
                return 1
    return g


def is_summand_basis(rows: Sequence[Sequence[int]]) -> bool:
    """True iff the rows are independent and span a direct summand of Z^N."""
    return max_minors_gcd(rows) == 1
