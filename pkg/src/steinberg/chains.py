"""Finitely supported integer chains of oriented simplices.

A simplex is stored as a tuple of vertices sorted by :func:`vkey`; a chain is a
mapping from such tuples to nonzero integers. The same class carries chains of
flags (tuples of subspaces ordered by inclusion) and chains in a barycentric
subdivision (tuples of faces ordered by size).
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator


def vkey(v):
    """Global total order on every kind of vertex used in this package."""
    if isinstance(v, bool):
        raise TypeError("booleans are not vertices")
    if isinstance(v, int):
        return (0, v)
    from .symplectic import Line, Subspace

    if isinstance(v, Line):
        return (1, v.rep)
    if isinstance(v, Subspace):
        return (2, v.dim, v.rows)
    if isinstance(v, (tuple, frozenset)):
        keys = sorted(vkey(x) for x in v)
        return (3, len(keys), tuple(keys))
    if isinstance(v, str):
        return (4, v)
    raise TypeError(f"no vertex order for {type(v).__name__}")


def permutation_sign(keys: list) -> int:
    """Sign of the sorting permutation (0 if two keys coincide)."""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    for a, b in zip(order, order[1:]):
        if keys[a] == keys[b]:
            return 0
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def orient(vertices: Iterable) -> tuple[tuple, int]:
    """Sorted simplex and the sign relating it to the given vertex order."""
    verts = list(vertices)
    keys = [vkey(v) for v in verts]
    sign = permutation_sign(keys)
    if sign == 0:
        return (), 0
    return tuple(v for _, v in sorted(zip(keys, verts), key=lambda t: t[0])), sign


def face_tuple(vertices: Iterable) -> tuple:
    """Canonical unoriented simplex (vertices sorted by :func:`vkey`)."""
    return tuple(sorted(set(vertices), key=vkey))


class Chain:
    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def simplex(cls, vertices: Iterable, coeff: int = 1) -> "Chain":
        key, sign = orient(vertices)
        if sign == 0 or coeff == 0:
            return cls()
        return cls({key: sign * coeff})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Iterable, int]]) -> "Chain":
        out = cls()
        for verts, c in items:
            out.add_simplex(verts, c)
        return out

    def add_simplex(self, vertices: Iterable, coeff: int = 1) -> None:
        key, sign = orient(vertices)
        if sign == 0 or coeff == 0:
            return
        val = self.terms.get(key, 0) + sign * coeff
        if val:
            self.terms[key] = val
        else:
            self.terms.pop(key, None)

    def copy(self) -> "Chain":
        return Chain(dict(self.terms))

    def __iter__(self) -> Iterator[tuple[tuple, int]]:
        return iter(self.items())

    def items(self) -> list[tuple[tuple, int]]:
        return sorted(self.terms.items(), key=lambda kv: [vkey(v) for v in kv[0]])

    def __len__(self) -> int:
        return len(self.terms)

    def support(self) -> list[tuple]:
        return [k for k, _ in self.items()]

    def coefficient(self, vertices: Iterable) -> int:
        key, sign = orient(vertices)
        return sign * self.terms.get(key, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(k) - 1 for k in self.terms}

    def __add__(self, other: "Chain") -> "Chain":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Chain(out)

    def __neg__(self) -> "Chain":
        return Chain({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __rmul__(self, k: int) -> "Chain":
        return Chain({s: k * c for s, c in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        raise TypeError("chains are mutable")

    def boundary(self) -> "Chain":
        out: dict = {}
        for key, c in self.terms.items():
            for i in range(len(key)):
                face = key[:i] + key[i + 1 :]
                out[face] = out.get(face, 0) + (c if i % 2 == 0 else -c)
        return Chain(out)

    def pushforward(self, f: Callable) -> "Chain":
        """Image under a vertex map; simplices with repeated images vanish."""
        out = Chain()
        for key, c in self.terms.items():
            out.add_simplex([f(v) for v in key], c)
        return out

    def restrict(self, keep: Callable[[tuple], bool]) -> "Chain":
        return Chain({k: c for k, c in self.terms.items() if keep(k)})

    def join_vertex(self, a) -> "Chain":
        """z ↦ z∗a: append ``a`` to every simplex, then reorient."""
        out = Chain()
        for key, c in self.terms.items():
            out.add_simplex(key + (a,), c)
        return out

    def cone(self, a) -> "Chain":
        """a∗z with the apex first, so that ∂(a∗z) = z − a∗∂z."""
        out = Chain()
        for key, c in self.terms.items():
            out.add_simplex((a,) + key, c)
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "Chain(0)"
        parts = []
        for key, c in self.items():
            parts.append(f"{c:+d}[{', '.join(map(repr, key))}]")
        return "Chain(" + " ".join(parts) + ")"


def suspend(z: Chain, a, b) -> Chain:
    """Σz = z∗a − z∗b for the suspension by the two-point complex {a, b}."""
    return z.join_vertex(a) - z.join_vertex(b)


def desuspend(y: Chain, a, b) -> Chain | None:
    """The chain z with Σz = y, or None if y is not a suspension."""
    z = Chain()
    for key, c in y.terms.items():
        if a in key and b not in key:
            rest = tuple(v for v in key if v != a)
            _, sign = orient(rest + (a,))
            _, sign_key = orient(key)
            # y = Σ z means the (rest, a) term of z∗a carries coefficient c
            z.add_simplex(rest, c * sign * sign_key)
    if suspend(z, a, b) != y:
        return None
    return z
