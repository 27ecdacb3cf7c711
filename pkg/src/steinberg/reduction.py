"""Continued-fraction reduction of modular symbols at n = 1.

Points of P^1(Q) are coprime pairs (p, q) with q > 0, or (1, 0) for ∞. A symbol
[a] − [b] is rewritten as a telescoping sum over convergents whose adjacent
pairs are unimodular, i.e. integral apartment classes of SL_2(Z).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

INF = (1, 0)


def normalize_point(p: int, q: int) -> tuple[int, int]:
    if p == 0 and q == 0:
        raise ValueError("(0, 0) is not a point of P^1(Q)")
    g = gcd(p, q)
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


def parse_point(text: str) -> tuple[int, int]:
    s = str(text).strip().lower()
    if s in ("inf", "infinity", "∞", "oo"):
        return INF
    if "/" in s:
        a, b = s.split("/", 1)
        return normalize_point(int(a), int(b))
    return normalize_point(int(s), 1)


def format_point(pt: tuple[int, int]) -> str:
    p, q = pt
    if q == 0:
        return "inf"
    return str(p) if q == 1 else f"{p}/{q}"


def det(a: tuple[int, int], b: tuple[int, int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


def convergents(pt: tuple[int, int]) -> list[tuple[int, int]]:
    """∞ followed by the floor continued-fraction convergents of pt."""
    p, q = normalize_point(*pt)
    out = [INF]
    if q == 0:
        return out
    h0, k0, h1, k1 = 1, 0, 0, 1  # h_{-1}/k_{-1} = ∞, h_{-2}/k_{-2} = 0
    x, y = p, q
    while y:
        a, r = divmod(x, y)
        h0, h1 = a * h0 + h1, h0
        k0, k1 = a * k0 + k1, k0
        out.append(normalize_point(h0, k0))
        x, y = y, r
    return out


@dataclass
class Reduction:
    start: tuple[int, int]
    end: tuple[int, int]
    path: list[tuple[int, int]]

    @property
    def pairs(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        return list(zip(self.path, self.path[1:]))

    @property
    def determinants(self) -> list[int]:
        return [det(a, b) for a, b in self.pairs]

    def unimodular(self) -> bool:
        return all(abs(d) == 1 for d in self.determinants)

    def telescopes(self) -> bool:
        total: dict = {}
        for a, b in self.pairs:
            total[a] = total.get(a, 0) + 1
            total[b] = total.get(b, 0) - 1
        want = {} if self.start == self.end else {self.start: 1, self.end: -1}
        return {k: v for k, v in total.items() if v} == want

    def to_json(self) -> dict:
        return {
            "from": format_point(self.start),
            "to": format_point(self.end),
            "path": [format_point(x) for x in self.path],
            "symbols": [[format_point(a), format_point(b)] for a, b in self.pairs],
            "determinants": self.determinants,
            "unimodular": self.unimodular(),
            "telescopes": self.telescopes(),
        }


def manin_reduce(start, end) -> Reduction:
    """Unimodular path from ``start`` to ``end`` through convergents; shared prefixes cancel."""
    a = parse_point(start) if isinstance(start, str) else normalize_point(*_pair(start))
    b = parse_point(end) if isinstance(end, str) else normalize_point(*_pair(end))
    pa, pb = convergents(a), convergents(b)
    k = 0
    while k < min(len(pa), len(pb)) and pa[k] == pb[k]:
        k += 1
    path = pa[k - 1 :][::-1] + pb[k:]
    if a == b:
        path = [a]
    return Reduction(a, b, path)


def _pair(x) -> tuple[int, int]:
    if x is None:
        return INF
    if isinstance(x, Fraction):
        return x.numerator, x.denominator
    if isinstance(x, int):
        return x, 1
    return tuple(x)


def symbol_matrix(a: tuple[int, int], b: tuple[int, int]):
    """The SL_2(Z) matrix with columns a and ±b for a unimodular pair."""
    from .symplectic import SpElement, SymplecticSpace

    d = det(a, b)
    if abs(d) != 1:
        raise ValueError(f"{a}, {b} is not unimodular")
    b = (d * b[0], d * b[1])
    return SpElement([[a[0], b[0]], [a[1], b[1]]], SymplecticSpace(1))


def reduction_chain(r: Reduction):
    """Σ of the apartment classes of the symbol matrices; equals (⟨start⟩) − (⟨end⟩)."""
    from .apartments import apartment_class
    from .chains import Chain

    out = Chain()
    for a, b in r.pairs:
        out = out + apartment_class(symbol_matrix(a, b))
    return out


def rational_symbol(a: tuple[int, int], b: tuple[int, int]):
    from .chains import Chain
    from .symplectic import Subspace

    out = Chain()
    if a != b:
        out.add_simplex([Subspace([a], 2)], 1)
        out.add_simplex([Subspace([b], 2)], -1)
    return out
