"""The Cartan subgroup of GL2(Z/NZ) attached to the order's residue ring.

The residue class of s*tau + t embeds as a 2x2 matrix with respect to the
basis {tau, 1}; W is the image of the unit group, U the image of the units of
the order itself, and W-hat the extension by the conjugation matrix.  Only
order bookkeeping is computed here; Galois image claims beyond the order
identity are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import FrozenSet, List, Tuple

from .numerics import DomainError
from .quadforms import OrderContext, _unit_coords

__all__ = ["ResidueElem", "mu", "unit_group", "cartan_groups", "CartanData"]

Mat = Tuple[int, int, int, int]


@dataclass(frozen=True)
class ResidueElem:
    """s*tau + t in O/NO."""

    s: int
    t: int
    level: int

    def matrix(self, ctx: OrderContext) -> Mat:
        return mu(ctx, self.level, self.s, self.t)


def mu(ctx: OrderContext, N: int, s: int, t: int) -> Mat:
    """Matrix of multiplication by s*tau + t on {tau, 1}, reduced mod N."""
    return (
        (t - ctx.b0 * s) % N,
        (-ctx.c0 * s) % N,
        s % N,
        t % N,
    )


def _mat_mul(a: Mat, b: Mat, N: int) -> Mat:
    return (
        (a[0] * b[0] + a[1] * b[2]) % N,
        (a[0] * b[1] + a[1] * b[3]) % N,
        (a[2] * b[0] + a[3] * b[2]) % N,
        (a[2] * b[1] + a[3] * b[3]) % N,
    )


def _det(a: Mat, N: int) -> int:
    return (a[0] * a[3] - a[1] * a[2]) % N


def unit_group(ctx: OrderContext, N: int) -> List[ResidueElem]:
    """All residues with invertible multiplication matrix mod N."""
    if N < 1:
        raise DomainError("level must be positive")
    out = []
    for s in range(N):
        for t in range(N):
            if gcd(_det(mu(ctx, N, s, t), N), N) == 1:
                out.append(ResidueElem(s, t, N))
    if N == 1:
        out = [ResidueElem(0, 0, 1)]
    return out


def _closure(gens: List[Mat], N: int) -> FrozenSet[Mat]:
    seen = set(gens)
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(seen):
                for c in (_mat_mul(a, b, N), _mat_mul(b, a, N)):
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    return frozenset(seen)


@dataclass
class CartanData:
    level: int
    W: FrozenSet[Mat]
    U: FrozenSet[Mat]
    What: FrozenSet[Mat]

    def orders(self) -> dict:
        return {"W": len(self.W), "U": len(self.U), "What": len(self.What)}


def cartan_groups(ctx: OrderContext, N: int) -> CartanData:
    """(W, U, W-hat) with exact orders, for N >= 2."""
    if N < 2:
        raise DomainError("level must be at least 2")
    W = frozenset(u.matrix(ctx) for u in unit_group(ctx, N))
    U = frozenset(mu(ctx, N, y, x) for (x, y) in _unit_coords(ctx))
    J = (1 % N, ctx.b0 % N, 0, (-1) % N)
    What = _closure(list(W) + [J], N)
    return CartanData(N, W, U, What)


def wuog_identity_holds(ctx: OrderContext, N: int, class_count: int, h: int) -> bool:
    """|W|/|U| == |C_N(O)|/h, the computable shadow of the Galois description."""
    cd = cartan_groups(ctx, N)
    return len(cd.W) * h == len(cd.U) * class_count
