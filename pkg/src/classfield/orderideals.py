"""Exact ideal arithmetic in imaginary quadratic orders: the brute-force oracle.

Elements are x + y*tau over Q, lattices are kept in a canonical Hermite basis
(1/d)(Z(g*tau + t) + Z*m), and ray classes modulo N are decided by an exact
generator-residue test.  This module is the independent ground truth against
which the form-side class group is checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .numerics import BigComplex, DomainError, InvariantViolation, ResourceError
from .quadforms import (
    Form,
    OrderContext,
    _unit_coords,
    class_number,
    enumerate_reduced,
    reduce_form,
    xgcd,
)

__all__ = [
    "QuadElem",
    "QuadLattice",
    "IdealClassOracle",
    "ideal_norm",
    "ideal_mul",
    "same_ray_class",
    "oracle_class_group",
    "form_to_lattice",
    "principal_generator",
    "integral_ideals",
]


@dataclass(frozen=True)
class QuadElem:
    """x + y*tau with rational x, y; arithmetic uses tau^2 = -b0*tau - c0."""

    ctx: OrderContext
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, ctx: OrderContext, x, y=0) -> "QuadElem":
        return cls(ctx, Fraction(x), Fraction(y))

    def __add__(self, o: "QuadElem") -> "QuadElem":
        return QuadElem(self.ctx, self.x + o.x, self.y + o.y)

    def __sub__(self, o: "QuadElem") -> "QuadElem":
        return QuadElem(self.ctx, self.x - o.x, self.y - o.y)

    def __neg__(self) -> "QuadElem":
        return QuadElem(self.ctx, -self.x, -self.y)

    def __mul__(self, o) -> "QuadElem":
        if isinstance(o, (int, Fraction)):
            return QuadElem(self.ctx, self.x * o, self.y * o)
        b0, c0 = self.ctx.b0, self.ctx.c0
        x1, y1, x2, y2 = self.x, self.y, o.x, o.y
        return QuadElem(
            self.ctx,
            x1 * x2 - c0 * y1 * y2,
            x1 * y2 + x2 * y1 - b0 * y1 * y2,
        )

    __rmul__ = __mul__

    def conj(self) -> "QuadElem":
        # conj(tau) = -b0 - tau
        return QuadElem(self.ctx, self.x - self.ctx.b0 * self.y, -self.y)

    def norm(self) -> Fraction:
        return self.x * self.x - self.ctx.b0 * self.x * self.y + self.ctx.c0 * self.y * self.y

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise DomainError("division by zero")
        return self.conj() * (Fraction(1) / n)

    def __truediv__(self, o: "QuadElem") -> "QuadElem":
        return self * o.inverse()

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def numeric(self, digits: int) -> BigComplex:
        tau = self.ctx.tau(digits)
        return BigComplex(self.x, 0, tau.prec) + BigComplex(self.y, 0, tau.prec) * tau

    def __repr__(self):
        return f"QuadElem({self.x} + {self.y}*tau)"


class QuadLattice:
    """Rank-2 lattice in K, canonical basis (1/den)*(Z(g*tau + t) + Z*m).

    Invariants: g, m > 0, 0 <= t < m, gcd(den, g, t, m) = 1.  The ordered
    basis (alpha, beta) = ((g*tau + t)/den, m/den) has Im(alpha/beta) > 0.
    """

    __slots__ = ("ctx", "den", "g", "t", "m")

    def __init__(self, ctx: OrderContext, den: int, g: int, t: int, m: int):
        if den <= 0 or g <= 0 or m <= 0:
            raise DomainError("degenerate lattice")
        t %= m
        d = gcd(gcd(den, g), gcd(t, m)) or 1
        self.ctx = ctx
        self.den = den // d
        self.g = g // d
        self.t = t // d
        self.m = m // d

    # -- construction ----------------------------------------------------

    @classmethod
    def from_elems(cls, ctx: OrderContext, elems: Sequence[QuadElem]) -> "QuadLattice":
        """Hermite form of the Z-span of the given elements."""
        den = lcm(*(lcm(e.x.denominator, e.y.denominator) for e in elems)) if elems else 1
        rows = [(int(e.x * den), int(e.y * den)) for e in elems if not e.is_zero()]
        if not rows:
            raise DomainError("zero lattice")
        # eliminate the tau-coordinate: bring to a single (t, g) with minimal g > 0
        g, tcoef = 0, 0
        rest = []
        for (x, y) in rows:
            if y == 0:
                rest.append(x)
                continue
            if g == 0:
                g, tcoef = abs(y), x if y > 0 else -x
                continue
            d, u, v = xgcd(g, y)
            # new generator with tau-part d; the eliminated combination stays
            new_t = u * tcoef + v * x
            rest.append((g // d) * x - (y // d) * tcoef)
            g, tcoef = d, new_t
        if g == 0:
            raise DomainError("lattice has rank < 2")
        m = 0
        for x in rest:
            m = gcd(m, x)
        if m == 0:
            raise DomainError("lattice has rank < 2")
        return cls(ctx, den, g, tcoef, m)

    @classmethod
    def order(cls, ctx: OrderContext) -> "QuadLattice":
        return cls(ctx, 1, 1, 0, 1)

    def basis(self) -> Tuple[QuadElem, QuadElem]:
        a = QuadElem(self.ctx, Fraction(self.t, self.den), Fraction(self.g, self.den))
        b = QuadElem(self.ctx, Fraction(self.m, self.den), Fraction(0))
        return a, b

    # -- predicates ------------------------------------------------------

    def key(self) -> Tuple[int, int, int, int]:
        return (self.den, self.g, self.t, self.m)

    def __eq__(self, other):
        return isinstance(other, QuadLattice) and self.key() == other.key() and self.ctx == other.ctx

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"QuadLattice((({self.g}*tau + {self.t}) Z + {self.m} Z)/{self.den})"

    def contains(self, e: QuadElem) -> bool:
        yy = e.y * self.den
        if yy.denominator != 1 or int(yy) % self.g:
            return False
        n2 = int(yy) // self.g
        xx = e.x * self.den - n2 * self.t
        return xx.denominator == 1 and int(xx) % self.m == 0

    def is_o_module(self) -> bool:
        tau = QuadElem(self.ctx, Fraction(0), Fraction(1))
        a, b = self.basis()
        return self.contains(tau * a) and self.contains(tau * b)

    def is_integral(self) -> bool:
        return self.den == 1

    def norm(self) -> Fraction:
        """Generalized index |O / L|, multiplicative on proper ideals."""
        return Fraction(self.g * self.m, self.den * self.den)

    # -- arithmetic ------------------------------------------------------

    def mul(self, other: "QuadLattice") -> "QuadLattice":
        a1, b1 = self.basis()
        a2, b2 = other.basis()
        return QuadLattice.from_elems(self.ctx, [a1 * a2, a1 * b2, b1 * a2, b1 * b2])

    def scale(self, s) -> "QuadLattice":
        a, b = self.basis()
        if isinstance(s, QuadElem):
            return QuadLattice.from_elems(self.ctx, [a * s, b * s])
        s = Fraction(s)
        return QuadLattice.from_elems(self.ctx, [a * s, b * s])

    def conj(self) -> "QuadLattice":
        a, b = self.basis()
        return QuadLattice.from_elems(self.ctx, [a.conj(), b.conj()])

    def inverse(self) -> "QuadLattice":
        return self.conj().scale(Fraction(1, 1) / self.norm())

    def to_form(self) -> Form:
        """The quadratic form N(x*beta - y*alpha)/N(L) attached to the basis."""
        a, b = self.basis()
        n = self.norm()
        fa = b.norm() / n
        fb = -(a * b.conj() + a.conj() * b).x / n  # trace of alpha*conj(beta)
        fc = a.norm() / n
        if any(v.denominator != 1 for v in (fa, fb, fc)):
            raise DomainError("lattice is not proper for this order")
        return Form(int(fa), int(fb), int(fc))

    def is_proper_ideal(self) -> bool:
        if not self.is_o_module():
            return False
        try:
            return self.to_form().disc == self.ctx.disc
        except DomainError:
            return False


def form_to_lattice(ctx: OrderContext, Q: Form, scale: int = 1) -> QuadLattice:
    """scale * a * [omega_Q, 1], the integral ideal attached to Q."""
    if Q.disc != ctx.disc:
        raise DomainError("form and order discriminants differ")
    # a*omega_Q = ((b0 - b)/2 + tau), basis {a*omega, a}
    half = (ctx.b0 - Q.b) // 2
    return QuadLattice(ctx, 1, scale, scale * half % (scale * Q.a), scale * Q.a)


def fractional_omega_lattice(ctx: OrderContext, Q: Form) -> QuadLattice:
    """[omega_Q, 1] itself (fractional unless a = 1)."""
    half = (ctx.b0 - Q.b) // 2
    return QuadLattice(ctx, Q.a, 1, half % (Q.a), Q.a)


def ideal_norm(L: QuadLattice) -> Fraction:
    """|O / L| from the basis-change determinant; domain error off O-modules."""
    if not L.is_o_module():
        raise DomainError("lattice is not an O-module")
    return L.norm()


def ideal_mul(a: QuadLattice, b: QuadLattice) -> QuadLattice:
    """Module generated by pairwise basis products, re-expressed in Hermite form."""
    return a.mul(b)


def principal_generator(L: QuadLattice) -> Optional[QuadElem]:
    """nu with L = nu*O, or None; via reduction of the attached form.

    The reduction witness, applied to the basis, lands the basis ratio on
    tau itself, so the second transformed basis vector is a generator.
    """
    try:
        Q = L.to_form()
    except DomainError:
        return None
    R, gam = reduce_form(Q)
    if R != L.ctx.principal_form():
        return None
    # applying gamma to the form transforms the basis by gamma^-1
    p, q, r, s = gam
    alpha, beta = L.basis()
    alpha2 = alpha * s - beta * q
    beta2 = beta * p - alpha * r
    tau = QuadElem(L.ctx, Fraction(0), Fraction(1))
    if alpha2 != beta2 * tau:
        raise InvariantViolation("reduction witness did not reach the trivial basis")
    return beta2


def _unit_elems(ctx: OrderContext) -> List[QuadElem]:
    return [QuadElem.of(ctx, x, y) for (x, y) in _unit_coords(ctx)]


def _congruent_mod_no(w: QuadElem, v: QuadElem, N: int) -> bool:
    d = w - v
    return (
        d.x.denominator == 1
        and d.y.denominator == 1
        and int(d.x) % N == 0
        and int(d.y) % N == 0
    )


def _integral_ray_model(L: QuadLattice, N: int) -> QuadLattice:
    """Integral ideal in the same ray class: scale by den^phi(N) = 1 mod N."""
    if L.den == 1:
        return L
    if gcd(L.den, N) != 1:
        raise DomainError("ideal is not prime to the level")
    e = _euler_phi(N)
    return L.scale(L.den**e)


def _euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1) if n > 1 else 1


def same_ray_class(a: QuadLattice, b: QuadLattice, N: int) -> bool:
    """Whether b*a^-1 lies in P_N(O).

    For integral a, b prime to N this reduces to: the integral ideal
    b*conj(a) is principal with generator w satisfying w = zeta * N(a)
    mod N*O for some unit zeta.
    """
    ctx = a.ctx
    for L in (a, b):
        if not L.is_proper_ideal():
            raise DomainError("input is not a proper O-ideal")
    a = _integral_ray_model(a, N)
    b = _integral_ray_model(b, N)
    for L in (a, b):
        if gcd(int(L.norm()), N) != 1:
            raise DomainError("ideal is not prime to the level")
    w = principal_generator(b.mul(a.conj()))
    if w is None:
        return False
    na = QuadElem.of(ctx, int(a.norm()), 0)
    return any(_congruent_mod_no(w, z * na, N) for z in _unit_elems(ctx))


# ---------------------------------------------------------------------------
# enumeration and the oracle class group


def _sqrt_mod_naive(D: int, modulus: int) -> List[int]:
    return [b for b in range(modulus) if (b * b - D) % modulus == 0]


def integral_ideals(
    ctx: OrderContext,
    bound: int,
    coprime_to: int = 1,
    with_multiples: bool = True,
    sqrt_roots=None,
) -> Iterator[Tuple[int, QuadLattice]]:
    """(norm, ideal) for proper integral ideals of norm <= bound prime to
    `coprime_to`; primitive ideals come from forms (a, b mod 2a), and integer
    multiples m*ideal account for the imprimitive ones."""
    roots = sqrt_roots or (lambda a: _sqrt_mod_naive(ctx.disc, 4 * a))
    for a in range(1, bound + 1):
        if gcd(a, coprime_to) != 1:
            continue
        for b in roots(a):
            if b >= 2 * a:
                continue
            c = (b * b - ctx.disc) // (4 * a)
            if gcd(gcd(a, b), c) != 1:
                continue  # not a proper O-ideal
            Q = Form(a, b, c)
            m = 1
            while m * m * a <= bound:
                if gcd(m, coprime_to) == 1:
                    yield m * m * a, form_to_lattice(ctx, Q, scale=m)
                if not with_multiples:
                    break
                m += 1


@dataclass
class IdealClassOracle:
    """Ray classes of C_N(O) found by direct bucketing of integral ideals."""

    ctx: OrderContext
    level: int
    reps: List[QuadLattice]
    labels: List[Tuple]
    table: List[List[int]]
    norm_bound: int

    @property
    def order(self) -> int:
        return len(self.reps)

    @property
    def identity_index(self) -> int:
        return self.labels.index(self._identity_label)

    def __post_init__(self):
        self._base = _class_bases(self.ctx, self.level)
        self._identity_label = ray_label(QuadLattice.order(self.ctx), self.level, self._base)

    def index_of(self, L: QuadLattice) -> int:
        lab = ray_label(_integral_ray_model(L, self.level), self.level, self._base)
        return self.labels.index(lab)

    def to_json(self) -> dict:
        return {
            "disc": str(self.ctx.disc),
            "level": str(self.level),
            "reps": [[str(v) for v in L.key()] for L in self.reps],
            "table": self.table,
            "norm_bound": str(self.norm_bound),
        }


def _class_bases(ctx: OrderContext, N: int) -> Dict[Form, QuadLattice]:
    # one fixed ideal per ordinary class, prime to l_O*N so generator residues
    # of quotients land in (O/NO)*
    from .quadforms import make_coprime

    out = {}
    for R in enumerate_reduced(ctx.disc):
        _, lifted = make_coprime(R, ctx.conductor * N)
        out[R] = form_to_lattice(ctx, lifted)
    return out


def ray_label(L: QuadLattice, N: int, bases: Dict[Form, QuadLattice]) -> Tuple:
    """Exact ray-class label: (reduced form, unit-orbit of the generator
    residue of L*conj(base) in (O/NO)*)."""
    R, _ = reduce_form(L.to_form())
    base = bases[R]
    w = principal_generator(L.mul(base.conj()))
    if w is None:
        raise InvariantViolation("ideal and its reduction base are not in one class")
    orbit = []
    for z in _unit_elems(L.ctx):
        u = z * w
        orbit.append((int(u.x) % N, int(u.y) % N))
    return (tuple(R), min(orbit))


def expected_ray_class_count(ctx: OrderContext, N: int) -> int:
    """h * |(O/NO)*| / |image of O*|: the kernel-order identity."""
    h = class_number(ctx.disc)
    units = sum(
        1
        for s in range(N)
        for t in range(N)
        if gcd(ctx.elem_norm(t, s), N) == 1
    )
    img = {(x % N, y % N) for (x, y) in _unit_coords(ctx)}
    return h * units // len(img)


def oracle_class_group(
    ctx: OrderContext, N: int, norm_bound: Optional[int] = None
) -> IdealClassOracle:
    """Representatives and group table of C_N(O) by exhaustive bucketing.

    Ideals prime to l_O*N are enumerated up to a norm bound (doubled until the
    independently known class count is reached) and grouped by ray label.
    """
    if N < 1:
        raise DomainError("level must be positive")
    target = expected_ray_class_count(ctx, N)
    bases = _class_bases(ctx, N)
    lN = ctx.conductor * N
    bound = norm_bound or max(2 * isqrt_ceil(-ctx.disc // 3) * N * N, 10 * N * N)
    for attempt in range(9):
        buckets: Dict[Tuple, QuadLattice] = {}
        order_lattice = QuadLattice.order(ctx)
        buckets[ray_label(order_lattice, N, bases)] = order_lattice
        for _, L in integral_ideals(ctx, bound, coprime_to=lN):
            lab = ray_label(L, N, bases)
            buckets.setdefault(lab, L)
            if len(buckets) == target:
                break
        if len(buckets) == target:
            break
        bound *= 2
    else:
        raise ResourceError(
            f"found {len(buckets)} of {target} ray classes up to norm bound {bound}"
        )
    labels = sorted(buckets)
    reps = [buckets[lab] for lab in labels]
    idx = {lab: i for i, lab in enumerate(labels)}
    table = [[0] * len(reps) for _ in reps]
    for i in range(len(reps)):
        for j in range(i, len(reps)):
            lab = ray_label(reps[i].mul(reps[j]), N, bases)
            table[i][j] = table[j][i] = idx[lab]
    return IdealClassOracle(ctx, N, reps, labels, table, bound)


def isqrt_ceil(n: int) -> int:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else r + 1


def form_ideal_dictionary(oracle: IdealClassOracle, class_group) -> List[int]:
    """phi: [Q] -> [[omega_Q, 1]] as an index map from form classes to oracle classes."""
    ctx = oracle.ctx
    N = oracle.level
    out = []
    for Q in class_group.reps:
        L = fractional_omega_lattice(ctx, Q)
        out.append(oracle.index_of(L))
    if sorted(out) != list(range(oracle.order)):
        raise InvariantViolation("form-to-ideal map is not a bijection")
    return out
