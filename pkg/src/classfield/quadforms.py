"""Binary quadratic forms of negative discriminant and their level-N class groups.

The classical layer (Gauss reduction, Dirichlet composition) follows Cox's
treatment.  On top of it sits the level-N refinement: forms with leading
coefficient coprime to N up to the congruence subgroup Gamma_1(N), composed by
the make-coprime / Dirichlet / SL2-correction procedure whose output class is
well defined.  Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import gcd, isqrt
from typing import List, Optional, Sequence, Tuple

from .numerics import BigComplex, DomainError, InvariantViolation, bits_for_digits

__all__ = [
    "xgcd",
    "SL2",
    "Form",
    "OrderContext",
    "ClassGroup",
    "CompositionError",
    "reduce_form",
    "enumerate_reduced",
    "dirichlet_compose",
    "make_coprime",
    "gamma1_equivalent",
    "compose_level",
    "class_enumerate",
    "group_structure",
]


class CompositionError(ValueError):
    """Dirichlet composition precondition gcd(a, a'', (b+b'')/2) = 1 violated."""


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class SL2(tuple):
    """Integer matrix [[p, q], [r, s]] with determinant 1."""

    __slots__ = ()

    def __new__(cls, p: int, q: int, r: int, s: int):
        if p * s - q * r != 1:
            raise DomainError(f"determinant of {(p, q, r, s)} is not 1")
        return tuple.__new__(cls, (p, q, r, s))

    @property
    def p(self):
        return self[0]

    @property
    def q(self):
        return self[1]

    @property
    def r(self):
        return self[2]

    @property
    def s(self):
        return self[3]

    def __mul__(self, other: "SL2") -> "SL2":
        p, q, r, s = self
        P, Q, R, S = other
        return SL2(p * P + q * R, p * Q + q * S, r * P + s * R, r * Q + s * S)

    def inv(self) -> "SL2":
        p, q, r, s = self
        return SL2(s, -q, -r, p)

    def in_gamma1(self, n: int) -> bool:
        p, q, r, s = self
        return (p - 1) % n == 0 and r % n == 0 and (s - 1) % n == 0

    def __repr__(self):
        return f"SL2({self[0]}, {self[1]}, {self[2]}, {self[3]})"


SL2.I = SL2(1, 0, 0, 1)


class Form(tuple):
    """Primitive positive definite integer form a*x^2 + b*x*y + c*y^2."""

    __slots__ = ()

    def __new__(cls, a: int, b: int, c: int):
        disc = b * b - 4 * a * c
        if disc >= 0 or disc % 4 not in (0, 1):
            raise DomainError(f"{(a, b, c)} has invalid discriminant {disc}")
        if a <= 0:
            raise DomainError("leading coefficient must be positive")
        if gcd(gcd(a, b), c) != 1:
            raise DomainError(f"{(a, b, c)} is not primitive")
        return tuple.__new__(cls, (a, b, c))

    @property
    def a(self):
        return self[0]

    @property
    def b(self):
        return self[1]

    @property
    def c(self):
        return self[2]

    @property
    def disc(self) -> int:
        a, b, c = self
        return b * b - 4 * a * c

    def apply(self, g: SL2) -> "Form":
        """Right action Q^gamma = Q(gamma * (x, y)^t)."""
        a, b, c = self
        p, q, r, s = g
        return Form(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    def evaluate(self, x: int, y: int) -> int:
        a, b, c = self
        return a * x * x + b * x * y + c * y * y

    def is_reduced(self) -> bool:
        a, b, c = self
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def omega(self, digits: int) -> BigComplex:
        """Root (-b + sqrt(D))/(2a) of Q(x, 1) in the upper half-plane."""
        return _form_point(self.a, -self.b, digits, self.disc)

    def point(self, digits: int) -> BigComplex:
        """-conj(omega_Q) = (b + sqrt(D))/(2a), the evaluation point for invariants."""
        return _form_point(self.a, self.b, digits, self.disc)

    def __repr__(self):
        return f"Form({self[0]}, {self[1]}, {self[2]})"


def _form_point(a: int, b: int, digits: int, disc: int) -> BigComplex:
    prec = bits_for_digits(digits)
    from mpmath import mp, mpf, sqrt

    with mp.workprec(prec):
        re = mpf(b) / (2 * a)
        im = sqrt(mpf(-disc)) / (2 * a)
    return BigComplex(re, im, prec)


def _is_discriminant(d: int) -> bool:
    return d < 0 and d % 4 in (0, 1)


@dataclass(frozen=True)
class OrderContext:
    """The imaginary quadratic order of discriminant `disc`.

    The order is Z*tau + Z where x^2 + b0*x + c0 is the minimal polynomial of
    tau, with b0 in {0, 1} depending on disc mod 4.  `conductor` is the index
    in the maximal order.
    """

    disc: int
    conductor: int
    b0: int
    c0: int

    @classmethod
    def from_disc(cls, disc: int) -> "OrderContext":
        if not _is_discriminant(disc):
            raise DomainError(f"{disc} is not a negative discriminant")
        if disc % 4 == 0:
            b0, c0 = 0, -disc // 4
        else:
            b0, c0 = 1, (1 - disc) // 4
        return cls(disc, _conductor(disc), b0, c0)

    @property
    def fundamental_disc(self) -> int:
        return self.disc // (self.conductor**2)

    def principal_form(self) -> Form:
        return Form(1, self.b0, self.c0)

    def tau(self, digits: int) -> BigComplex:
        """tau = (-b0 + sqrt(disc))/2 in the upper half-plane."""
        return _form_point(1, -self.b0, digits, self.disc)

    def elem_norm(self, x: int, y: int) -> int:
        """Norm of x + y*tau over Q."""
        return x * x - self.b0 * x * y + self.c0 * y * y


def _is_fundamental(d: int) -> bool:
    if not _is_discriminant(d):
        return False
    if d % 4 == 1:
        return _squarefree(d)
    m = d // 4
    return _squarefree(m) and m % 4 in (2, 3)


def _squarefree(n: int) -> bool:
    n = abs(n)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


def _conductor(disc: int) -> int:
    best = 1
    f = 1
    while f * f <= -disc:
        if disc % (f * f) == 0 and _is_fundamental(disc // (f * f)):
            best = f
        f += 1
    return best


# ---------------------------------------------------------------------------
# reduction


def reduce_form(Q: Form) -> Tuple[Form, SL2]:
    """Gauss reduction; returns (R, gamma) with Q^gamma = R reduced."""
    a, b, c = Q
    g = SL2.I
    T = lambda k: SL2(1, k, 0, 1)
    S = SL2(0, -1, 1, 0)
    while True:
        if a > c:
            a, b, c = c, -b, a
            g = g * S
            continue
        if b <= -a or b > a:
            k = (a - b) // (2 * a)  # translate b into (-a, a]
            b2 = b + 2 * a * k
            c = a * k * k + b * k + c
            b = b2
            g = g * T(k)
            continue
        if b < 0 and (b == -a or a == c):
            if b == -a:
                c = a + b + c
                b = b + 2 * a
                g = g * T(1)
            else:
                a, b, c = c, -b, a
                g = g * S
            continue
        break
    R = Form(a, b, c)
    assert Q.apply(g) == R
    return R, g


def enumerate_reduced(D: int) -> List[Form]:
    """All reduced forms of discriminant D, sorted lexicographically."""
    if not _is_discriminant(D):
        raise DomainError(f"{D} is not a negative discriminant")
    out = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or gcd(gcd(a, b), c) != 1:
                continue
            if b < 0 and (abs(b) == a or a == c):
                continue
            out.append(Form(a, b, c))
    return sorted(out)


def class_number(D: int) -> int:
    return len(enumerate_reduced(D))


# ---------------------------------------------------------------------------
# composition


def dirichlet_compose(Q: Form, Q2: Form, b_shift: int = 0) -> Form:
    """Dirichlet composite a*a''*x^2 + B*x*y + ... with B solving the three
    congruences B = b (2a), B = b'' (2a''), B^2 = D (4aa''); B is reduced to
    the least nonnegative residue mod 2aa'' (shifted by b_shift periods)."""
    D = Q.disc
    if Q2.disc != D:
        raise DomainError("discriminants differ")
    a, b, _ = Q
    a2, b2, _ = Q2
    e = (b + b2) // 2
    g1, x1, y1 = xgcd(a, a2)
    g, u, z = xgcd(g1, e)
    if g != 1:
        raise CompositionError(f"gcd({a}, {a2}, {e}) = {g} != 1")
    x, y = x1 * u, y1 * u
    m = 2 * a * a2
    B = (x * a * b2 + y * a2 * b + z * (b * b2 + D) // 2) % m
    B += b_shift * m
    if (B - b) % (2 * a) or (B - b2) % (2 * a2) or (B * B - D) % (2 * m):
        raise InvariantViolation("composition congruences failed")
    return Form(a * a2, B, (B * B - D) // (4 * a * a2))


def _ring_columns(k: int) -> List[Tuple[int, int]]:
    pts = [
        (p, r)
        for p in range(-k, k + 1)
        for r in range(-k, k + 1)
        if max(abs(p), abs(r)) == k and gcd(p, r) == 1
    ]
    pts.sort(key=lambda t: (abs(t[0]) + abs(t[1]), (t[0] < 0) + (t[1] < 0), t[0] < 0, t[1] < 0, t[0], t[1]))
    return pts


def _complete_column(p: int, r: int) -> SL2:
    # canonical gamma with first column (p, r); minimal (|s|, |q|) completion
    g, x, y = xgcd(p, r)
    assert g == 1
    s0, q0 = x, -y
    best = None
    for t in range(-(abs(s0) + abs(q0) + 2), abs(s0) + abs(q0) + 3):
        q, s = q0 + t * p, s0 + t * r
        key = (abs(s), s < 0, abs(q), q > 0)
        if best is None or key < best[0]:
            best = (key, q, s)
    return SL2(p, best[1], r, best[2])


def make_coprime(Q: Form, M: int, skip: int = 0) -> Tuple[SL2, Form]:
    """gamma in SL2(Z) with leading coefficient of Q^gamma coprime to M.

    Columns (p, r) are searched in increasing max-norm; `skip` passes over the
    first matches (used by the lift-independence property tests).
    """
    if M < 1:
        raise DomainError("modulus must be positive")
    if skip == 0 and gcd(Q.a, M) == 1:
        return SL2.I, Q
    for k in range(0, 12 * (skip + 1) + 2):
        for (p, r) in _ring_columns(k):
            if gcd(Q.evaluate(p, r), M) != 1:
                continue
            if skip > 0:
                skip -= 1
                continue
            g = _complete_column(p, r)
            return g, Q.apply(g)
    raise InvariantViolation("no coprime representative found; Q should represent values coprime to M")


def _reduced_automorphisms(R: Form) -> List[SL2]:
    # proper automorphisms of a reduced form; {+-I} except for D = -3, -4
    auts = [SL2.I, SL2(-1, 0, 0, -1)]
    if R.disc == -4 and (R.a, R.b, R.c) == (1, 0, 1):
        S = SL2(0, -1, 1, 0)
        auts += [S, S * SL2(-1, 0, 0, -1)]
    elif R.disc == -3 and (R.a, R.b, R.c) == (1, 1, 1):
        U = SL2(0, -1, 1, 1)
        auts += [U, U * U, U * SL2(-1, 0, 0, -1), U * U * SL2(-1, 0, 0, -1)]
    return auts


def proper_equivalence(Q: Form, Q2: Form) -> Optional[SL2]:
    """Some gamma with Q^gamma = Q2, or None."""
    if Q.disc != Q2.disc:
        raise DomainError("discriminants differ")
    R1, g1 = reduce_form(Q)
    R2, g2 = reduce_form(Q2)
    if R1 != R2:
        return None
    return g1 * g2.inv()


def gamma1_equivalent(Q: Form, Q2: Form, N: int) -> Optional[SL2]:
    """Witness gamma in Gamma_1(N) with Q^gamma = Q2, or None.

    The full solution set is gamma0 * Aut(Q2); each member is tested for
    membership in Gamma_1(N).
    """
    if Q.disc != Q2.disc:
        raise DomainError("discriminants differ")
    if gcd(Q.a, N) != 1 or gcd(Q2.a, N) != 1:
        raise DomainError("leading coefficients must be coprime to the level")
    R1, g1 = reduce_form(Q)
    R2, g2 = reduce_form(Q2)
    if R1 != R2:
        return None
    g0 = g1 * g2.inv()
    for aut in _reduced_automorphisms(R2):
        g = g0 * (g2 * aut * g2.inv())
        if g.in_gamma1(N):
            return g
    return None


def canonical_form(Q: Form, N: int, budget: int = 400) -> Form:
    """Small representative of the Gamma_1(N) class of Q.

    Best-first search over the translation and lower-triangular generators,
    minimizing (a, |b|, sign, c).  The label is cosmetic: class identity
    decisions always go through gamma1_equivalent.
    """
    import heapq

    key = lambda F: (F.a, abs(F.b), F.b < 0, F.c)
    gens = [SL2(1, 1, 0, 1), SL2(1, -1, 0, 1), SL2(1, 0, N, 1), SL2(1, 0, -N, 1)]
    best = Q
    seen = {Q}
    heap = [(key(Q), Q)]
    visited = 0
    while heap and visited < budget:
        _, F = heapq.heappop(heap)
        visited += 1
        for g in gens:
            G = F.apply(g)
            if G in seen:
                continue
            seen.add(G)
            if key(G) < key(best):
                best = G
            if G.a <= 4 * best.a + 4:  # only explore near the current floor
                heapq.heappush(heap, (key(G), G))
    return best


def sl2_lift_bottom_row(u: int, v: int, N: int) -> SL2:
    """Some sigma in SL2(Z) with bottom row congruent to (u, v) mod N."""
    if gcd(gcd(u, v), N) != 1:
        raise DomainError("gcd(u, v, N) must be 1")
    for radius in range(0, 64):
        for j in range(-radius, radius + 1):
            for k in range(-radius, radius + 1):
                if max(abs(j), abs(k)) != radius:
                    continue
                u1, v1 = u + j * N, v + k * N
                if (u1, v1) != (0, 0) and gcd(u1, v1) == 1:
                    _, al, be = xgcd(v1, u1)
                    return SL2(al, -be, u1, v1)
    raise InvariantViolation("no SL2 lift found")


def compose_level(
    Q: Form,
    Q2: Form,
    ctx: OrderContext,
    N: int,
    coprime_skip: int = 0,
    b_shift: int = 0,
    sigma_shift: Tuple[int, int, int] = (0, 0, 0),
) -> Form:
    """Product representative of [Q][Q2] in the level-N class group.

    Procedure: move Q2 by gamma so its leading coefficient is coprime to a*N,
    Dirichlet-compose, solve u*nu1 + v*nu2 = 1 exactly for the bottom row of
    the SL2 correction, and undo it on the composite.  The output is well
    defined up to Gamma_1(N)-equivalence; the three keyword knobs select
    alternate gamma / B / sigma lifts for the independence property tests.
    """
    if Q.disc != ctx.disc or Q2.disc != ctx.disc:
        raise DomainError("form discriminants must match the order")
    if gcd(Q.a, N) != 1 or gcd(Q2.a, N) != 1:
        raise DomainError("forms must lie in Q(D, N)")
    a = Q.a
    gam, Qc = make_coprime(Q2, a * N, skip=coprime_skip)
    Q3 = dirichlet_compose(Q, Qc, b_shift=b_shift)
    B = Q3.b
    _, _, r, s = gam
    a2, b2, _ = Qc
    # u*omega''' + v = j(gamma, omega'') = r*omega'' + s, solved in Q(sqrt D)
    u = r * a
    v = s + r * (B - b2) // (2 * a2)
    if gcd(gcd(u, v), N) != 1:
        raise InvariantViolation("gcd(u, v, N) != 1 contradicts primality of the product ideal")
    ju, jv, jt = sigma_shift
    sigma = sl2_lift_bottom_row((u + ju * N) % max(N, 1), (v + jv * N) % max(N, 1), N)
    if jt:
        p, q, rr, ss = sigma
        sigma = SL2(p + jt * N * rr, q + jt * N * ss, rr, ss)
    return Q3.apply(sigma.inv())


# ---------------------------------------------------------------------------
# the class group


@dataclass
class ClassGroup:
    """Level-N form class group: representatives, table, structure, characters.

    `table[i][j]` is the index of [reps[i]][reps[j]]; index 0 is the class of
    the principal form.  Characters are stored as exact root-of-unity
    exponents: characters[k][i] = r in Q/Z means chi_k(reps[i]) = e^(2 pi i r).
    """

    disc: int
    level: int
    reps: List[Form]
    table: List[List[int]]
    invariant_factors: List[int]
    characters: List[List[Fraction]]

    @property
    def order(self) -> int:
        return len(self.reps)

    @property
    def identity_index(self) -> int:
        return 0

    def index_of(self, Q: Form) -> int:
        for i, R in enumerate(self.reps):
            if gamma1_equivalent(Q, R, self.level) is not None:
                return i
        raise DomainError(f"{Q} does not lie in any known class")

    def inverse_index(self, i: int) -> int:
        return self.table[i].index(0)

    def character_value(self, k: int, i: int, digits: int = 30) -> BigComplex:
        """chi_k(reps[i]) as a complex root of unity."""
        from mpmath import mp, mpf, cos, sin, pi

        r = self.characters[k][i]
        prec = bits_for_digits(digits)
        with mp.workprec(prec):
            t = 2 * pi * mpf(r.numerator) / r.denominator
            return BigComplex(cos(t), sin(t), prec)

    def to_json(self) -> dict:
        return {
            "disc": str(self.disc),
            "level": str(self.level),
            "reps": [[str(x) for x in Q] for Q in self.reps],
            "table": self.table,
            "invariant_factors": [str(d) for d in self.invariant_factors],
            "characters": [[str(r) for r in row] for row in self.characters],
        }

    def format_table(self) -> str:
        """Text layout with rows/columns labelled g1..g|G|."""
        n = self.order
        w = len(f"g{n}")
        head = " " * w + " | " + " ".join(f"g{j + 1}".rjust(w) for j in range(n))
        lines = [head, "-" * len(head)]
        for i in range(n):
            row = " ".join(f"g{self.table[i][j] + 1}".rjust(w) for j in range(n))
            lines.append(f"g{i + 1}".rjust(w) + " | " + row)
        return "\n".join(lines)


def _expected_order(ctx: OrderContext, N: int) -> int:
    """|C_N(O)| = h * |(O/NO)*| / |image of the unit group|."""
    h = class_number(ctx.disc)
    units = [
        (s, t)
        for s in range(N)
        for t in range(N)
        if gcd(ctx.elem_norm(t, s), N) == 1
    ]
    imgs = set()
    for (x, y) in _unit_coords(ctx):
        imgs.add((x % N, y % N))
    return h * len(units) // len(imgs)


def _unit_coords(ctx: OrderContext) -> List[Tuple[int, int]]:
    # units of O as (x, y) with x + y*tau; full lists for D = -3, -4
    units = [(1, 0), (-1, 0)]
    if ctx.disc == -4:
        units += [(0, 1), (0, -1)]
    elif ctx.disc == -3:
        units += [(0, 1), (0, -1), (-1, -1), (1, 1)]
    return units


def class_enumerate(ctx: OrderContext, N: int, expected_order: Optional[int] = None) -> ClassGroup:
    """Build C_N(D) by closing the reduced-form lifts and the principal-coset
    kernel under compose_level, deduplicating with gamma1_equivalent."""
    if N < 1:
        raise DomainError("level must be positive")
    target = expected_order if expected_order is not None else _expected_order(ctx, N)

    reps: List[Form] = []
    reduced_cache: List[Form] = []

    def find(Q: Form) -> Optional[int]:
        R, _ = reduce_form(Q)
        for i, rep in enumerate(reps):
            if reduced_cache[i] != R:
                continue
            if gamma1_equivalent(Q, rep, N) is not None:
                return i
        return None

    def add(Q: Form) -> int:
        i = find(Q)
        if i is not None:
            return i
        if len(reps) >= target:
            raise InvariantViolation(
                f"closure produced more than the expected {target} classes"
            )
        reps.append(canonical_form(Q, N))
        reduced_cache.append(reduce_form(Q)[0])
        return len(reps) - 1

    Q0 = ctx.principal_form()
    add(Q0)
    for R in enumerate_reduced(ctx.disc):
        _, lifted = make_coprime(R, N)
        add(lifted)
    # kernel of C_N -> C_1: classes of principal ideals (u*tau + v) coprime to N
    for u in range(N):
        for v in range(N):
            if gcd(ctx.elem_norm(v, u), N) != 1:
                continue
            sigma = sl2_lift_bottom_row(u, v, N)
            add(Q0.apply(sigma.inv()))

    # close under composition
    frontier = list(range(len(reps)))
    while frontier:
        new_frontier = []
        for i in frontier:
            for j in range(len(reps)):
                before = len(reps)
                add(compose_level(reps[i], reps[j], ctx, N))
                if len(reps) > before:
                    new_frontier.append(len(reps) - 1)
        frontier = new_frontier

    if len(reps) != target:
        raise InvariantViolation(
            f"closure found {len(reps)} classes, expected {target}"
        )

    table = [[0] * len(reps) for _ in reps]
    for i in range(len(reps)):
        for j in range(i, len(reps)):
            k = find(compose_level(reps[i], reps[j], ctx, N))
            if k is None:
                raise InvariantViolation("product escaped the closed class list")
            table[i][j] = table[j][i] = k

    factors, characters = group_structure_from_table(table, identity=0)
    return ClassGroup(ctx.disc, N, reps, table, factors, characters)


# ---------------------------------------------------------------------------
# abelian structure from a multiplication table


def _validate_group_table(table: Sequence[Sequence[int]], identity: int) -> None:
    n = len(table)
    for i in range(n):
        if table[identity][i] != i or table[i][identity] != i:
            raise InvariantViolation("identity row/column malformed")
        if 0 not in table[i]:
            raise InvariantViolation(f"element {i} has no inverse")
        for j in range(n):
            if table[i][j] != table[j][i]:
                raise InvariantViolation("table is not commutative")
    if n <= 24:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if table[table[i][j]][k] != table[i][table[j][k]]:
                        raise InvariantViolation("table is not associative")


def _element_order(table, identity, g) -> int:
    k, x = 1, g
    while x != identity:
        x = table[x][g]
        k += 1
    return k


def _power(table, identity, g, e) -> int:
    x = identity
    for _ in range(e):
        x = table[x][g]
    return x


def _abelian_basis(table, identity) -> List[Tuple[int, int]]:
    """Generators (g_i, d_i) with G = <g_1> x ... x <g_k>, d_1 >= d_2 >= ...

    Max-order generator splits off as a direct factor; recurse on the quotient
    and lift quotient generators back with order-preserving adjustment.
    """
    n = len(table)
    if n == 1:
        return []
    orders = [_element_order(table, identity, g) for g in range(n)]
    d1 = max(orders)
    g1 = orders.index(d1)
    cyc = [_power(table, identity, g1, e) for e in range(d1)]
    # quotient by <g1>
    coset_of = {}
    cosets = []
    for x in range(n):
        if x in coset_of:
            continue
        cs = frozenset(table[x][c] for c in cyc)
        idx = len(cosets)
        cosets.append(cs)
        for y in cs:
            coset_of[y] = idx
    qn = len(cosets)
    qtable = [[0] * qn for _ in range(qn)]
    qrep = [min(cs) for cs in cosets]
    for i in range(qn):
        for j in range(qn):
            qtable[i][j] = coset_of[table[qrep[i]][qrep[j]]]
    qidentity = coset_of[identity]
    sub = _abelian_basis(qtable, qidentity)

    basis = [(g1, d1)]
    cyc_index = {c: e for e, c in enumerate(cyc)}
    inv_g1 = table[g1].index(identity)
    for (qg, m) in sub:
        g = qrep[qg]
        t = cyc_index[_power(table, identity, g, m)]  # g^m = g1^t with m | t
        if t % m:
            raise InvariantViolation("lift adjustment failed")
        step = _power(table, identity, inv_g1, t // m)
        g = table[g][step]
        if _element_order(table, identity, g) != m:
            raise InvariantViolation("lifted generator has wrong order")
        basis.append((g, m))
    return basis


def group_structure_from_table(
    table: Sequence[Sequence[int]], identity: int = 0
) -> Tuple[List[int], List[List[Fraction]]]:
    """(invariant factors d_1 | d_2 | ..., character table) of an abelian table."""
    _validate_group_table(table, identity)
    n = len(table)
    basis = _abelian_basis(table, identity)
    # exponent coordinates of every element relative to the basis
    coords = {identity: tuple(0 for _ in basis)}
    if basis:
        gens = [g for g, _ in basis]
        dims = [d for _, d in basis]
        for exps in iproduct(*[range(d) for d in dims]):
            x = identity
            for g, e in zip(gens, exps):
                x = table[x][_power(table, identity, g, e)]
            coords[x] = exps
        if len(coords) != n:
            raise InvariantViolation("basis does not span the group")
        characters = []
        for ks in iproduct(*[range(d) for d in dims]):
            row = []
            for x in range(n):
                exps = coords[x]
                r = sum(Fraction(k * e, d) for k, e, d in zip(ks, exps, dims)) % 1
                row.append(r)
            characters.append(row)
    else:
        characters = [[Fraction(0)]]
    factors = sorted((d for _, d in basis if d > 1))
    return factors, characters


def group_structure(G: ClassGroup) -> Tuple[List[int], List[List[Fraction]]]:
    """Invariant factors and character table of a computed class group."""
    return group_structure_from_table(G.table, G.identity_index)
