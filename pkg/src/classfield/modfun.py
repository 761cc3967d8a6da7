"""High-precision evaluation of eta, Delta, j, Siegel, theta, Weierstrass and
Fricke functions by their q-products and q-series.

All evaluators take a target decimal-digit count; work happens at target plus
guard digits, products are truncated once the geometric tail bound drops below
the working precision, and results carry the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Tuple

import mpmath
from mpmath import mp

from .numerics import BigComplex, DomainError, bits_for_digits
from .quadforms import OrderContext

__all__ = [
    "FrickeIndex",
    "EllipticModel",
    "GUARD_DIGITS",
    "eta",
    "delta_j",
    "j_eisenstein",
    "siegel",
    "theta1",
    "wp",
    "wp_lattice_sum",
    "fricke",
    "g2_g3_delta",
    "elliptic_model",
    "torsion_xy",
]

GUARD_DIGITS = 30


@dataclass(frozen=True)
class FrickeIndex:
    """Row vector (v1, v2) of rationals, not both integral."""

    v1: Fraction
    v2: Fraction

    def __post_init__(self):
        if self.v1.denominator == 1 and self.v2.denominator == 1:
            raise DomainError("index vector must be nonintegral")

    @classmethod
    def of(cls, v1, v2) -> "FrickeIndex":
        return cls(Fraction(v1), Fraction(v2))

    @property
    def level(self) -> int:
        """Smallest N with N*v integral."""
        d1 = self.v1.denominator
        d2 = self.v2.denominator
        return d1 * d2 // gcd(d1, d2)

    def is_primitive(self, N: int) -> bool:
        return self.level == N

    def normalized(self) -> "FrickeIndex":
        """Canonical representative of {v, -v} mod Z^2, entries in [0, 1).

        Valid for even-weight family members only; the raw Siegel product is
        evaluated at the index as given.
        """
        a = (self.v1 % 1, self.v2 % 1)
        b = ((-self.v1) % 1, (-self.v2) % 1)
        return FrickeIndex(*min(a, b))

    def act(self, M) -> "FrickeIndex":
        """Index action v -> v*M for an integer 2x2 matrix (p, q, r, s)."""
        p, q, r, s = M
        return FrickeIndex(self.v1 * p + self.v2 * r, self.v1 * q + self.v2 * s)


@dataclass(frozen=True)
class EllipticModel:
    """Coefficients of y^2 = 4x^3 - A*x - B with j-invariant j(O)."""

    A: BigComplex
    B: BigComplex


def _working_bits(digits: int) -> int:
    return bits_for_digits(digits + GUARD_DIGITS)


def _mpc(z: BigComplex) -> mpmath.mpc:
    return z.to_mpc()


def _require_upper(tau: BigComplex) -> None:
    if not tau.im > 0:
        raise DomainError("point must lie in the upper half-plane")


def _nterms(t, digits: int, extra: int = 0) -> int:
    # geometric tail: t^n below 10^-(digits+guard)
    n = int(mp.ceil((digits + GUARD_DIGITS) * mp.log(10) / (-mp.log(t)))) + 8
    return n + extra


def _qexp(w, scale=1) -> mpmath.mpc:
    """exp(2*pi*i*w*scale); fractional q-powers always go through here."""
    return mpmath.exp(2j * mpmath.pi * w * scale)


def _frac(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def eta(tau: BigComplex, digits: int) -> BigComplex:
    """Dedekind eta by its product, truncated at the geometric tail bound."""
    _require_upper(tau)
    prec = _working_bits(digits)
    with mp.workprec(prec):
        t_ = _mpc(tau)
        q = _qexp(t_)
        nmax = _nterms(abs(q), digits)
        prod = mpmath.mpc(1)
        qn = mpmath.mpc(1)
        for _ in range(nmax):
            qn *= q
            prod *= 1 - qn
        val = mpmath.exp(1j * mpmath.pi * t_ / 12) * prod
    return BigComplex.from_mpc(val, prec)


def _sigma_table(k: int, nmax: int):
    # divisor power sums sigma_k(1..nmax) by sieving
    s = [0] * (nmax + 1)
    for d in range(1, nmax + 1):
        dk = d**k
        for m in range(d, nmax + 1, d):
            s[m] += dk
    return s


def _eisenstein(tau_mpc, digits: int) -> Tuple[mpmath.mpc, mpmath.mpc]:
    q = _qexp(tau_mpc)
    nmax = _nterms(abs(q), digits)
    s3 = _sigma_table(3, nmax)
    s5 = _sigma_table(5, nmax)
    e4 = mpmath.mpc(1)
    e6 = mpmath.mpc(1)
    qn = mpmath.mpc(1)
    for n in range(1, nmax + 1):
        qn *= q
        e4 += 240 * s3[n] * qn
        e6 -= 504 * s5[n] * qn
    return e4, e6


def g2_g3_delta(tau: BigComplex, digits: int):
    """(g2, g3, Delta) for the lattice [tau, 1]; Delta = (2 pi)^12 eta^24."""
    _require_upper(tau)
    prec = _working_bits(digits)
    with mp.workprec(prec):
        t_ = _mpc(tau)
        e4, e6 = _eisenstein(t_, digits)
        twopi = 2 * mpmath.pi
        g2 = twopi**4 * e4 / 12
        g3 = twopi**6 * e6 / 216
        delta = g2**3 - 27 * g3**2
    return (
        BigComplex.from_mpc(g2, prec),
        BigComplex.from_mpc(g3, prec),
        BigComplex.from_mpc(delta, prec),
    )


def delta_j(tau: BigComplex, digits: int) -> Tuple[BigComplex, BigComplex]:
    """(Delta, j) at [tau, 1]; Delta from eta^24, j from the half-index Siegel
    relation j = (g^12 + 16)^3 / g^12."""
    _require_upper(tau)
    prec = _working_bits(digits)
    e = eta(tau, digits)
    with mp.workprec(prec):
        delta = (2 * mpmath.pi) ** 12 * _mpc(e) ** 24
        x = _mpc(siegel(FrickeIndex.of(0, Fraction(1, 2)), tau, digits)) ** 12
        j = (x + 16) ** 3 / x
    return BigComplex.from_mpc(delta, prec), BigComplex.from_mpc(j, prec)


def j_eisenstein(tau: BigComplex, digits: int) -> BigComplex:
    """j = 1728 E4^3/(E4^3 - E6^2); independent route used for cross-checks."""
    _require_upper(tau)
    prec = _working_bits(digits)
    with mp.workprec(prec):
        e4, e6 = _eisenstein(_mpc(tau), digits)
        val = 1728 * e4**3 / (e4**3 - e6**2)
    return BigComplex.from_mpc(val, prec)


def siegel(v: FrickeIndex, tau: BigComplex, digits: int) -> BigComplex:
    """Siegel function by its infinite product, evaluated at the raw index."""
    _require_upper(tau)
    prec = _working_bits(digits)
    with mp.workprec(prec):
        t_ = _mpc(tau)
        q = _qexp(t_)
        z = _frac(v.v1) * t_ + _frac(v.v2)
        qz = _qexp(z)
        b2 = v.v1 * v.v1 - v.v1 + Fraction(1, 6)  # second Bernoulli polynomial
        lead = _qexp(t_, scale=_frac(b2 / 2))
        phase = mpmath.exp(1j * mpmath.pi * _frac(v.v2 * (v.v1 - 1)))
        nmax = _nterms(abs(q), digits, extra=2)
        prod = 1 - qz
        qn = mpmath.mpc(1)
        for _ in range(nmax):
            qn *= q
            prod *= (1 - qn * qz) * (1 - qn / qz)
        val = -lead * phase * prod
    return BigComplex.from_mpc(val, prec)


def theta1(omega: BigComplex, z: BigComplex, digits: int) -> BigComplex:
    """First Jacobi theta in the product normalization tied to eta."""
    _require_upper(z)
    prec = _working_bits(digits)
    e = eta(z, digits)
    with mp.workprec(prec):
        w = _mpc(omega)
        z_ = _mpc(z)
        q = _qexp(z_)
        shift = int(mp.ceil(abs(w.imag) / z_.imag)) + 1
        nmax = _nterms(abs(q), digits, extra=shift)
        qw = _qexp(w)
        prod = mpmath.mpc(1)
        qn = mpmath.mpc(1)
        for _ in range(nmax):
            qn *= q
            prod *= (1 - qn * qw) * (1 - qn / qw)
        val = 2 * mpmath.exp(1j * mpmath.pi * z_ / 6) * mpmath.sin(mpmath.pi * w) * _mpc(e) * prod
    return BigComplex.from_mpc(val, prec)


def _reduce_mod_lattice(z_, tau_):
    m = int(mpmath.nint(z_.imag / tau_.imag))
    z_ = z_ - m * tau_
    n = int(mpmath.nint(z_.real))
    return z_ - n


def wp(z: BigComplex, tau: BigComplex, digits: int) -> Tuple[BigComplex, BigComplex]:
    """(wp, wp') for the lattice [tau, 1] by the classical q-series."""
    _require_upper(tau)
    prec = _working_bits(digits)
    with mp.workprec(prec):
        t_ = _mpc(tau)
        z_ = _reduce_mod_lattice(_mpc(z), t_)
        q = _qexp(t_)
        u = _qexp(z_)
        if abs(1 - u) < mpmath.mpf(2) ** (-prec // 2):
            raise DomainError("wp pole: z lies on the lattice")
        nmax = _nterms(abs(q), digits, extra=4)
        twopii = 2j * mpmath.pi
        p = mpmath.mpf(1) / 12 + u / (1 - u) ** 2
        dp = u * (1 + u) / (1 - u) ** 3
        qn = mpmath.mpc(1)
        for _ in range(1, nmax + 1):
            qn *= q
            a = qn * u
            b = qn / u
            p += a / (1 - a) ** 2 + b / (1 - b) ** 2 - 2 * qn / (1 - qn) ** 2
            dp += a * (1 + a) / (1 - a) ** 3 - b * (1 + b) / (1 - b) ** 3
        val_p = twopii**2 * p
        val_dp = twopii**3 * dp
    return BigComplex.from_mpc(val_p, prec), BigComplex.from_mpc(val_dp, prec)


def wp_lattice_sum(z: BigComplex, tau: BigComplex, radius: int = 40) -> BigComplex:
    """Slowly convergent lattice-sum evaluation of wp; desk oracle for tests."""
    prec = bits_for_digits(25)
    with mp.workprec(prec):
        z_ = _mpc(z)
        t_ = _mpc(tau)
        total = 1 / z_**2
        for m in range(-radius, radius + 1):
            for n in range(-radius, radius + 1):
                if m == 0 and n == 0:
                    continue
                w = m * t_ + n
                total += 1 / (z_ - w) ** 2 - 1 / w**2
    return BigComplex.from_mpc(total, prec)


def fricke(v: FrickeIndex, tau: BigComplex, digits: int) -> BigComplex:
    """Fricke function: -2^7 3^3 (g2 g3 / Delta) wp(v1*tau + v2)."""
    _require_upper(tau)
    prec = _working_bits(digits)
    vn = v.normalized()
    g2, g3, delta = g2_g3_delta(tau, digits)
    with mp.workprec(prec):
        t_ = _mpc(tau)
        z = BigComplex.from_mpc(_frac(vn.v1) * t_ + _frac(vn.v2), prec)
    p, _ = wp(z, tau, digits)
    with mp.workprec(prec):
        val = -(2**7) * 3**3 * _mpc(g2) * _mpc(g3) / _mpc(delta) * _mpc(p)
    return BigComplex.from_mpc(val, prec)


def elliptic_model(ctx: OrderContext, digits: int) -> EllipticModel:
    """Weierstrass coefficients A, B built from j(O); needs D != -3, -4."""
    if ctx.disc in (-3, -4):
        raise DomainError("model undefined when g2*g3 = 0")
    tau = ctx.tau(digits + GUARD_DIGITS)
    _, j = delta_j(tau, digits)
    prec = _working_bits(digits)
    with mp.workprec(prec):
        jj = _mpc(j)
        A = jj * (jj - 1728) / (2**12 * 3**9)
        B = jj * (jj - 1728) ** 2 / (2**18 * 3**15)
    return EllipticModel(BigComplex.from_mpc(A, prec), BigComplex.from_mpc(B, prec))


def torsion_xy(ctx: OrderContext, v: FrickeIndex, digits: int) -> Tuple[BigComplex, BigComplex]:
    """Coordinates (X_v, Y_v) of the torsion point indexed by v on the model.

    Y uses the principal branch of sqrt((g2 g3/Delta)^3); only Y ratios and
    Y^2 are convention-free.
    """
    if ctx.disc in (-3, -4):
        raise DomainError("model undefined when g2*g3 = 0")
    prec = _working_bits(digits)
    tau = ctx.tau(digits + GUARD_DIGITS)
    g2, g3, delta = g2_g3_delta(tau, digits)
    with mp.workprec(prec):
        z = BigComplex.from_mpc(_frac(v.v1) * _mpc(tau) + _frac(v.v2), prec)
    p, dp = wp(z, tau, digits)
    with mp.workprec(prec):
        scale = _mpc(g2) * _mpc(g3) / _mpc(delta)
        X = scale * _mpc(p)
        Y = mpmath.sqrt(scale**3) * _mpc(dp)
    return BigComplex.from_mpc(X, prec), BigComplex.from_mpc(Y, prec)
