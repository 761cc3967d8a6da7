import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp

from classfield import modfun
from classfield.modfun import FrickeIndex
from classfield.numerics import BigComplex, DomainError, bits_for_digits
from classfield.quadforms import OrderContext, enumerate_reduced

DIGITS = 60
PREC = bits_for_digits(DIGITS + modfun.GUARD_DIGITS)
RNG_SEED = 1729


def tol(drop=10):
    return mpmath.mpf(10) ** (-(DIGITS - drop))


def rand_tau(rng):
    return BigComplex(Fraction(rng.randint(-45, 45), 100), Fraction(rng.randint(15, 250), 100), PREC)


def moebius(g, tau):
    p, q, r, s = g
    with mp.workprec(PREC):
        t = tau.to_mpc()
        return BigComplex.from_mpc((p * t + q) / (r * t + s), PREC)


# -- eta ----------------------------------------------------------------------


def test_eta_at_i_gamma_oracle():
    e = modfun.eta(BigComplex(0, 1, PREC), DIGITS)
    with mp.workprec(PREC):
        ref = mpmath.gamma(mpmath.mpf(1) / 4) / (2 * mpmath.pi ** (mpmath.mpf(3) / 4))
        assert abs(e.to_mpc() - ref) < tol()


def test_eta_translation_factor():
    rng = random.Random(RNG_SEED)
    for _ in range(3):
        tau = rand_tau(rng)
        with mp.workprec(PREC):
            lhs = modfun.eta(BigComplex.from_mpc(tau.to_mpc() + 1, PREC), DIGITS).to_mpc()
            rhs = mpmath.exp(1j * mpmath.pi / 12) * modfun.eta(tau, DIGITS).to_mpc()
            assert abs(lhs - rhs) < tol()


def test_eta_at_2i_doubled_precision_oracle():
    e = modfun.eta(BigComplex(0, 2, PREC), DIGITS)
    e2 = modfun.eta(BigComplex(0, 2, bits_for_digits(2 * DIGITS + 30)), 2 * DIGITS)
    with mp.workprec(PREC):
        assert abs(e.to_mpc() - e2.to_mpc()) < tol()
        # closed form eta(2i) = eta(i) / 2^(3/8)
        ei = modfun.eta(BigComplex(0, 1, PREC), DIGITS).to_mpc()
        assert abs(e.to_mpc() - ei / mpmath.mpf(2) ** Fraction(3, 8)) < tol()


def test_eta_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        modfun.eta(BigComplex(0, -1, PREC), DIGITS)


# -- Delta and j --------------------------------------------------------------


def test_j_special_values():
    _, j_i = modfun.delta_j(BigComplex(0, 1, PREC), DIGITS)
    with mp.workprec(PREC):
        assert abs(j_i.to_mpc() - 1728) < tol()
        rho = BigComplex(Fraction(-1, 2), mpmath.sqrt(3) / 2, PREC)
    _, j_rho = modfun.delta_j(rho, DIGITS)
    assert abs(j_rho.to_mpc()) < tol()


def test_j_at_order_point_real_and_stable(ctx200):
    tau = ctx200.tau(DIGITS + modfun.GUARD_DIGITS)
    _, j1 = modfun.delta_j(tau, DIGITS)
    _, j2 = modfun.delta_j(ctx200.tau(2 * DIGITS + modfun.GUARD_DIGITS), 2 * DIGITS)
    with mp.workprec(PREC):
        assert j1.re > 0
        assert abs(j1.im) < tol()
        assert abs(j1.to_mpc() - j2.to_mpc()) / abs(j2.to_mpc()) < tol()


def test_classical_class_polynomial_has_integer_coefficients(ctx200):
    # prod over reduced forms of (x - j(omega_Q)) must be an integer polynomial
    from classfield.numerics import recognize_integer

    js = []
    for Q in enumerate_reduced(-200):
        _, j = modfun.delta_j(Q.omega(DIGITS + modfun.GUARD_DIGITS), DIGITS)
        js.append(j)
    with mp.workprec(PREC):
        coeffs = [mpmath.mpc(1)]
        for j in js:
            new = [mpmath.mpc(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                new[k] -= c * j.to_mpc()
                new[k + 1] += c
            coeffs = new
        for c in coeffs:
            assert recognize_integer(BigComplex.from_mpc(c, PREC), 1e-20) is not None


def test_delta_eta_vs_eisenstein():
    rng = random.Random(RNG_SEED)
    tau = rand_tau(rng)
    d1, _ = modfun.delta_j(tau, DIGITS)
    g2, g3, d2 = modfun.g2_g3_delta(tau, DIGITS)
    with mp.workprec(PREC):
        assert abs(d1.to_mpc() - d2.to_mpc()) / abs(d2.to_mpc()) < tol()


def test_modularity_smoke():
    rng = random.Random(RNG_SEED + 1)
    S = (0, -1, 1, 0)
    with mp.workprec(PREC):
        for _ in range(5):
            tau = rand_tau(rng)
            _, j0 = modfun.delta_j(tau, DIGITS)
            _, jT = modfun.delta_j(BigComplex.from_mpc(tau.to_mpc() + 1, PREC), DIGITS)
            _, jS = modfun.delta_j(moebius(S, tau), DIGITS)
            scale = max(1, abs(j0.to_mpc()))
            assert abs(j0.to_mpc() - jT.to_mpc()) / scale < tol()
            assert abs(j0.to_mpc() - jS.to_mpc()) / scale < tol()
            d0, _ = modfun.delta_j(tau, DIGITS)
            dS, _ = modfun.delta_j(moebius(S, tau), DIGITS)
            assert abs(dS.to_mpc() - tau.to_mpc() ** 12 * d0.to_mpc()) / abs(dS.to_mpc()) < tol()


# -- Siegel -------------------------------------------------------------------


def test_siegel_j_relation_random_points():
    rng = random.Random(RNG_SEED + 2)
    half = FrickeIndex.of(0, Fraction(1, 2))
    with mp.workprec(PREC):
        for _ in range(5):
            tau = rand_tau(rng)
            x = modfun.siegel(half, tau, DIGITS).to_mpc() ** 12
            _, j = modfun.delta_j(tau, DIGITS)
            je = modfun.j_eisenstein(tau, DIGITS)
            assert abs((x + 16) ** 3 / x - je.to_mpc()) / abs(je.to_mpc()) < tol(5)
            assert abs(j.to_mpc() - je.to_mpc()) / abs(je.to_mpc()) < tol(5)


def test_siegel_negation_antisymmetry():
    rng = random.Random(RNG_SEED + 3)
    for _ in range(4):
        tau = rand_tau(rng)
        v = FrickeIndex.of(Fraction(rng.randint(0, 2), 3), Fraction(rng.randint(1, 5), 6))
        mv = FrickeIndex.of(-v.v1, -v.v2)
        with mp.workprec(PREC):
            assert abs(modfun.siegel(v, tau, DIGITS).to_mpc() + modfun.siegel(mv, tau, DIGITS).to_mpc()) < tol()


def test_siegel_lower_bound_nonprincipal_forms():
    # |g_[0,1/2](omega_Q)| > 1.98 exp(-pi sqrt(|D|)/24) off the principal class
    half = FrickeIndex.of(0, Fraction(1, 2))
    with mp.workprec(PREC):
        bound = mpmath.mpf("1.98") * mpmath.exp(-mpmath.pi * mpmath.sqrt(200) / 24)
        for Q in enumerate_reduced(-200)[1:]:
            g = modfun.siegel(half, Q.omega(DIGITS + modfun.GUARD_DIGITS), DIGITS)
            assert abs(g.to_mpc()) > bound


def test_fricke_index_validation():
    with pytest.raises(DomainError):
        FrickeIndex.of(1, 2)
    v = FrickeIndex.of(Fraction(1, 2), Fraction(1, 3))
    assert v.level == 6
    assert v.is_primitive(6)
    assert FrickeIndex.of(0, Fraction(2, 3)).normalized() == FrickeIndex.of(0, Fraction(1, 3))
    assert FrickeIndex.of(0, Fraction(5, 3)).normalized() == FrickeIndex.of(0, Fraction(1, 3))


# -- theta --------------------------------------------------------------------


def test_theta1_zero_and_odd():
    rng = random.Random(RNG_SEED + 4)
    z = rand_tau(rng)
    with mp.workprec(PREC):
        assert abs(modfun.theta1(BigComplex(0, 0, PREC), z, DIGITS).to_mpc()) < tol()
        w = BigComplex(Fraction(2, 7), Fraction(1, 9), PREC)
        lhs = modfun.theta1(-w, z, DIGITS).to_mpc()
        rhs = -modfun.theta1(w, z, DIGITS).to_mpc()
        assert abs(lhs - rhs) < tol()


def test_theta1_matches_siegel_magnitude(ctx200):
    # |theta1(a'/N, -conj omega)/eta| = |g_[0, a'/N](-conj omega)| (real shift)
    from classfield.quadforms import Form

    Q = Form(17, 2, 3)
    z = Q.point(DIGITS + modfun.GUARD_DIGITS)
    with mp.workprec(PREC):
        for ap in (1, 2):
            th = modfun.theta1(BigComplex(Fraction(ap, 3), 0, PREC), z, DIGITS).to_mpc()
            e = modfun.eta(z, DIGITS).to_mpc()
            g = modfun.siegel(FrickeIndex.of(0, Fraction(ap, 3)), z, DIGITS).to_mpc()
            assert abs(abs(th / e) - abs(g)) < tol()


# -- Weierstrass --------------------------------------------------------------


def test_wp_parity_and_periodicity():
    rng = random.Random(RNG_SEED + 5)
    tau = rand_tau(rng)
    with mp.workprec(PREC):
        z = BigComplex.from_mpc(Fraction(2, 7) * tau.to_mpc() + Fraction(1, 5), PREC)
        mz = BigComplex.from_mpc(-z.to_mpc(), PREC)
        z1 = BigComplex.from_mpc(z.to_mpc() + 1, PREC)
    p, dp = modfun.wp(z, tau, DIGITS)
    pm, dpm = modfun.wp(mz, tau, DIGITS)
    p1, _ = modfun.wp(z1, tau, DIGITS)
    with mp.workprec(PREC):
        assert abs(p.to_mpc() - pm.to_mpc()) / abs(p.to_mpc()) < tol()
        assert abs(dp.to_mpc() + dpm.to_mpc()) / abs(dp.to_mpc()) < tol()
        assert abs(p.to_mpc() - p1.to_mpc()) / abs(p.to_mpc()) < tol()


def test_wp_two_torsion_zeros():
    rng = random.Random(RNG_SEED + 6)
    tau = rand_tau(rng)
    with mp.workprec(PREC):
        halves = [
            BigComplex.from_mpc(tau.to_mpc() / 2, PREC),
            BigComplex(Fraction(1, 2), 0, PREC),
            BigComplex.from_mpc((tau.to_mpc() + 1) / 2, PREC),
        ]
    for h in halves:
        _, dp = modfun.wp(h, tau, DIGITS)
        assert abs(dp.to_mpc()) < tol()


def test_wp_satisfies_cubic():
    rng = random.Random(RNG_SEED + 7)
    tau = rand_tau(rng)
    g2, g3, _ = modfun.g2_g3_delta(tau, DIGITS)
    with mp.workprec(PREC):
        z = BigComplex.from_mpc(Fraction(1, 7) * tau.to_mpc() + Fraction(2, 5), PREC)
    p, dp = modfun.wp(z, tau, DIGITS)
    with mp.workprec(PREC):
        res = dp.to_mpc() ** 2 - (4 * p.to_mpc() ** 3 - g2.to_mpc() * p.to_mpc() - g3.to_mpc())
        assert abs(res) / abs(dp.to_mpc() ** 2) < tol()


def test_wp_desk_oracle_lattice_sum(ctx200):
    tau = ctx200.tau(DIGITS + modfun.GUARD_DIGITS)
    with mp.workprec(PREC):
        z = BigComplex.from_mpc(Fraction(1, 7) * tau.to_mpc() + Fraction(2, 5), PREC)
    p, _ = modfun.wp(z, tau, DIGITS)
    p2 = modfun.wp_lattice_sum(z, tau, radius=60)
    with mp.workprec(PREC):
        assert abs(p.to_mpc() - p2.to_mpc()) < 1e-5


def test_wp_pole():
    tau = BigComplex(0, 1, PREC)
    with pytest.raises(DomainError):
        modfun.wp(BigComplex(3, 0, PREC), tau, DIGITS)


# -- Fricke family ------------------------------------------------------------


def test_fricke_even_in_index():
    rng = random.Random(RNG_SEED + 8)
    tau = rand_tau(rng)
    v = FrickeIndex.of(Fraction(1, 3), Fraction(2, 3))
    mv = FrickeIndex.of(Fraction(-1, 3), Fraction(-2, 3))
    with mp.workprec(PREC):
        assert abs(modfun.fricke(v, tau, DIGITS).to_mpc() - modfun.fricke(mv, tau, DIGITS).to_mpc()) < tol()


def test_family_index_action_modular():
    # h_v(gamma tau) = h_{v gamma}(tau) for gamma = S, T, ST
    rng = random.Random(RNG_SEED + 9)
    gammas = [(0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 1, 0)]  # S, T, S*T-ish in SL2
    with mp.workprec(PREC):
        for g in gammas:
            tau = rand_tau(rng)
            v = FrickeIndex.of(Fraction(rng.randint(0, 4), 5), Fraction(rng.randint(1, 4), 5))
            lhs = modfun.fricke(v, moebius(g, tau), DIGITS).to_mpc()
            rhs = modfun.fricke(v.act(g), tau, DIGITS).to_mpc()
            assert abs(lhs - rhs) / max(1, abs(rhs)) < tol(5)
            N = 5
            lhs = modfun.siegel(v.normalized(), moebius(g, tau), DIGITS).to_mpc() ** (12 * N)
            rhs = modfun.siegel(v.act(g).normalized(), tau, DIGITS).to_mpc() ** (12 * N)
            assert abs(lhs - rhs) / max(1, abs(rhs)) < tol(5)


def test_fricke_conjugation_rule(ctx200):
    tau0 = ctx200.tau(DIGITS + modfun.GUARD_DIGITS)
    rng = random.Random(RNG_SEED + 10)
    with mp.workprec(PREC):
        for _ in range(3):
            v = FrickeIndex.of(Fraction(rng.randint(0, 2), 3), Fraction(rng.randint(1, 2), 3))
            lhs = modfun.fricke(v, tau0, DIGITS).to_mpc().conjugate()
            rhs = modfun.fricke(v.act((1, ctx200.b0, 0, -1)), tau0, DIGITS).to_mpc()
            assert abs(lhs - rhs) / max(1, abs(rhs)) < tol()


# -- elliptic model -----------------------------------------------------------


def test_elliptic_model_ab_product(ctx200):
    model = modfun.elliptic_model(ctx200, DIGITS)
    _, j = modfun.delta_j(ctx200.tau(DIGITS + modfun.GUARD_DIGITS), DIGITS)
    with mp.workprec(PREC):
        jj = j.to_mpc()
        lhs = model.A.to_mpc() * model.B.to_mpc()
        rhs = jj**2 * (jj - 1728) ** 3 / (2**30 * 3**24)
        assert abs(lhs - rhs) / abs(rhs) < tol()


def test_elliptic_model_rejects_small_disc():
    with pytest.raises(DomainError):
        modfun.elliptic_model(OrderContext.from_disc(-3), DIGITS)


def test_torsion_y_vanishes_at_two_torsion(ctx200):
    _, Y = modfun.torsion_xy(ctx200, FrickeIndex.of(0, Fraction(1, 2)), DIGITS)
    assert abs(Y.to_mpc()) < tol()


def test_torsion_x_is_real(ctx200):
    for N in (3, 5):
        X, _ = modfun.torsion_xy(ctx200, FrickeIndex.of(0, Fraction(1, N)), DIGITS)
        with mp.workprec(PREC):
            assert abs(X.im) / abs(X.to_mpc()) < tol(5)


def test_torsion_weierstrass_relation(ctx200):
    model = modfun.elliptic_model(ctx200, DIGITS)
    X, Y = modfun.torsion_xy(ctx200, FrickeIndex.of(Fraction(1, 3), Fraction(2, 3)), DIGITS)
    with mp.workprec(PREC):
        res = Y.to_mpc() ** 2 - (
            4 * X.to_mpc() ** 3 - model.A.to_mpc() * X.to_mpc() - model.B.to_mpc()
        )
        assert abs(res) / abs(Y.to_mpc() ** 2) < tol(5)


def test_torsion_y_ratio_siegel_identity(ctx200):
    tau0 = ctx200.tau(DIGITS + modfun.GUARD_DIGITS)
    u = FrickeIndex.of(0, Fraction(1, 3))
    v = FrickeIndex.of(Fraction(1, 3), 0)
    _, Yu = modfun.torsion_xy(ctx200, u, DIGITS)
    _, Yv = modfun.torsion_xy(ctx200, v, DIGITS)
    with mp.workprec(PREC):
        gu = modfun.siegel(u, tau0, DIGITS).to_mpc()
        gv = modfun.siegel(v, tau0, DIGITS).to_mpc()
        g2u = modfun.siegel(FrickeIndex.of(0, Fraction(2, 3)), tau0, DIGITS).to_mpc()
        g2v = modfun.siegel(FrickeIndex.of(Fraction(2, 3), 0), tau0, DIGITS).to_mpc()
        lhs = Yv.to_mpc() / Yu.to_mpc()
        rhs = g2v * gu**4 / (gv**4 * g2u)
        assert abs(lhs - rhs) / abs(rhs) < tol(5)


def test_doubling_precision_stability(ctx200):
    v = FrickeIndex.of(0, Fraction(1, 3))
    tau0 = ctx200.tau(DIGITS + modfun.GUARD_DIGITS)
    tau0b = ctx200.tau(2 * DIGITS + modfun.GUARD_DIGITS)
    a = modfun.siegel(v, tau0, DIGITS)
    b = modfun.siegel(v, tau0b, 2 * DIGITS)
    with mp.workprec(b.prec):
        assert abs(a.to_mpc() - b.to_mpc()) / abs(b.to_mpc()) < tol()
