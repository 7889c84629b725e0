"""Special-function evaluators against independent oracles."""

import random

import mpmath as mp
import pytest

from ispflow.specfun import (ComplexHP, SpecFunError, arg_i_branch_residue,
                             arg_i_tilde_principal, arg_i_unwrapped,
                             bessel_i_imag, bessel_j_imag, bessel_k_imag,
                             complex_gamma, hankel1_imag, hankel2_imag)

mp.mp.dps = 60


def stirling_gamma(z, dps=80):
    """Independent gamma oracle: Stirling series after upward recurrence."""
    with mp.workdps(dps):
        z = mp.mpc(z)
        shift = 40
        w = z + shift
        s = (w - mp.mpf(1) / 2) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
        for k in range(1, 21):
            s += mp.bernoulli(2 * k) / (2 * k * (2 * k - 1) * w ** (2 * k - 1))
        val = mp.e ** s
        for j in range(shift):
            val /= (z + j)
        return val


def series_i_oracle(g, x, dps=120):
    """Direct doubled-precision summation of the modified series."""
    with mp.workdps(dps):
        g, x = mp.mpf(g), mp.mpf(x)
        nu = mp.mpc(0, 1) * g
        total = mp.mpc(0)
        for m in range(200):
            total += (x / 2) ** (2 * m + nu) / (mp.factorial(m)
                                                * mp.gamma(m + 1 + nu))
        return +total


def test_gamma_basics():
    assert abs(complex_gamma(1).mpc - 1) < 1e-55
    assert abs(complex_gamma(mp.mpf(1) / 2).mpc - mp.sqrt(mp.pi)) < 1e-55


def test_gamma_pole():
    with pytest.raises(SpecFunError):
        complex_gamma(-2)


def test_gamma_against_independent_oracle():
    z = mp.mpc(1, 1)
    mine = complex_gamma(z).mpc
    assert abs(mine - stirling_gamma(z)) < 1e-45
    # |Gamma(1+i)| has the closed form sqrt(pi/sinh(pi)); digits frozen
    # from that expression at 60-digit precision
    assert abs(abs(mine) - mp.sqrt(mp.pi / mp.sinh(mp.pi))) < 1e-50
    assert abs(abs(mine) - mp.mpf("0.521564046864939841158180269628")) < 1e-29


def test_bessel_i_against_oracles():
    mine = bessel_i_imag(1.0, 1.0).mpc
    assert abs(mine - series_i_oracle(1.0, 1.0)) < 1e-55
    assert abs(mine - mp.besseli(mp.mpc(0, 1), 1)) < 1e-55


def test_bessel_j_against_mpmath():
    for g, x in ((0.4, 0.7), (1.3, 2.2), (2.7, 0.05)):
        mine = bessel_j_imag(g, x).mpc
        ref = mp.besselj(mp.mpc(0, 1) * mp.mpf(g), mp.mpf(x))
        assert abs(mine - ref) / abs(ref) < 1e-50


def test_conjugation_symmetry_randomized():
    rng = random.Random(20260101)
    for _ in range(1000):
        g = mp.mpf(rng.uniform(0.05, 3.0))
        x = mp.mpf(rng.uniform(0.05, 5.0))
        i_val = bessel_i_imag(g, x, dps=30).mpc
        j_val = bessel_j_imag(g, x, dps=30).mpc
        # J_{-ig}(x) = conj J_{ig}(x); |I| even and arg odd in g
        ref = mp.besselj(mp.mpc(0, -1) * g, x)
        assert abs(j_val.conjugate() - ref) / abs(ref) < 1e-25
        assert abs(abs(i_val) ** 2 - (i_val * i_val.conjugate()).real) < 1e-25


def test_k_reality():
    for g, x in ((0.8, 1.3), (1.7, 0.4), (0.2, 2.5)):
        val = bessel_k_imag(g, x).mpc
        assert abs(val.imag) < 1e-35
        ref = mp.besselk(mp.mpc(0, 1) * mp.mpf(g), mp.mpf(x))
        assert abs(val - ref) / abs(ref) < 1e-50


def test_hankel_reflection_relation():
    g = mp.mpf("0.7")
    nu = mp.mpc(0, 1) * g
    h1 = hankel1_imag(g, 2.0).mpc
    ref = mp.hankel1(-nu, mp.mpf(2))
    assert abs(ref - mp.e ** (mp.mpc(0, 1) * mp.pi * nu) * h1) < 1e-50


def test_hankel_from_j_combination():
    """H1_{ig} = (1 + coth(pi g)) J_{ig} - J_{-ig}/sinh(pi g)."""
    g, x = mp.mpf("0.9"), mp.mpf("1.7")
    j = bessel_j_imag(g, x).mpc
    h1 = hankel1_imag(g, x).mpc
    combo = (1 + mp.coth(mp.pi * g)) * j - j.conjugate() / mp.sinh(mp.pi * g)
    assert abs(h1 - combo) / abs(h1) < 1e-50
    h2 = hankel2_imag(g, x).mpc
    assert abs(h2 - (mp.e ** (-mp.pi * g)) * h1.conjugate()) / abs(h2) < 1e-50


def test_precision_halving_randomized():
    rng = random.Random(31415)
    for _ in range(1000):
        g = mp.mpf(rng.uniform(0.1, 2.5))
        x = mp.mpf(rng.uniform(0.1, 4.0))
        lo = bessel_i_imag(g, x, dps=20).mpc
        hi = bessel_i_imag(g, x, dps=40).mpc
        assert abs(lo - hi) / abs(hi) < 1e-18


def test_series_asymptotic_overlap_window():
    """The two evaluation routes agree in the 25..35 crossover window at the
    precision where the asymptotic floor allows it."""
    for x in (25.0, 28.0, 30.0, 33.0, 35.0):
        s = bessel_i_imag(0.9, x, dps=15, force="series").mpc
        a = bessel_i_imag(0.9, x, dps=15, force="asymptotic").mpc
        assert abs(s - a) / abs(s) < 1e-15
        sj = bessel_j_imag(0.6, x, dps=15, force="series").mpc
        aj = bessel_j_imag(0.6, x, dps=15, force="asymptotic").mpc
        assert abs(sj - aj) / abs(sj) < 1e-13


def test_automatic_asymptotic_route():
    # far beyond the crossover the automatic route is the expansion
    val = bessel_i_imag(0.5, 220.0, dps=40).mpc
    ref = mp.besseli(mp.mpc(0, 0.5), 220.0)
    assert abs(val - ref) / abs(ref) < 1e-38


def test_arg_unwrapped_small_argument_limit():
    g = mp.mpf("0.6")
    x = mp.mpf("1e-9")
    got = arg_i_unwrapped(g, x)
    expect = g * mp.log(x / 2) - mp.im(mp.loggamma(1 + mp.mpc(0, 1) * g))
    assert abs(got - expect) < 1e-17


def test_arg_unwrapped_equals_oracle_mod_branch():
    for g, x in ((1.0, 1.0), (0.5, 8.0), (2.0, 20.0), (0.25, 3.0)):
        tot = arg_i_unwrapped(mp.mpf(g), mp.mpf(x))
        orac = mp.arg(mp.besseli(mp.mpc(0, 1) * mp.mpf(g), mp.mpf(x)))
        k = (tot - orac) / (2 * mp.pi)
        assert abs(k - mp.nint(k)) < 1e-45


def test_decomposition_residue_randomized():
    rng = random.Random(777)
    for _ in range(100):
        g = mp.mpf(rng.uniform(0.1, 2.0))
        x = mp.mpf(rng.uniform(0.05, 12.0))
        r = arg_i_branch_residue(g, x, dps=40)
        assert abs(r - mp.nint(r)) < 1e-30


def test_complexhp_validation():
    with pytest.raises(SpecFunError):
        ComplexHP(mp.mpc(mp.inf, 0))
    v = ComplexHP(mp.mpc(1, 2), dps=33)
    assert v.dps == 33 and v.conjugate().im == -2


def test_domain_errors():
    with pytest.raises(SpecFunError):
        bessel_i_imag(-1.0, 1.0)
    with pytest.raises(SpecFunError):
        bessel_j_imag(1.0, 0.0)
