"""Theta-function core: dual representations, quasi-periodicity, eta and f_N."""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.special import gamma

from torusgas.errors import NomeOutOfRange, PrecisionUnreachable
from torusgas.theta import (
    Nome,
    SeriesPrecision,
    eta_q,
    f_N,
    log_abs_theta1,
    theta1,
    theta1_prime0,
    theta1_product,
    theta3,
    theta4,
    theta4_product,
)

mp.mp.dps = 30

rng = np.random.default_rng(101)
POINTS = [complex(rng.uniform(-1.5, 1.5), rng.uniform(-0.4, 0.4)) for _ in range(12)]


class TestNome:
    def test_from_q_tau_consistency(self):
        nome = Nome.from_q(0.3)
        assert abs(np.exp(1j * math.pi * nome.tau) - 0.3) < 1e-15

    def test_from_aspect(self):
        nome = Nome.from_aspect(2.0, 1.0)
        assert abs(nome.q - math.exp(-2 * math.pi)) < 1e-15

    def test_root_and_power(self):
        nome = Nome.from_q(0.4)
        assert abs(nome.root(3).q**3 - 0.4) < 1e-14
        assert abs(nome.power(2).q - 0.16) < 1e-15

    def test_rejects_large_nome(self):
        with pytest.raises(NomeOutOfRange):
            Nome.from_q(1.05)
        with pytest.raises(NomeOutOfRange):
            Nome.from_q(0.97)


class TestSeriesPrecision:
    def test_truncation_bound_holds(self):
        prec = SeriesPrecision()
        for q in (0.1, 0.5, 0.9):
            assert q ** (prec.n_star(q) ** 2) < prec.epsilon

    def test_precision_unreachable(self):
        with pytest.raises(PrecisionUnreachable):
            SeriesPrecision(epsilon=1e-14, max_terms=4).n_star(0.9)

    def test_doubling_max_terms_is_inert(self):
        z = 0.7 + 0.2j
        lo = theta1(z, 0.5, SeriesPrecision(1e-14, 64))
        hi = theta1(z, 0.5, SeriesPrecision(1e-14, 128))
        assert lo == hi

    def test_tightening_epsilon_moves_less_than_epsilon(self):
        z = 0.7 + 0.2j
        a = theta1(z, 0.5, SeriesPrecision(1e-10, 64))
        b = theta1(z, 0.5, SeriesPrecision(1e-15, 64))
        assert abs(a - b) < 1e-10


class TestTheta1:
    def test_vanishes_at_origin(self):
        assert theta1(0.0, 0.3) == 0

    def test_odd(self):
        for z in POINTS:
            assert abs(theta1(-z, 0.35) + theta1(z, 0.35)) < 1e-12

    @pytest.mark.parametrize("q", [0.1, 0.3, 0.5])
    def test_series_equals_product(self, q):
        for z in POINTS:
            assert abs(theta1(z, q) - theta1_product(z, q)) < 1e-12

    def test_half_period_flip(self):
        """theta1(z + pi) = -theta1(z) on 100 random draws."""
        zs = rng.uniform(-1.5, 1.5, 100) + 1j * rng.uniform(-0.4, 0.4, 100)
        v = theta1(zs, 0.3)
        assert np.all(np.abs(theta1(zs + math.pi, 0.3) + v) < 1e-10 * np.maximum(1, np.abs(v)))

    def test_quasi_period(self):
        """theta1(z + pi*tau) * q * e^(2iz) = -theta1(z) on 100 random draws."""
        nome = Nome.from_q(0.3)
        zs = rng.uniform(-1.5, 1.5, 100) + 1j * rng.uniform(-0.4, 0.4, 100)
        v = theta1(zs, nome)
        shifted = theta1(zs + math.pi * nome.tau, nome) * nome.q * np.exp(2j * zs)
        assert np.all(np.abs(shifted + v) < 1e-10 * np.maximum(1, np.abs(v)))

    def test_against_mpmath(self):
        for q in (0.12, 0.45):
            for z in POINTS:
                ref = complex(mp.jtheta(1, mp.mpc(z), q))
                assert abs(theta1(z, q) - ref) < 1e-13 * max(1.0, abs(ref))

    def test_far_from_strip(self):
        """Lattice reduction keeps huge arguments exact."""
        z = 0.3 + 5.7j
        ref = complex(mp.jtheta(1, mp.mpc(z), 0.3))
        assert abs(theta1(z, 0.3) - ref) / abs(ref) < 1e-12

    def test_log_abs_matches_direct(self):
        for z in POINTS:
            assert abs(log_abs_theta1(z, 0.3) - math.log(abs(theta1(z, 0.3)))) < 1e-12

    def test_zero_nome(self):
        assert theta1(0.7, 0.0) == 0


class TestTheta34:
    def test_theta3_at_zero_nome(self):
        for u in POINTS:
            assert theta3(u, 0.0) == 1

    def test_theta4_at_zero_nome(self):
        assert theta4(0.0, 0.0) == 1

    def test_even(self):
        for u in POINTS:
            assert abs(theta3(-u, 0.3) - theta3(u, 0.3)) < 1e-12
            assert abs(theta4(-u, 0.3) - theta4(u, 0.3)) < 1e-12

    def test_theta4_series_equals_product(self):
        q = 0.2
        assert abs(theta4(0.0, q) - theta4_product(0.0, q)) < 1e-12
        for u in POINTS:
            assert abs(theta4(u, q) - theta4_product(u, q)) < 1e-12

    def test_theta4_product_at_zero(self):
        q = 0.2
        ref = np.prod([(1 - q ** (2 * n - 1)) ** 2 * (1 - q ** (2 * n)) for n in range(1, 60)])
        assert abs(theta4(0.0, q) - ref) < 1e-12

    def test_against_mpmath(self):
        for u in POINTS:
            assert abs(theta3(u, 0.3) - complex(mp.jtheta(3, mp.mpc(u), 0.3))) < 1e-13
            assert abs(theta4(u, 0.3) - complex(mp.jtheta(4, mp.mpc(u), 0.3))) < 1e-13

    def test_pi_periodicity(self):
        for u in POINTS:
            assert abs(theta3(u + math.pi, 0.3) - theta3(u, 0.3)) < 1e-11
            assert abs(theta4(u + math.pi, 0.3) - theta4(u, 0.3)) < 1e-11


class TestTheta1Prime:
    def test_small_nome_limit(self):
        q = 1e-8
        assert abs(theta1_prime0(Nome.from_q(q)) / (2 * q**0.25) - 1) < 1e-7

    def test_finite_difference(self):
        """Central difference of theta1 at 0 with h = 1e-5."""
        h = 1e-5
        fd = (theta1(h, 0.25) - theta1(-h, 0.25)) / (2 * h)
        assert abs(theta1_prime0(Nome.from_q(0.25)) - fd) < 1e-8

    def test_product_identity(self):
        q = 0.25
        prod = 2 * q**0.25 * np.prod([(1 - q ** (2 * n)) ** 3 for n in range(1, 60)])
        assert abs(theta1_prime0(Nome.from_q(q)) - prod) < 1e-13


class TestEta:
    def test_small_nome_scaling(self):
        q = 1e-10
        assert abs(eta_q(q) / q ** (1 / 12) - 1.0) < 1e-9

    def test_classical_constant(self):
        """eta at q = e^-pi equals Gamma(1/4) / (2 pi^(3/4))."""
        ref = gamma(0.25) / (2 * math.pi**0.75)
        assert abs(eta_q(math.exp(-math.pi)) - ref) < 1e-12

    @pytest.mark.parametrize("s", [0.3, 0.5, 2.0, 3.0])
    def test_modular_identity(self, s):
        lhs = eta_q(math.exp(-math.pi * s))
        rhs = s**-0.5 * eta_q(math.exp(-math.pi / s))
        assert abs(lhs - rhs) < 1e-13

    def test_domain(self):
        with pytest.raises(NomeOutOfRange):
            eta_q(0.0)
        with pytest.raises(NomeOutOfRange):
            eta_q(complex(0.1, 0.1))


class TestFN:
    def test_n1_is_one(self):
        assert f_N(1, 0.47) == 1.0

    def test_n2_is_two(self):
        assert f_N(2, 0.21) == 2.0

    def test_n3_explicit(self):
        q = 0.3
        poch = np.prod([(1 - q ** (2 * j)) for j in range(1, 200)])
        assert abs(f_N(3, q) - 3**1.5 * q ** (-1 / 12) / poch) < 1e-12

    def test_domain(self):
        with pytest.raises(NomeOutOfRange):
            f_N(3, 0.0)
