"""Jacobi theta functions, the eta-type q-product, and combinatorial prefactors.

All series are summed after reducing the argument into the fundamental strip
|Re u| <= pi/2, |Im u| <= pi*Im(tau)/2 using the exact quasi-periodicity
multipliers, so evaluation stays well conditioned for arbitrary arguments.
The nome is restricted to |q| <= 0.95; closer to the unit circle the series
would silently lose accuracy, and callers are expected to route through the
modular transformation instead.

Conventions (q = e^{i*pi*tau}, Im tau > 0):

    theta1(z) = 2 * sum_{j>=1} (-1)^(j-1) q^((j-1/2)^2) sin((2j-1) z)
    theta3(u) = sum_n q^(n^2) e^(2iun)
    theta4(u) = sum_n (-1)^n q^(n^2) e^(2iun)

theta1 is odd with zeros exactly on the lattice pi*Z + pi*tau*Z; theta3 and
theta4 are even with period pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NomeOutOfRange, PrecisionUnreachable

_QMAX = 0.95


@dataclass(frozen=True)
class Nome:
    """Modular parameter pair (q, tau) with q = exp(i*pi*tau), Im(tau) > 0.

    Both representations are stored because the series need q-powers while the
    argument reduction and fractional powers need tau (branch free).
    """

    q: complex
    tau: complex

    def __post_init__(self):
        if abs(self.q) >= 1.0:
            raise NomeOutOfRange(f"|q| = {abs(self.q)} >= 1")
        if abs(self.q) > _QMAX:
            raise NomeOutOfRange(
                f"|q| = {abs(self.q)} > {_QMAX}; apply the modular route instead"
            )
        if self.q != 0 and not (self.tau.imag > 0):
            raise NomeOutOfRange(f"Im(tau) = {self.tau.imag} must be positive")

    @classmethod
    def from_q(cls, q: complex | float) -> "Nome":
        q = complex(q)
        if q == 0:
            # Degenerate limit tau -> i*inf; reduction never shifts.
            return cls(0j, complex(0, math.inf))
        tau = -1j * np.log(q) / math.pi
        return cls(q, complex(tau))

    @classmethod
    def from_tau(cls, tau: complex) -> "Nome":
        tau = complex(tau)
        q = np.exp(1j * math.pi * tau)
        return cls(complex(q), tau)

    @classmethod
    def from_aspect(cls, W: float, L: float) -> "Nome":
        """Rectangular-torus nome q = exp(-pi*W/L)."""
        return cls.from_tau(1j * W / L)

    @classmethod
    def coerce(cls, value) -> "Nome":
        if isinstance(value, Nome):
            return value
        return cls.from_q(value)

    def root(self, N: int) -> "Nome":
        """Nome q^(1/N), taken on the tau/N branch."""
        return Nome.from_tau(self.tau / N)

    def power(self, N: int) -> "Nome":
        """Nome q^N, i.e. tau -> N*tau."""
        return Nome.from_tau(self.tau * N)

    def is_real_positive(self) -> bool:
        return self.q.imag == 0 and self.q.real > 0


@dataclass(frozen=True)
class SeriesPrecision:
    """Absolute tail bound and a hard cap on the summation index."""

    epsilon: float = 1e-14
    max_terms: int = 64

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    def n_star(self, q_abs: float) -> int:
        """Series truncation index: |q|^(n*^2) < epsilon, plus margin for the
        reduced-strip growth factor e^(2n|Im u|) <= |q|^(-n)."""
        if q_abs == 0.0:
            return 1
        t = math.log(self.epsilon) / math.log(q_abs)
        n = math.ceil(math.sqrt(t)) + 2
        if n > self.max_terms:
            raise PrecisionUnreachable(
                f"need {n} terms for epsilon={self.epsilon} at |q|={q_abs}, "
                f"cap is {self.max_terms}"
            )
        return n

    def k_star(self, q_abs: float) -> int:
        """Product truncation index: factors carry q^(2k), so the tail is
        geometric rather than Gaussian and needs k* ~ log(eps)/(2 log|q|)."""
        if q_abs == 0.0:
            return 1
        k = math.ceil(math.log(self.epsilon) / (2.0 * math.log(q_abs))) + 1
        if k > 40 * self.max_terms:
            raise PrecisionUnreachable(
                f"need {k} product factors for epsilon={self.epsilon} at |q|={q_abs}"
            )
        return k


DEFAULT_PRECISION = SeriesPrecision()


def _reduce(u, tau):
    """Shift u by m*pi + n*pi*tau into the fundamental strip.

    Returns (u_red, m, n) with u = u_red + m*pi + n*pi*tau.
    """
    u = np.asarray(u, dtype=complex)
    if math.isinf(tau.imag):
        n = np.zeros(u.shape)
    else:
        n = np.rint(u.imag / (math.pi * tau.imag))
    u1 = u - n * math.pi * tau if not math.isinf(tau.imag) else u
    m = np.rint(u1.real / math.pi)
    u_red = u1 - m * math.pi
    return u_red, m, n


def _shift_exponent(u_red, n, tau):
    """log of the quasi-periodicity multiplier q^(-n^2) e^(-2in u_red).

    theta(u_red + n*pi*tau) picks up this factor (times a parity sign that
    depends on which theta), so theta(u) = sign * exp(this) * theta(u_red).
    """
    if math.isinf(tau.imag):
        return np.zeros(np.shape(u_red), dtype=complex)
    return -1j * math.pi * tau * n * n - 2j * n * u_red


def _as_output(values, scalar_input):
    values = np.asarray(values)
    if scalar_input:
        return complex(values)
    return values


def theta1(z, nome, precision: SeriesPrecision = DEFAULT_PRECISION):
    """theta1(z; q), odd, vanishing exactly on pi*Z + pi*tau*Z."""
    nome = Nome.coerce(nome)
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    if nome.q == 0:
        return _as_output(np.zeros(z_arr.shape, dtype=complex), scalar)
    u, m, n = _reduce(z_arr, nome.tau)
    nstar = precision.n_star(abs(nome.q))
    js = np.arange(1, nstar + 1)
    # q^((j-1/2)^2) on the tau branch
    coeff = 2.0 * (-1.0) ** (js - 1) * np.exp(1j * math.pi * nome.tau * (js - 0.5) ** 2)
    series = np.tensordot(coeff, np.sin(np.multiply.outer(2 * js - 1, u)), axes=(0, 0))
    sign = (-1.0) ** (m + n)
    vals = sign * np.exp(_shift_exponent(u, n, nome.tau)) * series
    return _as_output(vals, scalar)


def theta1_product(z, nome, precision: SeriesPrecision = DEFAULT_PRECISION):
    """Product representation of theta1, for cross-checking the series:

        2 q^(1/4) sin z * prod_n (1-q^(2n) e^(2iz)) (1-q^(2n) e^(-2iz)) (1-q^(2n))
    """
    nome = Nome.coerce(nome)
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    if nome.q == 0:
        return _as_output(np.zeros(z_arr.shape, dtype=complex), scalar)
    u, m, n = _reduce(z_arr, nome.tau)
    kstar = precision.k_star(abs(nome.q))
    q_quarter = np.exp(1j * math.pi * nome.tau / 4)
    vals = 2.0 * q_quarter * np.sin(u)
    e2 = np.exp(2j * u)
    for k in range(1, kstar + 1):
        q2k = nome.q ** (2 * k)
        vals = vals * (1 - q2k * e2) * (1 - q2k / e2) * (1 - q2k)
    sign = (-1.0) ** (m + n)
    vals = sign * np.exp(_shift_exponent(u, n, nome.tau)) * vals
    return _as_output(vals, scalar)


def theta3(u, nome, precision: SeriesPrecision = DEFAULT_PRECISION):
    """theta3(u; q) = sum_n q^(n^2) e^(2iun)."""
    nome = Nome.coerce(nome)
    u_arr = np.asarray(u, dtype=complex)
    scalar = u_arr.ndim == 0
    if nome.q == 0:
        return _as_output(np.ones(u_arr.shape, dtype=complex), scalar)
    ur, _, n = _reduce(u_arr, nome.tau)
    nstar = precision.n_star(abs(nome.q))
    js = np.arange(1, nstar + 1)
    coeff = 2.0 * np.exp(1j * math.pi * nome.tau * js**2)
    series = 1.0 + np.tensordot(coeff, np.cos(np.multiply.outer(2 * js, ur)), axes=(0, 0))
    vals = np.exp(_shift_exponent(ur, n, nome.tau)) * series
    return _as_output(vals, scalar)


def theta4(u, nome, precision: SeriesPrecision = DEFAULT_PRECISION):
    """theta4(u; q) = sum_n (-1)^n q^(n^2) e^(2iun)."""
    nome = Nome.coerce(nome)
    u_arr = np.asarray(u, dtype=complex)
    scalar = u_arr.ndim == 0
    if nome.q == 0:
        return _as_output(np.ones(u_arr.shape, dtype=complex), scalar)
    ur, _, n = _reduce(u_arr, nome.tau)
    nstar = precision.n_star(abs(nome.q))
    js = np.arange(1, nstar + 1)
    coeff = 2.0 * (-1.0) ** js * np.exp(1j * math.pi * nome.tau * js**2)
    series = 1.0 + np.tensordot(coeff, np.cos(np.multiply.outer(2 * js, ur)), axes=(0, 0))
    sign = (-1.0) ** n
    vals = sign * np.exp(_shift_exponent(ur, n, nome.tau)) * series
    return _as_output(vals, scalar)


def theta4_product(u, nome, precision: SeriesPrecision = DEFAULT_PRECISION):
    """Product representation of theta4:

        prod_n (1 - e^(2iu) q^(2n-1)) (1 - e^(-2iu) q^(2n-1)) (1 - q^(2n))
    """
    nome = Nome.coerce(nome)
    u_arr = np.asarray(u, dtype=complex)
    scalar = u_arr.ndim == 0
    if nome.q == 0:
        return _as_output(np.ones(u_arr.shape, dtype=complex), scalar)
    ur, _, n = _reduce(u_arr, nome.tau)
    kstar = precision.k_star(abs(nome.q))
    vals = np.ones(ur.shape, dtype=complex)
    e2 = np.exp(2j * ur)
    for k in range(1, kstar + 1):
        vals = vals * (1 - nome.q ** (2 * k - 1) * e2) * (1 - nome.q ** (2 * k - 1) / e2)
        vals = vals * (1 - nome.q ** (2 * k))
    sign = (-1.0) ** n
    vals = sign * np.exp(_shift_exponent(ur, n, nome.tau)) * vals
    return _as_output(vals, scalar)


def theta1_prime0(nome, precision: SeriesPrecision = DEFAULT_PRECISION) -> complex:
    """d theta1 / dz at z = 0, from the differentiated series.

    Equals 2 q^(1/4) prod (1-q^(2n))^3; the product route is kept as an
    independent check in the test suite.
    """
    nome = Nome.coerce(nome)
    if nome.q == 0:
        return 0j
    nstar = precision.n_star(abs(nome.q))
    js = np.arange(1, nstar + 1)
    coeff = 2.0 * (-1.0) ** (js - 1) * np.exp(1j * math.pi * nome.tau * (js - 0.5) ** 2)
    return complex(np.sum(coeff * (2 * js - 1)))


def log_abs_theta1(z, nome, precision: SeriesPrecision = DEFAULT_PRECISION):
    """log|theta1(z; q)| computed overflow-free via the reduced argument.

    The quasi-periodicity multiplier enters additively as its exact log
    modulus, so arguments far from the fundamental strip are safe.
    """
    nome = Nome.coerce(nome)
    if nome.q == 0:
        raise NomeOutOfRange("log|theta1| undefined at q = 0")
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    u, m, n = _reduce(z_arr, nome.tau)
    nstar = precision.n_star(abs(nome.q))
    js = np.arange(1, nstar + 1)
    coeff = 2.0 * (-1.0) ** (js - 1) * np.exp(1j * math.pi * nome.tau * (js - 0.5) ** 2)
    series = np.tensordot(coeff, np.sin(np.multiply.outer(2 * js - 1, u)), axes=(0, 0))
    log_mult = math.pi * nome.tau.imag * n * n + 2 * n * u.imag
    vals = log_mult + np.log(np.abs(series))
    vals = np.asarray(vals)
    if scalar:
        return float(vals)
    return vals


def lattice_distance(z, nome):
    """|z - nearest lattice point| for the lattice pi*Z + pi*tau*Z.

    Exact for points near the lattice (where it is used to detect coincident
    coordinates); elsewhere it is the distance to the reduction image of 0.
    """
    nome = Nome.coerce(nome)
    u_red, _, _ = _reduce(np.asarray(z, dtype=complex), nome.tau)
    return np.abs(u_red)


def qpochhammer_sq(q: float, precision: SeriesPrecision = DEFAULT_PRECISION) -> float:
    """(q^2; q^2)_inf = prod_{k>=1} (1 - q^(2k)) for real q in [0, 1)."""
    if not 0.0 <= q < 1.0:
        raise NomeOutOfRange(f"q = {q} outside [0, 1)")
    if q == 0.0:
        return 1.0
    # 1 - q^(2k) differs from 1 by < eps once q^(2k) < eps
    kmax = max(1, math.ceil(math.log(precision.epsilon) / (2 * math.log(q))))
    ks = np.arange(1, kmax + 1)
    return float(np.prod(1.0 - q ** (2 * ks)))


def eta_q(nome, precision: SeriesPrecision = DEFAULT_PRECISION) -> float:
    """q^(1/12) * prod_{k>=1} (1 - q^(2k)), for real nome 0 < q < 1.

    This is the Dedekind eta value at tau = -i ln(q)/pi; it satisfies the
    modular identity eta_q(e^(-pi*s)) = s^(-1/2) * eta_q(e^(-pi/s)).
    """
    q = _real_nome(nome)
    if not 0.0 < q < 1.0:
        raise NomeOutOfRange(f"eta_q needs 0 < q < 1, got {q}")
    return q ** (1.0 / 12.0) * qpochhammer_sq(q, precision)


def f_N(N: int, nome, precision: SeriesPrecision = DEFAULT_PRECISION) -> float:
    """N^(N/2) q^(-(N-1)(N-2)/24) (q^2; q^2)_inf^(-(N-1)(N-2)/2)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    q = _real_nome(nome)
    if not 0.0 < q < 1.0:
        raise NomeOutOfRange(f"f_N needs 0 < q < 1, got {q}")
    e = (N - 1) * (N - 2)
    return N ** (N / 2.0) * q ** (-e / 24.0) * qpochhammer_sq(q, precision) ** (-e / 2.0)


def f_N_complex(N: int, nome, precision: SeriesPrecision = DEFAULT_PRECISION) -> complex:
    """f_N continued to a complex nome via the tau branch (skewed tori)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    nome = Nome.coerce(nome)
    if nome.q == 0:
        raise NomeOutOfRange("f_N undefined at q = 0")
    e = (N - 1) * (N - 2)
    q_pow = np.exp(-1j * math.pi * nome.tau * e / 24.0)
    kmax = precision.k_star(abs(nome.q))
    ks = np.arange(1, max(2, kmax) + 1)
    poch = np.prod(1.0 - nome.q ** (2 * ks))
    return complex(N ** (N / 2.0) * q_pow * poch ** (-e / 2.0))


def _real_nome(nome) -> float:
    if isinstance(nome, Nome):
        if not nome.is_real_positive():
            raise NomeOutOfRange("a real positive nome is required here")
        return nome.q.real
    q = complex(nome)
    if q.imag != 0:
        raise NomeOutOfRange("a real positive nome is required here")
    return q.real
