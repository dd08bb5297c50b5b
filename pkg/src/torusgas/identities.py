"""Numerical verification of the determinant identities behind the exact results.

Three families are covered: the theta-Vandermonde factorizations of N x N theta
determinants, the Frobenius determinant identity for theta4/theta1 kernels, and
the Fourier determinants with their closed-form constants. Each check returns
an :class:`IdentityResidual` rather than a bare bool so callers can log and
threshold however they need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularConfiguration
from .theta import (
    DEFAULT_PRECISION,
    Nome,
    SeriesPrecision,
    f_N,
    f_N_complex,
    lattice_distance,
    theta1,
    theta3,
    theta4,
)

_TINY = 1e-300


@dataclass(frozen=True)
class IdentityResidual:
    """Two sides of an identity and their absolute/relative mismatch.

    ``scale`` is the natural magnitude of the computation (a Hadamard-type
    bound on the determinant). When both sides are tiny against it, the
    determinant is cancellation limited and the relative residual is
    meaningless; ``near_zero`` flags that case, where ``abs_residual`` against
    ``scale`` is the number to threshold.
    """

    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    scale: float = 1.0
    near_zero: bool = False

    @classmethod
    def from_sides(cls, lhs: complex, rhs: complex, scale: float = 1.0) -> "IdentityResidual":
        a = abs(lhs - rhs)
        m = max(abs(lhs), abs(rhs))
        near_zero = m < 1e-5 * max(scale, _TINY)
        return cls(lhs, rhs, a, a / max(m, _TINY), scale, near_zero)

    def passes(self, rel_tol: float, abs_factor: float = 1e-12) -> bool:
        """Relative test for well-sized values; absolute test against
        abs_factor * scale for cancellation-limited ones."""
        if self.near_zero:
            return self.abs_residual < abs_factor * max(self.scale, 1.0)
        return self.rel_residual < rel_tol


def theta_vandermonde_residual(
    xs,
    alpha: complex,
    nome,
    N: int | None = None,
    precision: SeriesPrecision = DEFAULT_PRECISION,
) -> IdentityResidual:
    """Determinant of theta3/theta1 columns against its factorized form.

    lhs: det[ theta_s(pi*(x_j + alpha - l/N); q^(1/N)) ], s = 3 for N odd and
    s = 1 for N even, j, l = 1..N.
    rhs: theta_{3|4}(pi*sum(x_j + alpha); q) * f_N(q) * prod_{j<k}
    theta1(pi*(x_k - x_j); q), with theta3 on the right for N odd and theta4
    for N even.
    """
    xs = np.asarray(xs, dtype=complex)
    if N is None:
        N = len(xs)
    if len(xs) != N:
        raise DimensionMismatch(f"got {len(xs)} points for N = {N}")
    nome = Nome.coerce(nome)
    root = nome.root(N)

    ls = np.arange(1, N + 1)
    args = math.pi * (xs[:, None] + alpha - ls[None, :] / N)
    if N % 2 == 1:
        mat = theta3(args, root, precision)
        head = theta3(math.pi * np.sum(xs + alpha), nome, precision)
    else:
        mat = theta1(args, root, precision)
        head = theta4(math.pi * np.sum(xs + alpha), nome, precision)
    lhs = complex(np.linalg.det(np.atleast_2d(mat)))

    if N > 1:
        iu, ju = np.triu_indices(N, k=1)
        pair = complex(np.prod(theta1(math.pi * (xs[ju] - xs[iu]), nome, precision)))
    else:
        pair = 1.0 + 0j
    if nome.is_real_positive():
        fn = f_N(N, nome, precision)
    else:
        fn = f_N_complex(N, nome, precision)
    rhs = head * fn * pair

    scale = float(np.prod(np.max(np.abs(np.atleast_2d(mat)), axis=1)))
    return IdentityResidual.from_sides(lhs, rhs, scale=scale)


def frobenius_residual(
    ws,
    zs,
    alpha: complex,
    nome,
    precision: SeriesPrecision = DEFAULT_PRECISION,
) -> IdentityResidual:
    """Frobenius identity for the theta4/theta1 Cauchy-type determinant.

    lhs: theta4(sum(w_j - z_j) - alpha) * F(w; z) with
    F = (-1)^(N(N-1)/2) prod_{j<k} theta1(w_k-w_j) theta1(z_k-z_j)
        / prod_{j,k} theta1(w_j-z_k).
    rhs: theta4(alpha) * det[ theta4(w_j-z_k-alpha) / (theta4(alpha)
         theta1(w_j-z_k)) ].
    """
    ws = np.asarray(ws, dtype=complex)
    zs = np.asarray(zs, dtype=complex)
    if ws.shape != zs.shape:
        raise DimensionMismatch(f"|ws| = {len(ws)} but |zs| = {len(zs)}")
    N = len(ws)
    nome = Nome.coerce(nome)

    sep = ws[:, None] - zs[None, :]
    if np.any(lattice_distance(sep, nome) < 1e-9):
        raise SingularConfiguration("some w_j - z_k lies on the lattice")

    t1_sep = theta1(sep, nome, precision)
    F = (-1.0) ** (N * (N - 1) // 2) + 0j
    if N > 1:
        iu, ju = np.triu_indices(N, k=1)
        F *= complex(np.prod(theta1(ws[ju] - ws[iu], nome, precision)))
        F *= complex(np.prod(theta1(zs[ju] - zs[iu], nome, precision)))
    F /= np.prod(t1_sep)
    lhs = theta4(np.sum(ws - zs) - alpha, nome, precision) * F

    t4_alpha = theta4(alpha, nome, precision)
    mat = theta4(sep - alpha, nome, precision) / (t4_alpha * t1_sep)
    rhs = t4_alpha * complex(np.linalg.det(np.atleast_2d(mat)))

    scale = float(np.prod(np.max(np.abs(np.atleast_2d(mat)), axis=1))) * abs(t4_alpha)
    return IdentityResidual.from_sides(complex(lhs), rhs, scale=scale)


def fourier_det_constant(N: int, half_shift: bool = False) -> IdentityResidual:
    """det[e^(2*pi*i*l*k/N)] (or the k+1/2 variant) against its closed form.

    The plain constant is N^(N/2) i^((N-1)(3N/2+1)); the half-shift variant
    carries an extra i^(N+1).
    """
    if N < 1:
        raise DimensionMismatch("N must be >= 1")
    ls = np.arange(1, N + 1)
    ks = np.arange(0, N) + (0.5 if half_shift else 0.0)
    det = complex(np.linalg.det(np.exp(2j * math.pi * np.outer(ls, ks) / N)))
    exponent = ((N - 1) * (3 * N + 2)) // 2
    const = N ** (N / 2.0) * 1j ** (exponent % 4)
    if half_shift:
        const *= 1j ** ((N + 1) % 4)
    return IdentityResidual.from_sides(det, complex(const))


def draw_identity_points(rng: np.random.Generator, N: int, nome, min_sep: float = 1e-3):
    """Random points with Re in [0,1), Im in [-0.2, 0.2], rejecting draws whose
    pairwise theta1 arguments sit within ``min_sep`` of a lattice point."""
    nome = Nome.coerce(nome)
    for _ in range(1000):
        xs = rng.uniform(0.0, 1.0, N) + 1j * rng.uniform(-0.2, 0.2, N)
        diffs = math.pi * (xs[:, None] - xs[None, :])
        dist = lattice_distance(diffs, nome)
        np.fill_diagonal(dist, np.inf)
        if np.all(dist > min_sep):
            return xs
    raise SingularConfiguration("could not draw a well-separated configuration")


def draw_species_pair(rng: np.random.Generator, N: int, nome, min_sep: float = 1e-3):
    """Two point sets (ws, zs) whose intra-set differences and cross
    separations w_j - z_k all stay ``min_sep`` away from the theta1 zeros."""
    nome = Nome.coerce(nome)
    for _ in range(1000):
        ws = draw_identity_points(rng, N, nome, min_sep)
        zs = draw_identity_points(rng, N, nome, min_sep)
        if np.all(lattice_distance(ws[:, None] - zs[None, :], nome) > min_sep):
            return ws, zs
    raise SingularConfiguration("could not draw a well-separated species pair")
