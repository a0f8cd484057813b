"""Symbol calculus on the circle.

Symbols a(theta, xi) live on S^1 x R (xi restricted to the integer lattice
when discretized).  Operators act in the Fourier basis with modes
k = -K..K, blocks of size N per mode for fiber dimension N.  The matrix of
Op(a) is M[(j,.),(k,.)] = a-hat_{j-k}(k), the (j-k)-th Fourier coefficient
in theta of a(., k), computed by FFT on a 4(2K+1)-point grid so that
trigonometric-polynomial coefficients up to degree 2K are exact.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import linalg
from .contour import ContourSpec, quad_nodes, ray_tail_moments
from .errors import AliasingRisk, SymbolSingular

ALIASING_TOL = 1e-10


@dataclass
class SymbolFunction:
    """A tabulatable symbol with declared order and principal part.

    ``evaluate(theta, xi)`` takes a 1-D array of angles and a scalar xi and
    returns an array of shape (len(theta),) for scalar symbols or
    (len(theta), N, N) for systems.  ``principal`` has the same signature
    and must be positively homogeneous of degree ``order`` for |xi| >= 1.
    """

    order: float
    evaluate: Callable[[np.ndarray, float], np.ndarray]
    principal: Callable[[np.ndarray, float], np.ndarray]
    fiber_dim: int = 1
    name: str = ""

    def check_classical(self, K=8, n_theta=32, c_lower=None, rtol=1e-8):
        """Sampled invariant check: homogeneity of the principal part and
        order <= m-1 of the remainder.  Raises AssertionError on failure."""
        theta = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
        for xi in (1.0, -1.0, 2.5, -2.5):
            for r in (1.0, 2.0, 5.0):
                lhs = np.asarray(self.principal(theta, r * xi))
                rhs = r**self.order * np.asarray(self.principal(theta, xi))
                scale = max(np.abs(rhs).max(), 1.0)
                assert np.abs(lhs - rhs).max() <= rtol * scale, (
                    f"principal part not homogeneous at xi={xi}, r={r}")
        if c_lower is None:
            # infer the remainder constant from moderate xi, then test growth
            c_lower = 0.0
            for xi in (2.0, -2.0):
                rem = np.abs(np.asarray(self.evaluate(theta, xi))
                             - np.asarray(self.principal(theta, xi))).max()
                c_lower = max(c_lower, rem / (1 + abs(xi))**(self.order - 1))
        for xi in (4.0, -4.0, float(K), -float(K)):
            rem = np.abs(np.asarray(self.evaluate(theta, xi))
                         - np.asarray(self.principal(theta, xi))).max()
            bound = max(2.0 * c_lower, rtol) * (1 + abs(xi))**(self.order - 1)
            assert rem <= bound + rtol, (
                f"remainder exceeds order m-1 growth at xi={xi}: {rem} > {bound}")


@dataclass
class DiscretizedOperator:
    """Fourier-basis matrix of dimension N*(2K+1) with provenance."""

    matrix: np.ndarray
    K: int
    order: float
    symbol: Optional[SymbolFunction] = None
    fiber_dim: int = 1

    @property
    def dim(self) -> int:
        return self.fiber_dim * (2 * self.K + 1)

    def modes(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)


@dataclass(frozen=True)
class CutoffFunction:
    """Smoothstep cutoff: 0 for |xi| <= rho, 1 for |xi| >= 2 rho,
    3u^2 - 2u^3 in between with u = (|xi| - rho)/rho."""

    rho: float

    def __call__(self, xi):
        u = (np.abs(xi) - self.rho) / self.rho
        u = np.clip(u, 0.0, 1.0)
        return 3.0 * u**2 - 2.0 * u**3


def _coefficient_columns(samples: np.ndarray):
    """FFT of theta-samples -> Fourier coefficients indexed mod G."""
    return np.fft.fft(samples, axis=0) / samples.shape[0]


def op_from_symbol(a: SymbolFunction, K: int) -> DiscretizedOperator:
    """Matrix of Op(a) on modes -K..K.

    Warns with AliasingRisk if the coefficient tail beyond degree 2K
    exceeds 1e-10 relative to the largest coefficient.
    """
    if K < 1:
        raise ValueError("mode cutoff K must be >= 1")
    n_modes = 2 * K + 1
    G = 4 * n_modes
    theta = 2.0 * np.pi * np.arange(G) / G
    N = a.fiber_dim
    dim = N * n_modes
    M = np.zeros((dim, dim), dtype=complex)
    max_coeff = 0.0
    max_tail = 0.0
    ps = np.arange(-2 * K, 2 * K + 1)
    tail_idx = np.setdiff1d(np.arange(G), ps % G)
    for col, k in enumerate(range(-K, K + 1)):
        samples = np.asarray(a.evaluate(theta, float(k)), dtype=complex)
        coeffs = _coefficient_columns(samples)
        mags = np.abs(coeffs).reshape(G, -1).max(axis=1)
        max_coeff = max(max_coeff, mags.max(initial=0.0))
        if tail_idx.size:
            max_tail = max(max_tail, mags[tail_idx].max())
        js = k + ps
        keep = (js >= -K) & (js <= K)
        src, rows = ps[keep] % G, js[keep] + K
        if N == 1:
            M[rows, col] = coeffs[src]
        else:
            for p_idx, row in zip(src, rows):
                M[row * N:(row + 1) * N, col * N:(col + 1) * N] = coeffs[p_idx]
    if max_coeff > 0 and max_tail > ALIASING_TOL * max_coeff:
        warnings.warn(AliasingRisk(
            f"coefficient tail beyond degree {2 * K} is "
            f"{max_tail / max_coeff:.2e} of the largest coefficient"))
    return DiscretizedOperator(M, K, a.order, symbol=a, fiber_dim=N)


def sobolev_weight(K: int, s: float, N: int = 1) -> np.ndarray:
    """Diagonal H^s weight matrix: (1 + k^2)^{s/2} per mode-k block."""
    k = np.arange(-K, K + 1)
    w = (1.0 + k.astype(float)**2) ** (s / 2.0)
    return np.diag(np.repeat(w, N)).astype(complex)


def _weight_vector(K: int, s: float, N: int = 1) -> np.ndarray:
    k = np.arange(-K, K + 1)
    return np.repeat((1.0 + k.astype(float)**2) ** (s / 2.0), N)


def sobolev_op_norm(T, s: float, t: float, K: int = None, N: int = 1) -> float:
    """The discrete ||T||_{s,t} = ||W_t T W_s^{-1}||_2."""
    if isinstance(T, DiscretizedOperator):
        M, K, N = T.matrix, T.K, T.fiber_dim
    else:
        M = np.asarray(T, dtype=complex)
        if K is None:
            if M.shape[0] % N:
                raise ValueError("matrix dimension incompatible with fiber dim")
            K = (M.shape[0] // N - 1) // 2
    wt = _weight_vector(K, t, N)
    ws = _weight_vector(K, s, N)
    return linalg.operator_norm_2(M * wt[:, None] / ws[None, :])


def cutoff_resolvent_symbol(a: SymbolFunction, psi: CutoffFunction,
                            lam: complex) -> SymbolFunction:
    """The smoothed resolvent symbol psi(xi) (a_m(theta,xi) - lambda)^{-1},
    a symbol of order -a.order."""
    lam = complex(lam)
    N = a.fiber_dim

    def _invert(vals, theta, xi):
        if N == 1:
            shifted = vals - lam
            bad = np.abs(shifted) < 1e-300
            if np.any(bad):
                i = int(np.argmax(bad))
                raise SymbolSingular(float(theta[i]), float(xi))
            return 1.0 / shifted
        shifted = vals - lam * np.eye(N)
        try:
            return np.linalg.inv(shifted)
        except np.linalg.LinAlgError:
            raise SymbolSingular(float(theta[0]), float(xi)) from None

    def evaluate(theta, xi):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        w = float(psi(xi))
        if w == 0.0:
            shape = (len(theta),) if N == 1 else (len(theta), N, N)
            return np.zeros(shape, dtype=complex)
        vals = np.asarray(a.principal(theta, xi), dtype=complex)
        return w * _invert(vals, theta, xi)

    def principal(theta, xi):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        vals = np.asarray(a.principal(theta, xi), dtype=complex)
        if N == 1:
            return 1.0 / vals
        return np.linalg.inv(vals)

    # precondition: invertibility where the cutoff is active
    theta_probe = np.linspace(0.0, 2 * np.pi, 16, endpoint=False)
    for xi in (psi.rho, -psi.rho, 2 * psi.rho, -2 * psi.rho, 4 * psi.rho):
        vals = np.asarray(a.principal(theta_probe, xi), dtype=complex)
        _invert(vals, theta_probe, xi)

    return SymbolFunction(order=-a.order, evaluate=evaluate,
                          principal=principal, fiber_dim=N,
                          name=f"r_psi({a.name or 'a'}, lam={lam:.3g})")


def parametrix_phi0(a: SymbolFunction, psi: CutoffFunction,
                    c: ContourSpec, K: int) -> DiscretizedOperator:
    """First parametrix approximation
    Phi_0 = sum_i w_i lambda_i^{-1} Op(psi (a_m - lambda_i)^{-1}),
    an operator of order -m.  Ray-truncation tails are corrected
    analytically to second order in 1/lambda."""
    rule = quad_nodes(c)
    n_modes = 2 * K + 1
    G = 4 * n_modes
    theta = 2.0 * np.pi * np.arange(G) / G
    N = a.fiber_dim
    dim = N * n_modes
    modes = np.arange(-K, K + 1)
    psi_vals = np.array([float(psi(float(k))) for k in modes])

    # principal-symbol samples, reused across quadrature nodes
    if N == 1:
        P = np.empty((G, n_modes), dtype=complex)
        for col, k in enumerate(modes):
            P[:, col] = np.asarray(a.principal(theta, float(k)), dtype=complex)
    else:
        P = np.empty((G, n_modes, N, N), dtype=complex)
        for col, k in enumerate(modes):
            P[:, col] = np.asarray(a.principal(theta, float(k)), dtype=complex)

    M = np.zeros((dim, dim), dtype=complex)
    ps = np.arange(-2 * K, 2 * K + 1)
    row_of = {}
    for col, k in enumerate(modes):
        js = k + ps
        keep = (js >= -K) & (js <= K)
        row_of[col] = (ps[keep] % G, js[keep] + K)

    for lam, w in zip(rule.nodes, rule.weights):
        fac = w / lam
        if N == 1:
            S = psi_vals[None, :] / (P - lam)
            coeffs = np.fft.fft(S, axis=0) / G
            for col in range(n_modes):
                if psi_vals[col] == 0.0:
                    continue
                src, rows = row_of[col]
                M[rows, col] += fac * coeffs[src, col]
        else:
            S = psi_vals[None, :, None, None] * np.linalg.inv(
                P - lam * np.eye(N))
            coeffs = np.fft.fft(S, axis=0) / G
            for col in range(n_modes):
                if psi_vals[col] == 0.0:
                    continue
                src, rows = row_of[col]
                for p_idx, row in zip(src, rows):
                    M[row * N:(row + 1) * N, col * N:(col + 1) * N] += \
                        fac * coeffs[p_idx, col]

    # tail: lam^{-1} r_psi ~ -psi/lam^2 - psi a_m/lam^3
    m2, m3 = ray_tail_moments(c)
    if m2 != 0 or m3 != 0:
        if N == 1:
            coeffs_a = np.fft.fft(P, axis=0) / G
            for col in range(n_modes):
                if psi_vals[col] == 0.0:
                    continue
                row = col  # identity part is diagonal
                M[row, col] += -m2 * psi_vals[col]
                src, rows = row_of[col]
                M[rows, col] += -m3 * psi_vals[col] * coeffs_a[src, col]
        else:
            coeffs_a = np.fft.fft(P, axis=0) / G
            for col in range(n_modes):
                if psi_vals[col] == 0.0:
                    continue
                blk = slice(col * N, (col + 1) * N)
                M[blk, blk] += -m2 * psi_vals[col] * np.eye(N)
                src, rows = row_of[col]
                for p_idx, row in zip(src, rows):
                    M[row * N:(row + 1) * N, blk] += \
                        -m3 * psi_vals[col] * coeffs_a[p_idx, col]

    return DiscretizedOperator(M, K, -a.order, symbol=None, fiber_dim=N)


def choose_rho(a: SymbolFunction, c: ContourSpec, K: int) -> int:
    """Smallest integer rho >= 1 such that a_m(theta, xi) - lambda is
    invertible for all |xi| >= rho on a probe grid over the contour."""
    rule = quad_nodes(c)
    # probe a thinned set of nodes plus the arc corners
    probe = list(rule.nodes[:: max(1, len(rule.nodes) // 40)])
    theta = np.linspace(0.0, 2 * np.pi, 32, endpoint=False)
    for rho in range(1, K + 1):
        ok = True
        for xi in [x for r in range(rho, min(4 * rho, K) + 1) for x in (r, -r)]:
            vals = np.asarray(a.principal(theta, float(xi)), dtype=complex)
            for lam in probe:
                if a.fiber_dim == 1:
                    if np.abs(vals - lam).min() < 1e-8 * max(1.0, abs(lam)):
                        ok = False
                        break
                else:
                    ev = np.linalg.eigvals(vals)
                    if np.abs(ev - lam).min() < 1e-8 * max(1.0, abs(lam)):
                        ok = False
                        break
            if not ok:
                break
        if ok:
            return rho
    raise SymbolSingular(0.0, float(K))
