"""Named preset library: operators, symbol families, perturbations,
contours, matrix paths, and sphere-bundle maps.

Presets are the only way operators and symbols enter through the CLI;
arbitrary expressions are out of scope.  Each registry maps a name to a
factory plus a one-line description for ``list-presets``.
"""
from __future__ import annotations

import numpy as np

from . import topology
from .contour import ContourSpec, make_sector_contour
from .errors import ConfigInvalid
from .experiments import SplitOperator
from .symbol1d import DiscretizedOperator, SymbolFunction, op_from_symbol

# ---------------------------------------------------------------------------
# symbol library

def symbol_xi() -> SymbolFunction:
    f = lambda theta, xi: np.full_like(np.asarray(theta, float), xi,
                                       dtype=complex)
    return SymbolFunction(order=1, evaluate=f, principal=f, name="xi")


def symbol_abs_xi_m(m: float) -> SymbolFunction:
    def evaluate(theta, xi):
        return np.full_like(np.asarray(theta, float),
                            (1.0 + xi * xi) ** (m / 2.0), dtype=complex)

    def principal(theta, xi):
        return np.full_like(np.asarray(theta, float), abs(xi) ** m,
                            dtype=complex)

    return SymbolFunction(order=m, evaluate=evaluate, principal=principal,
                          name=f"abs_xi_{m}")


def symbol_c_theta_times_xi() -> SymbolFunction:
    f = lambda theta, xi: (2.0 + np.cos(theta)) * xi + 0j
    return SymbolFunction(order=1, evaluate=f, principal=f,
                          name="c_theta_times_xi")


def symbol_shift(c: complex = 0.3) -> SymbolFunction:
    f = lambda theta, xi: np.full_like(np.asarray(theta, float), c,
                                       dtype=complex)
    zero = lambda theta, xi: np.zeros_like(np.asarray(theta, float),
                                           dtype=complex)
    return SymbolFunction(order=0, evaluate=f, principal=zero,
                          name=f"shift({c})")


def symbol_pauli_monopole() -> SymbolFunction:
    sx, sy = topology.PAULI[0], topology.PAULI[1]

    def evaluate(theta, xi):
        theta = np.asarray(theta, float)
        return xi * (np.cos(theta)[:, None, None] * sx
                     + np.sin(theta)[:, None, None] * sy) + 0j

    return SymbolFunction(order=1, evaluate=evaluate, principal=evaluate,
                          fiber_dim=2, name="pauli_monopole")


SYMBOL_PRESETS = {
    "xi": (symbol_xi, "the Fourier variable itself, order 1"),
    "abs_xi_m": (symbol_abs_xi_m,
                 "(1+xi^2)^(m/2), elliptic with principal part |xi|^m"),
    "c_theta_times_xi": (symbol_c_theta_times_xi,
                         "(2+cos theta) * xi, variable-coefficient order 1"),
    "shift": (symbol_shift, "constant lower-order shift c (default 0.3)"),
    "pauli_monopole": (symbol_pauli_monopole,
                       "xi*(cos theta sigma_x + sin theta sigma_y), 2x2"),
}

# ---------------------------------------------------------------------------
# operator presets (factories take the mode cutoff K)

def _combine(principal: SymbolFunction, shift: complex) -> SymbolFunction:
    def evaluate(theta, xi):
        return np.asarray(principal.evaluate(theta, xi)) + shift

    return SymbolFunction(order=principal.order, evaluate=evaluate,
                          principal=principal.principal,
                          fiber_dim=principal.fiber_dim,
                          name=f"{principal.name}+{shift}")


def op_dtheta(K: int) -> DiscretizedOperator:
    return op_from_symbol(symbol_xi(), K)


def op_dtheta_shift(K: int) -> DiscretizedOperator:
    return op_from_symbol(_combine(symbol_xi(), 0.3), K)


def op_variable_coeff(K: int) -> DiscretizedOperator:
    return op_from_symbol(symbol_c_theta_times_xi(), K)


def op_variable_coeff_shift(K: int) -> DiscretizedOperator:
    return op_from_symbol(_combine(symbol_c_theta_times_xi(), 0.3), K)


def op_variable_coeff_m2(K: int) -> DiscretizedOperator:
    base = symbol_c_theta_times_xi()

    def evaluate(theta, xi):
        return (2.0 + np.cos(np.asarray(theta, float))) * xi * xi + 1.0 + 0j

    def principal(theta, xi):
        return (2.0 + np.cos(np.asarray(theta, float))) * xi * xi + 0j

    del base
    sym = SymbolFunction(order=2, evaluate=evaluate, principal=principal,
                         name="c_theta_times_xi2_plus_1")
    return op_from_symbol(sym, K)


OPERATOR_PRESETS = {
    "dtheta": (op_dtheta, "-i d/dtheta on the circle; spectrum = integers"),
    "dtheta_shift": (op_dtheta_shift,
                     "-i d/dtheta + 0.3; spectrum = integers + 0.3, "
                     "clear of 0 and of the imaginary axis"),
    "variable_coeff": (op_variable_coeff,
                       "Op((2+cos theta) xi); spectrum = sqrt(3) * integers"),
    "variable_coeff_shift": (op_variable_coeff_shift,
                             "Op((2+cos theta) xi) + 0.3, kernel-free"),
    "variable_coeff_m2": (op_variable_coeff_m2,
                          "Op((2+cos theta) xi^2 + 1), order 2, positive"),
}

# ---------------------------------------------------------------------------
# perturbation presets (split form)

def perturbation_cos_theta_lower(K: int, m: float = 1.0) -> SplitOperator:
    sym = SymbolFunction(order=0,
                         evaluate=lambda theta, xi: np.cos(
                             np.asarray(theta, float)) + 0j,
                         principal=lambda theta, xi: np.cos(
                             np.asarray(theta, float)) + 0j,
                         name="cos_theta")
    lower = op_from_symbol(sym, K).matrix
    return SplitOperator(m=m, K=K, principal=None, lower=lower)


PERTURBATION_PRESETS = {
    "cos_theta_lower": (perturbation_cos_theta_lower,
                        "lower-order multiplication by cos theta "
                        "(split form: no principal part)"),
}

# ---------------------------------------------------------------------------
# contour presets

def contour_imag(R: float = 0.5, **kw) -> ContourSpec:
    return make_sector_contour(np.pi / 2, -np.pi / 2, R, **kw)


CONTOUR_PRESETS = {
    "imag": (contour_imag,
             "sector cut along the imaginary axis (rays at +-pi/2, R=0.5); "
             "positive sector = right half-plane"),
}

# ---------------------------------------------------------------------------
# matrix path presets

def path_crossing(t: float) -> np.ndarray:
    return np.diag([t - 0.5 + 0j, -1.0 + 0j])


def path_constant(t: float) -> np.ndarray:
    return np.diag([1.0 + 0j, -1.0 + 0j])


def path_loop(t: float) -> np.ndarray:
    return np.diag([1.0 + 0.5 * np.exp(2j * np.pi * t), -1.0 + 0j])


PATH_PRESETS = {
    "crossing": (path_crossing,
                 "diag(t-1/2, -1): one eigenvalue crosses the axis at t=1/2"),
    "constant": (path_constant, "diag(1, -1), no crossings"),
    "loop": (path_loop,
             "closed loop diag(1 + 0.5 e^{2 pi i t}, -1); flow 0"),
}

_BUNDLE_DESC = {
    "monopole": "P(xi) = (I + xi.sigma)/2; Chern number +1, obstructed",
    "antimonopole": "P(xi) = (I - xi.sigma)/2; Chern number -1, obstructed",
    "trivial": "constant rank-1 projector; Chern number 0, extendable",
}
BUNDLE_PRESETS = {
    name: (fn, _BUNDLE_DESC.get(name, f"fiber dim {N}"))
    for name, (fn, N) in topology.BUNDLE_PRESETS.items()
}


def get_operator(name: str, K: int) -> DiscretizedOperator:
    if name not in OPERATOR_PRESETS:
        raise ConfigInvalid("preset", f"unknown operator preset {name!r}")
    return OPERATOR_PRESETS[name][0](K)


def get_contour(name: str, **kw) -> ContourSpec:
    if name not in CONTOUR_PRESETS:
        raise ConfigInvalid("contour", f"unknown contour preset {name!r}")
    return CONTOUR_PRESETS[name][0](**kw)


def describe_presets() -> str:
    """Human-readable registry listing, one line per preset."""
    lines = []
    groups = [("operators", OPERATOR_PRESETS),
              ("symbols", SYMBOL_PRESETS),
              ("perturbations", PERTURBATION_PRESETS),
              ("contours", CONTOUR_PRESETS),
              ("paths", PATH_PRESETS),
              ("bundles", BUNDLE_PRESETS)]
    for title, registry in groups:
        lines.append(f"[{title}]")
        for name, (_, desc) in sorted(registry.items()):
            lines.append(f"  {name}: {desc}")
    return "\n".join(lines) + "\n"
