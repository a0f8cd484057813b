"""Executable topology of hyperbolic symbols.

Component classification of matrices without imaginary-axis spectrum,
spectral flow of matrix paths as the endpoint component-index difference,
the one-ray spectral deformation check, and the first Chern number of a
family of projections over S^2 computed by the gauge-invariant lattice
field-strength (plaquette overlap-phase) method on an icosphere grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .errors import (EigenvalueOnAxis, EndpointOnAxis, RoundingUnsafe)

AXIS_CLEARANCE = 1e-8
PATH_CLEARANCE = 1e-6
ROUNDING_LIMIT = 0.05


def component_index(a) -> int:
    """Number of eigenvalues with positive real part (with algebraic
    multiplicity); labels the connected component of the space of
    hyperbolic matrices."""
    a = linalg.as_matrix(a)
    values = linalg.eig(a).values
    min_clear = float(np.abs(values.real).min())
    if min_clear <= AXIS_CLEARANCE:
        raise EigenvalueOnAxis(
            f"eigenvalue within {min_clear:.3e} of the imaginary axis")
    return int(np.count_nonzero(values.real > 0))


@dataclass
class MatrixPath:
    """Ordered samples (t, matrix) with t strictly increasing from 0 to 1.
    The recorded delta (max consecutive jump in 2-norm) is the discrete
    stand-in for continuity."""

    samples: list
    delta: float = field(init=False)

    def __post_init__(self):
        if not self.samples:
            raise ValueError("empty path")
        ts = [t for t, _ in self.samples]
        if ts[0] != 0.0 or ts[-1] != 1.0:
            raise ValueError("path parameter must run from 0 to 1")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("path parameter must be strictly increasing")
        mats = [linalg.as_matrix(m) for t, m in self.samples]
        dims = {m.shape[0] for m in mats}
        if len(dims) != 1:
            raise ValueError("all path samples must share one dimension")
        self.samples = list(zip(ts, mats))
        self.delta = max(
            (linalg.operator_norm_2(b - a) for a, b in zip(mats, mats[1:])),
            default=0.0)


def sample_path(f: Callable[[float], np.ndarray], n: int = 33) -> MatrixPath:
    ts = np.linspace(0.0, 1.0, n)
    return MatrixPath([(float(t), f(float(t))) for t in ts])


def path_component_invariance(p: MatrixPath) -> dict:
    """Component index per sample; flags whether it is constant."""
    indices = []
    for t, m in p.samples:
        values = linalg.eig(m).values
        clear = float(np.abs(values.real).min())
        if clear <= PATH_CLEARANCE:
            raise EigenvalueOnAxis(
                f"sample at t={t} has eigenvalue within {clear:.3e} "
                "of the imaginary axis", t=t)
        indices.append(int(np.count_nonzero(values.real > 0)))
    return {"invariant": len(set(indices)) == 1, "indices": indices}


def spectral_flow(p: MatrixPath) -> int:
    """Net rightward eigenvalue flow across the imaginary axis: the
    endpoint difference of component indices.  Interior samples may touch
    the axis; the endpoints must clear it."""
    for label, (t, m) in (("start", p.samples[0]), ("end", p.samples[-1])):
        values = linalg.eig(m).values
        if float(np.abs(values.real).min()) <= PATH_CLEARANCE:
            raise EndpointOnAxis(f"{label}point (t={t}) has spectrum on the "
                                 "imaginary axis")
    return component_index(p.samples[-1][1]) - component_index(p.samples[0][1])


def seeley_one_ray_deformation(xi):
    """The deformed scalar symbol: xi for |xi| >= 1, the unit-circle arc
    e^{-i(1-xi) pi/2} through -i for |xi| < 1.  Continuous at the seams
    and avoiding the single ray L_{pi/2}."""
    xi = np.asarray(xi, dtype=float)
    inner = np.exp(-1j * (1.0 - xi) * (np.pi / 2.0))
    return np.where(np.abs(xi) >= 1.0, xi.astype(complex), inner)


def _dist_to_ray_origin(z, alpha):
    w = np.asarray(z) * np.exp(-1j * alpha)
    return np.where(w.real >= 0, np.abs(w.imag), np.abs(w))


def seeley_deformation_check(grid, cut: str = "single_ray") -> dict:
    """Minimum distance of the deformed symbol's values to the spectral
    cut.  For the single ray L_{pi/2} the check passes (distance bounded
    away from 0); for the two-ray cut (the whole imaginary axis) the
    deformation crosses the cut and the check reports the violation."""
    grid = np.asarray(grid, dtype=float)
    vals = seeley_one_ray_deformation(grid)
    if cut == "single_ray":
        d = _dist_to_ray_origin(vals, np.pi / 2.0)
    elif cut == "imaginary_axis":
        d = np.minimum(_dist_to_ray_origin(vals, np.pi / 2.0),
                       _dist_to_ray_origin(vals, -np.pi / 2.0))
    else:
        raise ValueError(f"unknown cut {cut!r}")
    min_distance = float(d.min())
    return {"min_distance": min_distance, "passing": min_distance > 1e-12}


# ---------------------------------------------------------------------------
# icosphere grid and Chern numbers

_PHI = (1.0 + math.sqrt(5.0)) / 2.0

_ICO_VERTS = np.array([
    (-1, _PHI, 0), (1, _PHI, 0), (-1, -_PHI, 0), (1, -_PHI, 0),
    (0, -1, _PHI), (0, 1, _PHI), (0, -1, -_PHI), (0, 1, -_PHI),
    (_PHI, 0, -1), (_PHI, 0, 1), (-_PHI, 0, -1), (-_PHI, 0, 1),
], dtype=float)

# counterclockwise seen from outside
_ICO_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


def icosphere(level: int):
    """Subdivided icosahedron projected to the unit sphere.

    Returns (vertices, triangles) with consistently outward-oriented
    triangles; no coordinate poles, uniform triangle quality.
    """
    verts = [v / np.linalg.norm(v) for v in _ICO_VERTS]
    faces = list(_ICO_FACES)
    for _ in range(level):
        midpoint_cache = {}
        new_faces = []

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in midpoint_cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                midpoint_cache[key] = len(verts) - 1
            return midpoint_cache[key]

        for (i, j, k) in faces:
            a, b, c = midpoint(i, j), midpoint(j, k), midpoint(k, i)
            new_faces += [(i, a, c), (j, b, a), (k, c, b), (a, b, c)]
        faces = new_faces
    return np.array(verts), np.array(faces, dtype=int)


@dataclass
class SphereBundleSample:
    """A family of Hermitian projections sampled on an icosphere grid."""

    vertices: np.ndarray       # (V, 3) unit vectors
    triangles: np.ndarray      # (T, 3) oriented vertex indices
    projectors: np.ndarray     # (V, N, N)

    def validate(self, tol=1e-10):
        ranks = set()
        for P in self.projectors:
            if linalg.operator_norm_2(P @ P - P) > tol:
                raise ValueError("projector family not idempotent to tolerance")
            if linalg.operator_norm_2(P - P.conj().T) > tol:
                raise ValueError("projector family not Hermitian to tolerance")
            ranks.add(int(round(np.trace(P).real)))
        if len(ranks) != 1:
            raise ValueError(f"projector rank not constant: {sorted(ranks)}")
        return ranks.pop()


def bundle_from_map(proj: Callable[[np.ndarray], np.ndarray],
                    level: int = 3) -> SphereBundleSample:
    verts, tris = icosphere(level)
    projectors = np.array([proj(v) for v in verts])
    return SphereBundleSample(verts, tris, projectors)


def _frames(sample: SphereBundleSample, rank: int) -> np.ndarray:
    """Orthonormal frame of ran P per vertex (top-`rank` eigenvectors)."""
    frames = []
    for P in sample.projectors:
        w, U = np.linalg.eigh(P)
        frames.append(U[:, -rank:])
    return np.array(frames)


def chern_number(b: SphereBundleSample) -> int:
    """First Chern number of ran P by plaquette overlap phases:
    sum over oriented triangles of arg det(F_i^* F_j F_j^* F_k F_k^* F_i),
    divided by 2*pi.  Gauge invariant by construction; raises
    RoundingUnsafe if the sum is not close to an integer."""
    rank = b.validate()
    if rank == 0:
        return 0
    F = _frames(b, rank)
    total = 0.0
    for (i, j, k) in b.triangles:
        m = (F[i].conj().T @ F[j]) @ (F[j].conj().T @ F[k]) \
            @ (F[k].conj().T @ F[i])
        total += float(np.angle(np.linalg.det(m)))
    c = total / (2.0 * np.pi)
    residual = abs(c - round(c))
    if residual >= ROUNDING_LIMIT:
        raise RoundingUnsafe(residual)
    return int(round(c))


def chern_rounding_residual(b: SphereBundleSample) -> float:
    rank = b.validate()
    if rank == 0:
        return 0.0
    F = _frames(b, rank)
    total = 0.0
    for (i, j, k) in b.triangles:
        m = (F[i].conj().T @ F[j]) @ (F[j].conj().T @ F[k]) \
            @ (F[k].conj().T @ F[i])
        total += float(np.angle(np.linalg.det(m)))
    c = total / (2.0 * np.pi)
    return abs(c - round(c))


PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def monopole_projector(xi: np.ndarray) -> np.ndarray:
    """P(xi) = (I + xi . sigma) / 2, rank 1 on the unit sphere."""
    s = xi[0] * PAULI[0] + xi[1] * PAULI[1] + xi[2] * PAULI[2]
    return 0.5 * (np.eye(2) + s)


def antimonopole_projector(xi: np.ndarray) -> np.ndarray:
    return 0.5 * (np.eye(2) - (xi[0] * PAULI[0] + xi[1] * PAULI[1]
                               + xi[2] * PAULI[2]))


def trivial_projector(xi: np.ndarray) -> np.ndarray:
    return np.diag([1.0, 0.0]).astype(complex)


BUNDLE_PRESETS = {
    "monopole": (monopole_projector, 2),
    "antimonopole": (antimonopole_projector, 2),
    "trivial": (trivial_projector, 2),
}


def obstruction_demo(preset: str, level: int = 3) -> dict:
    """Appendix-style obstruction report: build a(xi) = 2 P(xi) - I on the
    sphere grid, confirm it is hyperbolic everywhere (spec = {-1, +1},
    both imaginary half-axes clear), compute the Chern number of the
    positive spectral bundle, and flag the extension obstruction when the
    Chern number is nonzero."""
    if preset not in BUNDLE_PRESETS:
        raise ValueError(f"unknown bundle preset {preset!r}; "
                         f"choose from {sorted(BUNDLE_PRESETS)}")
    proj, N = BUNDLE_PRESETS[preset]
    sample = bundle_from_map(proj, level)
    spec_ok = True
    for P in sample.projectors:
        a = 2.0 * P - np.eye(N)
        values = linalg.eig(a).values
        if not np.allclose(np.sort(np.abs(values)), 1.0, atol=1e-9) or \
           np.abs(values.real).min() < 0.5:
            spec_ok = False
            break
    chern = chern_number(sample)
    return {
        "preset": preset,
        "fiber_dim": N,
        "grid_level": level,
        "hyperbolic_everywhere": spec_ok,
        "chern_number": chern,
        "rounding_residual": chern_rounding_residual(sample),
        "obstructed": chern != 0,
    }
