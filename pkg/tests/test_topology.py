import numpy as np
import pytest

from sectoral.errors import (EigenvalueOnAxis, EndpointOnAxis,
                             RoundingUnsafe)
from sectoral.topology import (MatrixPath, SphereBundleSample,
                               antimonopole_projector, bundle_from_map,
                               chern_number, chern_rounding_residual,
                               component_index, icosphere,
                               monopole_projector, obstruction_demo,
                               path_component_invariance, sample_path,
                               seeley_deformation_check,
                               seeley_one_ray_deformation, spectral_flow,
                               trivial_projector)


# ---------------------------------------------------------------------------
# component index and spectral flow

def test_component_index_counts_right_halfplane_eigenvalues():
    assert component_index(np.diag([1.0, -2.0, 3.0])) == 2
    assert component_index(-np.eye(4)) == 0
    assert component_index(np.diag([0.5 + 10.0j, 0.5 - 10.0j])) == 2
    # counted with algebraic multiplicity (Jordan block at 2)
    J = np.array([[2.0, 1.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -1.0]])
    assert component_index(J) == 2


def test_component_index_random_against_eigvals_oracle():
    rng = np.random.default_rng(21)
    for _ in range(25):
        A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        values = np.linalg.eigvals(A)
        if np.abs(values.real).min() <= 1e-6:
            continue
        assert component_index(A) == int(np.sum(values.real > 0))


def test_component_index_rejects_axis_spectrum():
    with pytest.raises(EigenvalueOnAxis):
        component_index(np.diag([1.0j, 2.0]))


def test_matrix_path_validation_and_delta():
    with pytest.raises(ValueError):
        MatrixPath([])
    with pytest.raises(ValueError):
        MatrixPath([(0.0, np.eye(2)), (0.5, np.eye(2))])  # must end at 1
    with pytest.raises(ValueError):
        MatrixPath([(0.0, np.eye(2)), (0.5, np.eye(2)), (0.5, np.eye(2)),
                    (1.0, np.eye(2))])  # strictly increasing
    p = MatrixPath([(0.0, np.eye(2)), (1.0, 3.0 * np.eye(2))])
    assert p.delta == pytest.approx(2.0)


def test_path_component_invariance_reports_indices():
    p = sample_path(lambda t: np.diag([1.0 + t, -1.0]).astype(complex), n=9)
    out = path_component_invariance(p)
    assert out["invariant"]
    assert out["indices"] == [1] * 9


def test_path_component_invariance_flags_axis_sample():
    p = sample_path(lambda t: np.diag([t - 0.5, -1.0]).astype(complex), n=9)
    with pytest.raises(EigenvalueOnAxis) as exc:
        path_component_invariance(p)
    assert exc.value.t == pytest.approx(0.5)


def test_spectral_flow_single_crossing():
    p = sample_path(lambda t: np.diag([t - 0.4, -1.0]).astype(complex), n=33)
    assert spectral_flow(p) == 1
    back = sample_path(lambda t: np.diag([0.6 - t, -1.0]).astype(complex),
                       n=33)
    assert spectral_flow(back) == -1


def test_spectral_flow_constant_and_loop():
    const = sample_path(lambda t: np.diag([1.0, -1.0]).astype(complex), n=9)
    assert spectral_flow(const) == 0
    # eigenvalue loops around 1 without ever leaving the right half-plane
    loop = sample_path(
        lambda t: np.diag([1.0 + 0.5 * np.exp(2j * np.pi * t), -1.0]), n=65)
    assert spectral_flow(loop) == 0


def test_spectral_flow_rejects_axis_endpoint():
    p = MatrixPath([(0.0, np.diag([0.0, -1.0]).astype(complex)),
                    (1.0, np.diag([1.0, -1.0]).astype(complex))])
    with pytest.raises(EndpointOnAxis):
        spectral_flow(p)


# ---------------------------------------------------------------------------
# one-ray deformation

def test_seeley_deformation_values():
    assert seeley_one_ray_deformation(2.0) == pytest.approx(2.0)
    assert seeley_one_ray_deformation(-3.0) == pytest.approx(-3.0)
    assert seeley_one_ray_deformation(0.0) == pytest.approx(-1.0j)
    # continuity at the seams
    assert seeley_one_ray_deformation(1.0 - 1e-9) == pytest.approx(
        1.0, abs=1e-7)
    assert seeley_one_ray_deformation(-1.0 + 1e-9) == pytest.approx(
        -1.0, abs=1e-7)
    # values stay on the unit circle inside
    xs = np.linspace(-0.99, 0.99, 101)
    assert np.allclose(np.abs(seeley_one_ray_deformation(xs)), 1.0)


def test_seeley_check_single_ray_passes_two_rays_fail():
    grid = np.linspace(-5.0, 5.0, 4001)
    single = seeley_deformation_check(grid, cut="single_ray")
    assert single["passing"]
    # the deformation stays at distance >= 1 from the upward ray
    assert single["min_distance"] == pytest.approx(1.0, abs=1e-3)
    both = seeley_deformation_check(grid, cut="imaginary_axis")
    assert not both["passing"]
    assert both["min_distance"] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        seeley_deformation_check(grid, cut="elsewhere")


# ---------------------------------------------------------------------------
# icosphere

def test_icosphere_counts_and_norms():
    v0, f0 = icosphere(0)
    assert v0.shape == (12, 3) and f0.shape == (20, 3)
    v3, f3 = icosphere(3)
    assert v3.shape == (642, 3) and f3.shape == (1280, 3)
    assert np.allclose(np.linalg.norm(v3, axis=1), 1.0)


def test_icosphere_orientation_outward():
    verts, faces = icosphere(1)
    for (i, j, k) in faces:
        n = np.cross(verts[j] - verts[i], verts[k] - verts[i])
        center = (verts[i] + verts[j] + verts[k]) / 3.0
        assert np.dot(n, center) > 0


def test_icosphere_triangle_closure():
    # every edge is shared by exactly two triangles (closed surface)
    _, faces = icosphere(2)
    from collections import Counter
    edges = Counter()
    for (i, j, k) in faces:
        for a, b in ((i, j), (j, k), (k, i)):
            edges[(min(a, b), max(a, b))] += 1
    assert set(edges.values()) == {2}


# ---------------------------------------------------------------------------
# Chern numbers

def _berry_loop_phase_chern(proj, n_theta=120, n_phi=240):
    """Independent oracle: total Berry phase of latitude loops on a
    latitude-longitude grid, using overlap phases along each loop and
    accumulating the phase difference between adjacent latitudes."""
    thetas = np.linspace(0.0, np.pi, n_theta + 1)
    phis = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)

    def loop_phase(theta):
        pts = np.stack([np.sin(theta) * np.cos(phis),
                        np.sin(theta) * np.sin(phis),
                        np.full_like(phis, np.cos(theta))], axis=1)
        vecs = []
        for p in pts:
            w, U = np.linalg.eigh(proj(p))
            vecs.append(U[:, -1])
        phase = 0.0
        for a in range(len(vecs)):
            b = (a + 1) % len(vecs)
            phase += np.angle(np.vdot(vecs[a], vecs[b]))
        return phase

    total = 0.0
    prev = loop_phase(thetas[0] + 1e-9)
    for th in thetas[1:-1]:
        cur = loop_phase(th)
        d = cur - prev
        total += d - 2.0 * np.pi * round(d / (2.0 * np.pi))
        prev = cur
    last = loop_phase(thetas[-1] - 1e-9)
    d = last - prev
    total += d - 2.0 * np.pi * round(d / (2.0 * np.pi))
    # orientation fixed empirically by the analytic monopole (+1)
    return total / (2.0 * np.pi)


def test_chern_monopole_matches_berry_oracle():
    got = chern_number(bundle_from_map(monopole_projector, level=3))
    oracle = _berry_loop_phase_chern(monopole_projector)
    assert round(oracle) == 1
    assert got == round(oracle) == 1


def test_chern_antimonopole_and_trivial():
    assert chern_number(bundle_from_map(antimonopole_projector, 3)) == -1
    assert chern_number(bundle_from_map(trivial_projector, 2)) == 0


def test_chern_direct_sum_cancels():
    def pair(xi):
        P = np.zeros((4, 4), dtype=complex)
        P[:2, :2] = monopole_projector(xi)
        P[2:, 2:] = antimonopole_projector(xi)
        return P

    assert chern_number(bundle_from_map(pair, 3)) == 0


def test_chern_refinement_invariance_and_residual():
    for level in (2, 3, 4):
        b = bundle_from_map(monopole_projector, level)
        assert chern_number(b) == 1
        assert chern_rounding_residual(b) < 0.05


def test_chern_random_family_still_sums_to_integer():
    # edge overlap phases cancel exactly between adjacent triangles on a
    # closed oriented grid, so even an incoherent family produces an exact
    # (meaningless) integer rather than a large residual
    rng = np.random.default_rng(5)
    verts, tris = icosphere(1)
    projectors = []
    for _ in range(len(verts)):
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v /= np.linalg.norm(v)
        projectors.append(np.outer(v, v.conj()))
    b = SphereBundleSample(verts, tris, np.array(projectors))
    assert chern_rounding_residual(b) < 1e-9


def test_chern_rejects_inconsistent_orientation():
    # flipping one triangle breaks the edge-phase cancellation by twice the
    # Berry flux through that triangle, which the rounding guard catches
    verts, tris = icosphere(0)
    tris = tris.copy()
    tris[0] = tris[0][::-1]
    projectors = np.array([monopole_projector(v) for v in verts])
    b = SphereBundleSample(verts, tris, projectors)
    with pytest.raises(RoundingUnsafe):
        chern_number(b)


def test_bundle_validate_errors():
    verts, tris = icosphere(0)
    n = len(verts)
    not_proj = np.array([0.5 * np.eye(2)] * n)
    with pytest.raises(ValueError):
        SphereBundleSample(verts, tris, not_proj).validate()
    not_herm = np.array([np.array([[1.0, 1.0], [0.0, 0.0]])] * n)
    with pytest.raises(ValueError):
        SphereBundleSample(verts, tris, not_herm).validate()
    mixed = np.array([np.eye(2)] * (n - 1) + [np.zeros((2, 2))])
    with pytest.raises(ValueError):
        SphereBundleSample(verts, tris, mixed).validate()
    ok = SphereBundleSample(verts, tris,
                            np.array([np.diag([1.0, 0.0])] * n))
    assert ok.validate() == 1


def test_obstruction_demo_flags():
    mono = obstruction_demo("monopole", level=3)
    assert mono["hyperbolic_everywhere"]
    assert mono["chern_number"] == 1
    assert mono["obstructed"]
    assert mono["rounding_residual"] < 0.05
    triv = obstruction_demo("trivial", level=2)
    assert triv["hyperbolic_everywhere"]
    assert not triv["obstructed"]
    with pytest.raises(ValueError):
        obstruction_demo("nonsense")
