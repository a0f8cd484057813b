"""Shared test helpers: seeded random matrix factories."""
import numpy as np
import pytest

from sectoral.contour import make_sector_contour


def random_diagonalizable(rng, dim=None, cond_max=1e3, min_abs_re=0.7,
                          abs_min=1.1, abs_max=5.0):
    """Random diagonalizable matrix whose spectrum clears the standard
    imaginary-axis sector contour (R=0.5) by at least 0.5.

    Eigenvalues have |Re| >= min_abs_re and abs_min <= |lambda| <= abs_max;
    the eigenvector matrix is built with condition <= cond_max.
    """
    if dim is None:
        dim = int(rng.integers(2, 21))
    values = np.empty(dim, dtype=complex)
    for i in range(dim):
        while True:
            re = rng.uniform(-abs_max, abs_max)
            im = rng.uniform(-abs_max, abs_max)
            z = re + 1j * im
            if abs(re) >= min_abs_re and abs_min <= abs(z) <= abs_max:
                values[i] = z
                break
    # eigenvector matrix with modest condition number
    q1, _ = np.linalg.qr(rng.standard_normal((dim, dim))
                         + 1j * rng.standard_normal((dim, dim)))
    q2, _ = np.linalg.qr(rng.standard_normal((dim, dim))
                         + 1j * rng.standard_normal((dim, dim)))
    sing = np.geomspace(1.0, rng.uniform(2.0, min(50.0, cond_max)), dim)
    V = q1 @ np.diag(sing) @ q2
    A = V @ np.diag(values) @ np.linalg.inv(V)
    return A, values, V


@pytest.fixture
def imag_contour():
    return make_sector_contour(np.pi / 2, -np.pi / 2, 0.5)
