import numpy as np
import pytest

from sectoral import linalg
from sectoral.errors import (NotHermitian, NotPositiveDefinite,
                             SingularMatrix)


def test_as_matrix_rejects_nonsquare_and_nonfinite():
    with pytest.raises(ValueError):
        linalg.as_matrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        linalg.as_matrix([[np.inf, 0], [0, 1]])
    with pytest.raises(ValueError):
        linalg.as_matrix([1, 2, 3])


def test_solve_matches_direct_inverse():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    B = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    X = linalg.solve(A, B)
    assert np.linalg.norm(A @ X - B) <= 1e-10 * np.linalg.norm(B)


def test_solve_raises_on_singular():
    A = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
    with pytest.raises(SingularMatrix) as exc:
        linalg.solve(A, np.eye(2))
    assert exc.value.pivot_magnitude < 1e-10


def test_eig_values_sorted_lexicographically():
    A = np.diag([3.0, -1.0, 3.0 - 2j, 0.5j])
    dec = linalg.eig(A)
    order = np.lexsort((dec.values.imag, dec.values.real))
    assert np.all(order == np.arange(4))
    assert dec.values[0] == -1.0


def test_eig_reconstruction_well_conditioned():
    rng = np.random.default_rng(11)
    A = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    dec = linalg.eig(A)
    assert dec.condition_estimate <= 1e4
    R = dec.right_vectors @ np.diag(dec.values) @ np.linalg.inv(
        dec.right_vectors)
    assert np.linalg.norm(R - A) <= 1e-7 * np.linalg.norm(A)


def test_eig_never_refuses_defective_but_flags_it():
    J = np.array([[2.0, 1.0], [0.0, 2.0]], dtype=complex)  # Jordan block
    dec = linalg.eig(J)
    assert dec.condition_estimate > 1e6
    assert np.allclose(dec.values, [2.0, 2.0])


def test_eig_dimension_limit():
    with pytest.raises(ValueError):
        linalg.eig(np.eye(1025))


def test_operator_norm_known_values():
    assert linalg.operator_norm_2(np.diag([3.0, -5.0])) == pytest.approx(5.0)
    # rank-1: norm = |u||v|
    u = np.array([[1.0], [2.0]])
    v = np.array([[3.0, 4.0]])
    assert linalg.operator_norm_2(u @ v) == pytest.approx(
        np.sqrt(5.0) * 5.0, rel=1e-12)


def test_inv_sqrt_hpd():
    rng = np.random.default_rng(3)
    B = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    H = B @ B.conj().T + 5 * np.eye(5)
    S = linalg.inv_sqrt_hpd(H)
    assert np.linalg.norm(S @ H @ S - np.eye(5)) <= 1e-10
    with pytest.raises(NotHermitian):
        linalg.inv_sqrt_hpd(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(NotPositiveDefinite):
        linalg.inv_sqrt_hpd(np.diag([1.0, -2.0]))


def test_schur_bound_dominates_norm():
    rng = np.random.default_rng(5)
    for _ in range(10):
        A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        assert linalg.schur_bound(A) >= linalg.operator_norm_2(A) - 1e-12
    # exact for nonnegative diagonal
    assert linalg.schur_bound(np.diag([2.0, 7.0])) == pytest.approx(7.0)


def test_matrix_text_roundtrip_exact():
    rng = np.random.default_rng(13)
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    B = linalg.parse_matrix(linalg.format_matrix(A))
    assert np.array_equal(A, B)


def test_parse_matrix_rejects_malformed():
    with pytest.raises(ValueError):
        linalg.parse_matrix("")
    with pytest.raises(ValueError):
        linalg.parse_matrix("2\n1+0j 2+0j\n")
    with pytest.raises(ValueError):
        linalg.parse_matrix("1\n1+0j 2+0j\n")
