import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import LinAlgError

from graphs.core import graph_from_edges, normalized_laplacian
from spectral.eig import EigenDecomposition, canonicalize, eig_sym, symmetric_eig
from spectral.transform import convolve, gft, igft
from utils import telemetry
from utils.errors import DimensionError, NumericalError, ValidationError
from tests.helpers import random_connected_graph


def _k4_laplacian():
    return normalized_laplacian(graph_from_edges(4, [(i, j, 1) for i in range(4) for j in range(i + 1, 4)]))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=3, max_value=16), st.integers(min_value=0, max_value=10_000))
def test_eig_sym_is_orthonormal_and_reconstructs(n, seed):
    L = normalized_laplacian(random_connected_graph(n, seed))
    d = eig_sym(L)
    U, lam = d.vectors, d.values
    assert np.max(np.abs(U.T @ U - np.eye(n))) <= 1e-9
    assert np.max(np.abs(L - (U * lam) @ U.T)) <= 1e-9
    assert np.all(np.diff(lam) >= -1e-12)
    assert lam[0] == pytest.approx(0.0, abs=1e-9)
    assert lam[-1] <= 2 + 1e-9


def test_eig_sym_k4_spectrum():
    d = eig_sym(_k4_laplacian())
    assert np.allclose(d.values, [0, 4 / 3, 4 / 3, 4 / 3], atol=1e-12)


def test_sign_convention_first_nonzero_entry_positive(random_problem):
    _, d = random_problem
    for k in range(d.n):
        col = d.vectors[:, k]
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert first > 0


def test_repeated_eigenspace_basis_is_canonical():
    L = _k4_laplacian()
    w, V = symmetric_eig(L)
    # rotate the 3-dim eigenspace of 4/3 by an arbitrary orthogonal matrix
    Q, _ = np.linalg.qr(np.random.default_rng(5).standard_normal((3, 3)))
    V2 = V.copy()
    V2[:, 1:] = V[:, 1:] @ Q
    assert np.allclose(canonicalize(w, V2), canonicalize(w, V), atol=1e-10)


def test_results_are_reproducible(random_problem):
    g, d = random_problem
    d2 = eig_sym(normalized_laplacian(g))
    assert np.array_equal(d.values, d2.values)
    assert np.array_equal(d.vectors, d2.vectors)


def test_descending_order():
    M = np.diag([0.2, 0.9, 0.5])
    w, V = symmetric_eig(M, descending=True)
    assert w.tolist() == pytest.approx([0.9, 0.5, 0.2])
    assert np.allclose(np.abs(V[:, 0]), [0, 1, 0])


def test_rejects_asymmetric_and_nonfinite():
    with pytest.raises(ValidationError):
        symmetric_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NumericalError):
        symmetric_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValidationError):
        symmetric_eig(np.zeros((2, 3)))


def test_driver_retry_after_convergence_failure(monkeypatch):
    real = scipy.linalg.eigh
    drivers = []

    def flaky(M, driver=None, **kw):
        drivers.append(driver)
        if driver == "evr":
            raise LinAlgError("did not converge")
        return real(M, driver=driver, **kw)

    monkeypatch.setattr(scipy.linalg, "eigh", flaky)
    d = eig_sym(_k4_laplacian())
    assert drivers == ["evr", "evd"]
    assert np.allclose(d.values, [0, 4 / 3, 4 / 3, 4 / 3], atol=1e-12)
    assert telemetry.count(telemetry.EIGEN_RETRIES) == 1
    assert telemetry.count(telemetry.EIGENSOLVES) == 2


def test_driver_exhaustion_is_numerical_error(monkeypatch):
    def broken(M, driver=None, **kw):
        raise LinAlgError("did not converge")

    monkeypatch.setattr(scipy.linalg, "eigh", broken)
    with pytest.raises(NumericalError) as err:
        eig_sym(_k4_laplacian())
    assert err.value.exit_code == 3


def test_from_basis_accepts_valid_and_rejects_wrong_basis(k4):
    L = normalized_laplacian(k4.graph)
    assert np.allclose(k4.decomp.vectors[:, 0], 0.5)
    with pytest.raises(ValidationError):
        EigenDecomposition.from_basis(L, [0, 4 / 3, 4 / 3, 4 / 3], np.eye(4))
    with pytest.raises(ValidationError):
        EigenDecomposition.from_basis(L, [4 / 3, 4 / 3, 4 / 3, 0], k4.decomp.vectors)


# ---------- transform ----------

@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_gft_is_an_isometry_with_inverse(seed):
    d = eig_sym(normalized_laplacian(random_connected_graph(9, seed)))
    x = np.random.default_rng(seed).standard_normal(9)
    xh = gft(d, x)
    assert np.linalg.norm(xh) == pytest.approx(np.linalg.norm(x), rel=1e-12)
    assert np.allclose(igft(d, xh), x, atol=1e-12)


def test_convolution_is_commutative_with_identity(random_problem):
    _, d = random_problem
    rng = np.random.default_rng(1)
    x, y = rng.standard_normal(d.n), rng.standard_normal(d.n)
    assert np.allclose(convolve(d, x, y), convolve(d, y, x), atol=1e-12)
    unit = igft(d, np.ones(d.n))
    assert np.allclose(convolve(d, x, unit), x, atol=1e-12)


def test_transform_dimension_errors(random_problem):
    _, d = random_problem
    with pytest.raises(DimensionError) as err:
        gft(d, np.ones(d.n + 1))
    assert err.value.expected == d.n
    with pytest.raises(DimensionError):
        convolve(d, np.ones(d.n), np.ones(3))
