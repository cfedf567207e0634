import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphs.core import normalized_laplacian
from localization.filters import FilterPair, SpatialFilter, SpectralFilter, laplace_spectral
from localization.operators import (
    build_bundle,
    dual_bundle,
    mean_values,
    normalize_angle,
    r_mean,
    rotated,
    s_mean,
    sigma1_characterizations,
    uncertainty_gap,
    variances,
)
from spectral.eig import eig_sym
from spectral.transform import convolve
from utils.errors import DimensionError, FilterError, ValidationError
from tests.helpers import PAIR_KINDS, random_connected_graph, random_problem_pair, random_strict_pair


@pytest.mark.parametrize("kind", PAIR_KINDS)
def test_operators_are_symmetric_contractions(kind):
    _, decomp, pair = random_problem_pair(11, 4, kind)
    b = build_bundle(decomp, pair)
    for M in (b.Mf, b.Cg, b.S):
        assert np.max(np.abs(M - M.T)) <= 1e-12
        w = np.linalg.eigvalsh(M)
        assert w.min() >= -1e-10
        assert w.max() <= 1 + 1e-10
    assert np.allclose(np.linalg.eigvalsh(b.Cg), np.sort(pair.spectral.ghat), atol=1e-10)
    assert np.allclose(b.Cg_half @ b.Cg_half, b.Cg, atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(PAIR_KINDS), st.integers(min_value=0, max_value=10_000))
def test_sigma1_characterizations_agree(kind, seed):
    _, decomp, pair = random_problem_pair(9, seed, kind)
    b = build_bundle(decomp, pair)
    values = sigma1_characterizations(b)
    for v in values:
        assert v == pytest.approx(b.spectrum.sigma1, abs=1e-9)
    assert 0.0 <= b.spectrum.sigma1 <= 1.0 + 1e-12


def test_simple_top_eigenvalues_give_uncertainty():
    for seed in range(100):
        g = random_connected_graph(8, seed)
        decomp = eig_sym(normalized_laplacian(g))
        b = build_bundle(decomp, random_strict_pair(8, seed + 1000))
        assert b.spectrum.sigma1 < 1.0 - 1e-9
        assert uncertainty_gap(b) > 1e-9


def test_counterexamples_have_sigma1_one(bipartite, k4):
    for fx in (bipartite, k4):
        b = build_bundle(fx.decomp, fx.pair)
        assert b.spectrum.sigma1 == pytest.approx(1.0, abs=1e-12)
        assert uncertainty_gap(b) == pytest.approx(0.0, abs=1e-12)


def test_mean_values_of_node_and_frequency_vectors(random_problem):
    _, decomp = random_problem
    b = build_bundle(decomp, random_strict_pair(10, 7))
    for i in range(b.n):
        p = mean_values(b, np.eye(b.n)[i])
        assert p.m == pytest.approx(b.f[i])
        q = mean_values(b, decomp.vectors[:, i])
        assert q.c == pytest.approx(b.h[i], abs=1e-12)
    x = np.random.default_rng(0).standard_normal(b.n)
    assert mean_values(b, 3.0 * x).as_tuple() == pytest.approx(mean_values(b, x).as_tuple())


def test_zero_signal_and_wrong_length(random_problem):
    _, decomp = random_problem
    b = build_bundle(decomp, random_strict_pair(10, 0))
    with pytest.raises(ValidationError):
        mean_values(b, np.zeros(10))
    with pytest.raises(ValidationError):
        s_mean(b, np.zeros(10))
    with pytest.raises(DimensionError):
        mean_values(b, np.ones(9))
    with pytest.raises(DimensionError):
        build_bundle(decomp, random_strict_pair(9, 0))


def test_rotated_operator(random_problem):
    _, decomp = random_problem
    b = build_bundle(decomp, random_strict_pair(10, 2))
    r0 = rotated(b, 0.0)
    assert np.allclose(r0.R, b.Mf)
    assert r0.rho1 == pytest.approx(1.0)
    r = rotated(b, 3 * math.pi / 4)
    assert np.all(np.diff(r.rho) <= 1e-12)
    x = r.Phi[:, 0]
    assert r_mean(r, x) == pytest.approx(r.rho1)
    p = mean_values(b, x)
    assert math.cos(r.theta) * p.m + math.sin(r.theta) * p.c == pytest.approx(r.rho1, abs=1e-10)
    assert rotated(b, -math.pi / 2).theta == pytest.approx(3 * math.pi / 2)
    assert normalize_angle(2 * math.pi) == 0.0


def test_variances_vanish_on_eigenvectors(random_problem):
    _, decomp = random_problem
    b = build_bundle(decomp, random_strict_pair(10, 3))
    rot = rotated(b, 1.0)
    var_s, _ = variances(b, rot, b.spectrum.Psi[:, 0])
    assert var_s == pytest.approx(0.0, abs=1e-12)
    _, var_r = variances(b, rot, rot.Phi[:, 2])
    assert var_r == pytest.approx(0.0, abs=1e-12)
    x = np.random.default_rng(9).standard_normal(10)
    vs, vr = variances(b, rot, x)
    assert vs >= 0 and vr >= 0
    assert s_mean(b, x) <= b.spectrum.sigma1 + 1e-12


def test_build_rejects_unnormalized_pair_unless_loose(random_problem):
    _, decomp = random_problem
    loose = FilterPair(SpatialFilter(np.full(10, 0.5), strict=False), SpectralFilter(np.ones(10)))
    with pytest.raises(FilterError):
        build_bundle(decomp, loose)
    b = build_bundle(decomp, loose, strict=False)
    assert b.violations


def test_dual_bundle_convolves(random_problem):
    _, decomp = random_problem
    pair = random_strict_pair(10, 5)
    b = dual_bundle(decomp, pair)
    assert b.dual
    y = np.random.default_rng(2).standard_normal(10)
    assert np.allclose(b.Cg @ y, convolve(decomp, pair.spectral.ghat, y), atol=1e-12)
    assert np.allclose(b.Mf, np.diag(pair.spatial.f))
    if np.any(b.h < -1e-12):
        assert any("negative Fourier" in v for v in b.violations)


def _negative_flagged(b) -> bool:
    return any("negative Fourier" in v for v in b.violations)


@pytest.mark.parametrize("seed", [3, 8, 21, 34])
def test_dual_laplace_laplace_pair(seed):
    g = random_connected_graph(9, seed)
    decomp = eig_sym(normalized_laplacian(g))
    lap = laplace_spectral(decomp.values)
    b = dual_bundle(decomp, FilterPair(SpatialFilter(lap.ghat), SpectralFilter(lap.ghat), "laplace-laplace"))
    U = decomp.vectors
    expected = 1.0 - decomp.values / 2.0
    assert np.allclose(np.diag(b.Mf), expected, atol=1e-10)
    assert np.allclose(b.h, U.T @ expected, atol=1e-10)
    assert np.allclose(b.Cg, (U * (U.T @ expected)) @ U.T, atol=1e-10)
    assert _negative_flagged(b) == bool(np.any(b.h < -1e-12))


def test_dual_reports_negative_fourier_coefficients(k4):
    # U^T e_4 is the last row of the displayed basis: (1/2, -1/2, 0, -1/sqrt2)
    pair = FilterPair(SpatialFilter([1, 0, 0, 0]), SpectralFilter([0, 0, 0, 1]))
    b = dual_bundle(k4.decomp, pair)
    assert np.allclose(b.h, [0.5, -0.5, 0.0, -1 / math.sqrt(2)], atol=1e-10)
    assert _negative_flagged(b)
    assert any("2 negative" in v for v in b.violations)
    # C keeps the signed coefficients
    assert np.allclose(b.Cg, (k4.decomp.vectors * b.h) @ k4.decomp.vectors.T, atol=1e-10)


def test_dual_all_ones_spatial_filter_is_identity(random_problem):
    _, decomp = random_problem
    pair = FilterPair(SpatialFilter(np.ones(10)), random_strict_pair(10, 6).spectral)
    b = dual_bundle(decomp, pair)
    assert np.allclose(b.Mf, np.eye(10), atol=1e-10)
    # with M = I, S is C restricted to its nonnegative Fourier coefficients
    U = decomp.vectors
    assert np.allclose(b.S, (U * np.clip(b.h, 0.0, None)) @ U.T, atol=1e-10)


def test_dual_of_dual_returns_original_bundle(random_problem):
    _, decomp = random_problem
    pair = random_strict_pair(10, 9)
    twice = decomp.transposed().transposed()
    for make in (build_bundle, dual_bundle):
        a, b = make(decomp, pair), make(twice, pair)
        for name in ("Mf", "Cg", "S", "Cg_half"):
            assert np.allclose(getattr(a, name), getattr(b, name), atol=1e-10)


def test_transposed_basis_swaps_the_transform(random_problem):
    _, decomp = random_problem
    pair = random_strict_pair(10, 4)
    U = decomp.vectors
    swapped = decomp.transposed()
    assert np.allclose(swapped.vectors @ swapped.vectors.T, np.eye(10), atol=1e-10)
    assert np.array_equal(swapped.values, decomp.values)
    b = build_bundle(swapped, pair)
    assert np.allclose(b.Cg, (U.T * pair.spectral.ghat) @ U, atol=1e-10)
