import numpy as np
import pytest

from qinfogeo.funlib import catalog_get, default_catalog, transpose
from qinfogeo.matcore import hs_inner, random_hermitian, random_matrix, matrix_power
from qinfogeo.metrics import (
    JOperator,
    bkm_metric_integral,
    bkm_metric_quadrature,
    chi2_alpha,
    chi2_bures,
    chi2_bures_integral,
    chi2_k,
    chi2_k_paths,
    generalized_covariance,
    hessian_step,
    j_apply,
    j_inverse_apply,
    kumagai_metric,
    metric_from_divergence_hessian,
    monotone_metric,
    psd_min_eigenvalue,
    ruskai_f_from_F,
    superop_matrix,
    two_param_metric,
)
from qinfogeo.matcore import trace_norm
from qinfogeo.states import block_embed, random_commuting_pair, random_density, random_traceless_hermitian

STANDARD = [f for f in default_catalog() if f.standard]


def test_j_on_matrix_unit():
    E12 = np.zeros((2, 2))
    E12[0, 1] = 1
    out = j_apply(catalog_get("bures"), np.diag([2.0, 3.0]), None, E12)
    np.testing.assert_allclose(out, 2.5 * E12, atol=1e-15)
    np.testing.assert_allclose(j_inverse_apply(catalog_get("bures"), np.diag([2.0, 3.0]), None, out), E12, atol=1e-15)


def test_metric_oracle(qubit_pair):
    _, D = qubit_pair
    A = np.diag([1.0, -1.0])
    for f in STANDARD:
        assert monotone_metric(f, D, A) == pytest.approx(16 / 3, rel=1e-12)


def test_j_inverse_and_self_adjoint(rng):
    D1, D2 = random_density(3, rng), random_density(3, rng)
    A, B = random_matrix(3, rng=rng), random_matrix(3, rng=rng)
    for f in default_catalog():
        try:
            J = JOperator.build(f, D1, D2)
        except ValueError:
            continue
        np.testing.assert_allclose(J.inverse_apply(J.apply(A)), A, atol=1e-8)
        assert hs_inner(A, J.apply(B)) == pytest.approx(hs_inner(J.apply(A), B), rel=1e-10)
        assert J.form(A, A).real > 0


def test_j_rejects_non_positive_mean(rng):
    D1, D2 = random_density(3, rng), random_density(3, rng)
    with pytest.raises(ValueError):
        JOperator.build(catalog_get("xlogx"), D1, D2)
    with pytest.raises(ValueError):
        JOperator.build(catalog_get("bures"), D1, np.eye(2) / 2)


def test_bures_j_is_anticommutator(rng):
    D = random_density(3, rng)
    A = random_matrix(3, rng=rng)
    np.testing.assert_allclose(j_apply(catalog_get("bures"), D, None, A), (D @ A + A @ D) / 2, atol=1e-14)


def test_affine_j_is_left_plus_right(rng):
    D1, D2 = random_density(3, rng), random_density(3, rng)
    A = random_matrix(3, rng=rng)
    s = 0.7
    out = j_apply(catalog_get("affine", s=s), D1, D2, A)
    np.testing.assert_allclose(out, s * D1 @ A + A @ D2, atol=1e-13)


def test_monotone_metric_requires_symmetric_f(rng):
    D = random_density(2, rng)
    with pytest.raises(ValueError, match="metric"):
        monotone_metric(catalog_get("power_t", t=0.3), D, np.eye(2))
    with pytest.raises(ValueError):
        monotone_metric(catalog_get("bures"), D, random_matrix(2, rng=rng))


def test_two_param_metric_complex_when_needed(rng):
    D1, D2 = random_density(3, rng), random_density(3, rng)
    A, B = random_matrix(3, rng=rng), random_matrix(3, rng=rng)
    f = catalog_get("bkm")
    assert isinstance(two_param_metric(f, D1, D2, A), float)
    assert isinstance(two_param_metric(f, D1, D2, A, B), complex)
    # non-normalized states are allowed
    assert two_param_metric(f, 2 * D1, 2 * D2, A) == pytest.approx(two_param_metric(f, D1, D2, A) / 2)


def test_bkm_integral_and_quadrature(rng):
    for n in (2, 3, 4):
        D = random_density(n, rng)
        A, B = random_hermitian(n, rng), random_hermitian(n, rng)
        exact = monotone_metric(catalog_get("bkm"), D, A, B)
        assert bkm_metric_integral(D, A, B) == pytest.approx(exact, rel=1e-10)
        assert bkm_metric_quadrature(D, A, B) == pytest.approx(exact, rel=1e-6)


def test_block_doubling_hand_oracle(rng):
    # f(x) = x^2: J_{D1,D2} B = D1^2 B D2^-1, and the doubled form expands blockwise
    from qinfogeo.propcheck import SQUARE

    D1, D2, B = random_density(3, rng), random_density(3, rng), random_hermitian(3, rng)
    D, A = block_embed(D1, D2, B)
    lhs = JOperator.build(SQUARE, D).form(A, A).real
    hand = np.trace(B @ D2 @ D2 @ B @ np.linalg.inv(D1)) + np.trace(B @ D1 @ D1 @ B @ np.linalg.inv(D2))
    assert lhs == pytest.approx(hand.real, rel=1e-10)
    split = JOperator.build(SQUARE, D1, D2).form(B, B) + JOperator.build(transpose(SQUARE), D1, D2).form(B, B)
    assert lhs == pytest.approx(split.real, rel=1e-10)


def test_generalized_covariance_commuting_is_variance(rng):
    rho, _, U = random_commuting_pair(3, rng)
    w = np.diag(U.conj().T @ rho @ U).real
    a = rng.normal(size=3)
    A = (U * a) @ U.conj().T
    var = np.sum(w * a**2) - np.sum(w * a) ** 2
    for f in STANDARD:
        assert generalized_covariance(f, rho, A).real == pytest.approx(var, rel=1e-10)


def test_kumagai(rng):
    rho = 2 * random_density(3, rng)
    A, B = random_hermitian(3, rng), random_hermitian(3, rng)
    f = catalog_get("bkm")
    value = kumagai_metric(f, lambda t: 1 / t, 2.0, rho, A, B)
    expected = np.trace(A) * np.trace(B) / 2 + 2 * JOperator.build(f, rho).inverse_form(A, B)
    assert value == pytest.approx(expected)
    with pytest.raises(ValueError):
        kumagai_metric(f, lambda t: 1.0, 0.0, rho, A)
    with pytest.raises(ValueError):
        kumagai_metric(catalog_get("xlogx"), lambda t: 1.0, 1.0, rho, A)


def test_chi2_oracles(qubit_pair):
    rho, sigma = qubit_pair
    for alpha in (0.0, 0.3, 0.5, 1.0):
        assert chi2_alpha(alpha, rho, sigma) == pytest.approx(1 / 3, abs=1e-13)
    assert chi2_bures(rho, sigma) == pytest.approx(1 / 3, abs=1e-13)
    assert trace_norm(rho - sigma) == pytest.approx(0.5)


def test_chi2_paths_and_families(rng):
    rho, sigma = random_density(3, rng), random_density(3, rng)
    for alpha in (0.0, 0.2, 0.5, 0.9):
        assert chi2_alpha(alpha, rho, sigma) == pytest.approx(
            chi2_k(catalog_get("k_alpha_inv", alpha=alpha), rho, sigma), rel=1e-9
        )
    primary, cross = chi2_k_paths(catalog_get("bkm"), rho, sigma)
    assert primary == pytest.approx(cross, rel=1e-9)
    assert chi2_bures_integral(rho, sigma) == pytest.approx(chi2_bures(rho, sigma), rel=1e-10)
    assert chi2_alpha(0.5, rho, rho) == pytest.approx(0.0, abs=1e-12)


def test_chi2_requires_unit_trace(rng):
    rho = random_density(2, rng)
    with pytest.raises(ValueError, match="unit-trace"):
        chi2_alpha(0.5, 2 * rho, rho)
    with pytest.raises(ValueError):
        chi2_alpha(1.5, rho, rho)


def test_ruskai_map():
    x = np.geomspace(1e-3, 1e3, 301)
    bkm = ruskai_f_from_F(catalog_get("xlogx"))
    np.testing.assert_allclose(bkm(x), catalog_get("bkm")(x), rtol=1e-10)
    assert bkm.standard and bkm.operator_monotone
    chi = ruskai_f_from_F(catalog_get("chi2"))
    np.testing.assert_allclose(chi(x), x / (1 + x), rtol=1e-10)
    assert not chi.standard
    with pytest.raises(ValueError):
        ruskai_f_from_F(catalog_get("log"))


@pytest.mark.parametrize("name", ["xlogx", "chi2", "wyd_gp"])
def test_hessian_matches_metric(rng, name):
    F = catalog_get(name)
    f = ruskai_f_from_F(F)
    for n in (2, 3):
        D = random_density(n, rng)
        A, B = random_traceless_hermitian(n, rng), random_traceless_hermitian(n, rng)
        fd = metric_from_divergence_hessian(F, D, A, B)
        exact = monotone_metric(f, D, A, B)
        scale = np.sqrt(monotone_metric(f, D, A) * monotone_metric(f, D, B))
        assert abs(fd - exact) <= 1e-4 * scale


def test_hessian_edge_cases(rng):
    D = random_density(2, rng)
    A = random_traceless_hermitian(2, rng)
    assert metric_from_divergence_hessian(catalog_get("xlogx"), D, A, np.zeros((2, 2))) == 0.0
    with pytest.raises(ValueError, match="traceless"):
        metric_from_divergence_hessian(catalog_get("xlogx"), D, np.eye(2))
    D = np.diag([1e-4, 1 - 1e-4])
    assert hessian_step(D, A, A) == pytest.approx(1e-5 / np.linalg.norm(A, 2))
    with pytest.raises(ValueError):
        metric_from_divergence_hessian(catalog_get("xlogx"), D, A, levels=0)


def test_hessian_stencil_admissible_at_the_floor(rng):
    # smallest eigenvalue at the floor itself: the stencil stays positive definite.
    # Accuracy there is roundoff-limited (about eps / (r^2 lambda_min)), so only
    # a loose agreement is asserted.
    F = catalog_get("xlogx")
    D = np.diag([1e-8, 0.3, 0.7 - 1e-8])
    A, B = random_traceless_hermitian(3, rng), random_traceless_hermitian(3, rng)
    exact = monotone_metric(ruskai_f_from_F(F), D, A, B)
    assert metric_from_divergence_hessian(F, D, A, B) == pytest.approx(exact, rel=1e-1)
