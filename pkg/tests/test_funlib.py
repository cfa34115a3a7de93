import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qinfogeo.funlib import (
    CATALOG,
    ParameterError,
    UnknownFunction,
    catalog_get,
    catalog_hash,
    catalog_listing,
    check_standard,
    check_symmetric,
    default_catalog,
    eval_mean,
    k_alpha,
    logarithmic_mean,
    mean_table,
    parse_selector,
    reciprocal,
    transpose,
)

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)


def test_catalog_order_and_names():
    names = [f.name for f in default_catalog()]
    assert names == list(CATALOG)
    for name in ("bures", "bkm", "k_alpha_inv", "xlogx", "wyd_gp"):
        assert name in names


@pytest.mark.parametrize("f", default_catalog(), ids=lambda f: f.name)
def test_standard_flag_matches_check(f):
    assert f.standard == check_standard(f)


@pytest.mark.parametrize("f", default_catalog(), ids=lambda f: f.name)
def test_at_zero_is_the_limit(f):
    near, nearer = f(np.array([1e-8, 1e-14]))
    if math.isinf(f.at_zero):
        assert nearer < near < -18
    else:
        # bkm only gets there like 1/|log x|
        assert abs(nearer - f.at_zero) <= abs(near - f.at_zero) + 1e-15
        assert abs(nearer - f.at_zero) < 0.05


def test_divergence_functions_vanish_at_one():
    for name in ("xlogx", "beta_log", "degree_alpha", "wyd_gp", "chi2", "log"):
        assert catalog_get(name).at_one == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize(
    "selector",
    ["k_alpha_inv:alpha=1.5", "beta_log:beta=1", "degree_alpha:alpha=0", "wyd_gp:p=2.5", "affine:s=0", "power_t:t=-0.1"],
)
def test_parameter_ranges(selector):
    with pytest.raises(ParameterError):
        parse_selector(selector)


def test_selector_errors():
    with pytest.raises(UnknownFunction):
        parse_selector("nope")
    with pytest.raises(ParameterError):
        parse_selector("wyd_gp:p")
    with pytest.raises(ParameterError):
        parse_selector("wyd_gp:p=abc")
    with pytest.raises(ParameterError):
        catalog_get("bures", s=1)


def test_selector_roundtrip():
    for f in default_catalog():
        assert parse_selector(f.selector).selector == f.selector
    assert parse_selector("wyd_gp:p=0.75").params == {"p": 0.75}


def test_parameter_aliases():
    x = np.geomspace(0.01, 100, 9)
    np.testing.assert_allclose(catalog_get("beta_log", beta=0)(x), catalog_get("xlogx")(x))
    np.testing.assert_allclose(catalog_get("wyd_gp", p=1)(x), catalog_get("xlogx")(x))


def test_mean_oracles():
    bures = catalog_get("bures")
    table = mean_table(bures, [1.0, 3.0], [2.0, 4.0])
    np.testing.assert_allclose(table.values, [[1.5, 2.5], [2.5, 3.5]])
    assert eval_mean(catalog_get("bkm"), math.e, 1.0) == pytest.approx(math.e - 1, rel=1e-15)
    assert eval_mean(catalog_get("power_t", t=0.5), 4.0, 9.0) == pytest.approx(6.0)
    # harmonic mean from k_0
    assert eval_mean(catalog_get("k_alpha_inv", alpha=0.0), 1.0, 3.0) == pytest.approx(1.5)


def test_mean_equal_arguments_limit():
    for f in default_catalog():
        if f.standard:
            assert eval_mean(f, 2.0, 2.0) == pytest.approx(2.0, rel=1e-12)
            assert eval_mean(f, 2.0, 2.0 * (1 + 1e-12)) == pytest.approx(2.0, rel=1e-9)


def test_mean_rejects_non_positive():
    with pytest.raises(ValueError):
        eval_mean(catalog_get("bures"), 0.0, 1.0)


def test_log_mean_series_is_continuous():
    y = 1.0
    xs = 1.0 + np.array([1e-6, 9.9e-5, 1.01e-4, 1e-3])
    exact = (xs - y) / np.log(xs / y)
    np.testing.assert_allclose(logarithmic_mean(xs, y), exact, rtol=1e-12)


@settings(max_examples=200, deadline=None)
@given(positive, positive)
def test_standard_means_are_symmetric_and_between_min_max(x, y):
    for f in default_catalog():
        if not f.standard:
            continue
        m = eval_mean(f, x, y)
        assert m == pytest.approx(eval_mean(f, y, x), rel=1e-10)
        assert min(x, y) * (1 - 1e-12) <= m <= max(x, y) * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(positive, positive)
def test_transpose_swaps_mean_arguments(x, y):
    f = catalog_get("power_t", t=0.3)
    assert eval_mean(transpose(f), x, y) == pytest.approx(eval_mean(f, y, x), rel=1e-12)


def test_symmetry_checks():
    assert check_symmetric(catalog_get("bures"))
    assert not check_symmetric(catalog_get("power_t", t=0.3))
    with pytest.raises(ValueError):
        check_standard(catalog_get("bures"), grid_size=5)


def test_reciprocal_and_k_alpha():
    f = catalog_get("k_alpha_inv", alpha=0.3)
    g = reciprocal(f)
    x = np.geomspace(0.1, 10, 7)
    np.testing.assert_allclose(g(x), k_alpha(x, 0.3))
    assert k_alpha(1.0, 0.3) == pytest.approx(1.0)


def test_listing_and_hash_are_stable():
    listing = catalog_listing()
    assert listing == catalog_listing()
    assert len(listing.splitlines()) == len(CATALOG)
    for f in default_catalog():
        line = next(l for l in listing.splitlines() if l.split()[0] == f.name)
        assert f"standard={int(check_standard(f))}" in line
    assert len(catalog_hash()) == 16
