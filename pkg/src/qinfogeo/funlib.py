"""Catalog of scalar functions on (0, inf) and the two-variable means they induce.

Each entry is a :class:`MonotoneFunction` carrying a vectorized evaluator and
flags telling which theorems apply to it. The mean induced by ``f`` is
m_f(x, y) = y f(x/y); for standard ``f`` it is symmetric in x and y.
"""

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

EQUAL_ARG_RTOL = 1e-9
LOGMEAN_SERIES_RTOL = 1e-4


class UnknownFunction(KeyError):
    pass


class ParameterError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MonotoneFunction:
    """A scalar function together with its operator-theoretic flags.

    ``func`` must accept and return float arrays. ``mean``, when given,
    replaces the generic y*f(x/y) evaluation (used where a closed form is
    better conditioned, e.g. the logarithmic mean).
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    params: dict = field(default_factory=dict)
    at_zero: float = math.nan
    operator_monotone: bool = False
    operator_convex: bool = False
    standard: bool = False
    mean: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __call__(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.func(np.asarray(x, dtype=float))

    @property
    def at_one(self) -> float:
        return float(self(np.array([1.0]))[0])

    @property
    def selector(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v!r}" for k, v in self.params.items())

    @property
    def flags(self) -> dict:
        return {
            "operator_monotone": self.operator_monotone,
            "operator_convex": self.operator_convex,
            "standard": self.standard,
        }

    def __repr__(self):
        return f"MonotoneFunction({self.selector})"


class MeanTable(NamedTuple):
    left_spectrum: np.ndarray
    right_spectrum: np.ndarray
    values: np.ndarray


def _xlogx(x):
    return x * np.log(x)


def _bkm(x):
    u = x - 1.0
    near = np.abs(u) < LOGMEAN_SERIES_RTOL
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = u / np.log(x)
    return np.where(near, 1.0 + u / 2 - u * u / 12, raw)


def logarithmic_mean(x, y):
    """(x - y)/(log x - log y), with a three-term series when x/y is within 1e-4 of one."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u = x / y - 1.0
    near = np.abs(u) < LOGMEAN_SERIES_RTOL
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = (x - y) / (np.log(x) - np.log(y))
    return np.where(near, y * (1.0 + u / 2 - u * u / 12), raw)


def _check_range(name, key, value, lo, hi, lo_open=False, hi_open=False):
    ok_lo = value > lo if lo_open else value >= lo
    ok_hi = value < hi if hi_open else value <= hi
    if not (ok_lo and ok_hi and math.isfinite(value)):
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise ParameterError(f"{name}: {key}={value!r} outside {lb}{lo}, {hi}{rb}")


def _xlogx_entry(name="xlogx", params=None):
    return MonotoneFunction(name, _xlogx, dict(params or {}), at_zero=0.0, operator_convex=True)


def _make_xlogx():
    return _xlogx_entry()


def _make_log():
    return MonotoneFunction("log", np.log, at_zero=-math.inf, operator_monotone=True)


def _make_beta_log(beta=0.5):
    _check_range("beta_log", "beta", beta, 0.0, 1.0, hi_open=True)
    if beta == 0:
        return _xlogx_entry("beta_log", {"beta": 0.0})
    return MonotoneFunction(
        "beta_log",
        lambda x: x * (x**beta - 1.0) / beta,
        {"beta": beta},
        at_zero=0.0,
        operator_convex=True,
    )


def _make_degree_alpha(alpha=0.5):
    _check_range("degree_alpha", "alpha", alpha, 0.0, 1.0, lo_open=True, hi_open=True)
    c = 1.0 / (alpha * (1.0 - alpha))
    return MonotoneFunction(
        "degree_alpha",
        lambda x: c * (1.0 - x**alpha),
        {"alpha": alpha},
        at_zero=c,
        operator_convex=True,
    )


def _make_wyd_gp(p=1.5):
    _check_range("wyd_gp", "p", p, 0.0, 2.0, lo_open=True)
    if p == 1:
        return _xlogx_entry("wyd_gp", {"p": 1.0})
    c = 1.0 / (p * (1.0 - p))
    return MonotoneFunction(
        "wyd_gp",
        lambda x: c * (x - x**p),
        {"p": p},
        at_zero=0.0,
        operator_convex=True,
    )


def _make_bures():
    return MonotoneFunction(
        "bures",
        lambda x: (1.0 + x) / 2,
        at_zero=0.5,
        operator_monotone=True,
        operator_convex=True,
        standard=True,
        mean=lambda x, y: (np.asarray(x) + np.asarray(y)) / 2,
    )


def _make_bkm():
    return MonotoneFunction(
        "bkm", _bkm, at_zero=0.0, operator_monotone=True, standard=True, mean=logarithmic_mean
    )


def _make_chi2():
    return MonotoneFunction("chi2", lambda x: (x - 1.0) ** 2, at_zero=1.0, operator_convex=True)


def k_alpha(x, alpha):
    """k_alpha(x) = (x^-alpha + x^(alpha-1))/2."""
    x = np.asarray(x, dtype=float)
    return 0.5 * (x ** (-alpha) + x ** (alpha - 1.0))


def _make_k_alpha_inv(alpha=0.5):
    _check_range("k_alpha_inv", "alpha", alpha, 0.0, 1.0)
    return MonotoneFunction(
        "k_alpha_inv",
        lambda x: 1.0 / k_alpha(x, alpha),
        {"alpha": alpha},
        at_zero=0.0,
        operator_monotone=True,
        standard=True,
    )


def _make_affine(s=1.0):
    _check_range("affine", "s", s, 0.0, math.inf, lo_open=True)
    return MonotoneFunction(
        "affine",
        lambda x: s * x + 1.0,
        {"s": s},
        at_zero=1.0,
        operator_monotone=True,
        operator_convex=True,
    )


def _make_power_t(t=0.5):
    _check_range("power_t", "t", t, 0.0, 1.0)
    return MonotoneFunction(
        "power_t",
        lambda x: x**t,
        {"t": t},
        at_zero=1.0 if t == 0 else 0.0,
        operator_monotone=True,
        operator_convex=t in (0.0, 1.0),
        standard=t == 0.5,
    )


# name -> (factory, {param: (lo, hi, description)})
CATALOG = {
    "xlogx": (_make_xlogx, {}),
    "log": (_make_log, {}),
    "beta_log": (_make_beta_log, {"beta": "[0, 1)"}),
    "degree_alpha": (_make_degree_alpha, {"alpha": "(0, 1)"}),
    "wyd_gp": (_make_wyd_gp, {"p": "(0, 2]"}),
    "bures": (_make_bures, {}),
    "bkm": (_make_bkm, {}),
    "chi2": (_make_chi2, {}),
    "k_alpha_inv": (_make_k_alpha_inv, {"alpha": "[0, 1]"}),
    "affine": (_make_affine, {"s": "(0, inf)"}),
    "power_t": (_make_power_t, {"t": "[0, 1]"}),
}


def catalog_get(name: str, **params) -> MonotoneFunction:
    """Look up a catalog entry, e.g. ``catalog_get("k_alpha_inv", alpha=0.3)``."""
    try:
        factory, allowed = CATALOG[name]
    except KeyError:
        raise UnknownFunction(f"unknown function {name!r}; known: {', '.join(CATALOG)}") from None
    extra = set(params) - set(allowed)
    if extra:
        raise ParameterError(f"{name}: unexpected parameter(s) {sorted(extra)}")
    return factory(**{k: float(v) for k, v in params.items()})


def parse_selector(selector: str) -> MonotoneFunction:
    """Parse ``name[:key=value,...]``, e.g. ``"wyd_gp:p=1.5"``."""
    name, _, rest = selector.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key.strip():
                raise ParameterError(f"malformed selector {selector!r}")
            try:
                params[key.strip()] = float(value)
            except ValueError:
                raise ParameterError(f"malformed value in selector {selector!r}") from None
    return catalog_get(name, **params)


def default_catalog() -> list[MonotoneFunction]:
    """Every catalog entry with its default parameters, in catalog order."""
    return [catalog_get(name) for name in CATALOG]


def catalog_listing() -> str:
    rows = []
    for f in default_catalog():
        _, allowed = CATALOG[f.name]
        ranges = ", ".join(f"{k} in {v}" for k, v in allowed.items()) or "-"
        rows.append(
            f"{f.name:<13} monotone={int(f.operator_monotone)} convex={int(f.operator_convex)} "
            f"standard={int(f.standard)}  params: {ranges}"
        )
    return "\n".join(rows)


def catalog_hash() -> str:
    return hashlib.sha256(catalog_listing().encode()).hexdigest()[:16]


def eval_mean(f: MonotoneFunction, x, y):
    """m_f(x, y) = y f(x/y), with the limit x f(1) when |x - y| <= 1e-9 max(x, y).

    Works elementwise on broadcastable arrays; scalars in give a float out.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if np.any(xa <= 0) or np.any(ya <= 0):
        raise ValueError("mean arguments must be positive")
    xa, ya = np.broadcast_arrays(xa, ya)
    if f.mean is not None:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.asarray(f.mean(xa, ya), dtype=float)
    else:
        out = ya * f(xa / ya)
    near = np.abs(xa - ya) <= EQUAL_ARG_RTOL * np.maximum(xa, ya)
    if np.any(near):
        out = np.where(near, xa * f.at_one, out)
    if out.ndim == 0:
        return float(out)
    return out


def mean_table(f: MonotoneFunction, lam, mu) -> MeanTable:
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    values = eval_mean(f, lam[:, None], mu[None, :])
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{f.selector}: non-finite mean value")
    return MeanTable(lam, mu, values)


def log_grid(size: int, lo: float = 1e-4, hi: float = 1e4) -> np.ndarray:
    return np.geomspace(lo, hi, size)


def check_standard(f: MonotoneFunction, grid_size: int = 101) -> bool:
    """True iff f(1) = 1 and x f(1/x) = f(x) within 1e-10 on a log-spaced grid."""
    if grid_size < 10:
        raise ValueError("grid_size must be at least 10")
    if abs(f.at_one - 1.0) > 1e-10:
        return False
    return check_symmetric(f, grid_size)


def check_symmetric(f: MonotoneFunction, grid_size: int = 101) -> bool:
    """x f(1/x) = f(x) within 1e-10 (relative to max(1, |f(x)|)) on a log grid."""
    x = log_grid(grid_size)
    fx = f(x)
    err = np.abs(x * f(1.0 / x) - fx)
    return bool(np.all(err <= 1e-10 * np.maximum(1.0, np.abs(fx))))


def reciprocal(f: MonotoneFunction) -> MonotoneFunction:
    """The pointwise reciprocal 1/f."""
    return MonotoneFunction(
        f"1/({f.selector})",
        lambda x: 1.0 / f(x),
        at_zero=math.inf if f.at_zero == 0 else 1.0 / f.at_zero,
    )


def transpose(f: MonotoneFunction) -> MonotoneFunction:
    """The function g(x) = x f(1/x), whose mean is m_g(x, y) = m_f(y, x)."""
    return MonotoneFunction(f"transpose({f.selector})", lambda x: x * f(1.0 / x))
