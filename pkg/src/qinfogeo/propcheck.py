"""Randomized numerical certification of the library's theorems.

A property draws random inputs for one trial and evaluates them into named
slacks. Inequality slacks are "right side minus left side" and must stay
above ``-tol``; identity slacks are already the margin left under the
identity's own tolerance and must stay non-negative. Every trial gets its
own RNG stream derived from (seed, property, function, dim, trial), so a
cell's result never depends on execution order.
"""

import math
import time
import zlib
from dataclasses import asdict, dataclass, field

import numpy as np

from .funlib import MonotoneFunction, catalog_get, default_catalog, log_grid, parse_selector, transpose
from .io import decode_inputs, encode_inputs
from .matcore import random_hermitian, random_matrix, trace_norm
from .metrics import (
    JOperator,
    chi2_alpha,
    chi2_bures,
    generalized_covariance,
    hessian_step,
    metric_from_divergence_hessian,
    monotone_metric,
    psd_min_eigenvalue,
    ruskai_f_from_F,
    superop_matrix,
)
from .quasient import classical_f_divergence, quasi_entropy, umegaki
from .states import (
    DEFAULT_FLOOR,
    FloorViolation,
    KrausChannel,
    check_floor,
    random_commuting_pair,
    random_cptp,
    random_density,
    random_probability,
    random_traceless_hermitian,
    renormalize,
    block_embed,
)

SUITE_TOL = 1e-8
DEFAULT_TRIALS = 200
ALPHA_GRID = np.linspace(0.0, 1.0, 21)
ALPHA_STEP = 0.05
IDENTITY_RTOL = 1e-9
FLATNESS_TOL = 1e-10
MAX_DRAWS = 50
NOMINAL_STEP = 1e-4
REPORT_VERSION = 1

NO_FUNCTION = "-"

SQUARE = MonotoneFunction("square", lambda x: x * x, at_zero=0.0)
EXTRA_FUNCTIONS = {"square": SQUARE}


def resolve_function(selector: str) -> MonotoneFunction | None:
    if selector == NO_FUNCTION:
        return None
    if selector in EXTRA_FUNCTIONS:
        return EXTRA_FUNCTIONS[selector]
    return parse_selector(selector)


def selector_of(f: MonotoneFunction | None) -> str:
    return NO_FUNCTION if f is None else f.selector


def _is_affine(f) -> bool:
    x = log_grid(41)
    y = f(x)
    slopes = np.diff(y) / np.diff(x)
    return bool(np.all(np.abs(slopes - slopes[0]) <= 1e-9 * max(1.0, abs(slopes[0]))))


def _positive_on_grid(f) -> bool:
    values = f(log_grid(101))
    return bool(np.all(np.isfinite(values)) and np.all(values > 0))


@dataclass
class PropertyReport:
    property_id: str
    function: str
    trials: int
    violations: int
    worst_margin: float
    seed: int
    config: dict
    elapsed: float | None = None
    flipped: bool = False
    extra: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("counterexamples")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PropertyReport":
        return cls(**d)


@dataclass
class Counterexample:
    property_id: str
    function: str
    seed: int
    trial: int
    dim: int
    inputs: dict
    slack: float

    @property
    def filename(self) -> str:
        tag = self.property_id if self.function == NO_FUNCTION else f"{self.property_id}@{self.function}"
        tag = tag.replace("/", "_").replace(":", "_").replace(",", "_")
        return f"{tag}-{self.seed}-{self.trial}.json"

    def to_dict(self) -> dict:
        return asdict(self)


class Property:
    """Base class: subclasses define ``draw`` and ``evaluate``."""

    id = ""
    uses_function = True
    tallies: tuple = ()

    def applies(self, f) -> bool:
        return True

    def default_functions(self) -> list:
        if not self.uses_function:
            return [None]
        return [f for f in default_catalog() if self.applies(f)]

    def inequalities(self, f) -> tuple:
        return ()

    def identities(self, f) -> tuple:
        return ()

    def tolerance(self, tol: float, dim: int) -> float:
        return tol if dim <= 6 else tol * dim

    def draw(self, rng, f, dim) -> dict:
        raise NotImplementedError

    def evaluate(self, f, inputs) -> dict:
        raise NotImplementedError


def _random_channel_with_outputs(rng, n, states, floor=1e-8):
    """Draw a channel n -> m whose images of ``states`` all clear the floor.

    The dilation space is strictly larger than the input (m * env > n):
    otherwise the adjoint is a *-homomorphism, the Schwarz gap vanishes
    and the monotonicity bounds hold with equality.
    """
    for _ in range(MAX_DRAWS):
        m = int(rng.integers(2, n + 1))
        e_min = n // m + 1
        env = int(rng.integers(e_min, e_min + 2))
        beta = random_cptp(n, m, env, rng)
        try:
            for R in states:
                check_floor(renormalize(beta(R)), floor)
        except FloorViolation:
            continue
        return beta
    raise ArithmeticError("could not draw a channel with positive definite outputs")


class MonotonicityQuasi(Property):
    """S^A_f(beta(rho1) || beta(rho2)) >= S^{beta*(A)}_f(rho1 || rho2) for operator monotone f, f(0) >= 0.

    The unital Schwarz map is the adjoint beta* of a random channel; the
    states live on the channel's input space and A on its output space.
    """

    id = "monotonicity_quasi"

    def applies(self, f):
        return f.operator_monotone and f.at_zero >= 0

    def inequalities(self, f):
        return ("monotonicity",)

    def draw(self, rng, f, n):
        rho1, rho2 = random_density(n, rng), random_density(n, rng)
        beta = _random_channel_with_outputs(rng, n, (rho1, rho2))
        return {"kraus": list(beta.kraus), "rho1": rho1, "rho2": rho2, "A": random_matrix(beta.out_dim, rng=rng)}

    def evaluate(self, f, inp):
        beta = KrausChannel(tuple(inp["kraus"]))
        out1, out2 = renormalize(beta(inp["rho1"])), renormalize(beta(inp["rho2"]))
        lhs = quasi_entropy(f, inp["A"], out1, out2)
        rhs = quasi_entropy(f, beta.adjoint()(inp["A"]), inp["rho1"], inp["rho2"])
        return {"monotonicity": lhs - rhs}


def _channel_superops(beta):
    n, m = beta.in_dim, beta.out_dim
    return superop_matrix(beta, n, m), superop_matrix(beta.adjoint(), m, n)


class MonotonicityMetric(Property):
    """beta* (J_{beta(D1),beta(D2)})^-1 beta <= (J_{D1,D2})^-1, as a scalar bound and a PSD ordering."""

    id = "monotonicity_metric"

    def applies(self, f):
        return f.operator_monotone and f.at_zero >= 0

    def inequalities(self, f):
        return ("scalar", "psd")

    def draw(self, rng, f, n):
        D1, D2 = random_density(n, rng), random_density(n, rng)
        beta = _random_channel_with_outputs(rng, n, (D1, D2))
        return {"kraus": list(beta.kraus), "D1": D1, "D2": D2, "A": random_matrix(n, rng=rng)}

    def evaluate(self, f, inp):
        beta = KrausChannel(tuple(inp["kraus"]))
        n, m = beta.in_dim, beta.out_dim
        J = JOperator.build(f, inp["D1"], inp["D2"])
        Jb = JOperator.build(f, renormalize(beta(inp["D1"])), renormalize(beta(inp["D2"])))
        A = inp["A"]
        bA = beta(A)
        scalar = J.inverse_form(A, A).real - Jb.inverse_form(bA, bA).real
        Bm, Badj = _channel_superops(beta)
        M = superop_matrix(J.inverse_apply, n) - Badj @ superop_matrix(Jb.inverse_apply, m) @ Bm
        return {"scalar": scalar, "psd": psd_min_eigenvalue(M), "psd_reversed": psd_min_eigenvalue(-M)}


class LemmaEquivalence(Property):
    """The two orderings beta* Jb^-1 beta <= J^-1 and beta J beta* <= Jb hold or fail together.

    Only co-occurrence is asserted; for functions that are not operator
    monotone either ordering may fail.
    """

    id = "lemma_equivalence"
    tallies = ("jef1", "jef2")

    def applies(self, f):
        return _positive_on_grid(f)

    def default_functions(self):
        return [f for f in default_catalog() if self.applies(f)] + [SQUARE]

    def identities(self, f):
        return ("co_occurrence",)

    draw = MonotonicityMetric.draw

    def evaluate(self, f, inp):
        beta = KrausChannel(tuple(inp["kraus"]))
        n, m = beta.in_dim, beta.out_dim
        J = JOperator.build(f, inp["D1"], inp["D2"])
        Jb = JOperator.build(f, renormalize(beta(inp["D1"])), renormalize(beta(inp["D2"])))
        Bm, Badj = _channel_superops(beta)
        jef1 = psd_min_eigenvalue(superop_matrix(J.inverse_apply, n) - Badj @ superop_matrix(Jb.inverse_apply, m) @ Bm)
        jef2 = psd_min_eigenvalue(superop_matrix(Jb.apply, m) - Bm @ superop_matrix(J.apply, n) @ Badj)
        tol = inp.get("tol", SUITE_TOL)
        agree = (jef1 >= -tol) == (jef2 >= -tol)
        return {"jef1": jef1, "jef2": jef2, "co_occurrence": 0.0 if agree else -1.0}


class JointConvexity(Property):
    """Joint convexity of S^A_f (operator convex f) and of <A, (J_{D1,D2})^-1 A> (operator monotone f)."""

    id = "joint_convexity"

    def applies(self, f):
        return f.operator_convex or (f.operator_monotone and f.at_zero >= 0)

    def _parts(self, f):
        names = []
        if f.operator_convex:
            names.append("quasi")
        if f.operator_monotone and f.at_zero >= 0:
            names.append("metric")
        return names

    def inequalities(self, f):
        linear = _is_affine(f)
        return tuple(n for n in self._parts(f) if not (n == "quasi" and linear))

    def identities(self, f):
        # affine f makes S^A_f jointly linear, so the bound is an equality
        return ("quasi_linear",) if "quasi" in self._parts(f) and _is_affine(f) else ()

    def draw(self, rng, f, n):
        return {
            "rho1": random_density(n, rng),
            "rho2": random_density(n, rng),
            "sigma1": random_density(n, rng),
            "sigma2": random_density(n, rng),
            "lam": float(rng.uniform(0, 1)),
            "A": random_matrix(n, rng=rng),
        }

    def evaluate(self, f, inp):
        lam, A = inp["lam"], inp["A"]
        r1, r2, s1, s2 = inp["rho1"], inp["rho2"], inp["sigma1"], inp["sigma2"]
        m1, m2 = lam * r1 + (1 - lam) * s1, lam * r2 + (1 - lam) * s2
        out, mixed = {}, {}
        for name in self._parts(f):
            if name == "quasi":
                value = lambda X, Y: quasi_entropy(f, A, X, Y)
            else:
                value = lambda X, Y: JOperator.build(f, X, Y).inverse_form(A, A).real
            mixed[name] = value(m1, m2)
            out[name] = lam * value(r1, r2) + (1 - lam) * value(s1, s2) - mixed[name]
        if "quasi" in out:
            out["quasi_linear"] = IDENTITY_RTOL * max(1.0, abs(mixed["quasi"])) - abs(out["quasi"])
        return out


class _MixtureProperty(Property):
    def applies(self, f):
        return f.standard

    def draw(self, rng, f, n):
        return {
            "D": random_density(n, rng),
            "E": random_density(n, rng),
            "lam": float(rng.uniform(0, 1)),
            "A": random_hermitian(n, rng),
        }


class MetricConvexity(_MixtureProperty):
    """gamma^f_D(A, A) is convex in D for standard f and Hermitian A."""

    id = "metric_convexity"

    def inequalities(self, f):
        return ("convexity",)

    def evaluate(self, f, inp):
        lam, A, D, E = inp["lam"], inp["A"], inp["D"], inp["E"]
        g = lambda X: monotone_metric(f, X, A)
        return {"convexity": lam * g(D) + (1 - lam) * g(E) - g(lam * D + (1 - lam) * E)}


class CovarianceConcavity(_MixtureProperty):
    """qCov^f_rho(A, A) is concave in rho for standard f and Hermitian A."""

    id = "covariance_concavity"

    def inequalities(self, f):
        return ("concavity",)

    def evaluate(self, f, inp):
        lam, A, D, E = inp["lam"], inp["A"], inp["D"], inp["E"]
        c = lambda X: generalized_covariance(f, X, A).real
        return {"concavity": c(lam * D + (1 - lam) * E) - lam * c(D) - (1 - lam) * c(E)}


class Pinsker(Property):
    """||rho1 - rho2||_1^2 <= 2 S(rho1 || rho2), and the classical version on probability vectors."""

    id = "pinsker"
    uses_function = False

    def inequalities(self, f):
        return ("quantum", "classical")

    def draw(self, rng, f, n):
        return {
            "rho1": random_density(n, rng),
            "rho2": random_density(n, rng),
            "p": random_probability(n, rng),
            "q": random_probability(n, rng),
        }

    def evaluate(self, f, inp):
        r1, r2, p, q = inp["rho1"], inp["rho2"], inp["p"], inp["q"]
        kl = classical_f_divergence(catalog_get("xlogx"), p, q)
        return {
            "quantum": 2 * umegaki(r1, r2) - trace_norm(r1 - r2) ** 2,
            "classical": 2 * kl - float(np.sum(np.abs(p - q))) ** 2,
        }


class Chi2Family(Property):
    """Structure of chi^2_alpha on a 21-point alpha grid.

    Minimum within one grid step of 1/2, midpoint convexity in alpha, the
    trace-norm bound, Bures as the smallest member, and alpha-independence
    for commuting pairs.
    """

    id = "chi2_family"
    uses_function = False

    def inequalities(self, f):
        return ("min_location", "convexity", "trace_norm_alpha0", "trace_norm_bures", "bures_smallest")

    def identities(self, f):
        return ("commuting_flatness",)

    def draw(self, rng, f, n):
        rho_c, sigma_c, _ = random_commuting_pair(n, rng)
        return {"rho": random_density(n, rng), "sigma": random_density(n, rng), "rho_c": rho_c, "sigma_c": sigma_c}

    def evaluate(self, f, inp):
        rho, sigma = inp["rho"], inp["sigma"]
        values = np.array([chi2_alpha(a, rho, sigma) for a in ALPHA_GRID])
        near = np.abs(ALPHA_GRID - 0.5) <= ALPHA_STEP + 1e-12
        bures = chi2_bures(rho, sigma)
        tn2 = trace_norm(rho - sigma) ** 2
        flat = np.array([chi2_alpha(a, inp["rho_c"], inp["sigma_c"]) for a in ALPHA_GRID])
        spread = float(np.max(np.abs(flat - flat[10])))
        return {
            "min_location": float(values[~near].min() - values[near].min()),
            "convexity": float(np.min(values[:-2] + values[2:] - 2 * values[1:-1])),
            "trace_norm_alpha0": float(values[0] - tn2),
            "trace_norm_bures": float(bures - tn2),
            "bures_smallest": float(values.min() - bures),
            "commuting_flatness": FLATNESS_TOL * max(1.0, abs(flat[10])) - spread,
        }


class BlockDoubling(Property):
    """<A, J_D A> = 2 <B, J_{D1,D2} B> and the same for inverses, D = diag(D2, D1), A = [[0, B], [B, 0]].

    Also checks the general form <A, J^f_D A> = <B, J^f B> + <B, J^g B>
    with g(x) = x f(1/x).
    """

    id = "block_doubling"

    def applies(self, f):
        return f.standard

    def identities(self, f):
        return ("forward", "inverse", "general")

    def draw(self, rng, f, n):
        return {"D1": random_density(n, rng), "D2": random_density(n, rng), "B": random_hermitian(n, rng)}

    def evaluate(self, f, inp):
        D1, D2, B = inp["D1"], inp["D2"], inp["B"]
        D, A = block_embed(D1, D2, B)
        JD = JOperator.build(f, D)
        J12 = JOperator.build(f, D1, D2)
        Jg = JOperator.build(transpose(f), D1, D2)

        def margin(a, b):
            return IDENTITY_RTOL * max(1.0, abs(a)) - abs(a - b)

        big = JD.form(A, A)
        return {
            "forward": margin(big, 2 * J12.form(B, B)),
            "inverse": margin(JD.inverse_form(A, A), 2 * J12.inverse_form(B, B)),
            "general": margin(big, J12.form(B, B) + Jg.form(B, B)),
        }


class HessianRelation(Property):
    """Minus the mixed second derivative of S_F(D + tA || D + sB) equals gamma^f_D(A, B), f from F.

    The tolerance is max(1e-4, 10 h^2) relative to sqrt(gamma(A, A) gamma(B, B)).
    """

    id = "hessian_relation"
    _derived: dict = {}

    def applies(self, f):
        return f.operator_convex and not f.operator_monotone and abs(f.at_one) <= 1e-12

    def identities(self, f):
        return ("hessian",)

    def draw(self, rng, f, n):
        # the difference quotient needs room around D: redraw until a stencil
        # at the nominal step 1e-4 clears the floor
        for _ in range(MAX_DRAWS):
            D = random_density(n, rng)
            A, B = random_traceless_hermitian(n, rng), random_traceless_hermitian(n, rng)
            size = max(np.linalg.norm(A, 2), np.linalg.norm(B, 2))
            if np.linalg.eigvalsh(D)[0] - NOMINAL_STEP * size >= DEFAULT_FLOOR:
                return {"D": D, "A": A, "B": B}
        raise ArithmeticError("could not draw a state with room for the difference stencil")

    def metric_function(self, F):
        if F.selector not in self._derived:
            self._derived[F.selector] = ruskai_f_from_F(F)
        return self._derived[F.selector]

    def evaluate(self, F, inp):
        D, A, B = inp["D"], inp["A"], inp["B"]
        f = self.metric_function(F)
        h = hessian_step(D, A, B)
        fd = metric_from_divergence_hessian(F, D, A, B, h=h)
        exact = monotone_metric(f, D, A, B)
        scale = math.sqrt(monotone_metric(f, D, A) * monotone_metric(f, D, B))
        return {"hessian": max(1e-4, 10 * h * h) - abs(fd - exact) / scale}


PROPERTIES = {
    p.id: p
    for p in (
        MonotonicityQuasi(),
        MonotonicityMetric(),
        LemmaEquivalence(),
        JointConvexity(),
        MetricConvexity(),
        CovarianceConcavity(),
        Pinsker(),
        Chi2Family(),
        BlockDoubling(),
        HessianRelation(),
    )
}


def trial_rng(seed: int, property_id: str, selector: str, dim: int, trial: int):
    key = [int(seed), zlib.crc32(property_id.encode()), zlib.crc32(selector.encode()), int(dim), int(trial)]
    return np.random.default_rng(key)


def judge(prop: Property, f, slacks: dict, tol: float, flip: bool | str = False) -> tuple[float, bool]:
    """Reduce one trial's slacks to (margin, violated).

    ``flip=True`` reverses every inequality of the property; a string
    reverses only the named one.
    """
    names = prop.inequalities(f)
    if isinstance(flip, str):
        if flip not in names:
            raise ValueError(f"{prop.id} has no inequality {flip!r}")
        names = (flip,)
    ineq = [slacks[k] for k in names]
    if flip:
        # an ordering's negation is the reverse ordering, when one is supplied
        flipped = [slacks.get(k + "_reversed", -slacks[k]) for k in names]
        return min(flipped), any(v < -tol for v in flipped)
    exact = [slacks[k] for k in prop.identities(f)]
    margin = min(ineq + exact)
    violated = any(v < -tol for v in ineq) or any(v < 0 for v in exact)
    return margin, violated


def run_property(
    prop: Property | str,
    f: MonotoneFunction | None,
    trials: int = DEFAULT_TRIALS,
    dims=(2, 3, 4),
    seed: int = 0,
    tol: float = SUITE_TOL,
    flip: bool | str = False,
    timing: bool = False,
) -> PropertyReport:
    """Run ``trials`` trials per dimension and aggregate them into one report."""
    if isinstance(prop, str):
        prop = PROPERTIES[prop]
    if flip and not prop.inequalities(f):
        raise ValueError(f"{prop.id} has no inequality to flip")
    selector = selector_of(f)
    start = time.perf_counter()
    violations = 0
    worst = math.inf
    tallies = {name: 0 for name in prop.tallies}
    counterexamples = []
    index = 0
    for dim in dims:
        cell_tol = prop.tolerance(tol, dim)
        for t in range(trials):
            rng = trial_rng(seed, prop.id, selector, dim, t)
            inputs = prop.draw(rng, f, dim)
            if prop.tallies:
                inputs["tol"] = cell_tol
            slacks = prop.evaluate(f, inputs)
            margin, violated = judge(prop, f, slacks, cell_tol, flip)
            worst = min(worst, margin)
            for name in prop.tallies:
                tallies[name] += slacks[name] >= -cell_tol
            if violated:
                violations += 1
                counterexamples.append(
                    Counterexample(prop.id, selector, seed, index, dim, encode_inputs(inputs), float(margin))
                )
            index += 1
    config = {"dims": list(dims), "trials_per_dim": trials, "tolerance": tol}
    if isinstance(flip, str):
        config["flipped_inequality"] = flip
    return PropertyReport(
        property_id=prop.id,
        function=selector,
        trials=index,
        violations=violations,
        worst_margin=float(worst),
        seed=seed,
        config=config,
        elapsed=round(time.perf_counter() - start, 3) if timing else None,
        flipped=bool(flip),
        extra={"holds": tallies} if prop.tallies else {},
        counterexamples=counterexamples,
    )


def replay(cx: Counterexample | dict, tol: float | None = None, flip: bool | str = False) -> float:
    """Re-evaluate a stored counterexample and return its margin."""
    if isinstance(cx, dict):
        cx = Counterexample(**cx)
    prop = PROPERTIES[cx.property_id]
    f = resolve_function(cx.function)
    inputs = decode_inputs(cx.inputs)
    slacks = prop.evaluate(f, inputs)
    cell_tol = inputs.get("tol", SUITE_TOL) if tol is None else tol
    margin, _ = judge(prop, f, slacks, cell_tol, flip)
    return margin


def check_monotonicity_quasi(f, trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("monotonicity_quasi", f, trials, dims, seed, **kw)


def check_monotonicity_metric(f, trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("monotonicity_metric", f, trials, dims, seed, **kw)


def check_lemma_equivalence(f, trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("lemma_equivalence", f, trials, dims, seed, **kw)


def check_joint_convexity(f, trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("joint_convexity", f, trials, dims, seed, **kw)


def check_metric_convexity(f, trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("metric_convexity", f, trials, dims, seed, **kw)


def check_covariance_concavity(f, trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("covariance_concavity", f, trials, dims, seed, **kw)


def check_pinsker(trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("pinsker", None, trials, dims, seed, **kw)


def check_chi2_family(trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("chi2_family", None, trials, dims, seed, **kw)


def check_block_doubling(f, trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("block_doubling", f, trials, dims, seed, **kw)


def check_hessian_relation(F, trials=DEFAULT_TRIALS, dims=(2, 3, 4), seed=0, **kw):
    return run_property("hessian_relation", F, trials, dims, seed, **kw)


@dataclass
class SuiteConfig:
    suite: str = "all"
    functions: str | list = "all"
    dims: tuple = (2, 3, 4)
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    tol: float = SUITE_TOL
    flip: bool = False
    timing: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dims"] = list(self.dims)
        return d


def suite_cells(config: SuiteConfig) -> list:
    """(property, function) pairs selected by a configuration, in a fixed order."""
    if config.suite == "all":
        props = list(PROPERTIES.values())
    elif config.suite in PROPERTIES:
        props = [PROPERTIES[config.suite]]
    else:
        raise KeyError(f"unknown property {config.suite!r}; known: {', '.join(PROPERTIES)}")
    cells = []
    for prop in props:
        if config.functions == "all":
            functions = prop.default_functions()
        elif not prop.uses_function:
            functions = [None]
        else:
            functions = [resolve_function(s) for s in config.functions]
            functions = [f for f in functions if prop.applies(f)]
        for f in functions:
            if config.flip and not prop.inequalities(f):
                continue
            cells.append((prop, f))
    return cells


def run_suite(config: SuiteConfig) -> list:
    return [
        run_property(prop, f, config.trials, config.dims, config.seed, config.tol, config.flip, config.timing)
        for prop, f in suite_cells(config)
    ]
