"""
Property checks of the Wirtinger and Opial type inequalities on random sine series.

Every trial function vanishes at both ends of [0, pi] by construction, so each
inequality applies without further conditions. Integrals use the adaptive
Gauss-Kronrod engine with a relative tolerance, which keeps large-degree
integrands accurate regardless of their magnitude.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import structlog

from wirtinger_constants import adaptive_quadrature, ap_constant, i_integral, yang_factor
from zeta_config import DEFAULT_MARGIN_FLOOR, DEFAULT_QUADRATURE_MAX_PANELS, DEFAULT_QUADRATURE_TOL
from zeta_errors import DomainError, UnsupportedParameterError

logger = structlog.get_logger(__name__)

MAX_TERMS = 64
INITIAL_PANELS = 8
INEQUALITIES = ("bp", "yang", "ap")


@dataclass(frozen=True)
class TrialFunction:
    """f(t) = sum_j c_j sin(j t) on [0, pi]"""

    coefficients: Tuple[float, ...]

    @property
    def n_terms(self) -> int:
        return len(self.coefficients)

    def _frequencies(self) -> np.ndarray:
        return np.arange(1, self.n_terms + 1, dtype=np.float64)

    def value(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return np.sin(np.outer(t, self._frequencies())) @ np.asarray(self.coefficients)

    def derivative(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        j = self._frequencies()
        return np.cos(np.outer(t, j)) @ (j * np.asarray(self.coefficients))

    def scaled(self, factor: float) -> "TrialFunction":
        return TrialFunction(tuple(factor * c for c in self.coefficients))


@dataclass(frozen=True)
class SuiteSummary:
    inequality: str
    k: int
    trials: int
    min_margin: float
    violations: int

    def to_dict(self) -> dict:
        return {
            "inequality": self.inequality,
            "k": self.k,
            "trials": self.trials,
            "min_margin": self.min_margin,
            "violations": self.violations,
        }


def random_trial(seed: int, n_terms: int = 8, amplitude: float = 1.0) -> TrialFunction:
    """Coefficients uniform in [-amplitude, amplitude], reproducible from seed"""
    if not 1 <= n_terms <= MAX_TERMS:
        raise UnsupportedParameterError(f"n_terms must lie in [1, {MAX_TERMS}], got {n_terms}")
    if amplitude <= 0:
        raise UnsupportedParameterError(f"amplitude must be positive, got {amplitude}")

    rng = np.random.default_rng(seed)
    unit = rng.uniform(-1.0, 1.0, n_terms)
    return TrialFunction(tuple(float(c) for c in amplitude * unit))


def _integrate(integrand: Callable[[np.ndarray], np.ndarray], a: float, b: float,
               rel_tol: float, top_frequency: int = 0) -> float:
    # about one starting panel per oscillation of the integrand
    panels = max(INITIAL_PANELS, top_frequency)
    return adaptive_quadrature(integrand, a, b, tol=0.0, rel_tol=rel_tol,
                               max_panels=DEFAULT_QUADRATURE_MAX_PANELS,
                               initial_panels=panels).value


def _check_k(k: int) -> None:
    if not 1 <= k <= 7:
        raise UnsupportedParameterError(f"k must lie in [1, 7], got {k}")


@lru_cache(maxsize=None)
def bp_constant(k: int) -> float:
    """1 / (pi^{2k} I(k))"""
    return 1.0 / (math.pi ** (2 * k) * i_integral(k).value)


@lru_cache(maxsize=None)
def _ap_real(k: int) -> float:
    return ap_constant(k).to_float()


def wirtinger_bp_sides(f: TrialFunction, k: int,
                       rel_tol: float = DEFAULT_QUADRATURE_TOL) -> Tuple[float, float]:
    """int (f')^{2k} and (1/(pi^{2k} I(k))) int f^{2k} over [0, pi]"""
    _check_k(k)
    lhs = _integrate(lambda t: f.derivative(t) ** (2 * k), 0.0, math.pi, rel_tol, 2 * k * f.n_terms)
    integral = _integrate(lambda t: f.value(t) ** (2 * k), 0.0, math.pi, rel_tol, 2 * k * f.n_terms)
    return lhs, bp_constant(k) * integral


def verify_wirtinger_bp(f: TrialFunction, k: int, rel_tol: float = DEFAULT_QUADRATURE_TOL) -> float:
    lhs, rhs = wirtinger_bp_sides(f, k, rel_tol)
    return lhs - rhs


def opial_yang_sides(f: TrialFunction, m: int, n: int,
                     rel_tol: float = DEFAULT_QUADRATURE_TOL) -> Tuple[float, float]:
    """int |f|^m |f'|^n and (n/(m+n)) (pi/2)^m int |f'|^{m+n} over [0, pi]"""
    factor = yang_factor(m, n, math.pi / 2.0)
    lhs = _integrate(lambda t: np.abs(f.value(t)) ** m * np.abs(f.derivative(t)) ** n, 0.0, math.pi, rel_tol,
                     (m + n) * f.n_terms)
    integral = _integrate(lambda t: np.abs(f.derivative(t)) ** (m + n), 0.0, math.pi, rel_tol, (m + n) * f.n_terms)
    return lhs, factor * integral


def verify_opial_yang(f: TrialFunction, m: int, n: int, rel_tol: float = DEFAULT_QUADRATURE_TOL) -> float:
    lhs, rhs = opial_yang_sides(f, m, n, rel_tol)
    return rhs - lhs


def wirtinger_ap_sides(f: TrialFunction, k: int,
                       rel_tol: float = DEFAULT_QUADRATURE_TOL) -> Tuple[float, float]:
    """int (f')^{2k} and 2 Gamma(2k+1) / (pi^{2k} Gamma((2k+1)/2)^2) int f^{2k} over [0, pi]"""
    _check_k(k)
    lhs = _integrate(lambda t: f.derivative(t) ** (2 * k), 0.0, math.pi, rel_tol, 2 * k * f.n_terms)
    integral = _integrate(lambda t: f.value(t) ** (2 * k), 0.0, math.pi, rel_tol, 2 * k * f.n_terms)
    return lhs, _ap_real(k) * integral


def verify_wirtinger_ap(f: TrialFunction, k: int, rel_tol: float = DEFAULT_QUADRATURE_TOL) -> float:
    lhs, rhs = wirtinger_ap_sides(f, k, rel_tol)
    return lhs - rhs


def transformed_interval_check(f: TrialFunction, a: float, b: float, k: int,
                               rel_tol: float = DEFAULT_QUADRATURE_TOL) -> float:
    """
    Margin of ((b-a)/pi)^{2k} int_a^b (g')^{2k} >= (1/(pi^{2k} I(k))) int_a^b g^{2k}
    for g(s) = f(pi (s - a) / (b - a)).

    The margin equals (b-a)/pi times the margin on [0, pi].
    """
    _check_k(k)
    if not b > a:
        raise DomainError(f"the interval needs b > a, got [{a}, {b}]")

    scale = math.pi / (b - a)
    lhs = _integrate(lambda s: (f.derivative((s - a) * scale) * scale) ** (2 * k), a, b, rel_tol, 2 * k * f.n_terms)
    integral = _integrate(lambda s: f.value((s - a) * scale) ** (2 * k), a, b, rel_tol, 2 * k * f.n_terms)
    return (1.0 / scale) ** (2 * k) * lhs - bp_constant(k) * integral


def opial_one_sided_sides(x: Callable[[np.ndarray], np.ndarray], dx: Callable[[np.ndarray], np.ndarray],
                          a: float, b: float, m: int, n: int,
                          rel_tol: float = DEFAULT_QUADRATURE_TOL) -> Tuple[float, float]:
    """int |x|^m |x'|^n and (n/(m+n)) (b-a)^m int |x'|^{m+n} over [a, b], for x(a) = 0"""
    if m < 1 or n < 1:
        raise DomainError(f"m and n must be positive, got m={m}, n={n}")
    if not b > a:
        raise DomainError(f"the interval needs b > a, got [{a}, {b}]")

    lhs = _integrate(lambda t: np.abs(x(t)) ** m * np.abs(dx(t)) ** n, a, b, rel_tol)
    integral = _integrate(lambda t: np.abs(dx(t)) ** (m + n), a, b, rel_tol)
    return lhs, n / (m + n) * (b - a) ** m * integral


def opial_one_sided_margin(x: Callable[[np.ndarray], np.ndarray], dx: Callable[[np.ndarray], np.ndarray],
                           a: float, b: float, m: int, n: int,
                           rel_tol: float = DEFAULT_QUADRATURE_TOL) -> float:
    lhs, rhs = opial_one_sided_sides(x, dx, a, b, m, n, rel_tol)
    return rhs - lhs


def is_violation(lhs: float, rhs: float, margin: float, margin_floor: float = DEFAULT_MARGIN_FLOOR) -> bool:
    """A negative margin beyond the quadrature noise floor, relative above magnitude 1"""
    return margin < -margin_floor * max(1.0, abs(lhs) + abs(rhs))


def yang_exponents(k: int) -> Tuple[int, int]:
    """(m, n) = (2, 2k) for the Opial-Yang checks indexed by k"""
    return 2, 2 * k


def _trial_sides(inequality: str, f: TrialFunction, k: int) -> Tuple[float, float, float]:
    if inequality == "bp":
        lhs, rhs = wirtinger_bp_sides(f, k)
        return lhs, rhs, lhs - rhs
    if inequality == "ap":
        lhs, rhs = wirtinger_ap_sides(f, k)
        return lhs, rhs, lhs - rhs
    if inequality == "yang":
        lhs, rhs = opial_yang_sides(f, *yang_exponents(k))
        return lhs, rhs, rhs - lhs
    raise ValueError(f"Unknown inequality: {inequality}. Available inequalities: {list(INEQUALITIES)}")


def _run_group(task: Tuple[str, int, int, int, int, float, float]) -> SuiteSummary:
    inequality, k, trials, seed, n_terms, amplitude, margin_floor = task
    min_margin = math.inf
    violations = 0
    for trial in range(trials):
        f = random_trial(seed + trial, n_terms, amplitude)
        lhs, rhs, margin = _trial_sides(inequality, f, k)
        min_margin = min(min_margin, margin)
        if is_violation(lhs, rhs, margin, margin_floor):
            violations += 1
            logger.warning("inequality_violation", inequality=inequality, k=k, seed=seed + trial, margin=margin)
    return SuiteSummary(inequality, k, trials, min_margin, violations)


def run_property_suite(trials: int, seed: int, inequalities: Sequence[str] = INEQUALITIES,
                       ks: Sequence[int] = (1, 2, 3), n_terms: int = 8, amplitude: float = 1.0,
                       margin_floor: float = DEFAULT_MARGIN_FLOOR, threads: int = 1) -> List[SuiteSummary]:
    """
    Seeded trials of each inequality for each k. Trial i uses seed + i, so a
    summary depends only on its arguments, not on the worker count.
    """
    if trials < 1:
        raise UnsupportedParameterError(f"trials must be at least 1, got {trials}")
    for inequality in inequalities:
        if inequality not in INEQUALITIES:
            raise ValueError(f"Unknown inequality: {inequality}. Available inequalities: {list(INEQUALITIES)}")

    tasks = [(inequality, k, trials, seed, n_terms, amplitude, margin_floor)
             for inequality in inequalities for k in ks]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            summaries = list(pool.map(_run_group, tasks))
    else:
        summaries = [_run_group(task) for task in tasks]

    for summary in summaries:
        logger.info("suite_group", **summary.to_dict())
    return summaries


def suite_by_inequality(summaries: Sequence[SuiteSummary]) -> Dict[str, dict]:
    """Collapse per-k summaries into one record per inequality"""
    collapsed: Dict[str, dict] = {}
    for summary in summaries:
        record = collapsed.setdefault(summary.inequality, {
            "inequality": summary.inequality, "trials": 0, "min_margin": math.inf, "violations": 0, "ks": []})
        record["trials"] += summary.trials
        record["min_margin"] = min(record["min_margin"], summary.min_margin)
        record["violations"] += summary.violations
        record["ks"].append(summary.k)
    return collapsed
