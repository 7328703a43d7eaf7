"""
Constants of the Wirtinger and Opial type inequalities behind the gap bounds,
and the adaptive Gauss-Kronrod engine used to evaluate them.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
import structlog

from rational_core import ExactRational, PiScaled, gamma_half_ratio
from zeta_config import DEFAULT_QUADRATURE_MAX_PANELS, DEFAULT_QUADRATURE_TOL
from zeta_errors import DomainError, QuadratureError

logger = structlog.get_logger(__name__)

# 15-point Kronrod nodes on [-1, 1] (non-negative half); the odd-indexed ones
# are the 7-point Gauss nodes
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-node rule laid out left to right
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_WEIGHTS = np.zeros(15)
_GAUSS_WEIGHTS[1:7:2] = _WG[:3]
_GAUSS_WEIGHTS[7] = _WG[3]
_GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]

# I(k) for k = 2..7 as printed, 4-5 significant digits
PUBLISHED_I_VALUES: Dict[int, ExactRational] = {
    2: ExactRational(2863, 125000),
    3: ExactRational(19581, 5000000),
    4: ExactRational(743, 1000000),
    5: ExactRational(14961, 100000000),
    6: ExactRational(15653, 500000000),
    7: ExactRational(16823, 2500000000),
}


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    panels_used: int

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_error_estimate": self.abs_error_estimate,
            "panels_used": self.panels_used,
        }


def gauss_kronrod_panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float):
    """K15 estimate and |K15 - G7| on one panel; f must accept arrays"""
    center = 0.5 * (a + b)
    half_width = 0.5 * (b - a)
    values = np.asarray(f(center + half_width * _NODES), dtype=np.float64)

    kronrod = half_width * float(np.dot(_KRONROD_WEIGHTS, values))
    gauss = half_width * float(np.dot(_GAUSS_WEIGHTS, values))
    return kronrod, abs(kronrod - gauss)


def adaptive_quadrature(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                        tol: float = DEFAULT_QUADRATURE_TOL, rel_tol: float = 0.0,
                        max_panels: int = DEFAULT_QUADRATURE_MAX_PANELS,
                        initial_panels: int = 1) -> QuadratureResult:
    """
    Adaptive G7/K15 quadrature of f over [a, b].

    The panel with the largest error estimate (the leftmost one on ties) is
    bisected until the summed estimate is within max(tol, rel_tol * |value|).
    Sums are taken with math.fsum, so the total does not depend on panel order.
    """
    if not b > a:
        if a == b:
            return QuadratureResult(0.0, 0.0, 0)
        raise DomainError(f"integration interval must satisfy b >= a, got [{a}, {b}]")
    if initial_panels < 1 or initial_panels > max_panels:
        raise DomainError(f"initial_panels must lie in [1, {max_panels}], got {initial_panels}")

    edges = np.linspace(a, b, initial_panels + 1)
    lefts, rights, values, errors = [], [], [], []
    for left, right in zip(edges[:-1], edges[1:]):
        value, error = gauss_kronrod_panel(f, float(left), float(right))
        lefts.append(float(left))
        rights.append(float(right))
        values.append(value)
        errors.append(error)

    while True:
        total = math.fsum(values)
        total_error = math.fsum(errors)

        if not math.isfinite(total):
            raise QuadratureError("integrand produced a non-finite value", total, total_error, len(values))
        if total_error <= max(tol, rel_tol * abs(total)):
            logger.debug("quadrature_converged", a=a, b=b, panels=len(values), error=total_error)
            return QuadratureResult(total, total_error, len(values))
        if len(values) >= max_panels:
            raise QuadratureError(
                f"tolerance {tol:g} not reached with {max_panels} panels on [{a}, {b}]",
                total, total_error, len(values))

        worst = int(np.argmax(errors))
        left, right = lefts[worst], rights[worst]
        middle = 0.5 * (left + right)

        left_value, left_error = gauss_kronrod_panel(f, left, middle)
        right_value, right_error = gauss_kronrod_panel(f, middle, right)
        rights[worst], values[worst], errors[worst] = middle, left_value, left_error
        lefts.append(middle)
        rights.append(right)
        values.append(right_value)
        errors.append(right_error)


def i_integrand(k: int) -> Callable[[np.ndarray], np.ndarray]:
    """1 / (t^{1-2k} + (1-t)^{1-2k}) written as t^m (1-t)^m / (t^m + (1-t)^m), m = 2k-1.

    The rewritten form is bounded and equals its limit 0 at both endpoints.
    """
    if k < 1:
        raise DomainError(f"I(k) needs k >= 1, got {k}")
    m = 2 * k - 1

    def integrand(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        u = t ** m
        v = (1.0 - t) ** m
        return u * v / (u + v)

    return integrand


def i_integral(k: int, tol: float = DEFAULT_QUADRATURE_TOL,
               max_panels: int = DEFAULT_QUADRATURE_MAX_PANELS) -> QuadratureResult:
    """I(k) = int_0^1 dt / (t^{1-2k} + (1-t)^{1-2k})"""
    if not 0.0 < tol <= 1e-6:
        raise DomainError(f"I(k) tolerance must lie in (0, 1e-6], got {tol}")
    result = adaptive_quadrature(i_integrand(k), 0.0, 1.0, tol=tol,
                                 max_panels=max_panels, initial_panels=2)
    logger.debug("i_integral", k=k, value=result.value, panels=result.panels_used)
    return result


def ap_constant(k: int) -> PiScaled:
    """2 Gamma(2k+1) / (pi^{2k} Gamma((2k+1)/2)^2) exactly"""
    return gamma_half_ratio(k)


def yang_factor(m: int, n: int, half_length: float) -> float:
    """n/(m+n) * half_length^m, the constant of the two-endpoint Opial inequality"""
    for name, value in (("m", m), ("n", n)):
        if value < 2 or value % 2:
            raise DomainError(f"{name} must be an even integer >= 2, got {value}")
    if half_length <= 0:
        raise DomainError(f"half_length must be positive, got {half_length}")
    return n / (m + n) * half_length ** m


def inequality_constants(k: int, tol: float = DEFAULT_QUADRATURE_TOL) -> dict:
    """I(k), its error and the exact Agarwal-Pang constant for one k"""
    result = i_integral(k, tol)
    published: Optional[ExactRational] = PUBLISHED_I_VALUES.get(k)
    row = {
        "k": k,
        "I_k": result.value,
        "I_k_error": result.abs_error_estimate,
        "ap_constant": ap_constant(k).to_dict(),
    }
    if published is not None:
        row["I_k_published"] = str(published)
        row["I_k_rel_diff"] = abs(result.value - float(published)) / float(published)
    return row
