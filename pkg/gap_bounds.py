"""
Lower bounds for the normalised gaps between consecutive zeros on the critical line.

Every bound is evaluated in log space from exact rationals; the real conversion
happens only at the final exponentiation. Published table values are kept next
to the formulas so each computed row carries its printed counterpart.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import pandas as pd
import structlog

from rational_core import ExactRational, LOG_PI
from rmt_constants import b_coeff, ratio_b0_bkk
from wirtinger_constants import PUBLISHED_I_VALUES, ap_constant, i_integral
from zeta_config import DEFAULT_QUADRATURE_TOL
from zeta_errors import DomainError, UnsupportedParameterError

logger = structlog.get_logger(__name__)

LOG_TWO_PI = math.log(2.0) + LOG_PI

WIRTINGER_K_RANGE = range(3, 8)
OPIAL_K_RANGE = range(2, 8)


class Method(Enum):
    UNCONDITIONAL = "thm21_unconditional"
    OPIAL = "thm22_opial"
    WIRTINGER_AP = "thm23_ap"
    WIRTINGER_BP = "thm24_bp"
    STEUDING_REF = "steuding_ref"
    HALL_REF = "hall_ref"
    MUELLER_REF = "mueller_ref"
    MONTGOMERY_ODLYZKO_REF = "montgomery_odlyzko_ref"
    CONREY_GHOSH_GONEK_REF = "conrey_ghosh_gonek_ref"
    BUI_MILINOVICH_NG_REF = "bui_milinovich_ng_ref"
    NG_REF = "ng_ref"


class Hypothesis(Enum):
    NONE = "none"
    RH = "RH"
    GRH = "GRH"
    RH_MOMENTS = "RH+moments"


# Printed Lambda tables, keyed by k
PUBLISHED_OPIAL: Dict[int, float] = {2: 1.3753, 3: 1.8858, 4: 2.3439, 5: 2.7640, 6: 3.1491, 7: 3.5004}
PUBLISHED_AP: Dict[int, float] = {3: 2.2265, 4: 2.6544, 5: 3.0545, 6: 3.4259, 7: 3.7676}
PUBLISHED_BP: Dict[int, float] = {3: 2.4905, 4: 2.9389, 5: 3.3508, 6: 3.7287, 7: 4.0736}
PUBLISHED_UNCONDITIONAL = 1.9902


@dataclass(frozen=True)
class GapBound:
    method: Method
    k: int
    h: int
    value: float
    conditional: bool
    paper_value: Optional[float] = None
    hypothesis: Hypothesis = Hypothesis.NONE
    label: str = ""
    recomputed: Optional[float] = field(default=None, compare=False)

    @property
    def abs_diff(self) -> Optional[float]:
        if self.paper_value is None:
            return None
        return abs(self.value - self.paper_value)

    def to_dict(self) -> dict:
        row = {
            "method": self.method.value,
            "k": self.k,
            "h": self.h,
            "value": self.value,
            "conditional": self.conditional,
            "paper_value": self.paper_value,
            "abs_diff": self.abs_diff,
            "hypothesis": self.hypothesis.value,
            "label": self.label,
        }
        if self.recomputed is not None:
            row["recomputed"] = self.recomputed
        return row


def _gap_from_log(log_base: float, exponent: float, log_scale: float) -> float:
    """exp(exponent * log_base - log_scale)"""
    return math.exp(exponent * log_base - log_scale)


def _unconditional_value(i_2: float) -> float:
    # (1/2pi) * (1120 / (2 I(2)))^{1/4}
    return _gap_from_log(math.log(560.0) - math.log(i_2), 0.25, LOG_TWO_PI)


def unconditional_base() -> ExactRational:
    """1120 / (2 I(2)) with the printed I(2); equals 10000000/409"""
    return ExactRational(1120, 2) / PUBLISHED_I_VALUES[2]


def unconditional_bound(tol: float = DEFAULT_QUADRATURE_TOL) -> GapBound:
    """Unconditional bound from the Brnetic-Pecaric inequality and the fourth moments.

    ``value`` uses the printed I(2) = 2863/125000; ``recomputed`` uses the
    quadrature value of I(2).
    """
    value = _gap_from_log(unconditional_base().log(), 0.25, LOG_TWO_PI)
    recomputed = _unconditional_value(i_integral(2, tol).value)
    return GapBound(
        method=Method.UNCONDITIONAL,
        k=0,
        h=0,
        value=value,
        conditional=False,
        paper_value=PUBLISHED_UNCONDITIONAL,
        hypothesis=Hypothesis.NONE,
        label="Brnetic-Pecaric inequality with the fourth moments of Z and Z'",
        recomputed=recomputed,
    )


def lambda_opial(h: int, k: int) -> GapBound:
    """(1/pi) ((k/h) b(h,k) / b(k,k))^{1/(2k-2h)}"""
    if h == 0 or h == k:
        raise DomainError(f"the Opial bound needs h != k and h != 0, got h={h}, k={k}")
    if not 1 <= h < k <= 7:
        raise UnsupportedParameterError(f"the Opial bound needs 1 <= h < k <= 7, got h={h}, k={k}")

    base = ExactRational(k, h) * b_coeff(h, k) / b_coeff(k, k)
    value = _gap_from_log(base.log(), 1.0 / (2 * k - 2 * h), LOG_PI)
    return GapBound(
        method=Method.OPIAL,
        k=k,
        h=h,
        value=value,
        conditional=True,
        paper_value=PUBLISHED_OPIAL.get(k) if h == 1 else None,
        hypothesis=Hypothesis.RH_MOMENTS,
        label=f"Opial-Yang inequality, h={h}",
    )


def opial_family(k: int) -> Tuple[List[GapBound], GapBound]:
    """Opial bounds for every h in 1..k-1, with the largest one"""
    if k not in OPIAL_K_RANGE:
        raise UnsupportedParameterError(f"opial_family needs 2 <= k <= 7, got {k}")
    family = [lambda_opial(h, k) for h in range(1, k)]
    best = max(family, key=lambda bound: bound.value)
    return family, best


def _check_wirtinger_k(k: int) -> None:
    if k not in WIRTINGER_K_RANGE:
        raise UnsupportedParameterError(f"this bound is stated for 3 <= k <= 7, got k={k}")


def lambda_ap(k: int) -> GapBound:
    """(1/2pi) (b(0,k)/b(k,k) * 2 Gamma(2k+1) / Gamma((2k+1)/2)^2)^{1/(2k)}"""
    _check_wirtinger_k(k)
    # pi^{2k} of the Agarwal-Pang constant is absorbed by the 1/(2pi) normalisation
    constant = ap_constant(k).times_pi(2 * k)
    log_base = ratio_b0_bkk(k).log() + constant.log()
    value = _gap_from_log(log_base, 1.0 / (2 * k), LOG_TWO_PI)
    return GapBound(
        method=Method.WIRTINGER_AP,
        k=k,
        h=0,
        value=value,
        conditional=True,
        paper_value=PUBLISHED_AP[k],
        hypothesis=Hypothesis.RH_MOMENTS,
        label="Agarwal-Pang inequality",
    )


def lambda_bp(k: int, tol: float = DEFAULT_QUADRATURE_TOL) -> GapBound:
    """(1/2pi) (b(0,k)/b(k,k) / I(k))^{1/(2k)}"""
    _check_wirtinger_k(k)
    i_k = i_integral(k, tol).value
    log_base = ratio_b0_bkk(k).log() - math.log(i_k)
    value = _gap_from_log(log_base, 1.0 / (2 * k), LOG_TWO_PI)
    return GapBound(
        method=Method.WIRTINGER_BP,
        k=k,
        h=0,
        value=value,
        conditional=True,
        paper_value=PUBLISHED_BP[k],
        hypothesis=Hypothesis.RH_MOMENTS,
        label="Brnetic-Pecaric inequality",
    )


def steuding_reference(k: int, r: int) -> GapBound:
    """4k / (pi r e): gaps over r consecutive zeros exceed this for a positive proportion"""
    if k < 1 or r < 1:
        raise DomainError(f"steuding_reference needs k, r >= 1, got k={k}, r={r}")
    return GapBound(
        method=Method.STEUDING_REF,
        k=k,
        h=0,
        value=4.0 * k / (math.pi * r * math.e),
        conditional=True,
        hypothesis=Hypothesis.RH_MOMENTS,
        label=f"discrete-average comparison, r={r}",
    )


def reference_bounds() -> List[GapBound]:
    """Literature values kept for comparison"""
    references = [
        GapBound(Method.HALL_REF, 0, 0, (105.0 / 4.0) ** 0.25, False, 2.2635,
                 Hypothesis.NONE, "Hall, Beesack inequality"),
        GapBound(Method.HALL_REF, 0, 0, math.sqrt(11.0 / 2.0), False, 2.3452,
                 Hypothesis.NONE, "Hall, Wirtinger-type inequality"),
        GapBound(Method.HALL_REF, 3, 0, math.sqrt(7533.0 / 901.0), True, 2.8915,
                 Hypothesis.RH_MOMENTS, "Hall, mixed moments"),
        GapBound(Method.HALL_REF, 4, 0, 3.392272, True, 3.392272, Hypothesis.RH_MOMENTS, "Hall, mixed moments"),
        GapBound(Method.HALL_REF, 5, 0, 3.858851, True, 3.858851, Hypothesis.RH_MOMENTS, "Hall, mixed moments"),
        GapBound(Method.HALL_REF, 6, 0, 4.2981467, True, 4.2981467, Hypothesis.RH_MOMENTS, "Hall, mixed moments"),
        GapBound(Method.MUELLER_REF, 0, 0, 1.9, True, 1.9, Hypothesis.RH, "Mueller"),
        GapBound(Method.MONTGOMERY_ODLYZKO_REF, 0, 0, 1.9799, True, 1.9799, Hypothesis.RH, "Montgomery-Odlyzko"),
        GapBound(Method.CONREY_GHOSH_GONEK_REF, 0, 0, 2.337, True, 2.337, Hypothesis.RH, "Conrey-Ghosh-Gonek"),
        GapBound(Method.CONREY_GHOSH_GONEK_REF, 0, 0, 2.68, True, 2.68, Hypothesis.GRH, "Conrey-Ghosh-Gonek"),
        GapBound(Method.BUI_MILINOVICH_NG_REF, 0, 0, 2.69, True, 2.69, Hypothesis.RH, "Bui-Milinovich-Ng"),
        GapBound(Method.NG_REF, 0, 0, 3.0, True, 3.0, Hypothesis.GRH, "Ng"),
    ]
    references.extend(steuding_reference(k, 1) for k in range(1, 8))
    return references


def reference_value(method: Method) -> float:
    """First stored literature value for a reference method"""
    for bound in reference_bounds():
        if bound.method is method:
            return bound.value
    raise ValueError(f"No stored reference for {method.value}")


def opial_table() -> List[GapBound]:
    return [lambda_opial(1, k) for k in OPIAL_K_RANGE]


def ap_table() -> List[GapBound]:
    return [lambda_ap(k) for k in WIRTINGER_K_RANGE]


def bp_table(tol: float = DEFAULT_QUADRATURE_TOL) -> List[GapBound]:
    return [lambda_bp(k, tol) for k in WIRTINGER_K_RANGE]


def all_bounds(tol: float = DEFAULT_QUADRATURE_TOL) -> List[GapBound]:
    """Unconditional row, the three conditional tables, then the references"""
    return [unconditional_bound(tol)] + opial_table() + ap_table() + bp_table(tol) + reference_bounds()


def best_bounds(tol: float = DEFAULT_QUADRATURE_TOL) -> List[GapBound]:
    """Largest implemented conditional bound per k = 2..7, after the unconditional row"""
    rows = [unconditional_bound(tol)]
    for k in OPIAL_K_RANGE:
        candidates = [lambda_opial(1, k)]
        if k in WIRTINGER_K_RANGE:
            candidates.extend([lambda_ap(k), lambda_bp(k, tol)])
        best = max(candidates, key=lambda bound: bound.value)
        logger.debug("best_bound", k=k, method=best.method.value, value=best.value)
        rows.append(best)
    return rows


def bounds_frame(bounds: List[GapBound]) -> pd.DataFrame:
    """Tabulate bounds with the published comparison columns"""
    columns = ["method", "k", "h", "value", "conditional", "paper_value", "abs_diff"]
    return pd.DataFrame([bound.to_dict() for bound in bounds], columns=columns)
