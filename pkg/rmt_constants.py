"""
Random-matrix moment coefficients for mixed moments of Z(t) and Z'(t).

The conjectured asymptotic

    int_0^T Z(t)^{2k-2h} Z'(t)^{2h} dt ~ a(k) b(h,k) T (log T)^{k^2 + 2h}

splits into an arithmetic Euler product a(k) and a rational b(h,k). This module
computes b(h,k) exactly from b(k) = prod_{j<k} j!/(j+k)! and the rational
functions H(h,k), truncates a(k) over primes, and keeps the classical fourth
moments as cross-checks.

a(k) uses the normalisation prod_p (1 - 1/p)^{k^2} sum_m (Gamma(m+k)/(m! Gamma(k)))^2 p^-m,
the only one giving a(1) = 1 and a(2) = 6/pi^2.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from rational_core import ExactRational, PiScaled, binomial, factorial
from zeta_config import DEFAULT_EULER_MAX_TERMS, DEFAULT_EULER_TAIL, DEFAULT_PRIME_CUTOFF
from zeta_errors import DomainError, PoleError, UnsupportedParameterError

logger = structlog.get_logger(__name__)

MAX_H = 7
MAX_K = 7


@dataclass(frozen=True)
class HEntry:
    """H(h,k) = N(K^2) / prod (K^2 - a^2)^e with K = 2k.

    numerator holds polynomial coefficients in K^2, highest degree first.
    """

    h: int
    numerator: Tuple[int, ...]
    denominator: Tuple[Tuple[int, int], ...]
    adjusted: bool = False


# h = 3 carries an extra K^2 - 9 in both numerator and denominator so the
# denominator has the predicted monic shape; the value is unchanged.
H_TABLE: Dict[int, HEntry] = {
    0: HEntry(0, (1,), ()),
    1: HEntry(1, (1,), ((1, 1),)),
    2: HEntry(2, (1,), ((1, 1), (3, 1))),
    3: HEntry(3, (1, -9), ((1, 2), (3, 1), (5, 1)), adjusted=True),
    4: HEntry(4, (1, -33), ((1, 2), (3, 1), (5, 1), (7, 1))),
    5: HEntry(5, (1, -90, 1497), ((1, 2), (3, 2), (5, 1), (7, 1), (9, 1))),
    6: HEntry(6, (1, -171, 6867, -27177),
              ((1, 3), (3, 2), (5, 1), (7, 1), (9, 1), (11, 1))),
    7: HEntry(7, (1, -316, 30702, -982572, 6973305),
              ((1, 3), (3, 2), (5, 2), (7, 1), (9, 1), (11, 1), (13, 1))),
}

# Published b(0,k)/b(k,k) values, k = 1..7, kept exactly as printed
PUBLISHED_RATIOS: Dict[int, ExactRational] = {
    1: ExactRational(12),
    2: ExactRational(6720, 12),
    3: ExactRational(49674240, 864),
    4: ExactRational(271159356948480, 31 * 870912),
    5: ExactRational(581050229760, 227),
    6: ExactRational(114664452340838400, 133933),
    7: ExactRational(1769682901766011323008, 5078125),
}

# Published b(1,k) and b(k,k) literals
PUBLISHED_B_VALUES: Dict[Tuple[int, int], ExactRational] = {
    (1, 2): ExactRational(1, 720),
    (2, 2): ExactRational(1, 6720),
    (1, 3): ExactRational(1, 1209600),
    (3, 3): ExactRational(1, 496742400),
    (1, 4): ExactRational(1, 219469824000),
    (4, 4): ExactRational(31, 271159356948480000),
    (1, 5): ExactRational(1, 8760533070643200000),
    (5, 5): ExactRational(227, 12854317559387145633792000000),
    (1, 6): ExactRational(1, 127288050516627176816640000000),
    (6, 6): ExactRational(133933, 25516459094444104187401241999966208000000000),
    (1, 7): ExactRational(1, 998707926079695101611943783301120000000000),
    (7, 7): ExactRational(2006509, 895370835179281010419215815294340559070476369920000000000000),
}


class ClassicalMoment(Enum):
    INGHAM_Z4 = "ingham_Z4"
    CONREY_ZPRIME4 = "conrey_Zprime4"
    CONREY_MIXED = "conrey_mixed"


@dataclass(frozen=True)
class ClassicalMomentConstant:
    name: ClassicalMoment
    leading: PiScaled
    log_power: int

    def to_dict(self) -> dict:
        return {"name": self.name.value, "leading": self.leading.to_dict(), "log_power": self.log_power}


@dataclass(frozen=True)
class MomentCoefficients:
    k: int
    h: int
    a_k: float
    b_hk: ExactRational
    growth_exponent: int

    @property
    def leading_constant(self) -> float:
        """C(h,k) = a(k) b(h,k)"""
        return self.a_k * float(self.b_hk)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "h": self.h,
            "b_hk": str(self.b_hk),
            "a_k": self.a_k,
            "growth_exponent": self.growth_exponent,
        }


@dataclass(frozen=True)
class RatioEntry:
    k: int
    computed: ExactRational
    published: ExactRational
    matches: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "computed": str(self.computed),
            "published": str(self.published),
            "match": self.matches,
        }


@dataclass(frozen=True)
class BValueEntry:
    h: int
    k: int
    computed: ExactRational
    published: ExactRational
    matches: bool

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "k": self.k,
            "computed": str(self.computed),
            "published": str(self.published),
            "match": self.matches,
        }


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")


def _big_k_squared(k: Union[int, Fraction, ExactRational]) -> Fraction:
    big_k = 2 * ExactRational.of(k).as_fraction()
    return big_k * big_k


def h_function(h: int, k: Union[int, Fraction, ExactRational]) -> ExactRational:
    """Exact H(h,k) with K = 2k substituted.

    Integer k never hits a pole (K is even, the roots are odd squares); rational
    k is accepted so half-integer poles can be evaluated.
    """
    if h < 0:
        raise DomainError(f"h must be non-negative, got {h}")
    if h > MAX_H:
        raise UnsupportedParameterError(f"H(h,k) is tabulated for h <= {MAX_H}, got h={h}")

    entry = H_TABLE[h]
    x = _big_k_squared(k)

    denominator = Fraction(1)
    for a, exponent in entry.denominator:
        factor = x - a * a
        if factor == 0:
            raise PoleError(f"H({h},k) has a pole at K^2 = {a * a} (k = {k})")
        denominator *= factor ** exponent

    numerator = Fraction(0)
    for coefficient in entry.numerator:
        numerator = numerator * x + coefficient

    return ExactRational.of(numerator / denominator)


@lru_cache(maxsize=None)
def b0(k: int) -> ExactRational:
    """b(k) = prod_{j=0}^{k-1} j! / (j+k)!"""
    _check_k(k)
    value = ExactRational(1)
    for j in range(k):
        value = value * ExactRational(factorial(j), factorial(j + k))
    return value


@lru_cache(maxsize=None)
def b_coeff(h: int, k: int) -> ExactRational:
    """b(h,k) = b(0,k) * (2h)! / (8^h h!) * H(h,k)"""
    _check_k(k)
    if h < 0 or h > k:
        raise DomainError(f"b(h,k) needs 0 <= h <= k, got h={h}, k={k}")
    if h > MAX_H:
        raise UnsupportedParameterError(f"b(h,k) needs h <= {MAX_H}, got h={h}")

    weight = ExactRational(factorial(2 * h), 8 ** h * factorial(h))
    return b0(k) * weight * h_function(h, k)


def ratio_b0_bkk(k: int) -> ExactRational:
    """b(0,k) / b(k,k)"""
    return b0(k) / b_coeff(k, k)


def ratio_table() -> List[RatioEntry]:
    """Computed b(0,k)/b(k,k) for k = 1..7 against the published values"""
    entries = []
    for k in range(1, MAX_K + 1):
        computed = ratio_b0_bkk(k)
        published = PUBLISHED_RATIOS[k]
        entry = RatioEntry(k, computed, published, computed == published)
        if not entry.matches:
            logger.warning("ratio_mismatch", k=k, computed=str(computed), published=str(published))
        entries.append(entry)
    return entries


def published_b_values() -> Dict[Tuple[int, int], ExactRational]:
    """The printed b(1,k) and b(k,k), keyed by (h, k)"""
    return dict(PUBLISHED_B_VALUES)


def b_value_report() -> List[BValueEntry]:
    """Computed b(1,k), b(k,k) against the published literals"""
    entries = []
    for (h, k), published in sorted(published_b_values().items(), key=lambda item: (item[0][1], item[0][0])):
        computed = b_coeff(h, k)
        entry = BValueEntry(h, k, computed, published, computed == published)
        if not entry.matches:
            logger.warning("b_value_mismatch", h=h, k=k, computed=str(computed), published=str(published))
        entries.append(entry)
    return entries


@lru_cache(maxsize=8)
def primes_up_to(limit: int) -> np.ndarray:
    """Sieve of Eratosthenes"""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)

    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve)


@lru_cache(maxsize=64)
def a_factor(k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
             tail: float = DEFAULT_EULER_TAIL,
             max_terms: int = DEFAULT_EULER_MAX_TERMS) -> float:
    """Truncated Euler product a(k) over primes p <= prime_cutoff.

    Each inner series sum_m C(m+k-1, m)^2 p^-m runs until its terms are past
    their peak and below ``tail`` relative to the partial sum, capped at
    ``max_terms``. The product is accumulated in log space.
    """
    _check_k(k)
    if prime_cutoff < 2:
        raise DomainError(f"prime_cutoff must be at least 2, got {prime_cutoff}")

    primes = primes_up_to(prime_cutoff).astype(np.float64)
    x = 1.0 / primes

    # terms grow while ((m+k)/(m+1))^2 x > 1; past this m they shrink for every p >= 2
    peak = max(0, math.ceil((k - math.sqrt(2.0)) / (math.sqrt(2.0) - 1.0)))

    partial = np.ones_like(x)
    power = np.ones_like(x)
    terms_used = 1
    for m in range(1, max_terms):
        power = power * x
        term = float(binomial(m + k - 1, m)) ** 2 * power
        partial = partial + term
        terms_used = m + 1
        if m > peak and np.all(term <= tail * partial):
            break

    log_factors = k * k * np.log1p(-x) + np.log(partial)
    value = math.exp(math.fsum(log_factors))
    logger.debug("euler_product", k=k, prime_cutoff=prime_cutoff, primes=len(primes), terms=terms_used, value=value)
    return value


def moment_coefficients(h: int, k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
                        tail: float = DEFAULT_EULER_TAIL,
                        max_terms: int = DEFAULT_EULER_MAX_TERMS) -> MomentCoefficients:
    return MomentCoefficients(
        k=k,
        h=h,
        a_k=a_factor(k, prime_cutoff, tail, max_terms),
        b_hk=b_coeff(h, k),
        growth_exponent=k * k + 2 * h,
    )


def mixed_moment_coefficients(k: int, prime_cutoff: int = DEFAULT_PRIME_CUTOFF,
                              tail: float = DEFAULT_EULER_TAIL,
                              max_terms: int = DEFAULT_EULER_MAX_TERMS) -> List[MomentCoefficients]:
    """MomentCoefficients for every h in 0..min(k, 7)"""
    _check_k(k)
    return [moment_coefficients(h, k, prime_cutoff, tail, max_terms) for h in range(min(k, MAX_H) + 1)]


def predicted_moment(k: int, h: int, T: float, prime_cutoff: int = DEFAULT_PRIME_CUTOFF) -> float:
    """a(k) b(h,k) T (log T)^{k^2+2h}"""
    if T <= 1.0:
        raise DomainError(f"predicted moment needs T > 1, got {T}")
    coefficients = moment_coefficients(h, k, prime_cutoff)
    log_value = (math.log(coefficients.a_k) + coefficients.b_hk.log() + math.log(T)
                 + coefficients.growth_exponent * math.log(math.log(T)))
    return math.exp(log_value)


def monic_exponent(a: int, h: int) -> int:
    """floor(4h / (a + sqrt(a^2 + 8h)))"""
    # exact floor: largest e with e*(a + sqrt(a^2+8h)) <= 4h
    e = int(4 * h / (a + math.sqrt(a * a + 8 * h)))
    while e > 0 and not _exponent_fits(e, a, h):
        e -= 1
    while _exponent_fits(e + 1, a, h):
        e += 1
    return e


def _exponent_fits(e: int, a: int, h: int) -> bool:
    # e*(a + s) <= 4h  <=>  e*s <= 4h - e*a, with s = sqrt(a^2 + 8h)
    rhs = 4 * h - e * a
    if rhs < 0:
        return False
    return e * e * (a * a + 8 * h) <= rhs * rhs


def monic_denominator(h: int) -> List[Tuple[int, int]]:
    """Predicted denominator factors (a, exponent) of H(h,k) in K^2 - a^2"""
    if h < 1 or h > MAX_H:
        raise UnsupportedParameterError(f"monic_denominator needs 1 <= h <= {MAX_H}, got {h}")

    factors = []
    a = 1
    while True:
        exponent = monic_exponent(a, h)
        if exponent == 0:
            break
        factors.append((a, exponent))
        a += 2
    return factors


def denominator_matches_monic(h: int, k_values: Optional[Sequence[int]] = None) -> bool:
    """Check H(h,k) * prod (K^2 - a^2)^e equals the tabulated numerator polynomial.

    Evaluated exactly at K = 20, 22, ..., 40 by default.
    """
    predicted = monic_denominator(h)
    entry = H_TABLE[h]
    big_ks = range(20, 41, 2) if k_values is None else [2 * k for k in k_values]

    for big_k in big_ks:
        x = Fraction(big_k * big_k)
        product = Fraction(1)
        for a, exponent in predicted:
            product *= (x - a * a) ** exponent

        numerator = Fraction(0)
        for coefficient in entry.numerator:
            numerator = numerator * x + coefficient

        if h_function(h, Fraction(big_k, 2)).as_fraction() * product != numerator:
            return False
    return True


def classical_constants() -> List[ClassicalMomentConstant]:
    """Leading constants of the classical fourth moments and their log powers"""
    return [
        ClassicalMomentConstant(ClassicalMoment.INGHAM_Z4, PiScaled(ExactRational(1, 2), -2), 4),
        ClassicalMomentConstant(ClassicalMoment.CONREY_ZPRIME4, PiScaled(ExactRational(1, 1120), -2), 8),
        ClassicalMomentConstant(ClassicalMoment.CONREY_MIXED, PiScaled(ExactRational(1, 120), -2), 6),
    ]
