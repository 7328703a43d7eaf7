"""
Exact rational arithmetic for the moment coefficients and inequality constants.

Every value here is immutable and stored in canonical form, so two equal
rationals always have identical fields and string forms.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Union

import mpmath

from zeta_errors import DomainError, RationalArithmeticError

# 50 decimals of pi, used for every PiScaled -> float conversion
PI_50_DIGITS = "3.14159265358979323846264338327950288419716939937510"
LOG_PI = float(mpmath.log(mpmath.mpf(PI_50_DIGITS)))


class ArithOp(Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


RationalLike = Union["ExactRational", Fraction, int]


@total_ordering
@dataclass(frozen=True, eq=False)
class ExactRational:
    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator == 0:
            raise RationalArithmeticError(f"zero denominator in {self.numerator}/0")

        num, den = int(self.numerator), int(self.denominator)
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        object.__setattr__(self, "numerator", num // g)
        object.__setattr__(self, "denominator", den // g)

    @classmethod
    def of(cls, value: Union[RationalLike, str]) -> "ExactRational":
        """Coerce ints, Fractions and "num/den" strings"""
        if isinstance(value, ExactRational):
            return value
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        if isinstance(value, int):
            return cls(value, 1)
        if isinstance(value, str):
            num, _, den = value.strip().partition("/")
            return cls(int(num), int(den) if den else 1)
        raise TypeError(f"cannot build an ExactRational from {type(value).__name__}")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def is_zero(self) -> bool:
        return self.numerator == 0

    def log(self) -> float:
        """Natural logarithm computed from the integer parts, safe far outside float range"""
        if self.numerator <= 0:
            raise DomainError(f"log of non-positive rational {self}")
        return math.log(self.numerator) - math.log(self.denominator)

    def __add__(self, other: RationalLike) -> "ExactRational":
        return rat_arith(self, ExactRational.of(other), ArithOp.ADD)

    def __radd__(self, other: RationalLike) -> "ExactRational":
        return rat_arith(ExactRational.of(other), self, ArithOp.ADD)

    def __sub__(self, other: RationalLike) -> "ExactRational":
        return rat_arith(self, ExactRational.of(other), ArithOp.SUB)

    def __rsub__(self, other: RationalLike) -> "ExactRational":
        return rat_arith(ExactRational.of(other), self, ArithOp.SUB)

    def __mul__(self, other: RationalLike) -> "ExactRational":
        return rat_arith(self, ExactRational.of(other), ArithOp.MUL)

    def __rmul__(self, other: RationalLike) -> "ExactRational":
        return rat_arith(ExactRational.of(other), self, ArithOp.MUL)

    def __truediv__(self, other: RationalLike) -> "ExactRational":
        return rat_arith(self, ExactRational.of(other), ArithOp.DIV)

    def __rtruediv__(self, other: RationalLike) -> "ExactRational":
        return rat_arith(ExactRational.of(other), self, ArithOp.DIV)

    def __pow__(self, exponent: int) -> "ExactRational":
        if exponent < 0:
            return ExactRational(1) / (self ** -exponent)
        return ExactRational(self.numerator ** exponent, self.denominator ** exponent)

    def __neg__(self) -> "ExactRational":
        return ExactRational(-self.numerator, self.denominator)

    def __eq__(self, other) -> bool:
        if isinstance(other, (ExactRational, Fraction, int)):
            other = ExactRational.of(other)
            return (self.numerator, self.denominator) == (other.numerator, other.denominator)
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, (ExactRational, Fraction, int)):
            return self.as_fraction() < ExactRational.of(other).as_fraction()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __float__(self) -> float:
        # Fraction.__float__ rounds correctly even for huge numerators
        return float(self.as_fraction())

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


def rat_arith(a: ExactRational, b: ExactRational, op: ArithOp) -> ExactRational:
    """Exact a (op) b in lowest terms"""
    x, y = a.as_fraction(), b.as_fraction()

    if op is ArithOp.ADD:
        result = x + y
    elif op is ArithOp.SUB:
        result = x - y
    elif op is ArithOp.MUL:
        result = x * y
    elif op is ArithOp.DIV:
        if y == 0:
            raise RationalArithmeticError(f"division of {a} by zero")
        result = x / y
    else:
        raise ValueError(f"Unknown operation: {op}")

    return ExactRational(result.numerator, result.denominator)


def factorial(n: int) -> int:
    if n < 0:
        raise DomainError(f"factorial of negative integer {n}")
    return math.factorial(n)


def binomial(n: int, r: int) -> int:
    if n < 0 or r < 0:
        raise DomainError(f"binomial({n}, {r}) needs non-negative arguments")
    return math.comb(n, r)


def gamma_half_coefficient(n: int) -> ExactRational:
    """Rational c with Gamma(n + 1/2) = c * sqrt(pi), i.e. (2n)! / (4^n n!)"""
    if n < 0:
        raise DomainError(f"gamma_half_coefficient needs n >= 0, got {n}")
    return ExactRational(factorial(2 * n), 4 ** n * factorial(n))


@dataclass(frozen=True)
class PiScaled:
    """The exact real number coefficient * pi**pi_power"""

    coefficient: ExactRational
    pi_power: int

    def __mul__(self, other: Union["PiScaled", RationalLike]) -> "PiScaled":
        if isinstance(other, PiScaled):
            return PiScaled(self.coefficient * other.coefficient, self.pi_power + other.pi_power)
        return PiScaled(self.coefficient * ExactRational.of(other), self.pi_power)

    def times_pi(self, power: int) -> "PiScaled":
        return PiScaled(self.coefficient, self.pi_power + power)

    def log(self) -> float:
        return self.coefficient.log() + self.pi_power * LOG_PI

    def to_float(self) -> float:
        with mpmath.workdps(60):
            pi = mpmath.mpf(PI_50_DIGITS)
            value = (mpmath.mpf(self.coefficient.numerator) / self.coefficient.denominator) * pi ** self.pi_power
            return float(value)

    def to_dict(self) -> dict:
        return {"coeff": str(self.coefficient), "pi_power": self.pi_power, "real": self.to_float()}

    def __float__(self) -> float:
        return self.to_float()

    def __str__(self) -> str:
        return f"({self.coefficient})*pi^{self.pi_power}"


def gamma_half_ratio(k: int) -> PiScaled:
    """2 Gamma(2k+1) / (pi^{2k} Gamma((2k+1)/2)^2) as an exact PiScaled.

    With Gamma(k + 1/2) = c_k sqrt(pi) this is 2 (2k)! / c_k^2 * pi^-(2k+1),
    which reduces to 2 * 16^k * (k!)^2 / (2k)!.
    """
    if k < 1:
        raise DomainError(f"gamma_half_ratio needs k >= 1, got {k}")

    c_k = gamma_half_coefficient(k)
    coefficient = ExactRational(2 * factorial(2 * k)) / (c_k * c_k)
    return PiScaled(coefficient, -(2 * k + 1))
