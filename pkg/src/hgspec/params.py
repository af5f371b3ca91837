# src/hgspec/params.py
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

from .errors import ParameterDomainError

Scalar = Fraction | float


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer or a decimal string into an exact Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParameterDomainError(f"Not a rational number: {text!r}") from e


@dataclass(frozen=True)
class Param:
    """
    The hypergroup parameter r.

    r is kept as a Fraction whenever it arrives as an int, a Fraction or a
    "p/q" string; floats stay floats and select the numeric paths.
    """
    r: Scalar

    def __post_init__(self):
        r = self.r
        if isinstance(r, bool):
            raise ParameterDomainError(f"r must be a number, got {r!r}")
        if isinstance(r, int):
            object.__setattr__(self, "r", Fraction(r))
        elif isinstance(r, float):
            if not math.isfinite(r):
                raise ParameterDomainError(f"r must be finite, got {r!r}")
        elif not isinstance(r, Fraction):
            raise ParameterDomainError(f"r must be a Fraction or float, got {type(r).__name__}")
        if self.r == 1:
            raise ParameterDomainError("r = 1 is excluded (the recurrence divides by 1 - r)")

    # ---------- constructors ----------

    @classmethod
    def parse(cls, text: str) -> "Param":
        return cls(parse_rational(text))

    @classmethod
    def of(cls, value: "Param | Scalar | int | str") -> "Param":
        if isinstance(value, Param):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(value)

    # ---------- views ----------

    @property
    def exact(self) -> bool:
        return isinstance(self.r, Fraction)

    @property
    def hypergroup(self) -> bool:
        return 0 <= self.r <= Fraction(1, 2)

    @property
    def one_minus(self) -> Scalar:
        return 1 - self.r

    def as_float(self) -> float:
        return float(self.r)

    def require_hypergroup(self, *, open_left: bool = False) -> None:
        """Raise unless 0 <= r <= 1/2 (or 0 < r <= 1/2 with open_left)."""
        lo_ok = self.r > 0 if open_left else self.r >= 0
        if not (lo_ok and self.r <= Fraction(1, 2)):
            interval = "(0, 1/2]" if open_left else "[0, 1/2]"
            raise ParameterDomainError(f"r = {self.r} is outside {interval}")

    @property
    def halfwidth(self) -> float:
        """a = 2*sqrt(r(1-r)); I_r = [-a, a]."""
        rf = self.as_float()
        return 2.0 * math.sqrt(rf * (1.0 - rf))

    @property
    def critical_modulus(self) -> float:
        """sqrt((1-r)/r), the modulus where the atom is born."""
        if self.r <= 0:
            raise ParameterDomainError("critical modulus needs r > 0")
        rf = self.as_float()
        return math.sqrt((1.0 - rf) / rf)

    def label(self) -> str:
        return str(self.r)

    def __str__(self) -> str:
        return self.label()
