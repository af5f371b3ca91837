# src/hgspec/functionals.py
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, ClassVar
import cmath
import math
import re

from .algebra import check_degree, format_coefficient
from .errors import ParameterDomainError, PoleError, SeriesDomainError
from .orthopoly import gamma_pair, gen_fun, point_functional
from .params import Param, parse_rational

Number = Fraction | float | complex | int


# ---------------------------------------------------------------------------
# Lambda values (exact where the input allows it)
# ---------------------------------------------------------------------------

_RAT = r"[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?(?:/[0-9]+)?"
_MOD = rf"(?:sqrt\((?P<sq>{_RAT})\)|(?P<rat>{_RAT}))"
_POLAR_RE = re.compile(rf"^(?P<sign>[+-]?){_MOD}(?:\*exp\(i\*pi\*(?P<turn>[+-]?{_RAT})\))?$")
_CART_RE = re.compile(rf"^(?P<re>[+-]?{_RAT})?(?:(?P<im>[+-]{_RAT}|[+-])i)?$")


@dataclass(frozen=True)
class Lambda:
    """
    A nonzero lambda together with whatever is known about it exactly.

    abs_sq is |lambda|^2 as a Fraction when the input determines it exactly
    (rationals, sqrt(q), q*exp(i*pi*p), a+bi with rational parts); real_exact
    is the exact realness when known.
    """
    value: Fraction | float | complex
    abs_sq: Fraction | None = None
    real_exact: bool | None = None
    text: str = ""

    def __post_init__(self):
        if self.value == 0:
            raise ParameterDomainError("lambda must be nonzero")
        if not self.text:
            object.__setattr__(self, "text", _lambda_text(self.value))

    @classmethod
    def of(cls, value: "Lambda | Number | str") -> "Lambda":
        if isinstance(value, Lambda):
            return value
        if isinstance(value, str):
            return parse_lambda(value)
        if isinstance(value, bool):
            raise ParameterDomainError(f"lambda must be a number, got {value!r}")
        if isinstance(value, (int, Fraction)):
            f = Fraction(value)
            return cls(f, abs_sq=f * f, real_exact=True)
        if isinstance(value, complex):
            if value.imag == 0:
                return cls(float(value.real))
            return cls(value)
        return cls(float(value))

    @property
    def complex_value(self) -> complex:
        return complex(self.value)

    @property
    def is_real(self) -> bool:
        if self.real_exact is not None:
            return self.real_exact
        return not isinstance(self.value, complex) or self.value.imag == 0

    @property
    def real_value(self) -> float:
        return float(self.complex_value.real)

    def __abs__(self) -> float:
        if self.abs_sq is not None:
            return math.sqrt(self.abs_sq)
        return abs(self.complex_value)

    def __neg__(self) -> "Lambda":
        text = self.text[1:] if self.text.startswith("-") else f"-{self.text}"
        return Lambda(-self.value, abs_sq=self.abs_sq, real_exact=self.real_exact, text=text)

    def to_json(self) -> dict[str, Any]:
        z = self.complex_value
        out: dict[str, Any] = {"text": self.text, "re": z.real, "im": z.imag}
        if self.abs_sq is not None:
            out["abs_sq"] = str(self.abs_sq)
        return out


def _lambda_text(value: Number) -> str:
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}i"
    return format_coefficient(value)


def _parse_number(text: str) -> tuple[Fraction | float | complex, Fraction | None, bool | None, str]:
    """(value, exact |value|^2 or None, exact realness or None, normalized text)."""
    raw = str(text).strip().replace(" ", "")
    m = _POLAR_RE.match(raw)
    if m:
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("sq") is not None:
            q = parse_rational(m.group("sq"))
            if q < 0:
                raise ParameterDomainError(f"sqrt argument must be non-negative in {text!r}")
            root = Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))
            modulus: Fraction | float = root if root * root == q else math.sqrt(q)
            abs_sq = q
        else:
            modulus = parse_rational(m.group("rat"))
            abs_sq = modulus * modulus
        turn_s = m.group("turn")
        if turn_s is None:
            return sign * modulus, abs_sq, True, raw
        turn = parse_rational(turn_s)
        if turn.denominator == 1:
            # exp(i*pi*k) = +-1
            s = sign * (1 if turn.numerator % 2 == 0 else -1)
            return s * modulus, abs_sq, True, raw
        return sign * float(modulus) * cmath.exp(1j * math.pi * float(turn)), abs_sq, False, raw

    m = _CART_RE.match(raw)
    if m and raw.endswith("i") and (m.group("re") or m.group("im")):
        re_part = parse_rational(m.group("re")) if m.group("re") else Fraction(0)
        im_s = m.group("im")
        if im_s in ("+", "-"):
            im_s += "1"
        im_part = parse_rational(im_s.lstrip("+"))
        if im_part == 0:
            return re_part, re_part * re_part, True, raw
        return complex(float(re_part), float(im_part)), re_part * re_part + im_part * im_part, False, raw

    if raw.endswith("i") and raw[:-1] and raw[:-1] not in ("+", "-"):
        # pure imaginary such as "1.5i"
        im_part = parse_rational(raw[:-1])
        if im_part == 0:
            return Fraction(0), Fraction(0), True, raw
        return complex(0.0, float(im_part)), im_part * im_part, False, raw
    try:
        z = complex(raw.replace("i", "j"))
    except ValueError as e:
        raise ParameterDomainError(f"Cannot parse number: {text!r}") from e
    if z.imag == 0:
        return float(z.real), None, True, raw
    return z, None, False, raw


def parse_complex(text: str) -> complex:
    return complex(_parse_number(text)[0])


def parse_lambda(text: str) -> Lambda:
    """
    Parse lambda from the command line.

    Accepted forms: "p/q", "2.5", "sqrt(3)", "-sqrt(3)", "2*exp(i*pi*1/6)",
    "sqrt(3)*exp(i*pi*1/4)" and "a+bi" / "a-bi" / "bi".
    """
    value, abs_sq, real_exact, raw = _parse_number(text)
    return Lambda(value, abs_sq=abs_sq, real_exact=real_exact, text=raw)


# ---------------------------------------------------------------------------
# Functional specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionalSpec:
    """A linear functional phi on the algebra, given by phi_n = phi(h_n)."""
    family: ClassVar[str] = "functional"

    def phi_n(self, n: int) -> Number:
        raise NotImplementedError

    def series_radius(self) -> float:
        return math.inf

    def _closed_form(self, z: complex) -> complex:
        raise NotImplementedError

    def phi(self, z: complex, *, continuation: bool = True) -> complex:
        """
        sum_n phi_n z^n in closed form.

        With continuation=False the value is refused outside the disc of
        convergence; otherwise the closed form is used as the analytic
        continuation (poles still raise).
        """
        if not continuation:
            radius = self.series_radius()
            if abs(z) >= radius:
                raise SeriesDomainError(
                    f"{self.family} series diverges at |z|={abs(z):.6g} (radius {radius:.6g})",
                    abs_z=abs(z),
                    radius=radius,
                )
        return self._closed_form(complex(z))

    @property
    def phi0(self) -> complex:
        return complex(self.phi_n(0))

    def label(self) -> str:
        return self.family

    def to_json(self) -> dict[str, Any]:
        return {"family": self.family}


@dataclass(frozen=True)
class Geometric(FunctionalSpec):
    """phi_n = lambda^{-n}; phi(z) = 1/(1 - z/lambda)."""
    lam: Lambda
    family: ClassVar[str] = "geometric"

    def __post_init__(self):
        object.__setattr__(self, "lam", Lambda.of(self.lam))

    def phi_n(self, n: int) -> Number:
        n = check_degree(n)
        v = self.lam.value
        if isinstance(v, Fraction):
            return v ** -n
        return complex(v) ** -n if isinstance(v, complex) else float(v) ** -n

    def series_radius(self) -> float:
        return abs(self.lam)

    def _closed_form(self, z: complex) -> complex:
        lam = self.lam.complex_value
        den = 1 - z / lam
        if den == 0:
            raise PoleError(f"geometric functional has a pole at z = lambda = {self.lam.text}")
        return 1 / den

    def label(self) -> str:
        return f"geometric({self.lam.text})"

    def to_json(self) -> dict[str, Any]:
        return {"family": self.family, "lambda": self.lam.to_json()}


@dataclass(frozen=True)
class PointEval(FunctionalSpec):
    """phi_n = P_n(c) for a fixed parameter r; phi(z) is the generating function at t = c."""
    c: complex
    r: Param
    family: ClassVar[str] = "point"

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "r", Param.of(self.r))

    def phi_n(self, n: int) -> Number:
        return point_functional(self.c, n, self.r)

    def series_radius(self) -> float:
        gp = gamma_pair(self.c, self.r)
        big = max(abs(gp.gamma_plus), abs(gp.gamma_minus))
        return math.inf if big == 0 else 1.0 / big

    def _closed_form(self, z: complex) -> complex:
        try:
            return complex(gen_fun(z, complex(self.c), self.r))
        except ZeroDivisionError as e:
            raise PoleError(f"point functional at c={self.c} has a pole at z={z}") from e

    def label(self) -> str:
        return f"point({format_coefficient(complex(self.c))})"

    def to_json(self) -> dict[str, Any]:
        c = complex(self.c)
        return {"family": self.family, "c": [c.real, c.imag], "r": self.r.label()}


@dataclass(frozen=True)
class DeltaAt0(FunctionalSpec):
    """phi_0 = 1, phi_n = 0 otherwise; phi(z) = 1 (the trace)."""
    family: ClassVar[str] = "delta0"

    def phi_n(self, n: int) -> Number:
        return Fraction(1) if check_degree(n) == 0 else Fraction(0)

    def _closed_form(self, z: complex) -> complex:
        return 1 + 0j


@dataclass(frozen=True)
class FiniteSeq(FunctionalSpec):
    """Finitely many nonzero phi_n; phi(z) is a polynomial."""
    values: tuple[Number, ...] = ()
    family: ClassVar[str] = "finite"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def phi_n(self, n: int) -> Number:
        n = check_degree(n)
        return self.values[n] if n < len(self.values) else 0

    def _closed_form(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.values):
            acc = acc * z + complex(c)
        return acc

    def to_json(self) -> dict[str, Any]:
        return {"family": self.family, "values": [format_coefficient(v) for v in self.values]}


def parse_functional(text: str, r: Param | None = None) -> FunctionalSpec:
    """
    "delta0", "geometric:<lambda>", "point:<c>" or "finite:<v0>,<v1>,...".
    A bare lambda is read as geometric.
    """
    raw = str(text).strip()
    low = raw.lower()
    if low in ("delta0", "delta", "plancherel", "trace"):
        return DeltaAt0()
    head, _, tail = raw.partition(":")
    head = head.strip().lower()
    if head == "geometric" and tail:
        return Geometric(parse_lambda(tail))
    if head == "point" and tail:
        c = parse_complex(tail)
        return PointEval(c, r or Param(Fraction(1, 4)))
    if head == "finite" and tail:
        vals: list[Number] = []
        for part in tail.split(","):
            part = part.strip()
            try:
                vals.append(parse_rational(part))
            except ParameterDomainError:
                vals.append(parse_lambda(part).complex_value)
        return FiniteSeq(tuple(vals))
    return Geometric(parse_lambda(raw))
