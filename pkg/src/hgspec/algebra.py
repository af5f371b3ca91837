# src/hgspec/algebra.py
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from threading import Lock
from typing import Any, Iterator, Mapping
import numbers

from .errors import ArgumentOrderError, DegreeError, ParameterDomainError
from .instrumentation import Cat
from .params import Param
from .session import HGSession, default_session
from .. import config

Coefficient = Fraction | float | complex | int


def check_degree(n: Any, *, name: str = "degree") -> int:
    """Return n as an int or raise DegreeError for negative / non-integer input."""
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise DegreeError(f"{name} must be a non-negative integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise DegreeError(f"{name} must be non-negative, got {n}")
    return n


def format_coefficient(c: Coefficient) -> str:
    """Exact rationals render as "p/q"; floats and complex via repr."""
    if isinstance(c, (Fraction, int)):
        return str(Fraction(c))
    if isinstance(c, complex):
        if c.imag == 0:
            return repr(c.real)
        return f"{c.real!r}{c.imag:+}i"
    return repr(float(c))


@dataclass(frozen=True)
class HyperElement:
    """
    Finitely supported element sum_n c_n h_n of the hypergroup algebra.

    Zero coefficients are dropped at construction so two equal elements
    always compare equal.
    """
    coeffs: Mapping[int, Coefficient] = field(default_factory=dict)

    def __post_init__(self):
        cleaned: dict[int, Coefficient] = {}
        for n, c in dict(self.coeffs).items():
            n = check_degree(n)
            if c != 0:
                cleaned[n] = c
        object.__setattr__(self, "coeffs", dict(sorted(cleaned.items())))

    # ---------- constructors ----------

    @classmethod
    def basis(cls, n: int, coefficient: Coefficient = 1) -> "HyperElement":
        return cls({check_degree(n): Fraction(coefficient) if isinstance(coefficient, int) else coefficient})

    @classmethod
    def zero(cls) -> "HyperElement":
        return cls({})

    # ---------- container protocol ----------

    def __getitem__(self, n: int) -> Coefficient:
        return self.coeffs.get(n, 0)

    def __iter__(self) -> Iterator[tuple[int, Coefficient]]:
        return iter(self.coeffs.items())

    def __len__(self) -> int:
        return len(self.coeffs)

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    @property
    def degrees(self) -> list[int]:
        return list(self.coeffs.keys())

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    # ---------- linear structure ----------

    def __add__(self, other: "HyperElement") -> "HyperElement":
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out.get(n, 0) + c
        return HyperElement(out)

    def __neg__(self) -> "HyperElement":
        return HyperElement({n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other: "HyperElement") -> "HyperElement":
        return self + (-other)

    def scale(self, s: Coefficient) -> "HyperElement":
        return HyperElement({n: s * c for n, c in self.coeffs.items()})

    def __rmul__(self, s: Coefficient) -> "HyperElement":
        return self.scale(s)

    def to_float(self) -> "HyperElement":
        return HyperElement({n: complex(c) for n, c in self.coeffs.items()})

    def to_json(self) -> dict[str, str]:
        return {str(n): format_coefficient(c) for n, c in self.coeffs.items()}


# ---------------------------------------------------------------------------
# Basis products
# ---------------------------------------------------------------------------

def _h1_times(vec: dict[int, Any], r: Any) -> dict[int, Any]:
    """h_1 * sum_j c_j h_j using h_1 h_0 = h_1 and h_1 h_j = r h_{j-1} + (1-r) h_{j+1}."""
    out: dict[int, Any] = {}
    one_minus = 1 - r
    for j, c in vec.items():
        if j == 0:
            out[1] = out.get(1, 0) + c
            continue
        out[j - 1] = out.get(j - 1, 0) + r * c
        out[j + 1] = out.get(j + 1, 0) + one_minus * c
    return out


def mul_basis_recursive(m: int, n: int, r: Param | Fraction | float | str) -> HyperElement:
    """
    h_m * h_n by induction on min(m, n).

    Uses h_{k+1} h_n = (h_1 (h_k h_n) - r h_{k-1} h_n) / (1 - r), starting from
    h_0 h_n = h_n. This is the normative product; the closed form is checked
    against it.
    """
    m = check_degree(m, name="m")
    n = check_degree(n, name="n")
    p = Param.of(r)
    rv = p.r
    lo, hi = (m, n) if m <= n else (n, m)

    prev: dict[int, Any] = {}
    cur: dict[int, Any] = {hi: Fraction(1) if p.exact else 1.0}
    if lo == 0:
        return HyperElement(cur)
    inv = 1 / (1 - rv)
    for k in range(lo):
        nxt = _h1_times(cur, rv)
        if k >= 1:
            for d, c in prev.items():
                nxt[d] = nxt.get(d, 0) - rv * c
            nxt = {d: c * inv for d, c in nxt.items()}
        prev, cur = cur, nxt
    return HyperElement(cur)


def mul_basis_closed(m: int, n: int, r: Param | Fraction | float | str) -> HyperElement:
    """Closed-form expansion of h_m h_n for 1 <= m <= n and r not in {0, 1}."""
    m = check_degree(m, name="m")
    n = check_degree(n, name="n")
    if m > n:
        raise ArgumentOrderError(f"closed form needs m <= n, got m={m}, n={n}")
    if m < 1:
        raise DegreeError(f"closed form needs m >= 1, got m={m}")
    p = Param.of(r)
    rv = p.r
    if rv == 0:
        raise ParameterDomainError("closed form is undefined at r = 0; use the recursive product")

    one_minus = 1 - rv
    denom = one_minus ** (m - 1)
    out: dict[int, Any] = {n - m: rv ** m / denom}
    interior = 1 - 2 * rv
    for k in range(1, m):
        out[n - m + 2 * k] = rv ** (m - k) * one_minus ** (k - 1) * interior / denom
    out[n + m] = one_minus
    return HyperElement(out)


class ProductCache:
    """Bounded LRU of basis products keyed by (min, max, r). Safe to share across threads."""

    def __init__(self, maxsize: int = config.PRODUCT_CACHE_SIZE):
        self.maxsize = max(0, int(maxsize))
        self._data: OrderedDict[tuple[Any, ...], HyperElement] = OrderedDict()
        self._lock = Lock()

    @staticmethod
    def key(m: int, n: int, p: Param) -> tuple[Any, ...]:
        lo, hi = (m, n) if m <= n else (n, m)
        return (lo, hi, type(p.r).__name__, p.r)

    def get(self, key: tuple[Any, ...]) -> HyperElement | None:
        if self.maxsize == 0:
            return None
        with self._lock:
            hit = self._data.get(key)
            if hit is not None:
                self._data.move_to_end(key)
            return hit

    def put(self, key: tuple[Any, ...], value: HyperElement) -> None:
        if self.maxsize == 0:
            return
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._data)


PRODUCT_CACHE = ProductCache()


def mul_basis(
    m: int,
    n: int,
    r: Param | Fraction | float | str,
    *,
    cache: ProductCache | None = PRODUCT_CACHE,
    session: HGSession | None = None,
) -> HyperElement:
    m = check_degree(m, name="m")
    n = check_degree(n, name="n")
    p = Param.of(r)
    if max(m, n) > config.MAX_DEGREE:
        raise DegreeError(f"degree {max(m, n)} exceeds HG_MAX_DEGREE={config.MAX_DEGREE}")
    if cache is None:
        return mul_basis_recursive(m, n, p)

    s = session or default_session()
    key = ProductCache.key(m, n, p)
    hit = cache.get(key)
    if hit is not None:
        s.counters.inc("algebra.cache_hits")
        return hit
    s.counters.inc("algebra.cache_misses")
    s.emit_trace(Cat.CACHE, "product cache miss", key="CACHE.miss", m=m, n=n, r=p.label())
    value = mul_basis_recursive(m, n, p)
    cache.put(key, value)
    return value


def mul(
    a: HyperElement,
    b: HyperElement,
    r: Param | Fraction | float | str,
    *,
    session: HGSession | None = None,
) -> HyperElement:
    """Bilinear extension of the basis product."""
    p = Param.of(r)
    out: dict[int, Any] = {}
    for m, ca in a:
        for n, cb in b:
            for k, c in mul_basis(m, n, p, session=session):
                out[k] = out.get(k, 0) + ca * cb * c
    return HyperElement(out)


def norm_l1(a: HyperElement) -> Fraction | float:
    total: Any = 0
    for _, c in a:
        total += abs(c)
    return total


def involution(a: HyperElement) -> HyperElement:
    # h_n* = h_n, so * is coefficient-wise conjugation
    return HyperElement({n: c.conjugate() for n, c in a})
