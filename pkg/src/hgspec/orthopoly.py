# src/hgspec/orthopoly.py
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from threading import Lock
from typing import Any
import cmath
import numbers

import numpy as np

from .algebra import check_degree
from .errors import ParameterDomainError, SingularityError
from .instrumentation import Cat
from .params import Param
from .session import HGSession, default_session
from .. import config

BOUNDED_ULPS = 16
_EPS = float(np.finfo(float).eps)


def _is_exact(t: Any) -> bool:
    return isinstance(t, (Fraction, numbers.Integral)) and not isinstance(t, bool)


# ---------------------------------------------------------------------------
# Coefficient rows
# ---------------------------------------------------------------------------

class PolySeq:
    """
    Monomial coefficient rows of P_0, P_1, ... for one r.

    Rows are appended on demand and never rewritten, so a PolySeq can be
    shared between threads.
    """

    def __init__(self, r: Param | Fraction | float | str):
        self.r = Param.of(r)
        one = Fraction(1) if self.r.exact else 1.0
        zero = one - one
        self._rows: list[list[Any]] = [[one], [zero, one]]
        self._lock = Lock()

    def row(self, n: int) -> list[Any]:
        n = check_degree(n)
        if n < len(self._rows):
            return list(self._rows[n])
        with self._lock:
            rv = self.r.r
            inv = 1 / (1 - rv)
            while len(self._rows) <= n:
                prev, cur = self._rows[-2], self._rows[-1]
                # P_{k+1} = (t P_k - r P_{k-1}) / (1 - r)
                nxt = [0 * cur[0]] + list(cur)
                for i, c in enumerate(prev):
                    nxt[i] = nxt[i] - rv * c
                self._rows.append([c * inv for c in nxt])
            return list(self._rows[n])

    def __len__(self) -> int:
        return len(self._rows)


_POLY_SEQS: dict[tuple[str, Any], PolySeq] = {}
_POLY_SEQS_LOCK = Lock()


def poly_seq(r: Param | Fraction | float | str) -> PolySeq:
    p = Param.of(r)
    key = (type(p.r).__name__, p.r)
    with _POLY_SEQS_LOCK:
        seq = _POLY_SEQS.get(key)
        if seq is None:
            seq = PolySeq(p)
            _POLY_SEQS[key] = seq
        return seq


def coeffs_P(n: int, r: Param | Fraction | float | str) -> list[Any]:
    return poly_seq(r).row(n)


def eval_coeffs(coeffs: list[Any], t: Any) -> Any:
    """Horner evaluation of a monomial coefficient vector."""
    acc: Any = 0 * t
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_P(n: int, t: Any, r: Param | Fraction | float | str) -> Any:
    """
    P_n(t) by the forward recurrence t P_n = r P_{n-1} + (1-r) P_{n+1}.

    Exact when both t and r are rational; t may also be a complex scalar or a
    numpy array (the recurrence is applied elementwise).
    """
    n = check_degree(n)
    p = Param.of(r)
    exact = p.exact and _is_exact(t)
    if isinstance(t, np.ndarray):
        t = t.astype(np.complex128 if np.iscomplexobj(t) else np.float64)
    rv = p.r if exact else float(p.r)
    if exact:
        t = Fraction(t)

    p_prev = t * 0 + 1
    if n == 0:
        return p_prev
    cur = t
    inv = 1 / (1 - rv)
    for _ in range(1, n):
        p_prev, cur = cur, (t * cur - rv * p_prev) * inv
    return cur


def gen_fun(z: complex, t: complex, r: Param | Fraction | float | str) -> complex:
    """P(z, t) = (1 - r - r z t) / (1 - r - z t + r z^2)."""
    p = Param.of(r)
    exact = p.exact and _is_exact(z) and _is_exact(t)
    rv = p.r if exact else float(p.r)
    den = 1 - rv - z * t + rv * z * z
    scale = 1 + abs(z * t) + abs(rv * z * z)
    if den == 0 or (not exact and abs(den) <= 4 * _EPS * scale):
        raise SingularityError(
            f"generating function has a pole at z={z}, t={t}",
            z=z,
            t=t,
        )
    return (1 - rv - rv * z * t) / den


def gen_fun_partial_sum(z: complex, t: complex, r: Param | Fraction | float | str, terms: int) -> complex:
    """sum_{n < terms} z^n P_n(t), the series the closed form must match inside its disc."""
    rv = Param.of(r).as_float()
    if terms <= 0:
        return 0j
    total = 1 + 0j
    zn = complex(z)
    p_prev, cur = 1 + 0j, complex(t)
    for _ in range(1, terms):
        total += zn * cur
        zn *= z
        p_prev, cur = cur, (t * cur - rv * p_prev) / (1 - rv)
    return total


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaPair:
    gamma_plus: complex
    gamma_minus: complex
    degenerate: bool

    def to_json(self) -> dict[str, Any]:
        return {
            "gamma_plus": [self.gamma_plus.real, self.gamma_plus.imag],
            "gamma_minus": [self.gamma_minus.real, self.gamma_minus.imag],
            "degenerate": self.degenerate,
        }


def gamma_pair(c: complex, r: Param | Fraction | float | str) -> GammaPair:
    """Roots of (1-r) g^2 - c g + r = 0."""
    p = Param.of(r)
    rf = p.as_float()
    c = complex(c)
    disc = c * c - 4.0 * rf * (1.0 - rf)
    denom = 2.0 * (1.0 - rf)
    if abs(disc) <= config.DEGENERATE_TOL * max(1.0, abs(c) ** 2):
        g = c / denom
        return GammaPair(g, g, True)
    root = cmath.sqrt(disc)
    return GammaPair((c + root) / denom, (c - root) / denom, False)


def point_functional(
    c: complex,
    n: int,
    r: Param | Fraction | float | str,
    *,
    session: HGSession | None = None,
) -> complex:
    """
    phi(h_n) for the character with phi(h_1) = c, from the closed form
    alpha g+^n + beta g-^n (or (1 + (1-2r) n) g^n at a double root).
    """
    n = check_degree(n)
    p = Param.of(r)
    c = complex(c)
    gp = gamma_pair(c, p)
    if gp.degenerate:
        g = gp.gamma_plus
        if g == 0:
            # r = 0 and c = 0: phi = delta at 0
            return 1 + 0j if n == 0 else 0j
        s = session or default_session()
        s.emit_trace(Cat.POLY, "double root branch", key="POLY.degenerate", n=n, r=p.label())
        b = 1.0 - 2.0 * p.as_float()
        return (1.0 + b * n) * g ** n
    gpl, gmi = gp.gamma_plus, gp.gamma_minus
    spread = gpl - gmi
    alpha = (c - gmi) / spread
    beta = (gpl - c) / spread
    return alpha * gpl ** n + beta * gmi ** n


def is_bounded_char(c: complex, r: Param | Fraction | float | str) -> bool:
    """True iff both |gamma_+| and |gamma_-| are at most 1."""
    p = Param.of(r)
    if not (0 < p.r <= Fraction(1, 2)):
        raise ParameterDomainError(f"is_bounded_char needs r in (0, 1/2], got r={p.r}")
    if _is_exact(c) or isinstance(c, float):
        # real c: the larger root has modulus <= 1 exactly when |c| <= 1
        return abs(c) <= 1
    c = complex(c)
    if c.imag == 0:
        return abs(c.real) <= 1
    gp = gamma_pair(c, p)
    lim = 1.0 + BOUNDED_ULPS * _EPS * max(1.0, abs(c))
    return abs(gp.gamma_plus) <= lim and abs(gp.gamma_minus) <= lim
