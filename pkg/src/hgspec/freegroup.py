# src/hgspec/freegroup.py
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator
import math

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh

from .algebra import HyperElement, check_degree
from .errors import ParameterDomainError, ResourceBoundError
from .functionals import Lambda
from .instrumentation import Cat
from .session import HGSession, default_session
from .timing import phase_timer
from .. import config


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    """
    Reduced word in F_l. Letters are +-1..+-l; -k is the inverse of g_k.

    Construct through Word.of() (or multiplication) to get a reduced word.
    """
    letters: tuple[int, ...] = ()

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def of(cls, letters: Any) -> "Word":
        out: list[int] = []
        for x in letters:
            x = int(x)
            if x == 0:
                raise ParameterDomainError("letter 0 is not a generator")
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        a, b = self.letters, other.letters
        k = 0
        while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
            k += 1
        return Word(a[: len(a) - k] + b[k:])

    def __invert__(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def is_reduced(self) -> bool:
        return all(x != -y for x, y in zip(self.letters, self.letters[1:]))

    def rank(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"g{x}" if x > 0 else f"g{-x}^-1" for x in self.letters)


def _check_rank(l: int) -> int:
    if isinstance(l, bool) or not isinstance(l, int) or l < 2:
        raise ParameterDomainError(f"generator count l must be an integer >= 2, got {l!r}")
    return l


def _common_prefix(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def distance(g: Word, h: Word) -> int:
    """|g^-1 h| for reduced g, h."""
    return len(g) + len(h) - 2 * _common_prefix(g.letters, h.letters)


# ---------------------------------------------------------------------------
# Spheres
# ---------------------------------------------------------------------------

def sphere_size(l: int, n: int) -> int:
    """|G_n| = 2l(2l-1)^(n-1) for n >= 1, and 1 for n = 0."""
    l = _check_rank(l)
    n = check_degree(n)
    if n == 0:
        return 1
    return 2 * l * (2 * l - 1) ** (n - 1)


def ball_dimension(l: int, radius: int) -> int:
    return sum(sphere_size(l, k) for k in range(check_degree(radius, name="radius") + 1))


def kesten_halfwidth(l: int) -> float:
    """sqrt(2l-1)/l = 2 sqrt(r(1-r)) at r = 1/(2l)."""
    l = _check_rank(l)
    return math.sqrt(2 * l - 1) / l


def _letters(l: int) -> list[int]:
    return [x for k in range(1, l + 1) for x in (k, -k)]


def enumerate_sphere(l: int, n: int, *, session: HGSession | None = None) -> list[Word]:
    """All reduced words of length exactly n, in a fixed lexicographic order."""
    size = sphere_size(l, n)
    if size > config.MAX_SPHERE_SIZE:
        raise ResourceBoundError(
            f"|G_{n}| = {size} for l={l} exceeds HG_MAX_SPHERE_SIZE={config.MAX_SPHERE_SIZE}",
            requested=size,
            limit=config.MAX_SPHERE_SIZE,
        )
    s_ = session or default_session()
    alphabet = _letters(l)
    layer: list[tuple[int, ...]] = [()]
    for _ in range(n):
        layer = [w + (x,) for w in layer for x in alphabet if not w or w[-1] != -x]
    s_.counters.inc("freegroup.words_enumerated", len(layer))
    s_.emit_diag(Cat.FREEGROUP, "sphere enumerated", l=l, n=n, size=len(layer))
    return [Word(w) for w in layer]


def random_reduced_word(l: int, n: int, rng: np.random.Generator | None = None) -> Word:
    """Uniform sample from G_n: 2l choices for the first letter, 2l-1 after that."""
    l = _check_rank(l)
    n = check_degree(n)
    rng = rng if rng is not None else np.random.default_rng()
    alphabet = _letters(l)
    out: list[int] = []
    for _ in range(n):
        choices = [x for x in alphabet if not out or out[-1] != -x]
        out.append(choices[int(rng.integers(len(choices)))])
    return Word(tuple(out))


def representative(l: int, k: int) -> Word:
    """g_1^k, the fixed representative of G_k."""
    _check_rank(l)
    return Word((1,) * check_degree(k))


def sphere_count(l: int, m: int, n: int, w: Word, *, session: HGSession | None = None) -> int:
    """#{g in G_m : |g^-1 w| = n}."""
    return sum(1 for g in enumerate_sphere(l, m, session=session) if distance(g, w) == n)


def radial_convolve(m: int, n: int, l: int, *, session: HGSession | None = None) -> HyperElement:
    """
    h_m h_n in the radial algebra of F_l, by counting.

    c_k = |G_k| / (|G_m| |G_n|) * #{g in G_m : |g^-1 w| = n} for one w in G_k.
    The smaller sphere is enumerated (the product is commutative).
    """
    l = _check_rank(l)
    m = check_degree(m, name="m")
    n = check_degree(n, name="n")
    if m + n > config.MAX_CONVOLVE_DEGREE:
        raise ResourceBoundError(
            f"m+n = {m + n} exceeds HG_MAX_CONVOLVE_DEGREE={config.MAX_CONVOLVE_DEGREE}",
            requested=m + n,
            limit=config.MAX_CONVOLVE_DEGREE,
        )
    s_ = session or default_session()
    lo, hi = min(m, n), max(m, n)
    sphere = enumerate_sphere(l, lo, session=s_)
    denom = sphere_size(l, lo) * sphere_size(l, hi)
    coeffs: dict[int, Fraction] = {}
    for k in range(hi - lo, hi + lo + 1, 2):
        w = representative(l, k)
        count = sum(1 for g in sphere if distance(g, w) == hi)
        if count:
            coeffs[k] = Fraction(sphere_size(l, k) * count, denom)
    s_.emit_diag(Cat.FREEGROUP, "radial convolution", m=m, n=n, l=l, terms=len(coeffs))
    return HyperElement(coeffs)


# ---------------------------------------------------------------------------
# Haagerup Gram matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GramReport:
    lam: float
    l: int
    radius: int
    min_eigenvalue: float
    dimension: int
    residual: float
    method: str

    @property
    def psd_threshold(self) -> float:
        return -config.PSD_TOL * self.dimension

    @property
    def psd(self) -> bool:
        return self.min_eigenvalue >= self.psd_threshold

    @property
    def residual_ok(self) -> bool:
        return self.residual <= 1e-8

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": config.SCHEMA_TAG,
            "lambda": self.lam,
            "l": self.l,
            "radius": self.radius,
            "dimension": self.dimension,
            "min_eigenvalue": self.min_eigenvalue,
            "psd": self.psd,
            "psd_threshold": self.psd_threshold,
            "residual": self.residual,
            "method": self.method,
            "evidence": f"finite ball of radius {self.radius}",
        }


def _real_lambda(lam: Any) -> float:
    value = Lambda.of(lam)
    if not value.is_real:
        raise ParameterDomainError(f"Haagerup functions need real lambda, got {value.text}")
    return value.real_value


def ball_words(l: int, radius: int, *, session: HGSession | None = None) -> list[Word]:
    dim = ball_dimension(l, radius)
    if dim > config.MAX_BALL_DIM:
        raise ResourceBoundError(
            f"ball of radius {radius} in F_{l} has {dim} elements, over HG_MAX_BALL_DIM={config.MAX_BALL_DIM}",
            requested=dim,
            limit=config.MAX_BALL_DIM,
        )
    out: list[Word] = []
    for k in range(radius + 1):
        out.extend(enumerate_sphere(l, k, session=session))
    return out


def ball_distances(words: list[Word]) -> np.ndarray:
    """Matrix of |g_i^-1 g_j| over the ball."""
    dim = len(words)
    width = max((len(w) for w in words), default=0)
    packed = np.zeros((dim, max(width, 1)), dtype=np.int64)
    for i, w in enumerate(words):
        packed[i, : len(w)] = w.letters
    lengths = np.array([len(w) for w in words], dtype=np.int64)
    same = (packed[:, None, :] == packed[None, :, :]) & (packed[:, None, :] != 0)
    prefix = np.cumprod(same, axis=2).sum(axis=2)
    return lengths[:, None] + lengths[None, :] - 2 * prefix


def gram_matrix(lam: Any, l: int, radius: int, *, session: HGSession | None = None) -> np.ndarray:
    """[lambda^-|g^-1 h|] over the ball of the given radius."""
    value = _real_lambda(lam)
    if value == 0:
        raise ParameterDomainError("lambda must be nonzero")
    dist = ball_distances(ball_words(_check_rank(l), radius, session=session))
    return (1.0 / value) ** dist


def _min_eigenpair(a: np.ndarray) -> tuple[float, np.ndarray, str]:
    dim = a.shape[0]
    if dim <= config.DENSE_EIG_MAX_DIM:
        vals, vecs = eigh(a, subset_by_index=[0, 0])
        return float(vals[0]), vecs[:, 0], "dense"
    # shift below the Gershgorin lower bound so shift-invert converges to the smallest eigenvalue
    radii = np.sum(np.abs(a), axis=1) - np.abs(np.diag(a))
    lower = float(np.min(np.diag(a) - radii))
    shift = lower - 1e-3 * max(1.0, abs(lower))
    vals, vecs = eigsh(a, k=1, sigma=shift, which="LM")
    return float(vals[0]), vecs[:, 0], "shift-invert"


def haagerup_gram(lam: Any, l: int, radius: int, *, session: HGSession | None = None) -> GramReport:
    """Minimal eigenvalue of the Haagerup Gram matrix on a ball; PSD iff it is >= -PSD_TOL * dim."""
    s_ = session or default_session()
    value = _real_lambda(lam)
    l = _check_rank(l)
    radius = check_degree(radius, name="radius")
    with phase_timer(
        s_, "gram assembly", cat=Cat.GRAM, ctx={"l": l, "lam": value, "n": radius}, counters=("freegroup.words_enumerated",)
    ) as phase:
        a = gram_matrix(value, l, radius, session=s_)
        mu, v, method = _min_eigenpair(a)
        phase.note(dim=a.shape[0], method=method)
    residual = float(np.linalg.norm(a @ v - mu * v) / np.linalg.norm(v))
    report = GramReport(value, l, radius, mu, a.shape[0], residual, method)
    s_.counters.inc("gram.builds")
    s_.emit_signal(
        Cat.GRAM,
        "gram check",
        lam=value,
        l=l,
        n=radius,
        dim=report.dimension,
        min_eig=f"{mu:.6g}",
        psd=report.psd,
    )
    if not report.residual_ok:
        s_.emit_signal(Cat.GRAM, "eigenpair residual above 1e-8", level="warning", residual=f"{residual:.3g}")
    return report


def sign_twist_check(lam: Any, l: int, radius: int, *, session: HGSession | None = None) -> bool:
    """
    min eig of the Gram matrix at lambda equals the one at -lambda (within
    1e-9 * dim): the twist g -> (-1)^|g| g conjugates one into the other.
    """
    value = _real_lambda(lam)
    plus = haagerup_gram(value, l, radius, session=session)
    minus = haagerup_gram(-value, l, radius, session=session)
    return abs(plus.min_eigenvalue - minus.min_eigenvalue) <= 1e-9 * plus.dimension
