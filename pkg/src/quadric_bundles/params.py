"""Exact parameter-space engine for the stability parameter alpha.

All values are :class:`fractions.Fraction`; no floating point is used.
For fixed discrete data ``(g, n, d, d_L)`` this module computes the
window ``[alpha_m, alpha_M]`` that contains every critical value, the
complete candidate wall set inside it, and the chambers between walls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import InfeasibleParams, InvalidGenus, QuadricBundleError, RankOutOfRange

Rational = Fraction
RationalLike = Union[int, Fraction, str]

#: Provenance kinds of a critical value, one per equality type of the
#: semistability inequalities.
TOP = "Top"
SUB_A = "SubCaseA"
SUB_B = "SubCaseB"
SUB_C = "SubCaseC"
FILTRATION = "Filtration"

_KIND_ORDER = {TOP: 0, SUB_A: 1, SUB_B: 2, SUB_C: 3, FILTRATION: 4}


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"-3/2"`` to a Fraction.

    Floats are refused: walls sit at rationals and must compare exactly.
    """
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}; pass an int, Fraction or string")
    return Fraction(x)


@dataclass(frozen=True)
class ModuliParams:
    """Discrete data ``(g, n, d, d_L)`` of a moduli problem of L-quadric bundles."""

    rank: int
    degree: int
    twist_degree: int
    genus: int = 2

    def __post_init__(self) -> None:
        if self.genus < 2:
            raise InvalidGenus(f"genus must be >= 2, got {self.genus}")
        if self.rank < 1:
            raise QuadricBundleError(f"rank must be >= 1, got {self.rank}")

    @property
    def feasible(self) -> bool:
        """``d <= n*d_L/2``, the degree bound for non-empty moduli."""
        return 2 * self.degree <= self.rank * self.twist_degree

    def require_feasible(self) -> None:
        if not self.feasible:
            raise InfeasibleParams(
                f"degree {self.degree} exceeds n*d_L/2 = "
                f"{Fraction(self.rank * self.twist_degree, 2)}"
            )


@dataclass(frozen=True, order=True)
class Provenance:
    """Which equality type produces a wall.

    ``n1, d1`` are the rank and degree of the subobject (or of the first
    filtration step); ``n2, d2`` the second filtration step.  For
    filtration walls only ``d1 + d2`` is determined by the wall, so the
    split is the proportional one ``d1 = floor((d1+d2) n1 / (n1+n2))``.
    """

    kind: str
    n1: int = 0
    d1: int = 0
    n2: int = 0
    d2: int = 0

    def value(self, params: ModuliParams) -> Fraction:
        n, d = params.rank, params.degree
        if self.kind == TOP:
            return Fraction(d, n)
        if self.kind == SUB_A:
            return Fraction(d - self.d1, n - self.n1)
        if self.kind == SUB_B:
            return Fraction(d - 2 * self.d1, n - 2 * self.n1)
        if self.kind == SUB_C:
            return Fraction(self.d1, self.n1)
        if self.kind == FILTRATION:
            return Fraction(d - self.d1 - self.d2, n - self.n1 - self.n2)
        raise ValueError(f"unknown provenance kind {self.kind!r}")

    def sort_key(self) -> tuple:
        return (_KIND_ORDER[self.kind], self.n1, self.d1, self.n2, self.d2)

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind != TOP:
            out.update(n1=self.n1, d1=self.d1)
        if self.kind == FILTRATION:
            out.update(n2=self.n2, d2=self.d2)
        return out


@dataclass(frozen=True)
class CriticalValue:
    value: Fraction
    provenance: tuple[Provenance, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class Chamber:
    """Open interval ``(lower, upper)``; ``lower is None`` means minus infinity."""

    lower: Optional[Fraction]
    upper: Fraction
    note: str = ""

    @property
    def kind(self) -> str:
        return "tail" if self.lower is None else "open"

    def __contains__(self, alpha: RationalLike) -> bool:
        a = as_rational(alpha)
        return (self.lower is None or self.lower < a) and a < self.upper

    def samples(self) -> tuple[Fraction, Fraction, Fraction]:
        """Three interior points at 1/4, 1/2, 3/4 of the chamber.

        The unbounded tail is sampled on ``(upper - 1, upper)``.
        """
        lo = self.upper - 1 if self.lower is None else self.lower
        width = self.upper - lo
        return tuple(lo + width * Fraction(k, 4) for k in (1, 2, 3))


def alpha_extremes(params: ModuliParams) -> tuple[Fraction, Fraction]:
    """Return ``(alpha_m, alpha_M) = (d - (n-1) d_L / 2, d / n)``."""
    n, d, dl = params.rank, params.degree, params.twist_degree
    return Fraction(2 * d - (n - 1) * dl, 2), Fraction(d, n)


def _int_range(lo: Fraction, hi: Fraction) -> range:
    return range(math.ceil(lo), math.floor(hi) + 1)


def _solve_linear(numer_base: int, coef: int, denom: int, lo: Fraction, hi: Fraction) -> range:
    """Integers x with ``lo <= (numer_base - coef*x) / denom <= hi`` (coef > 0, denom != 0)."""
    # value v = (b - c x)/k  <=>  x = (b - k v)/c, monotone in v
    ends = sorted(((numer_base - denom * lo) / coef, (numer_base - denom * hi) / coef))
    return _int_range(ends[0], ends[1])


def _iter_candidates(params: ModuliParams, lo: Fraction, hi: Fraction) -> Iterator[Provenance]:
    n, d = params.rank, params.degree
    yield Provenance(TOP)
    for n1 in range(1, n):
        for d1 in _solve_linear(d, 1, n - n1, lo, hi):
            yield Provenance(SUB_A, n1, d1)
        if n != 2 * n1:
            for d1 in _solve_linear(d, 2, n - 2 * n1, lo, hi):
                yield Provenance(SUB_B, n1, d1)
        for d1 in _int_range(n1 * lo, n1 * hi):
            yield Provenance(SUB_C, n1, d1)
    for n1 in range(1, n):
        for n2 in range(n1 + 1, n):
            if n1 + n2 == n:
                continue
            for total in _solve_linear(d, 1, n - n1 - n2, lo, hi):
                d1 = (total * n1) // (n1 + n2)
                yield Provenance(FILTRATION, n1, d1, n2, total - d1)


def enumerate_critical_values(params: ModuliParams) -> list[CriticalValue]:
    """Every candidate wall in ``[alpha_m, alpha_M]``, sorted ascending.

    This is a superset of the realised critical values: each value has
    one of the five equality forms and lies in the window, which are
    necessary conditions.  Values are deduplicated with every witness
    retained.
    """
    params.require_feasible()
    lo, hi = alpha_extremes(params)
    found: dict[Fraction, set[Provenance]] = {}
    for prov in _iter_candidates(params, lo, hi):
        v = prov.value(params)
        if lo <= v <= hi:
            found.setdefault(v, set()).add(prov)
    return [
        CriticalValue(v, tuple(sorted(found[v], key=Provenance.sort_key)))
        for v in sorted(found)
    ]


def critical_values(params: ModuliParams) -> list[Fraction]:
    return [cv.value for cv in enumerate_critical_values(params)]


TAIL_NOTE = "below alpha_m there are no critical values, so all moduli spaces here are isomorphic"


def chambers(params: ModuliParams) -> list[Chamber]:
    """Tail ``(-inf, w_0)`` followed by the open intervals between consecutive walls."""
    walls = critical_values(params)
    out = [Chamber(None, walls[0], TAIL_NOTE)]
    out.extend(Chamber(a, b) for a, b in zip(walls, walls[1:]))
    return out


def degree_window(n: int, d_L: int, alpha: RationalLike, r: int) -> tuple[Fraction, Fraction]:
    """Closed interval ``[n*alpha, r*d_L/2 + (n-r)*alpha]`` of degrees allowed when rk(gamma) = r.

    The interval is empty (lower > upper) whenever ``alpha > d_L/2`` and r > 0.
    """
    if not 0 <= r <= n:
        raise RankOutOfRange(f"rank of gamma must lie in 0..{n}, got {r}")
    a = as_rational(alpha)
    return n * a, Fraction(r * d_L, 2) + (n - r) * a


def minimum_gamma_rank(params: ModuliParams, alpha: RationalLike) -> int:
    """Largest ``r`` with ``r*d_L/2 + (n-r)*alpha <= d``: a lower bound for rk(gamma)."""
    a = as_rational(alpha)
    n, d, dl = params.rank, params.degree, params.twist_degree
    if not (2 * a <= dl and n * a <= d and 2 * d <= n * dl):
        raise InfeasibleParams(
            f"need alpha <= d_L/2 and n*alpha <= d <= n*d_L/2 (alpha={a}, n={n}, d={d}, d_L={dl})"
        )
    return max(r for r in range(n + 1) if degree_window(n, dl, a, r)[1] <= d)
