"""Split quadric bundles with a generic symmetric support pattern.

``V = L_1 + ... + L_n`` is given by the degrees ``a_i = deg L_i`` and
``gamma`` only by which entries ``gamma_ij in H^0(L_i^* L_j^* L)`` are
nonzero.  Semistability is decided by finite enumeration over

* coordinate subbundles ``V' = sum_{i in I} L_i``,
* coordinate filtrations ``V' < V'' < V``,
* the saturated kernel of the generic gamma, when it is not coordinate.

Indices are 0-based throughout the Python API.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from . import generic
from .errors import BundleSpecError, InvalidBundle, InvalidGenus
from .generic import Pattern, as_pattern
from .params import ModuliParams, RationalLike, as_rational

CASE_A, CASE_B, CASE_C = "CaseA", "CaseB", "CaseC"

CLAUSE_A, CLAUSE_B, CLAUSE_C, CLAUSE_FILTRATION = "1a", "1b", "1c", "2"
CLAUSE_SLOPE = "alpha<=d/n"
_CLAUSE_OF_CASE = {CASE_A: CLAUSE_A, CASE_B: CLAUSE_B, CASE_C: CLAUSE_C}

STABLE = "Stable"
POLYSTABLE = "Polystable"
STRICTLY_SEMISTABLE = "StrictlySemistable"
UNSTABLE = "Unstable"
VERDICTS = (STABLE, POLYSTABLE, STRICTLY_SEMISTABLE, UNSTABLE)


@dataclass(frozen=True)
class PatternQuadricBundle:
    degrees: tuple[int, ...]
    pattern: Pattern
    twist_degree: int
    genus: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", tuple(int(a) for a in self.degrees))
        object.__setattr__(self, "pattern", as_pattern(self.pattern))
        n = len(self.degrees)
        if self.genus < 2:
            raise InvalidGenus(f"genus must be >= 2, got {self.genus}")
        if n == 0:
            raise InvalidBundle("need at least one summand")
        if len(self.pattern) != n or any(len(row) != n for row in self.pattern):
            raise InvalidBundle(f"pattern must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                if self.pattern[i][j] != self.pattern[j][i]:
                    raise InvalidBundle(f"pattern is not symmetric at ({i + 1},{j + 1})")
        for i in range(n):
            for j in range(i, n):
                if self.pattern[i][j] and self.twist_degree - self.degrees[i] - self.degrees[j] < 0:
                    raise InvalidBundle(
                        f"entry ({i + 1},{j + 1}) is a section of a line bundle of degree "
                        f"{self.twist_degree - self.degrees[i] - self.degrees[j]} < 0"
                    )
        if not any(any(row) for row in self.pattern):
            raise InvalidBundle("gamma must be nonzero: pattern has no generic entry")

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    @property
    def params(self) -> ModuliParams:
        return ModuliParams(self.rank, self.degree, self.twist_degree, self.genus)

    def block_nonzero(self, rows: Iterable[int], cols: Iterable[int]) -> bool:
        cols = tuple(cols)
        return any(self.pattern[i][j] for i in rows for j in cols)

    def subdegree(self, subset: Iterable[int]) -> int:
        return sum(self.degrees[i] for i in subset)

    def complement(self, subset: Iterable[int]) -> tuple[int, ...]:
        s = set(subset)
        return tuple(i for i in range(self.rank) if i not in s)


@dataclass(frozen=True)
class Subobject:
    """A destabilising candidate.

    ``kind`` is ``"subbundle"`` (``members`` = I), ``"filtration"``
    (``members`` = I, ``outer`` = I'') or ``"kernel"`` (the saturated
    kernel of gamma; ``members`` holds the independent rows used to
    compute it and ``rank``/``degree`` are stored explicitly).
    """

    kind: str
    members: tuple[int, ...]
    outer: Optional[tuple[int, ...]] = None
    rank: int = 0
    degree: int = 0

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "rank": self.rank, "degree": self.degree}
        if self.kind == "kernel":
            out["rows"] = [i + 1 for i in self.members]
        else:
            out["subset"] = [i + 1 for i in self.members]
        if self.outer is not None:
            out["outer"] = [i + 1 for i in self.outer]
        return out


@dataclass(frozen=True)
class Witness:
    subobject: Optional[Subobject]
    clause: str
    slack: Fraction
    decomposable: bool = False


@dataclass(frozen=True)
class StabilityVerdict:
    cls: str
    witnesses: tuple[Witness, ...] = field(default_factory=tuple)
    alpha_independent: bool = False
    alpha_above_slope: bool = False

    @property
    def semistable(self) -> bool:
        return self.cls != UNSTABLE


def subobject_class(bundle: PatternQuadricBundle, subset: Iterable[int]) -> str:
    """Which semistability clause governs the coordinate subbundle on ``subset``.

    CaseA: the I x I block has a generic entry (V' not isotropic).
    CaseC: every row in I vanishes (gamma(V') = 0).
    CaseB: otherwise (V' isotropic but gamma(V') != 0).
    """
    idx = tuple(subset)
    if not idx or len(set(idx)) == bundle.rank:
        raise InvalidBundle("subset must be nonempty and proper")
    if bundle.block_nonzero(idx, idx):
        return CASE_A
    if not bundle.block_nonzero(idx, range(bundle.rank)):
        return CASE_C
    return CASE_B


def proper_subsets(n: int) -> Iterator[tuple[int, ...]]:
    for k in range(1, n):
        yield from itertools.combinations(range(n), k)


def coordinate_filtrations(bundle: PatternQuadricBundle) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs I < I'' < {all} with gamma(V') in V''^perp L and gamma(V'') not in V''^perp L."""
    n = bundle.rank
    for inner in proper_subsets(n):
        rest = bundle.complement(inner)
        for k in range(1, len(rest)):
            for extra in itertools.combinations(rest, k):
                outer = tuple(sorted(inner + extra))
                if not bundle.block_nonzero(inner, outer) and bundle.block_nonzero(outer, outer):
                    yield inner, outer


def _slack(clause: str, deg: int, rk: int, d: int, n: int, alpha: Fraction) -> Fraction:
    if clause == CLAUSE_A or clause == CLAUSE_FILTRATION:
        return d + alpha * (rk - n) - deg
    if clause == CLAUSE_B:
        return Fraction(d, 2) + alpha * (rk - Fraction(n, 2)) - deg
    if clause == CLAUSE_C:
        return alpha * rk - deg
    raise ValueError(clause)


def _decomposes(bundle: PatternQuadricBundle, clause: str, sub: Subobject) -> bool:
    """Does gamma take the split block shape demanded at equality for this clause?"""
    if sub.kind == "kernel":
        return False
    if clause == CLAUSE_FILTRATION:
        inner, outer = sub.members, sub.outer
        middle = tuple(i for i in outer if i not in inner)
        rest = bundle.complement(outer)
        return not bundle.block_nonzero(middle, rest) and not bundle.block_nonzero(rest, rest)
    idx = sub.members
    rest = bundle.complement(idx)
    if clause == CLAUSE_A:
        return not bundle.block_nonzero(idx, rest) and not bundle.block_nonzero(rest, rest)
    if clause == CLAUSE_B:
        return not bundle.block_nonzero(rest, rest) and bundle.block_nonzero(idx, rest)
    return bundle.block_nonzero(rest, rest)


def kernel_subobject(bundle: PatternQuadricBundle, seed: int = generic.DEFAULT_SEED) -> Optional[Subobject]:
    """The saturated kernel of the generic gamma when it is not already a coordinate subbundle."""
    prof = generic.kernel_profile(bundle.pattern, seed)
    if prof is None or prof.coordinate:
        return None
    return Subobject("kernel", prof.rows, None, prof.rank, prof.degree(bundle.degrees, bundle.twist_degree))


def candidate_subobjects(bundle: PatternQuadricBundle, seed: int = generic.DEFAULT_SEED) -> list[tuple[Subobject, str]]:
    """Every subobject the classifier tests, with the clause that applies to it."""
    out = []
    for idx in proper_subsets(bundle.rank):
        sub = Subobject("subbundle", idx, None, len(idx), bundle.subdegree(idx))
        out.append((sub, _CLAUSE_OF_CASE[subobject_class(bundle, idx)]))
    for inner, outer in coordinate_filtrations(bundle):
        sub = Subobject(
            "filtration", inner, outer, len(inner) + len(outer), bundle.subdegree(inner) + bundle.subdegree(outer)
        )
        out.append((sub, CLAUSE_FILTRATION))
    ker = kernel_subobject(bundle, seed)
    if ker is not None:
        out.append((ker, CLAUSE_C))
    return out


def classify(bundle: PatternQuadricBundle, alpha: RationalLike, seed: int = generic.DEFAULT_SEED) -> StabilityVerdict:
    """alpha-(semi/poly)stability of the generic bundle with this pattern.

    Witnesses are every tested subobject whose slack is <= 0.  Over the
    coordinate model this is a necessary condition for semistability of the
    generic split quadric bundle; it is not claimed to be sufficient.
    """
    a = as_rational(alpha)
    n, d = bundle.rank, bundle.degree
    indep = is_alpha_independent(bundle)
    if a > Fraction(d, n):
        w = Witness(None, CLAUSE_SLOPE, Fraction(d, n) - a)
        return StabilityVerdict(UNSTABLE, (w,), indep, True)
    witnesses = []
    for sub, clause in candidate_subobjects(bundle, seed):
        s = _slack(clause, sub.degree, sub.rank, d, n, a)
        if s <= 0:
            witnesses.append(Witness(sub, clause, s, s == 0 and _decomposes(bundle, clause, sub)))
    if any(w.slack < 0 for w in witnesses):
        cls = UNSTABLE
        witnesses = [w for w in witnesses if w.slack < 0]
    elif not witnesses:
        cls = STABLE
    elif all(w.decomposable for w in witnesses):
        cls = POLYSTABLE
    else:
        cls = STRICTLY_SEMISTABLE
    return StabilityVerdict(cls, tuple(witnesses), indep, False)


def is_alpha_independent(bundle: PatternQuadricBundle) -> bool:
    """Strictly semistable at every alpha for a structural reason.

    Either an isotropic coordinate subbundle of rank n/2 and degree d/2, or
    a coordinate filtration of the clause-2 type with total rank n and
    total degree d.
    """
    n, d = bundle.rank, bundle.degree
    if n % 2 == 0 and d % 2 == 0:
        for idx in itertools.combinations(range(n), n // 2):
            if 2 * bundle.subdegree(idx) == d and not bundle.block_nonzero(idx, idx):
                return True
    for inner, outer in coordinate_filtrations(bundle):
        if len(inner) + len(outer) == n and bundle.subdegree(inner) + bundle.subdegree(outer) == d:
            return True
    return False


def generic_rank(bundle: PatternQuadricBundle, seed: int = generic.DEFAULT_SEED, trials: int = generic.DEFAULT_TRIALS) -> int:
    return generic.generic_rank(bundle.pattern, seed, trials)


def underlying_bundle_semistable(bundle: PatternQuadricBundle | Sequence[int]) -> bool:
    """Slope semistability of ``V = sum L_i``: the top-k degrees never beat k*d/n."""
    degrees = bundle.degrees if isinstance(bundle, PatternQuadricBundle) else tuple(bundle)
    n, d = len(degrees), sum(degrees)
    top = sorted(degrees, reverse=True)
    return all(n * sum(top[:k]) <= k * d for k in range(1, n))


# ---------------------------------------------------------------- text format

_SYMBOLS = {"*": True, "0": False}


def parse_bundle_spec(text: str) -> PatternQuadricBundle:
    """Parse the bundle-spec text format.

    ::

        # comment
        genus 2
        dL 3
        degrees 1 0
        * *
        * *
    """
    fields: dict[str, object] = {}
    rows: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        key = head.lower()
        try:
            if key == "genus":
                fields["genus"] = int(rest)
            elif key in ("dl", "twist_degree"):
                fields["twist_degree"] = int(rest)
            elif key == "degrees":
                fields["degrees"] = [int(t) for t in re.split(r"[\s,]+", rest.strip()) if t]
            else:
                toks = line.split()
                if any(t not in _SYMBOLS for t in toks):
                    raise BundleSpecError(f"line {lineno}: unexpected {line!r}")
                rows.append(toks)
        except ValueError as exc:
            if isinstance(exc, BundleSpecError):
                raise
            raise BundleSpecError(f"line {lineno}: {exc}") from None
    for key in ("genus", "twist_degree", "degrees"):
        if key not in fields:
            raise BundleSpecError(f"missing field {key!r}")
    degrees = fields["degrees"]
    n = len(degrees)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise BundleSpecError(f"pattern must have {n} rows of {n} symbols")
    pattern = tuple(tuple(_SYMBOLS[t] for t in row) for row in rows)
    return PatternQuadricBundle(tuple(degrees), pattern, fields["twist_degree"], fields["genus"])


def format_bundle_spec(bundle: PatternQuadricBundle) -> str:
    lines = [
        f"genus {bundle.genus}",
        f"dL {bundle.twist_degree}",
        "degrees " + " ".join(map(str, bundle.degrees)),
    ]
    lines += [" ".join("*" if x else "0" for x in row) for row in bundle.pattern]
    return "\n".join(lines) + "\n"
