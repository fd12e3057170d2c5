"""Generic behaviour of a symmetric map with prescribed zero pattern.

A pattern is a symmetric boolean matrix; ``True`` marks an entry that is
a section in general position.  Two questions are answered here:

* the generic rank, by random instantiation over GF(p), p = 2^31 - 1;
* the degree of the saturated kernel of a generic gamma, which needs the
  common factor of the maximal minors of a set of independent rows.  That
  factor is computed once per pattern with sympy and then evaluated as a
  linear form in the line-bundle degrees.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
import sympy

from . import _kernels

Pattern = tuple[tuple[bool, ...], ...]

DEFAULT_SEED = 0
DEFAULT_TRIALS = 8


def as_pattern(rows: Sequence[Sequence[object]]) -> Pattern:
    return tuple(tuple(bool(x) for x in row) for row in rows)


def pattern_bits(pattern: Pattern) -> list[int]:
    """Upper-triangle entries as 0/1, row by row; a stable fingerprint for seeding."""
    n = len(pattern)
    return [int(pattern[i][j]) for i in range(n) for j in range(i, n)]


def _rng(pattern: Pattern, seed: int) -> np.random.Generator:
    n = len(pattern)
    return np.random.default_rng(np.random.SeedSequence([seed, n, *pattern_bits(pattern)]))


def instantiate(pattern: Pattern, rng: np.random.Generator, p: int = _kernels.PRIME) -> np.ndarray:
    """Random symmetric integer matrix supported on the pattern, entries uniform in [0, p)."""
    n = len(pattern)
    mask = np.array(pattern, dtype=bool)
    upper = np.triu(rng.integers(0, p, size=(n, n), dtype=np.int64))
    full = upper + np.triu(upper, 1).T
    return np.where(mask, full, 0)


@lru_cache(maxsize=None)
def _best_instance(pattern: Pattern, seed: int, trials: int) -> tuple[int, tuple[tuple[int, ...], ...]]:
    rng = _rng(pattern, seed)
    best_rank, best = -1, None
    for _ in range(trials):
        m = instantiate(pattern, rng)
        r = _kernels.rank_mod_p(m)
        if r > best_rank:
            best_rank, best = r, m
        if best_rank == len(pattern):
            break
    return best_rank, tuple(map(tuple, best.tolist()))


def generic_rank(pattern: Pattern, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> int:
    """Maximal rank of a symmetric matrix supported on ``pattern``.

    Each trial errs only if a nonzero polynomial of degree <= n vanishes at
    a uniform point of GF(p)^k, probability <= n/p; the maximum over
    ``trials`` draws is therefore wrong with probability far below 2^-20.
    """
    return _best_instance(as_pattern(pattern), seed, trials)[0]


def independent_rows(pattern: Pattern, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> tuple[int, ...]:
    """Lexicographically first set of rows spanning the generic row space."""
    rank, inst = _best_instance(as_pattern(pattern), seed, trials)
    m = np.array(inst, dtype=np.int64)
    rows: list[int] = []
    for i in range(len(inst)):
        if len(rows) == rank:
            break
        if _kernels.rank_mod_p(m[rows + [i]]) == len(rows) + 1:
            rows.append(i)
    return tuple(rows)


def symbolic_matrix(pattern: Pattern) -> tuple[sympy.Matrix, dict[sympy.Symbol, tuple[int, int]]]:
    """Symmetric sympy matrix with one symbol ``g_i_j`` (i <= j) per generic entry."""
    n = len(pattern)
    index: dict[sympy.Symbol, tuple[int, int]] = {}
    m = sympy.zeros(n, n)
    for i in range(n):
        for j in range(i, n):
            if pattern[i][j]:
                s = sympy.Symbol(f"g_{i}_{j}")
                index[s] = (i, j)
                m[i, j] = m[j, i] = s
    return m, index


@dataclass(frozen=True)
class KernelProfile:
    """Saturated kernel of a generic gamma of rank r < n.

    ``degree(a, d_L) = sum_i coeffs[i]*a[i] + dl_coeff*d_L``.  ``coordinate``
    is set when the kernel is spanned by zero rows of the pattern and is
    therefore already one of the coordinate subbundles.
    """

    rank: int
    rows: tuple[int, ...]
    coeffs: tuple[int, ...]
    dl_coeff: int
    coordinate: bool

    def degree(self, degrees: Sequence[int], twist_degree: int) -> int:
        return sum(c * a for c, a in zip(self.coeffs, degrees)) + self.dl_coeff * twist_degree


def _multidegree(poly: sympy.Expr, index: dict[sympy.Symbol, tuple[int, int]], n: int) -> tuple[int, list[int]]:
    """(number of variables, row-index multiplicities) of one monomial of ``poly``.

    Minors are homogeneous for the grading deg g_i_j = e_i + e_j, hence so
    is any common factor, and one monomial determines the multidegree.
    """
    gens = list(index)
    if not gens or poly.is_number:
        return 0, [0] * n
    exps = sympy.Poly(poly, *gens).monoms()[0]
    k, mult = 0, [0] * n
    for s, e in zip(gens, exps):
        i, j = index[s]
        k += e
        mult[i] += e
        mult[j] += e
    return k, mult


@lru_cache(maxsize=None)
def _kernel_profile(pattern: Pattern, seed: int, trials: int) -> Optional[KernelProfile]:
    n = len(pattern)
    r = generic_rank(pattern, seed, trials)
    if r == n or r == 0:
        return None
    rows = independent_rows(pattern, seed, trials)
    m, index = symbolic_matrix(pattern)
    minors = []
    for cols in itertools.combinations(range(n), r):
        det = sympy.expand(m.extract(list(rows), list(cols)).det())
        if det != 0:
            minors.append(det)
    common = sympy.gcd_list(minors) if len(minors) > 1 else minors[0]
    k, mult = _multidegree(common, index, n)
    # deg N = d - sum_{i in R}(d_L - a_i) + k*d_L - sum_i mult_i*a_i
    coeffs = tuple(1 + (i in rows) - mult[i] for i in range(n))
    zero_rows = sum(1 for row in pattern if not any(row))
    return KernelProfile(n - r, rows, coeffs, k - r, zero_rows == n - r)


def kernel_profile(pattern: Pattern, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> Optional[KernelProfile]:
    """Kernel data of the generic gamma, or None when gamma is generically injective."""
    return _kernel_profile(as_pattern(pattern), seed, trials)
