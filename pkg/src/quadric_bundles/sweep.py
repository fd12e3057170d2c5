"""Exhaustive property sweeps over grids of pattern quadric bundles.

The batch path builds, per pattern, an integer table of affine slacks
``c0 + c1*alpha`` (scaled by 2) so that whole grids of degree vectors are
classified by the kernels in :mod:`quadric_bundles._kernels`.  The scalar
path (:func:`bundle_violations`) goes through :func:`model.classify` and is
used to cross-check the batch path and for random samples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from . import _kernels, generic, model, params
from .errors import GridTooLarge
from .generic import Pattern
from .model import PatternQuadricBundle

MAX_GRID = 10**7
MAX_COUNTEREXAMPLES = 20

PROPERTIES = (
    "chamber_constancy",
    "degree_bound",
    "top_chamber_vector_bundle_semistable",
    "maximal_degree_nondegenerate",
    "wall_locality",
    "alpha_independent_never_stable",
)

_CODE_NAMES = {
    _kernels.STABLE: model.STABLE,
    _kernels.POLYSTABLE: model.POLYSTABLE,
    _kernels.STRICTLY_SEMISTABLE: model.STRICTLY_SEMISTABLE,
    _kernels.UNSTABLE: model.UNSTABLE,
}
_NAME_CODES = {v: k for k, v in _CODE_NAMES.items()}

# (coefficient of d in c0, coefficient of n in c1) per clause; see PatternTable
_CLAUSE_COEFFS = {
    model.CLAUSE_A: (2, 2),
    model.CLAUSE_FILTRATION: (2, 2),
    model.CLAUSE_B: (1, 1),
    model.CLAUSE_C: (0, 0),
}


def all_patterns(n: int) -> Iterator[Pattern]:
    """Every nonzero symmetric n x n boolean pattern, in a fixed order."""
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in range(1, 2 ** len(cells)):
        m = [[False] * n for _ in range(n)]
        for k, (i, j) in enumerate(cells):
            if bits >> k & 1:
                m[i][j] = m[j][i] = True
        yield tuple(map(tuple, m))


def grid_size(n_max: int, deg_bound: int, dl_max: int) -> int:
    """Upper bound on the number of bundles a sweep enumerates (before degree filtering)."""
    per_dl = sum((2 * deg_bound + 1) ** n * (2 ** (n * (n + 1) // 2) - 1) for n in range(1, n_max + 1))
    return per_dl * (dl_max + 1)


@dataclass(frozen=True)
class PatternTable:
    """Pattern-only data for batch classification.

    For subobject k: ``deg_k = coeffs[k] . a + dl_coeff[k]*d_L`` and
    ``2*slack_k = (d_coeff[k]*d - 2*deg_k) + (rank2[k] - n_coeff[k]*n)*alpha``.
    """

    pattern: Pattern
    coeffs: np.ndarray
    dl_coeff: np.ndarray
    d_coeff: np.ndarray
    rank2: np.ndarray
    n_coeff: np.ndarray
    decomposable: np.ndarray
    generic_rank: int
    half_masks: np.ndarray
    filtration_masks: np.ndarray

    def slopes(self, degrees: np.ndarray, d_l: int) -> tuple[np.ndarray, np.ndarray]:
        n = len(self.pattern)
        d = degrees.sum(axis=1)
        deg = degrees @ self.coeffs.T + self.dl_coeff[None, :] * d_l
        c0 = self.d_coeff[None, :] * d[:, None] - 2 * deg
        c1 = np.broadcast_to(self.rank2 - self.n_coeff * n, c0.shape)
        return c0, np.ascontiguousarray(c1)

    def alpha_independent(self, degrees: np.ndarray) -> np.ndarray:
        n = len(self.pattern)
        d = degrees.sum(axis=1)
        out = np.zeros(len(degrees), dtype=bool)
        if n % 2 == 0 and len(self.half_masks):
            out |= ((2 * (degrees @ self.half_masks.T)) == d[:, None]).any(axis=1) & (d % 2 == 0)
        if len(self.filtration_masks):
            out |= ((degrees @ self.filtration_masks.T) == d[:, None]).any(axis=1)
        return out


@lru_cache(maxsize=None)
def pattern_table(pattern: Pattern, seed: int = generic.DEFAULT_SEED) -> PatternTable:
    n = len(pattern)
    probe = PatternQuadricBundle((0,) * n, pattern, 0)
    rows = []
    for sub, clause in model.candidate_subobjects(probe, seed):
        if sub.kind == "kernel":
            prof = generic.kernel_profile(pattern, seed)
            coeffs, dl = list(prof.coeffs), prof.dl_coeff
        else:
            coeffs = [0] * n
            for i in sub.members:
                coeffs[i] += 1
            for i in sub.outer or ():
                coeffs[i] += 1
            dl = 0
        dc, nc = _CLAUSE_COEFFS[clause]
        dec = model._decomposes(probe, clause, sub)
        rows.append((coeffs, dl, dc, 2 * sub.rank, nc, dec))
    half = [
        [int(i in idx) for i in range(n)]
        for idx in itertools.combinations(range(n), n // 2)
        if n % 2 == 0 and not probe.block_nonzero(idx, idx)
    ]
    filt = [
        [int(i in inner) + int(i in outer) for i in range(n)]
        for inner, outer in model.coordinate_filtrations(probe)
        if len(inner) + len(outer) == n
    ]
    col = lambda k, dtype=np.int64: np.array([r[k] for r in rows], dtype=dtype)
    return PatternTable(
        pattern=pattern,
        coeffs=np.array([r[0] for r in rows], dtype=np.int64).reshape(len(rows), n),
        dl_coeff=col(1),
        d_coeff=col(2),
        rank2=col(3),
        n_coeff=col(4),
        decomposable=col(5, bool),
        generic_rank=generic.generic_rank(pattern, seed),
        half_masks=np.array(half, dtype=np.int64).reshape(-1, n),
        filtration_masks=np.array(filt, dtype=np.int64).reshape(-1, n),
    )


def classify_batch(
    pattern: Pattern, degrees: np.ndarray, d_l: int, alphas: list[Fraction], seed: int = generic.DEFAULT_SEED
) -> np.ndarray:
    """Verdict codes (B, S) for each degree vector at each alpha."""
    table = pattern_table(pattern, seed)
    degrees = np.asarray(degrees, dtype=np.int64).reshape(-1, len(pattern))
    c0, c1 = table.slopes(degrees, d_l)
    num, den = _fraction_grid(alphas, len(degrees))
    return _kernels.verdict_codes(c0, c1, table.decomposable, degrees.sum(axis=1), len(pattern), num, den)


def _fraction_grid(alphas: list[Fraction], rows: int) -> tuple[np.ndarray, np.ndarray]:
    num = np.array([a.numerator for a in alphas], dtype=np.int64)
    den = np.array([a.denominator for a in alphas], dtype=np.int64)
    return np.tile(num, (rows, 1)), np.tile(den, (rows, 1))


@lru_cache(maxsize=None)
def _chamber_data(n: int, d: int, d_l: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """(walls, flattened chamber samples: 3 per chamber in order)."""
    p = params.ModuliParams(n, d, d_l)
    cs = params.chambers(p)
    walls = tuple(c.upper for c in cs)
    samples = tuple(s for c in cs for s in c.samples())
    return walls, samples


def infeasible_samples(n: int, d: int) -> list[Fraction]:
    """Parameters probed for degrees above n*d_L/2, where nothing may be semistable."""
    top = Fraction(d, n)
    return [top - Fraction(k, 2) for k in range(9)]


@dataclass
class SweepResult:
    n_max: int
    deg_bound: int
    dl_max: int
    genus: int
    seed: int
    bundles: int = 0
    evaluations: int = 0
    checks: dict = field(default_factory=lambda: {p: 0 for p in PROPERTIES})
    violations: dict = field(default_factory=lambda: {p: 0 for p in PROPERTIES})
    counterexamples: list = field(default_factory=list)
    verdict_counts: dict = field(default_factory=lambda: {v: 0 for v in model.VERDICTS})

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def record(self, prop: str, n_bad: int, examples: list[dict]) -> None:
        self.violations[prop] += n_bad
        self.counterexamples.extend(dict(e, property=prop) for e in examples)

    def to_dict(self) -> dict:
        ce = sorted(self.counterexamples, key=lambda e: (e["property"], e["n"], e["twist_degree"], e["degrees"], e["pattern"], e.get("alpha", "")))
        kept: list[dict] = []
        per: dict[str, int] = {}
        for e in ce:
            if per.get(e["property"], 0) < MAX_COUNTEREXAMPLES:
                per[e["property"]] = per.get(e["property"], 0) + 1
                kept.append(e)
        return {
            "grid": {"n_max": self.n_max, "deg_bound": self.deg_bound, "dL_max": self.dl_max, "genus": self.genus},
            "bundles": self.bundles,
            "evaluations": self.evaluations,
            "verdict_counts": dict(self.verdict_counts),
            "properties": {p: {"checked": self.checks[p], "violations": self.violations[p]} for p in PROPERTIES},
            "all_passed": self.ok,
            "counterexamples": kept,
        }


def _pattern_str(pattern: Pattern) -> list[str]:
    return [" ".join("*" if x else "0" for x in row) for row in pattern]


def _example(pattern: Pattern, degrees, d_l: int, alpha: Optional[Fraction] = None, **extra) -> dict:
    e = {"n": len(pattern), "degrees": [int(x) for x in degrees], "pattern": _pattern_str(pattern), "twist_degree": int(d_l)}
    if alpha is not None:
        e["alpha"] = str(alpha)
    e.update(extra)
    return e


def _vector_semistable(degrees: np.ndarray) -> np.ndarray:
    n = degrees.shape[1]
    if n == 1:
        return np.ones(len(degrees), dtype=bool)
    d = degrees.sum(axis=1)
    top = np.cumsum(-np.sort(-degrees, axis=1), axis=1)[:, : n - 1]
    k = np.arange(1, n)
    return (n * top <= k[None, :] * d[:, None]).all(axis=1)


def run_sweep(n_max: int, deg_bound: int, dl_max: int, genus: int = 2, seed: int = generic.DEFAULT_SEED) -> SweepResult:
    """Check every model property over all pattern bundles in the grid.

    Grid: ranks 1..n_max, each degree in [-deg_bound, deg_bound], twist
    degree in 0..dl_max, every nonzero symmetric pattern compatible with
    the degrees.
    """
    params.ModuliParams(1, 0, 0, genus)  # genus validation
    if grid_size(n_max, deg_bound, dl_max) > MAX_GRID:
        raise GridTooLarge(f"grid has up to {grid_size(n_max, deg_bound, dl_max)} bundles (limit {MAX_GRID})")
    res = SweepResult(n_max, deg_bound, dl_max, genus, seed)
    for n in range(1, n_max + 1):
        all_deg = np.array(list(itertools.product(range(-deg_bound, deg_bound + 1), repeat=n)), dtype=np.int64)
        sums = all_deg.sum(axis=1)
        for pattern in all_patterns(n):
            table = pattern_table(pattern, seed)
            cells = [(i, j) for i in range(n) for j in range(i, n) if pattern[i][j]]
            max_pair = np.max(np.stack([all_deg[:, i] + all_deg[:, j] for i, j in cells]), axis=0)
            for d_l in range(dl_max + 1):
                ok_deg = max_pair <= d_l
                for d in np.unique(sums[ok_deg]):
                    sel = all_deg[ok_deg & (sums == d)]
                    _sweep_batch(res, table, sel, int(d), d_l)
    return res


def _sweep_batch(res: SweepResult, table: PatternTable, degrees: np.ndarray, d: int, d_l: int) -> None:
    pattern = table.pattern
    n = len(pattern)
    r = table.generic_rank
    nb = len(degrees)
    res.bundles += nb
    c0, c1 = table.slopes(degrees, d_l)
    deg_vec = degrees.sum(axis=1)
    indep = table.alpha_independent(degrees)

    if 2 * d > n * d_l:
        alphas = infeasible_samples(n, d)
        num, den = _fraction_grid(alphas, nb)
        codes = _kernels.verdict_codes(c0, c1, table.decomposable, deg_vec, n, num, den)
        _count_verdicts(res, codes)
        semi = codes != _kernels.UNSTABLE
        res.checks["degree_bound"] += codes.size
        bad = np.argwhere(semi)
        res.record("degree_bound", len(bad), [_example(pattern, degrees[b], d_l, alphas[s], detail="degree above n*d_L/2") for b, s in bad[:3]])
        _check_alpha_independent(res, table, degrees, d_l, indep, codes, alphas)
        return

    walls, samples = _chamber_data(n, d, d_l)
    n_ch = len(walls)
    alphas = list(samples) + list(walls)
    num, den = _fraction_grid(alphas, nb)
    codes = _kernels.verdict_codes(c0, c1, table.decomposable, deg_vec, n, num, den)
    _count_verdicts(res, codes)
    ch_codes = codes[:, : 3 * n_ch].reshape(nb, n_ch, 3)

    # chamber constancy
    res.checks["chamber_constancy"] += nb * n_ch
    varying = (ch_codes != ch_codes[:, :, :1]).any(axis=2)
    bad = np.argwhere(varying)
    res.record(
        "chamber_constancy",
        len(bad),
        [_example(pattern, degrees[b], d_l, walls[c], detail=[_CODE_NAMES[int(x)] for x in ch_codes[b, c]]) for b, c in bad[:3]],
    )

    # degree bound n*alpha <= d <= r*d_L/2 + (n-r)*alpha at every semistable evaluation
    semi = codes != _kernels.UNSTABLE
    lower_ok = n * num <= d * den
    upper_ok = 2 * d * den <= r * d_l * den + 2 * (n - r) * num
    res.checks["degree_bound"] += codes.size
    bad = np.argwhere(semi & ~(lower_ok & upper_ok))
    res.record("degree_bound", len(bad), [_example(pattern, degrees[b], d_l, alphas[s], generic_rank=r) for b, s in bad[:3]])

    # top chamber: semistable quadric bundle => semistable vector bundle
    top_semi = (ch_codes[:, -1, :] != _kernels.UNSTABLE).any(axis=1)
    vec_ok = _vector_semistable(degrees)
    res.checks["top_chamber_vector_bundle_semistable"] += nb
    bad = np.flatnonzero(top_semi & ~vec_ok)
    res.record("top_chamber_vector_bundle_semistable", len(bad), [_example(pattern, degrees[b], d_l) for b in bad[:3]])

    # maximal degree: top-chamber semistable => gamma generically an isomorphism
    if 2 * d == n * d_l:
        res.checks["maximal_degree_nondegenerate"] += nb
        if r != n:
            bad = np.flatnonzero(top_semi)
            res.record("maximal_degree_nondegenerate", len(bad), [_example(pattern, degrees[b], d_l, generic_rank=r) for b in bad[:3]])

    # wall locality: a verdict change across a wall is witnessed at the wall
    if n_ch > 1:
        mid = ch_codes[:, :, 1]
        change = mid[:, :-1] != mid[:, 1:]
        wnum, wden = _fraction_grid(list(walls[:-1]), nb)
        witnessed = _kernels.zero_slack(c0, c1, wnum, wden)
        res.checks["wall_locality"] += int(change.sum())
        bad = np.argwhere(change & ~witnessed)
        res.record("wall_locality", len(bad), [_example(pattern, degrees[b], d_l, walls[w]) for b, w in bad[:3]])

    _check_alpha_independent(res, table, degrees, d_l, indep, codes, alphas)


def _check_alpha_independent(res, table, degrees, d_l, indep, codes, alphas) -> None:
    res.checks["alpha_independent_never_stable"] += int(indep.sum()) * codes.shape[1]
    bad = np.argwhere(indep[:, None] & (codes == _kernels.STABLE))
    res.record("alpha_independent_never_stable", len(bad), [_example(table.pattern, degrees[b], d_l, alphas[s]) for b, s in bad[:3]])


def _count_verdicts(res: SweepResult, codes: np.ndarray) -> None:
    res.evaluations += codes.size
    counts = np.bincount(codes.ravel(), minlength=4)
    for code, name in _CODE_NAMES.items():
        res.verdict_counts[name] += int(counts[code])


# ---------------------------------------------------------------- scalar path


def bundle_violations(bundle: PatternQuadricBundle, seed: int = generic.DEFAULT_SEED) -> list[str]:
    """Run every property on one bundle through :func:`model.classify`; return violated names."""
    n, d, d_l = bundle.rank, bundle.degree, bundle.twist_degree
    r = model.generic_rank(bundle, seed)
    out: set[str] = set()
    indep = model.is_alpha_independent(bundle)
    if 2 * d > n * d_l:
        for a in infeasible_samples(n, d):
            v = model.classify(bundle, a, seed)
            if v.semistable:
                out.add("degree_bound")
            if indep and v.cls == model.STABLE:
                out.add("alpha_independent_never_stable")
        return sorted(out)
    cs = params.chambers(bundle.params)
    mids = []
    for c in cs:
        verdicts = [model.classify(bundle, a, seed) for a in c.samples()]
        if len({v.cls for v in verdicts}) > 1:
            out.add("chamber_constancy")
        mids.append(verdicts[1].cls)
        for a, v in zip(c.samples(), verdicts):
            if v.semistable and not (n * a <= d <= Fraction(r * d_l, 2) + (n - r) * a):
                out.add("degree_bound")
            if indep and v.cls == model.STABLE:
                out.add("alpha_independent_never_stable")
    for c in cs:
        v = model.classify(bundle, c.upper, seed)
        if v.semistable and not (n * c.upper <= d <= Fraction(r * d_l, 2) + (n - r) * c.upper):
            out.add("degree_bound")
        if indep and v.cls == model.STABLE:
            out.add("alpha_independent_never_stable")
    top_semi = any(model.classify(bundle, a, seed).semistable for a in cs[-1].samples())
    if top_semi and not model.underlying_bundle_semistable(bundle):
        out.add("top_chamber_vector_bundle_semistable")
    if 2 * d == n * d_l and top_semi and r != n:
        out.add("maximal_degree_nondegenerate")
    for left, right, c in zip(mids, mids[1:], cs):
        if left != right and not has_zero_slack(bundle, c.upper, seed):
            out.add("wall_locality")
    return sorted(out)


def has_zero_slack(bundle: PatternQuadricBundle, alpha, seed: int = generic.DEFAULT_SEED) -> bool:
    a = params.as_rational(alpha)
    return any(
        model._slack(clause, sub.degree, sub.rank, bundle.degree, bundle.rank, a) == 0
        for sub, clause in model.candidate_subobjects(bundle, seed)
    )


def random_grid_bundles(
    count: int, seed: int, n_max: int = 3, deg_bound: int = 3, dl_max: int = 6, genus: int = 2
) -> list[PatternQuadricBundle]:
    """``count`` distinct-draw bundles from the sweep grid, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(1, n_max + 1))
        degrees = tuple(int(x) for x in rng.integers(-deg_bound, deg_bound + 1, size=n))
        d_l = int(rng.integers(0, dl_max + 1))
        allowed = [(i, j) for i in range(n) for j in range(i, n) if degrees[i] + degrees[j] <= d_l]
        if not allowed:
            continue
        bits = rng.integers(0, 2, size=len(allowed))
        if not bits.any():
            continue
        m = [[False] * n for _ in range(n)]
        for (i, j), b in zip(allowed, bits):
            if b:
                m[i][j] = m[j][i] = True
        out.append(PatternQuadricBundle(degrees, m, d_l, genus))
    return out
