"""Closed-form facts: rank-2 walls and dimensions, Higgs-bundle corollaries,
fibers of the forgetful map, fixed-determinant geometry, maximal degree.

These are theorem-level statements with explicit hypotheses.  Outside the
hypotheses nothing is asserted: fields become ``None`` or ``"Unknown"``,
never a negated claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InvalidGenus, MaximalDegree, NonIntegralDegree, PreconditionFailed, QuadricBundleError
from .params import ModuliParams, RationalLike, as_rational

CONNECTED = "Connected"
CONNECTED_NONEMPTY = "ConnectedNonempty"
UNKNOWN = "Unknown"

SP2N = "Sp2n"
SO023 = "SO023"

CITATIONS = {
    "rank2_walls": "rank 2: critical values are d/2 and the integers in [d - d_L/2, d/2]",
    "rank2_dimension": "rank 2, d < d_L - g + 1: dim N_alpha(d) = 3(d_L - d) + g - 1",
    "flip_codim": "rank 2, d < d_L - g + 1: flip loci at every wall have codimension > g - 1",
    "rank2_connected": "rank 2, d < d_L - g + 1, alpha <= d/2: N_alpha(d) is connected and non-empty",
    "milnor_wood": "Milnor-Wood inequality: M_d(Sp(2n,R)) is empty unless |d| <= n(g-1)",
    "minima": "0 < d < n(g-1): local minima of the Hitchin function have beta = 0 (K-quadric bundles); "
    "n(1-g) < d < 0: gamma = 0",
    "duality": "(V, beta, gamma) -> (V*, gamma, beta) identifies Toledo invariants d and -d",
    "sp4_connected": "0 < |d| < 2g-2: M_d(Sp(4,R)) and R_d(Sp(4,R)) are connected",
    "so023_connected": "0 < |d| < 2g-2, any w in Z/2: M_{d,w}(SO0(2,3)) and R_{d,w}(SO0(2,3)) are connected",
    "forgetful_surjective": "d < (n/2)(d_L+1-g): the forgetful map N_{alpha_M^-}(n,d) -> M(n,d) is surjective",
    "forgetful_fiber": "d < (n/2)(d_L+2-2g): over stable bundles the forgetful map is a P^N-bundle, "
    "N = (-d + (n/2)(d_L+1-g))(n+1) - 1",
    "fixed_det_fiber": "rank 2, fixed determinant, d < d_L+2-2g: fiber P^{3(d_L-d+1-g)-1}",
    "irreducible": "rank 2, fixed determinant, g >= 2, d < d_L+2-2g: N_alpha(Lambda) is irreducible",
    "simply_connected": "rank 2, fixed determinant, (g >= 3 or g = 2 with d odd), d < d_L+2-2g: "
    "smooth locus simply connected for alpha < alpha_M",
    "cohomology": "rank 2, fixed determinant, g >= 4, d < d_L+2-2g: torsion-free H^1 = 0, H^2 = Z+Z, "
    "H^3 = H^1(X,Z), Picard group Z+Z",
    "torelli": "rank 2, fixed determinant, g >= 5, d < d_L+2-2g: N_alpha(Lambda) determines the curve X",
    "cayley": "d = n d_L/2, d_L even: N_alpha(n, d) is isomorphic to the moduli of O(n,C)-bundles for alpha < alpha_M",
    "components": "d = n d_L/2, d_L even, n >= 3: at least 2 * 2^(2g) connected components",
    "twisted_orthogonal": "d = n d_L/2, d_L odd: N_alpha(n, d) is the moduli of L-twisted orthogonal bundles",
}


def _check_genus(g: int) -> None:
    if g < 2:
        raise InvalidGenus(f"genus must be >= 2, got {g}")


def rank2_walls(d: int, d_L: int) -> list[Fraction]:
    """Sorted rank-2 walls ``{d/2} + {k integer : d - d_L/2 <= k <= d/2}``."""
    if d >= d_L:
        raise MaximalDegree(f"rank-2 wall formula assumes d < d_L (d={d}, d_L={d_L})")
    lo = math.ceil(Fraction(2 * d - d_L, 2))
    hi = math.floor(Fraction(d, 2))
    return sorted({Fraction(d, 2)} | {Fraction(k) for k in range(lo, hi + 1)})


def expected_dimension(g: int, d: int, d_L: int) -> int:
    if not d < d_L - g + 1:
        raise PreconditionFailed(f"dimension formula needs d < d_L - g + 1 (d={d}, d_L={d_L}, g={g})")
    return 3 * (d_L - d) + g - 1


def flip_codim_bound(g: int) -> int:
    """Strict lower bound ``g - 1`` for the codimension of every flip locus."""
    _check_genus(g)
    return g - 1


def connectedness_verdict(g: int, d: int, d_L: int, alpha: RationalLike) -> str:
    if d < d_L - g + 1 and 2 * as_rational(alpha) <= d:
        return CONNECTED_NONEMPTY
    return UNKNOWN


@dataclass(frozen=True)
class Rank2Report:
    params: ModuliParams
    walls: tuple[Fraction, ...]
    expected_dim: Optional[int]
    flip_codim_lower_bound: Optional[int]
    connectedness: str
    preconditions_met: dict[str, bool] = field(default_factory=dict)

    def citations(self) -> dict[str, str]:
        out = {"walls": CITATIONS["rank2_walls"]}
        if self.expected_dim is not None:
            out["expected_dim"] = CITATIONS["rank2_dimension"]
        if self.flip_codim_lower_bound is not None:
            out["flip_codim_lower_bound"] = CITATIONS["flip_codim"]
        if self.connectedness != UNKNOWN:
            out["connectedness"] = CITATIONS["rank2_connected"]
        return out


def rank2_report(g: int, d: int, d_L: int) -> Rank2Report:
    _check_genus(g)
    walls = tuple(rank2_walls(d, d_L))
    low = d < d_L - g + 1
    return Rank2Report(
        params=ModuliParams(2, d, d_L, g),
        walls=walls,
        expected_dim=expected_dimension(g, d, d_L) if low else None,
        flip_codim_lower_bound=flip_codim_bound(g) if low else None,
        connectedness=CONNECTED if low else UNKNOWN,
        preconditions_met={"non_maximal_degree": True, "d<d_L-g+1": low},
    )


@dataclass(frozen=True)
class HiggsReport:
    group: str
    n: int
    genus: int
    toledo: int
    twist_degree: int
    empty: bool
    minima_are_quadric_bundles: bool
    minima_vanishing_field: Optional[str]
    dual_toledo: int
    connected: Optional[bool]
    w: Optional[int] = None

    def citations(self) -> dict[str, str]:
        out = {"empty": CITATIONS["milnor_wood"], "dual_toledo": CITATIONS["duality"]}
        if self.minima_are_quadric_bundles:
            out["minima_are_quadric_bundles"] = CITATIONS["minima"]
            out["minima_vanishing_field"] = CITATIONS["minima"]
        if self.connected is not None:
            out["connected"] = CITATIONS["sp4_connected" if self.group == SP2N else "so023_connected"]
        return out


def higgs_report(group: str, n: int, g: int, d: int, w: Optional[int] = None) -> HiggsReport:
    """Milnor-Wood emptiness, Hitchin minima, duality and connectedness for Toledo invariant d.

    ``SO023`` means SO0(2,3)-Higgs bundles, studied through L0K-quadric
    bundles of rank 2 (twist degree 2g-1); ``w`` is carried as metadata.
    """
    _check_genus(g)
    if n < 1:
        raise QuadricBundleError(f"n must be >= 1, got {n}")
    if group not in (SP2N, SO023):
        raise QuadricBundleError(f"unknown group {group!r}")
    if group == SO023 and n != 2:
        raise PreconditionFailed("SO0(2,3) corresponds to rank n = 2")
    if w is not None and w not in (0, 1):
        raise QuadricBundleError("w is a class in Z/2")
    bound = n * (g - 1)
    empty = abs(d) > bound
    minima = 0 < abs(d) < bound
    connected = True if (n == 2 and 0 < abs(d) < 2 * g - 2) else None
    return HiggsReport(
        group=group,
        n=n,
        genus=g,
        toledo=d,
        twist_degree=2 * g - 2 if group == SP2N else 2 * g - 1,
        empty=empty,
        minima_are_quadric_bundles=minima,
        minima_vanishing_field=("beta" if d > 0 else "gamma") if minima else None,
        dual_toledo=-d,
        connected=connected,
        w=w if group == SO023 else None,
    )


@dataclass(frozen=True)
class GeometryFacts:
    fiber_dim: Optional[int] = None
    surjective: Optional[bool] = None
    betti: Optional[tuple[int, int, int]] = None
    picard_rank: Optional[int] = None
    irreducible: Optional[bool] = None
    smooth_locus_simply_connected: Optional[bool] = None
    torelli_applies: Optional[bool] = None

    def citations(self) -> dict[str, str]:
        keys = {
            "fiber_dim": "forgetful_fiber",
            "surjective": "forgetful_surjective",
            "betti": "cohomology",
            "picard_rank": "cohomology",
            "irreducible": "irreducible",
            "smooth_locus_simply_connected": "simply_connected",
            "torelli_applies": "torelli",
        }
        return {f: CITATIONS[c] for f, c in keys.items() if getattr(self, f)}


def fiber_dimension(n: int, g: int, d: int, d_L: int) -> GeometryFacts:
    """Projective fiber dimension N of the forgetful map near alpha_M, and surjectivity."""
    _check_genus(g)
    if not 2 * d < n * (d_L + 2 - 2 * g):
        raise PreconditionFailed(
            f"fiber formula needs d < (n/2)(d_L+2-2g) = {Fraction(n * (d_L + 2 - 2 * g), 2)}; "
            "beyond it the image of the forgetful map is a Brill-Noether problem"
        )
    h0 = (-d + Fraction(n * (d_L + 1 - g), 2)) * (n + 1)
    assert h0.denominator == 1
    return GeometryFacts(fiber_dim=int(h0) - 1, surjective=2 * d < n * (d_L + 1 - g))


def fixed_determinant_fiber_dimension(g: int, d: int, d_L: int) -> int:
    """Rank-2 fixed-determinant fiber exponent ``3(d_L - d + 1 - g) - 1``."""
    _check_genus(g)
    if not d < d_L + 2 - 2 * g:
        raise PreconditionFailed(f"needs d < d_L + 2 - 2g (d={d}, d_L={d_L}, g={g})")
    return 3 * (d_L - d + 1 - g) - 1


def cohomology_report(g: int, d: int, d_L: int) -> GeometryFacts:
    """Fixed-determinant rank-2 geometry; each field only when its hypotheses hold."""
    _check_genus(g)
    low = d < d_L + 2 - 2 * g
    coh = g >= 4 and low
    return GeometryFacts(
        betti=(0, 2, 2 * g) if coh else None,
        picard_rank=2 if coh else None,
        irreducible=True if low else None,
        smooth_locus_simply_connected=True if (low and (g >= 3 or d % 2 == 1)) else None,
        torelli_applies=True if (low and g >= 5) else None,
    )


ORTHOGONAL = "Orthogonal"
TWISTED_ORTHOGONAL = "LTwistedOrthogonal"


@dataclass(frozen=True)
class MaxDegreeReport:
    n: int
    twist_degree: int
    genus: int
    degree: int
    classification: str
    min_components: Optional[int]

    def citations(self) -> dict[str, str]:
        out = {"classification": CITATIONS["cayley" if self.classification == ORTHOGONAL else "twisted_orthogonal"]}
        if self.min_components is not None:
            out["min_components"] = CITATIONS["components"]
        return out


def max_degree_report(n: int, d_L: int, g: int) -> MaxDegreeReport:
    """Classification of the moduli at maximal degree ``d = n*d_L/2``."""
    _check_genus(g)
    if (n * d_L) % 2:
        raise NonIntegralDegree(f"n*d_L/2 = {Fraction(n * d_L, 2)} is not an integer")
    if d_L % 2 == 0:
        comps = 2 * 2 ** (2 * g) if n >= 3 else None
        return MaxDegreeReport(n, d_L, g, n * d_L // 2, ORTHOGONAL, comps)
    return MaxDegreeReport(n, d_L, g, n * d_L // 2, TWISTED_ORTHOGONAL, None)
