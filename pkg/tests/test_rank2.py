from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from quadric_bundles import params, rank2
from quadric_bundles.errors import InvalidGenus, MaximalDegree, NonIntegralDegree, PreconditionFailed


@pytest.mark.parametrize(
    "d,dl,expected", [(2, 6, [-1, 0, 1]), (1, 3, [0, F(1, 2)]), (0, 1, [0])]
)
def test_rank2_walls_examples(d, dl, expected):
    assert rank2.rank2_walls(d, dl) == [F(x) for x in expected]


def test_rank2_walls_maximal_degree():
    with pytest.raises(MaximalDegree):
        rank2.rank2_walls(4, 4)


def test_rank2_walls_cross_oracle():
    for dl in range(1, 13):
        for d in range(-12, dl):
            got = rank2.rank2_walls(d, dl)
            assert got == params.critical_values(params.ModuliParams(2, d, dl))


@pytest.mark.parametrize("g,d,dl,expected", [(2, 0, 3, 10), (3, 1, 6, 17)])
def test_expected_dimension_examples(g, d, dl, expected):
    assert rank2.expected_dimension(g, d, dl) == expected


def test_expected_dimension_precondition():
    with pytest.raises(PreconditionFailed):
        rank2.expected_dimension(2, 2, 3)


def test_expected_dimension_monotone():
    for g in range(2, 7):
        for dl in range(0, 12):
            for d in range(-10, dl - g + 1):
                v = rank2.expected_dimension(g, d, dl)
                if d + 1 < dl - g + 1:
                    assert rank2.expected_dimension(g, d + 1, dl) < v
                assert rank2.expected_dimension(g, d, dl + 1) > v
                if d < dl - g:
                    assert rank2.expected_dimension(g + 1, d, dl) > v


@pytest.mark.parametrize("g,expected", [(2, 1), (5, 4)])
def test_flip_codim_bound(g, expected):
    assert rank2.flip_codim_bound(g) == expected


def test_flip_codim_bound_genus():
    with pytest.raises(InvalidGenus):
        rank2.flip_codim_bound(1)


@pytest.mark.parametrize(
    "g,d,dl,alpha,expected",
    [(2, 0, 3, 0, rank2.CONNECTED_NONEMPTY), (2, 2, 3, 0, rank2.UNKNOWN), (3, 1, 6, 1, rank2.UNKNOWN)],
)
def test_connectedness_examples(g, d, dl, alpha, expected):
    assert rank2.connectedness_verdict(g, d, dl, alpha) == expected


def test_connectedness_gated_with_dimension():
    for g in range(2, 6):
        for dl in range(0, 10):
            for d in range(-6, 10):
                for a in (F(-3), F(d, 2), F(d + 1, 2)):
                    if rank2.connectedness_verdict(g, d, dl, a) != rank2.UNKNOWN:
                        rank2.expected_dimension(g, d, dl)
                        assert 2 * a <= d


def test_rank2_report_fields_and_citations():
    rep = rank2.rank2_report(2, 0, 3)
    assert rep.expected_dim == 10 and rep.flip_codim_lower_bound == 1
    assert rep.connectedness == rank2.CONNECTED
    assert set(rep.citations()) == {"walls", "expected_dim", "flip_codim_lower_bound", "connectedness"}
    rep = rank2.rank2_report(2, 2, 3)
    assert rep.expected_dim is None and rep.connectedness == rank2.UNKNOWN
    assert set(rep.citations()) == {"walls"}


def test_higgs_examples():
    r = rank2.higgs_report(rank2.SP2N, 2, 3, 2)
    assert not r.empty and r.minima_are_quadric_bundles and r.connected
    assert r.twist_degree == 4
    assert rank2.higgs_report(rank2.SP2N, 2, 2, 5).empty
    r = rank2.higgs_report(rank2.SP2N, 3, 2, -1)
    assert not r.empty and r.dual_toledo == 1
    assert r.minima_vanishing_field == "gamma"
    assert r.connected is None


def test_higgs_so023():
    r = rank2.higgs_report(rank2.SO023, 2, 3, 1, w=1)
    assert r.twist_degree == 5 and r.connected and r.w == 1
    with pytest.raises(PreconditionFailed):
        rank2.higgs_report(rank2.SO023, 3, 3, 1)


@given(st.integers(1, 4), st.integers(2, 6), st.integers(-12, 12))
def test_higgs_milnor_wood_and_duality(n, g, d):
    a = rank2.higgs_report(rank2.SP2N, n, g, d)
    b = rank2.higgs_report(rank2.SP2N, n, g, -d)
    assert a.empty == (abs(d) > n * (g - 1))
    assert a.empty == b.empty
    assert a.minima_are_quadric_bundles == b.minima_are_quadric_bundles
    assert a.dual_toledo == -d
    if a.connected:
        assert n == 2 and 0 < abs(d) < 2 * g - 2


@pytest.mark.parametrize(
    "n,g,d,dl,fiber,surj",
    [(2, 2, 0, 6, 14, True), (2, 2, 3, 6, 5, True), (3, 2, 0, 4, 17, True)],
)
def test_fiber_dimension_examples(n, g, d, dl, fiber, surj):
    facts = rank2.fiber_dimension(n, g, d, dl)
    assert facts.fiber_dim == fiber and facts.surjective is surj


def test_fiber_dimension_precondition():
    with pytest.raises(PreconditionFailed):
        rank2.fiber_dimension(2, 2, 4, 6)


def test_fiber_identity_rank_two():
    for g in range(2, 7):
        for dl in range(0, 13):
            for d in range(-12, dl + 3 - 2 * g):
                if d < dl + 2 - 2 * g:
                    assert rank2.fiber_dimension(2, g, d, dl).fiber_dim == rank2.fixed_determinant_fiber_dimension(g, d, dl)
                    assert rank2.fiber_dimension(2, g, d, dl).fiber_dim == 3 * (dl - d + 1 - g) - 1


@pytest.mark.parametrize(
    "n,dl,g,cls,comps",
    [(3, 2, 2, rank2.ORTHOGONAL, 32), (2, 3, 2, rank2.TWISTED_ORTHOGONAL, None), (2, 4, 3, rank2.ORTHOGONAL, None)],
)
def test_max_degree_examples(n, dl, g, cls, comps):
    rep = rank2.max_degree_report(n, dl, g)
    assert rep.classification == cls and rep.min_components == comps
    assert rep.degree * 2 == n * dl


def test_max_degree_nonintegral():
    with pytest.raises(NonIntegralDegree):
        rank2.max_degree_report(3, 3, 2)


def test_cohomology_examples():
    c = rank2.cohomology_report(4, 0, 8)
    assert c.betti == (0, 2, 8) and c.picard_rank == 2
    assert c.irreducible and c.smooth_locus_simply_connected and not c.torelli_applies
    assert rank2.cohomology_report(5, 0, 10).torelli_applies
    c = rank2.cohomology_report(2, 1, 7)
    assert c.irreducible and c.smooth_locus_simply_connected and c.betti is None
    c = rank2.cohomology_report(2, 0, 7)
    assert c.irreducible and c.smooth_locus_simply_connected is None


def test_cohomology_gated_outside_range():
    c = rank2.cohomology_report(6, 5, 7)
    assert all(v is None for v in (c.betti, c.irreducible, c.torelli_applies, c.smooth_locus_simply_connected))
    assert c.citations() == {}


def test_citations_only_for_asserted_fields():
    c = rank2.cohomology_report(4, 0, 8)
    assert set(c.citations()) == {"betti", "picard_rank", "irreducible", "smooth_locus_simply_connected"}
