import numpy as np
import pytest

from bertini.gf import EnumerationBoundExceeded, field_create
from bertini.mpoly import FormTuple, enumerate_forms, form_scale, parse_form, random_form
from bertini.smoothness import (
    HYPERSURFACE,
    VarietyDesc,
    avoids,
    contains_with_transversality,
    count_points,
    count_variety_points,
    enumerate_projective_points,
    intersection_is_empty,
    is_smooth_at_point,
    is_smooth_brute,
    is_smooth_gb,
    make_point,
    matrix_rank,
    rational_point,
    singular_locus_generators,
)


def forms(F, nvars, *texts):
    return FormTuple(tuple(parse_form(t, F, nvars) for t in texts))


P1 = VarietyDesc.projective_space(1)
P2 = VarietyDesc.projective_space(2)
P3 = VarietyDesc.projective_space(3)


def both(t, X, E):
    gb = is_smooth_gb(t, X)
    brute = is_smooth_brute(t, X, E)
    return gb, brute


def test_projective_space_desc():
    assert (P2.n, P2.m, P2.degX, P2.nvars) == (2, 2, 1, 3)
    assert str(P2) == "P^2"
    with pytest.raises(ValueError):
        VarietyDesc.projective_space(-1)


def test_point_enumeration(F2, F3):
    pts = enumerate_projective_points(2, F2)
    assert len(pts) == 7
    assert pts[0].coords == (1, 0, 0)
    assert all(next(c for c in p.coords if c) == 1 for p in pts)
    pts4 = enumerate_projective_points(1, F2, 2)
    assert len(pts4) == 5
    assert sorted(p.degree for p in pts4) == [1, 1, 1, 2, 2]
    assert len(enumerate_projective_points(2, F3, 2)) == 91
    with pytest.raises(EnumerationBoundExceeded):
        enumerate_projective_points(2, F2, 1, bound=6)


def test_make_point_canonicalizes(F3):
    p = make_point(F3, F3, [0, 2, 1])
    assert p.coords == (0, 1, 2)
    assert p.to_dict() == {"e": 1, "degree": 1, "coords": [0, 1, 2]}
    with pytest.raises(ValueError):
        make_point(F3, F3, [0, 0, 0])


def test_matrix_rank(F3):
    assert matrix_rank(F3, [[1, 2], [2, 1]]) == 1
    assert matrix_rank(F3, [[1, 0, 0], [0, 1, 2]]) == 2
    assert matrix_rank(F3, [[0, 0]]) == 0


def test_smooth_and_singular_plane_curves(F2):
    # Fermat cubic in characteristic 2: gradient (x0^2, x1^2, x2^2)
    gb, brute = both(forms(F2, 3, "x0^3 + x1^3 + x2^3"), P2, 4)
    assert gb.smooth and brute.smooth
    # smooth conic
    gb, brute = both(forms(F2, 3, "x0*x1 + x2^2"), P2, 2)
    assert gb.smooth and brute.smooth
    # two lines through (0:0:1)
    gb, brute = both(forms(F2, 3, "x0*x1"), P2, 1)
    assert not gb.smooth and not brute.smooth
    assert brute.witness.coords == (0, 0, 1)
    # a doubled line is singular everywhere along it
    gb, brute = both(forms(F2, 3, "x0^2"), P2, 1)
    assert not gb.smooth and not brute.smooth
    assert brute.witness.coords[0] == 0


def test_zero_form_is_singular(F2):
    t = FormTuple((parse_form("0", F2, 3, degree=2),))
    gb, brute = both(t, P2, 1)
    assert not gb.smooth and not brute.smooth


def test_singular_point_only_over_extension(F2):
    # two copies of the F_4-conjugate pair {x0^2 + x0 x1 + x1^2 = 0} in P^1
    t = forms(F2, 2, "x0^2 + x0*x1 + x1^2", "x0^2 + x0*x1 + x1^2")
    assert not is_smooth_gb(t, P1).smooth
    assert is_smooth_brute(t, P1, 1).smooth
    verdict = is_smooth_brute(t, P1, 2)
    assert not verdict.smooth
    assert verdict.witness.degree == 2
    assert verdict.witness.e == 2


def test_k_equals_m_plus_one(F2):
    # no common zero: smooth (empty)
    gb, brute = both(forms(F2, 2, "x0", "x1"), P1, 2)
    assert gb.smooth and brute.smooth
    gb, brute = both(forms(F2, 4, "x0", "x1", "x2", "x3"), P3, 1)
    assert gb.smooth and brute.smooth
    # common zero (0:1)
    gb, brute = both(forms(F2, 2, "x0", "x0^2 + x0*x1"), P1, 1)
    assert not gb.smooth and not brute.smooth
    assert singular_locus_generators(forms(F2, 2, "x0", "x1"), P1) == list(forms(F2, 2, "x0", "x1"))


def test_complete_intersection_in_p3(F2):
    # two planes meet in a line; x0*x1 = x2*x3 = 0 is four lines meeting pairwise
    gb, brute = both(forms(F2, 4, "x0", "x1"), P3, 1)
    assert gb.smooth and brute.smooth
    gb, brute = both(forms(F2, 4, "x0*x1", "x2*x3"), P3, 1)
    assert not gb.smooth and not brute.smooth


def test_pointwise_criterion(F2):
    t = forms(F2, 3, "x0*x1")
    assert not is_smooth_at_point(t, P2, rational_point(F2, [0, 0, 1]))
    assert is_smooth_at_point(t, P2, rational_point(F2, [1, 0, 0]))
    assert is_smooth_at_point(t, P2, rational_point(F2, [1, 1, 0]))
    with pytest.raises(ValueError):
        is_smooth_at_point(t, P2, rational_point(F2, [1, 0]))


def test_point_counts(F2, F3):
    line = forms(F2, 3, "x0")
    assert count_points(line, P2, 1) == 3
    assert count_points(line, P2, 2) == 5
    conic = forms(F3, 3, "x0*x1 + x2^2")
    assert count_points(conic, P2, 1) == 4
    assert count_points(conic, P2, 2) == 10
    assert count_points(forms(F2, 3, "x0", "x1"), P2, 1) == 1
    assert count_points(forms(F2, 2, "x0", "x1"), P1, 1) == 0
    assert count_variety_points(P2, F2, 3) == 73


def test_point_bound_counts_fibers(F2):
    # P^2 over F_4096 has about 2^24 points but only 4097 fibers
    t = forms(F2, 3, "x0")
    assert count_points(t, P2, 12, bound=5000) == 4097
    with pytest.raises(EnumerationBoundExceeded):
        count_points(t, P2, 12, bound=4096)


def test_hypersurface_ambient(F2):
    g = parse_form("x0*x1 + x2^2", F2, 3)
    X = VarietyDesc.hypersurface(g)
    assert X.kind == HYPERSURFACE
    assert (X.n, X.m, X.degX) == (2, 1, 2)
    assert count_variety_points(X, F2, 1) == 3
    assert count_variety_points(X, F2, 2) == 5
    # x2 = 0 meets the conic in two distinct points
    gb, brute = both(forms(F2, 3, "x2"), X, 2)
    assert gb.smooth and brute.smooth
    assert not gb.empty
    assert count_points(forms(F2, 3, "x2"), X, 1) == 2
    # x0 = 0 is tangent at (0:1:0)
    gb, brute = both(forms(F2, 3, "x0"), X, 2)
    assert not gb.smooth and not brute.smooth
    assert brute.witness.coords == (0, 1, 0)
    assert not intersection_is_empty(forms(F2, 3, "x0"), X)


def test_hypersurface_must_be_smooth(F2):
    with pytest.raises(ValueError):
        VarietyDesc.hypersurface(parse_form("x0*x1", F2, 3))


def test_tuple_must_match_ambient(F2, F3):
    with pytest.raises(ValueError):
        is_smooth_gb(forms(F2, 4, "x0"), P2)
    with pytest.raises(ValueError):
        is_smooth_brute(forms(F2, 3, "x0", "x1", "x2", "x0 + x1"), P2, 1)
    X = VarietyDesc.hypersurface(parse_form("x0*x1 + x2^2", F2, 3))
    with pytest.raises(ValueError):
        is_smooth_gb(forms(F3, 3, "x0"), X)


def test_conditioning(F2):
    t = forms(F2, 3, "x1")
    y = rational_point(F2, [1, 0, 0])
    z = rational_point(F2, [0, 1, 0])
    assert contains_with_transversality(t, P2, y)
    assert not avoids(t, P2, y)
    assert avoids(t, P2, z)
    assert not contains_with_transversality(t, P2, z)
    # a singular point is contained but not transversally
    assert not contains_with_transversality(forms(F2, 3, "x0*x1"), P2, rational_point(F2, [0, 0, 1]))
    with pytest.raises(ValueError):
        rational_point(F2, [2, 0, 0])
    X = VarietyDesc.hypersurface(parse_form("x0*x1 + x2^2", F2, 3))
    with pytest.raises(ValueError):
        avoids(forms(F2, 3, "x2"), X, rational_point(F2, [1, 1, 0]))


def test_oracles_agree_on_all_plane_conics(F2):
    smooth = 0
    for f in enumerate_forms(F2, 3, 2):
        t = FormTuple((f,))
        gb, brute = both(t, P2, 2)
        assert gb.smooth == brute.smooth, str(f)
        smooth += gb.smooth
    assert smooth == 28


@pytest.mark.slow
def test_oracles_agree_on_all_plane_cubics(F2):
    for f in enumerate_forms(F2, 3, 3):
        t = FormTuple((f,))
        gb, brute = both(t, P2, 12)
        assert gb.smooth == brute.smooth, str(f)


@pytest.mark.slow
def test_oracles_agree_on_random_conics_over_f3():
    F3 = field_create(3, 1)
    rng = np.random.default_rng(5)
    for _ in range(200):
        t = FormTuple((random_form(F3, 3, 2, rng),))
        gb, brute = both(t, P2, 2)
        assert gb.smooth == brute.smooth, str(t[0])


@pytest.mark.parametrize("seed", range(6))
def test_verdict_ignores_order_and_scaling_in_p3(seed):
    F3 = field_create(3, 1)
    rng = np.random.default_rng(900 + seed)
    f, g = random_form(F3, 4, 2, rng), random_form(F3, 4, 2, rng)
    verdict = is_smooth_gb(FormTuple((f, g)), P3).smooth
    assert is_smooth_gb(FormTuple((g, f)), P3).smooth == verdict
    assert is_smooth_gb(FormTuple((form_scale(f, 2), g)), P3).smooth == verdict
    assert is_smooth_gb(FormTuple((g, form_scale(f, 2))), P3).smooth == verdict


@pytest.mark.parametrize("seed", range(8))
def test_verdict_ignores_scaling_over_f9(seed):
    F9 = field_create(3, 2)
    rng = np.random.default_rng(950 + seed)
    f = random_form(F9, 3, 2, rng)
    c = int(rng.integers(1, F9.q))
    assert is_smooth_gb(FormTuple((form_scale(f, c),)), P2).smooth == is_smooth_gb(FormTuple((f,)), P2).smooth
