import math
from fractions import Fraction

import pytest

from bertini import predict
from bertini.gf import field_create
from bertini.mpoly import parse_form
from bertini.smoothness import VarietyDesc


def test_lin_indep_prob():
    assert predict.lin_indep_prob(2, 2, 0) == 1
    assert predict.lin_indep_prob(2, 2, 1) == Fraction(3, 4)
    assert predict.lin_indep_prob(2, 2, 2) == Fraction(3, 8)
    assert predict.lin_indep_prob(2, 2, 3) == 0
    assert predict.lin_indep_prob(3, 1, 2) == 0
    with pytest.raises(ValueError):
        predict.lin_indep_prob(1, 2, 1)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("e", [1, 2, 3])
def test_local_factor_identities(q, m, e):
    k1 = predict.local_factor(q, m, 1, e)
    assert k1 == 1 - Fraction(1, q ** ((m + 1) * e))
    assert predict.local_factor(q, m, m + 1, e) == k1
    for k in range(1, m + 2):
        assert 0 < predict.local_factor(q, m, k, e) <= 1


def test_closed_point_counts():
    N = [predict.projective_point_count(2, 1, e) for e in range(1, 5)]
    assert N == [3, 5, 9, 17]
    assert predict.closed_point_counts(N) == [3, 1, 2, 3]
    assert predict.closed_point_counts(N, 2) == [3, 1]
    with pytest.raises(ValueError):
        predict.closed_point_counts([3, 4])
    with pytest.raises(ValueError):
        predict.closed_point_counts([3], 2)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_necklace_identity(q, m):
    N = [predict.projective_point_count(q, m, e) for e in range(1, 13)]
    a = predict.closed_point_counts(N)
    for e in range(1, 13):
        assert sum(d * a[d - 1] for d in range(1, e + 1) if e % d == 0) == N[e - 1]


def test_truncated_density_approaches_zeta(F2):
    P2 = VarietyDesc.projective_space(2)
    limit = 1 / predict.zeta_projective(2, 2, 3)
    assert limit == Fraction(21, 64)
    dens = predict.truncated_density(P2, 1, 12, F2)
    assert abs(dens - limit) <= predict.truncation_tail_bound(2, 2, 1, 1, 12)
    assert dens > limit
    # more factors only lower the product
    assert predict.truncated_density(P2, 1, 6, F2) > dens
    with pytest.raises(ValueError):
        predict.truncated_density(P2, 1, 0, F2)
    with pytest.raises(ValueError):
        predict.truncated_density(P2, 1, 4)


def test_truncated_density_on_hypersurface(F2):
    X = VarietyDesc.hypersurface(parse_form("x0*x1 + x2^2", F2, 3))
    # a smooth conic is a P^1
    assert predict.truncated_density(X, 1, 8, F2) == predict.truncated_density(
        VarietyDesc.projective_space(1), 1, 8, F2)


def test_zeta_projective():
    assert predict.zeta_projective(2, 1, 2) == Fraction(8, 3)
    with pytest.raises(ValueError):
        predict.zeta_projective(2, 2, 2)


def test_bernoulli_constants():
    assert predict.bernoulli_p(2, 2, 1) == Fraction(3, 7)
    assert predict.bernoulli_p(2, 3, 2) == Fraction(7, 39)
    assert predict.conditional_density(2, 2, 1, 1, 0) == Fraction(3, 7)
    assert predict.conditional_density(2, 2, 1, 0, 1) == Fraction(4, 7)
    assert predict.conditional_density(2, 2, 1, 2, 1) == Fraction(36, 343)
    with pytest.raises(ValueError):
        predict.conditional_density(2, 2, 1, -1, 0)


@pytest.mark.parametrize("m, k", [(2, 0), (2, 3), (3, 4), (0, 1)])
def test_bernoulli_rejects_k_outside_one_to_m(m, k):
    with pytest.raises(ValueError, match="1 <= k <= m"):
        predict.bernoulli_p(2, m, k)


def test_bernoulli_accepts_k_equal_m():
    # q^-m L(q, m, m) over 1 - q^-m + q^-m L: for q = 2, m = 1 this is (1/2)(1/2) / (3/4)
    assert predict.bernoulli_p(2, 1, 1) == Fraction(1, 3)


def test_model_moments():
    pi = Fraction(3, 7)
    raw = predict.model_moments(7, pi, 3)
    assert raw[0] == 3
    assert raw[1] == Fraction(75, 7)
    central = predict.central_moments(7, pi, 3)
    assert central[0] == 0
    assert central[1] == Fraction(12, 7)
    # third central moment of a binomial: N p (1-p)(1-2p)
    assert central[2] == 7 * pi * (1 - pi) * (1 - 2 * pi)
    std = predict.standardized_moments(7, pi, 4)
    assert std[0] == pytest.approx(0.0, abs=1e-12)
    assert std[1] == pytest.approx(1.0)
    assert std[2] == pytest.approx((1 - 2 * 3 / 7) / math.sqrt(12 / 7))
    assert all(isinstance(v, float) for v in std)
    with pytest.raises(ValueError):
        predict.standardized_moments(7, Fraction(1), 2)


def test_standardized_moments_tend_to_gaussian():
    std = predict.standardized_moments(100000, Fraction(3, 7), 6)
    for ours, gauss in zip(std, predict.gaussian_moments(6)):
        assert ours == pytest.approx(gauss, abs=0.02)
    assert predict.gaussian_moments(6) == [0, 1, 0, 3, 0, 15]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_plane_curve_average(q):
    assert predict.average_curve_identities(q, 2) == q + 1
    assert predict.first_order_average(q, 2, 1) == q + 1


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_curve_average_closed_form(q, n):
    assert predict.average_curve_closed_form(q, n) == predict.average_curve_identities(q, n)


def test_curve_average_decreases_towards_eta():
    q = 2
    averages = [predict.average_curve_identities(q, n) for n in range(2, 9)]
    assert all(a > b for a, b in zip(averages, averages[1:]))
    assert predict.eta_partial_limit(q, 40) < averages[-1]


def test_p3_average_forms():
    forms = predict.p3_average_forms(2)
    assert forms["unsimplified"] == Fraction(35, 13)
    assert forms["simplified"] == Fraction(35, 13)
    assert forms["forms_agree"]
    assert forms["printed"] == Fraction(37, 13)
    assert "37/13" in forms["note"]
    for q in (3, 4, 5, 7):
        f = predict.p3_average_forms(q)
        assert f["forms_agree"]
        assert f["printed"] is None
        assert f["note"] is None


def test_extension_mean_for_curves_in_p3():
    q = 2
    N = [predict.projective_point_count(q, 3, e) for e in (1, 2)]
    assert predict.extension_point_mean(q, 3, 2, N, 1) == Fraction(35, 13)
    assert predict.extension_point_mean(q, 3, 2, N, 2) == Fraction(35, 13) + Fraction(4410, 1087)
    var = predict.extension_point_variance(q, 3, 2, N, 1)
    pi = predict.bernoulli_p(2, 3, 2)
    assert var == 15 * pi * (1 - pi)


def test_extension_mean_expansion():
    # the model mean over F_{q^2} is q^2 + q + 2 - 1/q + O(q^-2)
    q = 101
    N = [predict.projective_point_count(q, 3, e) for e in (1, 2)]
    mean = predict.extension_point_mean(q, 3, 2, N, 2)
    assert abs(mean - (q * q + q + 2 - Fraction(1, q))) < Fraction(5, q * q)


def test_lang_weil_dominates_point_counts():
    for q in (2, 3, 5):
        for m in (1, 2, 3):
            for e in (1, 2, 3):
                assert predict.lang_weil_bound(m, 1, q, e) >= predict.projective_point_count(q, m, e)


def test_error_bound():
    # vacuous for small degrees
    assert predict.error_bound(2, 2, 2, 1, 1, 0, [4]) == 1
    assert predict.truncation_for_error(2, 2, 1, 0, 4) == 0
    small = predict.error_bound(101, 1, 1, 1, 1, 0, [1000])
    assert 0 < small < Fraction(1, 1000)
    assert predict.truncation_for_error(101, 1, 1, 0, 1000) == 2
    larger = predict.error_bound(101, 1, 1, 1, 1, 0, [1000 * 101])
    assert larger <= small
    with pytest.raises(ValueError):
        predict.error_bound(2, 2, 2, 1, 1, 5, [4])
    with pytest.raises(ValueError):
        predict.error_bound(2, 2, 2, 2, 1, 0, [5, 4])


def test_rational_json():
    assert predict.rational_json(Fraction(21, 64)) == {"exact": "21/64", "approx": 0.328125}
    assert predict.rational_json(None) is None
    assert predict.rational_json(Fraction(1, 3))["approx"] == 0.333333333333333


def test_build_report_plane(F2):
    report = predict.build_report(VarietyDesc.projective_space(2), F2, 1, 12, degrees=[6], contain=1)
    assert (report.q, report.m, report.k, report.r) == (2, 2, 1, 12)
    assert report.pi == Fraction(3, 7)
    assert report.rational_points == 7
    assert report.model_mean == 3
    assert report.model_variance == Fraction(12, 7)
    assert report.average_points == 3
    assert report.conditional_density == Fraction(3, 7)
    assert report.error_bound == 1
    assert abs(report.truncated_density - Fraction(21, 64)) < Fraction(1, 512)
    d = report.to_dict()
    assert d["pi"] == {"exact": "3/7", "approx": 0.428571428571429}
    assert d["tail_bound"]["exact"] == "1/512"
    assert d["p3_average"] is None


def test_build_report_notes(F2):
    report = predict.build_report(VarietyDesc.projective_space(1), F2, 2, 8)
    assert report.pi is None
    assert any("k = m+1" in note for note in report.notes)
    p3 = predict.build_report(VarietyDesc.projective_space(3), F2, 2, 8, count_extensions=2)
    assert p3.p3_average["printed"] == Fraction(37, 13)
    assert p3.extension_means[2] == Fraction(35, 13) + Fraction(4410, 1087)
    assert any("37/13" in note for note in p3.notes)
    vacuous = predict.build_report(VarietyDesc.projective_space(2), F2, 1, 1)
    assert any("vacuous" in note for note in vacuous.notes)
    with pytest.raises(ValueError):
        predict.build_report(VarietyDesc.projective_space(2), F2, 4, 8)


def test_build_report_hypersurface(F2):
    X = VarietyDesc.hypersurface(parse_form("x0*x1 + x2^2", F2, 3))
    report = predict.build_report(X, F2, 1, 6, count_extensions=2)
    assert report.rational_points == 3
    assert report.degX == 2
    assert report.pi == predict.bernoulli_p(2, 1, 1)
    assert any("empty intersections" in note for note in report.notes)
    with pytest.raises(ValueError):
        predict.build_report(X, field_create(3, 1), 1, 6)
