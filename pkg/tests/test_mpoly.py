import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from bertini.gf import EnumerationBoundExceeded, FieldElem, field_create, power
from bertini.groebner import AffinePoly
from bertini.mpoly import (
    Form,
    FormTuple,
    dehomogenize,
    determinant,
    enumerate_forms,
    evaluate,
    evaluate_values,
    form_add,
    form_at_index,
    form_mul,
    form_scale,
    form_space_size,
    jacobian,
    maximal_minors,
    monomial_count,
    monomials,
    parse_form,
    partial_derivative,
    random_form,
)


def var(F, nvars, i):
    exp = [0] * nvars
    exp[i] = 1
    return Form(F, nvars, 1, {tuple(exp): 1})


def test_monomial_order():
    assert monomials(3, 2) == (
        (2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2),
    )
    assert monomials(2, 0) == ((0, 0),)
    for nvars in (1, 2, 3, 4):
        for d in range(6):
            assert len(monomials(nvars, d)) == monomial_count(nvars, d)


def test_enumeration_starts_at_zero_and_matches_index(F2):
    forms = list(enumerate_forms(F2, 3, 1))
    assert len(forms) == form_space_size(F2, 3, 1) == 8
    assert forms[0].is_zero()
    assert forms[1] == var(F2, 3, 0)
    assert len(set(forms)) == 8
    for i, f in enumerate(forms):
        assert form_at_index(F2, 3, 1, i) == f


def test_enumeration_bound(F2):
    with pytest.raises(EnumerationBoundExceeded):
        enumerate_forms(F2, 3, 2, bound=63)


def test_random_form_is_reproducible(F3):
    a = random_form(F3, 3, 4, np.random.default_rng(11))
    b = random_form(F3, 3, 4, np.random.default_rng(11))
    assert a == b
    assert a.degree == 4
    assert all(0 < c < 3 for c in a.terms.values())


def test_form_rejects_bad_terms(F2):
    with pytest.raises(ValueError):
        Form(F2, 3, 2, {(1, 0, 0): 1})
    with pytest.raises(ValueError):
        Form(F2, 3, 1, {(1, 0, 0): 0})


def test_arithmetic(F3):
    x0, x1 = var(F3, 2, 0), var(F3, 2, 1)
    s = form_add(x0, x1)
    sq = form_mul(s, s)
    assert sq == parse_form("x0^2 + 2*x0*x1 + x1^2", F3, 2)
    assert (s - s).is_zero()
    assert form_scale(s, 2) == parse_form("2*x0 + 2*x1", F3, 2)
    with pytest.raises(ValueError):
        form_add(x0, form_mul(x0, x0))


def test_derivatives_respect_characteristic(F2, F3):
    f = parse_form("x0^2 + x0*x1", F2, 2)
    assert partial_derivative(f, 0) == parse_form("x1", F2, 2)
    assert partial_derivative(f, 1) == parse_form("x0", F2, 2)
    g = parse_form("x0^3 + x0^2*x1", F3, 2)
    assert partial_derivative(g, 0) == parse_form("2*x0*x1", F3, 2)
    c = Form(F3, 2, 0, {(0, 0): 1})
    assert partial_derivative(c, 0).is_zero()


F9 = field_create(3, 2)


def forms_over(F, nvars, degree):
    size = monomial_count(nvars, degree)
    coeffs = st.lists(st.integers(0, F.q - 1), min_size=size, max_size=size)
    return coeffs.map(lambda v: Form.from_vector(F, nvars, degree, v))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(5, 1), (3, 2), (2, 2)]), st.integers(1, 5), st.data())
def test_euler_relation(ps, d, data):
    F = field_create(*ps)
    nvars = 3
    f = data.draw(forms_over(F, nvars, d))
    lhs = Form.zero(F, nvars, d)
    for i in range(nvars):
        lhs = form_add(lhs, form_mul(var(F, nvars, i), partial_derivative(f, i)))
    # d as an element of the prime field
    assert lhs == form_scale(f, d % F.p)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4), st.data())
def test_homogeneity_over_f9(d, data):
    f = data.draw(forms_over(F9, 3, d))
    coords = data.draw(st.lists(st.integers(0, F9.q - 1), min_size=3, max_size=3).filter(any))
    point = [FieldElem(F9, v) for v in coords]
    lam = FieldElem(F9, data.draw(st.integers(1, F9.q - 1)))
    scaled = [lam * x for x in point]
    assert evaluate(f, scaled) == power(lam, d) * evaluate(f, point)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2), st.data())
def test_derivative_is_linear_and_leibniz(df, dg, i, data):
    f = data.draw(forms_over(F9, 3, df))
    h = data.draw(forms_over(F9, 3, df))
    g = data.draw(forms_over(F9, 3, dg))
    c = data.draw(st.integers(0, F9.q - 1))
    d = partial_derivative

    assert d(form_add(f, h), i) == form_add(d(f, i), d(h, i))
    assert d(form_scale(f, c), i) == form_scale(d(f, i), c)
    assert d(form_mul(f, g), i) == form_add(form_mul(d(f, i), g), form_mul(f, d(g, i)))


def test_random_form_coefficients_are_uniform():
    F = field_create(5, 1)
    rng = np.random.default_rng(2024)
    draws = np.concatenate([random_form(F, 3, 3, rng).vector() for _ in range(1000)])
    observed = np.bincount(draws, minlength=F.q)
    assert observed.sum() == 1000 * monomial_count(3, 3)
    assert stats.chisquare(observed).pvalue > 1e-3


def test_evaluate_over_extension(F2, F4):
    f = parse_form("x0^2 + x0*x1 + x1^2", F2, 2)
    t = F4.element([0, 1])
    one = FieldElem(F4, 1)
    assert evaluate(f, [one, t]).value == 0
    assert evaluate_values(f, [1, 1], F2) == 1
    with pytest.raises(ValueError):
        evaluate_values(f, [1], F2)


def test_dehomogenize(F2):
    f = parse_form("x0*x1 + x2^2", F2, 3)
    a = dehomogenize(f, 2)
    assert a == AffinePoly.from_terms(F2, 2, {(1, 1): 1, (0, 0): 1})
    b = dehomogenize(parse_form("x0 + x1", F2, 2), 0)
    assert b == AffinePoly.from_terms(F2, 1, {(0,): 1, (1,): 1})
    # x0^2 + x0*x2 on the chart x0 = 1 collapses to 1 + y1
    c = dehomogenize(parse_form("x0^2 + x0*x2", F2, 3), 0)
    assert c == AffinePoly.from_terms(F2, 2, {(0, 0): 1, (0, 1): 1})


def test_jacobian_and_minors(F3):
    t = FormTuple((parse_form("x0", F3, 3), parse_form("x1*x2", F3, 3)))
    J = jacobian(t)
    assert [[str(e) for e in row] for row in J] == [["1", "0", "0"], ["0", "1*x2", "1*x1"]]
    minors = maximal_minors(J)
    assert len(minors) == 3
    assert [str(m) for m in minors] == ["1*x2", "1*x1", "0"]
    x0, x1 = var(F3, 3, 0), var(F3, 3, 1)
    assert determinant([[x0, x1], [x1, x0]]) == parse_form("x0^2 + 2*x1^2", F3, 3)


def test_form_tuple_checks(F2, F3):
    a, b = parse_form("x0^2", F2, 3), parse_form("x1", F2, 3)
    with pytest.raises(ValueError):
        FormTuple((a, b))
    with pytest.raises(ValueError):
        FormTuple((b, parse_form("x1", F3, 3)))
    t = FormTuple((b, a))
    assert (t.k, t.degrees, t.nvars) == (2, (1, 2), 3)


def test_text_format(F2, F4):
    f = parse_form("x1*x2 + x0^2", F2, 3)
    assert str(f) == "1*x0^2 + 1*x1*x2"
    assert parse_form(str(f), F2, 3) == f
    assert str(Form.zero(F2, 3, 2)) == "0"
    assert parse_form("0", F2, 3, degree=2).is_zero()
    g = parse_form("[0,1]*x0 + x1", F4, 2)
    assert str(g) == "[0,1]*x0 + [1,0]*x1"
    # terms that cancel leave the zero form
    assert parse_form("x0 + x0", F2, 2, degree=1).is_zero()


@pytest.mark.parametrize("text", ["x0^2 + x1", "x3", "2*y0", "x0 + + x1"])
def test_text_format_rejects_garbage(F3, text):
    with pytest.raises(ValueError):
        parse_form(text, F3, 3)


def test_zero_form_needs_degree(F2):
    with pytest.raises(ValueError):
        parse_form("0", F2, 3)
