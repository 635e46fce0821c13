"""
Homogeneous forms over F_q in n+1 variables x0..xn.

A Form stores a sparse map exponent-vector -> encoded coefficient. The
canonical monomial order for S_d is descending grevlex; coefficient vectors
are indexed in that order, and enumerate_forms walks them in colex order
(coefficient of the first monomial varies fastest), so the zero form is first.

Text format: "c*x0^a0*x1^a1 + ...", coefficients as integers over a prime
field or power-basis vectors "[c0,c1,...]" over an extension; "0" is the
zero form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from bertini.gf import (
    EnumerationBoundExceeded,
    FieldDesc,
    FieldElem,
    embedding_table,
)
from bertini.groebner import AffinePoly, Monomial, grevlex_key
from config.settings import get_limits


# ============================================================================
# Monomials
# ============================================================================

@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> Tuple[Monomial, ...]:
    """All exponent vectors of total degree d in nvars variables, descending grevlex."""
    if nvars < 1:
        raise ValueError(f"need at least one variable, got {nvars}")
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got {d}")
    out: List[Monomial] = []

    def rec(prefix: List[int], left: int, remaining: int) -> None:
        if remaining == 1:
            out.append(tuple(prefix + [left]))
            return
        for a in range(left, -1, -1):
            rec(prefix + [a], left - a, remaining - 1)

    rec([], d, nvars)
    out.sort(key=grevlex_key, reverse=True)
    return tuple(out)


def monomial_count(nvars: int, d: int) -> int:
    """C(n+d, d) with n = nvars - 1."""
    return comb(nvars - 1 + d, d)


# ============================================================================
# Forms
# ============================================================================

@dataclass(frozen=True, eq=False)
class Form:
    field: FieldDesc
    nvars: int
    degree: int
    terms: Dict[Monomial, int]

    def __post_init__(self):
        for exp, c in self.terms.items():
            if len(exp) != self.nvars or sum(exp) != self.degree:
                raise ValueError(f"monomial {exp} does not belong to S_{self.degree} in {self.nvars} variables")
            if not c:
                raise ValueError(f"zero coefficient stored for {exp}")

    @classmethod
    def zero(cls, field: FieldDesc, nvars: int, degree: int) -> "Form":
        return cls(field, nvars, degree, {})

    @classmethod
    def from_vector(cls, field: FieldDesc, nvars: int, degree: int, coeffs: Sequence[int]) -> "Form":
        monos = monomials(nvars, degree)
        if len(coeffs) != len(monos):
            raise ValueError(f"expected {len(monos)} coefficients, got {len(coeffs)}")
        return cls(field, nvars, degree, {m: int(c) for m, c in zip(monos, coeffs) if c})

    def vector(self) -> List[int]:
        """Coefficients in canonical monomial order."""
        return [self.terms.get(m, 0) for m in monomials(self.nvars, self.degree)]

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (self.field, self.nvars, self.degree, self.terms) == (
            other.field, other.nvars, other.degree, other.terms)

    def __hash__(self) -> int:
        return hash((self.field, self.nvars, self.degree, frozenset(self.terms.items())))

    def __str__(self) -> str:
        return format_form(self)

    __repr__ = __str__

    def __add__(self, other: "Form") -> "Form":
        return form_add(self, other)

    def __sub__(self, other: "Form") -> "Form":
        return form_sub(self, other)

    def __mul__(self, other: "Form") -> "Form":
        return form_mul(self, other)


@dataclass(frozen=True)
class FormTuple:
    """k forms with ascending degrees over a common field and variable count."""
    forms: Tuple[Form, ...]

    def __post_init__(self):
        forms = tuple(self.forms)
        object.__setattr__(self, "forms", forms)
        if not forms:
            raise ValueError("a form tuple needs at least one form")
        F, nv = forms[0].field, forms[0].nvars
        for f in forms[1:]:
            if f.field != F:
                raise ValueError(f"forms over different fields: {F} and {f.field}")
            if f.nvars != nv:
                raise ValueError(f"forms in different variable counts: {nv} and {f.nvars}")
        degs = [f.degree for f in forms]
        if degs != sorted(degs):
            raise ValueError(f"degrees must be ascending, got {degs}")

    @property
    def k(self) -> int:
        return len(self.forms)

    @property
    def field(self) -> FieldDesc:
        return self.forms[0].field

    @property
    def nvars(self) -> int:
        return self.forms[0].nvars

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(f.degree for f in self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __len__(self) -> int:
        return len(self.forms)

    def __getitem__(self, i: int) -> Form:
        return self.forms[i]


# ============================================================================
# Arithmetic
# ============================================================================

def _same_ring(f: Form, g: Form) -> None:
    if f.field != g.field or f.nvars != g.nvars:
        raise ValueError(f"forms live in different rings: {f.field}[{f.nvars}] vs {g.field}[{g.nvars}]")


def form_add(f: Form, g: Form) -> Form:
    _same_ring(f, g)
    if f.degree != g.degree:
        raise ValueError(f"cannot add forms of degrees {f.degree} and {g.degree}")
    F = f.field
    out = dict(f.terms)
    for e, c in g.terms.items():
        v = F.add(out.get(e, 0), c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return Form(F, f.nvars, f.degree, out)


def form_scale(f: Form, c: int) -> Form:
    """c * f for an encoded field value c."""
    F = f.field
    if c == 0:
        return Form.zero(F, f.nvars, f.degree)
    return Form(F, f.nvars, f.degree, {e: F.mul(v, c) for e, v in f.terms.items()})


def form_sub(f: Form, g: Form) -> Form:
    return form_add(f, form_scale(g, g.field.neg(1)))


def form_mul(f: Form, g: Form) -> Form:
    _same_ring(f, g)
    F = f.field
    out: Dict[Monomial, int] = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = F.add(out.get(e, 0), F.mul(c1, c2))
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return Form(F, f.nvars, f.degree + g.degree, out)


# ============================================================================
# Sampling / enumeration
# ============================================================================

def random_form(field: FieldDesc, nvars: int, d: int, rng: np.random.Generator) -> Form:
    """
    Uniform element of S_d: every monomial coefficient drawn independently
    from F_q (the zero form included).
    """
    M = monomial_count(nvars, d)
    coeffs = rng.integers(0, field.q, size=M)
    return Form.from_vector(field, nvars, d, coeffs.tolist())


def form_space_size(field: FieldDesc, nvars: int, d: int) -> int:
    return field.q ** monomial_count(nvars, d)


def enumerate_forms(field: FieldDesc, nvars: int, d: int, bound: Optional[int] = None) -> Iterator[Form]:
    """
    All q^{C(n+d,d)} forms of degree d, coefficient vectors in colex order.

    Raises:
        EnumerationBoundExceeded: when the count exceeds the configured form bound
    """
    bound = bound if bound is not None else get_limits().form_bound
    total = form_space_size(field, nvars, d)
    if total > bound:
        raise EnumerationBoundExceeded(
            f"S_{d} over {field} in {nvars} variables has {total} forms, bound is {bound}"
        )
    return _walk_forms(field, nvars, d, total)


def _walk_forms(field: FieldDesc, nvars: int, d: int, total: int) -> Iterator[Form]:
    monos = monomials(nvars, d)
    q = field.q
    for code in range(total):
        terms = {}
        for m in monos:
            code, c = divmod(code, q)
            if c:
                terms[m] = c
        yield Form(field, nvars, d, terms)


def form_at_index(field: FieldDesc, nvars: int, d: int, index: int) -> Form:
    """The index-th form of enumerate_forms."""
    q = field.q
    coeffs = []
    for _ in monomials(nvars, d):
        index, c = divmod(index, q)
        coeffs.append(c)
    return Form.from_vector(field, nvars, d, coeffs)


# ============================================================================
# Evaluation
# ============================================================================

def evaluate_values(f: Form, values: Sequence[int], target: FieldDesc) -> int:
    """f at a point given as encoded values of `target` (an extension of f.field)."""
    if len(values) != f.nvars:
        raise ValueError(f"point has {len(values)} coordinates, form has {f.nvars} variables")
    table = embedding_table(f.field, target) if target != f.field else None
    powers: Dict[Tuple[int, int], int] = {}
    acc = 0
    for exp, c in f.terms.items():
        v = table[c] if table is not None else c
        for i, k in enumerate(exp):
            if k:
                key = (i, k)
                pw = powers.get(key)
                if pw is None:
                    pw = powers[key] = target.power(values[i], k)
                v = target.mul(v, pw)
                if not v:
                    break
        acc = target.add(acc, v)
    return acc


def evaluate(f: Form, point: Sequence[FieldElem]) -> FieldElem:
    """
    Value of f at a point of F_{q^e}^{n+1}; coefficients are embedded into the
    point's field.
    """
    if len(point) != f.nvars:
        raise ValueError(f"point has {len(point)} coordinates, form has {f.nvars} variables")
    target = point[0].field
    for x in point:
        if x.field != target:
            raise ValueError(f"mixed-field point coordinates: {target} and {x.field}")
    return FieldElem(target, evaluate_values(f, [x.value for x in point], target))


# ============================================================================
# Derivatives, charts, Jacobians
# ============================================================================

def partial_derivative(f: Form, i: int) -> Form:
    """Formal derivative in x_i; exponents are reduced mod p, so d/dx x^p = 0."""
    if not 0 <= i < f.nvars:
        raise ValueError(f"variable index {i} out of range for {f.nvars} variables")
    F = f.field
    if f.degree == 0:
        return Form.zero(F, f.nvars, 0)
    out: Dict[Monomial, int] = {}
    for exp, c in f.terms.items():
        k = exp[i] % F.p
        if not k:
            continue
        e = list(exp)
        e[i] -= 1
        v = F.mul(c, F.constant(k))
        if v:
            out[tuple(e)] = v
    return Form(F, f.nvars, f.degree - 1, out)


def dehomogenize(f: Form, chart: int) -> AffinePoly:
    """Set x_chart = 1; the remaining variables keep their relative order."""
    if not 0 <= chart < f.nvars:
        raise ValueError(f"chart {chart} out of range for {f.nvars} variables")
    F = f.field
    out: Dict[Monomial, int] = {}
    for exp, c in f.terms.items():
        e = exp[:chart] + exp[chart + 1:]
        v = F.add(out.get(e, 0), c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return AffinePoly(F, f.nvars - 1, out)


def jacobian(t: FormTuple) -> List[List[Form]]:
    """k x (n+1) matrix with entry (i, j) = d f_i / d x_j."""
    return [[partial_derivative(f, j) for j in range(f.nvars)] for f in t]


def determinant(rows: Sequence[Sequence[Form]]) -> Form:
    """Determinant of a square matrix of forms (Laplace expansion along row 0)."""
    size = len(rows)
    if size == 1:
        return rows[0][0]
    F = rows[0][0].field
    minus_one = F.neg(1)
    total: Optional[Form] = None
    for col in range(size):
        entry = rows[0][col]
        sub = [list(r[:col]) + list(r[col + 1:]) for r in rows[1:]]
        term = form_mul(entry, determinant(sub))
        if col % 2:
            term = form_scale(term, minus_one)
        total = term if total is None else form_add(total, term)
    return total


def maximal_minors(matrix: Sequence[Sequence[Form]]) -> List[Form]:
    """All size x size minors of a size x ncols matrix (columns in lexicographic order)."""
    size = len(matrix)
    ncols = len(matrix[0])
    out = []
    for cols in combinations(range(ncols), size):
        out.append(determinant([[row[c] for c in cols] for row in matrix]))
    return out


# ============================================================================
# Text format
# ============================================================================

def _format_coeff(F: FieldDesc, c: int) -> str:
    if F.s == 1:
        return str(c)
    return "[" + ",".join(str(d) for d in F.digits(c)) + "]"


def format_form(f: Form) -> str:
    if not f.terms:
        return "0"
    parts = []
    for m in monomials(f.nvars, f.degree):
        c = f.terms.get(m)
        if not c:
            continue
        factors = [_format_coeff(f.field, c)]
        for i, a in enumerate(m):
            if a == 1:
                factors.append(f"x{i}")
            elif a > 1:
                factors.append(f"x{i}^{a}")
        parts.append("*".join(factors))
    return " + ".join(parts)


_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def _parse_coeff(F: FieldDesc, text: str) -> int:
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"unterminated coefficient vector {text!r}")
        body = text[1:-1].strip()
        digits = [int(x) for x in body.split(",")] if body else []
        return F.from_digits(digits)
    return F.constant(int(text))


def parse_form(text: str, field: FieldDesc, nvars: int, degree: Optional[int] = None) -> Form:
    """
    Parse the text format back into a Form.

    Args:
        text: e.g. "1*x0^2 + 1*x1*x2" (coefficients may be omitted)
        field: coefficient field
        nvars: number of variables n+1
        degree: required for the zero form; otherwise checked against the terms

    Raises:
        ValueError: malformed text, variable out of range, or inhomogeneous terms
    """
    text = (text or "").strip()
    if text in ("", "0"):
        if degree is None:
            raise ValueError("degree is required to parse the zero form")
        return Form.zero(field, nvars, degree)

    terms: Dict[Monomial, int] = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValueError(f"empty term in {text!r}")
        coeff = 1
        exp = [0] * nvars
        for factor in chunk.split("*"):
            factor = factor.strip()
            m = _FACTOR.match(factor)
            if m:
                i = int(m.group(1))
                if i >= nvars:
                    raise ValueError(f"variable x{i} out of range for {nvars} variables")
                exp[i] += int(m.group(2) or 1)
            else:
                try:
                    coeff = field.mul(coeff, _parse_coeff(field, factor))
                except ValueError:
                    raise ValueError(f"cannot parse factor {factor!r} in {text!r}") from None
        e = tuple(exp)
        v = field.add(terms.get(e, 0), coeff)
        if v:
            terms[e] = v
        else:
            terms.pop(e, None)

    degs = {sum(e) for e in terms}
    if len(degs) > 1:
        raise ValueError(f"form is not homogeneous: degrees {sorted(degs)}")
    if not terms:
        if degree is None:
            raise ValueError("degree is required to parse the zero form")
        return Form.zero(field, nvars, degree)
    d = degs.pop()
    if degree is not None and d != degree:
        raise ValueError(f"expected degree {degree}, got {d}")
    return Form(field, nvars, d, terms)
