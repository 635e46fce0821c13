"""
Smoothness of H_f ∩ X for X = P^n or a smooth hypersurface V(g) ⊂ P^n.

Two oracles:
    * is_smooth_gb: exact. The singular locus is cut out by the f_i (and g)
      together with the maximal minors of the (stacked) Jacobian; it is empty
      iff the dehomogenized ideal is trivial on every chart x_c = 1.
    * is_smooth_brute(E): pointwise Jacobian criterion over all points of
      P^n(F_{q^e}), e <= E. Sound refutation; complete once E reaches the
      degree of any singular point.

Point scans sweep fibers of the last coordinate: for a canonical prefix
(x_0..x_{n-1}) every generator restricts to a univariate polynomial in x_n,
and the F_{q^e}-points on that fiber are the F_{q^e}-roots of their gcd.
The point (0:...:0:1) is checked on its own.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from bertini.gf import (
    EnumerationBoundExceeded,
    FieldDesc,
    UPoly,
    embedding_table,
    field_create,
    upoly_count_roots,
    upoly_first_root,
    upoly_gcd,
    upoly_trim,
)
from bertini.groebner import IdealBasis, ideal_is_trivial
from bertini.mpoly import (
    Form,
    FormTuple,
    dehomogenize,
    evaluate_values,
    maximal_minors,
    partial_derivative,
)
from config.settings import get_limits

PROJECTIVE = "projective"
HYPERSURFACE = "hypersurface"


# ============================================================================
# Types
# ============================================================================

@dataclass(frozen=True)
class VarietyDesc:
    """Ambient X: all of P^n, or a smooth hypersurface V(g) ⊂ P^n."""
    nvars: int
    kind: str = PROJECTIVE
    g: Optional[Form] = None

    @classmethod
    def projective_space(cls, n: int) -> "VarietyDesc":
        if n < 0:
            raise ValueError(f"projective dimension must be nonnegative, got {n}")
        return cls(n + 1, PROJECTIVE, None)

    @classmethod
    def hypersurface(cls, g: Form, budget: Optional[int] = None) -> "VarietyDesc":
        """
        X = V(g). g must be smooth as a single section of P^n.

        Raises:
            ValueError: g constant or singular
        """
        if g.degree < 1:
            raise ValueError("hypersurface equation must have positive degree")
        verdict = is_smooth_gb(FormTuple((g,)), cls.projective_space(g.nvars - 1), budget=budget)
        if not verdict.smooth:
            raise ValueError(f"V({g}) is not smooth")
        return cls(g.nvars, HYPERSURFACE, g)

    @property
    def n(self) -> int:
        return self.nvars - 1

    @property
    def m(self) -> int:
        return self.n if self.kind == PROJECTIVE else self.n - 1

    @property
    def degX(self) -> int:
        return 1 if self.kind == PROJECTIVE else self.g.degree

    def __str__(self) -> str:
        return f"P^{self.n}" if self.kind == PROJECTIVE else f"V({self.g}) in P^{self.n}"

    def check_tuple(self, t: FormTuple) -> None:
        if t.nvars != self.nvars:
            raise ValueError(f"forms have {t.nvars} variables, X lives in P^{self.n}")
        if self.g is not None and self.g.field != t.field:
            raise ValueError(f"forms over {t.field}, X defined over {self.g.field}")


@dataclass(frozen=True)
class ProjPoint:
    """
    A point of P^n(F_{q^e}) with canonical coordinates (first nonzero = 1).

    coords are encoded values of `field` = F_{q^e}; degree is the least e'
    with every coordinate in F_{q^e'}.
    """
    field: FieldDesc
    e: int
    coords: Tuple[int, ...]
    degree: int

    def to_dict(self) -> dict:
        if self.field.s == 1:
            coords = list(self.coords)
        else:
            coords = [list(self.field.digits(c)) for c in self.coords]
        return {"e": self.e, "degree": self.degree, "coords": coords}


@dataclass(frozen=True)
class SmoothnessVerdict:
    smooth: bool
    witness: Optional[ProjPoint] = None
    method: str = "gb"
    # hypersurface X with k = m: smooth because H_f ∩ X is empty
    empty: bool = False


# ============================================================================
# Fields and points
# ============================================================================

def extension(base: FieldDesc, e: int) -> FieldDesc:
    """F_{q^e} for q = |base|, subject to the configured field bound."""
    if e < 1:
        raise ValueError(f"extension degree must be positive, got {e}")
    return base if e == 1 else field_create(base.p, base.s * e)


def point_degree(base: FieldDesc, ext: FieldDesc, coords: Sequence[int]) -> int:
    e = ext.s // base.s
    for d in range(1, e + 1):
        if e % d == 0 and all(ext.in_subfield(c, base.s * d) for c in coords):
            return d
    return e


def make_point(base: FieldDesc, ext: FieldDesc, coords: Sequence[int]) -> ProjPoint:
    """Canonicalize coords (divide by the first nonzero entry)."""
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    if lead != 1:
        li = ext.inv(lead)
        coords = [ext.mul(c, li) for c in coords]
    coords = tuple(coords)
    return ProjPoint(ext, ext.s // base.s, coords, point_degree(base, ext, coords))


def projective_point_total(Q: int, n: int) -> int:
    """#P^n(F_Q)."""
    return (Q ** (n + 1) - 1) // (Q - 1)


def _canonical_vectors(Q: int, length: int) -> Iterator[Tuple[int, ...]]:
    """Nonzero vectors of F_Q^length with first nonzero entry 1, lead position first."""
    for lead in range(length):
        head = (0,) * lead + (1,)
        for tail in product(range(Q), repeat=length - lead - 1):
            yield head + tail[::-1]


def enumerate_projective_points(
    n: int, base: FieldDesc, e: int = 1, bound: Optional[int] = None
) -> List[ProjPoint]:
    """
    All points of P^n(F_{q^e}), canonical representatives, no duplicates.

    Raises:
        EnumerationBoundExceeded: more points than the configured point bound
    """
    bound = bound if bound is not None else get_limits().point_bound
    ext = extension(base, e)
    total = projective_point_total(ext.q, n)
    if total > bound:
        raise EnumerationBoundExceeded(f"P^{n}({ext}) has {total} points, bound is {bound}")
    return [
        ProjPoint(ext, e, v, point_degree(base, ext, v))
        for v in _canonical_vectors(ext.q, n + 1)
    ]


# ============================================================================
# Pointwise criterion
# ============================================================================

def matrix_rank(F: FieldDesc, rows: Sequence[Sequence[int]]) -> int:
    """Rank over F by Gaussian elimination."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    rank, ncols = 0, len(M[0])
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(M)) if M[r][col]), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        inv = F.inv(M[rank][col])
        M[rank] = [F.mul(x, inv) for x in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][col]:
                c = M[r][col]
                M[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(M[r], M[rank])]
        rank += 1
        if rank == len(M):
            break
    return rank


def _equations(t: FormTuple, X: VarietyDesc) -> List[Form]:
    X.check_tuple(t)
    eqs = list(t.forms)
    if X.kind == HYPERSURFACE:
        eqs.append(X.g)
    return eqs


@lru_cache(maxsize=4096)
def _gradients(eqs: Tuple[Form, ...]) -> Tuple[Tuple[Form, ...], ...]:
    return tuple(tuple(partial_derivative(f, j) for j in range(f.nvars)) for f in eqs)


def _smooth_at(eqs: Sequence[Form], ext: FieldDesc, coords: Sequence[int]) -> bool:
    if any(evaluate_values(f, coords, ext) for f in eqs):
        return True
    grads = _gradients(tuple(eqs))
    rows = [[evaluate_values(d, coords, ext) for d in row] for row in grads]
    return matrix_rank(ext, rows) == len(eqs)


def is_smooth_at_point(t: FormTuple, X: VarietyDesc, pt: ProjPoint) -> bool:
    """
    True iff some equation is nonzero at pt, or all vanish and the Jacobian
    (with the gradient of g stacked below for hypersurface X) has full row
    rank at pt.
    """
    if len(pt.coords) != t.nvars:
        raise ValueError(f"point has {len(pt.coords)} coordinates, forms have {t.nvars} variables")
    return _smooth_at(_equations(t, X), pt.field, pt.coords)


# ============================================================================
# Groebner oracle
# ============================================================================

def singular_locus_generators(t: FormTuple, X: VarietyDesc) -> List[Form]:
    """
    Homogeneous generators of the singular locus of H_f ∩ X: the equations
    plus all maximal minors of their Jacobian. For k = m + 1 the intersection
    must be empty and the equations alone are returned.
    """
    eqs = _equations(t, X)
    if not 1 <= t.k <= X.m + 1:
        raise ValueError(f"need 1 <= k <= m+1 = {X.m + 1}, got k = {t.k}")
    if t.k == X.m + 1:
        return eqs
    jac = [list(row) for row in _gradients(tuple(eqs))]
    out = list(eqs)
    seen = set(eqs)
    for minor in maximal_minors(jac):
        if minor.terms and minor not in seen:
            seen.add(minor)
            out.append(minor)
    return out


def _empty_on_all_charts(gens: Sequence[Form], budget: Optional[int]) -> bool:
    nvars = gens[0].nvars
    for chart in range(nvars):
        affine = [dehomogenize(h, chart) for h in gens]
        if not ideal_is_trivial(IdealBasis(a for a in affine if a.terms), budget):
            return False
    return True


def intersection_is_empty(t: FormTuple, X: VarietyDesc, budget: Optional[int] = None) -> bool:
    """True iff H_f ∩ X has no point over the algebraic closure."""
    return _empty_on_all_charts(_equations(t, X), budget)


def is_smooth_gb(t: FormTuple, X: VarietyDesc, budget: Optional[int] = None) -> SmoothnessVerdict:
    """
    Exact verdict via Groebner bases, chart by chart.

    Raises:
        GroebnerBudgetExceeded: the caller records the trial as undecided
    """
    gens = singular_locus_generators(t, X)
    smooth = _empty_on_all_charts(gens, budget)
    empty = False
    if smooth and X.kind == HYPERSURFACE and t.k == X.m:
        empty = intersection_is_empty(t, X, budget)
    return SmoothnessVerdict(smooth, None, "gb", empty)


# ============================================================================
# Fiber sweep
# ============================================================================

class _Restrictor:
    """Restriction of a form to the fibers x_0..x_{n-1} = prefix, over a fixed extension."""

    def __init__(self, f: Form, ext: FieldDesc):
        self.ext = ext
        table = embedding_table(f.field, ext) if f.field != ext else None
        self.buckets: Dict[int, List[Tuple[Tuple[int, ...], int]]] = {}
        for exp, c in f.terms.items():
            v = table[c] if table is not None else c
            self.buckets.setdefault(exp[-1], []).append((exp[:-1], v))
        self.degree = f.degree

    def __call__(self, powers: Sequence[Sequence[int]]) -> UPoly:
        F = self.ext
        out = [0] * (self.degree + 1)
        for j, items in self.buckets.items():
            acc = 0
            for exp, c in items:
                v = c
                for i, a in enumerate(exp):
                    if a:
                        v = F.mul(v, powers[i][a])
                        if not v:
                            break
                acc = F.add(acc, v)
            out[j] = acc
        return upoly_trim(out)


def _prefix_powers(F: FieldDesc, prefix: Sequence[int], top: int) -> List[List[int]]:
    rows = []
    for x in prefix:
        row = [1]
        for _ in range(top):
            row.append(F.mul(row[-1], x))
        rows.append(row)
    return rows


def _sweep(
    eqs: Sequence[Form],
    base: FieldDesc,
    e: int,
    bound: Optional[int],
) -> Iterator[Tuple[Tuple[int, ...], UPoly, FieldDesc, List[_Restrictor]]]:
    """Yield (prefix, gcd of restricted eqs, extension, restrictors) per fiber."""
    ext = extension(base, e)
    nvars = eqs[0].nvars
    n = nvars - 1
    bound = bound if bound is not None else get_limits().point_bound
    fibers = projective_point_total(ext.q, n - 1) if n >= 1 else 0
    if fibers > bound:
        raise EnumerationBoundExceeded(f"sweeping P^{n}({ext}) visits {fibers} fibers, bound is {bound}")
    restrictors = [_Restrictor(f, ext) for f in eqs]
    top = max(f.degree for f in eqs)
    if n == 0:
        return
    for prefix in _canonical_vectors(ext.q, n):
        powers = _prefix_powers(ext, prefix, top)
        h: UPoly = []
        for r in restrictors:
            h = upoly_gcd(ext, h, r(powers))
            if len(h) == 1:
                break
        yield prefix, h, ext, restrictors


def _special_point(nvars: int) -> Tuple[int, ...]:
    """(0:...:0:1), the one point outside every fiber of the sweep."""
    return (0,) * (nvars - 1) + (1,)


def is_smooth_brute(t: FormTuple, X: VarietyDesc, E: int, bound: Optional[int] = None) -> SmoothnessVerdict:
    """
    Scan X(F_{q^e}) for e = 1..E with the pointwise criterion.

    A fiber can hold a singular point only where the equations and all
    maximal Jacobian minors vanish together; the first F_{q^e}-root of that
    gcd is confirmed with is_smooth_at_point and returned as the witness.
    """
    if not 1 <= t.k <= X.m + 1:
        raise ValueError(f"need 1 <= k <= m+1 = {X.m + 1}, got k = {t.k}")
    eqs = _equations(t, X)
    base = t.field
    jac = [list(row) for row in _gradients(tuple(eqs))]
    conditions = list(eqs) + [mnr for mnr in maximal_minors(jac) if mnr.terms]
    method = f"brute({E})"
    for e in range(1, E + 1):
        ext = extension(base, e)
        special = _special_point(t.nvars)
        if not _smooth_at(eqs, ext, special):
            return SmoothnessVerdict(False, make_point(base, ext, special), method)
        for prefix, h, ext, _ in _sweep(conditions, base, e, bound):
            if len(h) == 1 or upoly_count_roots(ext, h) == 0:
                continue
            root = upoly_first_root(ext, h)
            coords = tuple(prefix) + (root,)
            if not _smooth_at(eqs, ext, coords):
                return SmoothnessVerdict(False, make_point(base, ext, coords), method)
    return SmoothnessVerdict(True, None, method)


def count_points(t: FormTuple, X: VarietyDesc, e: int = 1, bound: Optional[int] = None) -> int:
    """#(H_f ∩ X)(F_{q^e})."""
    eqs = _equations(t, X)
    return _count_zeros(eqs, t.field, e, bound)


def _count_zeros(eqs: Sequence[Form], base: FieldDesc, e: int, bound: Optional[int]) -> int:
    ext = extension(base, e)
    nvars = eqs[0].nvars
    special = _special_point(nvars)
    total = 0 if any(evaluate_values(f, special, ext) for f in eqs) else 1
    for _, h, ext, _ in _sweep(eqs, base, e, bound):
        if len(h) != 1:
            total += upoly_count_roots(ext, h)
    return total


def count_variety_points(X: VarietyDesc, base: FieldDesc, e: int = 1, bound: Optional[int] = None) -> int:
    """#X(F_{q^e}): closed form for P^n, a fiber sweep for V(g)."""
    if X.kind == PROJECTIVE:
        return projective_point_total(base.q ** e, X.n)
    if X.g.field != base:
        raise ValueError(f"X is defined over {X.g.field}, not {base}")
    return _count_zeros([X.g], base, e, bound)


# ============================================================================
# Conditioning at rational points
# ============================================================================

def _check_rational_on_X(X: VarietyDesc, base: FieldDesc, y: ProjPoint) -> None:
    if y.degree != 1:
        raise ValueError(f"conditioning point must be rational, got degree {y.degree}")
    if len(y.coords) != X.nvars:
        raise ValueError(f"point has {len(y.coords)} coordinates, X lives in P^{X.n}")
    if X.kind == HYPERSURFACE and evaluate_values(X.g, y.coords, y.field):
        raise ValueError(f"point {y.coords} is not on X")


def rational_point(base: FieldDesc, coords: Sequence[int]) -> ProjPoint:
    """A rational point from base-field coordinates."""
    for c in coords:
        if not 0 <= c < base.q:
            raise ValueError(f"coordinate {c} is not an element of {base}")
    return make_point(base, base, coords)


def contains_with_transversality(t: FormTuple, X: VarietyDesc, y: ProjPoint) -> bool:
    """All f_i vanish at y and the Jacobian rank condition holds there."""
    _check_rational_on_X(X, t.field, y)
    if any(evaluate_values(f, y.coords, y.field) for f in t.forms):
        return False
    return _smooth_at(_equations(t, X), y.field, y.coords)


def avoids(t: FormTuple, X: VarietyDesc, z: ProjPoint) -> bool:
    """Some f_i is nonzero at z."""
    _check_rational_on_X(X, t.field, z)
    return any(evaluate_values(f, z.coords, z.field) for f in t.forms)
