"""
Buchberger's algorithm over a finite field, used to decide whether an affine
ideal contains 1.

Polynomials are sparse maps exponent-vector -> encoded field value, ordered
by grevlex. Pairs are processed with the normal strategy (smallest lcm first)
and Buchberger's product and chain criteria; the first nonzero constant that
shows up ends the computation. The number of pair reductions is capped, and
running out raises GroebnerBudgetExceeded instead of returning a guess.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from bertini.gf import FieldDesc, embedding_table
from config.settings import get_limits

Monomial = Tuple[int, ...]
Terms = Dict[Monomial, int]


class GroebnerBudgetExceeded(RuntimeError):
    """The pair-reduction budget ran out before the basis was complete."""

    def __init__(self, budget: int, processed: int):
        super().__init__(f"groebner pair budget exhausted ({processed} reductions, budget {budget})")
        self.budget = budget
        self.processed = processed


# ============================================================================
# Monomial order
# ============================================================================

@lru_cache(maxsize=1 << 16)
def grevlex_key(a: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: a larger key is a larger monomial under grevlex."""
    return sum(a), tuple(-x for x in reversed(a))


def _heap_key(a: Monomial) -> Tuple[int, Tuple[int, ...]]:
    # min-heap order == descending grevlex
    return -sum(a), tuple(reversed(a))


def grevlex_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """
    Compare exponent vectors under graded reverse lexicographic order.

    Total degree decides first; on a tie the vector with the smaller entry in
    the last differing position is the larger monomial.

    Returns:
        -1, 0 or 1 as a < b, a == b, a > b
    """
    if len(a) != len(b):
        raise ValueError(f"exponent vectors differ in length: {len(a)} vs {len(b)}")
    ka, kb = grevlex_key(tuple(a)), grevlex_key(tuple(b))
    return (ka > kb) - (ka < kb)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _mono_sub(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _mono_add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


# ============================================================================
# Polynomials
# ============================================================================

@dataclass(frozen=True, eq=False)
class AffinePoly:
    """A polynomial in nvars affine variables; terms never store a zero coefficient."""
    field: FieldDesc
    nvars: int
    terms: Terms = dc_field(default_factory=dict)

    @classmethod
    def from_terms(cls, field: FieldDesc, nvars: int, terms: Dict[Monomial, int]) -> "AffinePoly":
        clean = {}
        for exp, c in terms.items():
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
            if c % field.q:
                clean[tuple(exp)] = c
        return cls(field, nvars, clean)

    @classmethod
    def constant(cls, field: FieldDesc, nvars: int, c: int = 1) -> "AffinePoly":
        return cls(field, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, field: FieldDesc, nvars: int, i: int) -> "AffinePoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(field, nvars, {tuple(exp): 1})

    # ---------- inspection ----------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=grevlex_key)

    def leading_coeff(self) -> int:
        return self.terms[self.leading_monomial()]

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def evaluate(self, point: Sequence[int], target: Optional[FieldDesc] = None) -> int:
        """Value at a point whose coordinates are encoded in `target` (default: own field)."""
        F = target or self.field
        table = embedding_table(self.field, F) if F != self.field else None
        acc = 0
        for exp, c in self.terms.items():
            v = table[c] if table is not None else c
            for x, k in zip(point, exp):
                if k:
                    v = F.mul(v, F.power(x, k))
            acc = F.add(acc, v)
        return acc

    # ---------- arithmetic ----------

    def _check(self, other: "AffinePoly") -> None:
        if other.field != self.field or other.nvars != self.nvars:
            raise ValueError(
                f"polynomials live in different rings: {self.field}[{self.nvars}] vs {other.field}[{other.nvars}]"
            )

    def __add__(self, other: "AffinePoly") -> "AffinePoly":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = F.add(out.get(exp, 0), c)
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return AffinePoly(F, self.nvars, out)

    def __neg__(self) -> "AffinePoly":
        F = self.field
        return AffinePoly(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "AffinePoly") -> "AffinePoly":
        return self + (-other)

    def __mul__(self, other: "AffinePoly") -> "AffinePoly":
        self._check(other)
        F = self.field
        out: Terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _mono_add(e1, e2)
                v = F.add(out.get(e, 0), F.mul(c1, c2))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return AffinePoly(F, self.nvars, out)

    def scale(self, c: int) -> "AffinePoly":
        if c == 0:
            return AffinePoly(self.field, self.nvars, {})
        F = self.field
        return AffinePoly(F, self.nvars, {e: F.mul(v, c) for e, v in self.terms.items()})

    def monic(self) -> "AffinePoly":
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.leading_coeff()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffinePoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                f"y{i}" if k == 1 else f"y{i}^{k}" for i, k in enumerate(exp) if k
            )
            coeff = repr_coeff(self.field, c)
            parts.append(coeff if not mono else (mono if c == 1 else f"{coeff}*{mono}"))
        return " + ".join(parts)


def repr_coeff(F: FieldDesc, c: int) -> str:
    if F.s == 1:
        return str(c)
    return "[" + ",".join(str(d) for d in F.digits(c)) + "]"


@dataclass(frozen=True)
class IdealBasis:
    gens: Tuple[AffinePoly, ...]

    def __init__(self, gens: Iterable[AffinePoly]):
        gens = tuple(gens)
        if gens:
            ring = (gens[0].field, gens[0].nvars)
            for g in gens[1:]:
                if (g.field, g.nvars) != ring:
                    raise ValueError("ideal generators must share one polynomial ring")
        object.__setattr__(self, "gens", gens)

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def contains_one(self) -> bool:
        return any(g.terms and g.is_constant() for g in self.gens)


# ============================================================================
# Division
# ============================================================================

def _reduce_terms(
    F: FieldDesc,
    terms: Terms,
    basis: Sequence[Tuple[Monomial, int, Terms]],
    full: bool = True,
) -> Terms:
    """
    Divide `terms` by (leading monomial, leading coeff inverse, terms) triples.

    With full=False only the leading term is reduced (stops at the first
    irreducible leading term).
    """
    p = dict(terms)
    heap = [(_heap_key(e), e) for e in p]
    heapq.heapify(heap)
    rem: Terms = {}
    while heap:
        _, lt = heapq.heappop(heap)
        c = p.get(lt)
        if c is None:
            continue
        for lm, lc_inv, g in basis:
            if divides(lm, lt):
                factor = F.neg(F.mul(c, lc_inv))
                shift = _mono_sub(lt, lm)
                for ge, gc in g.items():
                    e = _mono_add(ge, shift)
                    old = p.get(e)
                    v = F.add(old or 0, F.mul(factor, gc))
                    if v:
                        p[e] = v
                        if old is None:
                            heapq.heappush(heap, (_heap_key(e), e))
                    elif old is not None:
                        del p[e]
                break
        else:
            del p[lt]
            rem[lt] = c
            if not full:
                rem.update(p)
                return rem
    return rem


def _prepared(gens: Iterable[AffinePoly]) -> List[Tuple[Monomial, int, Terms]]:
    out = []
    for g in gens:
        if g.terms:
            out.append((g.leading_monomial(), g.field.inv(g.leading_coeff()), g.terms))
    return out


def reduce(f: AffinePoly, basis: IdealBasis) -> AffinePoly:
    """
    Multivariate division remainder of f by the basis (grevlex).

    No term of the result is divisible by a basis leading monomial, and
    f - result lies in the ideal generated by the basis.
    """
    for g in basis:
        f._check(g)
    return AffinePoly(f.field, f.nvars, _reduce_terms(f.field, f.terms, _prepared(basis.gens)))


# ============================================================================
# Buchberger
# ============================================================================

def _spoly(F: FieldDesc, a: Tuple[Monomial, Terms], b: Tuple[Monomial, Terms]) -> Terms:
    """S-polynomial of two monic polynomials."""
    lm_a, ta = a
    lm_b, tb = b
    l = lcm(lm_a, lm_b)
    sa, sb = _mono_sub(l, lm_a), _mono_sub(l, lm_b)
    out: Terms = {}
    for e, c in ta.items():
        out[_mono_add(e, sa)] = c
    for e, c in tb.items():
        e = _mono_add(e, sb)
        v = F.sub(out.get(e, 0), c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _monic_terms(F: FieldDesc, terms: Terms) -> Tuple[Monomial, Terms]:
    lm = max(terms, key=grevlex_key)
    c = terms[lm]
    if c != 1:
        ci = F.inv(c)
        terms = {e: F.mul(v, ci) for e, v in terms.items()}
    return lm, terms


def _is_constant_monomial(e: Monomial) -> bool:
    return not any(e)


def buchberger(gens: IdealBasis, budget: Optional[int] = None) -> IdealBasis:
    """
    Reduced Groebner basis of the ideal generated by gens (grevlex).

    Args:
        gens: generators over a common ring
        budget: max number of S-pair reductions (defaults to the configured
            groebner_budget, env BERTINI_BUDGET)

    Returns:
        IdealBasis, reduced: monic, no leading monomial divides another,
        tails fully reduced. The unit ideal comes back as (1).

    Raises:
        GroebnerBudgetExceeded: when the budget runs out
    """
    polys = [g for g in gens if g.terms]
    if not polys:
        return IdealBasis(())
    F, nvars = polys[0].field, polys[0].nvars
    one = IdealBasis((AffinePoly.constant(F, nvars, 1),))
    budget = budget if budget is not None else get_limits().groebner_budget

    G: List[Tuple[Monomial, Terms]] = []
    prepared: List[Tuple[Monomial, int, Terms]] = []
    for g in polys:
        lm, t = _monic_terms(F, g.terms)
        if _is_constant_monomial(lm):
            return one
        G.append((lm, t))
        prepared.append((lm, 1, t))

    pairs: List[Tuple[Tuple[int, Tuple[int, ...]], int, int]] = []
    pending: Set[Tuple[int, int]] = set()

    def add_pairs(j: int) -> None:
        lm_j = G[j][0]
        for i in range(j):
            l = lcm(G[i][0], lm_j)
            heapq.heappush(pairs, (grevlex_key(l), i, j))
            pending.add((i, j))

    for j in range(len(G)):
        add_pairs(j)

    processed = 0
    while pairs:
        _, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        lm_i, lm_j = G[i][0], G[j][0]

        # product criterion
        if _coprime(lm_i, lm_j):
            continue
        # chain criterion
        l = lcm(lm_i, lm_j)
        if any(
            k != i and k != j
            and divides(G[k][0], l)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(G))
        ):
            continue

        processed += 1
        if processed > budget:
            raise GroebnerBudgetExceeded(budget, processed - 1)

        h = _reduce_terms(F, _spoly(F, G[i], G[j]), prepared)
        if not h:
            continue
        lm, t = _monic_terms(F, h)
        if _is_constant_monomial(lm):
            return one
        G.append((lm, t))
        prepared.append((lm, 1, t))
        add_pairs(len(G) - 1)

    return IdealBasis(_interreduce(F, nvars, G))


def _interreduce(F: FieldDesc, nvars: int, G: List[Tuple[Monomial, Terms]]) -> List[AffinePoly]:
    # drop elements whose leading monomial is divisible by another's
    keep: List[Tuple[Monomial, Terms]] = []
    for idx, (lm, t) in enumerate(G):
        redundant = False
        for jdx, (lm2, _) in enumerate(G):
            if jdx == idx or not divides(lm2, lm):
                continue
            if lm2 != lm or jdx < idx:
                redundant = True
                break
        if not redundant:
            keep.append((lm, t))

    out = []
    for idx, (lm, t) in enumerate(keep):
        others = [(lm2, 1, t2) for jdx, (lm2, t2) in enumerate(keep) if jdx != idx]
        tail = {e: c for e, c in t.items() if e != lm}
        reduced_tail = _reduce_terms(F, tail, others)
        reduced_tail[lm] = 1
        out.append(AffinePoly(F, nvars, reduced_tail))
    out.sort(key=lambda g: grevlex_key(g.leading_monomial()), reverse=True)
    return out


def ideal_is_trivial(gens: IdealBasis, budget: Optional[int] = None) -> bool:
    """True iff 1 lies in the ideal (its zero set over the algebraic closure is empty)."""
    if gens.contains_one():
        return True
    return buchberger(gens, budget).contains_one()
