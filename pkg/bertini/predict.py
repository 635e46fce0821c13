"""
Exact predictions for random smooth complete intersections over F_q.

Everything is a fractions.Fraction until the reporting layer. Covers:
    * L(q, m, k) and the per-closed-point local factor
    * closed-point counts by Moebius inversion, truncated Euler products and
      their tail bound, the zeta function of P^m
    * the Bernoulli point-count model (pi, conditional densities, moments)
    * average point counts of random smooth curves and the P^3 closed forms
    * Lang-Weil and the explicit error bound of the density theorem
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import sympy
from sympy.functions.combinatorial.numbers import stirling
from sympy.ntheory import mobius

from bertini.smoothness import PROJECTIVE, count_variety_points
from config.settings import get_limits

# printed value of the q = 2 average for curves in P^3
PRINTED_P3_AVERAGE_Q2 = Fraction(37, 13)


# ============================================================================
# Local factors
# ============================================================================

def _check_q(q: int) -> None:
    if q < 2:
        raise ValueError(f"field size must be at least 2, got {q}")


def lin_indep_prob(q: int, m: int, k: int) -> Fraction:
    """L(q, m, k): probability that k uniform vectors of F_q^m are independent."""
    _check_q(q)
    if m < 0 or k < 0:
        raise ValueError(f"need m, k >= 0, got m={m}, k={k}")
    out = Fraction(1)
    for j in range(k):
        out *= 1 - Fraction(1, q ** (m - j)) if m - j >= 0 else 0
        if out == 0:
            break
    return out


def local_factor(q: int, m: int, k: int, e: int) -> Fraction:
    """1 - q^{-ke} + q^{-ke} L(q^e, m, k): smoothness probability at a closed point of degree e."""
    if e < 1:
        raise ValueError(f"closed point degree must be positive, got {e}")
    t = Fraction(1, q ** (k * e))
    return 1 - t + t * lin_indep_prob(q ** e, m, k)


def closed_point_counts(rational_point_counts: Sequence[int], r: Optional[int] = None) -> List[int]:
    """
    a_e = (1/e) sum_{d | e} mu(e/d) N_d for e = 1..r.

    Raises:
        ValueError: some a_e is negative or not an integer (inconsistent N)
    """
    N = list(rational_point_counts)
    r = len(N) if r is None else r
    if r > len(N):
        raise ValueError(f"need N_1..N_{r}, got {len(N)} counts")
    out = []
    for e in range(1, r + 1):
        total = sum(int(mobius(e // d)) * N[d - 1] for d in sympy.divisors(e))
        a, rem = divmod(total, e)
        if rem or a < 0:
            raise ValueError(f"inconsistent point counts: a_{e} = {Fraction(total, e)}")
        out.append(a)
    return out


def projective_point_count(q: int, m: int, e: int = 1) -> int:
    """#P^m(F_{q^e})."""
    Q = q ** e
    return (Q ** (m + 1) - 1) // (Q - 1)


@lru_cache(maxsize=None)
def _projective_closed_points(q: int, m: int, r: int) -> tuple:
    return tuple(closed_point_counts([projective_point_count(q, m, e) for e in range(1, r + 1)]))


def truncated_product(q: int, m: int, k: int, closed_points: Sequence[int], r: int) -> Fraction:
    """Product of local factors over closed points of degree < r."""
    out = Fraction(1)
    for e in range(1, r):
        a = closed_points[e - 1]
        if a:
            out *= local_factor(q, m, k, e) ** a
    return out


def truncated_density(X, k: int, r: Optional[int] = None, field=None) -> Fraction:
    """
    Euler product truncated to closed points of degree < r.

    Args:
        X: VarietyDesc (P^n or a smooth hypersurface)
        k: number of hypersurface sections
        r: truncation degree (defaults to the configured truncation_degree)
        field: base FieldDesc; required for hypersurface X

    Raises:
        EnumerationBoundExceeded: counting #X(F_{q^e}) needs too many fibers
    """
    r = r if r is not None else get_limits().truncation_degree
    if r < 1:
        raise ValueError(f"truncation degree must be positive, got {r}")
    q, a = _variety_closed_points(X, field, max(r - 1, 1))
    return truncated_product(q, X.m, k, a, r)


def _variety_closed_points(X, field, r: int):
    if X.kind == PROJECTIVE:
        if field is None:
            raise ValueError("a base field is required")
        return field.q, list(_projective_closed_points(field.q, X.m, r))
    base = X.g.field
    N = [count_variety_points(X, base, e) for e in range(1, r + 1)]
    return base.q, closed_point_counts(N)


def truncation_tail_bound(q: int, m: int, k: int, degX: int, r: int) -> Fraction:
    """2^{m+1} degX k q^{-r(2k-1)}."""
    return Fraction(2 ** (m + 1) * degX * k, q ** (r * (2 * k - 1)))


def zeta_projective(q: int, m: int, s: int) -> Fraction:
    """zeta_{P^m}(s) = prod_{i=0}^{m} (1 - q^{i-s})^{-1}, for s > m."""
    _check_q(q)
    if s <= m:
        raise ValueError(f"zeta of P^{m} needs s > {m}, got s = {s}")
    out = Fraction(1)
    for i in range(m + 1):
        out /= 1 - Fraction(1, q ** (s - i))
    return out


# ============================================================================
# Bernoulli point-count model
# ============================================================================

def bernoulli_p(q: int, m: int, k: int) -> Fraction:
    """pi = q^{-k} L / (1 - q^{-k} + q^{-k} L): chance a rational point lies on a smooth H_f ∩ X."""
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got m={m}, k={k}")
    t = Fraction(1, q ** k)
    L = lin_indep_prob(q, m, k)
    return t * L / (1 - t + t * L)


def conditional_density(q: int, m: int, k: int, g: int, h: int) -> Fraction:
    """P(contains g given rational points, avoids h others | smooth) = pi^g (1 - pi)^h."""
    if g < 0 or h < 0:
        raise ValueError(f"point counts must be nonnegative, got g={g}, h={h}")
    pi = bernoulli_p(q, m, k)
    return pi ** g * (1 - pi) ** h


def _falling(N: int, i: int) -> int:
    out = 1
    for j in range(i):
        out *= N - j
    return out


def model_moments(N: int, pi: Fraction, r: int) -> List[Fraction]:
    """Raw moments E[S^j], j = 1..r, of S ~ Binomial(N, pi)."""
    if N < 1:
        raise ValueError(f"need at least one trial point, got N = {N}")
    pi = Fraction(pi)
    out = []
    for j in range(1, r + 1):
        out.append(sum(
            (int(stirling(j, i)) * _falling(N, i) * pi ** i for i in range(1, j + 1)),
            Fraction(0),
        ))
    return out


def central_moments(N: int, pi: Fraction, r: int) -> List[Fraction]:
    """E[(S - N pi)^j], j = 1..r."""
    raw = [Fraction(1)] + model_moments(N, pi, r)
    mean = N * Fraction(pi)
    out = []
    for j in range(1, r + 1):
        out.append(sum(
            (math.comb(j, i) * raw[i] * (-mean) ** (j - i) for i in range(j + 1)),
            Fraction(0),
        ))
    return out


def standardized_moments(N: int, pi: Fraction, r: int) -> List[float]:
    """
    E[Z^j] for Z = (S - N pi) / sqrt(N pi (1 - pi)), j = 1..r.

    Returns floats, not Fractions: the scale factor sqrt(N pi (1 - pi)) is
    irrational in general, so odd orders have no exact rational value.
    The unscaled central moments stay exact (see central_moments).
    """
    pi = Fraction(pi)
    var = N * pi * (1 - pi)
    if var == 0:
        raise ValueError("degenerate model: variance is zero")
    sd = math.sqrt(var)
    return [float(mu) / sd ** j for j, mu in enumerate(central_moments(N, pi, r), start=1)]


def gaussian_moments(r: int) -> List[int]:
    """Standard normal moments E[Z^j], j = 1..r."""
    return [0 if j % 2 else int(sympy.factorial2(j - 1)) for j in range(1, r + 1)]


# ============================================================================
# Averages
# ============================================================================

def average_points(q: int, n: int, k: int) -> Fraction:
    """Limiting average #(H_f)(F_q) for smooth complete intersections of k hypersurfaces in P^n."""
    return projective_point_count(q, n) * bernoulli_p(q, n, k)


def first_order_average(q: int, n: int, k: int) -> int:
    """q^{n-k} + ... + 1, the average a first-order local condition would give."""
    return projective_point_count(q, n - k)


def average_curve_identities(q: int, n: int) -> Fraction:
    """Limiting average #C(F_q) for a random smooth curve cut by n-1 hypersurfaces in P^n."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return average_points(q, n, n - 1)


def average_curve_closed_form(q: int, n: int) -> Fraction:
    """
    (q+1) - (q+1)(1 - q^{1-n}) (1 - prod_{j=3}^{n}(1-q^{-j}))
                / (1 - q^{1-n} + q^{1-n} prod_{j=2}^{n}(1-q^{-j}))
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    t = Fraction(1, q ** (n - 1))
    upper = Fraction(1)
    for j in range(3, n + 1):
        upper *= 1 - Fraction(1, q ** j)
    full = upper * (1 - Fraction(1, q ** 2))
    return (q + 1) - (q + 1) * (1 - t) * (1 - upper) / (1 - t + t * full)


def eta_partial_limit(q: int, J: int) -> Fraction:
    """(q+1) prod_{j=3}^{J} (1 - q^{-j}); decreases to the n -> infinity average."""
    out = Fraction(q + 1)
    for j in range(3, J + 1):
        out *= 1 - Fraction(1, q ** j)
    return out


def p3_simplified_form(q: int) -> Fraction:
    """q + 1 - q^{-2}(1 + q^{-1}) / (1 + q^{-2} - q^{-5})."""
    q = Fraction(q)
    return q + 1 - q ** -2 * (1 + q ** -1) / (1 + q ** -2 - q ** -5)


def p3_average_forms(q: int) -> dict:
    """
    Both closed forms of the P^3 curve average, plus the printed q = 2 value.

    The unsimplified Bernoulli-model value is authoritative.
    """
    direct = average_curve_identities(q, 3)
    simplified = p3_simplified_form(q)
    printed = PRINTED_P3_AVERAGE_Q2 if q == 2 else None
    notes = []
    if simplified != direct:
        notes.append(f"simplified form gives {simplified}, model gives {direct}")
    if printed is not None and printed != direct:
        notes.append(f"printed value {printed} differs from the recomputed {direct}")
    return {
        "unsimplified": direct,
        "simplified": simplified,
        "forms_agree": simplified == direct,
        "printed": printed,
        "note": "; ".join(notes) if notes else None,
    }


def extension_point_mean(q: int, m: int, k: int, N: Sequence[int], e: int) -> Fraction:
    """
    Model mean of #(H_f ∩ X)(F_{q^e}): a closed point of degree d | e adds d
    points with probability pi(q^d).

    Args:
        N: #X(F_{q^j}) for j = 1..e
    """
    a = closed_point_counts(N, e)
    return sum(
        (d * a[d - 1] * bernoulli_p(q ** d, m, k) for d in sympy.divisors(e)),
        Fraction(0),
    )


def extension_point_variance(q: int, m: int, k: int, N: Sequence[int], e: int) -> Fraction:
    a = closed_point_counts(N, e)
    out = Fraction(0)
    for d in sympy.divisors(e):
        pi = bernoulli_p(q ** d, m, k)
        out += d * d * a[d - 1] * pi * (1 - pi)
    return out


# ============================================================================
# Error terms
# ============================================================================

def lang_weil_bound(m: int, degX: int, q: int, e: int) -> int:
    """2^m degX q^{me} >= #X(F_{q^e})."""
    if e < 1:
        raise ValueError(f"e must be positive, got {e}")
    return 2 ** m * degX * q ** (m * e)


def _characteristic(q: int) -> int:
    return min(sympy.factorint(q))


def truncation_for_error(q: int, m: int, degX: int, z: int, d1: int) -> int:
    """r = 1 + floor((1/m) log_q ((d_1 - z + 1) / ((m+1) 2^{m+1} degX))); r <= 0 means vacuous."""
    R = Fraction(d1 - z + 1, (m + 1) * 2 ** (m + 1) * degX)
    if R < 1:
        return 0
    m = max(m, 1)
    t = 0
    while Fraction(q) ** (m * (t + 1)) <= R:
        t += 1
    return 1 + t


def error_bound(
    q: int,
    n: int,
    m: int,
    k: int,
    degX: int,
    z: int,
    degrees: Sequence[int],
    p: Optional[int] = None,
) -> Fraction:
    """
    Explicit bound on |density - truncated product|:

        2^{m+2} degX k q^{-r(2k-1)} + (n+1) k n^m degX (m+1) d_k^m q^{-floor(d_1/max(m+1, p))}

    with r from truncation_for_error. The fractional exponent is rounded down
    so the result stays an upper bound; values above 1 (and r < 1) give 1.
    """
    degrees = list(degrees)
    if not degrees:
        raise ValueError("need at least one degree")
    if degrees != sorted(degrees):
        raise ValueError(f"degrees must be ascending, got {degrees}")
    d1, dk = degrees[0], degrees[-1]
    if d1 < z:
        raise ValueError(f"d_1 = {d1} is below z = {z}")
    p = p if p is not None else _characteristic(q)
    r = truncation_for_error(q, m, degX, z, d1)
    if r < 1:
        return Fraction(1)
    tail = Fraction(2 ** (m + 2) * degX * k, q ** (r * (2 * k - 1)))
    high = Fraction((n + 1) * k * n ** m * degX * (m + 1) * dk ** m, q ** (d1 // max(m + 1, p)))
    return min(Fraction(1), tail + high)


# ============================================================================
# Report
# ============================================================================

def rational_json(x: Optional[Fraction]) -> Optional[dict]:
    """{"exact": "num/den", "approx": 15 significant digits}."""
    if x is None:
        return None
    x = Fraction(x)
    return {"exact": f"{x.numerator}/{x.denominator}", "approx": float(f"{float(x):.15g}")}


@dataclass
class PredictionReport:
    q: int
    n: int
    m: int
    k: int
    degX: int
    r: int
    truncated_density: Fraction
    tail_bound: Fraction
    pi: Optional[Fraction]
    model_mean: Optional[Fraction]
    model_variance: Optional[Fraction]
    rational_points: int
    error_bound_inputs: Optional[dict] = None
    error_bound: Optional[Fraction] = None
    conditional_density: Optional[Fraction] = None
    conditioning: Dict[str, int] = dc_field(default_factory=dict)
    standardized_moments: List[float] = dc_field(default_factory=list)
    extension_means: Dict[int, Fraction] = dc_field(default_factory=dict)
    extension_variances: Dict[int, Fraction] = dc_field(default_factory=dict)
    average_points: Optional[Fraction] = None
    first_order_average: Optional[int] = None
    p3_average: Optional[dict] = None
    notes: List[str] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        R = rational_json
        out = {
            "q": self.q,
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "degX": self.degX,
            "r": self.r,
            "rational_points": self.rational_points,
            "truncated_density": R(self.truncated_density),
            "tail_bound": R(self.tail_bound),
            "pi": R(self.pi),
            "model_mean": R(self.model_mean),
            "model_variance": R(self.model_variance),
            "standardized_moments": [float(f"{v:.15g}") for v in self.standardized_moments],
            "conditioning": dict(self.conditioning),
            "conditional_density": R(self.conditional_density),
            "error_bound_inputs": self.error_bound_inputs,
            "error_bound": R(self.error_bound),
            "extension_means": {str(e): R(v) for e, v in self.extension_means.items()},
            "extension_variances": {str(e): R(v) for e, v in self.extension_variances.items()},
            "average_points": R(self.average_points),
            "first_order_average": self.first_order_average,
            "p3_average": None,
            "notes": list(self.notes),
        }
        if self.p3_average is not None:
            p3 = self.p3_average
            out["p3_average"] = {
                "unsimplified": R(p3["unsimplified"]),
                "simplified": R(p3["simplified"]),
                "forms_agree": p3["forms_agree"],
                "printed": R(p3["printed"]),
                "note": p3["note"],
            }
        return out


def build_report(
    X,
    field,
    k: int,
    r: Optional[int] = None,
    degrees: Optional[Sequence[int]] = None,
    z: int = 0,
    contain: int = 0,
    avoid: int = 0,
    count_extensions: int = 1,
    moment_order: int = 4,
) -> PredictionReport:
    """
    Assemble every prediction for (X over field, k sections).

    Args:
        X: VarietyDesc
        field: base FieldDesc
        k: number of sections
        r: truncation degree (configured default when None)
        degrees: d_1..d_k for the explicit error bound (skipped when None)
        contain, avoid: numbers of conditioning rational points
        count_extensions: model means of #(H_f ∩ X)(F_{q^e}) for e up to this
    """

    r = r if r is not None else get_limits().truncation_degree
    q, m, degX = field.q, X.m, X.degX
    if not 1 <= k <= m + 1:
        raise ValueError(f"need 1 <= k <= m+1 = {m + 1}, got k = {k}")
    if X.kind != PROJECTIVE and X.g.field != field:
        raise ValueError(f"X is defined over {X.g.field}, not {field}")

    e_max = max(r - 1, count_extensions, 1)
    if X.kind == PROJECTIVE:
        N = [projective_point_count(q, m, e) for e in range(1, e_max + 1)]
    else:
        N = [count_variety_points(X, field, e) for e in range(1, e_max + 1)]
    a = closed_point_counts(N)

    report = PredictionReport(
        q=q, n=X.n, m=m, k=k, degX=degX, r=r,
        truncated_density=truncated_product(q, m, k, a, r),
        tail_bound=truncation_tail_bound(q, m, k, degX, r),
        pi=None, model_mean=None, model_variance=None,
        rational_points=N[0],
    )

    if k <= m:
        pi = bernoulli_p(q, m, k)
        report.pi = pi
        report.model_mean = N[0] * pi
        report.model_variance = N[0] * pi * (1 - pi)
        if 0 < pi < 1:
            report.standardized_moments = standardized_moments(N[0], pi, moment_order)
        report.conditioning = {"contain": contain, "avoid": avoid}
        report.conditional_density = conditional_density(q, m, k, contain, avoid)
        for e in range(1, count_extensions + 1):
            report.extension_means[e] = extension_point_mean(q, m, k, N, e)
            report.extension_variances[e] = extension_point_variance(q, m, k, N, e)
    else:
        report.notes.append("k = m+1: H_f ∩ X is smooth only when empty; no point-count model")

    if degrees is not None:
        degrees = list(degrees)
        report.error_bound_inputs = {
            "n": X.n, "p": field.p, "z": z, "degrees": degrees,
        }
        report.error_bound = error_bound(q, X.n, m, k, degX, z, degrees, p=field.p)

    if X.kind == PROJECTIVE and k <= m:
        report.average_points = average_points(q, X.n, k)
        report.first_order_average = first_order_average(q, X.n, k)

    if X.kind == PROJECTIVE and (X.n, k) == (3, 2):
        forms = p3_average_forms(q)
        report.p3_average = forms
        if forms["note"]:
            report.notes.append(forms["note"])

    if report.tail_bound >= 1:
        report.notes.append(f"tail bound {report.tail_bound} is vacuous at r = {r}")
    if X.kind != PROJECTIVE and k == m:
        report.notes.append("k = m on a hypersurface: empty intersections count as smooth")
    return report
