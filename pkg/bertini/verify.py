"""
Built-in invariant suite behind `python -m bertini verify`.

Each check prints a ✅/❌ line and returns True/False; run_checks returns the
list of (name, passed) pairs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Tuple

import bertini.predict as predict
from bertini.gf import field_create
from bertini.groebner import AffinePoly, IdealBasis, ideal_is_trivial
from bertini.mpoly import FormTuple, enumerate_forms
from bertini.smoothness import (
    VarietyDesc,
    count_variety_points,
    enumerate_projective_points,
    is_smooth_brute,
    is_smooth_gb,
)


def check_local_factor_identities() -> bool:
    """local_factor(q,m,1,e) = 1 - q^{-(m+1)e} and the k = m+1 factor equals the k = 1 factor."""
    bad = []
    for q in (2, 3, 5):
        for m in range(0, 5):
            for e in range(1, 7):
                one = predict.local_factor(q, m, 1, e)
                if one != 1 - Fraction(1, q ** ((m + 1) * e)):
                    bad.append(f"k=1 q={q} m={m} e={e}")
                if predict.local_factor(q, m, m + 1, e) != one:
                    bad.append(f"k=m+1 q={q} m={m} e={e}")
    return _report("local factor identities", bad)


def check_plane_curve_average() -> bool:
    bad = [f"q={q}" for q in (2, 3, 4, 5, 7, 8, 9)
           if predict.average_curve_identities(q, 2) != q + 1]
    return _report("plane curve average = q+1", bad)


def check_necklace() -> bool:
    """sum_{d|e} d a_d = N_e for P^1, P^2, P^3 over F_2, F_3, e <= 12."""
    bad = []
    for q in (2, 3):
        for m in (1, 2, 3):
            N = [predict.projective_point_count(q, m, e) for e in range(1, 13)]
            a = predict.closed_point_counts(N)
            for e in range(1, 13):
                if sum(d * a[d - 1] for d in range(1, e + 1) if e % d == 0) != N[e - 1]:
                    bad.append(f"q={q} m={m} e={e}")
    return _report("necklace identity", bad)


def check_point_enumeration() -> bool:
    """Enumerated P^m(F_{q^e}) matches the closed form for small cases."""
    bad = []
    for p in (2, 3):
        F = field_create(p, 1)
        for m in (1, 2):
            for e in (1, 2, 3):
                pts = enumerate_projective_points(m, F, e)
                closed = predict.projective_point_count(p, m, e)
                if len(pts) != closed or len({pt.coords for pt in pts}) != closed:
                    bad.append(f"P^{m}(F_{p}^{e})")
                if count_variety_points(VarietyDesc.projective_space(m), F, e) != closed:
                    bad.append(f"count P^{m}(F_{p}^{e})")
    return _report("projective point enumeration", bad)


def check_zeta_consistency() -> bool:
    F = field_create(2, 1)
    bad = []
    for m, limit in ((2, Fraction(21, 64)), (1, Fraction(3, 8))):
        X = VarietyDesc.projective_space(m)
        if predict.zeta_projective(2, m, m + 1) ** -1 != limit:
            bad.append(f"zeta P^{m}")
        dens = predict.truncated_density(X, 1, 12, F)
        tail = predict.truncation_tail_bound(2, m, 1, 1, 12)
        if abs(dens - limit) > tail:
            bad.append(f"P^{m}: |{float(dens)} - {limit}| > {tail}")
    return _report("truncated density vs zeta", bad)


def check_bernoulli_model() -> bool:
    bad = []
    if predict.bernoulli_p(2, 3, 2) != Fraction(7, 39):
        bad.append("pi(2,3,2) != 7/39")
    if predict.bernoulli_p(2, 2, 1) != Fraction(3, 7):
        bad.append("pi(2,2,1) != 3/7")
    if predict.average_curve_identities(2, 3) != Fraction(35, 13):
        bad.append("P^3 average != 35/13")
    return _report("Bernoulli model constants", bad)


def check_groebner_examples() -> bool:
    F = field_create(2, 1)

    def poly(terms):
        return AffinePoly.from_terms(F, 2, terms)

    bad = []
    if not ideal_is_trivial(IdealBasis([poly({(1, 1): 1, (0, 0): 1}), poly({(2, 0): 1})])):
        bad.append("(xy-1, x^2) should be trivial")
    if ideal_is_trivial(IdealBasis([poly({(2, 0): 1}), poly({(0, 1): 1})])):
        bad.append("(x^2, y) should not be trivial")
    return _report("groebner examples", bad)


def check_oracle_agreement(max_degree: int = 2) -> bool:
    """Both oracles agree on every plane curve over F_2 of degree <= max_degree."""
    F = field_create(2, 1)
    X = VarietyDesc.projective_space(2)
    bad = []
    for d in range(1, max_degree + 1):
        E = max(1, min(d * (d - 1) ** 2, 12))
        smooth = total = 0
        for f in enumerate_forms(F, 3, d):
            t = FormTuple((f,))
            gb = is_smooth_gb(t, X).smooth
            brute = is_smooth_brute(t, X, E).smooth
            if gb != brute:
                bad.append(f"{f}: gb={gb} brute={brute}")
            smooth += gb
            total += 1
        if d == 1 and Fraction(smooth, total) != Fraction(7, 8):
            bad.append(f"lines: smooth fraction {smooth}/{total}")
    return _report(f"oracle agreement (plane curves, d <= {max_degree})", bad)


def _report(name: str, bad: List[str]) -> bool:
    if bad:
        print(f"❌ {name}: {len(bad)} failures")
        for b in bad[:5]:
            print(f"   - {b}")
        if len(bad) > 5:
            print(f"   ... and {len(bad) - 5} more")
        return False
    print(f"✅ {name}")
    return True


def run_checks(full: bool = False) -> List[Tuple[str, bool]]:
    checks: List[Tuple[str, Callable[[], bool]]] = [
        ("local factors", check_local_factor_identities),
        ("plane curve average", check_plane_curve_average),
        ("necklace", check_necklace),
        ("point enumeration", check_point_enumeration),
        ("zeta consistency", check_zeta_consistency),
        ("bernoulli model", check_bernoulli_model),
        ("groebner", check_groebner_examples),
        ("oracle agreement", lambda: check_oracle_agreement(3 if full else 2)),
    ]
    results = []
    for name, check in checks:
        try:
            results.append((name, check()))
        except Exception as e:
            print(f"❌ {name}: Exception: {e}")
            results.append((name, False))
    return results
