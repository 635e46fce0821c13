"""
bertini - smooth complete intersections over finite fields.

Exact predictions (Euler products, the Bernoulli point-count model, average
point counts) and experiments over random forms checked by two smoothness
oracles.

Modules:
    gf          finite fields F_{p^s}, embeddings, univariate helpers
    mpoly       homogeneous forms, Jacobians, text format
    groebner    affine polynomials and Buchberger over F_q
    smoothness  Groebner and brute-force smoothness oracles, point counts
    predict     exact predictions and the PredictionReport
    experiment  trial runner, summaries, empirical-vs-predicted comparison
    records     JSONL / JSON / CSV persistence
    verify      built-in invariant suite
    cli         `python -m bertini`
"""

__all__ = [
    "gf",
    "mpoly",
    "groebner",
    "smoothness",
    "predict",
    "experiment",
    "records",
    "verify",
    "cli",
]
