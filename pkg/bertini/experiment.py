"""
Exhaustive and Monte Carlo experiments over tuples of random forms.

Every trial gets its own 64-bit seed, derived from (master seed, trial index)
with the splitmix64 finalizer:

    z = (master + 0x9E3779B97F4A7C15 * (index + 1)) mod 2^64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    seed = z ^ (z >> 31)

and draws its forms from numpy.random.default_rng(seed). Trials run in
ordered batches on a worker pool and are consumed in index order, so the
records do not depend on the number of workers.
"""

from __future__ import annotations

import math
import os
import sys
import time
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from bertini.gf import EnumerationBoundExceeded, FieldDesc, field_create, parse_field
from bertini.groebner import GroebnerBudgetExceeded
from bertini.mpoly import (
    FormTuple,
    evaluate_values,
    form_at_index,
    form_space_size,
    parse_form,
    random_form,
)
from bertini.predict import PredictionReport, central_moments
from bertini.smoothness import (
    HYPERSURFACE,
    ProjPoint,
    VarietyDesc,
    avoids,
    contains_with_transversality,
    count_points,
    is_smooth_brute,
    is_smooth_gb,
    rational_point,
)
from config.settings import get_limits

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

ORACLES = ("gb", "brute", "both")
MODES = ("exhaustive", "sampled")

# keys accepted in an experiment preset
PRESET_KEYS = {
    "field", "n", "variety", "k", "degrees", "mode", "trials", "seed", "oracle",
    "extension_bound", "count_extensions", "contain", "avoid", "min_smooth",
}

MIN_SMOOTH_FOR_SHAPE = 30
BOOTSTRAP_ROUNDS = 1000


def splitmix64(x: int) -> int:
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, index: int) -> int:
    return splitmix64((master_seed + GOLDEN_GAMMA * (index + 1)) & MASK64)


# ============================================================================
# Config
# ============================================================================

@dataclass(frozen=True)
class ExperimentConfig:
    field: FieldDesc
    variety: VarietyDesc
    k: int
    degrees: Tuple[int, ...]
    mode: str = "sampled"
    trials: Optional[int] = None
    seed: int = 0
    contain: Tuple[ProjPoint, ...] = ()
    avoid: Tuple[ProjPoint, ...] = ()
    count_extensions: int = 1
    oracle: str = "gb"
    extension_bound: int = 1
    min_smooth: Optional[int] = None
    budget: Optional[int] = None
    timings: bool = False

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degrees)
        if len(degrees) != self.k:
            raise ValueError(f"k = {self.k} but {len(degrees)} degrees given")
        if list(degrees) != sorted(degrees):
            raise ValueError(f"degrees must be ascending, got {list(degrees)}")
        if any(d < 1 for d in degrees):
            raise ValueError(f"degrees must be positive, got {list(degrees)}")
        if not 1 <= self.k <= self.variety.m + 1:
            raise ValueError(f"need 1 <= k <= m+1 = {self.variety.m + 1}, got k = {self.k}")
        if self.variety.g is not None and self.variety.g.field != self.field:
            raise ValueError(f"X is defined over {self.variety.g.field}, experiment over {self.field}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.oracle not in ORACLES:
            raise ValueError(f"oracle must be one of {ORACLES}, got {self.oracle!r}")
        if self.mode == "sampled" and (self.trials is None or self.trials < 1):
            raise ValueError("sampled mode needs a positive trial count")
        if self.min_smooth is not None and self.mode != "sampled":
            raise ValueError("min_smooth only applies to sampled mode")
        if self.count_extensions < 0 or self.extension_bound < 1:
            raise ValueError("count_extensions must be >= 0 and extension_bound >= 1")
        if not 0 <= self.seed <= MASK64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        points = list(self.contain) + list(self.avoid)
        if len({p.coords for p in points}) != len(points):
            raise ValueError("conditioning points must be distinct")
        for p in points:
            if p.degree != 1 or len(p.coords) != self.variety.nvars:
                raise ValueError(f"conditioning point {p.coords} is not a rational point of P^{self.variety.n}")
            if self.variety.kind == HYPERSURFACE:
                if evaluate_values(self.variety.g, p.coords, p.field):
                    raise ValueError(f"conditioning point {p.coords} is not on X")
        if self.mode == "exhaustive":
            total = self.total_trials
            bound = get_limits().form_bound
            if total > bound:
                raise EnumerationBoundExceeded(f"{total} tuples to enumerate, bound is {bound}")

    @property
    def nvars(self) -> int:
        return self.variety.nvars

    @property
    def total_trials(self) -> int:
        """Number of trials to run (the trial cap when min_smooth is set)."""
        if self.mode == "exhaustive":
            return math.prod(form_space_size(self.field, self.nvars, d) for d in self.degrees)
        return int(self.trials)

    @classmethod
    def from_mapping(cls, raw: dict, **overrides) -> "ExperimentConfig":
        """
        Build a config from a preset mapping (see config/experiments.yaml).

        Raises:
            ValueError: unknown keys or invalid values
        """
        unknown = set(raw) - PRESET_KEYS
        if unknown:
            raise ValueError(f"unknown experiment keys: {sorted(unknown)}")
        p, s = parse_field(str(raw.get("field", "2^1")))
        F = field_create(p, s)
        n = int(raw["n"])
        variety_path = raw.get("variety")
        if variety_path:
            g = parse_form(Path(variety_path).read_text(), F, n + 1)
            X = VarietyDesc.hypersurface(g, budget=overrides.get("budget"))
        else:
            X = VarietyDesc.projective_space(n)
        values = dict(
            field=F,
            variety=X,
            k=int(raw["k"]),
            degrees=tuple(int(d) for d in raw["degrees"]),
            mode=raw.get("mode", "sampled"),
            trials=raw.get("trials"),
            seed=int(raw.get("seed", 0)),
            contain=tuple(rational_point(F, c) for c in raw.get("contain") or []),
            avoid=tuple(rational_point(F, c) for c in raw.get("avoid") or []),
            count_extensions=int(raw.get("count_extensions", 1)),
            oracle=raw.get("oracle", "gb"),
            extension_bound=int(raw.get("extension_bound", 1)),
            min_smooth=raw.get("min_smooth"),
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def describe(self) -> dict:
        return {
            "field": f"{self.field.p}^{self.field.s}",
            "variety": str(self.variety),
            "n": self.variety.n,
            "m": self.variety.m,
            "k": self.k,
            "degrees": list(self.degrees),
            "mode": self.mode,
            "trials": self.total_trials,
            "seed": self.seed,
            "oracle": self.oracle,
            "extension_bound": self.extension_bound,
            "count_extensions": self.count_extensions,
            "contain": [list(p.coords) for p in self.contain],
            "avoid": [list(p.coords) for p in self.avoid],
            "min_smooth": self.min_smooth,
        }


# ============================================================================
# Trials
# ============================================================================

@dataclass
class TrialRecord:
    trial: int
    seed: int
    degrees: Tuple[int, ...]
    verdict: str
    witness: Optional[dict] = None
    counts: Optional[Dict[int, int]] = None
    ms: Optional[float] = None
    gb: Optional[str] = None
    brute: Optional[str] = None
    contains: Optional[List[bool]] = None
    avoids: Optional[List[bool]] = None
    empty: bool = False

    @property
    def decided(self) -> bool:
        return self.verdict != "undecided"

    @property
    def smooth(self) -> bool:
        return self.verdict == "smooth"

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "seed": f"0x{self.seed:016x}",
            "degrees": list(self.degrees),
            "verdict": self.verdict,
            "witness": self.witness,
            "counts": None if self.counts is None else {str(e): c for e, c in sorted(self.counts.items())},
            "ms": self.ms,
            "gb": self.gb,
            "brute": self.brute,
            "contains": self.contains,
            "avoids": self.avoids,
            "empty": self.empty,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TrialRecord":
        counts = raw.get("counts")
        return cls(
            trial=int(raw["trial"]),
            seed=int(raw["seed"], 16),
            degrees=tuple(raw["degrees"]),
            verdict=raw["verdict"],
            witness=raw.get("witness"),
            counts=None if counts is None else {int(e): int(c) for e, c in counts.items()},
            ms=raw.get("ms"),
            gb=raw.get("gb"),
            brute=raw.get("brute"),
            contains=raw.get("contains"),
            avoids=raw.get("avoids"),
            empty=bool(raw.get("empty", False)),
        )


def trial_forms(config: ExperimentConfig, index: int, seed: int) -> FormTuple:
    """The tuple examined by trial `index`."""
    F, nvars = config.field, config.nvars
    if config.mode == "exhaustive":
        forms = []
        rest = index
        for d in config.degrees:
            rest, i = divmod(rest, form_space_size(F, nvars, d))
            forms.append(form_at_index(F, nvars, d, i))
        return FormTuple(tuple(forms))
    rng = np.random.default_rng(seed)
    return FormTuple(tuple(random_form(F, nvars, d, rng) for d in config.degrees))


def _label(smooth: bool) -> str:
    return "smooth" if smooth else "singular"


def run_trial(config: ExperimentConfig, index: int) -> TrialRecord:
    start = time.perf_counter()
    seed = trial_seed(config.seed, index)
    t = trial_forms(config, index, seed)
    X = config.variety
    rec = TrialRecord(trial=index, seed=seed, degrees=config.degrees, verdict="undecided")

    gb_verdict = None
    if config.oracle in ("gb", "both"):
        try:
            gb_verdict = is_smooth_gb(t, X, budget=config.budget)
            rec.gb = _label(gb_verdict.smooth)
            rec.empty = gb_verdict.empty
        except GroebnerBudgetExceeded:
            rec.gb = "undecided"

    brute_verdict = None
    if config.oracle in ("brute", "both"):
        brute_verdict = is_smooth_brute(t, X, config.extension_bound)
        rec.brute = _label(brute_verdict.smooth)
        if brute_verdict.witness is not None:
            rec.witness = brute_verdict.witness.to_dict()

    if gb_verdict is not None:
        rec.verdict = rec.gb
    elif config.oracle == "brute":
        rec.verdict = rec.brute

    if rec.decided:
        rec.contains = [contains_with_transversality(t, X, y) for y in config.contain]
        rec.avoids = [avoids(t, X, z) for z in config.avoid]
    if rec.smooth and config.count_extensions:
        rec.counts = {e: count_points(t, X, e) for e in range(1, config.count_extensions + 1)}
    if config.timings:
        rec.ms = round((time.perf_counter() - start) * 1000.0, 3)
    return rec


# ============================================================================
# Summaries
# ============================================================================

@dataclass
class DensityEstimate:
    successes: int
    decided: int
    estimate: Fraction
    low: float
    high: float


def wilson_interval(successes: int, n: int, z: Optional[float] = None) -> Tuple[float, float]:
    """Wilson score interval at the configured normal quantile."""
    if n < 1:
        raise ValueError("Wilson interval needs at least one trial")
    z = z if z is not None else get_limits().confidence_z
    confidence = 2.0 * stats.norm.cdf(z) - 1.0
    ci = stats.binomtest(successes, n).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def _meets_conditions(rec: TrialRecord) -> bool:
    return all(rec.contains or []) and all(rec.avoids or [])


def empirical_density(records: Iterable[TrialRecord], conditioning: bool = False,
                      z: Optional[float] = None) -> DensityEstimate:
    """
    Smooth (and, with conditioning, containing/avoiding every conditioning
    point) over decided trials, with its Wilson interval.

    Raises:
        ValueError: no decided trial
    """
    decided = successes = 0
    for rec in records:
        if not rec.decided:
            continue
        decided += 1
        if rec.smooth and (not conditioning or _meets_conditions(rec)):
            successes += 1
    if decided == 0:
        raise ValueError("no decided trials")
    low, high = wilson_interval(successes, decided, z)
    return DensityEstimate(successes, decided, Fraction(successes, decided), low, high)


def conditional_frequency(records: Iterable[TrialRecord], which: str, index: int) -> Tuple[int, int]:
    """(smooth trials meeting condition `which`[index], smooth trials)."""
    hits = total = 0
    for rec in records:
        if not rec.smooth:
            continue
        flags = rec.contains if which == "contains" else rec.avoids
        if flags is None:
            continue
        total += 1
        hits += bool(flags[index])
    return hits, total


@dataclass
class EmpiricalMoments:
    count: int
    raw: List[float]
    standardized: Optional[List[float]] = None
    literal: Optional[List[float]] = None


def empirical_moments(
    records: Iterable[TrialRecord],
    r: int,
    N: Optional[int] = None,
    pi: Optional[Fraction] = None,
    q: Optional[int] = None,
    k: Optional[int] = None,
) -> EmpiricalMoments:
    """
    Moments of N'_1 over smooth trials.

    raw[j-1] is the mean of (N'_1)^j. With the model (N, pi) the values are
    also standardized by the model mean and variance; with (q, k) the literal
    normalization N'_1 / sqrt(N q^k) is reported as well.

    Raises:
        ValueError: no smooth trial with counts, or fewer than 30 when
            standardized moments are requested
    """
    values = np.array([rec.counts[1] for rec in records if rec.smooth and rec.counts], dtype=float)
    return _moments_from_values(values, r, N, pi, q, k)


def _moments_from_values(values: np.ndarray, r: int, N=None, pi=None, q=None, k=None) -> EmpiricalMoments:
    if values.size == 0:
        raise ValueError("no smooth trials with point counts")
    raw = [float(np.mean(values ** j)) for j in range(1, r + 1)]
    out = EmpiricalMoments(int(values.size), raw)
    if N is not None and pi is not None:
        if values.size < MIN_SMOOTH_FOR_SHAPE:
            raise ValueError(f"need at least {MIN_SMOOTH_FOR_SHAPE} smooth trials, got {values.size}")
        out.standardized = _standardize(values, N, pi, r)
        if q is not None and k is not None:
            scaled = values / math.sqrt(N * q ** k)
            out.literal = [float(np.mean(scaled ** j)) for j in range(1, r + 1)]
    return out


def _standardize(values: np.ndarray, N: int, pi: Fraction, r: int) -> List[float]:
    mean = N * float(pi)
    sd = math.sqrt(N * float(pi) * (1 - float(pi)))
    z = (values - mean) / sd
    return [float(np.mean(z ** j)) for j in range(1, r + 1)]


@dataclass
class RunSummary:
    config: dict
    attempted: int
    decided: int
    undecided: int
    smooth: int
    singular: int
    density: Optional[DensityEstimate]
    conditioned: Optional[DensityEstimate]
    contains_hits: List[int]
    avoids_hits: List[int]
    histograms: Dict[int, Dict[int, int]]
    compared: int = 0
    agreements: int = 0
    soundness_violations: int = 0
    empty_smooth: int = 0
    undecided_fraction: float = 0.0
    alarm: bool = False

    def counts_array(self, e: int = 1) -> np.ndarray:
        hist = self.histograms.get(e, {})
        return np.repeat(np.array(sorted(hist), dtype=float),
                         [hist[v] for v in sorted(hist)]) if hist else np.array([], dtype=float)

    def to_dict(self) -> dict:
        def density(d: Optional[DensityEstimate]):
            if d is None:
                return None
            return {
                "successes": d.successes,
                "decided": d.decided,
                "estimate": f"{d.estimate.numerator}/{d.estimate.denominator}",
                "approx": float(f"{float(d.estimate):.15g}"),
                "wilson": [float(f"{d.low:.15g}"), float(f"{d.high:.15g}")],
            }

        return {
            "config": self.config,
            "attempted": self.attempted,
            "decided": self.decided,
            "undecided": self.undecided,
            "smooth": self.smooth,
            "singular": self.singular,
            "density": density(self.density),
            "conditioned": density(self.conditioned),
            "contains_hits": self.contains_hits,
            "avoids_hits": self.avoids_hits,
            "histograms": {str(e): {str(v): c for v, c in sorted(h.items())}
                           for e, h in sorted(self.histograms.items())},
            "oracle_agreement": {
                "compared": self.compared,
                "agree": self.agreements,
                "soundness_violations": self.soundness_violations,
            },
            "empty_smooth": self.empty_smooth,
            "undecided_fraction": float(f"{self.undecided_fraction:.15g}"),
            "alarm": self.alarm,
        }


def summarize(records: Sequence[TrialRecord], config: ExperimentConfig) -> RunSummary:
    limits = get_limits()
    attempted = len(records)
    decided = sum(1 for r in records if r.decided)
    smooth = sum(1 for r in records if r.smooth)
    ncontain, navoid = len(config.contain), len(config.avoid)

    histograms: Dict[int, Dict[int, int]] = {}
    for rec in records:
        if rec.smooth and rec.counts:
            for e, c in rec.counts.items():
                h = histograms.setdefault(e, {})
                h[c] = h.get(c, 0) + 1

    compared = agreements = violations = 0
    for rec in records:
        if rec.gb is not None and rec.brute is not None and rec.gb != "undecided":
            compared += 1
            agreements += rec.gb == rec.brute
            violations += rec.gb == "smooth" and rec.brute == "singular"

    undecided = attempted - decided
    fraction = undecided / attempted if attempted else 0.0
    return RunSummary(
        config=config.describe(),
        attempted=attempted,
        decided=decided,
        undecided=undecided,
        smooth=smooth,
        singular=decided - smooth,
        density=empirical_density(records, z=limits.confidence_z) if decided else None,
        conditioned=(empirical_density(records, conditioning=True, z=limits.confidence_z)
                     if decided and (ncontain or navoid) else None),
        contains_hits=[conditional_frequency(records, "contains", i)[0] for i in range(ncontain)],
        avoids_hits=[conditional_frequency(records, "avoids", i)[0] for i in range(navoid)],
        histograms=histograms,
        compared=compared,
        agreements=agreements,
        soundness_violations=violations,
        empty_smooth=sum(1 for r in records if r.smooth and r.empty),
        undecided_fraction=fraction,
        alarm=fraction > limits.undecided_alarm,
    )


# ============================================================================
# Runner
# ============================================================================

def _make_executor(threads: int, processes: bool) -> Executor:
    if processes:
        return ProcessPoolExecutor(max_workers=threads)
    return ThreadPoolExecutor(max_workers=threads)


def run(
    config: ExperimentConfig,
    threads: Optional[int] = None,
    on_record: Optional[Callable[[TrialRecord], None]] = None,
    processes: bool = False,
    verbose: bool = True,
) -> Tuple[RunSummary, List[TrialRecord]]:
    """
    Run every trial of the config and summarize.

    Records reach `on_record` in trial-index order. In sampled mode with
    min_smooth, the run stops at the trial that brings the smooth count to
    min_smooth (or at the trial cap).

    Returns:
        (RunSummary, records)
    """
    threads = threads or os.cpu_count() or 1
    total = config.total_trials
    batch = max(threads * 8, 64)
    step = max(total // 10, 1)
    records: List[TrialRecord] = []
    smooth = 0
    started = time.perf_counter()
    worker = partial(run_trial, config)

    if verbose:
        print(f"[info] {total} trials, {config.k} forms of degrees {list(config.degrees)} "
              f"over {config.field} on {config.variety}, oracle={config.oracle}, threads={threads}",
              file=sys.stderr)

    with _make_executor(threads, processes) as executor:
        done = False
        for lo in range(0, total, batch):
            for rec in executor.map(worker, range(lo, min(lo + batch, total))):
                records.append(rec)
                if on_record is not None:
                    on_record(rec)
                smooth += rec.smooth
                n = len(records)
                if verbose and n % step == 0:
                    rate = n / max(time.perf_counter() - started, 1e-9)
                    print(f"[info] {n}/{total} trials ({100 * n // total}%) {rate:.1f} trials/s",
                          file=sys.stderr)
                if config.min_smooth is not None and smooth >= config.min_smooth:
                    done = True
                    break
            if done:
                break

    if verbose and config.min_smooth is not None and smooth < config.min_smooth:
        print(f"⚠️  only {smooth} smooth trials after {len(records)} (wanted {config.min_smooth})",
              file=sys.stderr)

    summary = summarize(records, config)
    if verbose and summary.alarm:
        print(f"⚠️  {summary.undecided} undecided trials ({summary.undecided_fraction:.3%}) "
              f"exceed the alarm threshold", file=sys.stderr)
    if verbose and summary.soundness_violations:
        print(f"❌ {summary.soundness_violations} trials where the brute oracle found a singular point "
              f"but the Groebner oracle said smooth", file=sys.stderr)
    return summary, records


# ============================================================================
# Comparison
# ============================================================================

COMPARE_COLUMNS = ["metric", "empirical", "predicted", "tail_bound", "z", "pass"]


def _row(metric, empirical=None, predicted=None, tail=None, z=None, ok=None) -> dict:
    return {"metric": metric, "empirical": empirical, "predicted": predicted,
            "tail_bound": tail, "z": z, "pass": ok}


def _z_row(metric: str, empirical: float, predicted: float, sigma: float, tail: float = 0.0) -> dict:
    diff = empirical - predicted
    z = diff / sigma if sigma > 0 else (0.0 if diff == 0 else math.copysign(math.inf, diff))
    ok = abs(diff) <= 3.0 * sigma + tail
    return _row(metric, empirical, predicted, tail if tail else None, z, bool(ok))


def _bootstrap_se(values: np.ndarray, N: int, pi: Fraction, order: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    mean = N * float(pi)
    sd = math.sqrt(N * float(pi) * (1 - float(pi)))
    z = (values - mean) / sd
    idx = rng.integers(0, z.size, size=(BOOTSTRAP_ROUNDS, z.size))
    boot = np.mean(z[idx] ** order, axis=1)
    return float(np.std(boot, ddof=1))


def _chi_square_row(values: np.ndarray, N: int, pi: float) -> dict:
    n = values.size
    observed = np.bincount(values.astype(int), minlength=N + 1)[: N + 1].astype(float)
    expected = stats.binom.pmf(np.arange(N + 1), N, pi) * n

    # pool adjacent cells until every expected count is at least 5
    obs_cells, exp_cells = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= 5.0:
            obs_cells.append(o_acc)
            exp_cells.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc or o_acc:
        if exp_cells:
            obs_cells[-1] += o_acc
            exp_cells[-1] += e_acc
        else:
            obs_cells.append(o_acc)
            exp_cells.append(e_acc)

    df = len(exp_cells) - 1
    if df < 1:
        return _row("chi_square")
    statistic = float(sum((o - e) ** 2 / e for o, e in zip(obs_cells, exp_cells)))
    critical = float(stats.chi2.ppf(0.99, df))
    return _row("chi_square", statistic, critical, None, None, statistic <= critical)


def compare(summary: RunSummary, report: PredictionReport) -> pd.DataFrame:
    """
    Empirical-vs-predicted table with columns metric, empirical, predicted,
    tail_bound, z, pass. Rows whose data are missing are kept with empty
    values.

    Raises:
        ValueError: summary and report disagree on (q, m, k)
    """
    cfg = summary.config
    p, s = parse_field(cfg["field"])
    if (p ** s, cfg["m"], cfg["k"]) != (report.q, report.m, report.k):
        raise ValueError(
            f"summary is for (q, m, k) = {(p ** s, cfg['m'], cfg['k'])}, "
            f"prediction for {(report.q, report.m, report.k)}"
        )
    rows = []

    if summary.density is not None:
        d = summary.density
        pred = float(report.truncated_density)
        sigma = math.sqrt(pred * (1 - pred) / d.decided)
        rows.append(_z_row("density", float(d.estimate), pred, sigma, float(report.tail_bound)))
    else:
        rows.append(_row("density", predicted=float(report.truncated_density)))

    pi = report.pi
    nsmooth = summary.smooth
    for which, hits_list in (("contains", summary.contains_hits), ("avoids", summary.avoids_hits)):
        for i, hits in enumerate(hits_list):
            metric = f"{which}_{i}"
            if pi is None or nsmooth == 0:
                rows.append(_row(metric))
                continue
            target = float(pi) if which == "contains" else 1.0 - float(pi)
            sigma = math.sqrt(target * (1 - target) / nsmooth)
            rows.append(_z_row(metric, hits / nsmooth, target, sigma))

    values = summary.counts_array(1)
    N = report.rational_points
    if pi is None or values.size == 0:
        for metric in ("mean", "variance", "std_moment_2", "std_moment_3", "chi_square"):
            rows.append(_row(metric))
        return pd.DataFrame(rows, columns=COMPARE_COLUMNS)

    n = values.size
    model_var = float(report.model_variance)
    rows.append(_z_row("mean", float(values.mean()), float(report.model_mean), math.sqrt(model_var / n)))

    if n >= 2:
        mu4 = float(central_moments(N, pi, 4)[3])
        var_se = math.sqrt(max(mu4 - model_var ** 2 * (n - 3) / (n - 1), 0.0) / n)
        rows.append(_z_row("variance", float(values.var(ddof=1)), model_var, var_se))
    else:
        rows.append(_row("variance", predicted=model_var))

    if n >= MIN_SMOOTH_FOR_SHAPE and 0 < pi < 1:
        standardized = _standardize(values, N, pi, 3)
        for order in (2, 3):
            se = _bootstrap_se(values, N, pi, order, summary.config["seed"] + order)
            rows.append(_z_row(f"std_moment_{order}", standardized[order - 1],
                               report.standardized_moments[order - 1], se))
        rows.append(_chi_square_row(values, N, float(pi)))
    else:
        for metric in ("std_moment_2", "std_moment_3", "chi_square"):
            rows.append(_row(metric))

    for e, mean_pred in sorted(report.extension_means.items()):
        if e < 2:
            continue
        ext = summary.counts_array(e)
        if ext.size == 0:
            rows.append(_row(f"mean_e{e}", predicted=float(mean_pred)))
            continue
        sigma = math.sqrt(float(report.extension_variances[e]) / ext.size)
        rows.append(_z_row(f"mean_e{e}", float(ext.mean()), float(mean_pred), sigma))

    return pd.DataFrame(rows, columns=COMPARE_COLUMNS)
