"""Binomial formulas, tail bounds, and a seeded Monte-Carlo bound checker.

Exact pmf values are computed with rational arithmetic up to EXACT_LIMIT trials
so that bound inequalities can be checked without floating-point slack; larger
sizes fall back to log-gamma accumulation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

EXACT_LIMIT = 64

MC_CLAIMS = ("binequal", "binclose", "binfar", "binparity", "bernstein", "binsmall", "spacesplit")


@dataclass(frozen=True)
class BinomialSpec:
    trials: int
    p: float

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trial count must be non-negative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("probability must lie in [0, 1]")

    @property
    def mean(self) -> float:
        return self.trials * self.p

    @property
    def variance(self) -> float:
        return self.trials * self.p * (1.0 - self.p)


def _pmf_fraction(spec: BinomialSpec, k: int) -> Fraction:
    p = Fraction(spec.p)
    return math.comb(spec.trials, k) * p**k * (1 - p) ** (spec.trials - k)


def binomial_pmf(spec: BinomialSpec, k: int) -> float:
    """Exact Bin(N, p) point probability (rational for N <= 64, log-gamma above)."""
    if not 0 <= k <= spec.trials:
        raise ValueError(f"k={k} outside [0, {spec.trials}]")
    if spec.p == 0.0:
        return 1.0 if k == 0 else 0.0
    if spec.p == 1.0:
        return 1.0 if k == spec.trials else 0.0
    if spec.trials <= EXACT_LIMIT:
        return float(_pmf_fraction(spec, k))
    n = spec.trials
    log_pmf = (
        math.lgamma(n + 1)
        - math.lgamma(k + 1)
        - math.lgamma(n - k + 1)
        + k * math.log(spec.p)
        + (n - k) * math.log1p(-spec.p)
    )
    return math.exp(log_pmf)


def parity_probability(spec: BinomialSpec) -> float:
    """P(Bin(N, p) is even) = (1 + (1 - 2p)^N) / 2."""
    return 0.5 * (1.0 + (1.0 - 2.0 * spec.p) ** spec.trials)


def binsmall_lower_bound(spec: BinomialSpec, k: int) -> float:
    """Point-probability lower bound exp(-10 mu) (mu/k)^k, valid for p <= 1/2."""
    if spec.p > 0.5:
        raise ValueError("lower bound requires p <= 1/2")
    if k < 0:
        raise ValueError("k must be non-negative")
    mu = spec.mean
    if k == 0:
        return math.exp(-10.0 * mu)
    return math.exp(-10.0 * mu) * (mu / k) ** k


def bernstein_upper_bound(spec: BinomialSpec, t: float) -> float:
    """Two-sided tail bound exp(-t^2 / (N/2 + 2t/3)) for P(|X - Np| > t)."""
    if t <= 0:
        raise ValueError("deviation t must be positive")
    return math.exp(-(t * t) / (spec.trials / 2.0 + 2.0 * t / 3.0))


def spacesplit_lower_bound(p: float) -> float:
    """First-moment bound: X <= N and E[X] >= Np give P(X >= E[X]/2) >= p/(2-p)."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    return p / (2.0 - p)


def exact_two_sided_tail(spec: BinomialSpec, t: float) -> float:
    """P(|X - Np| > t) by direct summation (exact for N <= 64)."""
    mu = spec.mean
    if spec.trials <= EXACT_LIMIT:
        total = Fraction(0)
        for k in range(spec.trials + 1):
            if abs(k - mu) > t:
                total += _pmf_fraction(spec, k)
        return float(total)
    return sum(binomial_pmf(spec, k) for k in range(spec.trials + 1) if abs(k - mu) > t)


def exact_even_probability(spec: BinomialSpec) -> float:
    """Even-value probability by pmf summation; oracle for ``parity_probability``."""
    if spec.trials <= EXACT_LIMIT and 0.0 < spec.p < 1.0:
        return float(sum(_pmf_fraction(spec, k) for k in range(0, spec.trials + 1, 2)))
    return sum(binomial_pmf(spec, k) for k in range(0, spec.trials + 1, 2))


@dataclass(frozen=True)
class BoundVerdict:
    claim: str
    params: dict
    probability: float
    bound: float
    holds: bool
    trials: int
    seed: int

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "params": self.params,
            "probability": self.probability,
            "bound": self.bound,
            "holds": self.holds,
            "trials": self.trials,
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


_DEFAULT_PARAMS = {
    "binparity": {"N": 30, "p": 0.3},
    "binsmall": {"N": 10, "p": 0.1, "k": 1},
    "bernstein": {"N": 100, "p": 0.5, "t": 30.0},
    "spacesplit": {"dist": "binomial", "N": 10, "p": 0.5},
    # asymptotic o(1) claims: verdicts use documented finite-size thresholds
    "binequal": {"N": 10_000, "p": 0.3, "threshold": 0.02},
    "binclose": {"N1": 1_000_000, "N2": 1_010_000, "p": 0.9, "threshold": 0.1},
    "binfar": {"N1": 10_000, "N2": 10_000, "p": 0.9},
}


def _three_se(p_hat: float, trials: int) -> float:
    return 3.0 * math.sqrt(max(p_hat * (1.0 - p_hat), 1.0 / trials) / trials)


def monte_carlo_verdict(claim: str, params: dict | None = None, trials: int = 100_000,
                        seed: int = 0) -> BoundVerdict:
    """Empirically exercise one of the probabilistic claims.

    Deterministic given (claim, params, trials, seed).  ``holds`` compares the
    empirical probability against the claim's bound in the claimed direction,
    allowing a three-standard-error band for sampling noise.
    """
    if claim not in MC_CLAIMS:
        raise ValueError(f"unknown claim id {claim!r}; expected one of {MC_CLAIMS}")
    if trials < 10_000:
        raise ValueError("need at least 10^4 trials")
    merged = dict(_DEFAULT_PARAMS[claim])
    merged.update(params or {})
    rng = np.random.default_rng(seed)

    if claim == "binparity":
        spec = BinomialSpec(merged["N"], merged["p"])
        xs = rng.binomial(spec.trials, spec.p, size=trials)
        emp = float(np.mean(xs % 2 == 0))
        bound = parity_probability(spec)
        holds = abs(emp - bound) <= _three_se(bound, trials)
    elif claim == "binsmall":
        spec = BinomialSpec(merged["N"], merged["p"])
        k = merged["k"]
        xs = rng.binomial(spec.trials, spec.p, size=trials)
        emp = float(np.mean(xs == k))
        bound = binsmall_lower_bound(spec, k)
        holds = emp >= bound - _three_se(emp, trials)
    elif claim == "bernstein":
        spec = BinomialSpec(merged["N"], merged["p"])
        t = merged["t"]
        xs = rng.binomial(spec.trials, spec.p, size=trials)
        emp = float(np.mean(np.abs(xs - spec.mean) > t))
        bound = bernstein_upper_bound(spec, t)
        holds = emp <= bound + _three_se(emp, trials)
    elif claim == "spacesplit":
        n, p = merged["N"], merged["p"]
        if merged["dist"] == "binomial":
            xs = rng.binomial(n, p, size=trials)
            half_mean = n * p / 2.0
        elif merged["dist"] == "two_point":
            xs = np.where(rng.random(trials) < p, n, 0)
            half_mean = n * p / 2.0
        else:
            raise ValueError(f"unknown distribution {merged['dist']!r}")
        emp = float(np.mean(xs >= half_mean))
        bound = spacesplit_lower_bound(p)
        holds = emp >= bound - _three_se(emp, trials)
    elif claim == "binequal":
        n, p = merged["N"], merged["p"]
        x1 = rng.binomial(n, p, size=trials)
        x2 = rng.binomial(n, p, size=trials)
        emp = float(np.mean(x1 == x2))
        bound = merged["threshold"]
        holds = emp < bound
    elif claim == "binclose":
        n1, n2, p = merged["N1"], merged["N2"], merged["p"]
        if p < 0.5:
            raise ValueError("binclose is stated for p >= 1/2")
        x1 = rng.binomial(n1, p, size=trials)
        x2 = rng.binomial(n2, p, size=trials)
        emp = float(np.mean(np.abs(x1 - x2) < abs(n1 - n2) ** (1.0 / 3.0)))
        bound = merged["threshold"]
        holds = emp < bound
    else:  # binfar
        n1, n2, p = merged["N1"], merged["N2"], merged["p"]
        if p < 0.5:
            raise ValueError("binfar is stated for p >= 1/2")
        big_n = max(n1, n2)
        x1 = rng.binomial(n1, p, size=trials)
        x2 = rng.binomial(n2, p, size=trials)
        emp = float(np.mean(np.abs(x1 - x2) > big_n ** (2.0 / 3.0)))
        bound = merged.get("threshold", math.exp(-big_n ** (1.0 / 3.0) / 5.0))
        holds = emp <= bound + _three_se(emp, trials)

    return BoundVerdict(claim, merged, emp, bound, bool(holds), trials, seed)
