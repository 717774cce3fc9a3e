"""Fitting of ten candidate distribution families ranked by KS statistic.

Samples are handled as weighted multisets (distinct values + counts) so
that histogram-shaped data — e.g. the multiset of all pairwise hop
distances — can be fitted without materializing billions of points.
Estimators follow the stated closed forms / MLE equations; CDFs are
evaluated through scipy.stats.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special, stats

BETA_RESCALE_INSET = 1e-6
NEWTON_TOL = 1e-8
NEWTON_MAX_ITER = 100
MAX_SCAN_CANDIDATES = 512


class FitError(ValueError):
    """Estimation failed (domain violation or non-convergence).

    ``last_iterate`` carries the final parameter value when an iterative
    solver ran out of iterations.
    """

    def __init__(self, message: str, last_iterate: float | None = None):
        if last_iterate is not None:
            message = f"{message} (last iterate {last_iterate!r})"
        super().__init__(message)
        self.last_iterate = last_iterate


class Family(enum.Enum):
    """The ten candidate families, in canonical table order."""

    POWER_LAW = "power-law"
    BETA = "beta"
    CAUCHY = "cauchy"
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"
    LOGISTIC = "logistic"
    LOG_NORMAL = "log-normal"
    NORMAL = "normal"
    UNIFORM = "uniform"
    WEIBULL = "weibull"

    @property
    def abbreviation(self) -> str:
        return _ABBREVIATIONS[self]


_ABBREVIATIONS = {
    Family.POWER_LAW: "PL", Family.BETA: "BET", Family.CAUCHY: "CAU",
    Family.EXPONENTIAL: "E", Family.GAMMA: "GM", Family.LOGISTIC: "LOG",
    Family.LOG_NORMAL: "LN", Family.NORMAL: "N", Family.UNIFORM: "U",
    Family.WEIBULL: "WB",
}

FAMILIES: tuple[Family, ...] = tuple(Family)

_FAMILY_ORDER = {f: i for i, f in enumerate(FAMILIES)}


@dataclass(frozen=True)
class WeightedSample:
    """Distinct sorted values with positive weights (multiplicities)."""

    values: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_values(cls, values) -> "WeightedSample":
        arr = np.asarray(values, dtype=np.float64).ravel()
        if arr.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample contains non-finite values")
        vals, counts = np.unique(arr, return_counts=True)
        return cls(vals, counts.astype(np.float64))

    @classmethod
    def from_counts(cls, values, counts) -> "WeightedSample":
        vals = np.asarray(values, dtype=np.float64).ravel()
        w = np.asarray(counts, dtype=np.float64).ravel()
        if vals.size == 0:
            raise ValueError("empty sample")
        if vals.size != w.size:
            raise ValueError("values and counts differ in length")
        if np.any(w <= 0):
            raise ValueError("counts must be positive")
        order = np.argsort(vals)
        vals, w = vals[order], w[order]
        if np.any(np.diff(vals) == 0):  # merge duplicate values
            uniq = np.unique(vals)
            merged = np.zeros(uniq.size)
            np.add.at(merged, np.searchsorted(uniq, vals), w)
            vals, w = uniq, merged
        return cls(vals, w)

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    @property
    def min(self) -> float:
        return float(self.values[0])

    @property
    def max(self) -> float:
        return float(self.values[-1])

    def mean(self) -> float:
        return float((self.values * self.weights).sum() / self.total)

    def var(self) -> float:
        m = self.mean()
        return float(((self.values - m) ** 2 * self.weights).sum()
                     / self.total)

    def std(self) -> float:
        return math.sqrt(self.var())

    def quantile(self, q: float) -> float:
        """Step quantile: smallest value whose cumulative weight share
        reaches q."""
        cum = np.cumsum(self.weights)
        idx = int(np.searchsorted(cum, q * self.total, side="left"))
        return float(self.values[min(idx, self.values.size - 1)])


def as_weighted_sample(samples) -> WeightedSample:
    """Accept a WeightedSample, an IntegerHistogram, or raw values."""
    if isinstance(samples, WeightedSample):
        return samples
    bins = getattr(samples, "bins", None)
    if isinstance(bins, dict):
        items = sorted(bins.items())
        return WeightedSample.from_counts([v for v, _ in items],
                                          [c for _, c in items])
    return WeightedSample.from_values(samples)


@dataclass
class FitResult:
    """Outcome of fitting one family; ``error`` set when inapplicable."""

    family: Family
    params: dict[str, float] = field(default_factory=dict)
    ks: float | None = None
    sample_size: float = 0.0
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "params": dict(self.params),
            "ks": self.ks,
            "sample_size": self.sample_size,
            "error": self.error,
        }


# --------------------------------------------------------------------------
# per-family estimators

def _require_positive(s: WeightedSample, family: Family) -> None:
    if s.min <= 0:
        raise FitError(f"{family.value} fit requires positive samples")


def _fit_normal(s: WeightedSample) -> dict[str, float]:
    sigma = s.std()
    if sigma <= 0:
        raise FitError("normal fit degenerate: zero variance")
    return {"mu": s.mean(), "sigma": sigma}


def _fit_log_normal(s: WeightedSample) -> dict[str, float]:
    _require_positive(s, Family.LOG_NORMAL)
    logs = WeightedSample(np.log(s.values), s.weights)
    sigma = logs.std()
    if sigma <= 0:
        raise FitError("log-normal fit degenerate: zero variance")
    return {"mu": logs.mean(), "sigma": sigma}


def _fit_exponential(s: WeightedSample) -> dict[str, float]:
    m = s.mean()
    if m <= 0:
        raise FitError("exponential fit requires positive mean")
    return {"rate": 1.0 / m}


def _fit_uniform(s: WeightedSample) -> dict[str, float]:
    if s.min >= s.max:
        raise FitError("uniform fit degenerate: a == b")
    return {"a": s.min, "b": s.max}


def _fit_power_law(s: WeightedSample, xmin: float | None = None
                   ) -> dict[str, float]:
    _require_positive(s, Family.POWER_LAW)
    if xmin is None:
        xmin = s.min
    elif xmin <= 0:
        raise FitError("power-law xmin must be positive")
    mask = s.values >= xmin
    vals, w = s.values[mask], s.weights[mask]
    if vals.size == 0:
        raise FitError("power-law fit has no samples at or above xmin")
    log_sum = float((w * np.log(vals / xmin)).sum())
    if log_sum <= 0:
        raise FitError("power-law fit degenerate: all samples equal xmin")
    alpha = 1.0 + float(w.sum()) / log_sum
    return {"alpha": alpha, "xmin": float(xmin)}


def _fit_logistic(s: WeightedSample) -> dict[str, float]:
    scale = s.std() * math.sqrt(3.0) / math.pi
    if scale <= 0:
        raise FitError("logistic fit degenerate: zero variance")
    return {"location": s.mean(), "scale": scale}


def _fit_cauchy(s: WeightedSample) -> dict[str, float]:
    scale = (s.quantile(0.75) - s.quantile(0.25)) / 2.0
    if scale <= 0:
        raise FitError("cauchy fit degenerate: zero interquartile range")
    return {"location": s.quantile(0.5), "scale": scale}


def _fit_weibull(s: WeightedSample) -> dict[str, float]:
    _require_positive(s, Family.WEIBULL)
    if s.min >= s.max:
        raise FitError("weibull fit degenerate: all samples equal")
    # work on x/max for overflow safety; shape is scale-invariant
    x = s.values / s.max
    w = s.weights / s.total
    logx = np.log(x)
    mean_log = float((w * logx).sum())

    def objective(k: float) -> tuple[float, float]:
        xk = x ** k
        a = float((w * xk).sum())
        b = float((w * xk * logx).sum())
        c = float((w * xk * logx * logx).sum())
        f = b / a - 1.0 / k - mean_log
        fprime = c / a - (b / a) ** 2 + 1.0 / (k * k)
        return f, fprime

    cv = s.std() / s.mean()
    k = max(1e-3, cv ** -1.086)  # moment-based starting point
    for _ in range(NEWTON_MAX_ITER):
        f, fp = objective(k)
        step = f / fp
        k_next = k - step
        if k_next <= 0:
            k_next = k / 2.0
        if abs(k_next - k) <= NEWTON_TOL * max(1.0, abs(k)):
            k = k_next
            break
        k = k_next
    else:
        raise FitError("weibull shape MLE did not converge", last_iterate=k)
    lam = float((s.weights * (x ** k)).sum() / s.total) ** (1.0 / k) * s.max
    return {"shape": float(k), "scale": lam}


def _fit_gamma(s: WeightedSample) -> dict[str, float]:
    _require_positive(s, Family.GAMMA)
    m = s.mean()
    v = s.var()
    logdiff = math.log(m) - float(
        (s.weights * np.log(s.values)).sum() / s.total)
    if logdiff <= 0 or v <= 0:
        raise FitError("gamma fit degenerate: all samples equal")
    k = m * m / v  # moment-matched start, then Newton on the digamma MLE
    for _ in range(NEWTON_MAX_ITER):
        f = math.log(k) - float(special.digamma(k)) - logdiff
        fp = 1.0 / k - float(special.polygamma(1, k))
        k_next = k - f / fp
        if k_next <= 0:
            k_next = k / 2.0
        if abs(k_next - k) <= NEWTON_TOL * max(1.0, abs(k)):
            k = k_next
            break
        k = k_next
    else:
        raise FitError("gamma shape MLE did not converge", last_iterate=k)
    return {"shape": float(k), "scale": m / k}


def _fit_beta(s: WeightedSample) -> dict[str, float]:
    if s.min >= s.max:
        raise FitError("beta fit degenerate: all samples equal")
    lo, hi = s.min, s.max
    eps = BETA_RESCALE_INSET
    y = eps + (1.0 - 2.0 * eps) * (s.values - lo) / (hi - lo)
    ys = WeightedSample(y, s.weights)
    m, v = ys.mean(), ys.var()
    if v <= 0 or v >= m * (1.0 - m):
        raise FitError("beta moment matching infeasible for this sample")
    common = m * (1.0 - m) / v - 1.0
    return {"alpha": m * common, "beta": (1.0 - m) * common,
            "lo": lo, "hi": hi}


_ESTIMATORS = {
    Family.NORMAL: _fit_normal,
    Family.LOG_NORMAL: _fit_log_normal,
    Family.EXPONENTIAL: _fit_exponential,
    Family.UNIFORM: _fit_uniform,
    Family.LOGISTIC: _fit_logistic,
    Family.CAUCHY: _fit_cauchy,
    Family.WEIBULL: _fit_weibull,
    Family.GAMMA: _fit_gamma,
    Family.BETA: _fit_beta,
}


def fit(family: Family, samples, *, xmin: float | None = None
        ) -> dict[str, float]:
    """Estimate the family's parameters on a (possibly weighted) sample.

    ``xmin`` overrides the power-law default (smallest positive sample);
    it is meaningless for other families.
    """
    s = as_weighted_sample(samples)
    if family is Family.POWER_LAW:
        return _fit_power_law(s, xmin)
    if xmin is not None:
        raise ValueError("xmin only applies to the power-law family")
    return _ESTIMATORS[family](s)


# --------------------------------------------------------------------------
# CDFs and the KS statistic

def family_cdf(family: Family, params: dict[str, float], x) -> np.ndarray:
    """Evaluate the fitted CDF at the given points."""
    x = np.asarray(x, dtype=np.float64)
    if family is Family.POWER_LAW:
        alpha, xmin = params["alpha"], params["xmin"]
        out = np.zeros_like(x)
        above = x >= xmin
        out[above] = 1.0 - (x[above] / xmin) ** (1.0 - alpha)
        return out
    if family is Family.BETA:
        lo, hi = params["lo"], params["hi"]
        eps = BETA_RESCALE_INSET
        y = eps + (1.0 - 2.0 * eps) * (x - lo) / (hi - lo)
        return stats.beta.cdf(np.clip(y, 0.0, 1.0),
                              params["alpha"], params["beta"])
    if family is Family.CAUCHY:
        return stats.cauchy.cdf(x, loc=params["location"],
                                scale=params["scale"])
    if family is Family.EXPONENTIAL:
        return stats.expon.cdf(x, scale=1.0 / params["rate"])
    if family is Family.GAMMA:
        return stats.gamma.cdf(x, a=params["shape"], scale=params["scale"])
    if family is Family.LOGISTIC:
        return stats.logistic.cdf(x, loc=params["location"],
                                  scale=params["scale"])
    if family is Family.LOG_NORMAL:
        return stats.lognorm.cdf(x, s=params["sigma"],
                                 scale=math.exp(params["mu"]))
    if family is Family.NORMAL:
        return stats.norm.cdf(x, loc=params["mu"], scale=params["sigma"])
    if family is Family.UNIFORM:
        a, b = params["a"], params["b"]
        return stats.uniform.cdf(x, loc=a, scale=b - a)
    if family is Family.WEIBULL:
        return stats.weibull_min.cdf(x, c=params["shape"],
                                     scale=params["scale"])
    raise ValueError(f"unknown family {family!r}")


def ks_statistic(samples, family: Family, params: dict[str, float]) -> float:
    """Supremum gap between the empirical CDF and the fitted CDF.

    Ties are handled by evaluating at distinct values with cumulative
    counts: D = max over distinct x of max(|W(x)/W - F(x)|,
    |F(x) - W(x-)/W|).
    """
    s = as_weighted_sample(samples)
    cdf = family_cdf(family, params, s.values)
    if np.any(~np.isfinite(cdf)):
        raise FitError(f"{family.value} CDF undefined at a sample point")
    return _ks_from_cdf(s.weights, cdf)


def _ks_from_cdf(weights: np.ndarray, cdf: np.ndarray) -> float:
    total = weights.sum()
    hi = np.cumsum(weights) / total
    lo = hi - weights / total
    return float(max(np.abs(hi - cdf).max(), np.abs(cdf - lo).max()))


# --------------------------------------------------------------------------
# ranked fitting

def fit_all(samples, *, xmin: float | None = None) -> list[FitResult]:
    """Fit all ten families and rank ascending by KS statistic.

    Families whose preconditions fail come last, carrying the failure
    message instead of a KS value.  Ties break by canonical family order.
    """
    s = as_weighted_sample(samples)
    if s.total < 5:
        raise ValueError(f"need at least 5 samples, got {s.total:g}")
    results: list[FitResult] = []
    for family in FAMILIES:
        try:
            params = fit(family, s,
                         xmin=xmin if family is Family.POWER_LAW else None)
            ks = ks_statistic(s, family, params)
            results.append(FitResult(family, params, ks, s.total))
        except FitError as exc:
            results.append(FitResult(family, {}, None, s.total,
                                     error=str(exc)))
    results.sort(key=lambda r: (r.ks is None,
                                r.ks if r.ks is not None else 0.0,
                                _FAMILY_ORDER[r.family]))
    return results


@dataclass
class PowerLawScan:
    """KS-minimizing power-law tail fit over candidate cutoffs."""

    xmin: float
    alpha: float
    ks: float
    candidates_tried: int


def powerlaw_xmin_scan(samples) -> PowerLawScan:
    """Try each distinct sample value as the power-law cutoff, fit the
    tail above it, and return the KS-minimizing (xmin, alpha, ks).

    With more than MAX_SCAN_CANDIDATES distinct values (continuous data),
    candidates are decimated to an evenly spaced subset, smallest value
    always included; integer-valued data is normally scanned exhaustively.
    """
    s = as_weighted_sample(samples)
    positive = s.values > 0
    vals, w = s.values[positive], s.weights[positive]
    if vals.size < 10:
        raise ValueError(
            f"need at least 10 distinct positive values, got {vals.size}")
    candidates = np.arange(vals.size - 1)  # topmost value alone is degenerate
    if candidates.size > MAX_SCAN_CANDIDATES:
        candidates = np.unique(np.linspace(
            0, vals.size - 2, MAX_SCAN_CANDIDATES).astype(np.int64))
    best: tuple[float, float, float] | None = None
    tried = 0
    for idx in candidates.tolist():
        xmin = float(vals[idx])
        tail = WeightedSample(vals[idx:], w[idx:])
        try:
            params = _fit_power_law(tail, xmin)
        except FitError:
            continue
        cdf = family_cdf(Family.POWER_LAW, params, tail.values)
        ks = _ks_from_cdf(tail.weights, cdf)
        tried += 1
        if best is None or ks < best[2]:
            best = (xmin, params["alpha"], ks)
    if best is None:
        raise FitError("no viable power-law cutoff found")
    return PowerLawScan(best[0], best[1], best[2], tried)
