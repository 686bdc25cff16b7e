"""Logistic technology-life-cycle fitting and stage classification.

The growth model is y(t) = K / (1 + exp(-(t - a) / b)): K is the upper
limit on cumulative patent counts, a the inflection year, b > 0 the shape
parameter. Stages are read off the fitted curve via the 10% / 50% / 90%
ratio thresholds (emerging, growth, maturity, saturation).

Fitting is damped Gauss-Newton (Levenberg-Marquardt) with an analytic
Jacobian. Only improving steps are accepted, so the returned parameters are
never worse than the initialization heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeriesError
from .ingest import YearlySeries

STAGES = ("emerging", "growth", "maturity", "saturation")


@dataclass
class StageThresholds:
    """y/K ratios separating the four life-cycle stages."""

    emerging_upper: float = 0.10
    growth_upper: float = 0.50
    maturity_upper: float = 0.90

    def __post_init__(self):
        if not 0 < self.emerging_upper < self.growth_upper < self.maturity_upper < 1:
            raise ValueError("thresholds must be strictly increasing in (0,1)")


@dataclass
class LogisticFit:
    K: float
    a: float
    b: float
    rss: float
    iterations: int
    converged: bool


@dataclass
class StageReport:
    cluster: str
    current_ratio: float
    stage: str
    transition_years: dict[str, int]
    fit: LogisticFit
    n_patents: int = 0
    share_pct: float = 0.0
    terms: list[str] = field(default_factory=list)


def logistic(t, K: float, a: float, b: float):
    """Evaluate the growth curve; overflow-safe for extreme (t-a)/b."""
    u = (np.atleast_1d(np.asarray(t, np.float64)) - a) / b
    out = np.empty_like(u)
    pos = u >= 0
    eneg = np.exp(-u[pos])
    out[pos] = K / (1.0 + eneg)
    epos = np.exp(u[~pos])
    out[~pos] = K * epos / (1.0 + epos)
    return out


def logistic_jacobian(t, K: float, a: float, b: float) -> np.ndarray:
    """Partial derivatives of the model w.r.t. (K, a, b), one row per t."""
    u = (np.atleast_1d(np.asarray(t, np.float64)) - a) / b
    sig = logistic(t, 1.0, a, b)
    core = sig * (1.0 - sig)
    J = np.empty((len(u), 3))
    J[:, 0] = sig
    J[:, 1] = -K * core / b
    J[:, 2] = -K * core * u / b
    return J


def _crossing(t: np.ndarray, y: np.ndarray, level: float) -> float:
    """First time y reaches ``level``, linearly interpolated."""
    idx = int(np.argmax(y >= level))
    if y[idx] < level:  # never reached
        return float(t[-1])
    if idx == 0:
        return float(t[0])
    y0, y1 = y[idx - 1], y[idx]
    return float(t[idx - 1] + (level - y0) / (y1 - y0) * (t[idx] - t[idx - 1]))


def initial_guess(t: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Heuristic start point: K slightly above the data maximum, a at the
    half-K crossing, b from the quartile crossing spread."""
    k0 = 1.05 * float(y.max())
    a0 = _crossing(t, y, k0 / 2.0)
    t25 = _crossing(t, y, 0.25 * k0)
    t75 = _crossing(t, y, 0.75 * k0)
    b0 = max(0.25, (t75 - t25) / (2.0 * math.log(3.0)))
    return k0, a0, b0


def fit_logistic_xy(t, y, max_iter: int = 500, rss_tol: float = 1e-10,
                    step_tol: float = 1e-8) -> LogisticFit:
    """Least-squares fit of the growth curve to (t, y) points.

    Levenberg-Marquardt with Marquardt diagonal scaling. Parameters are
    projected to K >= max(y)*(1-1e-6) and b > 0 after every step.
    Convergence: relative rss change below ``rss_tol`` or step norm below
    ``step_tol`` relative to the parameter norm.
    """
    t = np.asarray(t, np.float64)
    y = np.asarray(y, np.float64)
    if len(t) != len(y):
        raise ValueError("t and y must have the same length")
    if np.count_nonzero(y != 0) < 4:
        raise ValueError("need at least 4 points with nonzero cumulative counts")
    if np.all(y == y[0]):
        raise DegenerateSeriesError("cumulative series is constant")

    ymax = float(y.max())
    k_floor = ymax * (1.0 - 1e-6)
    b_floor = 1e-9

    def project(p):
        return np.array([max(p[0], k_floor), p[1], max(p[2], b_floor)])

    p = project(np.array(initial_guess(t, y)))
    resid = y - logistic(t, *p)
    rss = float(resid @ resid)
    lam = 1e-3
    converged = False
    iterations = 0
    for it in range(1, max_iter + 1):
        iterations = it
        J = logistic_jacobian(t, *p)
        A = J.T @ J
        g = J.T @ resid
        stepped = False
        while lam < 1e12:
            damped = A + lam * np.diag(np.maximum(np.diag(A), 1e-12))
            try:
                delta = np.linalg.solve(damped, g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            cand = project(p + delta)
            cand_resid = y - logistic(t, *cand)
            cand_rss = float(cand_resid @ cand_resid)
            if np.isfinite(cand_rss) and cand_rss < rss:
                step_norm = float(np.linalg.norm(cand - p))
                rel_drop = (rss - cand_rss) / max(rss, 1e-300)
                p, resid, rss = cand, cand_resid, cand_rss
                lam = max(lam * 0.1, 1e-12)
                stepped = True
                if rel_drop < rss_tol or step_norm < step_tol * (1.0 + float(np.linalg.norm(p))):
                    converged = True
                break
            lam *= 10.0
        if not stepped:
            # no damping level yields an improvement: stationary point
            converged = True
            break
        if converged:
            break
    return LogisticFit(float(p[0]), float(p[1]), float(p[2]), rss,
                       iterations, converged)


def fit_logistic(series: YearlySeries, **solver) -> LogisticFit:
    """Fit the growth curve to a yearly cumulative series."""
    return fit_logistic_xy(np.array(series.years(), np.float64),
                           np.array(series.cumulative, np.float64), **solver)


def predict(fit: LogisticFit, t) -> float:
    """Model value at year ``t`` (may be fractional)."""
    return float(logistic(np.array([t], np.float64), fit.K, fit.a, fit.b)[0])


def stage_for_ratio(ratio: float, thresholds: StageThresholds | None = None) -> str:
    """Map a y/K ratio to a stage; boundary ratios go to the later stage."""
    th = thresholds or StageThresholds()
    if ratio < th.emerging_upper:
        return "emerging"
    if ratio < th.growth_upper:
        return "growth"
    if ratio < th.maturity_upper:
        return "maturity"
    return "saturation"


def classify_stage(fit: LogisticFit, t_now: int,
                   thresholds: StageThresholds | None = None) -> tuple[float, str]:
    """Current ratio y(t_now)/K and its stage label."""
    ratio = predict(fit, t_now) / fit.K
    return ratio, stage_for_ratio(ratio, thresholds)


def crossing_year(fit: LogisticFit, ratio: float) -> float:
    """Real-valued year at which the curve reaches ``ratio`` of K."""
    return fit.a - fit.b * math.log(1.0 / ratio - 1.0)


def stage_years(fit: LogisticFit,
                thresholds: StageThresholds | None = None) -> dict[str, int]:
    """First integer year at or after each stage's threshold crossing."""
    th = thresholds or StageThresholds()
    return {
        "growth_start": math.ceil(crossing_year(fit, th.emerging_upper)),
        "maturity_start": math.ceil(crossing_year(fit, th.growth_upper)),
        "saturation_start": math.ceil(crossing_year(fit, th.maturity_upper)),
    }


def scurve_samples(fit: LogisticFit, t_from: float, t_to: float,
                   step: float) -> list[tuple[float, float]]:
    """Inclusive sampling grid over [t_from, t_to]."""
    if not t_from < t_to:
        raise ValueError("t_from must be < t_to")
    if step <= 0:
        raise ValueError("step must be > 0")
    count = int(math.floor((t_to - t_from) / step + 1e-9)) + 1
    ts = t_from + step * np.arange(count)
    ys = logistic(ts, fit.K, fit.a, fit.b)
    return [(float(t), float(y)) for t, y in zip(ts, ys)]
