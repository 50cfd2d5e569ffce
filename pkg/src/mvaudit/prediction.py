"""Aggregate prediction for the contested districts and the reversal tail.

Given the through-origin fit on accepted districts, the total mail vote for
candidate 1 in the contested districts is predicted as slope * ballot_c1 with
variance sigma^2 * (ballot_c1^2 / s_xx + mail_total): slope uncertainty plus
fresh noise.  Standardizing the reversal threshold against that scale gives a
Student-t statistic whose upper tail is the reversal probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .data import DistrictRecord, ElectionDataset, aggregate_red, partition, reversal_threshold
from .errors import AuditError
from .special import TailProbability, student_t_quantile, student_t_sf
from .wls import RegressionFit, fit_through_origin

__all__ = [
    "ReversalReport",
    "PredictionInterval",
    "AnalysisResult",
    "reversal_probability",
    "prediction_interval",
    "analyze_dataset",
]


@dataclass(frozen=True)
class ReversalReport:
    """Everything behind one reversal probability, aggregates included."""

    red_ballot_c1: int
    red_mail_total: int
    red_mail_c1: int
    threshold: float
    prediction: float
    pred_sd: float
    t_stat: float
    dof: int
    p_reversal: TailProbability
    variant: str = "M11"
    degenerate: bool = False


@dataclass(frozen=True)
class PredictionInterval:
    level: float
    lower: float
    upper: float
    point_prediction: float


def _pred_sd(fit: RegressionFit, ballot_c1: int, mail_total: int) -> float:
    return math.sqrt(fit.sigma2 * (ballot_c1 * ballot_c1 / fit.s_xx + mail_total))


def reversal_probability(
    fit: RegressionFit,
    red: Iterable[DistrictRecord],
    threshold: float,
    variant: str = "M11",
) -> ReversalReport:
    """Probability that the true contested mail vote reaches ``threshold``.

    A zero noise estimate cannot be standardized; the report is then flagged
    degenerate with p forced to 0 or 1 by the sign of the shortfall instead
    of silently pretending certainty was computed.
    """
    totals = aggregate_red(red)
    prediction = fit.slope * totals.ballot_c1
    if fit.sigma2 <= 0.0:
        p = 1.0 if threshold <= prediction else 0.0
        tail = TailProbability(p, 0.0 if p == 1.0 else -math.inf)
        return ReversalReport(
            red_ballot_c1=totals.ballot_c1,
            red_mail_total=totals.mail_total,
            red_mail_c1=totals.mail_c1,
            threshold=threshold,
            prediction=prediction,
            pred_sd=0.0,
            t_stat=math.copysign(math.inf, threshold - prediction) if threshold != prediction else 0.0,
            dof=fit.dof,
            p_reversal=tail,
            variant=variant,
            degenerate=True,
        )
    pred_sd = _pred_sd(fit, totals.ballot_c1, totals.mail_total)
    t_stat = (threshold - prediction) / pred_sd
    return ReversalReport(
        red_ballot_c1=totals.ballot_c1,
        red_mail_total=totals.mail_total,
        red_mail_c1=totals.mail_c1,
        threshold=threshold,
        prediction=prediction,
        pred_sd=pred_sd,
        t_stat=t_stat,
        dof=fit.dof,
        p_reversal=student_t_sf(t_stat, fit.dof),
        variant=variant,
    )


def prediction_interval(
    fit: RegressionFit, red: Iterable[DistrictRecord], level: float
) -> PredictionInterval:
    """Two-sided prediction interval for the contested mail-vote aggregate."""
    if not (0.0 < level < 1.0):
        raise AuditError(f"interval level must be in (0, 1), got {level!r}")
    if fit.sigma2 <= 0.0:
        raise AuditError("degenerate fit (sigma2 == 0) has no prediction interval")
    totals = aggregate_red(red)
    prediction = fit.slope * totals.ballot_c1
    pred_sd = _pred_sd(fit, totals.ballot_c1, totals.mail_total)
    halfwidth = student_t_quantile(0.5 * (1.0 + level), fit.dof) * pred_sd
    return PredictionInterval(
        level=level,
        lower=prediction - halfwidth,
        upper=prediction + halfwidth,
        point_prediction=prediction,
    )


@dataclass(frozen=True)
class AnalysisResult:
    """Full pipeline output: partition sizes, fit, and reversal report."""

    n_green: int
    n_red: int
    margin_official: int
    fit: RegressionFit
    report: ReversalReport


def analyze_dataset(
    ds: ElectionDataset, include_dubious: bool = False, strict: bool = False
) -> AnalysisResult:
    """Run partition -> fit -> threshold -> reversal probability."""
    green, red = partition(ds, include_dubious_as_red=include_dubious)
    fit = fit_through_origin(green)
    threshold = reversal_threshold(ds, red, strict=strict)
    variant = "M14" if include_dubious else "M11"
    report = reversal_probability(fit, red, threshold, variant=variant)
    return AnalysisResult(
        n_green=len(green),
        n_red=len(red),
        margin_official=ds.margin_official,
        fit=fit,
        report=report,
    )
