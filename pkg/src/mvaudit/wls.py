"""Weighted least squares with a diagonal variance structure.

Two layers: a general multi-column solver (QR on rows scaled by 1/sqrt(w),
so ill-conditioned normal equations are never inverted directly), and the
specialized one-regressor through-origin fit the audit pipeline uses, where
district mail totals play the role of the variance weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .data import DistrictRecord
from .errors import AuditError

__all__ = [
    "RankDeficiencyError",
    "InsufficientDataError",
    "GeneralWlsProblem",
    "GeneralWlsFit",
    "RegressionFit",
    "solve_general",
    "fit_through_origin",
]

_PIVOT_RTOL = 1e-12


class RankDeficiencyError(AuditError):
    """The design matrix is numerically rank deficient."""


class InsufficientDataError(AuditError):
    """Too few usable observations for the requested fit."""


@dataclass
class GeneralWlsProblem:
    """Observations y = X beta + noise with var(noise_n) = sigma^2 * w_n."""

    X: np.ndarray
    y: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.y = np.asarray(self.y, dtype=float).ravel()
        self.w = np.asarray(self.w, dtype=float).ravel()
        n, p = self.X.shape
        if p < 1 or n < p:
            raise InsufficientDataError(f"need N >= p >= 1, got N={n}, p={p}")
        if self.y.shape != (n,) or self.w.shape != (n,):
            raise ValueError(f"shape mismatch: X is {n}x{p}, y {self.y.shape}, w {self.w.shape}")
        if not np.all(np.isfinite(self.X)) or not np.all(np.isfinite(self.y)):
            raise ValueError("X and y must be finite")
        if not np.all(np.isfinite(self.w)) or np.any(self.w <= 0.0):
            raise ValueError("all variance weights must be positive and finite")


@dataclass
class GeneralWlsFit:
    beta: np.ndarray
    sigma2: float
    cov_beta: np.ndarray
    dof: int
    residuals: np.ndarray


def solve_general(problem: GeneralWlsProblem) -> GeneralWlsFit:
    """Minimize sum((y_n - X_n beta)^2 / w_n) and estimate sigma^2.

    sigma2 is the weighted residual sum of squares over N - p; cov_beta is
    sigma2 * (X' W^-1 X)^-1 recovered from the QR factor.
    """
    n, p = problem.X.shape
    root_w = np.sqrt(problem.w)
    Xs = problem.X / root_w[:, None]
    ys = problem.y / root_w
    q, r = np.linalg.qr(Xs, mode="reduced")
    diag = np.abs(np.diag(r))
    if diag.max() == 0.0 or diag.min() <= _PIVOT_RTOL * diag.max():
        raise RankDeficiencyError(
            f"design matrix is numerically singular (pivot ratio {diag.min():.3e}/{diag.max():.3e})"
        )
    beta = np.linalg.solve(r, q.T @ ys)
    residuals = problem.y - problem.X @ beta
    wrss = float(np.sum(residuals * residuals / problem.w))
    dof = n - p
    sigma2 = wrss / dof if dof > 0 else 0.0
    r_inv = np.linalg.inv(r)
    cov_beta = sigma2 * (r_inv @ r_inv.T)
    return GeneralWlsFit(beta=beta, sigma2=sigma2, cov_beta=cov_beta, dof=dof, residuals=residuals)


@dataclass
class RegressionFit:
    """Through-origin fit of mail votes on ballot votes, weights 1/mail_total.

    slope     least-squares slope of mail_c1 on ballot_c1
    sigma2    noise-scale estimate: weighted RSS / (n_used - 1)
    s_xx      sum of ballot_c1^2 / mail_total over fitted districts
    dof       n_used - 1
    residuals mail_c1 - slope * ballot_c1 per fitted district
    excluded  ids of districts skipped because mail_total == 0
    """

    slope: float
    sigma2: float
    s_xx: float
    dof: int
    n_used: int
    residuals: dict[str, float] = field(repr=False)
    excluded: tuple[str, ...] = ()

    @property
    def slope_var(self) -> float:
        return self.sigma2 / self.s_xx


def fit_through_origin(districts: Iterable[DistrictRecord]) -> RegressionFit:
    """Fit mail_c1 = slope * ballot_c1 with var(noise) = sigma^2 * mail_total.

    Districts with no mail votes carry no information (their weight is
    undefined) and are excluded but recorded.
    """
    districts = tuple(districts)
    used = [d for d in districts if d.mail_total > 0]
    excluded = tuple(d.district_id for d in districts if d.mail_total == 0)
    if len(used) < 2:
        raise InsufficientDataError(
            f"through-origin fit needs at least 2 districts with mail votes, got {len(used)}"
        )
    if all(d.ballot_c1 == 0 for d in used):
        raise RankDeficiencyError("all ballot_c1 regressor values are zero")
    s_xx = math.fsum(d.ballot_c1 * d.ballot_c1 / d.mail_total for d in used)
    s_xy = math.fsum(d.ballot_c1 * d.mail_c1 / d.mail_total for d in used)
    slope = s_xy / s_xx
    residuals = {d.district_id: d.mail_c1 - slope * d.ballot_c1 for d in used}
    wrss = math.fsum(r * r / d.mail_total for d, r in zip(used, residuals.values()))
    n_used = len(used)
    dof = n_used - 1
    sigma2 = wrss / dof
    return RegressionFit(
        slope=slope,
        sigma2=sigma2,
        s_xx=s_xx,
        dof=dof,
        n_used=n_used,
        residuals=residuals,
        excluded=excluded,
    )


def as_general_problem(districts: Sequence[DistrictRecord]) -> GeneralWlsProblem:
    """The through-origin fit expressed as a 1-column general problem."""
    used = [d for d in districts if d.mail_total > 0]
    return GeneralWlsProblem(
        X=np.array([[float(d.ballot_c1)] for d in used]),
        y=np.array([float(d.mail_c1) for d in used]),
        w=np.array([float(d.mail_total) for d in used]),
    )
