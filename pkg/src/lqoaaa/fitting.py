"""Greedy barycentric fitting: classic AAA and its LQO extension.

The LQO fit grows a shared support set one sample point at a time. At each
step the point where the current pair ``(r1, r2)`` misfits the data most is
moved into the support (so both forms interpolate there), and the weights
are refit by least squares on the remaining data.

The residual multiplied through by the denominators is linear in the weights
for ``H1``::

    g1 D(s) - N1(s) = g1 + sum_k w_k (g1 - h_k) phi_k(s)

and quadratic for ``H2``::

    g2 D(s) D(z) - N2(s, z) = g2 + a^T w + w^T Q w,
    a_k = g2 (phi_k(s) + phi_k(z)),  Q_kl = (g2 - h_kl) phi_k(s) phi_l(z).

The ``alternating`` strategy freezes the left factor of ``w^T Q w`` at the
current weights, which leaves a linear least-squares problem, and repeats.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .barycentric import LqoInterpolant, basis, conjugate_pairing
from .errors import (
    DuplicatePoints,
    EmptyRemainder,
    GridMismatch,
    InsufficientData,
    ZeroWeight,
)

logger = logging.getLogger(__name__)

STRATEGIES = ("h1-only", "alternating")


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Transfer-function samples: ``h1[j] = H1(points[j])`` and
    ``h2[j, l] = H2(points[j], points[l])`` on the full tensor grid.

    ``h1`` is ``None`` for systems without linear output. With
    ``real_symmetric`` the point set must be closed under conjugation and the
    data conjugate-symmetric; the fit then keeps conjugate support pairs.
    """

    points: np.ndarray
    h2: np.ndarray
    h1: Optional[np.ndarray] = None
    real_symmetric: bool = False

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=complex)).ravel()
        N = len(pts)
        if N < 2:
            raise InsufficientData(f"need at least 2 sample points, got {N}")
        d = pts[:, None] - pts[None, :]
        np.fill_diagonal(d, 1.0)
        if np.any(d == 0):
            i, j = np.argwhere(d == 0)[0]
            raise DuplicatePoints(f"sample points {i} and {j} coincide ({pts[i]})")
        h2 = np.asarray(self.h2, dtype=complex)
        if h2.shape != (N, N):
            raise GridMismatch(f"h2 must be {N}x{N}, got shape {h2.shape}")
        h1 = self.h1
        if h1 is not None:
            h1 = np.asarray(h1, dtype=complex).ravel()
            if h1.shape != (N,):
                raise GridMismatch(f"h1 must have {N} entries, got {h1.shape[0]}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "h2", h2)
        object.__setattr__(self, "h1", h1)
        if self.real_symmetric:
            self.check_real_symmetric()

    def __len__(self):
        return len(self.points)

    def conjugate_index(self) -> np.ndarray:
        return conjugate_pairing(self.points)

    def check_real_symmetric(self, rtol=1e-10):
        """Raise ``ValueError`` unless points and data are conjugate-symmetric."""
        p = self.conjugate_index()
        tol2 = rtol * max(np.max(np.abs(self.h2)), 1e-300)
        if np.max(np.abs(self.h2[np.ix_(p, p)] - np.conj(self.h2))) > tol2:
            raise ValueError("h2 data is not conjugate-symmetric")
        if self.h1 is not None:
            tol1 = rtol * max(np.max(np.abs(self.h1)), 1e-300)
            if np.max(np.abs(self.h1[p] - np.conj(self.h1))) > tol1:
                raise ValueError("h1 data is not conjugate-symmetric")

    @property
    def h2_asymmetry(self) -> float:
        return float(np.max(np.abs(self.h2 - self.h2.T)))


@dataclass
class FitConfig:
    tol: float = 1e-8
    n_max: Optional[int] = None  # None: min(N_s - 1, 60)
    weight_strategy: str = "alternating"
    alt_iters: int = 20
    alt_tol: float = 1e-10
    h2_rows_per_point: Optional[int] = None  # None: every non-support column
    scales: Optional[tuple] = None  # None: (max |h1|, max |h2|)

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.n_max is not None and self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.weight_strategy not in STRATEGIES:
            raise ValueError(f"weight_strategy must be one of {STRATEGIES}")


@dataclass
class IterationRecord:
    order: int
    index: int
    point: complex
    max_err_h1: float
    max_err_h2: float
    ls_residual: float
    alt_passes: int
    alt_converged: bool = True


@dataclass
class FitReport:
    records: list = field(default_factory=list)
    status: str = "running"
    scales: tuple = (1.0, 1.0)
    h2_asymmetry: float = 0.0

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]


class WeightSolution(NamedTuple):
    weights: np.ndarray
    residual: float
    passes: int
    converged: bool


class Residuals(NamedTuple):
    """Absolute errors on the sample grid and their scaled summaries."""

    e1: np.ndarray
    e2: np.ndarray
    max_h1: float
    max_h2: float
    mean_h1: float
    mean_h2: float

    @property
    def max_scaled(self) -> float:
        return max(self.max_h1, self.max_h2)


def data_scales(samples: SampleSet) -> tuple:
    """Default error scales ``(max |h1|, max |h2|)``; 1 when absent or zero."""
    s1 = float(np.max(np.abs(samples.h1))) if samples.h1 is not None else 1.0
    s2 = float(np.max(np.abs(samples.h2)))
    return (s1 or 1.0, s2 or 1.0)


def make_interpolant(samples: SampleSet, support_indices, weights) -> LqoInterpolant:
    idx = np.asarray(support_indices, dtype=int)
    h1 = samples.h1[idx] if samples.h1 is not None else np.zeros(len(idx))
    return LqoInterpolant(samples.points[idx], weights, h1, samples.h2[np.ix_(idx, idx)])


# -- classic AAA ---------------------------------------------------------------


@dataclass
class LinearAaaReport:
    orders: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    status: str = "running"
    rank_deficient: bool = False


def eval_barycentric(support, weights, values, s):
    """Homogeneous barycentric quotient ``sum w f/(s - z) / sum w/(s - z)``."""
    support = np.asarray(support, dtype=complex)
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    with np.errstate(divide="ignore", invalid="ignore"):
        C = 1.0 / (s_arr[:, None] - support[None, :])
        r = (C @ (weights * values)) / (C @ weights)
    hit_s, hit_k = np.nonzero(s_arr[:, None] == support[None, :])
    r[hit_s] = np.asarray(values)[hit_k]
    return complex(r[0]) if np.ndim(s) == 0 else r.reshape(np.shape(s))


def fit_linear_aaa(points, values, tol=1e-13, n_max=None):
    """Classic AAA for a single-variable function.

    Starts from the mean of the data, moves the worst-fit point into the
    support each step and takes the weights as the right singular vector of
    the smallest singular value of the Loewner matrix (``||w|| = 1``). Stops
    when the max error is below ``tol * max|values|`` or when the order
    reaches ``n_max``. Order means rational degree: ``m`` support points give
    a type ``(m-1, m-1)`` approximant of order ``m - 1``.

    Returns ``(support, weights, support_values, report)``. Constant data is
    returned as the order-0 (one-point) approximant with status
    ``"degenerate"``.
    """
    Z = np.asarray(points, dtype=complex).ravel()
    F = np.asarray(values, dtype=complex).ravel()
    N = len(Z)
    if N < 2 or len(F) != N:
        raise ValueError("need at least 2 points and one value per point")
    if n_max is None:
        n_max = min(N - 2, 100)
    scale = np.max(np.abs(F))
    abstol = tol * scale
    report = LinearAaaReport()

    R = np.full(N, F.mean())
    if np.max(np.abs(F - R)) <= abstol:
        report.orders.append(0)
        report.errors.append(0.0)
        report.status = "degenerate"
        logger.info("constant data; returning the constant approximant")
        return Z[:1].copy(), np.ones(1, dtype=complex), F[:1].copy(), report

    support_idx = []
    mask = np.ones(N, dtype=bool)
    w = np.ones(0, dtype=complex)
    while True:
        err = np.abs(F - R)
        err[~mask] = -1.0
        j = int(np.argmax(err))
        support_idx.append(j)
        mask[j] = False
        zj, fj = Z[support_idx], F[support_idx]

        C = 1.0 / (Z[mask, None] - zj[None, :])
        L = (F[mask, None] - fj[None, :]) * C
        _, sv, Vh = np.linalg.svd(L, full_matrices=True)
        w = Vh[-1].conj()
        m = len(zj)
        rank = int(np.sum(sv > sv[0] * max(L.shape) * np.finfo(float).eps)) if sv.size else 0
        if rank < m - 1:
            report.rank_deficient = True

        R = F.copy()
        R[mask] = (C @ (w * fj)) / (C @ w)
        e = float(np.max(np.abs(F - R)))
        report.orders.append(m - 1)
        report.errors.append(e)
        if e <= abstol:
            report.status = "converged"
            break
        if m - 1 >= n_max or mask.sum() <= 1:
            report.status = "order-capped"
            break
    return Z[support_idx], w, F[support_idx], report


# -- LQO-AAA -------------------------------------------------------------------


def residual_report(samples: SampleSet, interp: Optional[LqoInterpolant], scales=None) -> Residuals:
    """Absolute errors of ``(r1, r2)`` against every sample.

    ``interp=None`` stands for the order-0 approximants (the data means).
    Points at a pole of the fit get infinite error.
    """
    s1, s2 = scales if scales is not None else data_scales(samples)
    if interp is None:
        e2 = np.abs(samples.h2 - samples.h2.mean())
        e1 = np.abs(samples.h1 - samples.h1.mean()) if samples.h1 is not None else np.zeros(len(samples))
    else:
        B = basis(interp, samples.points, strict=False)
        with np.errstate(invalid="ignore", over="ignore"):
            r2 = B @ interp.h2_grid @ B.T
            e2 = np.abs(r2 - samples.h2)
            if samples.h1 is not None:
                e1 = np.abs(B @ interp.h1_values - samples.h1)
            else:
                e1 = np.zeros(len(samples))
        e1 = np.where(np.isnan(e1), np.inf, e1)
        e2 = np.where(np.isnan(e2), np.inf, e2)
    has_h1 = samples.h1 is not None
    return Residuals(
        e1,
        e2,
        float(e1.max() / s1) if has_h1 else 0.0,
        float(e2.max() / s2),
        float(e1.mean() / s1) if has_h1 else 0.0,
        float(e2.mean() / s2),
    )


def point_scores(samples: SampleSet, current: Optional[LqoInterpolant], scales=None) -> np.ndarray:
    """Per-point score ``max(e1_j/s1, max_l e2_jl/s2, max_l e2_lj/s2)``."""
    s1, s2 = scales if scales is not None else data_scales(samples)
    res = residual_report(samples, current, (s1, s2))
    row = res.e2.max(axis=1)
    col = res.e2.max(axis=0)
    return np.maximum(res.e1 / s1, np.maximum(row, col) / s2)


def greedy_select(samples: SampleSet, current: Optional[LqoInterpolant], scales=None, exclude=()):
    """Index of the non-support sample with the largest score, and that score.

    Ties go to the lowest index.
    """
    score = point_scores(samples, current, scales)
    exclude = np.asarray(exclude, dtype=int)
    if len(np.unique(exclude)) >= len(score):
        raise EmptyRemainder("no non-support sample points left")
    score[exclude] = -np.inf
    j = int(np.argmax(score))
    return j, float(score[j])


def _pair_positions(m: int, per_row: Optional[int]):
    """Row/column positions of the H2 pairs entering the least-squares."""
    if per_row is None or per_row >= m:
        a, b = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        return a.ravel(), b.ravel()
    cols = np.unique(np.round(np.linspace(0, m - 1, per_row)).astype(int))
    a, b = np.meshgrid(np.arange(m), cols, indexing="ij")
    return a.ravel(), b.ravel()


class _WeightProblem:
    """Assembles the least-squares rows for a fixed support set."""

    def __init__(self, samples, support_indices, scales, per_row):
        idx = np.asarray(support_indices, dtype=int)
        rest = np.setdiff1d(np.arange(len(samples)), idx)
        if rest.size == 0:
            raise EmptyRemainder("every sample point is a support point")
        self.idx, self.rest = idx, rest
        self.s1, self.s2 = scales
        xi = samples.points[idx]
        self.Phi = 1.0 / (samples.points[rest, None] - xi[None, :])
        self.H = samples.h2[np.ix_(idx, idx)]
        self.pa, self.pb = _pair_positions(len(rest), per_row)
        self.g2 = samples.h2[rest[self.pa], rest[self.pb]]
        if samples.h1 is not None:
            self.g1 = samples.h1[rest]
            h = samples.h1[idx]
            self.A1 = (self.g1[:, None] - h[None, :]) * self.Phi / self.s1
            self.rhs1 = -self.g1 / self.s1
            self.h = h
        else:
            self.g1 = None
        self.partner = None
        if samples.real_symmetric:
            conj = samples.conjugate_index()
            pos = {int(k): i for i, k in enumerate(idx)}
            self.partner = np.array([pos[int(conj[k])] for k in idx])

    def symmetrize(self, w):
        if self.partner is None:
            return w
        return 0.5 * (w + np.conj(w[self.partner]))

    def linear_h2_block(self, wbar):
        Pa, Pb = self.Phi[self.pa], self.Phi[self.pb]
        g = self.g2[:, None]
        Phi_w = self.Phi * wbar
        U = (Phi_w @ self.H)[self.pa]  # sum_k wbar_k phi_k(s) h_kl
        sw = Phi_w.sum(axis=1)[self.pa][:, None]
        coef = g * (Pa + Pb) + Pb * (g * sw - U)
        return coef / self.s2, -self.g2 / self.s2

    def _rows(self, w):
        """Linearized residuals and denominators on the least-squares rows."""
        Phi_w = self.Phi * w
        D = 1.0 + Phi_w.sum(axis=1)
        N2 = np.einsum("pk,kl,pl->p", Phi_w[self.pa], self.H, Phi_w[self.pb])
        r2 = (self.g2 * D[self.pa] * D[self.pb] - N2) / self.s2
        r1 = (self.g1 * D - Phi_w @ self.h) / self.s1 if self.g1 is not None else np.zeros(0)
        return r1, r2, D

    def residual(self, w) -> float:
        """Stacked norm of the linearized residual (the least-squares objective)."""
        r1, r2, _ = self._rows(w)
        return float(np.sqrt(np.vdot(r1, r1).real + np.vdot(r2, r2).real))

    def true_residual(self, w) -> float:
        """Stacked norm of the scaled approximation errors ``r - g`` on the rows."""
        r1, r2, D = self._rows(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            e2 = r2 / (D[self.pa] * D[self.pb])
            e1 = r1 / D if self.g1 is not None else r1
            total = np.vdot(e1, e1).real + np.vdot(e2, e2).real
        return float(np.sqrt(total)) if np.isfinite(total) else np.inf

    def support_column_seed(self, samples, idx, rest):
        """Weights from the H2 rows whose second point is a support point.

        ``r2(s, xi_l)`` is a single-variable form with data ``h_{kl}`` and the
        same weights, so these rows are linear in ``w``.
        """
        G = samples.h2[np.ix_(rest, idx)]  # g2(zeta_j, xi_l)
        blocks = [(G[:, l, None] - self.H[None, :, l]) * self.Phi for l in range(len(idx))]
        A = np.vstack(blocks) / self.s2
        rhs = -G.T.ravel() / self.s2
        return self.solve(A, rhs)

    def solve(self, A, rhs):
        w = np.linalg.lstsq(A, rhs, rcond=None)[0]
        return self.symmetrize(w)


def solve_weights(
    samples: SampleSet,
    support_indices,
    strategy: str = "alternating",
    w_init=None,
    *,
    scales=None,
    alt_iters: int = 20,
    alt_tol: float = 1e-10,
    h2_rows_per_point: Optional[int] = None,
) -> WeightSolution:
    """Least-squares weights for a fixed support set.

    ``h1-only`` solves the linear ``H1`` rows alone. ``alternating`` seeds
    with ``w_init`` (default: the ``h1-only`` solution, or without ``H1`` data
    the solve over the ``H2`` columns at support points), then repeatedly
    linearizes the ``H2`` rows around the current weights and solves the
    stacked problem until the relative weight change drops below ``alt_tol``.

    Of the seed and all iterates, the one with the smallest scaled error
    ``r - g`` on the least-squares rows is kept; ``residual`` is its
    linearized stacked residual norm.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    idx = np.asarray(support_indices, dtype=int)
    if len(np.unique(idx)) != len(idx):
        raise ValueError("support indices must be distinct")
    scales = scales if scales is not None else data_scales(samples)
    prob = _WeightProblem(samples, idx, scales, h2_rows_per_point)

    if strategy == "h1-only":
        if prob.g1 is None:
            raise ValueError("strategy 'h1-only' needs H1 data")
        w = prob.solve(prob.A1, prob.rhs1)
        _check_weights(w)
        return WeightSolution(w, prob.residual(w), 1, True)

    if w_init is not None:
        w = np.asarray(w_init, dtype=complex).copy()
    elif prob.g1 is not None:
        w = prob.solve(prob.A1, prob.rhs1)
    else:
        w = prob.support_column_seed(samples, prob.idx, prob.rest)
    best_w, best_err = w, prob.true_residual(w)
    converged = False
    passes = 0
    for passes in range(1, alt_iters + 1):
        A2, rhs2 = prob.linear_h2_block(w)
        if prob.g1 is not None:
            A, rhs = np.vstack([prob.A1, A2]), np.concatenate([prob.rhs1, rhs2])
        else:
            A, rhs = A2, rhs2
        w_new = prob.solve(A, rhs)
        change = np.linalg.norm(w_new - w) / max(np.linalg.norm(w_new), np.finfo(float).tiny)
        w = w_new
        err = prob.true_residual(w)
        if err < best_err:
            best_w, best_err = w, err
        if change <= alt_tol:
            converged = True
            break
    if not converged:
        logger.debug("alternating weight solve stopped after %d passes", passes)
    _check_weights(best_w)
    return WeightSolution(best_w, prob.residual(best_w), passes, converged)


def _check_weights(w):
    if np.any(w == 0) or not np.all(np.isfinite(w)):
        raise ZeroWeight("weight solve produced a zero or non-finite weight")


def fit_lqo_aaa(samples: SampleSet, config: Optional[FitConfig] = None):
    """Fit coupled barycentric forms to LQO transfer-function samples.

    Each iteration moves the worst-fit sample point (and, for real-symmetric
    samples, its conjugate) into the support, refits the weights and
    evaluates the scaled errors on the whole grid. Stops when both scaled
    maximum errors are at most ``config.tol`` or the order reaches
    ``config.n_max``. Returns ``(interpolant, report)``.
    """
    config = config or FitConfig()
    N = len(samples)
    n_max = config.n_max if config.n_max is not None else min(N - 1, 60)
    if n_max >= N:
        raise InsufficientData(f"n_max={n_max} needs more than {N} sample points")
    if samples.h1 is None and config.weight_strategy == "h1-only":
        raise ValueError("strategy 'h1-only' needs H1 data")
    scales = tuple(config.scales) if config.scales is not None else data_scales(samples)
    conj = samples.conjugate_index() if samples.real_symmetric else None

    report = FitReport(scales=scales, h2_asymmetry=samples.h2_asymmetry)
    support: list = []
    current = None
    while True:
        j, _ = greedy_select(samples, current, scales, exclude=support)
        new = [j]
        if conj is not None and conj[j] != j:
            new.append(int(conj[j]))
        if support and len(support) + len(new) > n_max:
            report.status = "order-capped"
            break
        support.extend(new)

        sol = solve_weights(
            samples,
            support,
            config.weight_strategy,
            scales=scales,
            alt_iters=config.alt_iters,
            alt_tol=config.alt_tol,
            h2_rows_per_point=config.h2_rows_per_point,
        )
        current = make_interpolant(samples, support, sol.weights)
        res = residual_report(samples, current, scales)
        report.records.append(
            IterationRecord(
                order=len(support),
                index=j,
                point=complex(samples.points[j]),
                max_err_h1=res.max_h1 if samples.h1 is not None else float("nan"),
                max_err_h2=res.max_h2,
                ls_residual=sol.residual,
                alt_passes=sol.passes,
                alt_converged=sol.converged,
            )
        )
        logger.debug("order %d: err_h1=%.3e err_h2=%.3e", len(support), res.max_h1, res.max_h2)
        if res.max_scaled <= config.tol:
            report.status = "converged"
            break
        if len(support) >= n_max:
            report.status = "order-capped"
            break
    return current, report

