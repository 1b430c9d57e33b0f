"""Linear systems with quadratic output (LQO).

An LQO system is

    x'(t) = A x(t) + b u(t),
    y(t)  = c^T x(t) + x(t)^T M x(t),

with a single input and a single output. Its input/output behaviour is
described by the linear transfer function ``H1(s) = c^T (sI - A)^{-1} b`` and
the two-variable quadratic transfer function
``H2(s, z) = x(s)^T M x(z)`` with ``x(s) = (sI - A)^{-1} b``.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NonFiniteState, SingularShift

logger = logging.getLogger(__name__)

BENCHMARK_KINDS = ("diag", "random-stable", "quad-only")


def symmetrize(M):
    """``(M + M^T)/2``, leaving already symmetric entries bit-identical."""
    return np.where(M == M.T, M, 0.5 * M + 0.5 * M.T)


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LqoModel:
    """State-space data ``(A, b, c, M)`` of a SISO LQO system.

    ``M`` is symmetrized on construction; ``asymmetry`` keeps the largest
    absolute entry of ``M - M^T`` as given. Arrays are read-only.
    """

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    M: np.ndarray
    asymmetry: float = field(init=False)

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A))
        b = np.atleast_1d(np.asarray(self.b)).ravel()
        c = np.atleast_1d(np.asarray(self.c)).ravel()
        M = np.atleast_2d(np.asarray(self.M))
        n = A.shape[0]
        if n < 1 or A.shape != (n, n):
            raise ValueError(f"A must be square and non-empty, got shape {A.shape}")
        if b.shape != (n,):
            raise ValueError(f"b must have length {n}, got shape {b.shape}")
        if c.shape != (n,):
            raise ValueError(f"c must have length {n}, got shape {c.shape}")
        if M.shape != (n, n):
            raise ValueError(f"M must be {n}x{n}, got shape {M.shape}")
        dtype = np.result_type(A, b, c, M, float)
        asym = float(np.max(np.abs(np.where(M == M.T, 0, M - M.T))))
        object.__setattr__(self, "A", _frozen(A.astype(dtype)))
        object.__setattr__(self, "b", _frozen(b.astype(dtype)))
        object.__setattr__(self, "c", _frozen(c.astype(dtype)))
        object.__setattr__(self, "M", _frozen(symmetrize(M).astype(dtype)))
        object.__setattr__(self, "asymmetry", asym)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.A)

    @property
    def has_linear_output(self) -> bool:
        return bool(np.any(self.c != 0))

    def poles(self) -> np.ndarray:
        return scipy.linalg.eigvals(self.A)

    def is_stable(self) -> bool:
        """True if every eigenvalue of ``A`` has strictly negative real part."""
        return bool(np.all(self.poles().real < 0))

    def __repr__(self):
        kind = "real" if self.is_real else "complex"
        return f"LqoModel(dim={self.dim}, {kind})"


@dataclass(frozen=True)
class TimeSignal:
    """Uniformly sampled real signal: ``values[k]`` at time ``t0 + k*dt``."""

    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if values.size == 0:
            raise ValueError("a time signal needs at least one sample")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.values))

    def __len__(self):
        return len(self.values)


def _state_response(model: LqoModel, s, variable="s") -> np.ndarray:
    """Solve ``(sI - A) x = b`` by one LU factorization."""
    s = complex(s)
    n = model.dim
    K = s * np.eye(n) - model.A
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(K)
    pivots = np.abs(np.diag(lu))
    scale = max(np.max(np.abs(K)), np.finfo(float).tiny)
    if not np.all(np.isfinite(pivots)) or pivots.min() <= n * np.finfo(float).eps * scale:
        raise SingularShift(s, variable)
    return scipy.linalg.lu_solve((lu, piv), model.b.astype(complex))


def eval_h1(model: LqoModel, s) -> complex:
    """Linear transfer function ``c^T (sI - A)^{-1} b``."""
    return complex(model.c @ _state_response(model, s))


def eval_h2(model: LqoModel, s, z) -> complex:
    """Quadratic transfer function ``x(s)^T M x(z)``, ``x(.) = (.I - A)^{-1} b``.

    This equals ``vec(M)^T [x(s) kron x(z)]`` but needs only two solves and
    one bilinear form.
    """
    xs = _state_response(model, s, "s")
    xz = _state_response(model, z, "z")
    return complex(xs @ model.M @ xz)


def state_responses(model: LqoModel, points) -> np.ndarray:
    """Columns ``(p_j I - A)^{-1} b`` for every point, shape ``(n, len(points))``.

    Raises :class:`SingularShift` naming the first point that is a pole.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    X = np.empty((model.dim, len(points)), dtype=complex)
    for j, p in enumerate(points):
        X[:, j] = _state_response(model, p)
    return X


def simulate(model: LqoModel, u: TimeSignal) -> TimeSignal:
    """Output of the model from zero initial state under input ``u``.

    Classical fixed-step RK4 on the input grid; the input at half steps is
    the mean of the neighbouring samples. For a complex realization the
    real part of the output is returned.
    """
    A, b, c, M = model.A, model.b, model.c, model.M
    dt = u.dt
    vals = u.values
    x = np.zeros(model.dim, dtype=A.dtype)
    y = np.empty(len(vals), dtype=A.dtype)
    y[0] = 0.0

    def f(x, uk):
        return A @ x + b * uk

    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(len(vals) - 1):
            u0, u1 = vals[k], vals[k + 1]
            um = 0.5 * (u0 + u1)
            k1 = f(x, u0)
            k2 = f(x + 0.5 * dt * k1, um)
            k3 = f(x + 0.5 * dt * k2, um)
            k4 = f(x + dt * k3, u1)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(x)):
                raise NonFiniteState(f"state overflowed at t={u.t0 + (k + 1) * dt:.6g}")
            y[k + 1] = c @ x + x @ M @ x
    if np.iscomplexobj(y):
        imag = np.max(np.abs(y.imag))
        if imag > 1e-8 * max(1.0, np.max(np.abs(y.real))):
            logger.warning("complex realization produced imaginary output (max %.3g)", imag)
        y = y.real
    if not np.all(np.isfinite(y)):
        raise NonFiniteState("output overflowed")
    return TimeSignal(u.t0, dt, y)


def make_benchmark(kind: str, order: int, seed: int = 0) -> LqoModel:
    """Stable synthetic LQO test systems.

    ``diag``: ``A = diag(-1, -2, ..., -order)``, ``b = c = 1``, ``M = I``.
    ``random-stable``: Gaussian ``A`` shifted so its rightmost eigenvalue sits
    at ``-0.5``, Gaussian ``b``, ``c`` and symmetric ``M``; reproducible from
    ``seed``. ``quad-only``: as ``random-stable`` with ``c = 0``.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if kind == "diag":
        poles = -np.linspace(1.0, float(order), order)
        return LqoModel(np.diag(poles), np.ones(order), np.ones(order), np.eye(order))
    if kind not in BENCHMARK_KINDS:
        raise ValueError(f"unknown benchmark kind {kind!r}; choose from {BENCHMARK_KINDS}")

    rng = np.random.default_rng(seed)
    A = rng.standard_normal((order, order)) / np.sqrt(order)
    shift = np.max(scipy.linalg.eigvals(A).real) + 0.5
    A -= shift * np.eye(order)
    b = rng.standard_normal(order)
    c = rng.standard_normal(order)
    G = rng.standard_normal((order, order))
    M = (G + G.T) / 2
    if kind == "quad-only":
        c = np.zeros(order)
    return LqoModel(A, b, c, M)
