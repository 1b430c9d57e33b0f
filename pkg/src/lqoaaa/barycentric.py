"""Coupled barycentric forms for the two transfer functions of an LQO system.

With support points ``xi_k``, weights ``w_k``, ``phi_k(s) = 1/(s - xi_k)`` and
``D(s) = 1 + sum_k w_k phi_k(s)``::

    r1(s)    = sum_k w_k h_k phi_k(s) / D(s)
    r2(s, z) = sum_{k,l} h_{kl} w_k w_l phi_k(s) phi_l(z) / (D(s) D(z))

Both forms share the same weights, hence the same poles, and they are the
transfer functions of the LQO model returned by :func:`realize`.

Evaluation goes through the normalized basis ``beta_k(s) = w_k phi_k(s) / D(s)``
so that ``r1 = beta(s)^T h`` and ``r2 = beta(s)^T H beta(z)``. At a support
point ``beta`` is a unit vector, which gives exact interpolation without a 0/0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DuplicatePoints, ZeroDenominator, ZeroWeight
from .model import LqoModel, _frozen, symmetrize

#: relative window in which an evaluation point snaps to a support point
SNAP_RTOL = 1e-13


@dataclass(frozen=True, eq=False)
class LqoInterpolant:
    """Support points, weights and data defining ``r1`` and ``r2`` jointly.

    ``h2_grid`` is symmetrized on construction; ``h2_asymmetry`` records the
    largest absolute entry of ``H - H^T`` before that.
    """

    support: np.ndarray
    weights: np.ndarray
    h1_values: np.ndarray
    h2_grid: np.ndarray
    h2_asymmetry: float = field(init=False)

    def __post_init__(self):
        xi = np.atleast_1d(np.asarray(self.support, dtype=complex)).ravel()
        w = np.atleast_1d(np.asarray(self.weights, dtype=complex)).ravel()
        h = np.atleast_1d(np.asarray(self.h1_values, dtype=complex)).ravel()
        H = np.atleast_2d(np.asarray(self.h2_grid, dtype=complex))
        n = len(xi)
        if n < 1:
            raise ValueError("an interpolant needs at least one support point")
        if w.shape != (n,) or h.shape != (n,) or H.shape != (n, n):
            raise ValueError(
                f"inconsistent shapes: support {xi.shape}, weights {w.shape}, "
                f"h1_values {h.shape}, h2_grid {H.shape}"
            )
        diff = xi[:, None] - xi[None, :]
        np.fill_diagonal(diff, 1.0)
        if np.any(diff == 0):
            raise DuplicatePoints("support points must be pairwise distinct")
        if np.any(w == 0):
            raise ZeroWeight(f"zero weight at support index {int(np.flatnonzero(w == 0)[0])}")
        object.__setattr__(self, "support", _frozen(xi))
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "h1_values", _frozen(h))
        object.__setattr__(self, "h2_grid", _frozen(symmetrize(H)))
        object.__setattr__(self, "h2_asymmetry", float(np.max(np.abs(H - H.T))))

    @property
    def order(self) -> int:
        return len(self.support)

    def __repr__(self):
        return f"LqoInterpolant(order={self.order})"


def _support_hits(xi, s):
    """Index of the support point each entry of ``s`` snaps to, or -1."""
    dist = np.abs(s[:, None] - xi[None, :])
    hit = dist <= SNAP_RTOL * (1.0 + np.abs(xi))[None, :]
    idx = np.where(hit.any(axis=1), np.argmax(hit, axis=1), -1)
    return idx


def denominator(interp: LqoInterpolant, s) -> np.ndarray:
    """``D(s) = 1 + sum_k w_k / (s - xi_k)`` (infinite at support points)."""
    s = np.asarray(s, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        C = 1.0 / (s[..., None] - interp.support)
        return 1.0 + C @ interp.weights


def basis(interp: LqoInterpolant, s, *, strict=True, variable="s") -> np.ndarray:
    """Normalized basis ``beta_k(s) = w_k phi_k(s) / D(s)``, shape ``(len(s), n)``.

    Rows at support points are unit vectors. Where ``D(s)`` vanishes to
    working precision the point is a pole: :class:`ZeroDenominator` is raised
    if ``strict``, otherwise the row is filled with ``inf``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex)).ravel()
    xi, w = interp.support, interp.weights
    hits = _support_hits(xi, s)
    free = hits < 0

    B = np.zeros((len(s), len(xi)), dtype=complex)
    B[~free, hits[~free]] = 1.0
    if np.any(free):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            T = w / (s[free, None] - xi)
            D = 1.0 + T.sum(axis=1)
            # cancellation floor for the sum in D
            floor = 8 * np.finfo(float).eps * (1.0 + np.abs(T).sum(axis=1))
            bad = ~(np.abs(D) > floor) | ~np.isfinite(D)
            if strict and np.any(bad):
                raise ZeroDenominator(s[free][np.argmax(bad)], variable)
            Bf = T / D[:, None]
            Bf[bad] = np.inf
        B[free] = Bf
    return B


def eval_r1(interp: LqoInterpolant, s):
    """Evaluate ``r1`` at a scalar or an array of points."""
    scalar = np.ndim(s) == 0
    vals = basis(interp, s) @ interp.h1_values
    return complex(vals[0]) if scalar else vals.reshape(np.shape(s))


def eval_r2(interp: LqoInterpolant, s, z):
    """Evaluate ``r2`` at a point pair, or pointwise on broadcast arrays."""
    scalar = np.ndim(s) == 0 and np.ndim(z) == 0
    s_b, z_b = np.broadcast_arrays(np.asarray(s, dtype=complex), np.asarray(z, dtype=complex))
    Bs = basis(interp, s_b.ravel(), variable="s")
    Bz = basis(interp, z_b.ravel(), variable="z")
    vals = np.einsum("ik,kl,il->i", Bs, interp.h2_grid, Bz)
    return complex(vals[0]) if scalar else vals.reshape(s_b.shape)


def eval_r2_grid(interp: LqoInterpolant, s, z=None, *, strict=True) -> np.ndarray:
    """``r2`` on the tensor grid ``s x z`` (``z`` defaults to ``s``)."""
    Bs = basis(interp, s, strict=strict, variable="s")
    Bz = Bs if z is None else basis(interp, z, strict=strict, variable="z")
    with np.errstate(invalid="ignore", over="ignore"):
        return Bs @ interp.h2_grid @ Bz.T


def literal_denominator(interp: LqoInterpolant, s, z) -> complex:
    """The four-term denominator of ``r2`` summed term by term."""
    phi_s = 1.0 / (complex(s) - interp.support)
    phi_z = 1.0 / (complex(z) - interp.support)
    w = interp.weights
    return 1.0 + np.sum(w * phi_s) + np.sum(w * phi_z) + np.sum(np.outer(w * phi_s, w * phi_z))


def state_matrix(interp: LqoInterpolant) -> np.ndarray:
    """``A_r = diag(xi) - 1 w^T``; its eigenvalues are the poles of ``r1`` and ``r2``."""
    return np.diag(interp.support) - np.outer(np.ones(interp.order), interp.weights)


def poles(interp: LqoInterpolant) -> np.ndarray:
    return scipy.linalg.eigvals(state_matrix(interp))


def realize(interp: LqoInterpolant, real: bool = False) -> LqoModel:
    """LQO model whose transfer functions are exactly ``r1`` and ``r2``.

    ``A = diag(xi) - 1 w^T``, ``b = 1``, ``c_k = w_k h_k`` and
    ``M_{kl} = w_k w_l h_{kl}``. By Sherman-Morrison the state response is
    ``(sI - A)^{-1} 1 = [phi_k(s) / D(s)]_k``, which reproduces both forms.

    With ``real=True`` the support must be closed under conjugation with
    conjugate weights and data; a block similarity then maps each conjugate
    pair of states onto their real and imaginary parts and the returned
    model has real matrices.
    """
    xi, w = interp.support, interp.weights
    n = interp.order
    A = state_matrix(interp)
    b = np.ones(n, dtype=complex)
    c = w * interp.h1_values
    M = np.outer(w, w) * interp.h2_grid
    if not real:
        return LqoModel(A, b, c, M)

    T = _realifying_transform(xi)
    Tinv = np.linalg.inv(T)
    A_re = T @ A @ Tinv
    b_re = T @ b
    c_re = Tinv.T @ c
    M_re = Tinv.T @ M @ Tinv
    parts = (A_re, b_re, c_re, M_re)
    imag = max(np.max(np.abs(p.imag)) for p in parts)
    size = max(np.max(np.abs(p)) for p in parts)
    if imag > 1e-8 * max(size, 1.0):
        raise ValueError(
            f"interpolant is not conjugate-symmetric (imaginary residue {imag:.3g} after realification)"
        )
    return LqoModel(*(p.real for p in parts))


def conjugate_pairing(points, rtol=1e-13) -> np.ndarray:
    """Index of the conjugate of each point, or raise if not conjugation-closed."""
    points = np.asarray(points, dtype=complex)
    dist = np.abs(points[:, None] - np.conj(points)[None, :])
    partner = np.argmin(dist, axis=1)
    tol = rtol * (1.0 + np.abs(points))
    if np.any(dist[np.arange(len(points)), partner] > tol):
        raise ValueError("point set is not closed under complex conjugation")
    if np.any(partner[partner] != np.arange(len(points))):
        raise ValueError("conjugate pairing is not an involution")
    return partner


def _realifying_transform(points) -> np.ndarray:
    """``T`` with ``conj(T) = T P`` for the conjugation permutation ``P``.

    For a pair ``(k, l)`` the new coordinates are ``(x_k + x_l)/2`` and
    ``(x_k - x_l)/(2i)``; real points keep their coordinate.
    """
    partner = conjugate_pairing(points)
    n = len(points)
    T = np.zeros((n, n), dtype=complex)
    done = np.zeros(n, dtype=bool)
    for k in range(n):
        if done[k]:
            continue
        l = partner[k]
        if l == k:
            T[k, k] = 1.0
        else:
            # rows k, l: real and imaginary part of the state at index k
            T[k, k], T[k, l] = 0.5, 0.5
            T[l, k], T[l, l] = -0.5j, 0.5j
        done[k] = done[l] = True
    return T
