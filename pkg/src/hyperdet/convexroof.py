"""Convex-roof upper bounds of the hyperdeterminant measures on mixed states.

The convex roof of a pure-state measure E at a density matrix rho is the
minimum of sum_i p_i E(psi_i) over all decompositions rho = sum_i p_i
|psi_i><psi_i|.  Every decomposition of rho arises from any fixed one by an
isometry W (m x r, W'W = I) acting on the square-root-weighted member matrix,
so the search space is the isometry manifold.  The estimator here does
random-isometry restarts followed by greedy local refinement and therefore
returns an UPPER BOUND on the roof: the true roof is <= the reported value,
with equality only if the search happened to find a global optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cayley import _hdet_even_batch
from .hypermatrix import Hypermatrix
from .qstate import NORM_TOL, PureState, product_state

__all__ = [
    "HERMITICITY_TOL",
    "TRACE_TOL",
    "PSD_TOL",
    "EIG_CUTOFF",
    "DEFAULT_RESTARTS",
    "DEFAULT_ITERATIONS",
    "DensityMatrix",
    "Decomposition",
    "RoofResult",
    "eigen_ensemble",
    "steer_ensemble",
    "separable_mixture",
    "mix_density",
    "convex_roof_estimate",
]

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
EIG_CUTOFF = 1e-10
ISOMETRY_TOL = 1e-10

DEFAULT_RESTARTS = 32
DEFAULT_ITERATIONS = 500


class DensityMatrix:
    """Mixed state of n qudits: Hermitian, unit-trace, positive semidefinite."""

    __slots__ = ("n", "d", "_mat")

    def __init__(self, n: int, d: int, matrix):
        n = int(n)
        d = int(d)
        if n < 1 or d < 2:
            raise ValueError(f"need n >= 1 subsystems of dimension d >= 2, got {n}, {d}")
        mat = np.array(matrix, dtype=np.complex128)
        dim = d**n
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix has shape {mat.shape}, expected ({dim}, {dim})")
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian (residual {herm:.3e})")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace must be 1, got {tr!r}")
        lo = float(np.min(np.linalg.eigvalsh(mat)))
        if lo < -PSD_TOL:
            raise ValueError(f"matrix has negative eigenvalue {lo:.3e}")
        mat.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_mat", mat)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def matrix(self) -> np.ndarray:
        return self._mat

    @property
    def dim(self) -> int:
        return self.d**self.n

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        amps = psi.amplitudes
        return cls(psi.n, psi.d, np.outer(amps, amps.conj()))

    def __repr__(self):
        return f"DensityMatrix(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class Decomposition:
    """Weighted pure-state ensemble sum_i w_i |psi_i><psi_i|."""

    weights: np.ndarray
    states: tuple[PureState, ...]

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).reshape(-1)
        states = tuple(self.states)
        if w.size != len(states) or w.size < 1:
            raise ValueError("need one weight per state")
        if np.any(w < 0.0):
            raise ValueError(f"weights must be nonnegative, got {w}")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        n, d = states[0].n, states[0].d
        for s in states:
            if (s.n, s.d) != (n, d):
                raise ValueError("all ensemble members must share (n, d)")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", states)

    @property
    def size(self) -> int:
        return len(self.states)

    def density_matrix(self) -> DensityMatrix:
        first = self.states[0]
        dim = first.dim
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for w, s in zip(self.weights, self.states):
            mat += w * np.outer(s.amplitudes, s.amplitudes.conj())
        return DensityMatrix(first.n, first.d, mat)

    def average_measure(self, measure) -> float:
        """sum_i w_i measure(psi_i) for a pure-state measure callable."""
        return float(sum(w * measure(s) for w, s in zip(self.weights, self.states)))


def eigen_ensemble(rho: DensityMatrix, cutoff: float = EIG_CUTOFF) -> Decomposition:
    """Spectral decomposition of rho, eigenvalues below cutoff dropped."""
    vals, vecs = np.linalg.eigh(rho.matrix)
    keep = vals > cutoff
    vals, vecs = vals[keep], vecs[:, keep]
    if vals.size == 0:
        raise ValueError("density matrix has no eigenvalue above the cutoff")
    weights = vals / vals.sum()
    states = tuple(
        PureState(rho.n, rho.d, vecs[:, i] / np.linalg.norm(vecs[:, i]))
        for i in range(vals.size)
    )
    return Decomposition(weights=weights, states=states)


def steer_ensemble(base: Decomposition, w: np.ndarray) -> Decomposition:
    """New decomposition of the same rho from an m x r isometry.

    Member j of the result is proportional to sum_i W_ji sqrt(p_i) psi_i;
    its weight is the squared norm of that combination.  W must satisfy
    W'W = I_r.  Members of negligible weight are dropped.
    """
    w = np.asarray(w, dtype=np.complex128)
    r = base.size
    if w.ndim != 2 or w.shape[1] != r or w.shape[0] < r:
        raise ValueError(f"isometry must be m x {r} with m >= {r}, got {w.shape}")
    resid = np.max(np.abs(w.conj().T @ w - np.eye(r)))
    if resid > ISOMETRY_TOL:
        raise ValueError(f"not an isometry: |W'W - I| = {resid:.3e}")
    phi = np.vstack([np.sqrt(p) * s.amplitudes for p, s in zip(base.weights, base.states)])
    rows = w @ phi
    weights = np.sum(np.abs(rows) ** 2, axis=1)
    keep = weights > EIG_CUTOFF**2
    rows, weights = rows[keep], weights[keep]
    n, d = base.states[0].n, base.states[0].d
    states = tuple(
        PureState(n, d, row / np.sqrt(p)) for row, p in zip(rows, weights)
    )
    return Decomposition(weights=weights / weights.sum(), states=states)


def separable_mixture(
    factor_sets: Sequence[Sequence[np.ndarray]], weights: Sequence[float]
) -> DensityMatrix:
    """Mixture of product states: sum_i w_i |prod_i><prod_i|."""
    states = [product_state(fs) for fs in factor_sets]
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.size != len(states):
        raise ValueError("need one weight per factor set")
    dec = Decomposition(weights=w / w.sum() if abs(w.sum() - 1) > 1e-10 else w,
                        states=tuple(states))
    return dec.density_matrix()


def mix_density(rhos: Sequence[DensityMatrix], lambdas: Sequence[float]) -> DensityMatrix:
    """Convex combination sum_i lambda_i rho_i."""
    lam = np.asarray(lambdas, dtype=np.float64).reshape(-1)
    if lam.size != len(rhos) or lam.size < 1:
        raise ValueError("need one coefficient per density matrix")
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-12:
        raise ValueError("coefficients must be a probability vector")
    n, d = rhos[0].n, rhos[0].d
    mat = np.zeros_like(rhos[0].matrix)
    for l, r in zip(lam, rhos):
        if (r.n, r.d) != (n, d):
            raise ValueError("all density matrices must share (n, d)")
        mat = mat + l * r.matrix
    return DensityMatrix(n, d, mat)


@dataclass(frozen=True)
class RoofResult:
    """Outcome of a roof search: the bound, the best ensemble, and a trace."""

    value: float
    best: Decomposition
    which: str
    evaluations: int
    history: tuple[float, ...] = field(default=())


def _member_values(rows: np.ndarray, n: int, d: int, which: str) -> np.ndarray:
    """Per-member contribution w_j * E(psi_j) from unnormalized rows.

    Rows are sqrt(w_j) * psi_j, so homogeneity turns the contribution into
    |hdet(row)| * w_j^(1 - d/2) for E1 (and the squared analogue for E2);
    for qubits the exponent vanishes and no normalization is needed.
    """
    h = np.abs(_hdet_even_batch(rows, d, n))
    w = np.sum(np.abs(rows) ** 2, axis=1)
    live = w > 1e-300
    out = np.zeros(rows.shape[0])
    if which == "hdet":
        out[live] = h[live] * w[live] ** (1.0 - d / 2.0)
    else:
        out[live] = h[live] ** 2 * w[live] ** (1.0 - d)
    return out


def _span_coefficients(x: np.ndarray, y: np.ndarray, d: int, order: int) -> np.ndarray:
    """Coefficients c with hdet(a*x + b*y) = sum_k c[k] a^(d-k) b^k.

    hdet is homogeneous of degree d in the entries, so on a two-member span
    it is a binary form of degree d; d+1 evaluations at the (d+1)-th roots
    of unity pin the coefficients down by an inverse DFT.
    """
    nodes = np.exp(2j * np.pi * np.arange(d + 1) / (d + 1))
    samples = x[None, :] + nodes[:, None] * y[None, :]
    vals = _hdet_even_batch(samples, d, order)
    # vals[j] = sum_k c_k exp(+2 pi i jk/N), so the forward FFT inverts it.
    return np.fft.fft(vals) / (d + 1)


def _pair_objective(
    c: np.ndarray,
    wx: float,
    wy: float,
    xy: complex,
    d: int,
    which: str,
    theta: np.ndarray,
    chi: np.ndarray,
    eps: float = 0.0,
) -> np.ndarray:
    """Joint contribution of a rotated pair on a (theta, chi) grid.

    The rotation sends (x, y) to (a*x + b*y, -conj(b)*x + a*y) with
    a = cos(theta) and b = sin(theta) e^(i chi); a common phase only
    rephases the hyperdeterminants, so two parameters are exhaustive.
    With eps > 0 each member term v is softened to sqrt(v^2 + eps^2).
    """
    a = np.cos(theta)
    b = np.sin(theta) * np.exp(1j * chi)
    ks = np.arange(d + 1)
    det_j = (c * a[..., None] ** (d - ks) * b[..., None] ** ks).sum(-1)
    det_l = (c * (-b.conj())[..., None] ** (d - ks) * a[..., None] ** ks).sum(-1)
    cross = 2.0 * a * np.real(b * xy)
    wj = np.maximum(a**2 * wx + np.abs(b) ** 2 * wy + cross, 0.0)
    wl = np.maximum(np.abs(b) ** 2 * wx + a**2 * wy - cross, 0.0)
    e = 1.0 - d / 2.0 if which == "hdet" else 1.0 - float(d)
    out = np.zeros(np.shape(det_j))
    for det, w in ((det_j, wj), (det_l, wl)):
        v = np.zeros(np.shape(det))
        live = w > 1e-30
        if which == "hdet":
            v[live] = np.abs(det[live]) * w[live] ** e
        else:
            v[live] = np.abs(det[live]) ** 2 * w[live] ** e
        out += np.sqrt(v * v + eps * eps) if eps > 0.0 else v
    return out


_PAIR_GRID = 21
_PAIR_ZOOMS = 4
_PAIR_ZOOM_GRID = 13


def _form_roots(c: np.ndarray) -> np.ndarray:
    """Roots of sum_k c_k z^k (quadratic shortcut, np.roots otherwise)."""
    if c.size == 3 and c[2] != 0:
        disc = np.sqrt(c[1] * c[1] - 4.0 * c[2] * c[0] + 0j)
        return np.array([(-c[1] + disc), (-c[1] - disc)]) / (2.0 * c[2])
    return np.roots(c[::-1])


def _zero_candidates(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rotations that zero one rotated member's hyperdeterminant exactly.

    The span form factors over the roots of sum_k c_k z^k.  A root z makes
    member j vanish at b/a = z and member l vanish at a/(-conj(b)) = z, so
    each root yields two candidate (theta, chi) pairs.
    """
    if not np.any(np.abs(c) > 0):
        return np.empty(0), np.empty(0)
    roots = _form_roots(c)
    roots = roots[np.isfinite(roots)]
    if roots.size == 0:
        return np.empty(0), np.empty(0)
    mag, ang = np.abs(roots), np.angle(roots)
    theta = np.concatenate([np.arctan2(mag, 1.0), np.arctan2(1.0, mag)])
    chi = np.concatenate([ang, np.pi + ang])
    return theta, chi


def _pair_minimize(
    x: np.ndarray, y: np.ndarray, d: int, order: int, which: str, eps: float = 0.0
) -> tuple[float, float]:
    """Best (theta, chi) for the two-member rotation.

    A coarse grid with zoom refinement handles smooth interior minima; the
    exact zeroing rotations are appended because optimal ensembles often
    park members right on hyperdeterminant zeros, where grid resolution
    alone would leave a nonsmooth-corner error floor.
    """
    c = _span_coefficients(x, y, d, order)
    wx = float(np.sum(np.abs(x) ** 2))
    wy = float(np.sum(np.abs(y) ** 2))
    xy = complex(np.vdot(x, y))

    grid = _PAIR_GRID
    zooms = _PAIR_ZOOMS
    th = np.linspace(0.0, np.pi / 2, grid)
    ch = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    zt, zc = _zero_candidates(c)
    thetas = np.concatenate([np.repeat(th, ch.size), zt])
    chis = np.concatenate([np.tile(ch, th.size), zc])
    obj = _pair_objective(c, wx, wy, xy, d, which, thetas, chis, eps)
    k = int(np.argmin(obj))
    best_t, best_c, best_v = float(thetas[k]), float(chis[k]), float(obj[k])

    ht = (np.pi / 2) / (grid - 1)
    hc = (2 * np.pi) / grid
    for _ in range(zooms):
        th = np.linspace(
            max(0.0, best_t - ht), min(np.pi / 2, best_t + ht), _PAIR_ZOOM_GRID
        )
        ch = np.linspace(best_c - hc, best_c + hc, _PAIR_ZOOM_GRID)
        obj = np.atleast_2d(
            _pair_objective(c, wx, wy, xy, d, which, th[:, None], ch[None, :], eps)
        )
        i, j = np.unravel_index(np.argmin(obj), obj.shape)
        if obj[i, j] < best_v:
            best_t, best_c, best_v = float(th[i]), float(ch[j]), float(obj[i, j])
        ht /= _PAIR_ZOOM_GRID // 2
        hc /= _PAIR_ZOOM_GRID // 2
    return best_t, best_c


def _haar_unitary(m: int, rng) -> np.ndarray:
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def convex_roof_estimate(
    rho: DensityMatrix,
    which: str = "hdet",
    restarts: int = DEFAULT_RESTARTS,
    iterations: int = DEFAULT_ITERATIONS,
    m_max: Optional[int] = None,
    seed=None,
) -> RoofResult:
    """Upper-bound the convex roof of E1 (|hdet|) or E2 (|hdet|^2) at rho.

    Strategy: the eigen-ensemble seeds the search; each restart applies a
    random m x m unitary to the zero-padded member matrix (equivalent to a
    Haar m x r isometry) and then refines by exact two-member rotations,
    solved through the binary form the measure restricts to on a pair's
    span, under a smoothing of the member terms that shrinks to zero.  A
    step is accepted only when it lowers the smoothed objective; the
    reported best is tracked on the exact objective and starts at the
    eigen-ensemble average, so it never exceeds that average.

    Parameters
    ----------
    which : "hdet" for sum w_i |hdet|, "tangle" for sum w_i |hdet|^2.
    restarts, iterations : search budget per the declared defaults.
    m_max : largest ensemble size tried; defaults to r**2 for rank r.
    seed : RNG seed or numpy Generator; fixes the whole search.

    Returns
    -------
    RoofResult with the bound, the realizing Decomposition, the total
    objective evaluations, and the best value after each restart.
    """
    if which not in ("hdet", "tangle"):
        raise ValueError(f"which must be 'hdet' or 'tangle', got {which!r}")
    if restarts < 1 or iterations < 1:
        raise ValueError("zero budget: need restarts >= 1 and iterations >= 1")
    rng = np.random.default_rng(seed)
    base = eigen_ensemble(rho)
    r = base.size
    m_max = r * r if m_max is None else int(m_max)
    if m_max < r:
        raise ValueError(f"m_max={m_max} below ensemble rank {r}")
    n, d = base.states[0].n, base.states[0].d
    if n % 2 != 0:
        # Odd subsystem count: the pure measure is identically zero, so the
        # roof is zero for every decomposition.
        return RoofResult(0.0, base, which, 0, (0.0,))

    phi0 = np.vstack(
        [np.sqrt(p) * s.amplitudes for p, s in zip(base.weights, base.states)]
    )
    evaluations = 0
    best_rows = phi0.copy()
    best_vals = _member_values(best_rows, n, d, which)
    evaluations += 1
    best_value = float(best_vals.sum())
    history = [best_value]

    # Small ensembles first: rank-size unitaries usually suffice and keep the
    # search space small; later restarts grow toward m_max.
    sizes = [r] * max(1, restarts // 2)
    grow = list(range(r, m_max + 1))
    k = 0
    while len(sizes) < restarts:
        sizes.append(grow[min(k, len(grow) - 1)])
        k += 1

    for restart in range(restarts):
        m = sizes[restart]
        rows = np.zeros((m, phi0.shape[1]), dtype=np.complex128)
        rows[:r] = phi0
        if restart > 0:
            rows = _haar_unitary(m, rng) @ rows
        vals = _member_values(rows, n, d, which)
        evaluations += 1
        value = float(vals.sum())
        if value < best_value:
            best_value = value
            best_rows = rows.copy()
        sweep = m * (m - 1) // 2
        pair_queue: list[tuple[int, int]] = []
        stalled = 0
        scale0 = value
        # Smoothing continuation: the true objective has corners where
        # members sit on hyperdeterminant zeros, and pairwise descent stalls
        # there even far from the optimum.  Softening each member term to
        # sqrt(v^2 + eps^2) makes unloading one member onto a zeroed one a
        # second-order cost, so pair moves tunnel through; eps then shrinks
        # toward the exact objective.
        eps = value / (4.0 * m)
        for _ in range(iterations):
            if m < 2:
                break
            if not pair_queue:
                idx = [(j, l) for j in range(m) for l in range(j + 1, m)]
                order = rng.permutation(len(idx))
                pair_queue = [idx[t] for t in order]
            j, l = pair_queue.pop()
            theta, chi = _pair_minimize(rows[j], rows[l], d, n, which, eps)
            evaluations += d + 1
            a = np.cos(theta)
            b = np.sin(theta) * np.exp(1j * chi)
            pair = np.array(
                [a * rows[j] + b * rows[l], -b.conjugate() * rows[j] + a * rows[l]]
            )
            new_pair_vals = _member_values(pair, n, d, which)
            evaluations += 1
            soft_old = np.sqrt(vals[[j, l]] ** 2 + eps * eps).sum()
            soft_new = np.sqrt(new_pair_vals**2 + eps * eps).sum()
            if soft_new - soft_old < -1e-15 * (1.0 + value):
                rows[[j, l]] = pair
                vals[[j, l]] = new_pair_vals
                value = float(vals.sum())
                stalled = 0
                if value < best_value:
                    best_value = value
                    best_rows = rows.copy()
            else:
                stalled += 1
            if stalled >= sweep:
                # A whole sweep of pairwise solves gave no progress at this
                # smoothing level; sharpen or, at eps = 0, give up.
                if eps == 0.0:
                    break
                eps = min(eps / 8.0, value / (8.0 * m))
                if eps < 1e-13 * (1.0 + scale0):
                    eps = 0.0
                pair_queue = []
                stalled = 0
        if value < best_value:
            best_value = value
            best_rows = rows.copy()
        history.append(best_value)

    # Report the value recomputed from the winning rows; the running value
    # accumulates deltas and can drift by rounding.
    best_value = float(_member_values(best_rows, n, d, which).sum())
    weights = np.sum(np.abs(best_rows) ** 2, axis=1)
    keep = weights > EIG_CUTOFF**2
    rows, weights = best_rows[keep], weights[keep]
    states = tuple(
        PureState(n, d, row / np.sqrt(p)) for row, p in zip(rows, weights)
    )
    dec = Decomposition(weights=weights / weights.sum(), states=states)
    return RoofResult(
        value=best_value,
        best=dec,
        which=which,
        evaluations=evaluations,
        history=tuple(history),
    )
