"""Two-outcome local measurements and monotonicity trials for the measures.

A two-outcome POVM {M1, M2} with M1'M1 + M2'M2 = I is carried in shared-SVD
form: M1 = U1 diag(sigma) V', M2 = U2 diag(sqrt(1 - sigma^2)) V' with U1, U2,
V unitary and singular values sigma in [0, 1].  Applying it to the first
qudit of a pure state and averaging the hyperdeterminant measure over the
outcomes never increases the measure; monotonicity_trial packages one random
instance of that experiment into a structured record.

The scalar inequality behind the monotonicity proof is also exposed:
lemma1_f evaluates

    f(P) = (prod a_k)^(1/eta) / (sum_k a_k P_k)^(d/eta - 1)
         + (prod (1-a_k))^(1/eta) / (sum_k (1-a_k) P_k)^(d/eta - 1)

for a_k in [0, 1] and probability weights P_k in [0, 1), which is bounded by
1; lemma1_critical_value gives its stationary value
((prod a)^(1/d) + (prod(1-a))^(1/d))^(d/eta).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .qstate import PureState, measure_hdet, measure_tangle, permute_subsystems, random_haar_state, random_unitary

__all__ = [
    "COMPLETENESS_TOL",
    "DEGENERACY_EPS",
    "MARGIN_TOL",
    "TwoOutcomePovm",
    "PovmOutcome",
    "TrialReport",
    "random_povm",
    "apply_povm",
    "expected_measure",
    "monotonicity_trial",
    "lemma1_f",
    "lemma1_critical_value",
    "lemma1_optimizer_weights",
]

COMPLETENESS_TOL = 1e-10
DEGENERACY_EPS = 1e-12
MARGIN_TOL = 1e-9

_MEASURES = {"hdet": measure_hdet, "tangle": measure_tangle}


def _require_unitary(m: np.ndarray, name: str, tol: float = 1e-10) -> np.ndarray:
    m = np.array(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    resid = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    if resid > tol:
        raise ValueError(f"{name} is not unitary (residual {resid:.3e})")
    return m


@dataclass(frozen=True)
class TwoOutcomePovm:
    """Complete two-outcome POVM in shared right-singular-vector form."""

    u1: np.ndarray
    u2: np.ndarray
    v: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        u1 = _require_unitary(self.u1, "u1")
        u2 = _require_unitary(self.u2, "u2")
        v = _require_unitary(self.v, "v")
        sigma = np.array(self.sigma, dtype=np.float64).reshape(-1)
        d = u1.shape[0]
        if u2.shape != (d, d) or v.shape != (d, d) or sigma.size != d:
            raise ValueError("u1, u2, v, sigma must share one dimension d")
        if np.any(sigma < 0.0) or np.any(sigma > 1.0):
            raise ValueError(f"singular values must lie in [0, 1], got {sigma}")
        for arr in (u1, u2, v, sigma):
            arr.flags.writeable = False
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "sigma", sigma)
        resid = self.completeness_residual()
        if resid > COMPLETENESS_TOL:
            raise ValueError(f"POVM incomplete: residual {resid:.3e}")

    @property
    def d(self) -> int:
        return self.u1.shape[0]

    @property
    def m1(self) -> np.ndarray:
        return (self.u1 * self.sigma) @ self.v.conj().T

    @property
    def m2(self) -> np.ndarray:
        return (self.u2 * np.sqrt(1.0 - self.sigma**2)) @ self.v.conj().T

    def completeness_residual(self) -> float:
        """Max entry of |M1'M1 + M2'M2 - I|."""
        m1, m2 = self.m1, self.m2
        s = m1.conj().T @ m1 + m2.conj().T @ m2
        return float(np.max(np.abs(s - np.eye(self.d))))


@dataclass(frozen=True)
class PovmOutcome:
    """One branch of a measurement: its probability and post-measurement state.

    A branch of negligible probability carries no state (state is None); it
    is skipped when averaging measures.
    """

    probability: float
    state: Optional[PureState]

    @property
    def degenerate(self) -> bool:
        return self.state is None


def random_povm(d: int, seed=None) -> TwoOutcomePovm:
    """Random complete two-outcome POVM: Haar U1, U2, V; sigma uniform in [0,1]."""
    rng = np.random.default_rng(seed)
    return TwoOutcomePovm(
        u1=random_unitary(d, rng),
        u2=random_unitary(d, rng),
        v=random_unitary(d, rng),
        sigma=rng.uniform(0.0, 1.0, size=d),
    )


def _swap_perm(n: int, site: int) -> list[int]:
    perm = list(range(n))
    perm[0], perm[site] = perm[site], perm[0]
    return perm


def apply_povm(
    psi: PureState, povm: TwoOutcomePovm, site: int = 0
) -> tuple[PovmOutcome, PovmOutcome]:
    """Measure one qudit, returning both outcome branches.

    The POVM acts on the first qudit; other sites are handled by conjugating
    with the subsystem swap (swap in, measure, swap back), so the returned
    states keep the caller's subsystem order.  Outcome probabilities are
    <psi| M_i'M_i x I |psi> and sum to 1.
    """
    if povm.d != psi.d:
        raise ValueError(f"POVM dimension {povm.d} != state dimension {psi.d}")
    if not 0 <= site < psi.n:
        raise ValueError(f"site {site} out of range for {psi.n} subsystems")
    work = permute_subsystems(psi, _swap_perm(psi.n, site)) if site else psi
    arr = work.amplitudes.reshape(psi.d, -1)
    outcomes = []
    for m in (povm.m1, povm.m2):
        phi = (m @ arr).reshape(-1)
        p = float(np.real(np.vdot(phi, phi)))
        if p < DEGENERACY_EPS:
            outcomes.append(PovmOutcome(p, None))
            continue
        state = PureState(psi.n, psi.d, phi / np.sqrt(p))
        if site:
            state = permute_subsystems(state, _swap_perm(psi.n, site))
        outcomes.append(PovmOutcome(p, state))
    return outcomes[0], outcomes[1]


def expected_measure(
    psi: PureState, povm: TwoOutcomePovm, which: str = "hdet", site: int = 0
) -> float:
    """Outcome-averaged measure p1 E(state1) + p2 E(state2).

    Degenerate branches contribute nothing (their weight is below
    DEGENERACY_EPS and the measure of the undefined state is taken as 0).
    """
    if which not in _MEASURES:
        raise ValueError(f"which must be one of {sorted(_MEASURES)}, got {which!r}")
    measure = _MEASURES[which]
    total = 0.0
    for outcome in apply_povm(psi, povm, site=site):
        if outcome.degenerate:
            continue
        total += outcome.probability * measure(outcome.state)
    return total


@dataclass(frozen=True)
class TrialReport:
    """One monotonicity experiment, in the shape the report path emits."""

    seed: int
    n: int
    d: int
    which: str
    measure_before: float
    expected_after: float
    margin: float
    passed: bool

    def to_record(self) -> dict:
        return {
            "seed": self.seed,
            "n": self.n,
            "d": self.d,
            "which": self.which,
            "measure_before": self.measure_before,
            "expected_after": self.expected_after,
            "margin": self.margin,
            "pass": self.passed,
        }


def monotonicity_trial(seed: int, n: int, d: int, which: str = "hdet") -> TrialReport:
    """Draw a Haar state of 2n qudits and a random POVM; check the average.

    The margin is measure(psi) - expected measure after the measurement;
    monotonicity predicts margin >= 0, and the trial passes when it is above
    -MARGIN_TOL (numerical slack only).
    """
    rng = np.random.default_rng(seed)
    psi = random_haar_state(2 * n, d, rng)
    povm = random_povm(d, rng)
    before = _MEASURES[which](psi)
    after = expected_measure(psi, povm, which=which)
    margin = before - after
    return TrialReport(
        seed=seed,
        n=n,
        d=d,
        which=which,
        measure_before=before,
        expected_after=after,
        margin=margin,
        passed=bool(margin >= -MARGIN_TOL),
    )


def _validate_lemma1_inputs(alphas, weights, eta):
    a = np.asarray(alphas, dtype=np.float64).reshape(-1)
    if a.size < 1:
        raise ValueError("need at least one alpha")
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise ValueError(f"alphas must lie in [0, 1], got {a}")
    p = np.asarray(weights, dtype=np.float64).reshape(-1)
    if p.size != a.size:
        raise ValueError(f"got {a.size} alphas but {p.size} weights")
    if np.any(p < 0.0) or np.any(p >= 1.0):
        raise ValueError(f"weights must lie in [0, 1), got {p}")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"weights must sum to 1, got {p.sum()!r}")
    if np.count_nonzero(p) < 2:
        raise ValueError("need at least two nonzero weights")
    eta = float(eta)
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    return a, p, eta


def _lemma1_term(num: float, base: float, expo: float) -> float:
    if base > 0.0:
        return num / base**expo
    if expo > 0.0:
        if num == 0.0:
            return 0.0
        raise ValueError("term diverges: zero mixture average under a positive product")
    if expo == 0.0:
        return num
    return 0.0


def lemma1_f(alphas, weights, eta: float) -> float:
    """The two-term averaging bound function; at most 1 on its domain."""
    a, p, eta = _validate_lemma1_inputs(alphas, weights, eta)
    d = a.size
    expo = d / eta - 1.0
    term1 = _lemma1_term(float(np.prod(a)) ** (1.0 / eta), float(a @ p), expo)
    term2 = _lemma1_term(
        float(np.prod(1.0 - a)) ** (1.0 / eta), float((1.0 - a) @ p), expo
    )
    return term1 + term2


def lemma1_critical_value(alphas, eta: float) -> float:
    """Stationary value ((prod a)^(1/d) + (prod(1-a))^(1/d))^(d/eta).

    This is the value of lemma1_f on the stationary slice of the weight
    simplex; it dominates lemma1_f over all interior weights when eta >= d
    (for eta < d the profile is convex in the mixture average and peaks at
    extremal weights instead).  It is itself bounded by 1.
    """
    a = np.asarray(alphas, dtype=np.float64).reshape(-1)
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise ValueError(f"alphas must lie in [0, 1], got {a}")
    eta = float(eta)
    if eta <= 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    d = a.size
    root1 = float(np.prod(a)) ** (1.0 / d)
    root2 = float(np.prod(1.0 - a)) ** (1.0 / d)
    return (root1 + root2) ** (d / eta)


def lemma1_optimizer_weights(alphas) -> Optional[np.ndarray]:
    """A weight vector on which lemma1_f attains the stationary value.

    The stationary slice fixes the mixture average sum_k a_k P_k to
    x* = A / (A + B) with A = (prod a)^(1/d), B = (prod(1-a))^(1/d); any
    valid weights realizing that average work, and this picks the two-point
    mixture supported on the extremal alphas.  Returns None when x* cannot
    be realized by weights in [0, 1) (then only the f <= 1 bound applies).
    """
    a = np.asarray(alphas, dtype=np.float64).reshape(-1)
    if np.any(a < 0.0) or np.any(a > 1.0):
        raise ValueError(f"alphas must lie in [0, 1], got {a}")
    d = a.size
    lo, hi = int(np.argmin(a)), int(np.argmax(a))
    root1 = float(np.prod(a)) ** (1.0 / d)
    root2 = float(np.prod(1.0 - a)) ** (1.0 / d)
    if root1 + root2 == 0.0:
        return None
    x_star = root1 / (root1 + root2)
    if not a[lo] < x_star < a[hi]:
        return None
    t = (a[hi] - x_star) / (a[hi] - a[lo])
    if not 0.0 < t < 1.0:
        return None
    weights = np.zeros(d)
    weights[lo] = t
    weights[hi] = 1.0 - t
    return weights
