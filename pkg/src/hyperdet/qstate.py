"""Pure qudit states, their hypermatrix form, and hyperdeterminant measures.

A pure state of n qudits with local dimension d is a unit vector of d**n
complex amplitudes.  Reshaping the amplitudes row-major into an order-n
cuboid of side d identifies the state with a hypermatrix; the modulus of the
even-order hyperdeterminant of that cuboid (and its square) are the
entanglement measures computed here.  For qubit systems the measure doubles
as half the familiar 2n-qubit concurrence, which has an independent
inner-product form used for cross-checking.
"""

from __future__ import annotations

import warnings
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .cayley import DEFAULT_MAX_TERMS, _even_term_table, hdet_even
from .hypermatrix import Hypermatrix, multilinear_multiply

__all__ = [
    "OddOrderWarning",
    "PureState",
    "NORM_TOL",
    "to_hypermatrix",
    "from_hypermatrix",
    "product_state",
    "random_unitary",
    "random_haar_state",
    "apply_local_unitaries",
    "permute_subsystems",
    "marginal_weights",
    "measure_hdet",
    "measure_tangle",
    "concurrence_qubits",
    "ntangle_qubits",
    "hdet_quadratic_form",
]

# Unit-norm slack accepted by constructors and loaders.
NORM_TOL = 1e-9

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


class OddOrderWarning(UserWarning):
    """The hyperdeterminant of an odd number of subsystems is identically 0."""


class PureState:
    """Normalized pure state of n qudits with local dimension d."""

    __slots__ = ("n", "d", "_amps")

    def __init__(self, n: int, d: int, amplitudes):
        n = int(n)
        d = int(d)
        if n < 1:
            raise ValueError(f"need at least one subsystem, got n={n}")
        if d < 2:
            raise ValueError(f"local dimension must be >= 2, got d={d}")
        amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != d**n:
            raise ValueError(
                f"amplitude vector has length {amps.size}, expected {d}**{n} = {d**n}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |amps| = {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_amps", amps)

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @property
    def amplitudes(self) -> np.ndarray:
        """Read-only flat amplitude vector of length d**n."""
        return self._amps

    @property
    def dim(self) -> int:
        return self.d**self.n

    def __repr__(self):
        return f"PureState(n={self.n}, d={self.d})"


def to_hypermatrix(psi: PureState) -> Hypermatrix:
    """Row-major reshape of the amplitudes into an order-n cuboid of side d."""
    return Hypermatrix(psi.amplitudes, shape=(psi.d,) * psi.n)


def from_hypermatrix(h: Hypermatrix) -> PureState:
    """Inverse of to_hypermatrix; the cuboid entries must be unit-norm."""
    if not h.is_cuboid():
        raise ValueError(f"state hypermatrix must be cuboid, got {h.dims}")
    return PureState(h.order, h.side, h.entries)


def product_state(factors: Sequence[np.ndarray]) -> PureState:
    """Tensor product of single-qudit unit vectors."""
    if len(factors) < 1:
        raise ValueError("need at least one factor")
    vecs = [np.asarray(f, dtype=np.complex128).reshape(-1) for f in factors]
    d = vecs[0].size
    for k, v in enumerate(vecs):
        if v.size != d:
            raise ValueError(f"factor {k} has dimension {v.size}, expected {d}")
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise ValueError(f"factor {k} is not a unit vector")
    amps = reduce(np.kron, vecs)
    return PureState(len(vecs), d, amps)


def random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random d x d unitary.

    QR of a complex Ginibre matrix with the R-diagonal phases folded back
    into Q, which makes the distribution exactly Haar.
    """
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def random_haar_state(n: int, d: int, seed=None) -> PureState:
    """Haar-random pure state: normalized complex Gaussian amplitudes."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(d**n) + 1j * rng.standard_normal(d**n)
    return PureState(n, d, z / np.linalg.norm(z))


def apply_local_unitaries(psi: PureState, mats: Sequence[np.ndarray]) -> PureState:
    """Apply (U_1 x ... x U_n) to the state, one d x d unitary per qudit."""
    if len(mats) != psi.n:
        raise ValueError(f"need {psi.n} matrices, got {len(mats)}")
    h = multilinear_multiply(mats, to_hypermatrix(psi))
    return from_hypermatrix(h)


def permute_subsystems(psi: PureState, perm: Sequence[int]) -> PureState:
    """Reorder subsystems; new subsystem k is old subsystem perm[k]."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(psi.n)):
        raise ValueError(f"perm={perm} is not a permutation of {psi.n} subsystems")
    arr = psi.amplitudes.reshape((psi.d,) * psi.n)
    return PureState(psi.n, psi.d, np.transpose(arr, axes=perm).reshape(-1))


def marginal_weights(psi: PureState) -> np.ndarray:
    """Probability weights of the first subsystem's computational basis.

    Entry k is the modulus-squared sum of all amplitudes whose first index
    is k; the weights are nonnegative and sum to 1.
    """
    arr = psi.amplitudes.reshape(psi.d, -1)
    return np.sum(np.abs(arr) ** 2, axis=1)


def measure_hdet(psi: PureState, max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """|hdet| of the state's hypermatrix; 0 for an odd number of subsystems.

    The odd case is identically zero (no information in the value), so it
    warns with OddOrderWarning rather than failing.
    """
    if psi.n % 2 != 0:
        warnings.warn(
            f"hyperdeterminant of {psi.n} (odd) subsystems is identically zero",
            OddOrderWarning,
            stacklevel=2,
        )
        return 0.0
    arr = psi.amplitudes.reshape((psi.d,) * psi.n)
    return abs(hdet_even(arr, max_terms=max_terms))


def measure_tangle(psi: PureState, max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """|hdet|**2 of the state's hypermatrix (squared-measure variant)."""
    return measure_hdet(psi, max_terms=max_terms) ** 2


@lru_cache(maxsize=8)
def _pauli_y_kron(n: int) -> np.ndarray:
    m = np.array([[1.0 + 0.0j]])
    for _ in range(n):
        m = np.kron(m, PAULI_Y)
    m.flags.writeable = False
    return m


def concurrence_qubits(psi: PureState) -> float:
    """Concurrence |psi^T (sigma_y tensor ... tensor sigma_y) psi|.

    Defined for an even number of qubits; equals twice the hyperdeterminant
    measure, a relation covered by tests.  The inner-product form here is
    the spin-flip overlap |<flip(psi)|psi>| written without conjugation.
    """
    if psi.d != 2:
        raise ValueError(f"concurrence is defined for qubits, got d={psi.d}")
    if psi.n % 2 != 0:
        raise ValueError(f"concurrence needs an even qubit count, got n={psi.n}")
    m = _pauli_y_kron(psi.n)
    return float(abs(psi.amplitudes @ m @ psi.amplitudes))


def ntangle_qubits(psi: PureState) -> float:
    """Squared concurrence of an even number of qubits (the n-tangle)."""
    return concurrence_qubits(psi) ** 2


def hdet_quadratic_form(n: int, max_n: int = 8) -> np.ndarray:
    """Matrix M with psi^T M psi = hdet of the n-qubit state's hypermatrix.

    Built directly from the reduced even-order sum: each term contributes
    its sign to one amplitude-pair coefficient, and the raw coefficient
    matrix is then symmetrized.  n must be even; the result is the real
    symmetric 2**n x 2**n matrix ((-1)**(n/2) / 2) * sigma_y^{(x) n}.
    """
    n = int(n)
    if n % 2 != 0:
        raise ValueError(f"quadratic form exists for even qubit counts, got n={n}")
    if n < 2 or n > max_n:
        raise ValueError(f"n={n} outside supported range 2..{max_n}")
    idx, sign = _even_term_table(2, n)
    m = np.zeros((2**n, 2**n))
    np.add.at(m, (idx[:, 0], idx[:, 1]), sign)
    return (m + m.T) / 2.0
