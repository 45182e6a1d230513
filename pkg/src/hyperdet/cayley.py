"""Cayley's first (combinatorial) hyperdeterminant of cuboid hypermatrices.

For an order-N cuboid A with side d the full definition is

    hdet(A) = (1/d!) * sum_{s1,...,sN in S_d} sgn(s1)...sgn(sN)
              * prod_{j=1}^{d} A[s1(j), s2(j), ..., sN(j)]

and for even N the first permutation can be fixed to the identity, dropping
the 1/d! prefactor:

    hdet(A) = sum_{s2,...,sN in S_d} sgn(s2)...sgn(sN)
              * prod_{j=1}^{d} A[j, s2(j), ..., sN(j)]

Both sums are implemented here; the reduced even-order form is the default
evaluation path.  For odd N and d >= 2 the full sum cancels to zero.  hdet is
homogeneous of degree d in the entries and multiplies by det(X_k) under
multilinear multiplication by square matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial, fsum
from typing import Iterator

import numpy as np

from .hypermatrix import Hypermatrix

__all__ = [
    "BudgetError",
    "SignedPermutation",
    "enumerate_signed_permutations",
    "hdet_naive",
    "hdet_even",
    "DEFAULT_MAX_TERMS",
    "DEFAULT_MAX_SIDE",
]

# Work budgets: refuse factorial blowups instead of attempting them.  The term
# budget counts d-entry products; the side guard caps d! permutation streams.
DEFAULT_MAX_TERMS = 10**8
DEFAULT_MAX_SIDE = 8

# Vectorized evaluation proceeds in fixed-size blocks so the budget cap never
# materializes more than a few MB at once.
_BLOCK = 1 << 16


class BudgetError(RuntimeError):
    """Raised when an evaluation would exceed its declared work budget."""


@dataclass(frozen=True)
class SignedPermutation:
    """A permutation of range(d) together with its parity (+1 or -1)."""

    mapping: tuple[int, ...]
    parity: int


def enumerate_signed_permutations(
    d: int, max_side: int = DEFAULT_MAX_SIDE
) -> Iterator[SignedPermutation]:
    """Stream all d! permutations of range(d) with parities.

    Uses Heap's algorithm: successive permutations differ by one
    transposition, so the parity is maintained incrementally instead of being
    recomputed.  Refuses d > max_side to keep d! enumeration bounded.
    """
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    if d > max_side:
        raise BudgetError(
            f"refusing to enumerate {d}! permutations (side {d} > cap {max_side})"
        )
    perm = list(range(d))
    parity = 1
    yield SignedPermutation(tuple(perm), parity)
    # Iterative Heap's algorithm; c is the loop-counter state per level.
    c = [0] * d
    i = 1
    while i < d:
        if c[i] < i:
            if i % 2 == 0:
                perm[0], perm[i] = perm[i], perm[0]
            else:
                perm[c[i]], perm[i] = perm[i], perm[c[i]]
            parity = -parity
            yield SignedPermutation(tuple(perm), parity)
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1


@lru_cache(maxsize=16)
def _perm_table(d: int) -> tuple[np.ndarray, np.ndarray]:
    """All permutations of range(d) as an int array plus their parities."""
    perms = []
    signs = []
    for sp in enumerate_signed_permutations(d):
        perms.append(sp.mapping)
        signs.append(sp.parity)
    return np.array(perms, dtype=np.int64), np.array(signs, dtype=np.float64)


def _as_cuboid(a) -> np.ndarray:
    arr = a.array if isinstance(a, Hypermatrix) else np.asarray(a, dtype=np.complex128)
    if arr.ndim < 1:
        arr = arr.reshape(1)
    if len(set(arr.shape)) != 1:
        raise ValueError(f"hdet needs a cuboid hypermatrix, got shape {arr.shape}")
    return arr


def _check_budget(d: int, slots: int, max_terms: int) -> int:
    total = factorial(d) ** slots
    if total > max_terms:
        raise BudgetError(
            f"{total} product terms exceed the work budget of {max_terms}"
        )
    return total


def _perm_sum(arr: np.ndarray, fixed_first: bool, max_terms: int) -> complex:
    """Signed permutation sum over all (or all-but-first) index slots.

    Evaluates in blocks; each term's d-entry product is formed vectorized and
    the terms are accumulated with exact compensated summation (math.fsum on
    the real and imaginary parts), block partials last.
    """
    d = arr.shape[0]
    n_axes = arr.ndim
    slots = n_axes - 1 if fixed_first else n_axes
    total = _check_budget(d, slots, max_terms)
    perms, signs = _perm_table(d)
    strides = np.array(
        [d ** (n_axes - 1 - k) for k in range(n_axes)], dtype=np.int64
    )
    flat = arr.reshape(-1)
    # Axis handled by permutation slot t: t+1 when the first axis is pinned
    # to the identity, t otherwise.
    axis0 = 1 if fixed_first else 0

    re_parts: list[float] = []
    im_parts: list[float] = []
    p = factorial(d)
    shape = (p,) * slots
    for start in range(0, total, _BLOCK):
        stop = min(start + _BLOCK, total)
        combo = np.unravel_index(np.arange(start, stop, dtype=np.int64), shape)
        sign = signs[combo[0]]
        for t in range(1, slots):
            sign = sign * signs[combo[t]]
        # Flat index of A[j, s2(j), ..., sN(j)] (or A[s1(j), ...]) per term.
        idx = np.zeros((stop - start, d), dtype=np.int64)
        if fixed_first:
            idx += (np.arange(d, dtype=np.int64) * strides[0])[np.newaxis, :]
        for t in range(slots):
            idx += perms[combo[t]] * strides[t + axis0]
        prod = flat[idx].prod(axis=1)
        terms = sign * prod
        re_parts.append(fsum(terms.real))
        im_parts.append(fsum(terms.imag))
    return complex(fsum(re_parts), fsum(im_parts))


@lru_cache(maxsize=32)
def _even_term_table(d: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Precomputed flat-index table and signs for the reduced even-order sum.

    Row t of the index table holds the d flat offsets whose entry product is
    term t; the sign vector holds the matching parity products.  Only built
    for small tables (the batched path used inside optimizers).
    """
    slots = order - 1
    p = factorial(d)
    total = p**slots
    if total * d > (1 << 22):
        raise BudgetError(f"term table for d={d}, order={order} too large to cache")
    perms, signs = _perm_table(d)
    strides = np.array([d ** (order - 1 - k) for k in range(order)], dtype=np.int64)
    combo = np.unravel_index(np.arange(total, dtype=np.int64), (p,) * slots)
    sign = signs[combo[0]].copy()
    for t in range(1, slots):
        sign *= signs[combo[t]]
    idx = np.tile(np.arange(d, dtype=np.int64) * strides[0], (total, 1))
    for t in range(slots):
        idx += perms[combo[t]] * strides[t + 1]
    idx.flags.writeable = False
    sign.flags.writeable = False
    return idx, sign


def _hdet_even_batch(vectors: np.ndarray, d: int, order: int) -> np.ndarray:
    """Reduced even-order sum for a batch of flattened cuboids.

    ``vectors`` has shape (B, d**order), one row-major cuboid per row.  Uses
    plain numpy summation; the scalar entry points keep the compensated
    accumulation and a test pins agreement between the two paths.
    """
    if order == 2:
        mats = vectors.reshape(-1, d, d)
        return np.linalg.det(mats)
    idx, sign = _even_term_table(d, order)
    return np.einsum("bt,t->b", vectors[:, idx].prod(axis=2), sign)


def hdet_naive(a, max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """Full signed permutation sum over all N index slots, divided by d!.

    Cost (d!)^N products; retained as a cross-check oracle for the reduced
    even-order path.  Defined for any order; for odd N and d >= 2 the sum
    cancels exactly to zero.
    """
    arr = _as_cuboid(a)
    d = arr.shape[0]
    value = _perm_sum(arr, fixed_first=False, max_terms=max_terms)
    return value / factorial(d)


def hdet_even(
    a,
    max_terms: int = DEFAULT_MAX_TERMS,
    shortcut_order2: bool = True,
) -> complex:
    """Even-order hyperdeterminant via the reduced sum (first slot fixed).

    Cost (d!)^(N-1) products.  Order-2 inputs short-circuit to an LU-based
    determinant unless ``shortcut_order2`` is False; equality of the two
    routes is covered by tests.  Raises ValueError for odd order.
    """
    arr = _as_cuboid(a)
    if arr.ndim % 2 != 0:
        raise ValueError(
            f"reduced sum needs even order, got order {arr.ndim}; "
            "the full sum (hdet_naive) is zero there for d >= 2"
        )
    if arr.ndim == 2 and shortcut_order2:
        return complex(np.linalg.det(arr))
    return _perm_sum(arr, fixed_first=True, max_terms=max_terms)
