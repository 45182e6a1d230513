"""Dense complex hypermatrices of arbitrary order and their basic algebra.

A hypermatrix of order N is an N-way array A = [a_{i1...iN}] with complex
entries, stored dense and row-major (last index fastest).  Axis numbering is
1-based in the docs below, matching the usual subscript notation; in code the
underlying numpy array uses 0-based axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Shape",
    "Hypermatrix",
    "frobenius_norm",
    "pi_transpose",
    "outer_product",
    "multilinear_multiply",
]


@dataclass(frozen=True)
class Shape:
    """Axis lengths (n_1, ..., n_N) of a hypermatrix."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if len(dims) < 1:
            raise ValueError("a hypermatrix has at least one axis")
        if any(n < 1 for n in dims):
            raise ValueError(f"axis lengths must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def order(self) -> int:
        """Number of axes N."""
        return len(self.dims)

    @property
    def size(self) -> int:
        """Total number of entries."""
        return int(np.prod(self.dims, dtype=np.int64))

    @property
    def is_cuboid(self) -> bool:
        """True when every axis has the same length."""
        return len(set(self.dims)) == 1

    @property
    def side(self) -> int:
        """Common axis length d of a cuboid shape."""
        if not self.is_cuboid:
            raise ValueError(f"shape {self.dims} is not cuboid")
        return self.dims[0]


class Hypermatrix:
    """Immutable dense complex hypermatrix.

    Entries are held in a read-only complex128 numpy array in C (row-major)
    order, so the flat entry at offset sum_k i_k * prod_{m>k} n_m is the
    element with multi-index (i_1, ..., i_N).
    """

    __slots__ = ("_data",)

    def __init__(self, entries, shape: Shape | Sequence[int] | None = None):
        data = np.array(entries, dtype=np.complex128, order="C", copy=True)
        if shape is not None:
            dims = shape.dims if isinstance(shape, Shape) else tuple(int(n) for n in shape)
            data = data.reshape(dims)
        if data.ndim < 1:
            data = data.reshape(1)
        data.flags.writeable = False
        object.__setattr__(self, "_data", data)

    @property
    def array(self) -> np.ndarray:
        """Read-only ndarray view of the entries."""
        return self._data

    @property
    def shape(self) -> Shape:
        return Shape(self._data.shape)

    @property
    def dims(self) -> tuple[int, ...]:
        return self._data.shape

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def entries(self) -> np.ndarray:
        """Flat row-major view of the entries."""
        return self._data.reshape(-1)

    def is_cuboid(self) -> bool:
        return len(set(self._data.shape)) == 1

    @property
    def side(self) -> int:
        return self.shape.side

    def __getitem__(self, index):
        return self._data[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypermatrix):
            return NotImplemented
        return self.dims == other.dims and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self.dims, self._data.tobytes()))

    def __repr__(self):
        return f"Hypermatrix(dims={self.dims})"


def _as_array(a) -> np.ndarray:
    if isinstance(a, Hypermatrix):
        return a.array
    return np.asarray(a, dtype=np.complex128)


def frobenius_norm(a) -> float:
    """Square root of the sum of squared entry moduli."""
    return float(np.linalg.norm(_as_array(a).reshape(-1)))


def pi_transpose(a, pi: Sequence[int]) -> Hypermatrix:
    """Generalized transpose by a permutation of the axes.

    ``pi`` is a permutation of (0, ..., N-1); the result B satisfies
    B[i_{pi(0)}, ..., i_{pi(N-1)}] = A[i_0, ..., i_{N-1}], so axis k of B is
    axis pi(k) of A.  With N = 2 and pi = (1, 0) this is the ordinary matrix
    transpose.
    """
    arr = _as_array(a)
    pi = tuple(int(p) for p in pi)
    if sorted(pi) != list(range(arr.ndim)):
        raise ValueError(f"pi={pi} is not a permutation of the {arr.ndim} axes")
    return Hypermatrix(np.transpose(arr, axes=pi))


def outer_product(a, b) -> Hypermatrix:
    """Outer (tensor) product; orders add, entries multiply pairwise."""
    return Hypermatrix(np.tensordot(_as_array(a), _as_array(b), axes=0))


def multilinear_multiply(mats: Sequence[np.ndarray], a) -> Hypermatrix:
    """Multilinear matrix multiplication (X_1, ..., X_N) * A.

    Contracts axis k of A with the second index of X_k:

        A'_{i1...iN} = sum_{j1...jN} (X_1)_{i1 j1} ... (X_N)_{iN jN} A_{j1...jN}

    Parameters
    ----------
    mats : sequence of N matrices, X_k of shape (m_k, n_k) where n_k is the
        length of axis k of A.
    a : hypermatrix (or array) of order N.

    Returns
    -------
    Hypermatrix of shape (m_1, ..., m_N).
    """
    arr = _as_array(a)
    if len(mats) != arr.ndim:
        raise ValueError(
            f"need one matrix per axis: got {len(mats)} matrices for order {arr.ndim}"
        )
    out = arr
    for k, mat in enumerate(mats):
        x = np.asarray(mat, dtype=np.complex128)
        if x.ndim != 2 or x.shape[1] != arr.shape[k]:
            raise ValueError(
                f"matrix {k} has shape {x.shape}, expected (*, {arr.shape[k]})"
            )
        # tensordot puts the contracted result axis first; move it back to k.
        out = np.moveaxis(np.tensordot(x, out, axes=(1, k)), 0, k)
    return Hypermatrix(out)
