"""Slow, independent reference implementations used only by the tests.

Nothing here shares code with the package: parities come from cycle
counting, the signed sum is a plain python loop over permutation tuples,
and the mixed-state concurrence uses the closed-form eigenvalue recipe.
"""

import itertools
import math

import numpy as np

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


def perm_parity(perm) -> int:
    """Permutation parity by cycle counting (+1 even, -1 odd)."""
    perm = tuple(perm)
    seen = [False] * len(perm)
    parity = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


def hdet_brute(arr) -> complex:
    """Signed sum over every index slot, with the 1/d! prefactor.

    Any order; exponential cost, so callers keep d and the order tiny.
    """
    arr = np.asarray(arr, dtype=complex)
    d = arr.shape[0]
    perms = list(itertools.permutations(range(d)))
    total = 0.0 + 0.0j
    for combo in itertools.product(perms, repeat=arr.ndim):
        sign = 1
        for p in combo:
            sign *= perm_parity(p)
        term = 1.0 + 0.0j
        for j in range(d):
            term *= arr[tuple(p[j] for p in combo)]
        total += sign * term
    return total / math.factorial(d)


def wootters_concurrence(rho) -> float:
    """Two-qubit mixed-state concurrence max(0, l1 - l2 - l3 - l4)."""
    yy = np.kron(PAULI_Y, PAULI_Y)
    r = rho @ yy @ rho.conj() @ yy
    lam = np.sqrt(np.abs(np.sort(np.linalg.eigvals(r).real)[::-1]))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def averaging_bound_logdomain(alphas, weights, eta) -> float:
    """The two-term averaging bound recomputed in log space with math only.

    Valid for strictly interior alphas (each factor in (0, 1)).
    """
    alphas = [float(a) for a in alphas]
    weights = [float(p) for p in weights]
    d = len(alphas)
    expo = d / eta - 1.0
    x1 = sum(a * p for a, p in zip(alphas, weights))
    x2 = sum((1.0 - a) * p for a, p in zip(alphas, weights))
    t1 = math.exp(sum(math.log(a) for a in alphas) / eta - expo * math.log(x1))
    t2 = math.exp(sum(math.log(1.0 - a) for a in alphas) / eta - expo * math.log(x2))
    return t1 + t2
