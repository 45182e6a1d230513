"""Cayley's first hyperdeterminant on dense complex hypermatrices.

The package evaluates the signed-permutation hyperdeterminant of even-order
cuboid hypermatrices, applies it to 2n-qudit pure states as an entanglement
measure (with concurrence and n-tangle identities in the qubit case), runs
seeded local-measurement averaging experiments, and upper-bounds the
convex-roof extension to mixed states.  File formats and the command line
live in :mod:`hyperdet.statefile` and :mod:`hyperdet.cli`; report figures
in :mod:`hyperdet.report` (imported lazily, it pulls in matplotlib).
"""

from .cayley import (
    DEFAULT_MAX_TERMS,
    BudgetError,
    SignedPermutation,
    enumerate_signed_permutations,
    hdet_even,
    hdet_naive,
)
from .convexroof import (
    Decomposition,
    DensityMatrix,
    RoofResult,
    convex_roof_estimate,
    eigen_ensemble,
    mix_density,
    separable_mixture,
    steer_ensemble,
)
from .hypermatrix import (
    Hypermatrix,
    Shape,
    frobenius_norm,
    multilinear_multiply,
    outer_product,
    pi_transpose,
)
from .locc import (
    PovmOutcome,
    TrialReport,
    TwoOutcomePovm,
    apply_povm,
    expected_measure,
    lemma1_critical_value,
    lemma1_f,
    lemma1_optimizer_weights,
    monotonicity_trial,
    random_povm,
)
from .qstate import (
    OddOrderWarning,
    PureState,
    apply_local_unitaries,
    concurrence_qubits,
    from_hypermatrix,
    hdet_quadratic_form,
    marginal_weights,
    measure_hdet,
    measure_tangle,
    ntangle_qubits,
    permute_subsystems,
    product_state,
    random_haar_state,
    random_unitary,
    to_hypermatrix,
)
from .statefile import StateFileError, load_state, save_state
from .verify import CheckResult, SuiteReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CheckResult",
    "DEFAULT_MAX_TERMS",
    "Decomposition",
    "DensityMatrix",
    "Hypermatrix",
    "OddOrderWarning",
    "PovmOutcome",
    "PureState",
    "RoofResult",
    "Shape",
    "SignedPermutation",
    "StateFileError",
    "SuiteReport",
    "TrialReport",
    "TwoOutcomePovm",
    "apply_local_unitaries",
    "apply_povm",
    "concurrence_qubits",
    "convex_roof_estimate",
    "eigen_ensemble",
    "enumerate_signed_permutations",
    "expected_measure",
    "frobenius_norm",
    "from_hypermatrix",
    "hdet_even",
    "hdet_naive",
    "hdet_quadratic_form",
    "lemma1_critical_value",
    "lemma1_f",
    "lemma1_optimizer_weights",
    "load_state",
    "marginal_weights",
    "measure_hdet",
    "measure_tangle",
    "mix_density",
    "monotonicity_trial",
    "multilinear_multiply",
    "ntangle_qubits",
    "outer_product",
    "permute_subsystems",
    "pi_transpose",
    "product_state",
    "random_haar_state",
    "random_povm",
    "random_unitary",
    "run_suite",
    "save_state",
    "separable_mixture",
    "steer_ensemble",
    "to_hypermatrix",
]
