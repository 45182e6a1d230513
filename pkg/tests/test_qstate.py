import math

import numpy as np
import pytest

from hyperdet import (
    Hypermatrix,
    OddOrderWarning,
    PureState,
    apply_local_unitaries,
    concurrence_qubits,
    from_hypermatrix,
    hdet_even,
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


def ghz(n):
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return PureState(n, 2, amps)


def unit(seed, d):
    v = np.random.default_rng(seed).standard_normal(d) + 1j * np.random.default_rng(seed + 1).standard_normal(d)
    return v / np.linalg.norm(v)


class TestPureState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="normalized"):
            PureState(1, 2, [1.0, 1.0])

    def test_accepts_tiny_norm_slack(self):
        amps = np.array([1.0 + 5e-10, 0.0])
        st = PureState(1, 2, amps)
        assert st.amplitudes[0] == amps[0]

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="length"):
            PureState(2, 2, [1.0, 0.0])

    def test_rejects_bad_header(self):
        with pytest.raises(ValueError):
            PureState(0, 2, [1.0])
        with pytest.raises(ValueError):
            PureState(1, 1, [1.0])

    def test_immutable(self):
        st = PureState(1, 2, [1.0, 0.0])
        with pytest.raises(AttributeError):
            st.n = 3
        with pytest.raises(ValueError):
            st.amplitudes[0] = 0.0

    def test_dim(self):
        assert PureState(3, 2, np.eye(8)[0]).dim == 8


class TestHypermatrixRoundTrip:
    def test_round_trip(self):
        psi = random_haar_state(3, 2, 0)
        back = from_hypermatrix(to_hypermatrix(psi))
        assert np.array_equal(back.amplitudes, psi.amplitudes)
        assert (back.n, back.d) == (3, 2)

    def test_reshape_is_row_major(self):
        psi = PureState(2, 2, [0, 0, 0, 1])
        assert to_hypermatrix(psi)[1, 1] == 1.0

    def test_rejects_ragged(self):
        with pytest.raises(ValueError, match="cuboid"):
            from_hypermatrix(Hypermatrix(np.zeros((2, 3))))


class TestProductState:
    def test_kron_convention(self):
        # first factor indexes the slowest axis
        psi = product_state([[0, 1], [1, 0]])
        assert psi.amplitudes[2] == 1.0

    def test_rejects_mixed_dimensions(self):
        with pytest.raises(ValueError, match="dimension"):
            product_state([[1, 0], [1, 0, 0]])

    def test_rejects_unnormalized_factor(self):
        with pytest.raises(ValueError, match="unit"):
            product_state([[1, 1], [1, 0]])

    def test_hdet_vanishes(self):
        psi = product_state([unit(s, 2) for s in (1, 3, 5, 7)])
        assert measure_hdet(psi) < 1e-13


class TestRandomSampling:
    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_unitary_is_unitary(self, d):
        u = random_unitary(d, 4)
        assert np.max(np.abs(u.conj().T @ u - np.eye(d))) < 1e-12

    def test_unitary_seeded(self):
        assert np.array_equal(random_unitary(3, 9), random_unitary(3, 9))

    def test_state_normalized_and_seeded(self):
        a = random_haar_state(2, 3, 11)
        b = random_haar_state(2, 3, 11)
        assert abs(np.linalg.norm(a.amplitudes) - 1.0) < 1e-12
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_generator_advances(self):
        rng = np.random.default_rng(12)
        a = random_haar_state(1, 2, rng)
        b = random_haar_state(1, 2, rng)
        assert not np.array_equal(a.amplitudes, b.amplitudes)


class TestLocalAction:
    def test_unitaries_preserve_norm_and_measure(self):
        psi = random_haar_state(4, 2, 13)
        mats = [random_unitary(2, 20 + k) for k in range(4)]
        phi = apply_local_unitaries(psi, mats)
        assert abs(np.linalg.norm(phi.amplitudes) - 1.0) < 1e-12
        assert measure_hdet(phi) == pytest.approx(measure_hdet(psi), abs=1e-12)

    def test_inverse_undoes(self):
        psi = random_haar_state(2, 3, 14)
        mats = [random_unitary(3, 30 + k) for k in range(2)]
        back = apply_local_unitaries(apply_local_unitaries(psi, mats), [m.conj().T for m in mats])
        assert np.allclose(back.amplitudes, psi.amplitudes, atol=1e-12)

    def test_rejects_wrong_count(self):
        with pytest.raises(ValueError, match="matrices"):
            apply_local_unitaries(random_haar_state(2, 2, 1), [np.eye(2)])

    def test_permute_moves_factors(self):
        e0, e1 = np.eye(2)
        psi = product_state([e0, e1, e1])
        # new subsystem k holds old subsystem perm[k]
        out = permute_subsystems(psi, (2, 0, 1))
        ref = product_state([e1, e0, e1])
        assert np.array_equal(out.amplitudes, ref.amplitudes)

    def test_permute_rejects_invalid(self):
        with pytest.raises(ValueError, match="permutation"):
            permute_subsystems(random_haar_state(2, 2, 2), (0, 0))


class TestMarginalWeights:
    def test_sums_to_one_and_matches_einsum(self):
        psi = random_haar_state(3, 3, 15)
        w = marginal_weights(psi)
        arr = psi.amplitudes.reshape(3, -1)
        ref = np.einsum("kj,kj->k", arr, arr.conj()).real
        assert w.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(w, ref, atol=1e-12)

    def test_product_state_marginal(self):
        f = unit(40, 3)
        psi = product_state([f, unit(41, 3)])
        assert np.allclose(marginal_weights(psi), np.abs(f) ** 2, atol=1e-12)


class TestMeasures:
    def test_odd_count_warns_and_returns_zero(self):
        psi = random_haar_state(3, 2, 16)
        with pytest.warns(OddOrderWarning):
            assert measure_hdet(psi) == 0.0

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_ghz_anchor(self, n):
        assert measure_hdet(ghz(n)) == pytest.approx(0.5, abs=1e-14)

    def test_tangle_is_square(self):
        psi = random_haar_state(4, 2, 17)
        assert measure_tangle(psi) == pytest.approx(measure_hdet(psi) ** 2, rel=1e-12)

    def test_qutrit_pair_value(self):
        psi = random_haar_state(2, 3, 18)
        det = np.linalg.det(psi.amplitudes.reshape(3, 3))
        assert measure_hdet(psi) == pytest.approx(abs(det), rel=1e-12)


class TestQubitIdentities:
    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_concurrence_is_twice_hdet(self, n):
        psi = random_haar_state(n, 2, 50 + n)
        assert concurrence_qubits(psi) == pytest.approx(2 * measure_hdet(psi), abs=1e-12)

    def test_bell_concurrence(self):
        assert concurrence_qubits(ghz(2)) == pytest.approx(1.0, abs=1e-12)

    def test_ntangle_is_squared_concurrence(self):
        psi = random_haar_state(4, 2, 19)
        assert ntangle_qubits(psi) == pytest.approx(concurrence_qubits(psi) ** 2, rel=1e-12)

    def test_concurrence_rejects_qutrits(self):
        with pytest.raises(ValueError, match="qubits"):
            concurrence_qubits(random_haar_state(2, 3, 20))

    def test_concurrence_rejects_odd_count(self):
        with pytest.raises(ValueError, match="even"):
            concurrence_qubits(random_haar_state(3, 2, 21))


class TestQuadraticForm:
    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_matrix_closed_form(self, n):
        sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
        ref = np.array([[1.0]])
        for _ in range(n):
            ref = np.kron(ref, sy)
        ref = ((-1.0) ** (n // 2) / 2.0) * ref.real
        assert np.max(np.abs(hdet_quadratic_form(n) - ref)) < 1e-15

    @pytest.mark.parametrize("n", [2, 4])
    def test_quadratic_value_is_hdet(self, n):
        psi = random_haar_state(n, 2, 60 + n)
        m = hdet_quadratic_form(n)
        val = psi.amplitudes @ m @ psi.amplitudes
        ref = hdet_even(psi.amplitudes.reshape((2,) * n))
        assert val == pytest.approx(ref, abs=1e-13)

    def test_rejects_odd_and_oversized(self):
        with pytest.raises(ValueError, match="even"):
            hdet_quadratic_form(3)
        with pytest.raises(ValueError, match="range"):
            hdet_quadratic_form(10)
