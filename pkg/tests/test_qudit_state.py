import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import clock_shift, embed, ghz, kron_all, ket
from qudsim.operators import LocalOperator, dense_coding_unitary, identity
from qudsim.qudit_state import (
    StateVector,
    apply_local,
    basis_state,
    ghz_state,
    index_string,
    inner_product,
    tensor,
)

R2 = 1 / math.sqrt(2)


def random_state(d, m, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d**m) + 1j * rng.normal(size=d**m)
    return StateVector(d, m, v / np.linalg.norm(v))


def random_unitary(d, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return LocalOperator(d, q * (np.diag(r) / np.abs(np.diag(r))))


class TestBasisState:
    def test_zero(self):
        s = basis_state(2, 2, [0, 0])
        assert s.amps[0] == 1 and np.count_nonzero(s.amps) == 1

    def test_single(self):
        assert basis_state(3, 1, [2]).amps[2] == 1

    def test_big_endian(self):
        s = basis_state(4, 3, [1, 0, 3])
        assert np.flatnonzero(s.amps).tolist() == [19]
        np.testing.assert_array_equal(s.amps, kron_all([ket(4, 1), ket(4, 0), ket(4, 3)]))

    def test_bad_index(self):
        with pytest.raises(ValueError):
            basis_state(3, 2, [0, 3])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            basis_state(3, 2, [0])

    @pytest.mark.parametrize("d, m", [(2, 1), (2, 4), (3, 3), (4, 4), (16, 2)])
    def test_orthonormal_family(self, d, m):
        states = [basis_state(d, m, list(idx)).amps for idx in itertools.product(range(d), repeat=m)]
        np.testing.assert_array_equal(np.array(states), np.eye(d**m))


class TestGhz:
    def test_bell(self):
        np.testing.assert_allclose(ghz_state(2, 2).amps, [R2, 0, 0, R2], atol=1e-15)

    def test_d4_three_particles(self):
        s = ghz_state(4, 3)
        assert np.flatnonzero(s.amps).tolist() == [0, 21, 42, 63]
        np.testing.assert_allclose(s.amps[[0, 21, 42, 63]], 0.5)

    def test_single_particle(self):
        np.testing.assert_allclose(ghz_state(3, 1).amps, np.full(3, 1 / math.sqrt(3)))

    @pytest.mark.parametrize("d, m", [(2, 3), (3, 2), (5, 3), (6, 1)])
    def test_against_oracle(self, d, m):
        np.testing.assert_allclose(ghz_state(d, m).amps, ghz(d, m), atol=1e-15)
        assert abs(ghz_state(d, m).norm_sq() - 1) < 1e-12

    def test_zero_particles(self):
        with pytest.raises(ValueError):
            ghz_state(2, 0)


class TestTensor:
    def test_basis(self):
        s = tensor(basis_state(2, 1, [0]), basis_state(2, 1, [1]))
        assert s.particles == 2
        assert s.allclose(basis_state(2, 2, [0, 1]))

    def test_bell_times_zero(self):
        s = tensor(ghz_state(2, 2), basis_state(2, 1, [0]))
        expected = np.zeros(8)
        expected[[0, 6]] = R2
        np.testing.assert_allclose(s.amps, expected, atol=1e-15)

    def test_trailing_zeros_embedding(self):
        a = random_state(3, 2, 1)
        s = tensor(a, basis_state(3, 2, [0, 0]))
        np.testing.assert_array_equal(s.amps[::9], a.amps)
        assert np.count_nonzero(s.amps) == np.count_nonzero(a.amps)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            tensor(ghz_state(2, 1), ghz_state(3, 1))

    @given(st.integers(0, 10_000))
    @settings(max_examples=30)
    def test_bilinearity(self, seed):
        a, b, c, e = (random_state(3, m, seed + k) for k, m in enumerate([1, 2, 1, 2]))
        lhs = inner_product(tensor(a, b), tensor(c, e))
        assert abs(lhs - inner_product(a, c) * inner_product(b, e)) < 1e-10


class TestInnerProduct:
    def test_self(self):
        for s in [ghz_state(4, 3), basis_state(3, 2, [1, 2]), random_state(2, 3, 7)]:
            assert abs(inner_product(s, s) - 1) < 1e-9

    def test_orthogonal(self):
        assert inner_product(basis_state(2, 2, [0, 0]), basis_state(2, 2, [1, 1])) == 0

    def test_coefficient(self):
        assert abs(inner_product(ghz_state(2, 2), basis_state(2, 2, [0, 0])) - R2) < 1e-15

    def test_conjugate_linear_in_first(self):
        a = StateVector(2, 1, [1j, 0])
        b = StateVector(2, 1, [1, 0])
        assert inner_product(a, b) == -1j

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            inner_product(ghz_state(2, 2), ghz_state(2, 3))


class TestApplyLocal:
    def test_identity_noop(self):
        s = random_state(3, 3, 11)
        for slot in range(3):
            assert apply_local(s, slot, identity(3)).allclose(s, atol=0)

    def test_bit_flip(self):
        out = apply_local(basis_state(2, 2, [0, 0]), 1, dense_coding_unitary(2, 0, 1))
        assert out.allclose(basis_state(2, 2, [0, 1]))

    def test_phase_on_receiver(self):
        out = apply_local(ghz_state(2, 2), 0, dense_coding_unitary(2, 1, 0))
        np.testing.assert_allclose(out.amps, [R2, 0, 0, -R2], atol=1e-15)

    @pytest.mark.parametrize("d, m, slot", [(2, 3, 0), (2, 3, 2), (3, 3, 1), (4, 2, 1), (5, 2, 0)])
    def test_against_full_matrix(self, d, m, slot):
        s = random_state(d, m, d * 10 + slot)
        op = clock_shift(d, 1 % d, 2 % d)
        expected = embed(op, slot, m, d) @ s.amps
        np.testing.assert_allclose(apply_local(s, slot, LocalOperator(d, op)).amps, expected, atol=1e-12)

    @given(st.integers(2, 5), st.integers(1, 3), st.integers(0, 10_000), st.data())
    @settings(max_examples=40)
    def test_norm_preserved(self, d, m, seed, data):
        slot = data.draw(st.integers(0, m - 1))
        s = random_state(d, m, seed)
        out = apply_local(s, slot, random_unitary(d, seed + 1))
        assert abs(out.norm_sq() - s.norm_sq()) < 1e-12

    @given(st.integers(0, 10_000))
    @settings(max_examples=30)
    def test_commutes_on_distinct_particles(self, seed):
        s = random_state(3, 3, seed)
        u, v = random_unitary(3, seed + 1), random_unitary(3, seed + 2)
        ab = apply_local(apply_local(s, 0, u), 2, v)
        ba = apply_local(apply_local(s, 2, v), 0, u)
        assert ab.allclose(ba, atol=1e-12)

    def test_bad_slot(self):
        with pytest.raises(IndexError):
            apply_local(ghz_state(2, 2), 2, identity(2))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_local(ghz_state(2, 2), 0, identity(3))


class TestStateVector:
    def test_immutable(self):
        s = ghz_state(2, 2)
        with pytest.raises(ValueError):
            s.amps[0] = 0

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError):
            StateVector(2, 2, [1, 0, 0])

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            StateVector(2, 1, [np.nan, 0])

    def test_triples(self):
        triples = ghz_state(3, 2).to_triples(skip_zero=True)
        assert [t[0] for t in triples] == ["00", "11", "22"]
        assert len(ghz_state(3, 2).to_triples()) == 9

    def test_index_string(self):
        assert index_string(19, 4, 3) == "103"
        assert index_string(0, 2, 4) == "0000"
