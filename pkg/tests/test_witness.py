import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mubquant import qcore, witness
from mubquant.errors import DimensionMismatchError, InconsistentInputError, MubQuantError

WORKED_CORR1 = np.array([[1015, 23, 9], [17, 947, 8], [9, 28, 1008]])
WORKED_CORR2 = np.array([[1053, 21, 7], [29, 1017, 25], [5, 15, 1023]])


def brute_cross_sums(p):
    """Enumerate the index sets literally."""
    d = p.shape[0]
    m1 = sum(
        math.sqrt(p[m, n] * p[l, o])
        for m, n, l, o in itertools.product(range(d), repeat=4)
        if m != n and m != l and l != o and n != o
    )
    m2 = sum(math.sqrt(p[i, j] * p[j, i]) for i in range(d) for j in range(d) if i != j)
    return m1, m2


def brute_witness(rho, pair):
    """Independent evaluation with explicit kets, one matrix element at a time."""
    d = pair.dim
    rho = np.asarray(rho)
    b1, b2 = pair.basis1, pair.basis2

    def expval(a, b):
        ab = np.kron(a, b)
        return max(0.0, np.vdot(ab, rho @ ab).real)

    pop = np.array([[expval(b1[:, m], b1[:, n].conj()) for n in range(d)] for m in range(d)])
    sigma = sum(expval(b2[:, k], b2[:, k].conj()) for k in range(d))
    m1, m2 = brute_cross_sums(pop)
    return math.sqrt(2 / (d * (d - 1))) * (d * sigma - 1 - m1 - m2)


class TestCrossSums:
    @pytest.mark.parametrize("d", range(2, 8))
    def test_tuple_count(self, d):
        ones = np.ones((d, d))
        m1, m2 = witness.cross_sums(ones)
        assert m1 == d * (d - 1) * (d * d - 3 * d + 3)
        assert m2 == d * (d - 1)

    def test_tuple_count_d3_is_18(self):
        count = sum(
            1
            for m, n, l, o in itertools.product(range(3), repeat=4)
            if m != n and m != l and l != o and n != o
        )
        assert count == 18

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 2**32 - 1))
    def test_matches_enumeration(self, d, seed):
        rng = np.random.default_rng(seed)
        p = rng.random((d, d))
        p /= p.sum()
        fast = witness.cross_sums(p)
        slow = brute_cross_sums(p)
        assert fast[0] == pytest.approx(slow[0], abs=1e-13)
        assert fast[1] == pytest.approx(slow[1], abs=1e-13)

    def test_clamps_tiny_negatives(self):
        p = np.full((2, 2), 0.25)
        p[0, 1] = -1e-14
        assert witness.cross_sums(p)[1] == 0.0

    def test_rejects_real_negatives(self):
        p = np.full((2, 2), 0.25)
        p[0, 1] = -1e-6
        with pytest.raises(InconsistentInputError):
            witness.cross_sums(p)


class TestCorrelationSum:
    def test_phi_plus_two_mubs(self):
        rho = qcore.projector(qcore.phi_plus(4))
        pair = qcore.random_mub_pair(4, seed=3)
        assert witness.correlation_sum(rho, [pair.basis1, pair.basis2]) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_product_zero_zero(self, d):
        # Each Fourier diagonal term contributes |<v_k|0>|^2 |<v_k^*|0>|^2 = 1/d^2.
        rho = qcore.projector(qcore.tensor(qcore.basis_ket(0, d), qcore.basis_ket(0, d)))
        pair = qcore.fourier_mub(d)
        expected = 1.0 + d * (1 / d**2)
        assert witness.correlation_sum(rho, [pair.basis1, pair.basis2]) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_maximally_mixed(self, d):
        pair = qcore.random_mub_pair(d, seed=d)
        value = witness.correlation_sum(np.eye(d * d) / d**2, [pair.basis1, pair.basis2])
        assert value == pytest.approx(2 / d, abs=1e-12)

    def test_three_bases_for_qubits(self):
        # Pauli eigenbases form three MUBs; |phi+> reaches m = 3.
        z = np.eye(2)
        x = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        y = np.array([[1, 1], [1j, -1j]]) / math.sqrt(2)
        rho = qcore.projector(qcore.phi_plus(2))
        assert witness.correlation_sum(rho, [z, x, y]) == pytest.approx(3.0, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            witness.correlation_sum(np.eye(4) / 4, [np.eye(3)])


class TestWitnessFromState:
    def test_phi_plus_d3(self):
        rho = qcore.projector(qcore.phi_plus(3))
        for seed in range(5):
            pair = qcore.random_mub_pair(3, seed=seed)
            b = witness.witness_b_from_state(rho, pair)
            assert b == pytest.approx(math.sqrt(2 * (1 - 1 / 3)), abs=1e-12)

    def test_maximally_mixed_d3(self):
        expected = (1 / math.sqrt(3)) * (3 * (1 / 3) - 1 - 18 / 9 - 6 / 9)
        b = witness.witness_b_from_state(np.eye(9) / 9, qcore.fourier_mub(3))
        assert b == pytest.approx(expected, abs=1e-12)
        assert b == pytest.approx(-1.5396, abs=1e-4)

    def test_product_d2(self):
        rho = qcore.projector(qcore.tensor(qcore.basis_ket(0, 2), qcore.basis_ket(0, 2)))
        assert witness.witness_b_from_state(rho, qcore.fourier_mub(2)) == pytest.approx(0.0, abs=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 4), st.integers(0, 2**32 - 1))
    def test_matches_brute_force(self, d, seed):
        rng = np.random.default_rng(seed)
        rho = qcore.random_density(d * d, rng, rank=int(rng.integers(1, d * d + 1)))
        pair = qcore.random_mub_pair(d, rng)
        assert witness.witness_b_from_state(rho, pair) == pytest.approx(brute_witness(rho, pair), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            witness.witness_b_from_state(np.eye(9) / 9, qcore.fourier_mub(2))


class TestWitnessFromCounts:
    def test_worked_example(self):
        rep = witness.witness_b_from_counts(WORKED_CORR1, WORKED_CORR2)
        assert rep.c1 == pytest.approx(2970 / 3064, abs=1e-15)
        assert rep.c1 == pytest.approx(0.9693, abs=5e-5)
        assert rep.c2 == pytest.approx(0.9681, abs=5e-5)
        assert rep.m1 == pytest.approx(0.0852, abs=5e-4)
        assert rep.m2 == pytest.approx(0.02856, abs=5e-5)
        assert rep.b == pytest.approx(1.0338, abs=1e-3)
        assert rep.eof_lower_bound_ebits == pytest.approx(1.103, abs=5e-3)
        assert rep.schmidt_lower_bound == 3
        assert rep.detected
        assert rep.total1 == 3064 and rep.total2 == 3195

    def test_perfect_qubit(self):
        rep = witness.witness_b_from_counts(np.eye(2, dtype=int) * 1000, np.eye(2, dtype=int) * 1000)
        assert (rep.c1, rep.c2, rep.m1, rep.m2) == (1.0, 1.0, 0.0, 0.0)
        assert rep.b == pytest.approx(1.0, abs=1e-15)

    def test_uniform_qutrit(self):
        ones = np.ones((3, 3), dtype=int)
        rep = witness.witness_b_from_counts(ones, ones)
        assert rep.b == pytest.approx(-8 / (3 * math.sqrt(3)), abs=1e-12)
        assert not rep.detected
        assert rep.eof_lower_bound_ebits == 0.0
        assert rep.schmidt_lower_bound == 1

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            witness.witness_b_from_counts(np.eye(2), np.eye(3))

    def test_zero_total(self):
        with pytest.raises(MubQuantError):
            witness.witness_b_from_counts(np.zeros((2, 2)), np.eye(2))

    def test_negative_counts(self):
        with pytest.raises(MubQuantError):
            witness.CoincidenceMatrix(np.array([[1, -1], [0, 1]]))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 5), st.integers(0, 2**32 - 1))
    def test_expected_counts_reproduce_state_value(self, d, seed):
        rng = np.random.default_rng(seed)
        rho = qcore.random_density(d * d, rng, rank=int(rng.integers(1, 4)))
        pair = qcore.random_mub_pair(d, rng)
        p1, p2 = witness.expected_populations(rho, pair)
        rep = witness.witness_b_from_counts(
            witness.CoincidenceMatrix(p1 * 1e6), witness.CoincidenceMatrix(p2 * 1e6)
        )
        assert rep.b == pytest.approx(witness.witness_b_from_state(rho, pair), abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 5), st.integers(0, 2**32 - 1))
    def test_relabeling_invariance(self, d, seed):
        rng = np.random.default_rng(seed)
        c1 = rng.integers(0, 50, (d, d)) + np.diag(rng.integers(500, 1000, d))
        c2 = rng.integers(0, 50, (d, d)) + np.diag(rng.integers(500, 1000, d))
        perm = rng.permutation(d)
        base = witness.witness_b_from_counts(c1, c2).b
        permuted = witness.witness_b_from_counts(c1[np.ix_(perm, perm)], c2[np.ix_(perm, perm)]).b
        assert permuted == pytest.approx(base, abs=1e-12)

    def test_report_invariants(self):
        rep = witness.witness_b_from_counts(WORKED_CORR1, WORKED_CORR2)
        assert 0 <= rep.c1 <= 1 and 0 <= rep.c2 <= 1
        assert rep.m1 >= 0 and rep.m2 >= 0
        assert rep.detected == (rep.b > 0)


class TestEofAndSchmidt:
    def test_worked_example_value(self):
        assert witness.eof_lower_bound(1.0338) == pytest.approx(1.103, abs=5e-4)

    @pytest.mark.parametrize("d", range(2, 17))
    def test_maximal_value(self, d):
        b = witness.max_witness_value(d)
        assert witness.eof_lower_bound(b, d) == pytest.approx(math.log2(d), abs=1e-12)

    def test_nonpositive(self):
        assert witness.eof_lower_bound(0.0) == 0.0
        assert witness.eof_lower_bound(-0.7) == 0.0

    def test_inconsistent(self):
        with pytest.raises(InconsistentInputError):
            witness.eof_lower_bound(1.5)
        with pytest.raises(InconsistentInputError):
            witness.eof_lower_bound(1.2, d=2)

    @pytest.mark.parametrize("eof, expected", [(1.103, 3), (0.0, 1), (2.0, 4), (1.0, 2), (0.2, 2)])
    def test_schmidt(self, eof, expected):
        assert witness.schmidt_lower_bound(eof) == expected

    @pytest.mark.parametrize("d", range(2, 17))
    def test_schmidt_of_maximal_state_is_d(self, d):
        eof = witness.eof_lower_bound(witness.max_witness_value(d), d)
        assert witness.schmidt_lower_bound(eof) == d


class TestSoundness:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_product_states_not_detected(self, d):
        rng = np.random.default_rng(100 + d)
        for _ in range(300):
            psi = qcore.tensor(qcore.random_pure_state(d, rng), qcore.random_pure_state(d, rng))
            rho = np.outer(psi, psi.conj())
            pair = qcore.random_mub_pair(d, rng)
            assert witness.witness_b_from_state(rho, pair) <= 1e-9
            c2 = witness.correlation_sum(rho, [pair.basis1, pair.basis2])
            assert c2 <= 1 + 1 / d + 1e-9

    @pytest.mark.parametrize("d", [2, 3, 4, 5])
    def test_pure_state_bound_below_entropy(self, d):
        rng = np.random.default_rng(200 + d)
        for _ in range(200):
            psi = qcore.random_pure_state(d * d, rng)
            pair = qcore.random_mub_pair(d, rng)
            b = witness.witness_b_from_state(np.outer(psi, psi.conj()), pair)
            entropy = qcore.von_neumann_entropy(qcore.partial_trace(psi, [d, d], 0))
            assert witness.eof_lower_bound(b) <= entropy + 1e-9
