"""Cycle membership, the counterexample family, quartic fiber solving."""

import numpy as np
import pytest

from psdcone.core import SymmetricMatrix
from psdcone.cycle import (CycleFiber, CycleMatrix, closure_mobius_coefficients,
                           counterexample_det, counterexample_sigma,
                           cycle_determinant, cycle_fiber, cycle_membership,
                           expand_edge_signs, matching_sum,
                           quartic_coefficients)
from psdcone.errors import Degenerate, NotMember, NotPsd, PatternViolation
from psdcone.instances import (random_cycle_member, random_cycle_pattern_matrix,
                               random_psd_cycle_matrix)
from psdcone.linalg import is_psd, sign_flip, tridiagonal_det
from psdcone.param import phi


def identity_cycle(m):
    return CycleMatrix.from_arrays(np.ones(m), np.zeros(m))


def correlation_cycle(r12, r23, r13):
    return CycleMatrix.from_arrays([1.0, 1.0, 1.0], [r12, r23, r13])


class TestCycleMatrix:
    def test_entry_accessor(self):
        sig = CycleMatrix.from_arrays([1.0, 2.0, 3.0, 4.0], [0.1, 0.2, 0.3, 0.4])
        assert sig.entry(0, 1) == 0.1
        assert sig.entry(3, 0) == 0.4
        assert sig.entry(0, 2) == 0.0

    def test_round_trip_dense(self):
        sig = CycleMatrix.from_arrays([1.0, 2.0, 3.0, 4.0], [0.1, 0.2, 0.3, 0.4])
        again = CycleMatrix.from_symmetric(sig.to_symmetric())
        assert again == sig

    def test_pattern_violation(self):
        arr = np.eye(4)
        arr[0, 2] = arr[2, 0] = 0.5
        with pytest.raises(PatternViolation):
            CycleMatrix.from_symmetric(SymmetricMatrix(arr))

    def test_m3_has_no_excluded_entries(self):
        arr = np.array([[1.0, 0.2, 0.3], [0.2, 1.0, 0.4], [0.3, 0.4, 1.0]])
        sig = CycleMatrix.from_symmetric(SymmetricMatrix(arr))
        assert sig.cyc == (0.2, 0.4, 0.3)


class TestMatchingSum:
    def test_identity_counts_only_empty_matching(self):
        for m in range(3, 8):
            assert matching_sum(identity_cycle(m)) == pytest.approx(1.0)

    def test_triangle_formula(self):
        sig = correlation_cycle(0.3, -0.5, 0.2)
        expected = 1.0 - 0.3 ** 2 - 0.5 ** 2 - 0.2 ** 2
        assert matching_sum(sig) == pytest.approx(expected)

    def test_determinant_expansion_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            m = int(rng.integers(3, 11))
            sig = random_cycle_pattern_matrix(rng, m)
            dense = float(np.linalg.det(sig.to_symmetric().a))
            got = cycle_determinant(sig)
            assert abs(got - dense) <= 1e-10 * max(1.0, abs(dense), sig.scale() ** m)


class TestCycleMembership:
    def test_identity_member(self):
        v = cycle_membership(identity_cycle(5))
        assert v.member and not v.boundary
        assert v.slack == pytest.approx(1.0)

    def test_high_equicorrelation_not_member(self):
        # rho = 0.9 > 1/sqrt(2): PSD but outside the image
        sig = correlation_cycle(0.9, 0.9, 0.9)
        assert is_psd(sig.to_symmetric()).is_psd
        v = cycle_membership(sig)
        assert not v.member
        assert v.slack == pytest.approx(1 - 3 * 0.81 - 2 * 0.729)

    def test_counterexample_psd_not_member(self):
        sig = counterexample_sigma(4, -1.4)
        assert is_psd(sig.to_symmetric()).is_psd
        assert not cycle_membership(sig).member

    def test_raises_on_indefinite(self):
        with pytest.raises(NotPsd):
            cycle_membership(CycleMatrix.from_arrays([1.0, -1.0, 1.0], [0, 0, 0]))

    def test_exact_boundary_resolves_to_member(self):
        sig = CycleMatrix.from_arrays([2.0, 2.0, 2.0], [1.0, 1.0, 1.0])
        v = cycle_membership(sig)
        assert v.member and v.boundary
        assert v.slack == pytest.approx(0.0, abs=1e-12)

    def test_membership_form_equivalences(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            m = int(rng.integers(3, 7))
            sig = random_psd_cycle_matrix(rng, m)
            v = cycle_membership(sig)
            if v.boundary:
                continue
            dense = sig.to_symmetric()
            flips = [is_psd(sign_flip(dense, e, (e + 1) % m)).is_psd for e in range(m)]
            assert v.member == all(flips) == any(flips)

    def test_membership_preserved_by_edge_flip_of_member(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            sig, _ = random_cycle_member(rng, 5)
            flipped = CycleMatrix.from_symmetric(sign_flip(sig.to_symmetric(), 1, 2))
            assert cycle_membership(flipped).member


class TestFlipDeterminantPrediction:
    def test_dense_flip_matches_expansion(self):
        # negating one cycle edge flips the sign of the cyclic product term only
        rng = np.random.default_rng(8)
        for _ in range(100):
            m = int(rng.integers(3, 9))
            sig = random_cycle_pattern_matrix(rng, m)
            sign = 1.0 if m % 2 == 1 else -1.0
            predicted = matching_sum(sig) - sign * 2.0 * float(np.prod(sig.cyc))
            for e in range(m):
                flipped = sign_flip(sig.to_symmetric(), e, (e + 1) % m)
                dense = float(np.linalg.det(flipped.a))
                assert abs(dense - predicted) <= 1e-10 * max(1.0, abs(dense),
                                                             sig.scale() ** m)


class TestCounterexampleFamily:
    def test_m3_reference_values(self):
        assert counterexample_det(3, 1.5) == pytest.approx(0.3125)
        assert counterexample_det(3, -1.5) == pytest.approx((1 / 8) * 7 * (-0.5))

    def test_closed_form_matches_dense(self):
        rng = np.random.default_rng(3)
        for m in range(3, 10):
            for rho in rng.uniform(-2, 2, size=8):
                sig = counterexample_sigma(m, rho)
                dense = float(np.linalg.det(sig.to_symmetric().a))
                assert counterexample_det(m, rho) == pytest.approx(dense, abs=1e-12)

    def test_rho_zero_matches_tridiagonal_path(self):
        for m in range(3, 9):
            sig = counterexample_sigma(m, 0.0)
            path_det = tridiagonal_det([1.0] * m, [0.5] * (m - 1))
            assert counterexample_det(m, 0.0) == pytest.approx(path_det)

    def test_family_psd_non_member(self):
        for m in range(3, 9):
            rho = 1 + 1 / (m - 1) if m % 2 else -1 - 1 / (m - 1)
            sig = counterexample_sigma(m, rho)
            assert is_psd(sig.to_symmetric()).is_psd
            assert counterexample_det(m, rho) > 0
            assert counterexample_det(m, -rho) < 0
            assert not cycle_membership(sig).member

    def test_rho_one_boundary_against_slack(self):
        sig = counterexample_sigma(3, 1.0)
        v = cycle_membership(sig)
        assert v.member
        assert v.slack == pytest.approx(matching_sum(sig) - 2 * (0.5 ** 3))


class TestQuarticCoefficients:
    def test_identity_3(self):
        a, b, c = quartic_coefficients(identity_cycle(3))
        assert (a, b, c) == (-1.0, 1.0, 0.0)
        roots = np.roots([a, 0.0, b, 0.0, c])
        assert sorted(np.round(r.real ** 2, 9) for r in roots) == [0.0, 0.0, 1.0, 1.0]

    def test_discriminant_identity(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            m = int(rng.integers(3, 9))
            sig, _ = random_cycle_member(rng, m)
            a, b, c = quartic_coefficients(sig)
            dense = sig.to_symmetric()
            det = float(np.linalg.det(dense.a))
            det_flip = float(np.linalg.det(sign_flip(dense, 0, 1).a))
            lhs = b * b - 4 * a * c
            rhs = det * det_flip
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs), abs(rhs), b * b)

    def test_sign_pattern_for_definite_members(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            m = int(rng.integers(3, 9))
            sig, _ = random_cycle_member(rng, m)
            a, b, c = quartic_coefficients(sig)
            assert a < 0 and b > 0 and c <= 0


class TestTridiagonalIdentity:
    def test_discriminant_supporting_identity(self):
        """The product identity relating the four principal-path determinants
        that underlies the discriminant factorization."""
        rng = np.random.default_rng(6)
        for _ in range(300):
            m = int(rng.integers(3, 11))
            sig = random_cycle_pattern_matrix(rng, m)
            d = list(sig.diag)
            c = list(sig.cyc)
            dense = sig.to_symmetric().a

            def sub_det(keep):
                return float(np.linalg.det(dense[np.ix_(keep, keep)])) if keep else 1.0

            det_no0 = tridiagonal_det(d[1:], c[1: m - 1])
            det_no01 = tridiagonal_det(d[2:], c[2: m - 1])
            det_mid = tridiagonal_det(d[1: m - 1], c[1: m - 2])
            det_inner = tridiagonal_det(d[2: m - 1], c[2: m - 2])
            # each tridiagonal value agrees with the dense determinant
            assert det_no0 == pytest.approx(sub_det(list(range(1, m))), rel=1e-9, abs=1e-9)
            assert det_no01 == pytest.approx(sub_det(list(range(2, m))), rel=1e-9, abs=1e-9)
            assert det_mid == pytest.approx(sub_det(list(range(1, m - 1))), rel=1e-9, abs=1e-9)
            assert det_inner == pytest.approx(sub_det(list(range(2, m - 1))), rel=1e-9, abs=1e-9)
            w = c[0] ** 2 * c[m - 1] ** 2
            lhs = w * det_no0 * det_inner
            rhs = w * det_no01 * det_mid - float(np.prod(c)) ** 2
            scale = max(1.0, sig.scale() ** (m + 2))
            assert abs(lhs - rhs) <= 1e-10 * scale


class TestCycleFiber:
    def test_identity_3_representatives(self):
        fib = cycle_fiber(identity_cycle(3))
        assert isinstance(fib, CycleFiber)
        assert fib.count_total == 16
        assert len(fib.representatives) == 2
        rep_a, rep_b = fib.representatives
        # forward branch: gamma_21 = 0, gamma_23 = 1, gamma_32 = 0,
        #                 gamma_31 = 1, gamma_13 = 0, gamma_12 = 1  (1-based labels)
        assert rep_a.gamma_edge(1, 0) == 0.0
        assert rep_a.gamma_edge(1, 2) == pytest.approx(1.0)
        assert rep_a.gamma_edge(2, 1) == 0.0
        assert rep_a.gamma_edge(2, 0) == pytest.approx(1.0)
        assert rep_a.gamma_edge(0, 2) == 0.0
        assert rep_a.gamma_edge(0, 1) == pytest.approx(1.0)
        # dual branch
        assert rep_b.gamma_edge(0, 1) == 0.0
        assert rep_b.gamma_edge(0, 2) == pytest.approx(1.0)
        assert rep_b.gamma_edge(2, 0) == 0.0
        assert rep_b.gamma_edge(2, 1) == pytest.approx(1.0)
        assert rep_b.gamma_edge(1, 2) == 0.0
        assert rep_b.gamma_edge(1, 0) == pytest.approx(1.0)

    @pytest.mark.parametrize("m", range(3, 9))
    def test_round_trip(self, m):
        rng = np.random.default_rng(100 + m)
        for _ in range(60):
            sig, gamma0 = random_cycle_member(rng, m)
            fib = cycle_fiber(sig)
            dense = sig.to_symmetric()
            assert len(fib.representatives) == 2
            matched = False
            for rep in fib.representatives:
                err = np.abs(phi(fib.complex, rep).a - dense.a).max()
                assert err <= 1e-9 * dense.scale()
                for cand in expand_edge_signs(rep):
                    if all(abs(cand.get(f, i) - v) <= 1e-7
                           for (f, i), v in gamma0.values.items()):
                        matched = True
            assert matched

    @pytest.mark.parametrize("m", [3, 4, 5, 6])
    def test_zero_edge_branch(self, m):
        rng = np.random.default_rng(200 + m)
        for _ in range(40):
            sig, gamma0 = random_cycle_member(rng, m, zero_edges=(int(rng.integers(0, m)),))
            fib = cycle_fiber(sig)
            dense = sig.to_symmetric()
            for rep in fib.representatives:
                err = np.abs(phi(fib.complex, rep).a - dense.a).max()
                assert err <= 1e-9 * dense.scale()

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_sign_expansion_count(self, m):
        rng = np.random.default_rng(300 + m)
        for _ in range(20):
            sig, _ = random_cycle_member(rng, m)
            fib = cycle_fiber(sig)
            sols = set()
            for rep in fib.representatives:
                for cand in expand_edge_signs(rep):
                    key = tuple(
                        round(cand.get(f, i), 8)
                        for f, i in cand.complex.incidences() if len(f) == 2
                    )
                    sols.add(key)
            assert len(sols) == 2 ** (m + 1)

    def test_edge_flip_maps_fibers(self):
        rng = np.random.default_rng(7)
        sig, _ = random_cycle_member(rng, 5)
        flipped = CycleMatrix.from_symmetric(sign_flip(sig.to_symmetric(), 1, 2))
        fib = cycle_fiber(sig)
        target = flipped.to_symmetric()
        for rep in fib.representatives:
            moved = rep.with_value((1, 2), 1, -rep.gamma_edge(1, 2))
            assert np.abs(phi(rep.complex, moved).a - target.a).max() \
                <= 1e-9 * target.scale()

    def test_not_member_raises(self):
        with pytest.raises(NotMember):
            cycle_fiber(counterexample_sigma(4, -1.4))

    def test_singular_member_raises_degenerate(self):
        # image of (g12, g21, g23, g32, g31, g13) = (1, 1, 1, -1, 1, 1): rank 2
        sig = CycleMatrix.from_arrays([2.0, 2.0, 2.0], [1.0, -1.0, 1.0])
        assert np.linalg.det(sig.to_symmetric().a) == pytest.approx(0.0, abs=1e-12)
        assert cycle_membership(sig).member
        with pytest.raises(Degenerate):
            cycle_fiber(sig)

    def test_fibonacci_specialization(self):
        def fib_seq(k):
            a, b = 0, 1
            for _ in range(k):
                a, b = b, a + b
            return a  # F_0 = 0, F_1 = 1, F_2 = 1, ...

        for m in range(3, 12):
            a, b, c, d = closure_mobius_coefficients([1.0] * m, [-1.0] * m)
            assert (a, b, c, d) == (fib_seq(m + 1), fib_seq(m), fib_seq(m), fib_seq(m - 1))
            # closure equation c*X^2 + (d-a)*X - b = 0 reduces to X^2 - X - 1 = 0
            assert d - a == -b
            assert c == b
