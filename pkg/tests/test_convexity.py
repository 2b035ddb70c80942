import numpy as np
import pytest

from cstarlab import (
    CoefficientTuple,
    HermitianMatrix,
    InputError,
    TestVerdict,
    embed_counterexample,
    epigraph_closure_test,
    interval_set_falsifier,
    jensen_test,
    log_epigraph_closure_test,
    log_harmonic_jensen_test,
    log_midpoint_test,
    midpoint_convexity_test,
    parse_function,
    recheck_payload,
    sublevel_family_test,
)
from cstarlab.io import counterexample_to_payload

from conftest import specnorm

T1 = parse_function("t")
T15 = parse_function("t^1.5")
T2 = parse_function("t^2")
T4 = parse_function("t^4")
TINV = parse_function("t^-1")


def recheck_ok(ce):
    result = recheck_payload(counterexample_to_payload(ce))
    assert result.ok, result
    return result


class TestMidpoint:
    def test_square_is_clean(self):
        v = midpoint_convexity_test(T2, 2, 500, seed=42)
        assert v.status == "no-violation-found"
        assert v.worst_margin >= -1e-8

    def test_quartic_violates_quickly(self):
        v = midpoint_convexity_test(T4, 2, 1000, seed=42)
        assert v.violated
        assert v.counterexample.violation < -1e-6
        recheck_ok(v.counterexample)

    def test_scalar_case_reduces_to_convexity(self):
        for f in (T2, T4, parse_function("poly:0,1,3")):
            v = midpoint_convexity_test(f, 1, 300, seed=5)
            assert v.status == "no-violation-found"

    def test_verdict_consistency(self):
        with pytest.raises(InputError):
            TestVerdict(status="violated", samples_run=1, worst_margin=-1.0)


class TestJensen:
    def test_linear_function_equality(self):
        for mode, m in (("isometry", 1), ("tuple", 3), ("map-family", 2)):
            v = jensen_test(T1, mode, 3, m, 100, seed=7)
            assert v.status == "no-violation-found"
            assert abs(v.worst_margin) <= 1e-12

    def test_power_15_clean(self):
        v = jensen_test(T15, "tuple", 3, 3, 500, seed=42)
        assert v.status == "no-violation-found"

    def test_quartic_violates(self):
        v = jensen_test(T4, "tuple", 2, 2, 1000, seed=42)
        assert v.violated
        recheck_ok(v.counterexample)

    def test_isometry_mode_equality_margins(self):
        # f(U* X U) = U* f(X) U holds exactly in exact arithmetic
        for f in (T1, T15, T2, T4, TINV):
            v = jensen_test(f, "isometry", 3, 1, 200, seed=11)
            assert v.status == "no-violation-found"
            assert abs(v.worst_margin) <= 1e-8

    def test_map_family_choi_davis_jensen(self):
        v = jensen_test(T2, "map-family", 3, 3, 400, seed=42)
        assert v.status == "no-violation-found"

    def test_isometry_requires_single_coefficient(self):
        with pytest.raises(InputError):
            jensen_test(T2, "isometry", 2, 2, 10, seed=0)

    def test_unknown_mode(self):
        with pytest.raises(InputError):
            jensen_test(T2, "kraus", 2, 2, 10, seed=0)


class TestLogMidpoint:
    def test_inverse_clean(self):
        v = log_midpoint_test(TINV, 3, 500, seed=42)
        assert v.status == "no-violation-found"
        assert v.worst_margin >= -1e-8

    def test_identity_function_violates(self):
        # scalar AM-GM already fails: X=1, Y=4 gives 2.5 > 2
        v = log_midpoint_test(T1, 1, 200, seed=3)
        assert v.violated
        recheck_ok(v.counterexample)

    def test_scalar_instance_values(self):
        x = HermitianMatrix([[1.0]])
        y = HermitianMatrix([[4.0]])
        from cstarlab import geometric_mean

        mid = (x.array + y.array) / 2
        assert float(mid[0, 0].real) == 2.5
        assert abs(float(geometric_mean(x, y).array[0, 0].real) - 2.0) < 1e-12

    def test_commuting_diagonals_match_scalar_log_convexity(self):
        # on commuting inputs the inequality is the scalar one:
        # 1/((x+y)/2) <= sqrt(1/x * 1/y) for positive x, y
        rng = np.random.default_rng(9)
        for _ in range(50):
            x, y = rng.uniform(0.1, 5.0, 2)
            lhs = 1.0 / ((x + y) / 2)
            rhs = np.sqrt((1.0 / x) * (1.0 / y))
            assert lhs <= rhs + 1e-12

    def test_commuting_diagonal_matrices_entrywise(self):
        from cstarlab import apply_function, geometric_mean

        rng = np.random.default_rng(10)
        for _ in range(20):
            xd = rng.uniform(0.1, 5.0, 3)
            yd = rng.uniform(0.1, 5.0, 3)
            x, y = HermitianMatrix(np.diag(xd)), HermitianMatrix(np.diag(yd))
            lhs = apply_function(TINV, HermitianMatrix((x.array + y.array) / 2))
            rhs = geometric_mean(apply_function(TINV, x), apply_function(TINV, y))
            # both sides stay diagonal and obey the scalar inequality entrywise
            assert specnorm(lhs.array - np.diag(np.diag(lhs.array))) < 1e-12
            lhs_d, rhs_d = np.diag(lhs.array).real, np.diag(rhs.array).real
            assert np.all(lhs_d <= rhs_d + 1e-10)


class TestLogHarmonicJensen:
    def test_constant_equality(self):
        v = log_harmonic_jensen_test(parse_function("const:3.0"), 3, 2, 200, seed=6)
        assert v.status == "no-violation-found"
        assert abs(v.worst_margin) <= 1e-10

    def test_inverse_clean(self):
        for dim in (2, 3):
            v = log_harmonic_jensen_test(TINV, dim, 3, 500, seed=42)
            assert v.status == "no-violation-found"
            assert v.worst_margin >= -1e-8

    def test_square_violates_within_100(self):
        v = log_harmonic_jensen_test(T2, 2, 2, 100, seed=42)
        assert v.violated
        assert v.samples_run <= 100
        recheck_ok(v.counterexample)

    def test_exact_scalar_instance(self):
        # weights 1/2, 1/2 on x=1, y=9 for f = t^2:
        # lhs = f(5) = 25, rhs = (0.5 * 1 + 0.5/81)^{-1}
        t = CoefficientTuple([np.sqrt(0.5) * np.eye(1), np.sqrt(0.5) * np.eye(1)])
        from cstarlab import apply_combination, apply_log_combination, apply_function

        xs = [HermitianMatrix([[1.0]]), HermitianMatrix([[9.0]])]
        lhs = apply_function(T2, apply_combination(t, xs))
        fxs = [apply_function(T2, x) for x in xs]
        rhs = apply_log_combination(t, fxs)
        assert abs(float(lhs.array[0, 0].real) - 25.0) < 1e-12
        assert abs(float(rhs.array[0, 0].real) - 2.0 / (1.0 + 1.0 / 81.0)) < 1e-12
        assert abs(float(rhs.array[0, 0].real) - 1.9756) < 1e-4


class TestEpigraph:
    def test_square_closed(self):
        v = epigraph_closure_test(T2, 2, 2, 300, seed=42)
        assert v.status == "no-violation-found"

    def test_quartic_exits(self):
        v = epigraph_closure_test(T4, 2, 2, 500, seed=42)
        assert v.violated
        recheck_ok(v.counterexample)

    def test_linear_zero_noise_equality(self):
        v = epigraph_closure_test(T1, 3, 2, 100, seed=8, noise_scale=0.0)
        assert v.status == "no-violation-found"
        assert abs(v.worst_margin) <= 1e-10


class TestLogEpigraph:
    def test_single_unitary_preserves_membership(self):
        v = log_epigraph_closure_test(TINV, 3, 1, 100, seed=4)
        assert v.status == "no-violation-found"

    def test_constant_function_floor(self):
        v = log_epigraph_closure_test(parse_function("const:2.0"), 2, 2, 200, seed=5)
        assert v.status == "no-violation-found"

    def test_inverse_clean(self):
        for dim in (2, 3):
            v = log_epigraph_closure_test(TINV, dim, 2, 300, seed=42)
            assert v.status == "no-violation-found"


class TestIntervalSet:
    def test_deterministic_swap_certificate(self):
        a = HermitianMatrix(np.diag([2.0, 1.0]))
        v = interval_set_falsifier(a, seed=42)
        assert v.violated
        assert v.samples_run == 0  # found before any random sampling
        ce = v.counterexample
        assert len(ce.inputs["coeffs"]) == 1
        swap = ce.inputs["coeffs"][0]
        conj = swap.conj().T @ a.array @ swap
        assert specnorm(conj - np.diag([1.0, 2.0])) < 1e-12
        assert abs(ce.violation + 1.0) < 1e-12
        recheck_ok(ce)

    def test_identity_bound_is_cstar_convex(self):
        v = interval_set_falsifier(HermitianMatrix.identity(2), 2000, seed=42)
        assert v.status == "no-violation-found"

    def test_three_dim_violates(self):
        v = interval_set_falsifier(HermitianMatrix(np.diag([3.0, 1.0, 1.0])), 500, seed=42)
        assert v.violated
        recheck_ok(v.counterexample)


class TestSublevelFamily:
    def test_power_family_closed(self):
        family = [(parse_function(lbl), 4.0 ** a) for lbl, a in (("t", 1.0), ("t^1.5", 1.5), ("t^2", 2.0))]
        v = sublevel_family_test(family, 2, 2, 200, seed=42)
        assert v.status == "no-violation-found"

    def test_norm_ball_oracle(self):
        # {X: X^2 <= I} is the Hermitian unit ball; members stay inside
        v = sublevel_family_test([(T2, 1.0)], 2, 2, 200, seed=9)
        assert v.status == "no-violation-found"

    def test_huge_bound_trivial(self):
        v = sublevel_family_test([(T2, 1e12)], 3, 2, 100, seed=2)
        assert v.status == "no-violation-found"
        assert v.worst_margin > 1e10

    def test_empty_family_rejected(self):
        with pytest.raises(InputError):
            sublevel_family_test([], 2, 2, 10, seed=0)


class TestCertificates:
    def test_all_found_counterexamples_reverify(self):
        found = [
            midpoint_convexity_test(T4, 2, 1000, seed=42).counterexample,
            jensen_test(T4, "tuple", 2, 2, 1000, seed=42).counterexample,
            log_harmonic_jensen_test(T2, 2, 2, 100, seed=42).counterexample,
            epigraph_closure_test(T4, 2, 2, 500, seed=42).counterexample,
            interval_set_falsifier(HermitianMatrix(np.diag([2.0, 1.0])), seed=1).counterexample,
        ]
        for ce in found:
            assert ce is not None
            result = recheck_payload(counterexample_to_payload(ce))
            assert result.ok
            # within a factor two of the stored magnitude
            assert 0.5 <= result.recomputed / result.stored <= 2.0

    def test_map_family_counterexample_reverifies(self):
        v = jensen_test(T4, "map-family", 2, 2, 1000, seed=43)
        assert v.violated
        recheck_ok(v.counterexample)


class TestMonotoneFalsification:
    def test_embedding_preserves_violation(self):
        for f in (T4,):
            ce = midpoint_convexity_test(f, 2, 1000, seed=42).counterexample
            lifted = embed_counterexample(ce, f, scalar=0.5)
            assert lifted.dim == 3
            assert lifted.violation < 0
            assert lifted.violation <= ce.violation * 0.5 or lifted.violation < -1e-8
            recheck_ok(lifted)

    def test_embedding_jensen(self):
        ce = jensen_test(T4, "tuple", 2, 2, 1000, seed=42).counterexample
        lifted = embed_counterexample(ce, T4, scalar=0.25)
        assert lifted.dim == 3
        recheck_ok(lifted)

    def test_embedded_found_by_higher_dim_run(self):
        # a fresh search one dimension up also finds a violation
        v = midpoint_convexity_test(T4, 3, 1000, seed=42)
        assert v.violated


class TestLiteratureClassifications:
    @pytest.mark.parametrize("f", [T1, T15, T2])
    @pytest.mark.parametrize("dim", [5, 6])
    def test_no_violations_up_to_dim_six(self, f, dim):
        # reduced budget at the larger dims; the acceptance suite covers
        # dims up to 4 at full budget
        assert not midpoint_convexity_test(f, dim, 150, seed=12).violated
        assert not jensen_test(f, "tuple", dim, 2, 150, seed=12).violated
