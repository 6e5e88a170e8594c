import numpy as np
import pytest

from ratiomem import (
    JacobianPair,
    UnsupportedDimensionError,
    build_jacobians,
    char_poly,
    equilibrium,
    quartic_coeffs,
)
from ratiomem.oracle import (
    charpoly_bruteforce,
    eigen_stability_oracle,
    finite_difference_jacobian,
    quartic_coeffs_closed_form,
    quartic_from_jacobian_closed_form,
    run_verification,
)
from conftest import poly_close, preset, random_params, random_pattern_entries


class TestBruteforceCharPoly:
    def test_diagonal(self):
        got = charpoly_bruteforce(np.diag([-1.0, -2.0]))
        assert poly_close(got, [2.0, 3.0, 1.0], rtol=1e-15)  # (l+1)(l+2)

    def test_worked_example(self):
        params = preset(r=13.0)
        jac = build_jacobians(params, equilibrium(params))
        # (l + 4)(l^2 + 9 l + 32)
        assert poly_close(charpoly_bruteforce(jac.A),
                          np.convolve([32.0, 9.0, 1.0], [4.0, 1.0]), rtol=1e-14)

    def test_matches_production(self, rng):
        for _ in range(30):
            M = rng.normal(0.0, 2.0, (6, 6))
            assert poly_close(charpoly_bruteforce(M), char_poly(M), rtol=1e-9)

    def test_dimension_cap(self):
        with pytest.raises(UnsupportedDimensionError):
            charpoly_bruteforce(np.eye(9))


class TestClosedFormQuartic:
    def test_matches_production(self, rng):
        for _ in range(1000):
            a11, a22, a33, a12, a13, a24, a34, alpha = \
                random_pattern_entries(rng)
            jac = JacobianPair.from_entries(a11, [a22, a33], [a12, a13],
                                            [a24, a34], alpha)
            direct = quartic_coeffs(jac)
            closed = quartic_from_jacobian_closed_form(jac)
            for got, want in zip(
                    (direct.a3, direct.a2, direct.a1, direct.a0),
                    (closed.a3, closed.a2, closed.a1, closed.a0)):
                assert got == pytest.approx(want, rel=1e-9, abs=1e-9)

    def test_constant_term_is_determinant(self, rng):
        for _ in range(300):
            a11, a22, a33, a12, a13, a24, a34, alpha = \
                random_pattern_entries(rng)
            jac = JacobianPair.from_entries(a11, [a22, a33], [a12, a13],
                                            [a24, a34], alpha)
            closed = quartic_from_jacobian_closed_form(jac)
            det = float(np.linalg.det(jac.A_d))
            assert closed.a0 == pytest.approx(det, rel=1e-9, abs=1e-9)

    def test_zero_memory_rate_kills_constant(self):
        a3, a2, a1, a0 = quartic_coeffs_closed_form(
            -1.0, -2.0, -3.0, -1.0, -1.0, 1.0, 1.0, 0.0)
        assert a0 == 0.0

    def test_vectorised_evaluation(self, rng):
        a11, a22, a33, a12, a13, a24, a34, alpha = \
            random_pattern_entries(rng, size=64)
        a3, a2, a1, a0 = quartic_coeffs_closed_form(
            a11, a22, a33, a12, a13, a24, a34, alpha)
        assert a3.shape == (64,)
        assert np.all(a0 > 0)


class TestFiniteDifferences:
    def test_linear_memory_row_exact(self):
        # the memory equation is linear, so central differences on its
        # row reproduce (alpha, 0, ..., 0, -alpha) to round-off
        params = preset(r=13.0, alpha=0.7)
        eq = equilibrium(params)
        fd = finite_difference_jacobian(params, eq.state(delayed=True))
        assert fd[3, 0] == pytest.approx(0.7, abs=1e-10)
        assert fd[3, 3] == pytest.approx(-0.7, abs=1e-10)
        assert abs(fd[3, 1]) < 1e-12 and abs(fd[3, 2]) < 1e-12

    def test_h_refinement_second_order(self):
        params = preset(r=13.0)
        eq = equilibrium(params)
        jac = build_jacobians(params, eq)
        errors = []
        for h in (8e-5, 4e-5, 2e-5):
            fd = finite_difference_jacobian(params, eq.state(delayed=False), h=h)
            errors.append(np.max(np.abs(fd - jac.A)))
        # quartering with each halving, far from the round-off floor
        assert errors[1] == pytest.approx(errors[0] / 4, rel=0.35)
        assert errors[2] == pytest.approx(errors[1] / 4, rel=0.35)

    def test_h_range_enforced(self):
        params = preset(r=13.0)
        eq = equilibrium(params)
        with pytest.raises(ValueError):
            finite_difference_jacobian(params, eq.state(delayed=False), h=1e-3)


class TestEigenOracle:
    def test_diagonal_stable(self):
        assert eigen_stability_oracle(np.diag([-1.0, -2.0, -3.0])) == "stable"

    def test_worked_cases(self):
        p7 = preset(r=7.0, alpha=1.0)
        jac = build_jacobians(p7, equilibrium(p7))
        assert eigen_stability_oracle(jac.A_d) == "unstable"
        assert eigen_stability_oracle(jac.with_alpha(10.0).A_d) == "stable"


class TestVerificationSuite:
    def test_all_reports_pass(self):
        reports = run_verification(seed=0)
        assert len(reports) == 5
        for rep in reports:
            assert rep.ok, rep.line()
            assert rep.cases > 0
            assert rep.max_abs_error >= 0

    def test_reports_are_reproducible(self):
        first = run_verification(seed=7)
        second = run_verification(seed=7)
        for a, b in zip(first, second):
            assert a.max_rel_error == b.max_rel_error
