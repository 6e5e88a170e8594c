import numpy as np
import pytest

from ratiomem import (
    FunctionalResponse,
    JacobianPair,
    arrow_matrix,
    build_a11,
    build_jacobians,
    delayed_matrix,
    equilibrium,
)
from ratiomem.linearize import predator_entries
from ratiomem.oracle import finite_difference_jacobian
from conftest import preset, random_params


EXPECTED_A_R13 = np.array([[-5.0, -4.0, -8.0],
                           [1.0, -4.0, 0.0],
                           [1.0, 0.0, -4.0]])
EXPECTED_AD_R13 = np.array([[-5.0, -4.0, -8.0, 0.0],
                            [0.0, -4.0, 0.0, 1.0],
                            [0.0, 0.0, -4.0, 1.0],
                            [1.0, 0.0, 0.0, -1.0]])


class TestWorkedExample:
    def test_matrices_at_r13(self):
        params = preset(r=13.0, alpha=1.0)
        jac = build_jacobians(params, equilibrium(params))
        assert np.array_equal(jac.A, EXPECTED_A_R13)
        assert np.array_equal(jac.A_d, EXPECTED_AD_R13)

    def test_a11_is_eight_minus_r(self):
        for r in (6.0, 7.0, 8.0, 9.5, 12.0, 13.0):
            params = preset(r=r)
            a11 = build_a11(params, equilibrium(params))
            assert a11 == 8.0 - r  # exact: every ingredient is a clean float

    def test_alpha_corner(self):
        params = preset(r=13.0, alpha=0.25)
        jac = build_jacobians(params, equilibrium(params))
        assert jac.A_d[3, 0] == 0.25 and jac.A_d[3, 3] == -0.25

    def test_no_delayed_matrix_without_alpha(self):
        params = preset(r=13.0, alpha=None)
        jac = build_jacobians(params, equilibrium(params))
        assert jac.A_d is None and jac.alpha is None


class TestStructure:
    def test_structural_zeros(self, rng):
        for _ in range(40):
            params = random_params(rng)
            jac = build_jacobians(params, equilibrium(params))
            n = jac.n
            A, Ad = jac.A, jac.A_d
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    if i != j:
                        assert A[i, j] == 0.0
                assert Ad[i, 0] == 0.0
            assert np.all(Ad[n + 1, 1:n + 1] == 0.0)
            assert Ad[0, n + 1] == 0.0

    def test_entry_signs(self, rng):
        for _ in range(40):
            params = random_params(rng)
            jac = build_jacobians(params, equilibrium(params))
            assert np.all(jac.a_diag < 0.0)
            assert np.all(jac.a_col > 0.0)

    def test_delay_pattern_when_conditions_hold(self):
        jac = build_jacobians(preset(r=13.0), equilibrium(preset(r=13.0)))
        assert jac.has_delay_pattern()
        jac7 = build_jacobians(preset(r=7.0), equilibrium(preset(r=7.0)))
        assert not jac7.has_delay_pattern()  # a11 = 1 > 0

    def test_builders_roundtrip(self):
        jac = JacobianPair.from_entries(-1.0, [-2.0, -3.0], [-4.0, -5.0],
                                        [6.0, 7.0], alpha=2.0)
        assert np.array_equal(
            jac.A, arrow_matrix(-1.0, [-2.0, -3.0], [-4.0, -5.0], [6.0, 7.0]))
        assert np.array_equal(
            jac.A_d,
            delayed_matrix(-1.0, [-2.0, -3.0], [-4.0, -5.0], [6.0, 7.0], 2.0))
        relabeled = jac.with_alpha(5.0)
        assert relabeled.A_d[3, 0] == 5.0 and relabeled.A_d[3, 3] == -5.0
        assert np.array_equal(relabeled.A, jac.A)


class TestHollingEntryIdentities:
    def test_closed_forms(self, rng):
        for _ in range(1000):
            m = float(rng.uniform(0.5, 30.0))
            d = float(m * rng.uniform(0.05, 0.95))
            a = float(10.0 ** rng.uniform(-1.5, 1.5))
            resp = FunctionalResponse("holling", m=m, a=a)
            diag, row, col = predator_entries(resp, d)
            assert diag == pytest.approx(-d * (m - d) / m, rel=1e-12)
            assert row == pytest.approx(-d * d / m, rel=1e-12)
            assert col == pytest.approx((m - d) ** 2 / (a * m), rel=1e-12)


class TestFiniteDifferenceAgreement:
    @pytest.mark.parametrize("kind", ["holling", "ivlev"])
    def test_matches_analytic(self, rng, kind):
        for _ in range(25):
            params = random_params(rng, kind=kind)
            eq = equilibrium(params)
            jac = build_jacobians(params, eq)
            fd = finite_difference_jacobian(params, eq.state(delayed=False))
            assert np.max(np.abs(jac.A - fd) / np.maximum(1.0, np.abs(jac.A))) < 1e-6
            fdd = finite_difference_jacobian(params, eq.state(delayed=True))
            assert np.max(np.abs(jac.A_d - fdd) / np.maximum(1.0, np.abs(jac.A_d))) < 1e-6

    def test_a11_matches_fd_component(self, rng):
        for _ in range(20):
            params = random_params(rng, kind="holling", with_alpha=False)
            eq = equilibrium(params)
            fd = finite_difference_jacobian(params, eq.state(delayed=False))
            assert build_a11(params, eq) == pytest.approx(fd[0, 0], abs=1e-6)

    def test_a11_zero_boundary(self):
        # growth slope contribution exactly cancels the crowding sum
        params = preset(r=8.0)
        assert build_a11(params, equilibrium(params)) == 0.0
