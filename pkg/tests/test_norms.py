import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardy_lab.core_fn import AnalyticPoly, BoundaryGrid, random_poly
from hardy_lab.errors import AliasingError, DegreeZeroWarning, DomainError, GridCoincidenceError
from hardy_lab.norms import (
    NormKind,
    NormParams,
    default_grid_size,
    difference_quotient,
    frakn_norm,
    hinf_norm,
    hp_norm,
    lambda_functional,
    lambda_profile,
)

FOUR_OVER_PI = 4 / math.pi


def brute_lambda_profile(coeffs, gz, ge):
    # independent route: numpy polyval and explicit pairwise quotients
    c = np.asarray(coeffs)[::-1]
    fz = np.polyval(c, gz.nodes)
    fe = np.polyval(c, ge.nodes)
    q = np.abs(fz[None, :] - fe[:, None]) / np.abs(gz.nodes[None, :] - ge.nodes[:, None])
    return q.mean(axis=1)


class TestHp:
    @pytest.mark.parametrize("p", [1, 1.5, 2, 4])
    def test_constant(self, p):
        assert hp_norm(AnalyticPoly([3 - 4j]), p, BoundaryGrid(16)).value == pytest.approx(5.0)

    def test_identity_l2(self):
        assert hp_norm(AnalyticPoly([0, 1]), 2, BoundaryGrid(16)).value == pytest.approx(1.0, abs=1e-15)

    def test_one_plus_z_l1(self):
        est = hp_norm(AnalyticPoly([1, 1]), 1, BoundaryGrid(4096))
        assert est.value == pytest.approx(FOUR_OVER_PI, abs=1e-6)
        assert est.kind is NormKind.HP and est.grid_size == 4096 and not est.is_rigorous

    def test_l2_is_parseval(self):
        rng = np.random.default_rng(0)
        f = random_poly(rng, 30, normalize=False)
        assert hp_norm(f, 2, BoundaryGrid(64)).value == pytest.approx(np.linalg.norm(f.coeffs), rel=1e-13)

    def test_errors(self):
        with pytest.raises(DomainError):
            hp_norm(AnalyticPoly([1]), 0.5, BoundaryGrid(8))
        with pytest.raises(DomainError):
            hp_norm(AnalyticPoly([1]), math.inf, BoundaryGrid(8))
        with pytest.raises(AliasingError):
            hp_norm(AnalyticPoly(np.ones(10)), 1, BoundaryGrid(8))


class TestHinf:
    def test_examples(self):
        assert hinf_norm(AnalyticPoly([3])).value == 3
        assert hinf_norm(AnalyticPoly([0, 1])).value == pytest.approx(1.0, abs=1e-15)
        assert hinf_norm(AnalyticPoly([1, 1]), oversample=64).value == pytest.approx(2.0, abs=1e-6)

    def test_lower_estimate_of_fine_max(self):
        rng = np.random.default_rng(5)
        f = random_poly(rng, 25, normalize=False)
        fine = np.abs(np.polyval(f.coeffs[::-1], np.exp(1j * np.linspace(0, 2 * np.pi, 200001)))).max()
        assert hinf_norm(f).value <= fine + 1e-12

    def test_oversample_guard(self):
        with pytest.raises(DomainError):
            hinf_norm(AnalyticPoly([1, 2]), oversample=1)


class TestDifferenceQuotient:
    def test_identity(self):
        assert difference_quotient(AnalyticPoly([0, 1]), 1).allclose(AnalyticPoly([1]))

    def test_square(self):
        assert difference_quotient(AnalyticPoly([0, 0, 1]), 1).allclose(AnalyticPoly([1, 1]))

    def test_constant_warns(self):
        with pytest.warns(DegreeZeroWarning):
            q = difference_quotient(AnalyticPoly([7]), 1j)
        assert q.allclose(AnalyticPoly([0]))

    def test_off_circle(self):
        with pytest.raises(DomainError):
            difference_quotient(AnalyticPoly([0, 1]), 0.5)

    @given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=2, max_size=12),
           st.floats(0, 2 * math.pi), st.complex_numbers(max_magnitude=0.9))
    @settings(max_examples=60)
    def test_matches_quotient(self, c, t, z):
        f = AnalyticPoly(c)
        zeta = np.exp(1j * t)
        F = difference_quotient(f, zeta)
        assert F.degree == f.degree - 1
        assert F(z) * (zeta - z) == pytest.approx(f(zeta) - f(z), abs=1e-9)


class TestLambda:
    @pytest.mark.parametrize("M", [64, 1024, 16384])
    def test_identity_exact(self, M):
        est = lambda_functional(AnalyticPoly([0, 1]), BoundaryGrid(M), BoundaryGrid(M, 0.5))
        assert abs(est.value - 1.0) <= 1e-12

    def test_identity_unequal_grids(self):
        est = lambda_functional(AnalyticPoly([0, 1]), BoundaryGrid(100), BoundaryGrid(37, 0.31415))
        assert est.value == pytest.approx(1.0, abs=1e-12)

    def test_constant_zero(self):
        assert lambda_functional(AnalyticPoly([2 + 1j]), BoundaryGrid(64), BoundaryGrid(64, 0.5)).value == 0.0

    def test_square_four_over_pi(self):
        est = lambda_functional(AnalyticPoly([0, 0, 1]), BoundaryGrid(16384), BoundaryGrid(16384, 0.5))
        assert est.value == pytest.approx(FOUR_OVER_PI, abs=1e-3)

    def test_coincidence(self):
        with pytest.raises(GridCoincidenceError):
            lambda_functional(AnalyticPoly([0, 1]), BoundaryGrid(64), BoundaryGrid(64))
        with pytest.raises(GridCoincidenceError):
            lambda_functional(AnalyticPoly([0, 1]), BoundaryGrid(64), BoundaryGrid(32, 0.0))

    def test_aliasing(self):
        with pytest.raises(AliasingError):
            lambda_functional(AnalyticPoly(np.ones(40)), BoundaryGrid(64), BoundaryGrid(64, 0.5))

    @pytest.mark.parametrize("sizes", [(256, 256, 0.5), (256, 97, 0.2718), (128, 300, 0.1)])
    def test_against_brute_force(self, sizes):
        mz, me, off = sizes
        rng = np.random.default_rng(mz + me)
        f = random_poly(rng, 20, normalize=False)
        gz, ge = BoundaryGrid(mz), BoundaryGrid(me, off)
        np.testing.assert_allclose(lambda_profile(f, gz, ge), brute_lambda_profile(f.coeffs, gz, ge), rtol=1e-11)

    def test_profile_matches_difference_quotient_norm(self):
        rng = np.random.default_rng(11)
        f = random_poly(rng, 16)
        gz, ge = BoundaryGrid(1024), BoundaryGrid(1024, 0.5)
        prof = lambda_profile(f, gz, ge)
        for k in range(0, 1024, 61):
            l1 = hp_norm(difference_quotient(f, ge.nodes[k]), 1, gz).value
            assert abs(prof[k] - l1) <= 1e-12 * max(1.0, l1)

    def test_homogeneity(self):
        rng = np.random.default_rng(2)
        gz, ge = BoundaryGrid(1024), BoundaryGrid(1024, 0.5)
        for _ in range(5):
            f = random_poly(rng, int(rng.integers(1, 30)))
            c = complex(*rng.normal(size=2)) * 3
            a = lambda_functional(c * f, gz, ge).value
            b = abs(c) * lambda_functional(f, gz, ge).value
            assert a == pytest.approx(b, rel=1e-12)

    def test_subadditivity(self):
        rng = np.random.default_rng(4)
        gz, ge = BoundaryGrid(1024), BoundaryGrid(1024, 0.5)
        for _ in range(5):
            f, g = random_poly(rng, 12), random_poly(rng, 20)
            lhs = lambda_functional(f + g, gz, ge).value
            rhs = lambda_functional(f, gz, ge).value + lambda_functional(g, gz, ge).value
            assert lhs <= rhs + 1e-10

    def test_rotation_invariance(self):
        rng = np.random.default_rng(6)
        M = 1024
        gz, ge = BoundaryGrid(M), BoundaryGrid(M, 0.5)
        f = random_poly(rng, 25)
        for shift in (1, 7, 300):
            fr = f.rotated(2 * math.pi * shift / M)
            assert lambda_functional(fr, gz, ge).value == pytest.approx(lambda_functional(f, gz, ge).value, abs=1e-12)

    def test_refinement_tracking(self):
        # logged, not asserted beyond sanity: doubling the grid moves the estimate by O(1/M) or less
        rng = np.random.default_rng(8)
        f = random_poly(rng, 40)
        vals = [lambda_functional(f, BoundaryGrid(M), BoundaryGrid(M, 0.5)).value for M in (1024, 2048, 4096)]
        print("Lambda refinement:", vals)
        assert abs(vals[2] - vals[1]) <= abs(vals[1] - vals[0]) + 1e-9


class TestFrakN:
    def test_identity(self):
        assert frakn_norm(AnalyticPoly([0, 1])).value == pytest.approx(2.0, abs=1e-12)

    def test_constant(self):
        assert frakn_norm(AnalyticPoly([-3])).value == 3

    def test_square(self):
        est = frakn_norm(AnalyticPoly([0, 0, 1]), NormParams(16384))
        assert est.value == pytest.approx(1 + FOUR_OVER_PI, abs=1e-3)
        assert est.parts["hinf"] == pytest.approx(1.0)
        assert est.kind is NormKind.FRAKN

    def test_default_grid(self):
        assert default_grid_size(3) == 4096
        assert default_grid_size(200) == 32 * 201
        gz, ge = NormParams().grids(200)
        assert gz.size == ge.size == 6432 and ge.offset == 0.5

    def test_deterministic(self):
        f = random_poly(np.random.default_rng(1), 50)
        assert frakn_norm(f).value == frakn_norm(f).value


def test_threaded_profile_matches_serial(monkeypatch):
    f = random_poly(np.random.default_rng(12), 30)
    gz, ge = BoundaryGrid(2048), BoundaryGrid(2048, 0.5)
    monkeypatch.setenv("HARDY_LAB_THREADS", "1")
    a = lambda_profile(f, gz, ge)
    monkeypatch.setenv("HARDY_LAB_THREADS", "4")
    b = lambda_profile(f, gz, ge)
    np.testing.assert_array_equal(a, b)
