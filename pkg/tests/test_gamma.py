import cmath
import math

import numpy as np
import pytest

from mlcontour import (
    ContourValidityError,
    ConvergenceError,
    GammaContourSpec,
    LambdaSpec,
    PolarComplex,
    QuadratureConfig,
    gamma_psi_window,
    is_gamma_pole,
    log_gamma,
    recip_gamma_contour,
    recip_gamma_lambda,
    recip_gamma_oracle,
    reflection_residual,
)

PI = math.pi
RECIP_GAMMA_2_PLUS_I = 1.2001760188136033 - 0.6305683777769214j  # 1/Gamma(2+i)


def rel_err(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestOracle:
    @pytest.mark.parametrize("s,expected", [
        (1.0, 1.0),
        (5.0, 1.0 / 24.0),
        (0.5, 0.5641895835477563),       # 1/sqrt(pi)
        (-0.5, -0.2820947917738781),     # recurrence: Gamma(-1/2) = -2 sqrt(pi)
    ])
    def test_known_values(self, s, expected):
        assert complex(recip_gamma_oracle(s)) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("s", [0.0, -1.0, -2.0, -7.0, -20.0])
    def test_exact_zero_at_poles(self, s):
        assert recip_gamma_oracle(s) == 0
        assert is_gamma_pole(s)

    def test_not_pole(self):
        assert not is_gamma_pole(0.5)
        assert not is_gamma_pole(-1 + 1e-9j)
        assert not is_gamma_pole(2.0)

    def test_recurrence_identity(self):
        # 1/Gamma(s+1) = (1/Gamma(s)) / s, relative residual < 1e-12
        for a in np.arange(-6.0, 6.5, 0.5):
            for b in (-3.0, -1.0, 0.0, 1.0, 3.0):
                s = complex(a, b)
                if is_gamma_pole(s) or is_gamma_pole(s + 1):
                    continue
                lhs = complex(recip_gamma_oracle(s + 1))
                rhs = complex(recip_gamma_oracle(s)) / s
                assert rel_err(lhs, rhs) < 1e-12, s

    def test_reflection_identity(self):
        for a in np.arange(-4.0, 4.5, 0.5):
            for b in (-2.0, 0.0, 2.0):
                s = complex(a, b)
                lhs = complex(recip_gamma_oracle(s)) * complex(recip_gamma_oracle(1 - s))
                rhs = cmath.sin(PI * s) / PI
                assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs)), s

    def test_against_scipy(self):
        scipy_special = pytest.importorskip("scipy.special")
        rng = np.random.default_rng(42)
        pts = rng.uniform(-20, 20, size=(300, 2))
        for a, b in pts:
            s = complex(a, b)
            if abs(b) < 0.05 and a < 0.5 and abs(a - round(a)) < 0.05:
                continue  # too close to a pole for a relative comparison
            ref = complex(scipy_special.rgamma(s))
            assert rel_err(complex(recip_gamma_oracle(s)), ref) < 1e-12, s

    def test_vectorized_matches_scalar(self):
        grid = np.array([0.5 + 0j, -1.5 + 2j, 3 - 1j, -4.5 - 3j])
        vec = recip_gamma_oracle(grid)
        for s, v in zip(grid, vec):
            assert rel_err(complex(recip_gamma_oracle(complex(s))), complex(v)) < 1e-15

    def test_underflow_region_returns_zero(self):
        assert recip_gamma_oracle(400.0) == 0

    def test_log_gamma_exponentiates_correctly(self):
        scipy_special = pytest.importorskip("scipy.special")
        for s in (0.3 + 0j, 2.5 + 1j, -1.3 + 0.4j, -3.7 - 2j, 0.5 + 5j):
            got = cmath.exp(complex(log_gamma(s)))
            ref = complex(scipy_special.gamma(s))
            assert rel_err(got, ref) < 1e-12, s

    def test_log_gamma_pole(self):
        assert complex(log_gamma(-2.0)).real == math.inf


class TestContour:
    @pytest.mark.parametrize("s,expected,tol", [
        (1.0, 1.0, 1e-10),
        (0.5, 0.5641895835477563, 1e-10),
        (-0.5, -0.2820947917738781, 1e-10),
    ])
    def test_known_values(self, s, expected, tol):
        ev = recip_gamma_contour(s)
        assert ev.method == "contour"
        assert abs(ev.value - expected) <= tol * max(1.0, abs(expected))

    def test_zero_at_gamma_pole(self):
        ev = recip_gamma_contour(0.0)
        assert abs(ev.value) < 1e-10

    def test_matches_oracle_complex(self):
        for s in (2 + 1j, -1.3 + 0.4j, 0.3 + 0.7j, 3.5 - 2j):
            ev = recip_gamma_contour(s)
            assert rel_err(ev.value, complex(recip_gamma_oracle(s))) < 1e-9, s

    def test_psi_invariance(self):
        s = 2 + 1j
        values = []
        lo, hi = gamma_psi_window(0.75 * PI, 0.9 * PI)
        for k in range(5):
            psi = lo + (hi - lo) * (k + 1) / 6.0
            spec = GammaContourSpec(1.0, psi, 0.75 * PI, 0.9 * PI)
            values.append(recip_gamma_contour(s, spec).value)
        spread = max(abs(a - b) for a in values for b in values)
        assert spread / abs(values[0]) < 1e-9

    def test_epsilon_invariance(self):
        s = 0.5
        values = [recip_gamma_contour(s, GammaContourSpec(eps, 0.0, PI, PI)).value
                  for eps in (0.25, 0.5, 1.0, 2.0, 4.0)]
        spread = max(abs(a - b) for a in values for b in values)
        assert spread / abs(values[0]) < 1e-9

    def test_delta_invariance(self):
        s = -1.3 + 0.4j
        values = []
        for d1, d2 in ((0.6 * PI, 0.6 * PI), (0.75 * PI, 0.9 * PI), (PI, PI)):
            values.append(recip_gamma_contour(s, GammaContourSpec(1.0, 0.0, d1, d2)).value)
        spread = max(abs(a - b) for a in values for b in values)
        assert spread / abs(values[0]) < 1e-9

    def test_invalid_spec_raises(self):
        with pytest.raises(ContourValidityError):
            recip_gamma_contour(1.0, GammaContourSpec(1.0, PI / 2 - PI, PI, PI))

    def test_non_convergence_raises(self):
        cfg = QuadratureConfig(rel_tol=1e-15, abs_tol=1e-30, max_refinements=1,
                               initial_panels_per_segment=1)
        with pytest.raises(ConvergenceError):
            recip_gamma_contour(2 + 1j, cfg=cfg)

    def test_evaluation_carries_quadrature(self):
        ev = recip_gamma_contour(0.5)
        assert ev.quadrature is not None
        assert ev.quadrature.converged
        assert ev.quadrature.value == ev.value


class TestLambdaRoute:
    def test_identity_scaling_matches_plain_contour(self):
        s = 0.7 + 0.2j
        lam = LambdaSpec(PolarComplex(1.0, 0.0), 0.0)
        a = recip_gamma_lambda(s, lam).value
        b = recip_gamma_contour(s).value
        assert abs(a - b) < 1e-10

    def test_value_independent_of_lambda(self):
        s = 1.0
        lam = LambdaSpec(PolarComplex(1.0, PI / 4), -PI / 4)
        ev = recip_gamma_lambda(s, lam)
        assert ev.method == "contour-lambda"
        assert abs(ev.value - 1.0) < 1e-10

    def test_conjugate_rotations_agree_with_oracle(self):
        s = 2 + 1j
        for arg in (-PI / 3, PI / 3):
            lam = LambdaSpec(PolarComplex(1.0, arg), -arg)
            ev = recip_gamma_lambda(s, lam)
            assert rel_err(ev.value, RECIP_GAMMA_2_PLUS_I) < 1e-9

    def test_modulus_scaling(self):
        s = 0.5
        lam = LambdaSpec(PolarComplex(2.5, 0.0), 0.0)
        ev = recip_gamma_lambda(s, lam)
        assert rel_err(ev.value, 0.5641895835477563) < 1e-9

    def test_joint_validity_enforced(self):
        # psi_lambda outside the shifted window
        lam = LambdaSpec(PolarComplex(1.0, PI / 3), PI / 2)
        with pytest.raises(ContourValidityError):
            recip_gamma_lambda(0.5, lam)


class TestReflectionResidual:
    @pytest.mark.parametrize("s,tol", [
        (0.5, 1e-9),
        (0.0, 1e-9),
        (0.3 + 0.7j, 1e-8),
        (1.2 - 0.5j, 1e-8),
    ])
    def test_small_residual(self, s, tol):
        assert reflection_residual(s) < tol
