import math

import numpy as np
import pytest

from mlcontour import (
    ArcSegment,
    DecayModel,
    IntegrandError,
    IntegrationPath,
    QuadratureConfig,
    RaySegment,
    integrate_arc,
    integrate_path,
    integrate_ray,
)

PI = math.pi
SQRT_PI_HALF = 0.8862269254527580  # sqrt(pi)/2, Gaussian integral


def as_complex(mod, ang):
    return mod * np.exp(1j * ang)


class TestArc:
    def test_residue_full_circle(self):
        res = integrate_arc(lambda m, a: 1.0 / as_complex(m, a),
                            ArcSegment(1.0, -PI, PI))
        assert res.converged
        assert res.value == pytest.approx(2j * PI, abs=1e-12)
        assert res.error_estimate < 1e-12

    def test_constant_quarter_circle(self):
        # antiderivative zeta: 2(e^{i pi/2} - 1) = -2 + 2i
        res = integrate_arc(lambda m, a: np.ones_like(m, dtype=complex),
                            ArcSegment(2.0, 0.0, PI / 2))
        assert res.value == pytest.approx(-2.0 + 2.0j, abs=1e-12)

    def test_exp_closed_circle_vanishes(self):
        res = integrate_arc(lambda m, a: np.exp(as_complex(m, a)),
                            ArcSegment(1.0, -PI, PI))
        assert abs(res.value) < 1e-12

    def test_descending_span_flips_sign(self):
        f = lambda m, a: np.ones_like(m, dtype=complex)
        fwd = integrate_arc(f, ArcSegment(2.0, 0.0, PI / 2))
        bwd = integrate_arc(f, ArcSegment(2.0, PI / 2, 0.0))
        assert bwd.value == pytest.approx(-fwd.value, abs=1e-14)

    def test_non_finite_integrand(self):
        def f(m, a):
            return np.where(a > 0, np.nan, 1.0) + 0j
        with pytest.raises(IntegrandError, match="not finite"):
            integrate_arc(f, ArcSegment(2.0, -PI, PI))


class TestRay:
    def test_exponential(self):
        ray = RaySegment(0.0, 0.001, "outbound")
        decay = DecayModel(1.0, 1.0, 1.0)
        res = integrate_ray(lambda m, a: np.exp(-m + 0j), ray, decay)
        assert res.converged
        assert res.value == pytest.approx(math.exp(-0.001), rel=1e-10)
        assert res.truncation_radius > 0

    def test_gaussian(self):
        ray = RaySegment(0.0, 1e-12, "outbound")
        decay = DecayModel(1.0, 1.0, 2.0)
        res = integrate_ray(lambda m, a: np.exp(-m * m + 0j), ray, decay)
        assert res.value == pytest.approx(SQRT_PI_HALF, rel=1e-10)

    def test_inbound_negates(self):
        decay = DecayModel(1.0, 1.0, 2.0)
        out = integrate_ray(lambda m, a: np.exp(-m * m + 0j),
                            RaySegment(0.0, 1e-12, "outbound"), decay)
        inb = integrate_ray(lambda m, a: np.exp(-m * m + 0j),
                            RaySegment(0.0, 1e-12, "inbound"), decay)
        assert inb.value == pytest.approx(-out.value, abs=1e-14)

    def test_tail_soundness(self):
        # widening the truncation safety margin moves the value by less than
        # the reported error estimate
        ray = RaySegment(0.0, 0.001, "outbound")
        decay = DecayModel(1.0, 1.0, 1.0)
        f = lambda m, a: np.exp(-m + 0j)
        r10 = integrate_ray(f, ray, decay, QuadratureConfig(tail_safety_factor=10))
        r100 = integrate_ray(f, ray, decay, QuadratureConfig(tail_safety_factor=100))
        assert abs(r10.value - r100.value) <= r10.error_estimate

    def test_finite_ray_needs_no_decay(self):
        res = integrate_ray(lambda m, a: np.exp(-m + 0j),
                            RaySegment(0.0, 1.0, "outbound", end_radius=3.0))
        assert res.value == pytest.approx(math.exp(-1) - math.exp(-3), rel=1e-12)
        assert res.truncation_radius == 0.0

    def test_infinite_ray_requires_decay(self):
        with pytest.raises(ValueError, match="decay"):
            integrate_ray(lambda m, a: np.exp(-m + 0j), RaySegment(0.0, 1.0))

    def test_converged_estimate_within_tolerance(self):
        cfg = QuadratureConfig()
        res = integrate_ray(lambda m, a: np.exp(-m + 0j),
                            RaySegment(0.0, 0.5, "outbound"),
                            DecayModel(1.0, 1.0, 1.0), cfg)
        assert res.converged
        assert res.error_estimate <= max(cfg.abs_tol, cfg.rel_tol * abs(res.value))


class TestDecayModel:
    def test_rejects_nonpositive_rate(self):
        with pytest.raises(ValueError):
            DecayModel(1.0, 0.0, 1.0)
        with pytest.raises(ValueError):
            DecayModel(1.0, 1.0, -1.0)

    def test_power_growth_fold_is_a_bound(self):
        model = DecayModel.with_power_growth(2.0, 3.5, 1.0, 1.0, 0.5)
        for r in np.linspace(0.5, 60.0, 200):
            assert 2.0 * r**3.5 * math.exp(-r) <= model.bound(r) * (1 + 1e-12)

    def test_power_decay_keeps_rate(self):
        model = DecayModel.with_power_growth(1.0, -2.0, 1.5, 1.0, 2.0)
        assert model.rate == 1.5


class TestPath:
    def closed_contour(self, delta2_plus_psi=2.5, big_r=10.0, eps=0.5):
        # closed finite loop: radial piece out at angle a, arc to pi at radius
        # R, radial piece back at angle pi, arc back down to a at radius eps
        a = delta2_plus_psi
        return IntegrationPath((
            RaySegment(a, eps, "outbound", end_radius=big_r),
            ArcSegment(big_r, a, PI),
            RaySegment(PI, eps, "inbound", end_radius=big_r),
            ArcSegment(eps, PI, a),
        ))

    def test_cauchy_nullity(self):
        # e^t t^{s-1} is analytic inside the closed loop, so the integral
        # vanishes; this is the engine's closed-contour test at s = 0.7
        s = 0.7

        def f(mod, ang):
            return np.exp(mod * np.exp(1j * ang) + (s - 1.0) * (np.log(mod) + 1j * ang))

        res = integrate_path(f, self.closed_contour())
        assert res.converged
        assert abs(res.value) < 1e-8

    def test_degenerate_hankel_residue(self):
        # 1/zeta on rays at -pi and +pi takes equal values, so the finite ray
        # pieces cancel and the full-circle residue 2 pi i remains
        path = IntegrationPath((
            RaySegment(-PI, 1.0, "inbound", end_radius=30.0),
            ArcSegment(1.0, -PI, PI),
            RaySegment(PI, 1.0, "outbound", end_radius=30.0),
        ))
        res = integrate_path(lambda m, a: 1.0 / as_complex(m, a), path)
        assert res.value == pytest.approx(2j * PI, abs=1e-10)

    def test_hankel_loop_exp_over_t(self):
        # e^t / t over the classical loop: 2 pi i times 1/Gamma(1) = 2 pi i
        path = IntegrationPath((
            RaySegment(-PI, 1.0, "inbound"),
            ArcSegment(1.0, -PI, PI),
            RaySegment(PI, 1.0, "outbound"),
        ))

        def f(mod, ang):
            return np.exp(mod * np.exp(1j * ang) - (np.log(mod) + 1j * ang))

        res = integrate_path(f, path, decay=DecayModel(3.0, 1.0, 1.0))
        assert res.converged
        assert res.value == pytest.approx(2j * PI, rel=1e-10)

    def test_orientation_antisymmetry(self):
        path = IntegrationPath((
            RaySegment(0.7, 0.5, "outbound", end_radius=4.0),
            ArcSegment(4.0, 0.7, 2.0),
        ))

        def f(mod, ang):
            return np.exp(1j * as_complex(mod, ang))

        fwd = integrate_path(f, path)
        rev = integrate_path(f, path.reversed())
        assert rev.value == pytest.approx(-fwd.value, rel=1e-12)

    def test_per_ray_decay_mapping(self):
        path = IntegrationPath((
            RaySegment(-2.0, 1.0, "inbound"),
            ArcSegment(1.0, -2.0, 2.0),
            RaySegment(2.0, 1.0, "outbound"),
        ))

        def f(mod, ang):
            return np.exp(as_complex(mod, ang))

        res = integrate_path(
            f, path,
            decay=lambda ray: DecayModel(1.0, abs(math.cos(ray.angle)), 1.0))
        # closed-loop value of an entire function: rays + arc telescope to 0
        assert abs(res.value) < 1e-10

    def test_panels_accumulate(self):
        path = IntegrationPath((ArcSegment(1.0, -PI, PI),))
        res = integrate_path(lambda m, a: 1.0 / as_complex(m, a), path)
        assert res.panels_used >= 8

    def test_non_convergence_reported(self):
        cfg = QuadratureConfig(rel_tol=1e-15, abs_tol=1e-30, max_refinements=1,
                               initial_panels_per_segment=1)
        res = integrate_arc(lambda m, a: np.exp(5 * as_complex(m, a)),
                            ArcSegment(1.0, -PI, PI), cfg)
        assert not res.converged
