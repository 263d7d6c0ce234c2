import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from melnikov_lab.elliptic import EllipticModulus
from melnikov_lab.pendulum import (
    HOMOCLINIC_MINUS,
    HOMOCLINIC_PLUS,
    INNER,
    ROTATING_MINUS,
    ROTATING_PLUS,
    OrbitFamily,
    homoclinic_limit_distance,
    homoclinic_orbit,
    inner_orbit,
    orbit_complex_values,
    orbit_ode_residual,
    orbit_state,
    pendulum_system,
    rotating_orbit,
    wrap_angle,
)


class TestForcedSystem:
    def test_hamiltonian_and_gradient(self):
        sys = pendulum_system(1.0, 0.5, 1.0)
        assert sys.hamiltonian(0.0, 0.0) == 0.0
        assert sys.hamiltonian(math.pi, 0.0) == pytest.approx(2.0)
        g = sys.grad_h(0.3, 0.7)
        assert g[0] == pytest.approx(math.sin(0.3))
        assert g[1] == pytest.approx(0.7)

    def test_gradient_matches_finite_difference(self):
        sys = pendulum_system(1.0, 0.5, 1.0)
        h = 1e-6
        for x1, x2 in ((0.4, -1.2), (2.5, 0.3)):
            g = sys.grad_h(x1, x2)
            fd1 = (sys.hamiltonian(x1 + h, x2) - sys.hamiltonian(x1 - h, x2)) / (2 * h)
            fd2 = (sys.hamiltonian(x1, x2 + h) - sys.hamiltonian(x1, x2 - h)) / (2 * h)
            assert g[0] == pytest.approx(fd1, abs=1e-9)
            assert g[1] == pytest.approx(fd2, abs=1e-9)

    def test_perturbation_vector(self):
        sys = pendulum_system(2.0, 0.5, 1.0)
        p = sys.perturbation(0.0, 3.0, 0.0)
        assert p[0] == 0.0
        assert p[1] == pytest.approx(2.0 - 1.5)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            pendulum_system(1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            pendulum_system(-1.0, 1.0, 1.0)


class TestWrapAngle:
    def test_representative_interval(self):
        assert wrap_angle(math.pi) == pytest.approx(math.pi)
        assert wrap_angle(-math.pi) == pytest.approx(math.pi)
        assert wrap_angle(3.0 * math.pi) == pytest.approx(math.pi)
        assert wrap_angle(0.1 + 4.0 * math.pi) == pytest.approx(0.1)
        arr = wrap_angle(np.array([-7.0, 0.0, 7.0]))
        assert np.all(arr > -math.pi) and np.all(arr <= math.pi)


class TestOrbitFamilies:
    def test_family_validation(self):
        mod = EllipticModulus.from_k(0.5)
        with pytest.raises(ValueError):
            OrbitFamily(INNER)  # modulus required
        with pytest.raises(ValueError):
            OrbitFamily(HOMOCLINIC_PLUS, mod)  # no modulus allowed
        with pytest.raises(ValueError):
            OrbitFamily("saddle", mod)

    def test_energies_and_periods(self):
        mod = EllipticModulus.from_k(0.5)
        inner = inner_orbit(mod)
        assert inner.energy == pytest.approx(0.5)
        assert inner.period == pytest.approx(4.0 * mod.K)
        rot = rotating_orbit(mod, +1)
        assert rot.energy == pytest.approx(8.0)
        assert rot.period == pytest.approx(2.0 * mod.k * mod.K)
        hom = homoclinic_orbit(-1)
        assert hom.energy == 2.0
        assert hom.period == math.inf
        assert hom.tag == HOMOCLINIC_MINUS
        assert hom.sign == -1.0

    def test_energy_conserved_along_orbits(self):
        sys = pendulum_system(0.0, 0.0, 1.0)
        mod = EllipticModulus.from_k(0.7)
        for family in (
            inner_orbit(mod),
            rotating_orbit(mod, +1),
            rotating_orbit(mod, -1),
            homoclinic_orbit(+1),
        ):
            t = np.linspace(-5.0, 5.0, 200)
            state = orbit_state(family, t)
            h = sys.hamiltonian(state.x1, state.x2)
            assert np.max(np.abs(h - family.energy)) <= 1e-12

    @pytest.mark.parametrize("tag_builder", [
        lambda mod: inner_orbit(mod),
        lambda mod: rotating_orbit(mod, +1),
        lambda mod: rotating_orbit(mod, -1),
        lambda mod: homoclinic_orbit(+1),
        lambda mod: homoclinic_orbit(-1),
    ])
    def test_ode_residual(self, tag_builder):
        mod = EllipticModulus.from_k(0.6)
        family = tag_builder(mod)
        t = np.linspace(-4.0, 4.0, 60)
        assert orbit_ode_residual(family, t) <= 1e-9

    def test_inner_orbit_against_integrator(self):
        mod = EllipticModulus.from_k(0.6)
        family = inner_orbit(mod)
        start = orbit_state(family, 0.0)
        sol = solve_ivp(
            lambda _, y: [y[1], -math.sin(y[0])],
            (0.0, 3.0),
            [start.x1, start.x2],
            method="DOP853",
            rtol=1e-12,
            atol=1e-12,
        )
        end = orbit_state(family, 3.0)
        assert sol.y[0, -1] == pytest.approx(end.x1, abs=1e-9)
        assert sol.y[1, -1] == pytest.approx(end.x2, abs=1e-9)

    def test_rotating_orbit_against_integrator(self):
        mod = EllipticModulus.from_k(0.8)
        family = rotating_orbit(mod, -1)
        start = orbit_state(family, 0.0)
        sol = solve_ivp(
            lambda _, y: [y[1], -math.sin(y[0])],
            (0.0, 3.0),
            [start.x1, start.x2],
            method="DOP853",
            rtol=1e-12,
            atol=1e-12,
        )
        end = orbit_state(family, 3.0)
        assert sol.y[0, -1] == pytest.approx(end.x1, abs=1e-9)
        assert sol.y[1, -1] == pytest.approx(end.x2, abs=1e-9)

    def test_rotating_angle_unwraps(self):
        mod = EllipticModulus.from_k(0.7)
        family = rotating_orbit(mod, +1)
        # one period advances the angle by a full turn
        a = orbit_state(family, 0.0)
        b = orbit_state(family, family.period)
        assert b.x1 - a.x1 == pytest.approx(2.0 * math.pi, abs=1e-10)
        assert b.x2 == pytest.approx(a.x2, abs=1e-10)

    def test_homoclinic_asymptotics(self):
        family = homoclinic_orbit(+1)
        far = orbit_state(family, 30.0)
        assert far.x1 == pytest.approx(math.pi, abs=1e-12)
        assert far.x2 == pytest.approx(0.0, abs=1e-12)
        top = orbit_state(family, 0.0)
        assert top.x1 == pytest.approx(0.0, abs=1e-14)
        assert top.x2 == pytest.approx(2.0)


class TestComplexOrbitValues:
    def test_matches_real_axis(self):
        mod = EllipticModulus.from_k(0.6)
        for family in (inner_orbit(mod), rotating_orbit(mod, +1), homoclinic_orbit(+1)):
            t = 0.9
            state = orbit_state(family, t)
            sin_x1, x2 = orbit_complex_values(family, complex(t, 0.0))
            assert complex(sin_x1) == pytest.approx(math.sin(state.x1), abs=1e-12)
            assert complex(x2) == pytest.approx(state.x2, abs=1e-12)

    def test_energy_identity_off_axis(self):
        # (x2^2)/2 + 1 - cos x1 stays equal to the orbit energy; compare
        # through sin^2 = (1-cos)(1+cos) to avoid the multivalued angle
        mod = EllipticModulus.from_k(0.6)
        family = inner_orbit(mod)
        t = complex(0.7, 0.4)
        sin_x1, x2 = orbit_complex_values(family, t)
        one_minus_cos = family.energy - 0.5 * x2**2
        assert abs(sin_x1**2 - one_minus_cos * (2.0 - one_minus_cos)) <= 1e-10


class TestHomoclinicLimitDistance:
    def test_decreases_toward_separatrix(self):
        ks = (0.9, 0.99, 0.999)
        dists = [
            homoclinic_limit_distance(inner_orbit(EllipticModulus.from_k(k)))
            for k in ks
        ]
        assert all(b < a for a, b in zip(dists, dists[1:]))
        assert dists[-1] < 0.1

    def test_small_orbit_far_from_separatrix(self):
        mod = EllipticModulus.from_k(0.01)
        d = homoclinic_limit_distance(inner_orbit(mod))
        assert d == pytest.approx(2.0, abs=0.05)

    def test_rejects_homoclinic_family(self):
        with pytest.raises(ValueError):
            homoclinic_limit_distance(homoclinic_orbit(+1))
