"""Stroboscopic-map verification of Melnikov predictions.

Integrates the fully forced pendulum with an adaptive high-order
Runge-Kutta scheme, builds the period-2*pi*m/omega stroboscopic map, and
runs Newton on its fixed-point equation to confirm that simple zeros of
the subharmonic Melnikov function mark persisting periodic orbits at
O(epsilon) distance from the unperturbed resonant orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from .melnikov import Resonance
from .pendulum import ForcedSystem, OrbitPoint, orbit_state, wrap_angle

__all__ = [
    "IntegrationFailure",
    "IntegratorConfig",
    "FixedPointResult",
    "stroboscopic_map",
    "find_subharmonic",
    "scaling_band",
    "homoclinic_tangle_probe",
]


class IntegrationFailure(RuntimeError):
    """The adaptive integrator failed (step-size collapse or similar)."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive embedded Runge-Kutta settings (order >= 5 contract)."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_step: float = math.inf
    method: str = "DOP853"

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class FixedPointResult:
    point: OrbitPoint
    phase: float
    residual: float
    distance_to_unperturbed: float
    converged: bool
    floquet_multipliers: Optional[Tuple[complex, complex]] = None


def _flow(
    sys: ForcedSystem,
    eps: float,
    state,
    duration: float,
    theta_section: float,
    config: IntegratorConfig,
):
    def rhs(t, y):
        x1, x2 = y
        forcing = eps * (
            sys.beta * math.cos(sys.omega * t + theta_section) - sys.delta * x2
        )
        return [x2, -math.sin(x1) + forcing]

    sol = solve_ivp(
        rhs,
        (0.0, duration),
        np.asarray(state, dtype=float),
        method=config.method,
        rtol=config.rel_tol,
        atol=config.abs_tol,
        max_step=config.max_step,
        dense_output=False,
    )
    if not sol.success:
        raise IntegrationFailure(sol.message)
    return sol.y[:, -1]


def stroboscopic_map(
    sys: ForcedSystem,
    eps: float,
    m: int,
    start: OrbitPoint,
    theta_section: float = 0.0,
    config: IntegratorConfig = IntegratorConfig(),
) -> OrbitPoint:
    """State after m forcing periods, starting at section phase theta.

    The returned angle is unwrapped (winding retained); wrap_angle gives
    the mod-2pi representative for reporting.
    """
    duration = 2.0 * math.pi * m / sys.omega
    final = _flow(sys, eps, (start.x1, start.x2), duration, theta_section, config)
    return OrbitPoint(float(final[0]), float(final[1]))


def _map_residual(sys, eps, m, z, theta_section, config):
    out = _flow(sys, eps, z, 2.0 * math.pi * m / sys.omega, theta_section, config)
    return out - z


def _distance_to_orbit(z, r: Resonance, n_sample: int = 1024) -> float:
    from scipy.optimize import minimize_scalar

    period = r.orbit.period

    def dist(t):
        state = orbit_state(r.orbit, t)
        return np.hypot(wrap_angle(z[0] - state.x1), z[1] - state.x2)

    t = np.linspace(0.0, period, n_sample, endpoint=False)
    coarse = dist(t)
    i = int(np.argmin(coarse))
    h = period / n_sample
    # refine below the coarse-grid resolution; distances are O(eps)
    res = minimize_scalar(
        lambda tt: float(dist(tt)),
        bracket=None,
        bounds=(t[i] - h, t[i] + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(min(res.fun, coarse[i]))


def find_subharmonic(
    sys: ForcedSystem,
    eps: float,
    r: Resonance,
    theta0: float,
    config: IntegratorConfig = IntegratorConfig(),
    n_seeds: int = 32,
    newton_max: int = 25,
    residual_tol: float = 1e-10,
) -> FixedPointResult:
    """Newton on the stroboscopic fixed-point equation near a resonance.

    Seeds on a phase grid along the unperturbed orbit (the Melnikov
    theory predicts location only up to the phase matching theta0), keeps
    the best seeds, and reports the converged fixed point together with
    its distance to the unperturbed orbit for the epsilon-scaling check.
    """
    seeds_t = np.linspace(0.0, r.orbit.period, n_seeds, endpoint=False)
    seeds = []
    for t in seeds_t:
        p = orbit_state(r.orbit, t)
        seeds.append(np.array([p.x1, p.x2]))
    scored = sorted(
        seeds,
        key=lambda z: float(
            np.linalg.norm(_map_residual(sys, eps, r.m, z, theta0, config))
        ),
    )

    best: Optional[FixedPointResult] = None
    for z0 in scored[:3]:
        z = z0.copy()
        jac = None
        converged = False
        for _ in range(newton_max):
            f = _map_residual(sys, eps, r.m, z, theta0, config)
            if np.linalg.norm(f) <= residual_tol:
                converged = True
                break
            jac = np.zeros((2, 2))
            h = 1e-6 * (1.0 + np.linalg.norm(z))
            for j in range(2):
                dz = np.zeros(2)
                dz[j] = h
                fp = _map_residual(sys, eps, r.m, z + dz, theta0, config)
                fm = _map_residual(sys, eps, r.m, z - dz, theta0, config)
                jac[:, j] = (fp - fm) / (2.0 * h)
            try:
                step = np.linalg.solve(jac, f)
            except np.linalg.LinAlgError:
                break
            if np.linalg.norm(step) > 2.0:
                break  # diverging away from the seed neighborhood
            z = z - step
        residual = float(np.linalg.norm(_map_residual(sys, eps, r.m, z, theta0, config)))
        multipliers = None
        if jac is not None:
            multipliers = tuple(np.linalg.eigvals(jac + np.eye(2)))
        result = FixedPointResult(
            point=OrbitPoint(float(z[0]), float(z[1])),
            phase=theta0,
            residual=residual,
            distance_to_unperturbed=_distance_to_orbit(z, r),
            converged=converged and residual <= residual_tol,
            floquet_multipliers=multipliers,
        )
        if result.converged:
            if best is None or result.distance_to_unperturbed < best.distance_to_unperturbed:
                best = result
        elif best is None:
            best = result
    return best


def scaling_band(eps_list, distances, band: float = 2.0) -> Tuple[bool, List[float]]:
    """First-order persistence check: distance/eps within a factor band."""
    ratios = [d / e for d, e in zip(distances, eps_list)]
    positive = [r for r in ratios if r > 0]
    if not positive:
        return True, ratios
    ok = max(positive) / min(positive) <= band
    return ok, ratios


def homoclinic_tangle_probe(
    sys: ForcedSystem,
    eps: float,
    horizon: float = 16.0,
    n_fan: int = 8,
    d0: float = 1e-8,
    renorm_step: float = 0.5,
    config: IntegratorConfig = IntegratorConfig(abs_tol=1e-10, rel_tol=1e-10),
) -> dict:
    """Finite-time separation exponents along the separatrix.

    Benettin-style: pairs of trajectories launched from a fan of points
    on the unperturbed separatrix, renormalized every renorm_step, and
    the averaged log separation rate reported.  Larger statistics in the
    chaos regime corroborate (not prove) the Melnikov threshold.
    """
    from .pendulum import homoclinic_orbit

    orbit = homoclinic_orbit(+1)
    starts = np.linspace(-3.0, 3.0, n_fan)
    exponents = []
    n_steps = int(round(horizon / renorm_step))
    for s in starts:
        p = orbit_state(orbit, float(s))
        z = np.array([p.x1, p.x2])
        w = z + np.array([0.0, d0])
        log_sum = 0.0
        t_elapsed = 0.0
        for i in range(n_steps):
            phase = sys.omega * t_elapsed
            z = _flow(sys, eps, z, renorm_step, phase, config)
            w = _flow(sys, eps, w, renorm_step, phase, config)
            t_elapsed += renorm_step
            sep = np.array([wrap_angle(w[0] - z[0]), w[1] - z[1]])
            d = float(np.linalg.norm(sep))
            if d == 0.0:
                d = d0
            log_sum += math.log(d / d0)
            w = z + sep * (d0 / d)
        exponents.append(log_sum / horizon)
    exponents = np.asarray(exponents)
    return {
        "exponents": exponents.tolist(),
        "max": float(np.max(exponents)),
        "mean": float(np.mean(exponents)),
    }
