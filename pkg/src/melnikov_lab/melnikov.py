"""Resonances and Melnikov functions for the forced pendulum.

Subharmonic and homoclinic Melnikov functions are computed two ways: by
node-doubling trapezoid quadrature of the defining integrals (spectrally
accurate, the integrands being periodic or exponentially decaying), and
through the sech / elliptic-integral closed forms.  Every curve has the
shape const + coeff*cos(theta), so zeros, tangencies and the chaos
threshold are available in closed form as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .elliptic import EllipticModulus
from .pendulum import (
    INNER,
    ROTATING_MINUS,
    ROTATING_PLUS,
    ForcedSystem,
    OrbitFamily,
    orbit_state,
)

__all__ = [
    "NonConvergenceError",
    "Resonance",
    "MelnikovCurve",
    "MelnikovZero",
    "ZeroAnalysis",
    "ChaosVerdict",
    "solve_resonance",
    "subharmonic_quadrature",
    "closed_form_subharmonic",
    "homoclinic_quadrature",
    "closed_form_homoclinic",
    "simple_zeros",
    "chaos_condition",
    "enumerate_resonances",
    "homoclinic_limit_check",
]

_RESONANT_TAGS = (INNER, ROTATING_PLUS, ROTATING_MINUS)


class NonConvergenceError(RuntimeError):
    """Node-doubling quadrature failed to reach its tolerance."""


@dataclass(frozen=True)
class Resonance:
    """A resonant orbit: n unperturbed periods fit m forcing periods."""

    family_tag: str
    m: int
    n: int
    modulus: EllipticModulus
    omega: float

    def __post_init__(self):
        if self.family_tag not in _RESONANT_TAGS:
            raise ValueError(f"unsupported resonance family {self.family_tag!r}")
        if self.m < 1 or self.n < 1 or math.gcd(self.m, self.n) != 1:
            raise ValueError("m, n must be coprime positive integers")

    @property
    def orbit(self) -> OrbitFamily:
        return OrbitFamily(self.family_tag, self.modulus)

    @property
    def forcing_interval(self) -> float:
        return 2.0 * math.pi * self.m / self.omega

    def residual(self) -> float:
        """Residual of the defining resonance equation."""
        mod = self.modulus
        if self.family_tag == INNER:
            return mod.K - math.pi * self.m / (2.0 * self.n * self.omega)
        return mod.k * mod.K - math.pi * self.m / (self.n * self.omega)


def _bisect_k_prime(target_fn, target: float) -> EllipticModulus:
    # target_fn(mod) is strictly decreasing in k'; bisect on k'.
    lo, hi = 1e-300, 1.0 - 1e-16
    f_lo = target_fn(EllipticModulus.from_k_prime(lo)) - target
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = target_fn(EllipticModulus.from_k_prime(mid)) - target
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return EllipticModulus.from_k_prime(0.5 * (lo + hi))


def solve_resonance(family_tag: str, omega: float, m: int, n: int) -> Optional[Resonance]:
    """Solve the resonance condition for the modulus k.

    Inner orbits need K(k) = pi*m/(2*n*omega) which is solvable iff
    m/n > omega; returns None in that case (a valid outcome).  Rotating
    orbits need k*K(k) = pi*m/(n*omega), always solvable.
    """
    if family_tag not in _RESONANT_TAGS:
        raise ValueError(f"unsupported resonance family {family_tag!r}")
    if omega <= 0:
        raise ValueError("omega must be positive")
    if m < 1 or n < 1 or math.gcd(m, n) != 1:
        raise ValueError("m, n must be coprime positive integers")
    if family_tag == INNER:
        target = math.pi * m / (2.0 * n * omega)
        if target <= math.pi / 2.0:
            return None
        mod = _bisect_k_prime(lambda mm: mm.K, target)
    else:
        target = math.pi * m / (n * omega)
        # k*K(k) increases from 0 to inf as k' decreases from 1 to 0.
        mod = _bisect_k_prime(lambda mm: mm.k * mm.K, target)
    return Resonance(family_tag, m, n, mod, omega)


def _trapezoid_doubling(sample_mean, length, tol, n0=64, n_max=2**20):
    """length * mean(f) with node doubling until successive values agree."""
    n = n0
    prev = length * sample_mean(n)
    while n < n_max:
        n *= 2
        cur = length * sample_mean(n)
        if abs(cur - prev) <= tol * (1.0 + abs(cur)):
            return cur
        prev = cur
    raise NonConvergenceError(f"quadrature not converged at {n} nodes")


def _melnikov_integrand(sys: ForcedSystem, x2, t, theta):
    # DH . g = x2 * (beta*cos(omega t + theta) - delta*x2)
    return x2 * (sys.beta * np.cos(sys.omega * t + theta) - sys.delta * x2)


def subharmonic_quadrature(
    sys: ForcedSystem, r: Resonance, theta: float, tol: float = 1e-10
) -> float:
    """M^{m/n}(theta) by trapezoid quadrature over [0, 2*pi*m/omega].

    The integrand is periodic over the full interval at a resonance, so
    the composite trapezoid rule converges spectrally under doubling.
    """
    family = r.orbit
    length = r.forcing_interval

    def sample_mean(n):
        t = np.linspace(0.0, length, n, endpoint=False)
        x2 = orbit_state(family, t).x2
        return float(np.mean(_melnikov_integrand(sys, x2, t, theta)))

    return _trapezoid_doubling(sample_mean, length, tol)


@dataclass(frozen=True)
class MelnikovCurve:
    """theta |-> const_term + cos_coeff * cos(theta)."""

    const_term: float
    cos_coeff: float
    source: str = "closed_form"

    def evaluate(self, theta):
        return self.const_term + self.cos_coeff * np.cos(theta)


def closed_form_subharmonic(
    r: Resonance, beta: float, delta: float, j1_arg: str = "n"
) -> MelnikovCurve:
    """Closed-form subharmonic Melnikov curve at a resonance.

    Inner: -delta*16n(E - k'^2 K) + beta*4pi*sech(omega K') cos(theta),
    the cosine term present only for n = 1 and m odd.  Rotating:
    -delta*8nE/k +/- beta*2pi*sech(k omega K') cos(theta), cosine term
    only for n = 1.  j1_arg="m" substitutes m for n in the damping
    coefficient (audit hook for the alternative reading; quadrature
    confirms "n").
    """
    if j1_arg not in ("n", "m"):
        raise ValueError("j1_arg must be 'n' or 'm'")
    mod = r.modulus
    count = r.n if j1_arg == "n" else r.m
    if r.family_tag == INNER:
        j1 = 16.0 * count * (mod.E - mod.k_prime**2 * mod.K)
        if r.n == 1 and r.m % 2 == 1:
            j2 = 4.0 * math.pi / math.cosh(r.omega * mod.K_prime)
        else:
            j2 = 0.0
        return MelnikovCurve(-delta * j1, beta * j2)
    sign = -1.0 if r.family_tag == ROTATING_MINUS else 1.0
    j1 = 8.0 * count * mod.E / mod.k
    if r.n == 1:
        j2 = 2.0 * math.pi / math.cosh(mod.k * r.omega * mod.K_prime)
    else:
        j2 = 0.0
    return MelnikovCurve(-delta * j1, sign * beta * j2)


def homoclinic_quadrature(
    sys: ForcedSystem,
    sign: int,
    theta: float,
    tol: float = 1e-10,
    phase_convention: str = "omega-t",
) -> float:
    """M_+-(theta) by truncated trapezoid quadrature over the separatrix.

    The integrand decays like sech(t), so truncation at T leaves a tail
    below 1e-13; node doubling then drives the trapezoid error to tol.
    phase_convention="t" evaluates the forcing at t + theta instead of
    omega*t + theta (audit hook; the closed forms use omega*t + theta).
    """
    if phase_convention not in ("omega-t", "t"):
        raise ValueError("phase_convention must be 'omega-t' or 't'")
    rate = sys.omega if phase_convention == "omega-t" else 1.0
    s = 1.0 if sign >= 0 else -1.0
    half = 40.0 + 5.0 * math.log10(1.0 / tol)

    def sample_mean(n):
        t = np.linspace(-half, half, n + 1)
        x2 = s * 2.0 / np.cosh(t)
        f = x2 * (sys.beta * np.cos(rate * t + theta) - sys.delta * x2)
        w = np.ones(n + 1)
        w[0] = w[-1] = 0.5
        return float(np.sum(w * f) / n)

    return _trapezoid_doubling(sample_mean, 2.0 * half, tol, n0=512)


def closed_form_homoclinic(
    sign: int, beta: float, delta: float, omega: float
) -> MelnikovCurve:
    """M_+-(theta) = -8 delta +/- 2 pi beta sech(pi omega / 2) cos(theta)."""
    s = 1.0 if sign >= 0 else -1.0
    return MelnikovCurve(
        -8.0 * delta, s * 2.0 * math.pi * beta / math.cosh(0.5 * math.pi * omega)
    )


@dataclass(frozen=True)
class MelnikovZero:
    theta: float
    slope: float
    simple: bool


@dataclass(frozen=True)
class ZeroAnalysis:
    zeros: Tuple[MelnikovZero, ...]
    tangency: bool

    @property
    def has_simple_zero(self) -> bool:
        return any(z.simple for z in self.zeros)


def simple_zeros(
    curve: MelnikovCurve, slope_tol: float = 1e-10, tangency_tol: float = 1e-12
) -> ZeroAnalysis:
    """All zeros of the curve in [0, 2pi) with simplicity flags.

    Zeros exist iff |const_term| <= |cos_coeff|; at equality the single
    zero is a tangency (reported, flagged not simple) rather than
    dropped, so certificates can tell "no zero" from "degenerate zero".
    """
    c, a = curve.const_term, curve.cos_coeff
    scale = max(abs(c), abs(a), 1.0)
    if abs(a) <= tangency_tol * scale:
        return ZeroAnalysis((), tangency=False)
    if abs(abs(c) - abs(a)) <= tangency_tol * scale:
        theta0 = 0.0 if c * a < 0 else math.pi
        return ZeroAnalysis((MelnikovZero(theta0, 0.0, False),), tangency=True)
    if abs(c) > abs(a):
        return ZeroAnalysis((), tangency=False)
    theta0 = math.acos(-c / a)
    zeros = []
    for theta in (theta0, 2.0 * math.pi - theta0):
        slope = -a * math.sin(theta)
        zeros.append(MelnikovZero(theta, slope, abs(slope) > slope_tol))
    return ZeroAnalysis(tuple(zeros), tangency=False)


@dataclass(frozen=True)
class ChaosVerdict:
    holds: bool
    ratio: float
    threshold: float


def chaos_condition(beta: float, delta: float, omega: float) -> ChaosVerdict:
    """beta/delta > (4/pi) cosh(pi omega / 2), with the margin ratio."""
    threshold = (4.0 / math.pi) * math.cosh(0.5 * math.pi * omega)
    if delta == 0.0:
        ratio = math.inf if beta > 0 else 0.0
        return ChaosVerdict(beta > 0, ratio, threshold)
    ratio = (beta / delta) / threshold
    return ChaosVerdict(ratio > 1.0, ratio, threshold)


def enumerate_resonances(
    family_tag: str,
    omega: float,
    k_window: Tuple[float, float],
    m_max: int,
    n_max: int,
) -> List[Resonance]:
    """All coprime (m, n) resonances whose modulus lies in the window.

    Exhibits a finite sample of the key set; with n_max = 1 the inner
    moduli increase monotonically toward 1 with m.
    """
    k_lo, k_hi = k_window
    if not 0.0 < k_lo < k_hi < 1.0:
        raise ValueError("k window must satisfy 0 < k_lo < k_hi < 1")
    found = []
    for m in range(1, m_max + 1):
        for n in range(1, n_max + 1):
            if math.gcd(m, n) != 1:
                continue
            r = solve_resonance(family_tag, omega, m, n)
            if r is not None and k_lo <= r.modulus.k <= k_hi:
                found.append(r)
    found.sort(key=lambda r: r.modulus.k)
    return found


def homoclinic_limit_check(
    family_tag: str,
    omega: float,
    beta: float,
    delta: float,
    m_list,
    theta_grid,
) -> List[float]:
    """Sup-norm gaps between m/1 subharmonic curves and their limits.

    Inner curves converge to the homoclinic pair traversed half a forcing
    period apart, M_+(theta) + M_-(theta + pi) for odd m; rotating curves
    converge to M_+- directly.  The returned gaps decrease to 0 along an
    increasing m_list.
    """
    theta_grid = np.asarray(theta_grid, dtype=float)
    if family_tag == INNER:
        plus = closed_form_homoclinic(+1, beta, delta, omega)
        minus = closed_form_homoclinic(-1, beta, delta, omega)
        limit = MelnikovCurve(
            plus.const_term + minus.const_term, plus.cos_coeff - minus.cos_coeff
        )
    else:
        sign = -1 if family_tag == ROTATING_MINUS else +1
        limit = closed_form_homoclinic(sign, beta, delta, omega)
    gaps = []
    for m in m_list:
        r = solve_resonance(family_tag, omega, m, 1)
        if r is None:
            raise ValueError(f"resonance m={m}, n=1 unsolvable at omega={omega}")
        curve = closed_form_subharmonic(r, beta, delta)
        gap = np.max(np.abs(curve.evaluate(theta_grid) - limit.evaluate(theta_grid)))
        gaps.append(float(gap))
    return gaps
