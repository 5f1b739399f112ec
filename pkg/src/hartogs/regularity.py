"""L^p mapping interval of the Bergman projection.

Interval and threshold arithmetic is exact (``fractions.Fraction``); floating
point only appears inside integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .analysis import IntegralEstimate, mc_integrate, mc_mean, sphere_moment
from .domain import DomainParams, Point, boundary_distance_weight, contains
from .kernel import IndexPair, kernel_from_pairs, normalizing_constant
from .special import beta, gamma

__all__ = [
    "CriticalInterval",
    "critical_interval",
    "classify",
    "TestFunctionSpec",
    "test_function",
    "ProjectionEstimate",
    "project_test_function",
    "divergence_exponent",
    "divergence_threshold",
    "truncated_lp_norm",
    "epsilon_range",
    "schur_integrable",
    "SchurEstimate",
    "schur_ratio",
    "schur_to_interval",
]


@dataclass(frozen=True)
class CriticalInterval:
    """Open interval ``(lower, upper)`` of exponents."""

    lower: Fraction
    upper: Fraction

    def __contains__(self, p) -> bool:
        return self.lower < p < self.upper


def critical_interval(k: int, n: int) -> CriticalInterval:
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    return CriticalInterval(Fraction(2 * k + 2 * n, k + n + 1), Fraction(2 * k + 2 * n, k + n - 1))


def classify(k: int, n: int, p) -> str:
    return "bounded" if _exact(p) in critical_interval(k, n) else "unbounded"


def _exact(p):
    if isinstance(p, Rational):
        return Fraction(p)
    if isinstance(p, str):
        return Fraction(p)
    return p


@dataclass(frozen=True)
class TestFunctionSpec:
    """``f = z_1^m conj(w)^l``; its projection is ``C z_1^m / w^l``."""

    __test__ = False

    m: int
    l: int
    C: float


def test_function(k: int, n: int) -> TestFunctionSpec:
    """Smallest ``l >= 1`` with ``m = k(l-1) - n + 1 >= 0``.

    The constraint puts ``(m, -l)`` on the lattice with
    ``m + k(1 - l) = 1 - n``.
    """
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    l = 1
    while k * (l - 1) - n + 1 < 0:
        l += 1
    m = k * (l - 1) - n + 1
    N = normalizing_constant(DomainParams(n, k), IndexPair(m, -l))
    C = math.pi ** (n + 1) * math.factorial(m) * beta((m + n) / k, 2) / (k * N * gamma(n + m))
    return TestFunctionSpec(m, l, C)


test_function.__test__ = False


@dataclass(frozen=True)
class ProjectionEstimate:
    estimate: IntegralEstimate
    expected: complex
    inconclusive: bool

    def within(self, sigmas: float = 3.0) -> bool:
        return abs(self.estimate.value - self.expected) <= sigmas * self.estimate.std_error


def project_test_function(
    k: int,
    n: int,
    spec: TestFunctionSpec,
    eval_point: Point,
    mc_samples: int,
    seed: int,
    budget: float = 0.5,
    threads: int | None = None,
) -> ProjectionEstimate:
    """Monte Carlo of ``P f`` at ``eval_point`` next to the closed form ``C z_1^m / w^l``.

    Flagged inconclusive when the standard error exceeds ``budget`` times the
    larger of ``|expected|`` and the kernel scale at the point.
    """
    params = DomainParams(n, k)
    if not contains(params, eval_point):
        raise ValueError(f"{eval_point!r} is not inside the domain")
    zx, wx = eval_point.z, eval_point.w
    m, l = spec.m, spec.l

    def integrand(z, w):
        ker = kernel_from_pairs(params, wx * np.conj(w), np.conj(z) @ zx)
        return ker * z[:, 0] ** m * np.conj(w) ** l

    est = mc_integrate(params, integrand, mc_samples, seed, threads=threads)
    expected = spec.C * complex(zx[0]) ** m / wx**l
    scale = max(abs(expected), abs(wx) ** -l * spec.C)
    return ProjectionEstimate(est, expected, est.std_error > budget * scale)


def divergence_exponent(k: int, n: int, spec: TestFunctionSpec, p):
    """Radial exponent ``e(p) = -l p + (2n + m p)/k + 1`` of ``||P f||_p^p``.

    The norm is finite iff ``e(p) > -1``.  Exact for rational ``p``.
    """
    p = _exact(p)
    k_ = Fraction(k) if isinstance(p, Fraction) else float(k)
    return -spec.l * p + (2 * n + spec.m * p) / k_ + 1


def divergence_threshold(k: int, n: int, spec: TestFunctionSpec) -> Fraction:
    """The ``p`` where ``e(p) = -1``, i.e. ``(2k + 2n)/(k l - m)``."""
    return Fraction(2 * k + 2 * n, k * spec.l - spec.m)


def truncated_lp_norm(k: int, n: int, spec: TestFunctionSpec, p: float, delta: float) -> float:
    """``int_{|w| > delta} |P f|^p dV`` in closed form.

    ``C^p / (2n + m p) * int_S |xi_1|^(m p) dsigma * 2 pi * int_delta^1 r^e(p) dr``.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    p_f = float(p)
    e = divergence_exponent(k, n, spec, p)
    angular = sphere_moment(n, [spec.m * p_f / 2] + [0] * (n - 1))
    if e == -1:
        radial = -math.log(delta)
    else:
        e = float(e)
        radial = (1 - delta ** (e + 1)) / (e + 1)
    return spec.C**p_f / (2 * n + spec.m * p_f) * angular * 2 * math.pi * radial


def epsilon_range(k: int, n: int) -> tuple[Fraction, Fraction]:
    """``[(k+n-1)/(2k), (k+n+1)/(2k))``."""
    return Fraction(k + n - 1, 2 * k), Fraction(k + n + 1, 2 * k)


def schur_integrable(k: int, n: int, eps) -> bool:
    """Whether ``int |B(x, .)| h^-eps dV`` is finite.

    Near either boundary face ``h^-eps`` is integrable only for ``eps < 1``;
    near ``w = 0`` the kernel grows like ``|w|^(-1-(n-1)/k)`` which caps ``eps``
    below ``(k+n+1)/(2k)``.
    """
    return 0 < eps < 1 and eps < Fraction(k + n + 1, 2 * k)


@dataclass(frozen=True)
class SchurEstimate:
    value: float
    std_error: float
    samples: int
    divergent: bool
    h_eval: float

    @property
    def finite(self) -> bool:
        return not self.divergent and math.isfinite(self.value)


def schur_ratio(
    k: int,
    n: int,
    eps,
    eval_point: Point,
    mc_samples: int,
    seed: int,
    strict: bool = True,
    threads: int | None = None,
) -> SchurEstimate:
    """``int |B(x, y)| h(y)^-eps dV(y) / h(x)^-eps`` by importance sampling.

    Samples come from the density proportional to ``h^-eps |w|^-g`` with
    ``g = (n+k-1)/k``: ``|w|^2`` and ``|z|^(2k)/|w|^2`` are independent Beta
    variables.  That choice keeps the estimator's variance finite on the whole
    integrable range.  When the integral diverges the estimate is ``inf`` and
    ``divergent`` is set.
    """
    lo, hi = epsilon_range(k, n)
    if strict and not lo <= eps < hi:
        raise ValueError(f"eps={eps} outside [{lo}, {hi})")
    if not eps > 0:
        raise ValueError("eps must be positive")
    params = DomainParams(n, k)
    h_x = boundary_distance_weight(params, eval_point)
    if not schur_integrable(k, n, eps):
        return SchurEstimate(math.inf, math.inf, 0, True, h_x)

    eps = float(eps)
    g = (n + k - 1) / k
    a_outer = n / k + 1 - eps - g / 2
    norm = (
        math.pi ** (n + 1)
        * beta(n / k, 1 - eps)
        * beta(a_outer, 1 - eps)
        / (k * gamma(n))
    )
    zx, wx = eval_point.z, eval_point.w

    def draw(rng, size):
        u = rng.beta(a_outer, 1 - eps, size)
        v = rng.beta(n / k, 1 - eps, size)
        t = np.sqrt(u) * np.exp(2j * np.pi * rng.random(size))
        d = rng.standard_normal((size, 2 * n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        s = (d[:, :n] + 1j * d[:, n:]) * ((v * u) ** (1 / (2 * k)))[:, None]
        ker = kernel_from_pairs(params, wx * np.conj(t), np.conj(s) @ zx)
        return np.abs(ker) * np.abs(t) ** g

    mean, se = mc_mean(draw, mc_samples, seed, threads=threads)
    scale = norm * h_x**eps
    return SchurEstimate(float(mean.real) * scale, se * scale, mc_samples, False, h_x)


def schur_to_interval(k: int, n: int) -> CriticalInterval:
    """Exponent interval ``((a+b)/b, (a+b)/a)`` from the eps-range ``[a, b)``.

    Raises if it differs from :func:`critical_interval`.
    """
    a, b = epsilon_range(k, n)
    out = CriticalInterval((a + b) / b, (a + b) / a)
    if out != critical_interval(k, n):
        raise ArithmeticError(f"interval mismatch for k={k}, n={n}: {out}")
    return out
