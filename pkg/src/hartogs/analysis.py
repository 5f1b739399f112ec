"""Integration engine and analytic checks.

Monte Carlo runs in shards; every shard gets its own generator spawned from
the caller's seed, so a result depends only on ``(seed, samples, shards)``
and never on the thread count.  Shard statistics are merged with the
pairwise mean/M2 update.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _integrate
from scipy.special import gammaln

from .domain import DomainParams, Point, contains, sample_arrays, spawn_generators, volume
from .kernel import kernel_from_pairs
from .special import beta as beta_fn
from .special import gamma

__all__ = [
    "IntegralEstimate",
    "default_threads",
    "mc_mean",
    "mc_integrate",
    "sphere_moment",
    "sphere_moment_mc",
    "monomial_l2_norm",
    "monomial_values",
    "ReproduceResult",
    "reproduce_check",
    "inner_product_mc",
    "EstimateRatio",
    "disk_estimate_integral",
    "disk_estimate_ratio",
    "ball_series_coefficients",
    "ball_estimate_series",
    "ball_estimate_ratio",
]

DEFAULT_SHARDS = 8
_CHUNK = 1 << 17
THREADS_ENV = "HARTOGS_THREADS"


@dataclass(frozen=True)
class IntegralEstimate:
    value: complex | float
    std_error: float
    samples: int
    method: str  # "monte-carlo", "radial-quadrature" or "exact-moment"
    seed: int | None = None

    def within(self, target, sigmas: float = 3.0) -> bool:
        return abs(self.value - target) <= sigmas * self.std_error


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _shard_stats(draw, rng, size):
    count, mean, m2 = 0, 0j, 0.0
    left = size
    while left > 0:
        c = min(_CHUNK, left)
        vals = np.asarray(draw(rng, c))
        cm = vals.mean()
        cm2 = float(np.sum(np.abs(vals - cm) ** 2))
        tot = count + c
        delta = cm - mean
        mean = mean + delta * c / tot
        m2 = m2 + cm2 + abs(delta) ** 2 * count * c / tot
        count = tot
        left -= c
    return count, mean, m2


def mc_mean(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    samples: int,
    seed: int,
    shards: int = DEFAULT_SHARDS,
    threads: int | None = None,
) -> tuple[complex, float]:
    """Mean of ``draw`` values over ``samples`` draws and its standard error.

    ``draw(rng, size)`` must return ``size`` i.i.d. values.
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    shards = max(1, min(shards, samples // 2))
    rngs = spawn_generators(seed, shards)
    sizes = [samples // shards + (i < samples % shards) for i in range(shards)]
    threads = threads or default_threads()
    if threads > 1 and shards > 1:
        with ThreadPoolExecutor(max_workers=min(threads, shards)) as pool:
            stats = list(pool.map(_shard_stats, [draw] * shards, rngs, sizes))
    else:
        stats = [_shard_stats(draw, r, s) for r, s in zip(rngs, sizes)]
    count, mean, m2 = 0, 0j, 0.0
    for c, cm, cm2 in stats:
        tot = count + c
        delta = cm - mean
        mean = mean + delta * c / tot
        m2 = m2 + cm2 + abs(delta) ** 2 * count * c / tot
        count = tot
    var = m2 / (count - 1)
    return mean, math.sqrt(var / count)


def mc_integrate(
    params: DomainParams,
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    samples: int,
    seed: int,
    shards: int = DEFAULT_SHARDS,
    threads: int | None = None,
) -> IntegralEstimate:
    """Plain Monte Carlo of ``integrand(Z, W)`` against Lebesgue measure on the domain."""
    vol = volume(params)

    def draw(rng, size):
        z, w = sample_arrays(params, size, rng)
        return integrand(z, w)

    mean, se = mc_mean(draw, samples, seed, shards, threads)
    return IntegralEstimate(vol * mean, vol * se, samples, "monte-carlo", seed)


def sphere_moment(n: int, v: Sequence[float]) -> float:
    """``int_{S^{2n-1}} prod |zeta_i|^(2 v_i) dsigma = 2 v! pi^n / Γ(n + |v|)``.

    ``v`` may hold real exponents (``v! = prod Γ(v_i + 1)``).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    v = list(v) if len(v) else [0] * n
    if len(v) != n:
        raise ValueError(f"multi-index length {len(v)} does not match n={n}")
    if any(x < 0 for x in v):
        raise ValueError("exponents must be nonnegative")
    logfac = sum(math.lgamma(x + 1) for x in v)
    return 2 * math.pi**n * math.exp(logfac - math.lgamma(n + sum(v)))


def _sphere_points(rng, count, n):
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, :n] + 1j * g[:, n:]


def sphere_moment_mc(n: int, v: Sequence[int], samples: int, seed: int) -> IntegralEstimate:
    area = 2 * math.pi**n / gamma(n)
    v = np.asarray(v, dtype=float)

    def draw(rng, size):
        xi = _sphere_points(rng, size, n)
        return np.prod(np.abs(xi) ** (2 * v), axis=1)

    mean, se = mc_mean(draw, samples, seed)
    return IntegralEstimate(area * mean.real, area * se, samples, "monte-carlo", seed)


def monomial_l2_norm(params: DomainParams, p: Sequence[int], q: int) -> float:
    """``int |z^p|^2 |w^q|^2 dV`` by radial reduction; ``math.inf`` off the lattice.

    The ``z``-fiber over ``w`` is the ball of radius ``|w|^(1/k)``, the angular
    part is a sphere moment, and the rest is a one-dimensional power integral.
    """
    n, k = params.n, params.k
    p = list(p)
    if len(p) != n:
        raise ValueError(f"multi-index length {len(p)} does not match n={n}")
    deg = sum(p)
    if deg + k * (q + 1) + n <= 0:
        return math.inf
    radial_z = 1.0 / (2 * (deg + n))
    # int_{|w|<1} |w|^(2q + 2(deg+n)/k) dV(w)
    radial_w = math.pi * k / (k * (q + 1) + deg + n)
    return sphere_moment(n, p) * radial_z * radial_w


def monomial_values(z: np.ndarray, w: np.ndarray, p: Sequence[int], q: int) -> np.ndarray:
    out = np.power(w, q) if q >= 0 else 1.0 / np.power(w, -q)
    for i, e in enumerate(p):
        if e:
            out = out * z[:, i] ** e
    return out


@dataclass(frozen=True)
class ReproduceResult:
    estimate: IntegralEstimate
    truth: complex

    @property
    def abs_error(self) -> float:
        return abs(self.estimate.value - self.truth)

    @property
    def rel_error(self) -> float:
        return self.abs_error / abs(self.truth) if self.truth != 0 else self.abs_error

    def within(self, sigmas: float = 3.0) -> bool:
        return self.abs_error <= sigmas * self.estimate.std_error


def _kernel_row(params: DomainParams, x: Point):
    """``y -> B(x, y)`` as a function of sample arrays."""
    zx, wx = x.z, x.w

    def row(z, w):
        a = wx * np.conj(w)
        b = np.conj(z) @ zx
        return kernel_from_pairs(params, a, b)

    return row


def reproduce_check(
    params: DomainParams,
    p: Sequence[int],
    q: int,
    eval_point: Point,
    mc_samples: int,
    seed: int,
    shards: int = DEFAULT_SHARDS,
    threads: int | None = None,
) -> ReproduceResult:
    """Monte Carlo of ``int B(x, y) y^(p,q) dV(y)`` against the monomial at ``x``."""
    if math.isinf(monomial_l2_norm(params, p, q)):
        raise ValueError(f"monomial z^{tuple(p)} w^{q} is not square integrable")
    if not contains(params, eval_point):
        raise ValueError(f"{eval_point!r} is not inside the domain")
    row = _kernel_row(params, eval_point)
    est = mc_integrate(
        params, lambda z, w: row(z, w) * monomial_values(z, w, p, q), mc_samples, seed, shards, threads
    )
    truth = complex(monomial_values(eval_point.z[None, :], np.array([eval_point.w]), p, q)[0])
    return ReproduceResult(est, truth)


def inner_product_mc(params, p, q, p2, q2, samples, seed) -> IntegralEstimate:
    """Monte Carlo ``<z^p w^q, z^p2 w^q2>``."""
    return mc_integrate(
        params,
        lambda z, w: monomial_values(z, w, p, q) * np.conj(monomial_values(z, w, p2, q2)),
        samples,
        seed,
    )


@dataclass(frozen=True)
class EstimateRatio:
    """An integral, the reference weight it is compared to, and their ratio."""

    integral: IntegralEstimate
    reference: float

    @property
    def ratio(self) -> float:
        return float(np.real(self.integral.value)) / self.reference

    @property
    def ratio_error(self) -> float:
        return self.integral.std_error / self.reference


def _check_eps(eps):
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def disk_estimate_integral(z: complex, eps: float, beta: float) -> IntegralEstimate:
    """``int_D (1-|w|^2)^-eps |1 - z conj(w)|^-2 |w|^-beta dV`` by radial quadrature.

    The angular mean of ``|1 - z r e^{-i t}|^-2`` is ``1/(1 - |z|^2 r^2)``;
    with ``v = r^2`` the rest is a 1-D integral with algebraic end weights.
    """
    _check_disk(z, eps, beta)
    z2 = abs(z) ** 2
    val, err = _integrate.quad(
        lambda v: 1.0 / (1.0 - z2 * v),
        0.0,
        1.0,
        weight="alg",
        wvar=(-beta / 2, -eps),
        limit=200,
        epsabs=0,
        epsrel=1e-12,
    )
    return IntegralEstimate(math.pi * val, math.pi * err, 0, "radial-quadrature")


def _check_disk(z, eps, beta):
    if not abs(z) < 1:
        raise ValueError("z must lie in the unit disk")
    _check_eps(eps)
    if not beta < 2:
        raise ValueError(f"beta must be < 2, got {beta}")


def disk_estimate_ratio(
    z: complex,
    eps: float,
    beta: float,
    mc_samples: int,
    seed: int,
    method: str = "monte-carlo",
) -> EstimateRatio:
    """``I(z) / (1 - |z|^2)^-eps`` for the disk estimate.

    The Monte Carlo route samples ``w`` from the density proportional to
    ``(1-|w|^2)^-eps |w|^-beta`` (``|w|^2`` is Beta distributed), leaving only
    the bounded factor ``|1 - z conj(w)|^-2`` to average.
    """
    _check_disk(z, eps, beta)
    ref = (1 - abs(z) ** 2) ** (-eps)
    if method == "radial-quadrature":
        return EstimateRatio(disk_estimate_integral(z, eps, beta), ref)
    if method != "monte-carlo":
        raise ValueError(f"unknown method {method!r}")
    norm = math.pi * beta_fn(1 - beta / 2, 1 - eps)

    def draw(rng, size):
        r = np.sqrt(rng.beta(1 - beta / 2, 1 - eps, size))
        w = r * np.exp(2j * np.pi * rng.random(size))
        return np.abs(1 - z * np.conj(w)) ** -2.0

    mean, se = mc_mean(draw, mc_samples, seed)
    est = IntegralEstimate(norm * mean.real, norm * se, mc_samples, "monte-carlo", seed)
    return EstimateRatio(est, ref)


def _ball_log_coeffs(n, k, eps, m):
    m = np.asarray(m, dtype=float)
    h = (n + 1) / 2
    return (
        math.lgamma(1 - eps)
        + n * math.log(math.pi)
        - math.log(k)
        - 2 * math.lgamma(h)
        + 2 * (gammaln(m + h) - gammaln(m + 1))
        + gammaln(n / k + m)
        - gammaln(n / k + m + 1 - eps)
        + gammaln(k * m + 1)
        - gammaln(k * m + n)
    )


def ball_series_coefficients(n: int, k: int, eps: float, m_max: int) -> np.ndarray:
    """Coefficients ``c_0 .. c_{m_max}`` of the ball integral in powers of ``|Δ|^(2k)``."""
    _check_eps(eps)
    return np.exp(_ball_log_coeffs(n, k, eps, np.arange(m_max + 1)))


def ball_estimate_series(n: int, k: int, eps: float, delta_modulus: float) -> float:
    """Series value of ``int_{D_n} (1-|eta|^(2k))^-eps |1-(eta.conj(Δ))^k|^-(n+1) dV``."""
    _check_eps(eps)
    if not 0 <= delta_modulus < 1:
        raise ValueError("|Δ| must lie in [0, 1)")
    if delta_modulus == 0:
        return float(ball_series_coefficients(n, k, eps, 0)[0])
    x = 2 * k * math.log(delta_modulus)
    total, start, block = 0.0, 0, 4096
    while True:
        m = np.arange(start, start + block)
        terms = np.exp(_ball_log_coeffs(n, k, eps, m) + m * x)
        total += float(terms.sum())
        if terms[-1] < 1e-18 * total:
            return total
        start += block


def ball_estimate_ratio(
    n: int,
    k: int,
    eps: float,
    delta_modulus: float,
    mc_samples: int,
    seed: int,
) -> EstimateRatio:
    """Monte Carlo ball integral divided by ``(1 - |Δ|^(2k))^-eps``.

    By unitary invariance ``Δ`` is taken along the first axis.  Points are drawn
    from the density proportional to ``(1-|eta|^(2k))^-eps`` (``|eta|^(2k)`` is
    Beta(n/k, 1-eps), direction uniform), so only the bounded factor
    ``|1 - (|Δ| eta_1)^k|^-(n+1)`` is averaged.
    """
    _check_eps(eps)
    if not 0 <= delta_modulus < 1:
        raise ValueError("|Δ| must lie in [0, 1)")
    norm = math.pi**n * beta_fn(n / k, 1 - eps) / (k * gamma(n))

    def draw(rng, size):
        rho = rng.beta(n / k, 1 - eps, size) ** (1.0 / (2 * k))
        eta1 = rho * _sphere_points(rng, size, n)[:, 0]
        return np.abs(1 - (delta_modulus * eta1) ** k) ** (-(n + 1.0))

    mean, se = mc_mean(draw, mc_samples, seed)
    est = IntegralEstimate(norm * mean.real, norm * se, mc_samples, "monte-carlo", seed)
    return EstimateRatio(est, (1 - delta_modulus ** (2 * k)) ** (-eps))
