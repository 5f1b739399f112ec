"""Verification suites run by ``hartogs verify``.

Each suite returns a list of check records (see :func:`hartogs.report.check`).
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import analysis, combinatorics, kernel, regularity
from .domain import DomainParams, Point, sample_arrays
from .report import check

# lemma1: sphere moments, estimate1: disk weights, estimate2: ball weights
SUITES = ("lemma1", "reproduce", "estimate1", "estimate2", "counts", "kernel", "interval")

_DISK_RADII = (0.0, 0.5, 0.9, 0.99)
_DISK_PARAMS = ((0.3, 0.0), (0.3, 1.0), (0.7, 0.0), (0.7, 1.0))
_BALL_DELTAS = (0.0, 0.5, 0.9)


def _sub_seed(seed: int, *tag: int) -> int:
    return int(np.random.SeedSequence([seed, *tag]).generate_state(1)[0])


def suite_counts(k, n, samples, seed, threads=None):
    out = []
    kk = max(k, 1)
    f_ok = all(
        combinatorics.count_f(l, kk) == sum(1 for j in itertools.product(range(kk), repeat=2) if sum(j) == l)
        for l in range(2 * kk + 1)
    )
    h_ok = all(
        combinatorics.count_h(l, kk) == sum(1 for j in itertools.product(range(kk), repeat=3) if sum(j) == l)
        for l in range(3 * kk + 1)
    )
    out.append(check(f"count_f brute force k={kk}", f_ok, f_ok, True, 0))
    out.append(check(f"count_h brute force k={kk}", h_ok, h_ok, True, 0))
    params = DomainParams(n, k)
    total = combinatorics.numerator_total(params)
    all_tuples = sum(
        combinatorics.bounded_compositions(combinatorics.CompositionSpec(s, n + 3, k))
        for s in range((n + 3) * (k - 1) + 1)
    )
    out.append(check("bounded compositions total mass", all_tuples == k ** (n + 3), all_tuples, k ** (n + 3), 0))
    out.append(check("numerator coefficient total", total <= k ** (n + 3), total, f"<= {k ** (n + 3)}", 0))
    if n == 2:
        agree = all(
            combinatorics.g_polynomial_n2_closed(l, k) == combinatorics.g_polynomial(l, params) * 2
            for l in range(4)
        )
        out.append(check("n=2 closed forms = 2 x g", agree, agree, True, 0))
    return out


def suite_kernel(k, n, samples, seed, threads=None):
    params = DomainParams(n, k)
    out = []
    pairs = kernel.contraction_safe_pairs(params, 20, seed)
    worst = 0.0
    herm = 0.0
    for p, q in pairs:
        c = kernel.kernel_closed(params, p, q).value
        s = kernel.kernel_series(params, p, q).value
        worst = max(worst, abs(c - s) / abs(c))
        herm = max(herm, abs(c - kernel.kernel_closed(params, q, p).value.conjugate()) / abs(c))
    out.append(check("closed vs series (max rel err)", worst <= 1e-8, worst, 0.0, 1e-8))
    out.append(check("hermitian symmetry (max rel err)", herm <= 1e-13, herm, 0.0, 1e-13))
    if k == 1 or n == 2:
        sp = max(
            abs(kernel.kernel_special(params, p, q).value - kernel.kernel_closed(params, p, q).value)
            / abs(kernel.kernel_closed(params, p, q).value)
            for p, q in pairs
        )
        tol = 1e-13 if k == 1 else 1e-12
        out.append(check("special-case vs closed (max rel err)", sp <= tol, sp, 0.0, tol))
    if k >= 2:
        rng = np.random.default_rng(_sub_seed(seed, 1))
        z1, w1 = sample_arrays(DomainParams(n, 1), 20, rng)
        zk, wk = sample_arrays(params, 20, rng)
        rel = 0.0
        for i in range(20):
            lhs, rhs = kernel.bell_identity_sides(k, n, Point(z1[i], w1[i]), Point(zk[i], wk[i]))
            rel = max(rel, abs(lhs - rhs) / abs(lhs))
        out.append(check("transformation rule residual (max rel)", rel <= 1e-10, rel, 0.0, 1e-10))
    return out


def suite_sphere_moments(k, n, samples, seed, threads=None):
    out = []
    for i, v in enumerate(itertools.product(range(3), repeat=n)):
        if sum(v) > 4:
            continue
        exact = analysis.sphere_moment(n, v)
        est = analysis.sphere_moment_mc(n, v, samples, _sub_seed(seed, 2, i))
        out.append(
            check(
                f"sphere moment n={n} v={v}",
                est.within(exact),
                est.value,
                exact,
                3 * est.std_error,
            )
        )
    return out


def reproduce_monomials(params: DomainParams):
    """Five bounded monomials ``(p, q)`` (bounded means ``|p| + k q >= 0``)."""
    n, k = params.n, params.k
    e1 = [1] + [0] * (n - 1)
    zero = [0] * n
    z1z_last = [1] + [0] * (n - 2) + [1] if n > 1 else [2]
    return [
        (zero, 0),
        (zero, 1),
        (e1, 0),
        (e1, -1) if k == 1 else (e1, 1),
        (z1z_last, 0),
    ]


def reproduce_eval_point(params: DomainParams) -> Point:
    n, k = params.n, params.k
    w = 0.55 * np.exp(0.7j)
    r = 0.6 * abs(w) ** (1 / k)
    z = np.full(n, r / math.sqrt(n), dtype=complex) * np.exp(1j * np.arange(1, n + 1) * 0.4)
    return Point(z, w)


def suite_reproduce(k, n, samples, seed, threads=None):
    params = DomainParams(n, k)
    x = reproduce_eval_point(params)
    out = []
    for i, (p, q) in enumerate(reproduce_monomials(params)):
        r = analysis.reproduce_check(params, p, q, x, samples, _sub_seed(seed, 3, i), threads=threads)
        out.append(
            check(
                f"reproduce z^{tuple(p)} w^{q}",
                r.within(3.0),
                r.estimate.value,
                r.truth,
                3 * r.estimate.std_error,
                rel_error=r.rel_error,
            )
        )
    return out


def suite_estimate1(k, n, samples, seed, threads=None):
    out = []
    sup = 0.0
    for i, ((eps, beta), z) in enumerate(itertools.product(_DISK_PARAMS, _DISK_RADII)):
        quad = analysis.disk_estimate_ratio(z, eps, beta, 0, 0, method="radial-quadrature")
        mc = analysis.disk_estimate_ratio(z, eps, beta, samples, _sub_seed(seed, 4, i))
        sup = max(sup, quad.ratio)
        tol = 3 * mc.ratio_error + 1e-9 * quad.ratio
        out.append(
            check(
                f"disk estimate eps={eps} beta={beta} |z|={z}",
                abs(mc.ratio - quad.ratio) <= tol,
                mc.ratio,
                quad.ratio,
                tol,
            )
        )
    out.append(check("disk estimate ratio sup", math.isfinite(sup), sup, None, None))
    return out


def suite_estimate2(k, n, samples, seed, threads=None):
    out = []
    eps = 0.6
    ratios = []
    for i, d in enumerate(_BALL_DELTAS):
        mc = analysis.ball_estimate_ratio(n, k, eps, d, samples, _sub_seed(seed, 5, i))
        series = analysis.ball_estimate_series(n, k, eps, d) / mc.reference
        ratios.append(series)
        # zero variance at the centre, hence the floor on the tolerance
        tol = 3 * mc.ratio_error + 1e-9 * series
        out.append(
            check(
                f"ball estimate n={n} k={k} eps={eps} |Delta|={d}",
                abs(mc.ratio - series) <= tol,
                mc.ratio,
                series,
                tol,
            )
        )
    c = analysis.ball_series_coefficients(n, k, eps, 201)
    m = np.arange(c.size, dtype=float)
    resc = c[1:] * m[1:] ** (1 - eps)
    drift = abs(resc[-1] / resc[-2] - 1)
    out.append(check("ball coefficient c_m m^(1-eps) flatness at m=200", drift <= 0.02, drift, 0.0, 0.02))
    out.append(
        check("ball ratio bracket", min(ratios) > 0 and math.isfinite(max(ratios)), [min(ratios), max(ratios)], None, None)
    )
    return out


def suite_interval(k, n, samples, seed, threads=None):
    iv = regularity.critical_interval(k, n)
    spec = regularity.test_function(k, n)
    cross = regularity.divergence_threshold(k, n, spec)
    out = [
        check("divergence crossing = upper endpoint", cross == iv.upper, cross, iv.upper, 0),
        check(
            "exponent interval from eps-range",
            regularity.schur_to_interval(k, n) == iv,
            [iv.lower, iv.upper],
            [iv.lower, iv.upper],
            0,
        ),
        check("conjugate endpoints", 1 / iv.lower + 1 / iv.upper == 1, 1 / iv.lower + 1 / iv.upper, 1, 0),
    ]
    return out


_RUNNERS = {
    "counts": suite_counts,
    "kernel": suite_kernel,
    "lemma1": suite_sphere_moments,
    "reproduce": suite_reproduce,
    "estimate1": suite_estimate1,
    "estimate2": suite_estimate2,
    "interval": suite_interval,
}


def run_suite(name: str, k: int, n: int, samples: int, seed: int, threads=None) -> list[dict]:
    names = SUITES if name == "all" else (name,)
    out = []
    for s in names:
        for rec in _RUNNERS[s](k, n, samples, seed, threads):
            rec["suite"] = s
            out.append(rec)
    return out

