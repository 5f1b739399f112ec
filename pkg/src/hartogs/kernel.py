"""Bergman kernel of the generalized Hartogs triangle.

Everything depends on the two pairings ``a = w conj(t)`` and
``b = z . conj(s)``.  Four evaluation routes are provided:

* :func:`kernel_closed` -- the rational closed form, numerator
  ``n! * sum_l g_l(b) a^l`` over ``pi^(n+1) k (1-a)^2 (a - b^k)^(n+1)``;
* :func:`kernel_k1` -- the ``k = 1`` formula ``n! a / (pi^(n+1) (1-a)^2 (a-b)^(n+1))``;
* :func:`kernel_n2_closed` -- the explicit ``n = 2`` polynomials;
* :func:`kernel_series` -- the truncated monomial expansion
  ``sum b^p1 a^q / N(p1, q)`` over the lattice ``p1 + k(q+1) > -n``.

The closed form has a single power of ``k`` in the denominator.  Summing the
``k`` branch contributions in the transformation-rule derivation produces a
factor ``k`` which cancels one of the two ``1/k`` Jacobian factors; writing
``k^2`` there instead is off from the series by exactly ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .combinatorics import g_polynomial_n2_closed, g_polynomials
from .domain import DomainParams, Point, contains, pair, sample_arrays

__all__ = [
    "IndexPair",
    "KernelValue",
    "SingularityError",
    "SINGULARITY_FLOOR",
    "in_lattice",
    "normalizing_constant",
    "kernel_from_pairs",
    "kernel_k1_from_pairs",
    "kernel_n2_from_pairs",
    "kernel_closed",
    "kernel_k1",
    "kernel_n2_closed",
    "kernel_special",
    "kernel_series",
    "series_from_pairs",
    "bell_identity_sides",
    "bell_identity_residual",
    "pointwise_bound_ratio",
    "principal_root",
    "contraction_ratio",
    "contraction_safe_pairs",
]

SINGULARITY_FLOOR = 1e-9


class SingularityError(ValueError):
    """Raised when a closed-form denominator is too close to zero."""

    def __init__(self, one_minus_a: float, a_minus_bk: float, floor: float):
        self.one_minus_a = one_minus_a
        self.a_minus_bk = a_minus_bk
        self.floor = floor
        super().__init__(
            f"near-singular kernel evaluation: |1-a|={one_minus_a:.3e}, "
            f"|a-b^k|={a_minus_bk:.3e} (floor {floor:.1e})"
        )


@dataclass(frozen=True)
class IndexPair:
    p1: int
    q: int


def in_lattice(params: DomainParams, idx: IndexPair) -> bool:
    return idx.p1 >= 0 and idx.p1 + params.k * (idx.q + 1) > -params.n


@dataclass(frozen=True)
class KernelValue:
    value: complex
    method: str  # "closed", "series" or "special-case"
    est_error: float = 0.0


def _gamma_quot(p1: int, n: int) -> float:
    """``Γ(p1+1) / Γ(p1+n)`` without overflow."""
    if p1 + n < 170:
        return math.gamma(p1 + 1) / math.gamma(p1 + n)
    return math.exp(math.lgamma(p1 + 1) - math.lgamma(p1 + n))


def normalizing_constant(params: DomainParams, idx: IndexPair) -> float:
    """Squared L2 norm of ``z_1^p1 w^q`` on the domain.

    ``pi^(n+1) k Γ(p1+1) / ((p1+n) Γ(p1+n) (k(q+1)+p1+n))``, finite exactly on
    the lattice.
    """
    if not in_lattice(params, idx):
        raise ValueError(f"{idx} is outside the lattice for {params}: the norm diverges")
    n, k = params.n, params.k
    p1, q = idx.p1, idx.q
    return math.pi ** (n + 1) * k * _gamma_quot(p1, n) / ((p1 + n) * (k * (q + 1) + p1 + n))


@lru_cache(maxsize=None)
def _numerator_table(n: int, k: int) -> tuple[np.ndarray, ...]:
    # per power of a: coefficients in b, highest degree first (np.polyval order)
    out = []
    for g in g_polynomials(DomainParams(n, k)):
        arr = np.array([float(c) for c in reversed(g.coeffs)] or [0.0])
        arr.flags.writeable = False
        out.append(arr)
    return tuple(out)


@lru_cache(maxsize=None)
def _n2_table(k: int) -> tuple[np.ndarray, ...]:
    out = []
    for l in range(4):
        g = g_polynomial_n2_closed(l, k)
        arr = np.array([float(c) for c in reversed(g.coeffs)] or [0.0])
        arr.flags.writeable = False
        out.append(arr)
    return tuple(out)


def _horner_in_a(table, a, b):
    acc = np.zeros(np.broadcast(a, b).shape, dtype=complex)
    for coeffs in reversed(table):
        acc = acc * a + np.polyval(coeffs, b)
    return acc


def kernel_from_pairs(params: DomainParams, a, b):
    """Closed-form kernel as a function of the pairings (vectorized, unchecked)."""
    n, k = params.n, params.k
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    num = math.factorial(n) * _horner_in_a(_numerator_table(n, k), a, b)
    den = math.pi ** (n + 1) * k * (1 - a) ** 2 * (a - b**k) ** (n + 1)
    return num / den


def kernel_k1_from_pairs(n: int, a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return math.factorial(n) * a / (math.pi ** (n + 1) * (1 - a) ** 2 * (a - b) ** (n + 1))


def kernel_n2_from_pairs(k: int, a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    num = _horner_in_a(_n2_table(k), a, b)
    return num / (math.pi**3 * k * (1 - a) ** 2 * (a - b**k) ** 3)


def _checked_pairs(params, p, q, floor):
    for pt in (p, q):
        if not contains(params, pt):
            raise ValueError(f"{pt!r} is not inside the domain {params}")
    ab = pair(p, q)
    d1 = abs(1 - ab.a)
    d2 = abs(ab.a - ab.b**params.k)
    if d1 < floor or d2 < floor:
        raise SingularityError(d1, d2, floor)
    return ab.a, ab.b


def kernel_closed(params: DomainParams, p: Point, q: Point, floor: float = SINGULARITY_FLOOR) -> KernelValue:
    a, b = _checked_pairs(params, p, q, floor)
    return KernelValue(complex(kernel_from_pairs(params, a, b)), "closed", 0.0)


def kernel_k1(n: int, p: Point, q: Point, floor: float = SINGULARITY_FLOOR) -> KernelValue:
    a, b = _checked_pairs(DomainParams(n, 1), p, q, floor)
    return KernelValue(complex(kernel_k1_from_pairs(n, a, b)), "special-case", 0.0)


def kernel_n2_closed(k: int, p: Point, q: Point, floor: float = SINGULARITY_FLOOR) -> KernelValue:
    a, b = _checked_pairs(DomainParams(2, k), p, q, floor)
    return KernelValue(complex(kernel_n2_from_pairs(k, a, b)), "special-case", 0.0)


def kernel_special(params: DomainParams, p: Point, q: Point, floor: float = SINGULARITY_FLOOR) -> KernelValue:
    """Dispatch to the ``k = 1`` or ``n = 2`` formula."""
    if params.k == 1:
        return kernel_k1(params.n, p, q, floor)
    if params.n == 2:
        return kernel_n2_closed(params.k, p, q, floor)
    raise ValueError(f"no special-case formula for {params}")


def contraction_ratio(k: int, a: complex, b: complex) -> float:
    """Geometric rate of the monomial series: ``max(|a|, |b| / |a|^(1/k))``."""
    aa = abs(a)
    if aa == 0:
        return math.inf
    return max(aa, abs(b) / aa ** (1.0 / k))


def _row_weights(n: int, k: int, p1: np.ndarray) -> np.ndarray:
    # (p1+n) Γ(p1+n)/Γ(p1+1) / (pi^(n+1) k), in log space for large p1
    logc = np.log(p1 + n) + gammaln(p1 + n) - gammaln(p1 + 1)
    return np.exp(logc) / (math.pi ** (n + 1) * k)


def _q_min(n: int, k: int, p1):
    return -((n + p1 - 1) // k) - 1


def series_from_pairs(params: DomainParams, a: complex, b: complex, max_p1: int = 128, max_q: int = 128):
    """Partial sum of the monomial series and an absolute tail bound.

    The sum runs over ``0 <= p1 <= max_p1`` and ``q_min(p1) <= q <= max_q``.
    Row magnitudes ``|b|^p1 w(p1) sum_q (k(q+1)+p1+n) |a|^q`` have closed forms
    (arithmetico-geometric series), which gives the neglected mass exactly:
    the q-tails of the kept rows plus all rows beyond ``max_p1``.
    """
    n, k = params.n, params.k
    a = complex(a)
    b = complex(b)
    if not (abs(a) < 1 and contraction_ratio(k, a, b) < 1):
        raise ValueError(
            f"series does not converge at a={a}, b={b}: need |a| < 1 and |b|^k < |a|"
        )
    p1 = np.arange(max_p1 + 1)
    w = _row_weights(n, k, p1.astype(float))
    qmin = _q_min(n, k, p1)
    total = 0j
    for i in range(max_p1 + 1):
        qs = np.arange(qmin[i], max_q + 1)
        lin = k * (qs + 1) + i + n
        total += w[i] * b**i * np.sum(lin * np.power(a, qs.astype(float)))

    x = abs(a)
    # q-tails of the kept rows
    Q = max_q + 1
    c_tail = k * (Q + 1) + p1 + n
    q_tail = np.sum(w * abs(b) ** p1 * x**Q * (c_tail / (1 - x) + k * x / (1 - x) ** 2))
    # rows beyond max_p1, summed until negligible
    extra = np.arange(max_p1 + 1, max_p1 + 1 + 8 * (max_p1 + 64))
    qm = _q_min(n, k, extra)
    c0 = k * (qm + 1) + extra + n
    with np.errstate(divide="ignore", over="ignore"):
        logrow = (
            np.log(_row_weights(n, k, extra.astype(float)))
            + extra * (np.log(abs(b)) if b != 0 else -np.inf)
            + qm * math.log(x)
            + np.log(c0 / (1 - x) + k * x / (1 - x) ** 2)
        )
    rows = np.exp(logrow)
    row_tail = float(np.sum(rows))
    if rows.size and rows[-1] > 1e-30 * max(row_tail, 1e-300):
        row_tail = math.inf
    return total, float(q_tail) + row_tail


def kernel_series(params: DomainParams, p: Point, q: Point, max_p1: int = 128, max_q: int = 128) -> KernelValue:
    for pt in (p, q):
        if not contains(params, pt):
            raise ValueError(f"{pt!r} is not inside the domain {params}")
    ab = pair(p, q)
    value, err = series_from_pairs(params, ab.a, ab.b, max_p1, max_q)
    return KernelValue(complex(value), "series", err)


def principal_root(t: complex, k: int) -> complex:
    """``t^(1/k)`` with ``arg t`` taken in ``[0, 2 pi)``."""
    arg = math.atan2(t.imag, t.real) % (2 * math.pi)
    return abs(t) ** (1.0 / k) * complex(math.cos(arg / k), math.sin(arg / k))


def bell_identity_sides(k: int, n: int, p: Point, q: Point) -> tuple[complex, complex]:
    """Both sides of the transformation rule for ``phi(z, w) = (z, w^k)``.

    ``p`` lies in the ``k = 1`` domain and ``q`` in the exponent-``k`` domain.
    Returns ``(u(p) B_k(phi(p), q), sum_j B_1(p, Phi_j(q)) conj(U_j(q)))`` where
    the left side uses the general closed form and the right side the
    ``k = 1`` formula.
    """
    if q.w == 0:
        raise ValueError("w = 0 is on the branch locus")
    dk = DomainParams(n, k)
    if not contains(DomainParams(n, 1), p):
        raise ValueError(f"{p!r} is not inside the k=1 domain")
    lhs = k * p.w ** (k - 1) * kernel_closed(dk, Point(p.z, p.w**k), q).value
    root = principal_root(q.w, k)
    zeta = complex(math.cos(2 * math.pi / k), math.sin(2 * math.pi / k))
    rhs = 0j
    for j in range(1, k + 1):
        zj = zeta**j
        branch = Point(q.z, zj * root)
        jac = zj * root / q.w / k
        rhs += kernel_k1(n, p, branch).value * jac.conjugate()
    return lhs, rhs


def bell_identity_residual(k: int, n: int, p: Point, q: Point) -> float:
    """Relative gap ``|lhs - rhs| / |lhs|`` between the two sides."""
    lhs, rhs = bell_identity_sides(k, n, p, q)
    return abs(lhs - rhs) / max(abs(lhs), 1e-300)


def pointwise_bound_ratio(params: DomainParams, p: Point, q: Point) -> float:
    """``|B| |1-a|^2 |a-b^k|^(n+1) / |a|^(n-(n-1)/k)``, bounded on the domain."""
    n, k = params.n, params.k
    ab = pair(p, q)
    if ab.a == 0:
        raise ValueError("a = 0: ratio undefined")
    value = kernel_closed(params, p, q).value
    return (
        abs(value)
        * abs(1 - ab.a) ** 2
        * abs(ab.a - ab.b**k) ** (n + 1)
        / abs(ab.a) ** (n - (n - 1) / k)
    )


def contraction_safe_pairs(params: DomainParams, count: int, seed: int, limit: float = 0.75):
    """``count`` interior point pairs whose series rate is at most ``limit``."""
    rng = np.random.default_rng(seed)
    out: list[tuple[Point, Point]] = []
    while len(out) < count:
        z, w = sample_arrays(params, 2 * count, rng)
        for i in range(count):
            p, q = Point(z[2 * i], w[2 * i]), Point(z[2 * i + 1], w[2 * i + 1])
            ab = pair(p, q)
            if contraction_ratio(params.k, ab.a, ab.b) <= limit:
                out.append((p, q))
                if len(out) == count:
                    break
    return out
