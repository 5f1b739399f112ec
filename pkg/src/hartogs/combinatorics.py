"""Bounded compositions and the numerator polynomials of the kernel.

Every count here is an exact Python integer.  The numerator polynomial
``g_l(b)`` counts tuples ``(j_1, ..., j_{n+3})`` with entries in
``[0, k-1]`` and a fixed total, weighted by ``b**(j_3 + ... + j_{n+3})``.
Splitting the first two entries from the other ``n+1`` turns that into a
convolution of two bounded-composition counts, which is how it is computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .domain import DomainParams
from .special import binomial

__all__ = [
    "IntPolynomial",
    "CompositionSpec",
    "bounded_compositions",
    "count_f",
    "count_h",
    "g_polynomial",
    "g_polynomials",
    "g_polynomial_n2_closed",
    "n2_literal_coefficients",
    "numerator_total",
]


class IntPolynomial:
    """Polynomial in ``b`` with nonnegative integer coefficients.

    ``coeffs[t]`` is the coefficient of ``b**t``.  Trailing zeros are dropped,
    so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        if any(x < 0 for x in c):
            raise ValueError(f"negative coefficient in {c}")
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, b):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * b + c
        return acc

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        m = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (m - len(self.coeffs))
        b = other.coeffs + (0,) * (m - len(other.coeffs))
        return IntPolynomial(x + y for x, y in zip(a, b))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        if not (self.coeffs and other.coeffs):
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPolynomial":
        out = IntPolynomial([1])
        for _ in range(e):
            out = out * self
        return out

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"


@dataclass(frozen=True)
class CompositionSpec:
    """Tuples of ``parts`` integers in ``[0, cap-1]`` summing to ``total``."""

    total: int
    parts: int
    cap: int

    def __post_init__(self):
        if self.parts < 1 or self.cap < 1:
            raise ValueError("parts and cap must be positive")


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int, cap: int) -> int:
    if total < 0 or total > parts * (cap - 1):
        return 0
    # inclusion-exclusion over the parts forced to be >= cap
    s = 0
    for i in range(parts + 1):
        rest = total - i * cap
        if rest < 0:
            break
        term = binomial(parts, i) * binomial(rest + parts - 1, parts - 1)
        s += -term if i % 2 else term
    return s


def bounded_compositions(spec: CompositionSpec) -> int:
    return _compositions(spec.total, spec.parts, spec.cap)


def count_f(l: int, k: int) -> int:
    """Number of pairs ``(j1, j2)`` in ``[0, k-1]^2`` with ``j1 + j2 = l``."""
    if l < 0:
        return 0
    if l <= k - 1:
        return l + 1
    if l <= 2 * k - 2:
        return 2 * k - l - 1
    return 0


def count_h(l: int, k: int) -> int:
    """Number of triples in ``[0, k-1]^3`` with sum ``l``."""
    if l < 0:
        return 0
    if l <= k - 1:
        return (l + 2) * (l + 1) // 2
    if l <= 2 * k - 2:
        return ((l + 2) * (l + 1) - 3 * (l + 2 - k) * (l + 1 - k)) // 2
    if l <= 3 * k - 3:
        return (3 * k - l - 1) * (3 * k - l - 2) // 2
    return 0


def _numerator_degree_total(l: int, n: int, k: int) -> int:
    return (n - l + 2) * k - (n + 1)


@lru_cache(maxsize=None)
def _g_coeffs(l: int, n: int, k: int) -> tuple[int, ...]:
    total = _numerator_degree_total(l, n, k)
    if total < 0 or total > (n + 3) * (k - 1):
        return ()
    top = min(total, (n + 1) * (k - 1))
    return tuple(
        _compositions(total - t, 2, k) * _compositions(t, n + 1, k) for t in range(top + 1)
    )


def g_polynomial(l: int, params: DomainParams) -> IntPolynomial:
    """Coefficient polynomial ``g_{lk}(b)`` of ``a**l`` in the kernel numerator.

    ``0 <= l <= n+1``.  This is the convention in which the kernel carries an
    external ``n!``.
    """
    n, k = params.n, params.k
    if not 0 <= l <= n + 1:
        raise ValueError(f"l must lie in [0, {n + 1}], got {l}")
    return IntPolynomial(_g_coeffs(l, n, k))


def g_polynomials(params: DomainParams) -> list[IntPolynomial]:
    """All ``g_{lk}``, indexed by ``l = 0 .. n+1``."""
    return [g_polynomial(l, params) for l in range(params.n + 2)]


def numerator_total(params: DomainParams) -> int:
    """Sum of all numerator coefficients (number of contributing tuples)."""
    return sum(sum(g.coeffs) for g in g_polynomials(params))


def _n2_terms(l: int, k: int, literal: bool) -> dict[int, int]:
    # exponent -> coefficient, following the n = 2 closed forms term by term
    terms: dict[int, int] = {}

    def add(e, c):
        terms[e] = terms.get(e, 0) + c

    if l == 3:
        for m in range(k - 2):
            add(m, (k - 2 - m) * (m + 2) * (m + 1))
    elif l == 2:
        tail = (lambda m: m - 1) if literal else (lambda m: m + 1)
        for m in range(k - 1):
            add(k - 1 + m, (k - m - 1) * ((k + m + 1) * (k + m) - 3 * (m + 1) * m))
            add(m, (m + 2) ** 2 * tail(m))
    elif l == 1:
        for m in range(k):
            add(2 * k - 1 + m, (k - m - 1) ** 2 * (k - m))
            add(k - 1 + m, (m + 1) * ((k + m + 1) * (k + m) - 3 * (m + 1) * m))
    elif l == 0:
        for m in range(k - 1):
            add(2 * k - 1 + m, (m + 1) * (k - m) * (k - m - 1))
    else:
        raise ValueError(f"l must be one of 0, 1, 2, 3, got {l}")
    return terms


def _dense(terms: dict[int, int]) -> list[int]:
    if not terms:
        return []
    out = [0] * (max(terms) + 1)
    for e, c in terms.items():
        out[e] += c
    while out and out[-1] == 0:
        out.pop()
    return out


def g_polynomial_n2_closed(l: int, k: int) -> IntPolynomial:
    """Closed-form numerator polynomial for ``n = 2`` (index ``l*k``).

    These forms multiply the kernel without an ``n!`` prefactor, so each
    equals ``2 * g_polynomial(l, DomainParams(2, k))``.  The ``a**2`` form
    uses the low-order factor ``(m+2)^2 (m+1)``; writing ``(m-1)`` there
    gives a negative count at ``m = 0``, see :func:`n2_literal_coefficients`.
    """
    if k < 1:
        raise ValueError("k must be positive")
    return IntPolynomial(_dense(_n2_terms(l, k, literal=False)))


def n2_literal_coefficients(l: int, k: int) -> list[int]:
    """The ``n = 2`` closed forms taken verbatim, misprint included.

    Returned as a plain list since coefficients can be negative.
    """
    if k < 1:
        raise ValueError("k must be positive")
    return _dense(_n2_terms(l, k, literal=True))
