"""Real special functions and exact integer primitives.

Gamma and log-Gamma come from the standard library (``math.gamma`` and
``math.lgamma`` are accurate to a few ulps on the positive axis), the
Pochhammer-type ratio from :func:`scipy.special.poch`.
"""

from __future__ import annotations

import math

from scipy import special as _sp

__all__ = ["gamma", "lgamma", "beta", "log_beta", "binomial", "gamma_ratio_asymptotic"]

# math.gamma overflows just above 171.6
_DIRECT_BETA_LIMIT = 170.0


def _check_positive(*args: float) -> None:
    for x in args:
        if not x > 0:
            raise ValueError(f"argument must be positive, got {x!r}")


def gamma(x: float) -> float:
    """Gamma function for real ``x > 0``."""
    _check_positive(x)
    return math.gamma(x)


def lgamma(x: float) -> float:
    """Natural log of Gamma for real ``x > 0``."""
    _check_positive(x)
    return math.lgamma(x)


def log_beta(x: float, y: float) -> float:
    _check_positive(x, y)
    return math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y)


def beta(x: float, y: float) -> float:
    """Euler Beta function ``Γ(x)Γ(y)/Γ(x+y)``.

    Small arguments use the Gamma ratio directly, which keeps the integer
    special cases (e.g. ``beta(x, 2) == 1/(x(x+1))``) at full precision.
    Large ones go through log space to avoid overflow.
    """
    _check_positive(x, y)
    if x + y < _DIRECT_BETA_LIMIT:
        return math.gamma(x) * math.gamma(y) / math.gamma(x + y)
    return math.exp(log_beta(x, y))


def binomial(n: int, r: int) -> int:
    """Exact binomial coefficient; zero outside ``0 <= r <= n``."""
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def gamma_ratio_asymptotic(m: int, lam: float) -> float:
    """Return ``Γ(m+λ)/Γ(m)``, which behaves like ``m**λ`` for large ``m``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return float(_sp.poch(m, lam))
