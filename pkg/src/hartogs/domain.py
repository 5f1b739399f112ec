"""The generalized Hartogs triangle ``{(z, w) : |z|^k < |w| < 1}`` in C^n x C."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainParams",
    "Point",
    "PairedArgs",
    "contains",
    "pair",
    "volume",
    "sample_arrays",
    "sample_uniform",
    "spawn_generators",
    "estimate_volume",
    "boundary_distance_weight",
    "boundary_weight_arrays",
]


@dataclass(frozen=True)
class DomainParams:
    n: int
    k: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")


@dataclass(frozen=True, eq=False)
class Point:
    """A point ``(z, w)`` with ``z`` in C^n and ``w`` in C."""

    z: np.ndarray
    w: complex

    def __init__(self, z, w):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if z.ndim != 1:
            raise ValueError("z must be a flat vector")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", complex(w))

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def znorm(self) -> float:
        return float(np.linalg.norm(self.z))

    def __repr__(self):
        return f"Point(z={self.z.tolist()}, w={self.w})"


@dataclass(frozen=True)
class PairedArgs:
    """Kernel arguments ``a = w * conj(t)`` and ``b = z . conj(s)``."""

    a: complex
    b: complex


def contains(params: DomainParams, p: Point) -> bool:
    if p.n != params.n:
        return False
    aw = abs(p.w)
    return p.znorm ** params.k < aw < 1.0


def pair(p: Point, q: Point) -> PairedArgs:
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: {p.n} vs {q.n}")
    return PairedArgs(a=p.w * q.w.conjugate(), b=complex(np.dot(p.z, q.z.conj())))


def volume(params: DomainParams) -> float:
    """Lebesgue volume ``pi^(n+1) k / ((n+k) n!)``."""
    n, k = params.n, params.k
    return math.pi ** (n + 1) * k / ((n + k) * math.factorial(n))


def _unit_ball(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    g = rng.standard_normal((count, 2 * n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = rng.random(count) ** (1.0 / (2 * n))
    g *= r[:, None]
    return g[:, :n] + 1j * g[:, n:]


def _unit_disk(rng: np.random.Generator, count: int) -> np.ndarray:
    r = np.sqrt(rng.random(count))
    return r * np.exp(2j * np.pi * rng.random(count))


def _propose(params: DomainParams, rng: np.random.Generator, count: int):
    z = _unit_ball(rng, count, params.n)
    w = _unit_disk(rng, count)
    ok = np.linalg.norm(z, axis=1) ** params.k < np.abs(w)
    return z, w, ok


def sample_arrays(params: DomainParams, count: int, rng: np.random.Generator):
    """Draw ``count`` uniform points of the domain as arrays ``(Z, W)``.

    Rejection from (unit ball in C^n) x (unit disk); the proposal is uniform
    on a set containing the domain, so accepted points are uniform on it.
    Acceptance rate is ``k/(n+k)``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rate = params.k / (params.n + params.k)
    zs, ws = [], []
    have = 0
    while have < count:
        batch = max(64, int((count - have) / rate * 1.1) + 16)
        z, w, ok = _propose(params, rng, batch)
        zs.append(z[ok])
        ws.append(w[ok])
        have += int(ok.sum())
    return np.concatenate(zs)[:count], np.concatenate(ws)[:count]


def spawn_generators(seed: int, shards: int) -> list[np.random.Generator]:
    """Independent generators for ``shards`` workers derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(shards)
    return [np.random.default_rng(c) for c in children]


def sample_uniform(params: DomainParams, count: int, seed: int) -> list[Point]:
    z, w = sample_arrays(params, count, np.random.default_rng(seed))
    return [Point(zi, wi) for zi, wi in zip(z, w)]


def estimate_volume(params: DomainParams, proposals: int, seed: int) -> tuple[float, float]:
    """Hit-or-miss volume estimate and its standard error."""
    rng = np.random.default_rng(seed)
    _, _, ok = _propose(params, rng, proposals)
    box = math.pi ** params.n / math.factorial(params.n) * math.pi
    frac = ok.mean()
    return box * frac, box * math.sqrt(frac * (1 - frac) / proposals)


def boundary_weight_arrays(k: int, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    aw2 = np.abs(w) ** 2
    zn = np.linalg.norm(np.atleast_2d(z), axis=-1)
    return (aw2 - zn ** (2 * k)) * (1.0 - aw2)


def boundary_distance_weight(params: DomainParams, p: Point) -> float:
    """``h(z, w) = (|w|^2 - |z|^(2k)) (1 - |w|^2)``, positive inside the domain."""
    if not contains(params, p):
        raise ValueError(f"{p!r} is not inside the domain {params}")
    aw2 = abs(p.w) ** 2
    return (aw2 - p.znorm ** (2 * params.k)) * (1.0 - aw2)
