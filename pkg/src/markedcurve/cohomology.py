"""Cohomology dimensions of the marked curve (Spec Z minus S, marked at T).

Over Q with p odd: r = 1, delta = 0, theta = 0, and delta_q = 1 exactly
for q = 1 mod p. The formula path goes through dim V_S^T; the character
path (``h1_via_characters``) counts order-p Dirichlet characters directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import MarkedCurveError
from .fp_linalg import FpMatrix, rank
from .kummer import kummer_group
from .modarith import (
    TamePrime,
    linking_symbol,
    prime_set,
    require_disjoint,
    require_odd_prime,
)


def delta_at(q: int, p: int) -> int:
    """1 iff the completion Q_q contains the p-th roots of unity."""
    return int(q != p and q % p == 1)


@dataclass(frozen=True)
class LocalCohomologyDims:
    q: int
    p: int
    marked: bool
    h2_x: int
    h3_x: int

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (0, 0, self.h2_x, self.h3_x)

    @property
    def euler_characteristic(self) -> int:
        return self.h2_x - self.h3_x


def local_dims(q: int, p: int, marked: bool = False) -> LocalCohomologyDims:
    require_odd_prime(p)
    delta = delta_at(q, p)
    degree = int(q == p)
    return LocalCohomologyDims(q, p, bool(marked), delta + degree + int(bool(marked)), delta)


@dataclass(frozen=True)
class CohomologyProfile:
    S: frozenset[int]
    T: frozenset[int]
    p: int
    h: tuple[int, int, int, int]
    chi: int
    theta: int
    vdim: int

    h0 = property(lambda self: self.h[0])
    h1 = property(lambda self: self.h[1])
    h2 = property(lambda self: self.h[2])
    h3 = property(lambda self: self.h[3])

    def to_dict(self) -> dict:
        return {
            "S": sorted(self.S),
            "T": sorted(self.T),
            "chi": self.chi,
            "h": list(self.h),
            "p": self.p,
            "theta": self.theta,
            "vdim": self.vdim,
        }


def global_profile(S: Iterable[int], T: Iterable[int], p: int) -> CohomologyProfile:
    require_odd_prime(p)
    S, T = prime_set(S, "S"), prime_set(T, "T")
    require_disjoint(S=S, T=T)
    r, delta = 1, 0
    theta = 1 if (delta == 1 and not S) else 0
    vdim = kummer_group(S, T, p).dim
    sum_delta = sum(delta_at(q, p) for q in S)
    wild_degree = int(p in S)
    h1 = 1 + sum_delta - delta + vdim + wild_degree - r - len(T)
    h2 = sum_delta - delta + vdim + theta
    h = (1, h1, h2, theta)
    chi = h[0] - h[1] + h[2] - h[3]
    if chi != r + len(T) - wild_degree:
        raise AssertionError(f"Euler characteristic mismatch for S={sorted(S)}, T={sorted(T)}")
    return CohomologyProfile(S, T, p, h, chi, theta, vdim)


def h1_via_characters(S: Iterable[int], T: Iterable[int], p: int,
                      roots: Mapping[int, int] | None = None) -> int:
    """Number of independent order-p ray class characters mod prod(S) split at T.

    A character is sum_q c_q * dlog_q; it splits at t iff sum_q c_q l(t, q) = 0.
    """
    require_odd_prime(p)
    S, T = prime_set(S, "S"), prime_set(T, "T")
    require_disjoint(S=S, T=T)
    wild = sorted(q for q in S if q % p != 1)
    if wild:
        raise MarkedCurveError(f"character oracle is tame-only; got {wild}")
    roots = roots or {}
    places = [TamePrime(q, p, roots.get(q)) for q in sorted(S)]
    m = FpMatrix.from_rows([[linking_symbol(t, tp) for tp in places] for t in sorted(T)],
                           p, ncols=len(places))
    return len(places) - rank(m)


def excision_identity_holds(S: Iterable[int], T: Iterable[int], p: int) -> bool:
    """Alternating dimension count of the five-term excision sequence vanishes."""
    T = prime_set(T, "T")
    marked = global_profile(S, T, p)
    plain = global_profile(S, (), p)
    return marked.h1 - plain.h1 + len(T) - marked.h2 + plain.h2 == 0


def s_min(S: Iterable[int], p: int) -> frozenset[int]:
    """Drop primes that cannot ramify in a p-extension (q != p, q != 1 mod p)."""
    return frozenset(q for q in S if q == p or q % p == 1)
