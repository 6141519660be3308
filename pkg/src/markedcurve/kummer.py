"""The Kummer group V_S^T over Q and the quantities derived from it.

Over Q with p odd the class number is 1 and -1 is a p-th power, so the
T-units modulo p-th powers are freely generated by the primes of T. An
element prod t^e_t lies in V_S^T iff it is a p-th power locally at every
v in S; each such v contributes one linear condition on the exponent
vector:

* v = 1 mod p: the linking symbol l(t, v),
* v = p: the wild exponent of t,
* anything else: no condition (every unit there is a p-th power).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import MarkedCurveError
from .fp_linalg import FpMatrix, FpVector, kernel_basis, rank
from .modarith import (
    TamePrime,
    linking_symbol,
    prime_set,
    require_disjoint,
    require_odd_prime,
    wild_unit_exponent,
)


@dataclass(frozen=True)
class TUnitBasis:
    """Generators of E_{Q,T}/p: the primes of T in increasing order."""

    generators: tuple[int, ...]

    @classmethod
    def of(cls, T: Iterable[int]) -> TUnitBasis:
        return cls(tuple(sorted(prime_set(T, "T"))))

    def __len__(self):
        return len(self.generators)

    def evaluate(self, exponents: FpVector) -> Fraction:
        """The rational number prod t^e_t represented by an exponent vector."""
        value = Fraction(1)
        for t, e in zip(self.generators, exponents):
            value *= Fraction(t) ** e
        return value


@dataclass(frozen=True)
class KummerGroup:
    S: frozenset[int]
    T: frozenset[int]
    p: int
    dim: int
    basis: tuple[FpVector, ...]

    @property
    def generators(self) -> TUnitBasis:
        return TUnitBasis.of(self.T)


@dataclass(frozen=True)
class SElement:
    q: int
    value: int


def s_element(q: int, T: Iterable[int]) -> SElement:
    """Canonical s_q over Q: the prime itself (valuation 1 at q, 0 elsewhere)."""
    if q in set(T):
        raise MarkedCurveError(f"s-element undefined: {q} lies in T")
    return SElement(q, q)


def _condition_places(S: Iterable[int], p: int) -> list[int]:
    return [v for v in sorted(S) if v == p or v % p == 1]


def local_condition_matrix(S: Iterable[int], T: Iterable[int], p: int,
                           roots: Mapping[int, int] | None = None) -> FpMatrix:
    """One row per place of S with a nontrivial local condition, one column per t in T."""
    require_odd_prime(p)
    S, T = prime_set(S, "S"), prime_set(T, "T")
    require_disjoint(S=S, T=T)
    roots = roots or {}
    gens = sorted(T)
    rows = []
    for v in _condition_places(S, p):
        if v == p:
            rows.append([wild_unit_exponent(t, p) for t in gens])
        else:
            tp = TamePrime(v, p, roots.get(v))
            rows.append([linking_symbol(t, tp) for t in gens])
    return FpMatrix.from_rows(rows, p, ncols=len(gens))


def kummer_group(S: Iterable[int], T: Iterable[int], p: int,
                 roots: Mapping[int, int] | None = None) -> KummerGroup:
    S, T = prime_set(S, "S"), prime_set(T, "T")
    m = local_condition_matrix(S, T, p, roots)
    basis = tuple(kernel_basis(m))
    return KummerGroup(S, T, p, len(T) - rank(m), basis)


def kummer_dim(S: Iterable[int], T: Iterable[int], p: int) -> int:
    return kummer_group(S, T, p).dim


def sha2_dimension(S: Iterable[int], T: Iterable[int], p: int) -> int:
    """dim of the second Shafarevich-Tate group, dual to V_S^T."""
    return kummer_group(S, T, p).dim


def drop_one_holds(S0: Iterable[int], T: Iterable[int], p: int) -> bool:
    """V_{S0 minus q}^T = 0 for every q in S0 (and hence V_{S0}^T = 0)."""
    S0, T = prime_set(S0, "S0"), prime_set(T, "T")
    require_disjoint(S0=S0, T=T)
    for q in S0:
        if q % p != 1:
            raise MarkedCurveError(f"{q} in S0 is not a tame prime for p={p}")
    if kummer_dim(S0, T, p):
        return False
    return all(kummer_dim(S0 - {q}, T, p) == 0 for q in sorted(S0))


def ramifies_in_elementary(q: int, S: Iterable[int], T: Iterable[int], p: int) -> bool:
    """Whether q ramifies in the maximal elementary p-extension unramified outside S, split at T."""
    from .cohomology import global_profile

    S = prime_set(S, "S")
    if q not in S:
        raise MarkedCurveError(f"{q} is not in S")
    return global_profile(S, T, p).h1 > global_profile(S - {q}, T, p).h1
