"""Splitting conditions over Q, phrased through residue symbols.

Characters of the maximal elementary p-extension of Q unramified outside
a set of places are coefficient vectors c over the ramifiable places:
chi = sum_r c_r * lambda_r, where lambda_r is the dlog mod r (tame r) or
the wild exponent (r = p). Frob_x then evaluates as sum_r c_r lambda_r(x),
and the inertia at r is detected by the coordinate c_r.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import MarkedCurveError
from .fp_linalg import FpMatrix, FpVector, dot, in_span, kernel_basis
from .modarith import (
    TamePrime,
    is_pth_power_mod,
    linking_symbol,
    powmod_array,
    prime_set,
    wild_unit_exponent,
)


def _qval(q: int | TamePrime) -> int:
    return q.q if isinstance(q, TamePrime) else int(q)


@dataclass(frozen=True)
class ElementaryCharacters:
    """Order-p characters unramified outside ``places`` and split at ``T``."""

    p: int
    coords: tuple[int, ...]
    T: frozenset[int]
    roots: tuple[tuple[int, int], ...]
    basis: tuple[FpVector, ...]

    def symbol(self, x: int, r: int) -> int:
        if r == self.p:
            return wild_unit_exponent(x, self.p)
        return linking_symbol(x, TamePrime(r, self.p, dict(self.roots)[r]))

    def frob_image(self, x: int) -> FpVector:
        """Image of Frob_x in the dual coordinates (one entry per coordinate place)."""
        if x in self.coords:
            raise MarkedCurveError(f"Frobenius undefined at ramified place {x}")
        return tuple(self.symbol(x, r) for r in self.coords)

    def value(self, c: Sequence[int], x: int) -> int:
        return dot(c, self.frob_image(x), self.p)

    @property
    def dim(self) -> int:
        return len(self.basis)


def elementary_characters(places: Iterable[int], T: Iterable[int], p: int,
                          roots: Mapping[int, int] | None = None) -> ElementaryCharacters:
    """Basis of H^1 of the marked curve, computed from residue symbols.

    Places that cannot ramify (q != p, q != 1 mod p) carry no coordinate.
    """
    places, T = prime_set(places, "S"), prime_set(T, "T")
    coords = tuple(r for r in sorted(places) if r == p or r % p == 1)
    roots = dict(roots or {})
    root_pairs = tuple((r, roots[r] if r in roots else TamePrime(r, p).g)
                       for r in coords if r != p)
    chars = ElementaryCharacters(p, coords, T, root_pairs, ())
    m = FpMatrix.from_rows([chars.frob_image(t) for t in sorted(T)], p, ncols=len(coords))
    return ElementaryCharacters(p, coords, T, root_pairs, tuple(kernel_basis(m)))


@dataclass(frozen=True)
class FrobeniusVector:
    q: int
    S0: tuple[TamePrime, ...]
    T: frozenset[int]
    vec: FpVector


@dataclass(frozen=True)
class EtaCharacter:
    """The generator of H^1(X - {q_b}, T): dlog at q_b scaled by ``scale``."""

    q_b: TamePrime
    T: frozenset[int]
    scale: int = 1


def splits_in_unit_kummer_field(q: TamePrime, T: Iterable[int]) -> bool:
    """q splits completely in Q(mu_p, T^(1/p)) iff every t in T is a p-th power mod q."""
    T = frozenset(T)
    if q.q in T:
        raise MarkedCurveError(f"{q.q} lies in T")
    return all(is_pth_power_mod(t, q.q, q.p) for t in T)


def eta_character(q_b: TamePrime, T: Iterable[int], p: int | None = None) -> EtaCharacter:
    T = prime_set(T, "T")
    if p is not None and p != q_b.p:
        raise MarkedCurveError("p does not match the tame prime")
    if q_b.q in T or not splits_in_unit_kummer_field(q_b, T):
        raise MarkedCurveError(
            f"splitting hypothesis fails at {q_b.q}: h1 may vanish "
            "(some T-unit is not a p-th power there)")
    return EtaCharacter(q_b, T)


def eta_value(eta: EtaCharacter, a: int) -> int:
    if a % eta.q_b.q == 0:
        raise MarkedCurveError(f"eta undefined at {a}: divisible by {eta.q_b.q}")
    return eta.scale * linking_symbol(a, eta.q_b) % eta.q_b.p


def frobenius_vector(q: int | TamePrime, S0: Sequence[TamePrime],
                     T: Iterable[int]) -> FrobeniusVector:
    qv = _qval(q)
    if any(qv == t.q for t in S0):
        raise MarkedCurveError(f"Frobenius undefined at ramified place {qv}")
    vec = tuple(linking_symbol(qv, t) for t in S0)
    return FrobeniusVector(qv, tuple(S0), frozenset(T), vec)


BA_CLAUSES = (
    "unit_kummer_split",
    "splits_at_other_s",
    "inert_at_s_a",
    "prior_linking",
    "frobenius_outside_inertia",
)


def first_failing_clause(q: TamePrime, a: int, S0: Sequence[TamePrime], T: Iterable[int],
                         prior: Sequence[TamePrime] = ()) -> str | None:
    """Name of the first clause of (B_a) that q violates, or None if all hold.

    Clauses are checked cheapest first; the order does not affect the verdict.
    """
    T = frozenset(T)
    if not 1 <= a <= len(S0):
        raise MarkedCurveError(f"slot index {a} out of range 1..{len(S0)}")
    qv, p = q.q, q.p
    taken = {t.q for t in S0} | T | {t.q for t in prior}
    if qv in taken:
        raise MarkedCurveError(f"{qv} already lies in S0, T or the earlier linking primes")
    if not all(is_pth_power_mod(t, qv, p) for t in T):
        return "unit_kummer_split"
    for b, pb in enumerate(S0, start=1):
        if b != a and not is_pth_power_mod(pb.q, qv, p):
            return "splits_at_other_s"
    if is_pth_power_mod(S0[a - 1].q, qv, p):
        return "inert_at_s_a"
    for qb in prior:
        if not (is_pth_power_mod(qv, qb.q, p) and is_pth_power_mod(qb.q, qv, p)):
            return "prior_linking"
    vec = frobenius_vector(qv, S0, T).vec
    unit = tuple(int(i == a - 1) for i in range(len(S0)))
    span = [unit] + [frobenius_vector(t, S0, T).vec for t in sorted(T)]
    if in_span(vec, span, p):
        return "frobenius_outside_inertia"
    return None


def cheap_clause_codes(qs: np.ndarray, a: int, S0: Sequence[TamePrime], T: Iterable[int],
                       prior: Sequence[TamePrime] = ()) -> np.ndarray:
    """Vectorized form of the first four clauses for an array of candidates.

    Entry i is the index into ``BA_CLAUSES`` of the first clause candidate
    qs[i] fails, or -1 when only the Frobenius clause remains to be tested.
    Candidates must avoid S0, T and ``prior``.
    """
    T = sorted(frozenset(T))
    if not 1 <= a <= len(S0):
        raise MarkedCurveError(f"slot index {a} out of range 1..{len(S0)}")
    qs = np.asarray(qs, dtype=np.int64)
    if len(qs) == 0:
        return np.empty(0, dtype=np.int64)
    p = S0[0].p
    exp = (qs - 1) // p
    codes = np.full(len(qs), -1, dtype=np.int64)
    live = np.arange(len(qs))

    def fail(mask, code):
        nonlocal live
        codes[live[mask]] = code
        live = live[~mask]

    for t in T:
        fail(powmod_array(t, exp[live], qs[live]) != 1, 0)
    for b, pb in enumerate(S0, start=1):
        if b != a:
            fail(powmod_array(pb.q, exp[live], qs[live]) != 1, 1)
    fail(powmod_array(S0[a - 1].q, exp[live], qs[live]) == 1, 2)
    for qb in prior:
        bad = powmod_array(qs[live], (qb.q - 1) // p, qb.q) != 1
        bad |= powmod_array(qb.q, exp[live], qs[live]) != 1
        fail(bad, 3)
    return codes


def condition_Ba(q: TamePrime, a: int, S0: Sequence[TamePrime], T: Iterable[int],
                 prior: Sequence[TamePrime] = ()) -> bool:
    """Whether q may serve as the a-th linking prime (a is 1-based)."""
    return first_failing_clause(q, a, S0, T, prior) is None
