"""Residue arithmetic: primality, primitive roots, power-residue symbols.

The central quantity is the linking symbol l(a, q) in F_p for a prime
q = 1 mod p: the exponent e with a^((q-1)/p) = zeta^e, where
zeta = g^((q-1)/p) for the recorded primitive root g mod q. It vanishes
exactly when a is a p-th power mod q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import MarkedCurveError, UnsupportedPrimeError

# Deterministic Miller-Rabin: these bases are exact below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
MR_EXACT_BOUND = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    if n >= MR_EXACT_BOUND:
        raise ValueError(f"primality of {n} is outside the deterministic range")
    if n < 3_215_031_751:
        bases = (2, 3, 5, 7)
    else:
        bases = _MR_BASES
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_odd_prime(p: int) -> int:
    if p == 2:
        raise UnsupportedPrimeError("p=2 unsupported: no mild pro-2 theory is available")
    if not isinstance(p, int) or not is_prime(p):
        raise UnsupportedPrimeError(f"p={p} is not an odd prime")
    return p


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division (n stays below ~10^12 here)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_tame_split_prime(q: int, p: int) -> bool:
    """True iff q is prime and q = 1 mod p."""
    require_odd_prime(p)
    return q > 1 and q % p == 1 and is_prime(q)


@lru_cache(maxsize=4096)
def _primitive_roots_upto(q: int, count: int) -> tuple[int, ...]:
    if q == 2:
        return (1,)
    factors = prime_factors(q - 1)
    found = []
    g = 2
    while len(found) < count and g < q:
        if all(pow(g, (q - 1) // f, q) != 1 for f in factors):
            found.append(g)
        g += 1
    return tuple(found)


def primitive_root(q: int, rank: int = 0) -> int:
    """Smallest positive primitive root mod prime q (``rank=1``: second smallest)."""
    if not is_prime(q):
        raise MarkedCurveError(f"{q} is not prime")
    roots = _primitive_roots_upto(q, rank + 1)
    if len(roots) <= rank:
        raise MarkedCurveError(f"no primitive root of rank {rank} mod {q}")
    return roots[rank]


@dataclass(frozen=True)
class TamePrime:
    """A prime q = 1 mod p together with a primitive root normalizing symbols.

    The root is found lazily when not supplied, so candidate primes in a
    search only pay for it if a symbol value (not just zero/nonzero) is
    needed.
    """

    q: int
    p: int
    chosen_root: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.q % self.p != 1 or not is_prime(self.q):
            raise MarkedCurveError(f"{self.q} is not a prime = 1 mod {self.p}")
        if self.chosen_root is not None:
            g, q = self.chosen_root % self.q, self.q
            if g == 0 or any(pow(g, (q - 1) // f, q) == 1 for f in prime_factors(q - 1)):
                raise MarkedCurveError(f"{self.chosen_root} is not a primitive root mod {q}")

    @classmethod
    def trusted(cls, q: int, p: int) -> TamePrime:
        """Skip validation; for q already known to be a prime = 1 mod p."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "q", q)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "chosen_root", None)
        return obj

    @cached_property
    def g(self) -> int:
        if self.chosen_root is not None:
            return self.chosen_root % self.q
        return primitive_root(self.q)


def tame_prime(q: int, p: int, root_rank: int = 0) -> TamePrime:
    return TamePrime(q, p, primitive_root(q, root_rank))


@lru_cache(maxsize=8192)
def _mu_p_log_table(q: int, p: int, g: int) -> dict[int, int]:
    zeta = pow(g, (q - 1) // p, q)
    table, cur = {}, 1
    for e in range(p):
        table[cur] = e
        cur = cur * zeta % q
    return table


def is_pth_power_mod(a: int, q: int, p: int) -> bool:
    """Euler-criterion test: a is a p-th power mod q (q = 1 mod p, q does not divide a)."""
    return pow(a, (q - 1) // p, q) == 1


def linking_symbol(a: int, t: TamePrime) -> int:
    """Value in F_p of the p-th power residue character of a at t.q."""
    q, p = t.q, t.p
    if a % q == 0:
        raise MarkedCurveError(f"symbol undefined at ramified argument: {q} divides {a}")
    x = pow(a, (q - 1) // p, q)
    if x == 1:
        return 0
    return _mu_p_log_table(q, p, t.g)[x]


def wild_unit_exponent(a: int, p: int) -> int:
    """The F_p-linear functional u -> (u^(p-1) - 1)/p mod p on p-adic units.

    Zero exactly when a is a p-th power in Q_p; additive in a.
    """
    require_odd_prime(p)
    if a % p == 0:
        raise MarkedCurveError(f"not a local unit: {p} divides {a}")
    x = pow(a, p - 1, p * p)
    return (x - 1) // p % p


@dataclass(frozen=True)
class AvoidanceSet:
    """Primes excluded from every search: an explicit list plus congruence classes.

    ``congruences`` holds (residue, modulus) pairs; a prime q is excluded
    when q = residue mod modulus.
    """

    explicit: frozenset[int] = frozenset()
    congruences: tuple[tuple[int, int], ...] = ()
    exclude_p_divisors: bool = True

    @classmethod
    def of(cls, explicit: Iterable[int] = (), congruences: Iterable[tuple[int, int]] = (),
           exclude_p_divisors: bool = True) -> AvoidanceSet:
        cong = tuple(sorted({(r % m, m) for r, m in congruences}))
        if any(m <= 0 for _, m in cong):
            raise MarkedCurveError("congruence moduli must be positive")
        return cls(frozenset(explicit), cong, exclude_p_divisors)

    def excludes(self, q: int, p: int) -> bool:
        if q in self.explicit:
            return True
        if self.exclude_p_divisors and p % q == 0:
            return True
        return any(q % m == r for r, m in self.congruences)

    def check_admissible(self, p: int) -> None:
        """Raise if the congruence exclusions swallow the whole class 1 mod p.

        Only unit residues modulo lcm(p, moduli) carry infinitely many
        primes, so those are the ones that must survive.
        """
        if not self.congruences:
            return
        L = p
        for _, m in self.congruences:
            L = L * m // math.gcd(L, m)
        if L > 10**7:
            raise MarkedCurveError("congruence moduli too large to validate")
        for x in range(1, L, p):
            if math.gcd(x, L) == 1 and not any(x % m == r for r, m in self.congruences):
                return
        raise MarkedCurveError(
            f"avoidance congruences exclude every prime = 1 mod {p}")

    def to_dict(self) -> dict:
        return {
            "congruences": [[r, m] for r, m in self.congruences],
            "exclude_p_divisors": self.exclude_p_divisors,
            "explicit": sorted(self.explicit),
        }

    @classmethod
    def from_dict(cls, d: dict) -> AvoidanceSet:
        return cls.of(d.get("explicit", ()), [tuple(c) for c in d.get("congruences", ())],
                      d.get("exclude_p_divisors", True))


NO_AVOIDANCE = AvoidanceSet(exclude_p_divisors=False)

_SEGMENT = 1 << 20


@lru_cache(maxsize=8)
def _base_primes(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.flatnonzero(sieve)


def prime_array(lo: int, hi: int) -> np.ndarray:
    """All primes in [lo, hi) as an int64 array, via a segmented sieve."""
    lo = max(lo, 2)
    if hi <= lo:
        return np.empty(0, dtype=np.int64)
    base = _base_primes(math.isqrt(hi) + 1)
    parts = []
    for seg_lo in range(lo, hi, _SEGMENT):
        seg_hi = min(seg_lo + _SEGMENT, hi)
        seg = np.ones(seg_hi - seg_lo, dtype=bool)
        for b in base[base * base < seg_hi].tolist():
            start = max(b * b, (seg_lo + b - 1) // b * b)
            seg[start - seg_lo::b] = False
        parts.append(np.flatnonzero(seg).astype(np.int64) + seg_lo)
    return np.concatenate(parts)


def primes_in_range(lo: int, hi: int) -> Iterator[int]:
    """All primes in [lo, hi), increasing."""
    for seg_lo in range(max(lo, 2), hi, 1 << 22):
        yield from prime_array(seg_lo, min(seg_lo + (1 << 22), hi)).tolist()


def tame_prime_array(p: int, avoid: AvoidanceSet, lo: int, hi: int) -> np.ndarray:
    """Primes q in [lo, hi) with q = 1 mod p and not avoided, increasing."""
    qs = prime_array(lo, hi)
    keep = qs % p == 1
    if avoid.explicit:
        keep &= ~np.isin(qs, np.fromiter(avoid.explicit, dtype=np.int64))
    for r, m in avoid.congruences:
        keep &= qs % m != r
    return qs[keep]


_CHUNK = 1 << 22


def tame_prime_chunks(p: int, avoid: AvoidanceSet | None = None, start: int = 2,
                      stop: int | None = None) -> Iterator[np.ndarray]:
    """``tame_prime_array`` over consecutive windows, for batch evaluation."""
    require_odd_prime(p)
    avoid = NO_AVOIDANCE if avoid is None else avoid
    if start < 2:
        raise MarkedCurveError("start must be at least 2")
    hi = stop if stop is not None else 1 << 62
    lo = start
    while lo < hi:
        seg_hi = min(lo + _CHUNK, hi)
        qs = tame_prime_array(p, avoid, lo, seg_hi)
        if len(qs):
            yield qs
        lo = seg_hi


def prime_stream(p: int, avoid: AvoidanceSet | None = None, start: int = 2,
                 stop: int | None = None) -> Iterator[TamePrime]:
    """Primes q >= start (and < stop) with q = 1 mod p, not avoided, increasing."""
    for qs in tame_prime_chunks(p, avoid, start, stop):
        for q in qs.tolist():
            yield TamePrime.trusted(q, p)


def powmod_array(base, exp, mod) -> np.ndarray:
    """Elementwise base^exp mod mod for int64 arrays (or scalars) with mod < 2^31."""
    base, exp, mod = np.broadcast_arrays(np.asarray(base, dtype=np.int64),
                                         np.asarray(exp, dtype=np.int64),
                                         np.asarray(mod, dtype=np.int64))
    result = np.ones_like(mod)
    b = base % mod
    e = exp.copy()
    while e.any():
        odd = (e & 1).astype(bool)
        result = np.where(odd, result * b % mod, result)
        b = b * b % mod
        e >>= 1
    return result


def prime_set(xs: Iterable[int], name: str = "set") -> frozenset[int]:
    """Validate a collection of primes and freeze it."""
    out = frozenset(int(x) for x in xs)
    bad = sorted(x for x in out if not is_prime(x))
    if bad:
        raise MarkedCurveError(f"{name} contains non-primes: {bad}")
    return out


def require_disjoint(**sets: Iterable[int]) -> None:
    names = list(sets)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            common = set(sets[a]) & set(sets[b])
            if common:
                raise MarkedCurveError(f"{a} and {b} overlap in {sorted(common)}")
