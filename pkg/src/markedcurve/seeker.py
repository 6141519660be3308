"""Constructive search for the auxiliary primes.

Two stages, both scanning primes = 1 mod p in increasing order:

1. ``find_S0_killing_V``: a set S0 with V_{S0}^T = 0 and V_{S0 - q}^T = 0
   for every q in S0 (the drop-one condition).
2. ``find_linking_primes``: one prime q_a per element of S0 satisfying
   condition (B_a) relative to the earlier q_b.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .conditions import BA_CLAUSES, cheap_clause_codes, first_failing_clause
from .errors import MarkedCurveError, SearchExhaustedError
from .fp_linalg import FpMatrix, rank
from .modarith import (
    AvoidanceSet,
    TamePrime,
    is_pth_power_mod,
    linking_symbol,
    prime_set,
    prime_stream,
    require_disjoint,
    require_odd_prime,
    tame_prime_chunks,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_PRIME = 10**9
DEFAULT_MAX_CANDIDATES = 10**7
# Batch residue tests square int64 values, so candidates must stay below 2^31.
MAX_PRIME_LIMIT = (1 << 31) - 1


@dataclass(frozen=True)
class SearchConfig:
    max_prime: int = DEFAULT_MAX_PRIME
    max_candidates_per_slot: int = DEFAULT_MAX_CANDIDATES
    seed_order: str = "smallest-first"

    def __post_init__(self):
        if self.max_prime < 2 or self.max_candidates_per_slot < 1:
            raise MarkedCurveError("search bounds must be positive")
        if self.max_prime > MAX_PRIME_LIMIT:
            raise MarkedCurveError(f"max_prime above {MAX_PRIME_LIMIT} is not supported")
        if self.seed_order != "smallest-first":
            raise MarkedCurveError("only smallest-first enumeration is supported")

    def to_dict(self) -> dict:
        return {
            "max_candidates_per_slot": self.max_candidates_per_slot,
            "max_prime": self.max_prime,
            "seed_order": self.seed_order,
        }


@dataclass(frozen=True)
class SeekerResult:
    T0: tuple[int, ...]
    S0: tuple[int, ...]
    Q: tuple[int, ...]
    trace: tuple[dict, ...] = field(default=(), compare=False)

    @property
    def m(self) -> int:
        return len(self.S0)

    @property
    def added(self) -> tuple[int, ...]:
        """The full auxiliary set adjoined to S."""
        return self.S0 + self.Q

    def to_dict(self) -> dict:
        return {"Q": list(self.Q), "S0": list(self.S0), "T0": list(self.T0),
                "trace": list(self.trace)}


def _kummer_dim_of_rows(rows: Sequence[Sequence[int]], n_gens: int, p: int) -> int:
    if not rows:
        return n_gens
    return n_gens - rank(FpMatrix.from_rows(rows, p, ncols=n_gens))


def drop_one_defect(rows: Sequence[Sequence[int]], n_gens: int, p: int) -> int:
    """2 dim V_{S0} + #{q in S0 : dropping q enlarges V}; zero iff drop-one holds.

    ``rows`` are the local condition rows (one per element of S0). Adding a
    prime whose row is independent lowers the first term by 2 and adds at
    most one coloop; adding a dependent row that frees a coloop lowers the
    second term. Either way an accepted prime lowers the defect by >= 1.
    """
    full = _kummer_dim_of_rows(rows, n_gens, p)
    coloops = sum(
        _kummer_dim_of_rows(rows[:i] + rows[i + 1:], n_gens, p) > full
        for i in range(len(rows)))
    return 2 * full + coloops


def find_S0_killing_V(T: Iterable[int], avoid: AvoidanceSet, p: int,
                      cfg: SearchConfig = SearchConfig(),
                      exclude: Iterable[int] = ()) -> tuple[int, ...]:
    """Greedy smallest-first S0 with V_{S0}^T = 0 and the drop-one property.

    A candidate is accepted iff it strictly lowers ``drop_one_defect``. When
    T is empty the defect starts at zero and the smallest admissible prime
    alone is returned, since S0 must be nonempty.
    """
    require_odd_prime(p)
    T = prime_set(T, "T")
    gens = sorted(T)
    skip = set(T) | set(exclude)
    rows: list[list[int]] = []
    chosen: list[int] = []
    defect = drop_one_defect(rows, len(gens), p)
    trace: list[dict] = []
    scanned = 0
    for cand in prime_stream(p, avoid, 2, cfg.max_prime + 1):
        if cand.q in skip:
            continue
        scanned += 1
        if defect == 0 and chosen:
            break
        if defect == 0:
            chosen.append(cand.q)
            trace.append({"stage": "S0", "prime": cand.q, "defect": [0, 0],
                          "scanned": scanned})
            break
        if all(is_pth_power_mod(t, cand.q, p) for t in gens):
            continue
        row = [linking_symbol(t, cand) for t in gens]
        new = drop_one_defect(rows + [row], len(gens), p)
        if new < defect:
            rows.append(row)
            chosen.append(cand.q)
            trace.append({"stage": "S0", "prime": cand.q, "defect": [defect, new],
                          "scanned": scanned})
            log.debug("S0 accepts %d (defect %d -> %d)", cand.q, defect, new)
            defect = new
            if defect == 0:
                break
    if defect != 0 or not chosen:
        raise SearchExhaustedError(
            f"search bound exceeded: no drop-one set below {cfg.max_prime} "
            f"(defect {defect}, chosen {chosen})", trace)
    return tuple(chosen)


def widen_S0(S0: Sequence[int], T: Iterable[int], avoid: AvoidanceSet, p: int,
             cfg: SearchConfig = SearchConfig(), exclude: Iterable[int] = (),
             trace: list | None = None) -> tuple[int, ...]:
    """Append smallest admissible primes until h1(X - S0, T) >= 2.

    The linking primes need Frob_{q_a} outside the inertia group of p_a,
    which is impossible while the elementary quotient is cyclic. With
    V_{S0}^T = 0 every extra tame prime raises h1 by exactly one and keeps
    the drop-one property.
    """
    from .cohomology import global_profile

    T = prime_set(T, "T")
    out = list(S0)
    if global_profile(out, T, p).h1 >= 2:
        return tuple(out)
    skip = set(out) | set(T) | set(exclude)
    for cand in prime_stream(p, avoid, 2, cfg.max_prime + 1):
        if cand.q in skip:
            continue
        out.append(cand.q)
        if trace is not None:
            trace.append({"stage": "S0-widen", "prime": cand.q})
        if global_profile(out, T, p).h1 >= 2:
            return tuple(out)
    raise SearchExhaustedError(
        f"search bound exceeded while widening S0 below {cfg.max_prime}", trace)


def find_linking_primes(S0: Sequence[int], T: Iterable[int], avoid: AvoidanceSet, p: int,
                        cfg: SearchConfig = SearchConfig(),
                        exclude: Iterable[int] = (),
                        trace: list | None = None) -> tuple[int, ...]:
    """Choose q_1..q_m smallest-first, q_a satisfying (B_a) given q_1..q_{a-1}.

    Candidates are screened in vectorized batches by the power-residue
    clauses; survivors are confirmed in order by ``first_failing_clause``,
    so the accepted prime is the same as for a one-by-one scan.
    """
    require_odd_prime(p)
    T = prime_set(T, "T")
    trace = [] if trace is None else trace
    S0p = [TamePrime(q, p) for q in S0]
    chosen: list[TamePrime] = []
    skip = set(S0) | set(T) | set(exclude)
    for a in range(1, len(S0p) + 1):
        failures: Counter[str] = Counter()
        tried = 0
        found = None
        for qs in tame_prime_chunks(p, avoid, 2, cfg.max_prime + 1):
            if skip:
                qs = qs[~np.isin(qs, np.fromiter(skip, dtype=np.int64))]
            room = cfg.max_candidates_per_slot - tried
            qs = qs[:room]
            codes = cheap_clause_codes(qs, a, S0p, T, chosen)
            stop = len(qs)
            for idx in np.flatnonzero(codes == -1).tolist():
                cand = TamePrime.trusted(int(qs[idx]), p)
                clause = first_failing_clause(cand, a, S0p, T, chosen)
                if clause is None:
                    found, stop = cand, idx
                    break
                codes[idx] = BA_CLAUSES.index(clause)
            counts = np.bincount(codes[:stop], minlength=len(BA_CLAUSES))
            failures.update({BA_CLAUSES[k]: int(c) for k, c in enumerate(counts) if c})
            tried += stop + (found is not None)
            if found is not None or tried >= cfg.max_candidates_per_slot:
                break
        record = {"stage": "Q", "slot": a, "prime": found.q if found else None,
                  "candidates": tried, "failures": dict(sorted(failures.items()))}
        trace.append(record)
        if found is None:
            worst = ", ".join(f"{k} x{v}" for k, v in failures.most_common(3))
            raise SearchExhaustedError(
                f"search bound exceeded in slot a={a}: no prime below {cfg.max_prime} "
                f"within {cfg.max_candidates_per_slot} candidates; most violated: {worst}",
                trace)
        log.debug("slot %d accepts %d after %d candidates", a, found.q, tried)
        chosen.append(found)
        skip.add(found.q)
    return tuple(t.q for t in chosen)


def seek_certified_set(S: Iterable[int], T: Iterable[int], avoid: AvoidanceSet, p: int,
                       cfg: SearchConfig = SearchConfig()) -> SeekerResult:
    """Run both stages with marking set S u T; S0 u Q is the set adjoined to S.

    Between the stages S0 is widened so that its elementary quotient has
    rank >= 2 (see ``widen_S0``).
    """
    require_odd_prime(p)
    S, T = prime_set(S, "S"), prime_set(T, "T")
    require_disjoint(S=S, T=T, avoid=avoid.explicit)
    avoid.check_admissible(p)
    marking = S | T
    trace: list[dict] = []
    try:
        S0 = find_S0_killing_V(marking, avoid, p, cfg)
        trace.extend({"stage": "S0", "prime": q} for q in S0)
        S0 = widen_S0(S0, marking, avoid, p, cfg, trace=trace)
        Q = find_linking_primes(S0, marking, avoid, p, cfg, trace=trace)
    except SearchExhaustedError as exc:
        full = trace if exc.trace is trace else trace + list(exc.trace or [])
        raise SearchExhaustedError(str(exc), full) from exc
    return SeekerResult((), S0, Q, tuple(trace))
