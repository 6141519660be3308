from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_dlog, trial_prime
from markedcurve.cohomology import (
    excision_identity_holds,
    global_profile,
    h1_via_characters,
    local_dims,
    s_min,
)
from markedcurve.errors import MarkedCurveError, UnsupportedPrimeError
from markedcurve.modarith import primitive_root

PRIMES = [q for q in range(2, 400) if trial_prime(q)]


def brute_h1(S, T, p) -> int:
    """Count order-p characters of prod (Z/q)^x trivial on every t in T."""
    S = sorted(S)
    logs = {q: brute_dlog(q, primitive_root(q)) for q in S}
    count = 0
    from itertools import product
    for c in product(range(p), repeat=len(S)):
        if all(sum(ci * logs[q][t % q] for ci, q in zip(c, S)) % p == 0 for t in T):
            count += 1
    d = 0
    while count > 1:
        count //= p
        d += 1
    return d


def test_local_examples():
    assert local_dims(7, 3).dims[2:] == (1, 1)
    assert local_dims(5, 3, marked=True).dims[2:] == (1, 0)
    assert local_dims(3, 3).dims[2:] == (1, 0)


def test_profile_examples():
    prof = global_profile({13}, set(), 3)
    assert prof.h == (1, 1, 1, 0) and prof.chi == 1
    prof = global_profile({13}, {11}, 3)
    assert prof.h == (1, 0, 1, 0) and prof.chi == 2
    prof = global_profile(set(), set(), 3)
    assert prof.h == (1, 0, 0, 0) and prof.chi == 1


def test_profile_errors():
    with pytest.raises(UnsupportedPrimeError):
        global_profile({13}, set(), 2)
    with pytest.raises(MarkedCurveError):
        global_profile({13}, {13}, 3)


def test_character_examples():
    assert h1_via_characters({13}, {11}, 3) == 0
    assert h1_via_characters({7, 13}, set(), 3) == 2
    assert h1_via_characters({7, 13}, {11}, 3) == 1
    with pytest.raises(MarkedCurveError, match="tame-only"):
        h1_via_characters({5}, set(), 3)


def test_characters_against_brute_force():
    rng = random.Random(3)
    for _ in range(40):
        p = rng.choice([3, 5])
        tame = [q for q in PRIMES if q % p == 1 and q < 200]
        S = set(rng.sample(tame, rng.randint(1, 3)))
        T = set(rng.sample([q for q in PRIMES if q not in S], rng.randint(0, 2)))
        assert h1_via_characters(S, T, p) == brute_h1(S, T, p)


@given(st.sets(st.sampled_from([7, 13, 19, 31, 37, 43, 61, 67]), max_size=4),
       st.sets(st.sampled_from([2, 5, 11, 17, 23]), max_size=2))
def test_formula_matches_characters(S, T):
    assert global_profile(S, T, 3).h1 == h1_via_characters(S, T, 3)
    assert excision_identity_holds(S, T, 3)


@given(st.sets(st.sampled_from(PRIMES[:40]), max_size=5), st.sampled_from([3, 5, 7]))
def test_euler_characteristic(S, p):
    prof = global_profile(S, set(), p)
    assert prof.chi == 1 - int(p in S)
    assert prof.h0 - prof.h1 + prof.h2 - prof.h3 == prof.chi


def test_s_min():
    assert s_min({5, 7, 13}, 3) == {7, 13}
    assert s_min({3, 5}, 3) == {3}
    assert s_min(set(), 3) == set()


@given(st.sets(st.sampled_from(PRIMES[:60]), max_size=6), st.sampled_from([3, 5, 7]))
def test_s_min_invariance(S, p):
    reduced = s_min(S, p)
    assert s_min(reduced, p) == reduced
    assert global_profile(S, set(), p).h == global_profile(reduced, set(), p).h
