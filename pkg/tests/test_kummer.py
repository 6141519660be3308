from __future__ import annotations

import random
from itertools import combinations, product

import pytest

from conftest import pth_powers, trial_prime
from markedcurve.errors import MarkedCurveError
from markedcurve.kummer import (
    TUnitBasis,
    drop_one_holds,
    kummer_dim,
    kummer_group,
    local_condition_matrix,
    ramifies_in_elementary,
    s_element,
    sha2_dimension,
)


def local_pth_power(a: int, v: int, p: int) -> bool:
    """Brute force: a is a p-th power in Q_v (a a v-unit)."""
    if v == p:
        return a % (p * p) in {pow(x, p, p * p) for x in range(p * p) if x % p}
    if v % p != 1:
        return True  # p-th powering is onto the units of Z_v here
    return a % v in pth_powers(v, p)


def brute_kummer_dim(S, T, p) -> int:
    """Count T-units (products of T-primes mod p-th powers) that are local p-th powers on S."""
    gens = sorted(T)
    count = sum(
        all(local_pth_power(prod_mod(gens, e, v), v, p) for v in S)
        for e in product(range(p), repeat=len(gens)))
    d = 0
    while count > 1:
        count //= p
        d += 1
    return d


def prod_mod(gens, exps, v):
    mod = v * v
    out = 1
    for g, e in zip(gens, exps):
        out = out * pow(g, e, mod) % mod
    return out


def test_s_element():
    assert s_element(7, {11}).value == 7
    assert s_element(13, set()).value == 13
    with pytest.raises(MarkedCurveError):
        s_element(11, {11})


def test_condition_matrix_examples():
    m = local_condition_matrix({13}, {11}, 3)
    assert (m.nrows, m.ncols) == (1, 1) and m[0, 0] != 0
    assert (local_condition_matrix(set(), {11, 13}, 3).nrows,
            local_condition_matrix(set(), {11, 13}, 3).ncols) == (0, 2)
    assert local_condition_matrix({5}, {11}, 3).nrows == 0


def test_kummer_examples():
    assert kummer_dim(set(), {11, 13}, 3) == 2
    assert kummer_dim({13}, {11}, 3) == 0
    assert kummer_dim({7}, set(), 3) == 0
    assert sha2_dimension({13}, {11}, 3) == 0
    assert sha2_dimension(set(), {11}, 3) == 1
    assert sha2_dimension(set(), set(), 3) == 0


def test_kummer_basis_elements_are_local_powers():
    kg = kummer_group({7}, {2, 5}, 3)
    gens = TUnitBasis.of({2, 5})
    for v in kg.basis:
        x = gens.evaluate(v)
        assert x.denominator == 1 and local_pth_power(x.numerator, 7, 3)


def test_drop_one_examples():
    assert drop_one_holds({7, 13}, {11}, 3)
    assert not drop_one_holds({13}, {11}, 3)
    assert drop_one_holds(set(), set(), 3)


def test_ramification_examples():
    assert ramifies_in_elementary(7, {7}, set(), 3)
    assert not ramifies_in_elementary(5, {5}, set(), 3)
    for q in (7, 13):
        assert ramifies_in_elementary(q, {7, 13}, {11}, 3)
    with pytest.raises(MarkedCurveError):
        ramifies_in_elementary(19, {7}, set(), 3)


@pytest.mark.parametrize("p", [3, 5])
def test_brute_force_oracle_small_primes(p):
    primes = [q for q in range(2, 50) if trial_prime(q)]
    for T in [()] + [(t,) for t in primes] + list(combinations(primes[:8], 2)):
        rest = [q for q in primes if q not in T]
        for S in [(), (rest[0],), tuple(q for q in rest if q % p == 1)[:2], (p,) if p not in T else ()]:
            assert kummer_dim(S, T, p) == brute_kummer_dim(S, T, p), (S, T)


def test_laws_random():
    rng = random.Random(1)
    primes = [q for q in range(2, 200) if trial_prime(q)]
    for _ in range(100):
        p = rng.choice([3, 5, 7])
        T = set(rng.sample(primes, rng.randint(0, 3)))
        assert kummer_dim(set(), T, p) == len(T)
        S = set(rng.sample([q for q in primes if q not in T], rng.randint(0, 3)))
        base = kummer_dim(S, T, p)
        extra = rng.choice([q for q in primes if q not in T | S])
        grown = kummer_dim(S | {extra}, T, p)
        assert base - 1 <= grown <= base
        if extra != p and extra % p != 1:
            assert grown == base
