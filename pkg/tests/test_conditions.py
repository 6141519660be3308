from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pth_powers
from markedcurve.conditions import (
    BA_CLAUSES,
    cheap_clause_codes,
    condition_Ba,
    elementary_characters,
    eta_character,
    eta_value,
    first_failing_clause,
    frobenius_vector,
    splits_in_unit_kummer_field,
)
from markedcurve.errors import MarkedCurveError
from markedcurve.modarith import TamePrime, prime_stream


def tp(q, p=3):
    return TamePrime(q, p)


def test_unit_kummer_splitting():
    assert splits_in_unit_kummer_field(tp(13), set())
    assert not splits_in_unit_kummer_field(tp(13), {11})
    assert splits_in_unit_kummer_field(tp(31, 5), {11}) == (11 % 31 in pth_powers(31, 5))


def test_eta():
    eta = eta_character(tp(13), set())
    assert eta_value(eta, 3) == 1
    assert eta_value(eta, 1) == 0
    assert eta_value(eta, pow(5, 3, 13)) == 0
    assert eta_character(tp(7), set()).q_b.g == 3
    with pytest.raises(MarkedCurveError, match="splitting hypothesis"):
        eta_character(tp(13), {11})
    with pytest.raises(MarkedCurveError):
        eta_value(eta, 26)


def test_frobenius_vector():
    assert frobenius_vector(13, [tp(7)], set()).vec == (0,)
    assert frobenius_vector(13, [], set()).vec == ()
    with pytest.raises(MarkedCurveError):
        frobenius_vector(7, [tp(7)], set())


def test_condition_examples():
    assert first_failing_clause(tp(13), 1, [tp(7)], set()) == "frobenius_outside_inertia"
    assert not condition_Ba(tp(13), 1, [tp(7)], set())
    # 7 is a cube mod 19? 7^6 = 1 mod 19, so clause (3) fails
    assert first_failing_clause(tp(19), 1, [tp(7)], set()) == "inert_at_s_a"


def test_condition_31_by_cube_tables():
    cubes = {q: pth_powers(q, 3) for q in (7, 13, 31)}
    expected = (13 in cubes[31]) and (7 not in cubes[31])
    got = first_failing_clause(tp(31), 2, [tp(7), tp(13)], set())
    if not expected:
        assert got in ("splits_at_other_s", "inert_at_s_a")
    else:
        assert got in (None, "frobenius_outside_inertia")


def test_slot_errors():
    with pytest.raises(MarkedCurveError):
        first_failing_clause(tp(13), 2, [tp(7)], set())
    with pytest.raises(MarkedCurveError):
        first_failing_clause(tp(7), 1, [tp(7)], set())


@given(st.sampled_from([3, 5]), st.integers(0, 2), st.integers(0, 2))
def test_batch_clauses_agree_with_scalar(p, n_t, n_prior):
    S0 = [t for t in prime_stream(p, stop=400)][:3]
    T = [2, 11, 17][:n_t] if p == 3 else [2, 3, 7][:n_t]
    used = {t.q for t in S0} | set(T)
    prior = [t for t in prime_stream(p, start=400, stop=2000)][:n_prior]
    used |= {t.q for t in prior}
    cands = [t for t in prime_stream(p, start=2000, stop=6000) if t.q not in used]
    for a in range(1, 4):
        codes = cheap_clause_codes(np.array([c.q for c in cands]), a, S0, T, prior)
        for c, code in zip(cands, codes.tolist()):
            clause = first_failing_clause(c, a, S0, T, prior)
            if code == -1:
                assert clause in (None, "frobenius_outside_inertia")
            else:
                assert clause == BA_CLAUSES[code]


def test_elementary_characters():
    chars = elementary_characters({7, 13, 5}, set(), 3)
    assert chars.coords == (7, 13) and chars.dim == 2
    chars = elementary_characters({7, 13}, {11}, 3)
    assert chars.dim == 1
    for b in chars.basis:
        assert chars.value(b, 11) == 0
    wild = elementary_characters({3, 7}, set(), 3)
    assert wild.coords == (3, 7) and wild.dim == 2
    with pytest.raises(MarkedCurveError):
        chars.frob_image(7)
