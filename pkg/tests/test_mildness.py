from __future__ import annotations

import json

import pytest

from markedcurve.errors import MarkedCurveError
from markedcurve.fp_linalg import FpMatrix, rank
from markedcurve.mildness import (
    Certificate,
    CupMatrix,
    RowCharacters,
    assemble_cup_matrix,
    build_linking_table,
    certify,
    character_basis,
    enlargement_check,
    local_cup,
    mild_split_probe,
    mildness_check,
    shape_check,
    verify,
    vv_block_zero,
)
from markedcurve.modarith import AvoidanceSet

AVOID = AvoidanceSet.of()


@pytest.fixture(scope="module")
def small_cert():
    return certify(set(), set(), AVOID, 3)


def _cup(rows, m, p=3):
    chars = RowCharacters((), (), tuple(() for _ in range(m)), (), ())
    labels = tuple(str(i) for i in range(2 * m))
    return CupMatrix(labels, labels, FpMatrix.from_rows(rows, p, ncols=2 * m), chars)


def test_linking_table():
    table = build_linking_table((7,), (13,), set(), 3)
    assert table.symbols == {(7, 13): 2, (13, 7): 0}
    assert build_linking_table((), (), set(), 3).symbols == {}
    with pytest.raises(MarkedCurveError, match="repeated"):
        build_linking_table((7,), (7,), set(), 3)
    with pytest.raises(MarkedCurveError, match="non-tame"):
        build_linking_table((5,), (), set(), 3)


def test_local_cup_is_alternating():
    table = build_linking_table((7, 13), (19, 31), set(), 3)
    e = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    for a in e:
        for b in e:
            for tp in table.places:
                assert (local_cup(table, a, b, tp.q) + local_cup(table, b, a, tp.q)) % 3 == 0


def test_character_basis_conditions():
    table = build_linking_table((7, 13), (163, 313), set(), 3)
    chars = character_basis(table, 2)
    for a, q in enumerate((163, 313)):
        assert chars.chi[a][a] == 1
        assert chars.psi_at_frob_q[a] == 1
        assert chars.eta[a][2 + a] == 1
    assert character_basis(build_linking_table((), (), set(), 3), 0).m == 0
    # a single prime cannot host chi_1 and psi_1 together with (7, 13)
    with pytest.raises(MarkedCurveError):
        character_basis(build_linking_table((7,), (13,), set(), 3), 1)


def test_shape_check():
    assert shape_check(_cup([[1, 0, 0, 0], [0, 2, 0, 0], [1, 0, 1, 0], [0, 1, 0, 2]], 2))
    assert not shape_check(_cup([[0, 0, 0, 0], [0, 2, 0, 0], [1, 0, 1, 0], [0, 1, 0, 2]], 2))
    assert not shape_check(_cup([[1, 0, 1, 0], [0, 2, 0, 0], [1, 0, 1, 0], [0, 1, 0, 2]], 2))
    assert shape_check(_cup([], 0))


def test_mildness_check():
    good = _cup([[1, 0], [1, 1]], 1)
    assert mildness_check(good, True)
    assert not mildness_check(good, False)
    assert not mildness_check(_cup([[1, 0], [1, 0]], 1), True)
    assert not mildness_check(_cup([], 0), True)


def test_vv_block():
    table = build_linking_table((7,), (13, 19), set(), 3)
    eta = [(0, 1, 0), (0, 0, 1)]
    expected = table(19, 13) == 0 and table(13, 19) == 0
    assert vv_block_zero(table, eta) == expected


def test_certificate_roundtrip(small_cert):
    c = small_cert
    assert all(c.verdicts.values())
    assert c.seeker.m == 2
    assert verify(c)
    again = Certificate.from_json(c.to_json())
    assert again.to_json() == c.to_json()
    assert verify(again, rerun_search=True)


def test_flipped_entry_fails(small_cert):
    data = json.loads(small_cert.to_json())
    data["cup"]["entries"][0][0] = (data["cup"]["entries"][0][0] + 1) % 3
    assert not verify(Certificate(data))
    data = json.loads(small_cert.to_json())
    data["verdicts"]["mild"] = False
    assert not verify(Certificate(data))
    data = json.loads(small_cert.to_json())
    data["seeker"]["Q"][0] = 7
    assert not verify(Certificate(data))


def test_foreign_roots(small_cert):
    other = certify(set(), set(), AVOID, 3, root_rank=1, seeker_result=small_cert.seeker)
    assert other.data["roots"] != small_cert.data["roots"]
    assert other.verdicts == small_cert.verdicts
    assert verify(other)


def test_malformed():
    with pytest.raises(MarkedCurveError):
        Certificate.from_json("{}")
    with pytest.raises(MarkedCurveError):
        Certificate.from_json("not json")
    with pytest.raises(MarkedCurveError):
        verify(Certificate({"version": "markedcurve-certificate/1"}))


def test_p2_rejected():
    with pytest.raises(MarkedCurveError, match="p=2 unsupported"):
        certify({13}, {11}, AVOID, 2)


def test_cup_matrix_structure(small_cert):
    entries = FpMatrix.from_rows(small_cert.data["cup"]["entries"], 3)
    assert rank(entries) == 4
    table = build_linking_table((7, 13), (163, 313), set(), 3)
    cup = assemble_cup_matrix(table, character_basis(table, 2))
    assert cup.entries.to_lists() == small_cert.data["cup"]["entries"]


def test_enlargement(small_cert):
    assert enlargement_check(small_cert, []) == "sufficient_yes"
    assert enlargement_check(small_cert, [547]) == "inconclusive"
    assert enlargement_check(small_cert, [2]) == "sufficient_yes"
    assert enlargement_check(small_cert, [7]) == "sufficient_yes"  # already in the set
    with pytest.raises(MarkedCurveError, match="overlap"):
        enlargement_check(Certificate({**small_cert.data,
                                       "inputs": {**small_cert.data["inputs"], "T": [11]}}),
                          [11])


def test_probe_runs():
    res = mild_split_probe((7, 19, 61, 163), 3)
    assert res["mild"] in (True, False)
    if res["mild"]:
        assert set(res["U"]) | set(res["V"]) == {7, 19, 61, 163}
