"""Cup-product matrix, mildness test and certificates for the marked curve.

Characters are coefficient vectors over the ramifiable places (see
``conditions``). At a tame place r the local cup product of two characters
is taken as

    (alpha u beta)_r = frob(alpha, r) * inert(beta, r) - inert(alpha, r) * frob(beta, r)

with inert(c, r) = c_r and frob(c, r) = sum over r' != r of c_r' * l(r, r').
Only the zero pattern and the ranks matter; the sign convention is
recorded in every certificate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .cohomology import global_profile
from .conditions import condition_Ba, elementary_characters
from .errors import MarkedCurveError
from .fp_linalg import FpMatrix, FpVector, kernel_basis, rank
from .kummer import drop_one_holds, ramifies_in_elementary
from .modarith import (
    AvoidanceSet,
    TamePrime,
    linking_symbol,
    prime_set,
    primitive_root,
    require_disjoint,
    require_odd_prime,
)
from .seeker import SearchConfig, SeekerResult, seek_certified_set

CERT_VERSION = "markedcurve-certificate/1"
PAIRING_CONVENTION = (
    "(a u b)_r = frob(a,r)*inert(b,r) - inert(a,r)*frob(b,r); "
    "inert(c,r) = c_r; frob(c,r) = sum_{r' != r} c_r' * l(r, r'); "
    "l(x, r) = e with x^((r-1)/p) = (g_r^((r-1)/p))^e mod r"
)
THEOREM_BACKED = "derived-by-theorem, not recomputed"


@dataclass(frozen=True)
class LinkingTable:
    """Linking symbols l(a, q) for q among ``places`` and a among places and T."""

    p: int
    places: tuple[TamePrime, ...]
    T: frozenset[int]
    symbols: Mapping[tuple[int, int], int]
    roots: Mapping[int, int]

    def __call__(self, a: int, q: int) -> int:
        try:
            return self.symbols[(a, q)]
        except KeyError:
            raise MarkedCurveError(f"symbol l({a}, {q}) is not in the table") from None

    def to_rows(self) -> list[list[int]]:
        return [[a, q, v] for (a, q), v in sorted(self.symbols.items())]


def build_linking_table(S0: Sequence[int], Q: Sequence[int], T: Iterable[int], p: int,
                        roots: Mapping[int, int] | None = None) -> LinkingTable:
    require_odd_prime(p)
    T = prime_set(T, "T")
    names = [int(x) for x in list(S0) + list(Q)]
    if len(set(names)) != len(names):
        raise MarkedCurveError(f"repeated prime among {names}")
    bad = sorted(q for q in names if q % p != 1)
    if bad:
        raise MarkedCurveError(f"non-tame primes for p={p}: {bad}")
    require_disjoint(places=names, T=T)
    roots = dict(roots or {})
    places = tuple(TamePrime(q, p, roots.get(q, primitive_root(q))) for q in names)
    symbols = {}
    for tp in places:
        for a in names + sorted(T):
            if a != tp.q:
                symbols[(a, tp.q)] = linking_symbol(a, tp)
    return LinkingTable(p, places, T, symbols, {tp.q: tp.g for tp in places})


def _frob(table: LinkingTable, coeffs: Sequence[int], r: int) -> int:
    return sum(c * table(r, tp.q) for c, tp in zip(coeffs, table.places)
               if tp.q != r and c) % table.p


def local_cup(table: LinkingTable, alpha: Sequence[int], beta: Sequence[int],
              r: int) -> int:
    """Local component at place r of the cup product of two characters."""
    i = [tp.q for tp in table.places].index(r)
    return (_frob(table, alpha, r) * beta[i] - alpha[i] * _frob(table, beta, r)) % table.p


@dataclass(frozen=True)
class RowCharacters:
    """chi_a, psi_a, eta_a as coefficient vectors over p_1..p_m, q_1..q_m."""

    chi: tuple[FpVector, ...]
    psi: tuple[FpVector, ...]
    eta: tuple[FpVector, ...]
    psi_at_frob_q: tuple[int, ...]
    psi_frob_part_at_p: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.eta)

    def to_dict(self) -> dict:
        return {
            "chi": [list(v) for v in self.chi],
            "eta": [list(v) for v in self.eta],
            "psi": [list(v) for v in self.psi],
            "psi_at_frob_q": list(self.psi_at_frob_q),
            "psi_frob_part_at_p": list(self.psi_frob_part_at_p),
        }


def _normalize(v: Sequence[int], pivot: int, p: int) -> FpVector:
    inv = pow(v[pivot] % p, p - 2, p)
    return tuple(x * inv % p for x in v)


def character_basis(table: LinkingTable, m: int) -> RowCharacters:
    """Solve for chi_a, psi_a inside H^1 of the curve minus S0, and set eta_a = e_{q_a}.

    chi_a: ramified at p_a and zero on Frob_{q_a}, normalized to chi_a(tau_{p_a}) = 1.
    psi_a: nonzero on Frob_{q_a}, normalized to value 1 there.
    """
    p = table.p
    if len(table.places) != 2 * m:
        raise MarkedCurveError(f"table has {len(table.places)} places, expected {2 * m}")
    if m == 0:
        return RowCharacters((), (), (), (), ())
    S0 = [tp.q for tp in table.places[:m]]
    Q = [tp.q for tp in table.places[m:]]
    w_rows = [[table(t, q) for q in S0] for t in sorted(table.T)]
    pad = (0,) * m
    unit_space = kernel_basis(FpMatrix.from_rows(w_rows, p, ncols=m))
    chi, psi, at_q, at_p = [], [], [], []
    for a in range(m):
        f_row = [table(Q[a], q) for q in S0]
        sols = kernel_basis(FpMatrix.from_rows(w_rows + [f_row], p, ncols=m))
        c = next((v for v in sols if v[a]), None)
        if c is None:
            raise MarkedCurveError(
                f"no chi_{a + 1}: the system [T-splitting rows; Frob_{Q[a]} row] "
                f"forces the coefficient at {S0[a]} to vanish")
        chi.append(_normalize(c, a, p) + pad)
        d = next((v for v in unit_space
                  if sum(x * y for x, y in zip(v, f_row)) % p), None)
        if d is None:
            raise MarkedCurveError(
                f"no psi_{a + 1}: every character split at T vanishes on Frob_{Q[a]}")
        scale = pow(sum(x * y for x, y in zip(d, f_row)) % p, p - 2, p)
        d = tuple(x * scale % p for x in d) + pad
        psi.append(d)
        at_q.append(_frob(table, d, Q[a]))
        at_p.append(_frob(table, d, S0[a]))
    eta = [tuple(int(j == m + a) for j in range(2 * m)) for a in range(m)]
    return RowCharacters(tuple(chi), tuple(psi), tuple(eta), tuple(at_q), tuple(at_p))


@dataclass(frozen=True)
class CupMatrix:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    entries: FpMatrix
    row_characters: RowCharacters

    @property
    def m(self) -> int:
        return len(self.rows) // 2

    def to_dict(self) -> dict:
        return {"cols": list(self.cols), "entries": self.entries.to_lists(),
                "rows": list(self.rows)}


def assemble_cup_matrix(table: LinkingTable, chars: RowCharacters) -> CupMatrix:
    m = chars.m
    if len(table.places) != 2 * m:
        raise MarkedCurveError("character labels do not match the table places")
    cols = tuple(f"p{i + 1}={tp.q}" for i, tp in enumerate(table.places[:m])) + \
        tuple(f"q{i + 1}={tp.q}" for i, tp in enumerate(table.places[m:]))
    rows = tuple(f"chi{a + 1}.eta{a + 1}" for a in range(m)) + \
        tuple(f"psi{a + 1}.eta{a + 1}" for a in range(m))
    entries = [[local_cup(table, alpha, chars.eta[a], tp.q) for tp in table.places]
               for alpha, a in [(c, i) for i, c in enumerate(chars.chi)]
               + [(c, i) for i, c in enumerate(chars.psi)]]
    return CupMatrix(rows, cols, FpMatrix.from_rows(entries, table.p, ncols=2 * m), chars)


def shape_check(cup: CupMatrix) -> bool:
    """Block shape [[D1, 0], [*, D2]] with D1, D2 diagonal and nonzero on the diagonal.

    Requiring D1 diagonal (not merely nonzero on its diagonal) makes a
    passing matrix invertible.
    """
    M, m = cup.entries, cup.m
    if M.nrows != M.ncols or M.nrows != 2 * m:
        return False
    for a in range(m):
        for j in range(2 * m):
            top, bottom = M[a, j], M[m + a, j]
            if j == a and top == 0:
                return False
            if j != a and top != 0:
                return False
            if j >= m and (bottom != 0) != (j == m + a):
                return False
    return True


def vv_block_zero(table: LinkingTable, eta: Sequence[Sequence[int]]) -> bool:
    """Recompute every local component of eta_a u eta_b from the symbols."""
    for a, b in combinations(range(len(eta)), 2):
        for tp in table.places:
            if local_cup(table, eta[a], eta[b], tp.q):
                return False
    return True


def mildness_check(cup: CupMatrix, vv_zero: bool) -> bool:
    """V u V = 0 and U x V -> H^2 onto (rank 2m). False for m = 0."""
    if cup.m == 0:
        return False
    return bool(vv_zero) and rank(cup.entries) == 2 * cup.m


def mild_split_probe(places: Sequence[int], p: int,
                     roots: Mapping[int, int] | None = None) -> dict:
    """Search coordinate splits U | V of the characters of Q unramified outside ``places``.

    T is empty and all places tame, so the characters are the coordinate
    vectors e_r and H^2 has one column per place. A split is accepted when
    every local component of V u V vanishes and U x V reaches rank |places|.
    """
    places = [int(q) for q in places]
    table = build_linking_table(places, (), (), p, roots)
    n = len(places)
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    for k in range(1, n):
        for v_idx in combinations(range(n), k):
            u_idx = [i for i in range(n) if i not in v_idx]
            V = [basis[i] for i in v_idx]
            if not vv_block_zero(table, V):
                continue
            rows = [[local_cup(table, basis[u], basis[v], r) for r in places]
                    for u in u_idx for v in v_idx]
            if rank(FpMatrix.from_rows(rows, p, ncols=n)) == n:
                return {"mild": True, "U": [places[i] for i in u_idx],
                        "V": [places[i] for i in v_idx], "table": table.to_rows()}
    return {"mild": False, "U": None, "V": None, "table": table.to_rows()}


@dataclass(frozen=True)
class Certificate:
    data: dict

    @property
    def verdicts(self) -> dict:
        return self.data["verdicts"]

    @property
    def seeker(self) -> SeekerResult:
        s = self.data["seeker"]
        return SeekerResult(tuple(s["T0"]), tuple(s["S0"]), tuple(s["Q"]),
                            tuple(s["trace"]))

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MarkedCurveError(f"malformed certificate: {exc}") from exc
        if not isinstance(data, dict) or data.get("version") != CERT_VERSION:
            raise MarkedCurveError("malformed certificate: missing or unknown version")
        return cls(data)


_REQUIRED = ("version", "inputs", "roots", "seeker", "profile", "aux_profile",
             "table", "characters", "cup", "verdicts", "flags", "convention")


def _root_map(places: Iterable[int], rank_: int) -> dict[int, int]:
    return {q: primitive_root(q, rank_) for q in places}


def _evaluate(S: frozenset[int], T: frozenset[int], p: int, result: SeekerResult,
              roots: Mapping[int, int]) -> dict:
    """Everything in a certificate that follows from the inputs and the chosen primes."""
    marking = S | T
    m = result.m
    table = build_linking_table(result.S0, result.Q, marking, p, roots)
    chars = character_basis(table, m)
    cup = assemble_cup_matrix(table, chars)
    final = global_profile(S | set(result.added), T, p)
    aux = global_profile(set(result.added), marking, p)
    vv = vv_block_zero(table, chars.eta)
    shape = shape_check(cup)
    full = m > 0 and rank(cup.entries) == 2 * m == aux.h2
    mild = mildness_check(cup, vv)
    cd2 = mild
    ramified = all(
        ramifies_in_elementary(q, set(result.added), marking, p)
        and ramifies_in_elementary(q, S | set(result.added), T, p)
        for q in result.added)
    verdicts = {
        "vdim_zero": final.vdim == 0 and aux.vdim == 0,
        "shape_ok": shape,
        "rank_full": full,
        "vv_block_zero": vv,
        "mild": mild,
        "cd2": cd2,
        "kpi1": cd2 and full,
        "ramified_everywhere": ramified,
        "local_realization_claim": cd2 and full,
    }
    return {
        "table": table.to_rows(),
        "characters": chars.to_dict(),
        "cup": cup.to_dict(),
        "profile": final.to_dict(),
        "aux_profile": aux.to_dict(),
        "verdicts": verdicts,
    }


def certify(S: Iterable[int], T: Iterable[int], avoid: AvoidanceSet, p: int,
            cfg: SearchConfig = SearchConfig(), root_rank: int = 0,
            seeker_result: SeekerResult | None = None) -> Certificate:
    """Run the search and record every verdict.

    ``root_rank`` picks the primitive roots (0: smallest, 1: second smallest).
    A precomputed ``seeker_result`` skips the search.
    """
    require_odd_prime(p)
    S, T = prime_set(S, "S"), prime_set(T, "T")
    result = seeker_result or seek_certified_set(S, T, avoid, p, cfg)
    roots = _root_map(result.added, root_rank)
    body = _evaluate(S, T, p, result, roots)
    data = {
        "version": CERT_VERSION,
        "inputs": {"S": sorted(S), "T": sorted(T), "p": p, "avoid": avoid.to_dict(),
                   "cfg": cfg.to_dict()},
        "roots": {str(q): g for q, g in sorted(roots.items())},
        "seeker": result.to_dict(),
        "convention": PAIRING_CONVENTION,
        "flags": {"local_realization_claim": THEOREM_BACKED,
                  "free_product_claim": THEOREM_BACKED,
                  "cd2": "consequence of the mildness criterion"},
        **body,
    }
    return Certificate(json.loads(json.dumps(data, sort_keys=True)))


def _seeker_valid(S: frozenset[int], T: frozenset[int], p: int, avoid: AvoidanceSet,
                  result: SeekerResult) -> bool:
    marking = S | T
    everything = list(result.S0) + list(result.Q)
    if result.T0 or len(result.S0) != len(result.Q) or not result.S0:
        return False
    if len(set(everything)) != len(everything) or set(everything) & (marking | avoid.explicit):
        return False
    if any(q % p != 1 or avoid.excludes(q, p) for q in everything):
        return False
    if not drop_one_holds(result.S0, marking, p):
        return False
    S0p = [TamePrime(q, p) for q in result.S0]
    Qp = [TamePrime(q, p) for q in result.Q]
    return all(condition_Ba(Qp[a], a + 1, S0p, marking, Qp[:a]) for a in range(len(Qp)))


def verify(cert: Certificate, rerun_search: bool = False) -> bool:
    """Recompute everything from the inputs, chosen primes and recorded roots.

    True iff the primes pass the search conditions and every stored field
    matches the recomputation. ``rerun_search`` also repeats the search and
    requires the same primes.
    """
    data = cert.data
    missing = [k for k in _REQUIRED if k not in data]
    if missing or data.get("version") != CERT_VERSION:
        raise MarkedCurveError(f"malformed certificate: missing {missing or ['version']}")
    try:
        inp = data["inputs"]
        p = int(inp["p"])
        S, T = prime_set(inp["S"], "S"), prime_set(inp["T"], "T")
        avoid = AvoidanceSet.from_dict(inp["avoid"])
        cfg = SearchConfig(**inp["cfg"])
        result = cert.seeker
        roots = {int(q): int(g) for q, g in data["roots"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise MarkedCurveError(f"malformed certificate: {exc}") from exc
    require_odd_prime(p)
    if set(roots) != set(result.added):
        return False
    if not _seeker_valid(S, T, p, avoid, result):
        return False
    if rerun_search:
        again = seek_certified_set(S, T, avoid, p, cfg)
        if (again.S0, again.Q) != (result.S0, result.Q):
            return False
    try:
        body = _evaluate(S, T, p, result, roots)
    except MarkedCurveError:
        return False
    body = json.loads(json.dumps(body, sort_keys=True))
    if data["convention"] != PAIRING_CONVENTION:
        return False
    return all(data[k] == v for k, v in body.items())


def enlargement_check(cert: Certificate, extra: Iterable[int]) -> str:
    """'sufficient_yes' if no prime of ``extra`` splits in the elementary quotient.

    A nonzero Frobenius image in the elementary quotient of the enlarged
    set's group already rules out complete splitting in the full pro-p
    extension; a zero image decides nothing, hence 'inconclusive'.
    """
    data = cert.data
    p = int(data["inputs"]["p"])
    S, T = frozenset(data["inputs"]["S"]), frozenset(data["inputs"]["T"])
    extra = prime_set(extra, "extra")
    if extra & T:
        raise MarkedCurveError(f"extra primes overlap T: {sorted(extra & T)}")
    places = S | set(data["seeker"]["S0"]) | set(data["seeker"]["Q"])
    roots = {int(q): int(g) for q, g in data["roots"].items()}
    chars = elementary_characters(places, T, p, roots)
    for q in sorted(extra - places):
        image = chars.frob_image(q)
        if not any(sum(c * x for c, x in zip(b, image)) % p for b in chars.basis):
            return "inconclusive"
    return "sufficient_yes"
