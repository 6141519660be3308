"""Command-line interface: ``markedcurve <subcommand> --p P --S ... --T ...``.

Exit codes: 0 success, 1 domain error (message and any search trace on
stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .cohomology import global_profile
from .errors import MarkedCurveError, SearchExhaustedError
from .kummer import TUnitBasis, kummer_group
from .mildness import (
    PAIRING_CONVENTION,
    Certificate,
    build_linking_table,
    certify,
    enlargement_check,
    verify,
)
from .modarith import AvoidanceSet
from .seeker import DEFAULT_MAX_CANDIDATES, DEFAULT_MAX_PRIME, SearchConfig, find_S0_killing_V

ENV_MAX_PRIME = "MARKEDCURVE_MAX_PRIME"
_CONGRUENCE = re.compile(r"^\s*(\d+)\s*mod\s*(\d+)\s*$")


def prime_list(text: str) -> list[int]:
    """Comma-separated integers; the empty string is the empty list."""
    items = [x.strip() for x in text.split(",") if x.strip()]
    try:
        return [int(x) for x in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def parse_avoid(items: Sequence[str] | None) -> AvoidanceSet:
    """Combine --avoid values: 'divisors-of-p', 'none', 'r mod m', or a prime list."""
    explicit: list[int] = []
    congruences: list[tuple[int, int]] = []
    divisors = True
    for item in items or ["divisors-of-p"]:
        if item == "divisors-of-p":
            continue
        if item == "none":
            divisors = False
            continue
        match = _CONGRUENCE.match(item)
        if match:
            congruences.append((int(match[1]), int(match[2])))
        else:
            explicit.extend(prime_list(item))
    return AvoidanceSet.of(explicit, congruences, divisors)


def _default_max_prime() -> int:
    raw = os.environ.get(ENV_MAX_PRIME)
    if raw is None:
        return DEFAULT_MAX_PRIME
    try:
        return int(raw)
    except ValueError:
        raise MarkedCurveError(f"{ENV_MAX_PRIME} must be an integer, got {raw!r}")


def _emit(args, payload: dict, text: str) -> None:
    payload = {"tool": "markedcurve", "version": __version__, **payload}
    if args.format == "structured":
        out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        out = text.rstrip("\n") + "\n"
    if getattr(args, "out", None) and args.command != "certify":
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def cmd_cohomology(args) -> None:
    prof = global_profile(args.S, args.T, args.p)
    text = (f"markedcurve {__version__}\n"
            f"S={sorted(prof.S)} T={sorted(prof.T)} p={prof.p}\n"
            f"h=({', '.join(map(str, prof.h))}), chi={prof.chi}\n"
            f"vdim={prof.vdim} theta={prof.theta}")
    _emit(args, {"profile": prof.to_dict()}, text)


def cmd_kummer(args) -> None:
    kg = kummer_group(args.S, args.T, args.p)
    gens = TUnitBasis.of(args.T)
    elems = [str(gens.evaluate(v)) for v in kg.basis]
    text = (f"markedcurve {__version__}\n"
            f"dim V = {kg.dim} (S={sorted(kg.S)}, T={sorted(kg.T)}, p={kg.p})\n"
            f"generators: {list(gens.generators)}\n"
            + "".join(f"  {list(v)}  ~ {e}\n" for v, e in zip(kg.basis, elems)))
    _emit(args, {"kummer": {"S": sorted(kg.S), "T": sorted(kg.T), "p": kg.p, "dim": kg.dim,
                            "generators": list(gens.generators),
                            "basis": [list(v) for v in kg.basis], "elements": elems}},
          text)


def _config(args) -> SearchConfig:
    return SearchConfig(args.max_prime if args.max_prime is not None else _default_max_prime(),
                        args.max_candidates)


def cmd_find_s0(args) -> None:
    S0 = find_S0_killing_V(args.T, parse_avoid(args.avoid), args.p, _config(args))
    text = f"markedcurve {__version__}\nS0 = {list(S0)} (T={sorted(args.T)}, p={args.p})"
    _emit(args, {"S0": list(S0), "T": sorted(args.T), "p": args.p}, text)


def cmd_linking(args) -> None:
    table = build_linking_table(args.S, args.Q, args.T, args.p)
    lines = [f"markedcurve {__version__}",
             "roots: " + (", ".join(f"g_{q}={g}" for q, g in sorted(table.roots.items()))
                          or "none")]
    lines += [f"l({a}, {q}) = {v}" for a, q, v in table.to_rows()]
    _emit(args, {"p": args.p, "roots": {str(q): g for q, g in sorted(table.roots.items())},
                 "symbols": table.to_rows()}, "\n".join(lines))


def _summary(cert: Certificate) -> str:
    d = cert.data
    s = d["seeker"]
    lines = [
        f"markedcurve {__version__} ({d['version']})",
        f"S={d['inputs']['S']} T={d['inputs']['T']} p={d['inputs']['p']}",
        f"S0={s['S0']} Q={s['Q']} T0={s['T0']} m={len(s['S0'])}",
        "roots: " + ", ".join(f"g_{q}={g}" for q, g in d["roots"].items()),
        f"pairing: {PAIRING_CONVENTION}",
        f"profile(S u S0 u Q, T): h={tuple(d['profile']['h'])} chi={d['profile']['chi']}",
        "cup matrix:",
    ]
    lines += ["  " + " ".join(str(x) for x in row) for row in d["cup"]["entries"]]
    lines += [f"{k}: {v}" for k, v in sorted(d["verdicts"].items())]
    lines += [f"note {k}: {v}" for k, v in sorted(d["flags"].items())]
    return "\n".join(lines)


def cmd_certify(args) -> None:
    cert = certify(args.S, args.T, parse_avoid(args.avoid), args.p, _config(args),
                   root_rank=args.root_rank)
    if args.out:
        Path(args.out).write_text(cert.to_json())
    if args.format == "structured":
        sys.stdout.write(cert.to_json())
    else:
        sys.stdout.write(_summary(cert) + "\n")


def _load(path: str) -> Certificate:
    try:
        return Certificate.from_json(Path(path).read_text())
    except OSError as exc:
        raise MarkedCurveError(f"cannot read certificate: {exc}") from exc


def cmd_verify(args) -> int:
    cert = _load(args.certificate)
    ok = verify(cert, rerun_search=args.rerun_search)
    _emit(args, {"verify": ok, "verdicts": cert.verdicts},
          f"markedcurve {__version__}\nverify: {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_enlarge(args) -> None:
    cert = _load(args.certificate)
    verdict = enlargement_check(cert, args.extra)
    _emit(args, {"enlarge": verdict, "extra": sorted(args.extra)},
          f"markedcurve {__version__}\nextra={sorted(args.extra)}: {verdict}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="markedcurve", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"markedcurve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(name, help_, sets=("S", "T")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.add_argument("--out", default=None, help="write output to this file")
        if sets:
            sp.add_argument("--p", type=int, required=True)
        for s in sets:
            sp.add_argument(f"--{s}", type=prime_list, default=[])
        return sp

    def search(sp):
        sp.add_argument("--avoid", action="append", default=None,
                        help="'divisors-of-p' (default), 'none', 'r mod m' or a prime list; repeatable")
        sp.add_argument("--max-prime", type=int, default=None,
                        help=f"search bound (default ${ENV_MAX_PRIME} or {DEFAULT_MAX_PRIME})")
        sp.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES)

    common("cohomology", "dimensions h^0..h^3 of the marked curve").set_defaults(func=cmd_cohomology)
    common("kummer", "the Kummer group V_S^T").set_defaults(func=cmd_kummer)
    sp = common("find-s0", "greedy drop-one set killing V", sets=("T",))
    search(sp)
    sp.set_defaults(func=cmd_find_s0)
    sp = common("linking", "linking symbols among S and Q, and from T", sets=("S", "Q", "T"))
    sp.set_defaults(func=cmd_linking)
    sp = common("certify", "search and certify")
    search(sp)
    sp.add_argument("--root-rank", type=int, choices=(0, 1), default=0,
                    help="primitive roots: 0 smallest, 1 second smallest")
    sp.set_defaults(func=cmd_certify)
    sp = common("verify", "recompute a certificate", sets=())
    sp.add_argument("certificate")
    sp.add_argument("--rerun-search", action="store_true")
    sp.set_defaults(func=cmd_verify)
    sp = common("enlarge", "sufficient test for enlarging the prime set", sets=())
    sp.add_argument("certificate")
    sp.add_argument("--extra", type=prime_list, required=True)
    sp.set_defaults(func=cmd_enlarge)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except SearchExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(json.dumps({"trace": exc.trace}, sort_keys=True, indent=2), file=sys.stderr)
        return 1
    except MarkedCurveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
