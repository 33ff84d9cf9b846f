"""Command-line interface: ``kohn chain|invariants|member SPEC``.

Exit codes: 0 success/member, 1 input error, 2 stalled chain, 3 cap
exceeded, 4 non-member.
"""

from __future__ import annotations

import argparse
import json
import sys

from .chain import CAP_EXCEEDED, STALLED, SUCCESS, run_chain
from .domain import CapExceeded
from .groebner import ideal_member, radical_member
from .invariants import compute_invariants, default_probe_cap
from .parsing import ParseError, load_domain_spec, parse_polynomial
from .trace import chain_to_dict, chain_to_text, dumps, invariants_to_dict, invariants_to_text

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_STALLED = 2
EXIT_CAP = 3
EXIT_NONMEMBER = 4

_CHAIN_EXIT = {SUCCESS: EXIT_OK, STALLED: EXIT_STALLED, CAP_EXCEEDED: EXIT_CAP}


def _load(args):
    domain = load_domain_spec(args.spec)
    if getattr(args, "max_steps", None):
        domain.caps.max_steps = args.max_steps
    if getattr(args, "convention", None):
        domain.convention = args.convention
    return domain


def _emit(args, data: dict, text: str):
    if args.json:
        sys.stdout.write(dumps(data))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_chain(args) -> int:
    domain = _load(args)
    report = run_chain(domain.spec, domain.caps, domain.convention, threads=args.threads)
    invariants = None
    if args.invariants:
        invariants = compute_invariants(
            domain.spec, domain.caps, args.probe_cap or domain.probe_cap, args.trials or domain.trials or 8
        )
    _emit(args, chain_to_dict(report, invariants), chain_to_text(report, invariants))
    return _CHAIN_EXIT[report.status]


def cmd_invariants(args) -> int:
    domain = _load(args)
    cap = args.probe_cap or domain.probe_cap or default_probe_cap(domain.spec)
    trials = args.trials or domain.trials or 8
    report = compute_invariants(domain.spec, domain.caps, cap, trials)
    _emit(args, invariants_to_dict(report), invariants_to_text(report))
    return EXIT_OK if report.complete else EXIT_CAP


def cmd_member(args) -> int:
    domain = _load(args)
    poly = parse_polynomial(args.poly, domain.spec.n)
    name = args.ideal
    if len(name) < 2 or name[0] not in "JIji" or not name[1:].isdigit():
        raise ParseError(f"unknown ideal name {name!r}; use J1, J2, ..., I1, I2, ...")
    wanted = int(name[1:])
    caps = domain.caps
    caps.max_steps = max(caps.max_steps, wanted)
    report = run_chain(domain.spec, caps, domain.convention, threads=args.threads)
    try:
        ideal = report.ideal(name.upper())
    except KeyError as exc:
        raise ParseError(str(exc.args[0])) from None
    test = radical_member if args.radical else ideal_member
    member = test(poly, ideal, caps)
    relation = "in the radical of" if args.radical else "in"
    if member:
        verdict = f"member: {args.poly} is {relation} {name.upper()} (global membership certifies germ membership)"
    else:
        verdict = f"non-member: {args.poly} is not {relation} {name.upper()} (reported as global non-membership)"
    data = {"poly": args.poly, "ideal": name.upper(), "radical": args.radical, "member": member}
    _emit(args, data, verdict)
    return EXIT_OK if member else EXIT_NONMEMBER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kohn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="domain file (n = ..., F = ... lines)")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--json", action="store_true", help="machine-readable output")
        mode.add_argument("--text", dest="json", action="store_false", help="human-readable output (default)")
        p.add_argument("--threads", type=int, default=1, help="worker threads (wall-clock only)")
        p.add_argument("--convention", choices=["siu", "hermitian"], default=None)
        p.add_argument("--max-steps", type=int, default=None)

    p = sub.add_parser("chain", help="run Kohn's algorithm and print the trace")
    common(p)
    p.add_argument("--invariants", action="store_true", help="append the invariant report")
    p.add_argument("--probe-cap", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("invariants", help="compute s, q, the p bracket and the inequality checks")
    common(p)
    p.add_argument("--probe-cap", type=int, default=None, help="largest curve exponent probed")
    p.add_argument("--trials", type=int, default=None, help="random coefficient retries per curve")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("member", help="test membership in a chain ideal such as J2 or I1")
    common(p)
    p.add_argument("--poly", required=True)
    p.add_argument("--ideal", required=True)
    p.add_argument("--radical", action="store_true", help="test radical membership instead")
    p.set_defaults(func=cmd_member)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"kohn: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"kohn: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
