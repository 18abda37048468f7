"""Command-line front end.

Every command prints one envelope ``{schema, command, ok, payload, error}``,
as JSON with ``--json`` or as ``key: value`` lines otherwise.

Exit codes: 0 success / member, 1 clean negative, 2 internal invariant
breach, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys

from . import __version__
from .core import bcde, d4, d4x2x2_fast, d4x2x2_oracle, coeff_vec
from .errors import InternalError, NotMemberError, UsageError
from .sets import GroupTag, classify_group
from .verify import (
    check_inclusion_chain,
    check_lemma_3_2,
    check_lemma_4_4,
    check_lemmas_4_5_to_4_10,
    check_remarks,
    search_cross_validate,
)
from .witness import synthesize

SCHEMA = 1
EXIT_OK, EXIT_NEGATIVE, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2, 64
MAX_INPUT_BITS = 128

SUITES = ("remarks", "lemma32", "lemma44", "lemma45-410", "chain", "all")
DEFAULT_BOUNDS = {"remarks": 3, "lemma44": 8, "lemma45-410": 4, "chain": 1 << 26}

_INT_RE = re.compile(r"^(-?)(?:2\^(\d+)(?:\*(-?\d+))?|(\d+))$")


def parse_int(text: str) -> int:
    """Decimal integer, or the shorthand ``2^k`` / ``2^k*m``, optionally negated."""
    m = _INT_RE.match(text.strip().replace("_", ""))
    if not m:
        raise UsageError(f"cannot parse integer {text!r}")
    neg, k, mult, plain = m.groups()
    value = int(plain) if plain is not None else (1 << int(k)) * int(mult or 1)
    value = -value if neg else value
    if value.bit_length() > MAX_INPUT_BITS:
        raise UsageError(f"{text!r} exceeds {MAX_INPUT_BITS} bits")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_arg(text: str) -> int:
    try:
        return parse_int(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a JSON envelope")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    parser = _Parser(prog="groupdet", parents=[common],
                     description="Integer group determinants of C4 x C2 x C2.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate a 16-coefficient vector")
    p.add_argument("coeffs", nargs="*", type=_int_arg)
    p.add_argument("--oracle", action="store_true", help="also run the 16x16 determinant")

    p = sub.add_parser("classify", parents=[common], help="decide membership of a value")
    p.add_argument("value", type=_int_arg)
    p.add_argument("--group", default=GroupTag.C4xC2xC2.value,
                   choices=[g.value for g in GroupTag])

    p = sub.add_parser("witness", parents=[common], help="build a verified witness vector")
    p.add_argument("value", type=_int_arg)
    p.add_argument("--emit-file", metavar="PATH", help="append the witness as a JSON line")

    p = sub.add_parser("verify", parents=[common], help="run bounded lemma checks")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--bound", type=_int_arg,
                   help="box bound (remarks/lemma44/lemma45-410) or magnitude bound (chain)")
    p.add_argument("--samples", type=int, default=10**5, help="chain sample count")
    p.add_argument("--quota", type=int, default=100,
                   help="non-vacuous cases required per conditional lemma")
    p.add_argument("--allow-inconclusive", action="store_true")

    p = sub.add_parser("search", parents=[common], help="soundness search over vectors")
    p.add_argument("--mode", choices=("exhaustive01", "random"), default="random")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--entry-bound", type=int, default=3)
    return parser


def _threads(args) -> int:
    n = getattr(args, "threads", None)
    if n is None:
        n = int(os.environ.get("GROUPDET_THREADS", "1"))
    if n < 1:
        raise UsageError("--threads must be >= 1")
    return n


def cmd_eval(args):
    if len(args.coeffs) != 16:
        raise UsageError(f"eval needs exactly 16 coefficients, got {len(args.coeffs)}")
    a = coeff_vec(args.coeffs)
    t = bcde(a)
    payload = {
        "value": d4x2x2_fast(a),
        "b": list(t.b), "c": list(t.c), "d": list(t.d), "e": list(t.e),
        "d4_factors": [d4(*q) for q in t.quads()],
    }
    if args.oracle:
        payload["oracle_value"] = d4x2x2_oracle(a)
        payload["agree"] = payload["oracle_value"] == payload["value"]
        if not payload["agree"]:
            raise InternalError("fast path and oracle disagree", payload)
    return payload, EXIT_OK


def cmd_classify(args):
    c = classify_group(args.group, args.value)
    return c.as_dict(), EXIT_OK if c.member else EXIT_NEGATIVE


def cmd_witness(args):
    w = synthesize(args.value)
    record = w.as_dict()
    if args.emit_file:
        with open(args.emit_file, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record) + "\n")
    return record, EXIT_OK


def _run_suite(name, bound, args):
    seed = getattr(args, "seed", None)
    b = DEFAULT_BOUNDS.get(name) if bound is None else bound
    if name == "remarks":
        return [check_remarks(b, seed=0 if seed is None else seed)]
    if name == "lemma32":
        return [check_lemma_3_2()]
    if name == "lemma44":
        return [check_lemma_4_4(b)]
    if name == "lemma45-410":
        return check_lemmas_4_5_to_4_10(b, quota=args.quota)
    return [check_inclusion_chain(args.samples, b, 7 if seed is None else seed)]


def cmd_verify(args):
    if args.suite == "all":
        if args.bound is not None:
            raise UsageError("--bound is per suite; run suites individually to set it")
        names = SUITES[:-1]
    else:
        names = (args.suite,)
    reports = [r for name in names for r in _run_suite(name, args.bound, args)]
    good = all(
        r.passed and (args.allow_inconclusive or not r.inconclusive) for r in reports
    )
    return [r.as_dict() for r in reports], EXIT_OK if good else EXIT_NEGATIVE


def cmd_search(args):
    seed = getattr(args, "seed", None)
    s = search_cross_validate(
        args.mode, args.budget, args.entry_bound, 42 if seed is None else seed,
        threads=_threads(args),
    )
    return s.as_dict(), EXIT_OK if s.violation_count == 0 else EXIT_NEGATIVE


COMMANDS = {
    "eval": cmd_eval,
    "classify": cmd_classify,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "search": cmd_search,
}


def envelope(command, payload=None, error=None) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "ok": error is None,
        "payload": payload,
        "error": error,
    }


def render_text(env: dict) -> str:
    lines = [f"command: {env['command']}", f"ok: {str(env['ok']).lower()}"]
    if env["error"]:
        lines.append(f"error: [{env['error']['code']}] {env['error']['message']}")
    payload = env["payload"]
    if isinstance(payload, dict):
        for k, v in payload.items():
            lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v)}")
    elif isinstance(payload, list):
        for item in payload:
            lines.append(json.dumps(item))
    return "\n".join(lines)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    want_json = "--json" in argv
    command = next((a for a in argv if a in COMMANDS), None)
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        payload, code = COMMANDS[command](args)
        env = envelope(command, payload)
    except UsageError as exc:
        env, code = envelope(command, error={"code": "usage", "message": str(exc)}), EXIT_USAGE
    except NotMemberError as exc:
        env = envelope(command, exc.classification.as_dict(),
                       {"code": "not_member", "message": str(exc)})
        code = EXIT_NEGATIVE
    except InternalError as exc:
        payload = exc.args[1] if len(exc.args) > 1 else None
        env = envelope(command, payload, {"code": "internal", "message": str(exc.args[0])})
        code = EXIT_INTERNAL
    print(json.dumps(env) if want_json else render_text(env))
    return code


if __name__ == "__main__":
    sys.exit(main())
