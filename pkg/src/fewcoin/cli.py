"""Command-line interface.

Exit codes: 0 for success or an accepting verdict, 1 for rejection or
non-membership, 2 for usage, parse, or validation errors.  All
probabilities print as exact fractions.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import automata, derandom, formats, markov, showcase
from .compiler import (CompiledVerifier, compile_strong, compile_weak,
                       honest_certificate, NotMemberError)
from .formats import MachineFormatError, format_fraction
from .symbols import HeadMode
from .verifier import (VerifierMachine, best_certificate,
                       outcome_distribution, validate_verifier)

USAGE_ERROR = 2


class CliError(Exception):
    def __init__(self, message, code=USAGE_ERROR):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="ascii") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _load_machine(path: str):
    try:
        return formats.parse_machine(_read(path))
    except MachineFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _load_automaton(path: str) -> automata.MultiheadAutomaton:
    m = _load_machine(path)
    if not isinstance(m, automata.MultiheadAutomaton):
        raise CliError(f"{path}: expected a multihead automaton file")
    report = automata.validate(m)
    if not report.ok:
        detail = "; ".join(f"{kind}: {msg}" for kind, msg in report.violations)
        raise CliError(f"{path}: invalid machine ({detail})")
    return m


def _load_verifier(path: str) -> VerifierMachine:
    m = _load_machine(path)
    if isinstance(m, CompiledVerifier):
        m = m.verifier
    if not isinstance(m, VerifierMachine):
        raise CliError(f"{path}: expected a verifier file")
    problems = validate_verifier(m)
    if problems:
        detail = "; ".join(f"{kind}: {msg}" for kind, msg in problems)
        raise CliError(f"{path}: invalid verifier ({detail})")
    return m


def _load_certificate(arg: str, v: VerifierMachine) -> list:
    """Certificate from a file path or an inline argument; an inline word
    whose characters are all communication symbols splits per character."""
    if os.path.exists(arg):
        return formats.parse_certificate(_read(arg))
    tokens = arg.split()
    if not tokens:
        return []
    if all(t in v.comm_alphabet for t in tokens):
        return tokens
    joined = "".join(tokens)
    if all(ch in v.comm_alphabet for ch in joined):
        return list(joined)
    return tokens


def _check_input(x: str, alphabet):
    bad = sorted(set(x) - set(alphabet))
    if bad:
        raise CliError(f"input contains symbols outside the alphabet: "
                       + " ".join(bad))


def cmd_check(args) -> int:
    m = _load_automaton(args.machine)
    _check_input(args.input, m.alphabet)
    if automata.accepts(m, args.input):
        print("accept")
        return 0
    print("reject")
    return 1


def cmd_compile(args) -> int:
    m = _load_automaton(args.machine)
    if args.strong:
        compiled = compile_strong(m)
    else:
        if args.eps is None:
            raise CliError("--eps is required unless --strong is given")
        try:
            eps = Fraction(args.eps)
        except (ValueError, ZeroDivisionError):
            raise CliError(f"bad error bound {args.eps!r}") from None
        if not 0 < eps < 1:
            raise CliError("error bound must be strictly between 0 and 1")
        compiled = compile_weak(m, eps)
    sys.stdout.write(formats.serialize_compiled(compiled))
    return 0


def cmd_cert(args) -> int:
    m = _load_machine(args.compiled)
    if not isinstance(m, CompiledVerifier):
        raise CliError(f"{args.compiled}: expected a compiled verifier file")
    _check_input(args.input, m.source.alphabet)
    try:
        cert = honest_certificate(m, args.input)
    except NotMemberError:
        print("not a member")
        return 1
    sys.stdout.write(formats.serialize_certificate(cert))
    return 0


def cmd_prob(args) -> int:
    v = _load_verifier(args.verifier)
    _check_input(args.input, v.input_alphabet)
    cert = _load_certificate(args.cert, v)
    print(outcome_distribution(v, args.input, cert))
    return 0


def cmd_attack(args) -> int:
    v = _load_verifier(args.verifier)
    _check_input(args.input, v.input_alphabet)
    result = best_certificate(v, args.input, args.maxlen)
    print(f"best={format_fraction(result.p_accept)}")
    print("cert= " + " ".join(result.certificate))
    return 0


def cmd_derand(args) -> int:
    v = _load_verifier(args.verifier)
    if args.mode == "onenfa":
        try:
            m = derandom.materialize_one_way(v, rename=True)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        sys.stdout.write(formats.serialize_automaton(m))
        return 0
    if args.input is None or args.cert is None:
        raise CliError(f"derand {args.mode} needs <input> <certificate-file>")
    _check_input(args.input, v.input_alphabet)
    if args.mode == "private":
        columns = formats.parse_multitrack(_read(args.cert))
        result = derandom.check_private_coin(v, args.input, columns)
    else:
        transcripts = formats.parse_transcripts(_read(args.cert))
        result = derandom.check_public_coin(v, args.input, transcripts)
    if result.accepted:
        print(f"accept ({result.reason})")
        return 0
    print(f"reject ({result.reason})")
    return 1


def cmd_markov(args) -> int:
    m = _load_machine(args.machine)
    if isinstance(m, CompiledVerifier):
        m = m.verifier
    if not isinstance(m, VerifierMachine):
        raise CliError(f"{args.machine}: expected a verifier-format 2pfa file")
    if not args.x or not args.y:
        raise CliError("both halves of the input must be nonempty")
    _check_input(args.x + args.y, m.input_alphabet)
    try:
        split = markov.build_split_chain(m, args.x, args.y)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(formats.serialize_chain(split.chain))
    print(f"accept={format_fraction(split.acceptance_probability())}")
    return 0


_ORACLES = {
    "twin": (showcase.twin_oracle, "abc"),
    "nh": (showcase.nh_oracle, "ab"),
    "all": (lambda x: True, "ab"),
    "even-length": (lambda x: len(x) % 2 == 0, "ab"),
}


def cmd_dissim(args) -> int:
    if args.oracle not in _ORACLES:
        raise CliError(f"unknown oracle {args.oracle!r}; choose from "
                       + ", ".join(sorted(_ORACLES)))
    membership, alphabet = _ORACLES[args.oracle]
    report = markov.n_dissimilarity(membership, alphabet, args.n)
    print(f"N={report.value}")
    for w in report.witnesses:
        print(f"witness: {w!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fewcoin",
        description="Multihead automata, constant-coin verifiers, and "
                    "exact probabilistic analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run a multihead automaton on an input")
    p.add_argument("machine")
    p.add_argument("input")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compile", help="compile an automaton into a verifier")
    p.add_argument("machine")
    p.add_argument("--eps", help="target error bound, e.g. 1/4")
    p.add_argument("--strong", action="store_true")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("cert", help="honest certificate for a member string")
    p.add_argument("compiled")
    p.add_argument("input")
    p.set_defaults(func=cmd_cert)

    p = sub.add_parser("prob", help="exact outcome distribution")
    p.add_argument("verifier")
    p.add_argument("input")
    p.add_argument("cert")
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("attack", help="best certificate up to a length")
    p.add_argument("verifier")
    p.add_argument("input")
    p.add_argument("--maxlen", type=int, required=True)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("derand", help="deterministic certificate checking")
    p.add_argument("verifier")
    p.add_argument("mode", choices=["private", "public", "onenfa"])
    p.add_argument("input", nargs="?")
    p.add_argument("cert", nargs="?")
    p.set_defaults(func=cmd_derand)

    p = sub.add_parser("markov", help="split chain of a 2pfa on x|y")
    p.add_argument("machine")
    p.add_argument("x")
    p.add_argument("y")
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("dissim", help="pairwise dissimilarity measure")
    p.add_argument("oracle")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_dissim)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except MachineFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
