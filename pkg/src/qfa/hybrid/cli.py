# Copyright The qfa-hybrid Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
qfa-hybrid command line
-----------------------

::

    qfa-hybrid validate machine.json
    qfa-hybrid eval had_cl.json --input a
    qfa-hybrid convert had_cl.json --to mo1g --out had_cl_mo.json
    qfa-hybrid equiv had_cl.json had_cl_mo.json --method algebraic
    qfa-hybrid recognize even.json --as qfac
    qfa-hybrid bound had_cl.json had_cl_mo.json

Input words are read one character per symbol; ``--symbols csv`` reads
comma separated symbols instead. Probabilities are printed with 12 decimal
digits.

Exit codes: 0 success (or equivalent), 1 not equivalent, 2 invalid machine,
bad arguments or any other error.
"""

import argparse
import json
import logging
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from typing import List, Optional

from opentelemetry.trace import get_tracer

from qfa.hybrid.classical import Dfa
from qfa.hybrid.equivalence import (
    ALGEBRAIC,
    BOUNDED,
    EquivalenceVerdict,
    equiv_any,
    equiv_bound_hybrid,
)
from qfa.hybrid.errors import QfaError
from qfa.hybrid.formats import read_machine, serialize_machine
from qfa.hybrid.machines import (
    KINDS,
    Qsm,
    accept_prob,
    hybrid_size,
    machine_kind,
    qsm_output_prob,
    validate_machine,
)
from qfa.hybrid.transforms import convert
from qfa.hybrid.version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_ERROR = 2

_QUANTUM = Decimal("0.000000000001")


def format_probability(value: float) -> str:
    """Clamped to ``[0, 1]``, 12 decimals, round half to even."""
    value = min(max(value, 0.0), 1.0)
    return "{:f}".format(
        Decimal(value).quantize(_QUANTUM, rounding=ROUND_HALF_EVEN)
    )


def _word(text: str, symbols: str):
    if symbols == "csv":
        return tuple(text.split(",")) if text else ()
    return tuple(text)


def _render(word, symbols: str) -> str:
    return json.dumps(("," if symbols == "csv" else "").join(word))


def _emit(machine, out: Optional[str]):
    text = serialize_machine(machine)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _validate(args) -> int:
    machine = read_machine(args.file, validate=False)
    violations = validate_machine(machine)
    for violation in violations:
        print(violation)
    if violations:
        return EXIT_ERROR
    print("valid {}".format(machine_kind(machine)))
    return EXIT_OK


def _eval(args) -> int:
    machine = read_machine(args.file)
    word = _word(args.input, args.symbols)
    if isinstance(machine, Qsm):
        if args.output is None:
            raise QfaError("qsm machines need --output")
        value = qsm_output_prob(
            machine, word, _word(args.output, args.symbols)
        )
    else:
        value = accept_prob(machine, word)
    print(format_probability(value))
    return EXIT_OK


def _convert(args) -> int:
    machine = read_machine(args.file)
    accepting = None
    if args.accepting is not None:
        accepting = [s for s in args.accepting.split(",") if s]
    _emit(
        convert(
            machine,
            args.to,
            accepting,
            tracer_provider=args.tracer_provider,
        ),
        args.out,
    )
    return EXIT_OK


def _print_verdict(verdict: EquivalenceVerdict, symbols: str):
    if not verdict.equivalent:
        print("not equivalent")
        print(
            "counterexample: {}".format(
                _render(verdict.counterexample, symbols)
            )
        )
        print("left: {}".format(format_probability(verdict.prob_left)))
        print("right: {}".format(format_probability(verdict.prob_right)))
        return
    if verdict.within_tolerance:
        print(
            "equivalent (within tolerance, max residual {:.1e})".format(
                verdict.max_residual
            )
        )
    else:
        print("equivalent")
    if verdict.method == BOUNDED:
        print("strings checked: {}".format(verdict.strings_checked))
    else:
        print("span dimension: {}".format(verdict.span_dimension))


def _equiv(args) -> int:
    first = read_machine(args.first)
    second = read_machine(args.second)
    verdict = equiv_any(
        first,
        second,
        args.method,
        args.max_len,
        tracer_provider=args.tracer_provider,
    )
    _print_verdict(verdict, args.symbols)
    return EXIT_OK if verdict.equivalent else EXIT_NOT_EQUIVALENT


def _recognize(args) -> int:
    machine = read_machine(args.file)
    if not isinstance(machine, Dfa):
        raise QfaError(
            "recognize needs a dfa, got {}".format(machine_kind(machine))
        )
    _emit(
        convert(
            machine, args.kind, tracer_provider=args.tracer_provider
        ),
        args.out,
    )
    return EXIT_OK


def _bound(args) -> int:
    first = read_machine(args.first)
    second = read_machine(args.second)
    print(equiv_bound_hybrid(*hybrid_size(first), *hybrid_size(second)))
    return EXIT_OK


_COMMANDS = {
    "validate": _validate,
    "eval": _eval,
    "convert": _convert,
    "equiv": _equiv,
    "recognize": _recognize,
    "bound": _bound,
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="Log debug messages to stderr.",
    )
    common.add_argument(
        "--symbols",
        choices=["chars", "csv"],
        default="chars",
        help="""
        chars - every character of a word is one symbol.
        csv - symbols are separated by commas.
        """,
    )

    parser = argparse.ArgumentParser(
        prog="qfa-hybrid",
        description="""
        qfa-hybrid evaluates, converts and compares quantum finite
        automata with classical states.
        """,
    )
    parser.add_argument(
        "--version", action="version", version=__version__
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    validate = commands.add_parser(
        "validate", parents=[common], help="List invariant violations."
    )
    validate.add_argument("file")

    evaluate = commands.add_parser(
        "eval", parents=[common], help="Print an acceptance probability."
    )
    evaluate.add_argument("file")
    evaluate.add_argument("--input", required=True)
    evaluate.add_argument(
        "--output", help="Output word, required for qsm machines."
    )

    conversion = commands.add_parser(
        "convert", parents=[common], help="Convert to another model."
    )
    conversion.add_argument("file")
    conversion.add_argument(
        "--to", required=True, choices=sorted(KINDS.values())
    )
    conversion.add_argument("--out")
    conversion.add_argument(
        "--accepting",
        help="Comma separated accepting states assigned to a qsm.",
    )

    equivalence = commands.add_parser(
        "equiv", parents=[common], help="Decide equivalence of acceptors."
    )
    equivalence.add_argument("first")
    equivalence.add_argument("second")
    equivalence.add_argument(
        "--method", choices=[BOUNDED, ALGEBRAIC], default=BOUNDED
    )
    equivalence.add_argument("--max-len", type=int)

    recognize = commands.add_parser(
        "recognize",
        parents=[common],
        help="Build a machine accepting a DFA's language with certainty.",
    )
    recognize.add_argument("file")
    recognize.add_argument(
        "--as", dest="kind", required=True, choices=["mo1g", "qfac", "qcfa"]
    )
    recognize.add_argument("--out")

    bound = commands.add_parser(
        "bound",
        parents=[common],
        help="Print the word length bound deciding equivalence.",
    )
    bound.add_argument("first")
    bound.add_argument("second")
    return parser


def run(argv: Optional[List[str]] = None, tracer_provider=None) -> int:
    args = _parser().parse_args(argv)
    args.tracer_provider = tracer_provider
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
    )
    tracer = get_tracer(__name__, __version__, tracer_provider)
    with tracer.start_as_current_span("qfa.cli." + args.command):
        try:
            return _COMMANDS[args.command](args)
        except QfaError as error:
            print("error: {}".format(error.message), file=sys.stderr)
            return EXIT_ERROR
        except OSError as error:
            print("error: {}".format(error), file=sys.stderr)
            return EXIT_ERROR


def main():
    sys.exit(run())
