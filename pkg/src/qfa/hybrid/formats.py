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
Machine documents
-----------------

Machines are exchanged as UTF-8 JSON objects::

    {
      "kind": "dfa",
      "version": 1,
      "states": ["s1", "s2"],
      "alphabet": ["a"],
      "initial": "s1",
      "accepting": ["s1"],
      "delta": {"s1|a": "s2", "s2|a": "s1"}
    }

Complex scalars are ``[re, im]`` pairs and matrices are lists of rows of
such pairs. Maps keyed by several labels, e.g. ``U_{s,sigma}``, use keys
joined by ``|``, which labels therefore may not contain. Unknown fields are
rejected.

:func:`serialize_machine` writes a canonical form: sorted keys, floats with
17 significant digits and one matrix row per line, so serializing a machine
twice gives identical text.
"""

import json
import math
from functools import singledispatch
from logging import getLogger
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from qfa.hybrid.channels import (
    GeneralMeasurement,
    ProjectiveMeasurement,
    QuantumOperation,
)
from qfa.hybrid.classical import Dfa
from qfa.hybrid.errors import (
    MachineSemanticError,
    MachineSyntaxError,
    MachineValidationError,
    QfaError,
)
from qfa.hybrid.linalg import subset_of_projector
from qfa.hybrid.machines import (
    AncillaQfa,
    Cl1Qfa,
    Machine,
    Mo1gQfa,
    Qcfa1,
    Qfac1,
    Qsm,
    machine_kind,
    validate_machine,
)

logger = getLogger(__name__)

FORMAT_VERSION = 1
SEPARATOR = "|"


# Reading


def _path(parent: str, name: str) -> str:
    return "{}.{}".format(parent, name) if parent else name


def _unique_keys(pairs):
    document = {}
    for key, value in pairs:
        if key in document:
            raise MachineSemanticError(key, "duplicate key")
        document[key] = value
    return document


def _object(value, path: str, required, optional=()) -> dict:
    if not isinstance(value, dict):
        raise MachineSemanticError(path or "document", "expected an object")
    unknown = sorted(set(value) - set(required) - set(optional))
    if unknown:
        raise MachineSemanticError(_path(path, unknown[0]), "unknown field")
    for name in required:
        if name not in value:
            raise MachineSemanticError(_path(path, name), "missing field")
    return value


def _label(value, path: str, declared=None) -> str:
    if not isinstance(value, str):
        raise MachineSemanticError(path, "expected a string label")
    if SEPARATOR in value:
        raise MachineSemanticError(
            path, "label {!r} contains {!r}".format(value, SEPARATOR)
        )
    if declared is not None and value not in declared:
        raise MachineSemanticError(
            path, "label {!r} is not declared".format(value)
        )
    return value


def _labels(value, path: str, declared=None) -> Tuple[str, ...]:
    if not isinstance(value, list):
        raise MachineSemanticError(path, "expected a list of labels")
    labels = tuple(
        _label(item, "{}[{}]".format(path, index), declared)
        for index, item in enumerate(value)
    )
    if len(set(labels)) != len(labels):
        raise MachineSemanticError(path, "duplicate labels")
    return labels


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MachineSemanticError(path, "expected a number")
    try:
        number = float(value)
    except OverflowError:
        raise MachineSemanticError(path, "number out of range") from None
    if not math.isfinite(number):
        raise MachineSemanticError(path, "expected a finite number")
    return number


def _complex(value, path: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise MachineSemanticError(path, "expected a [re, im] pair")
    return complex(_number(value[0], path), _number(value[1], path))


def _matrix(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise MachineSemanticError(path, "expected a non-empty matrix")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != len(value[0]):
            raise MachineSemanticError(
                path, "row {} has the wrong length".format(i)
            )
        rows.append(
            [
                _complex(entry, "{}[{}][{}]".format(path, i, j))
                for j, entry in enumerate(row)
            ]
        )
    if not rows[0]:
        raise MachineSemanticError(path, "expected a non-empty matrix")
    return np.array(rows, dtype=np.complex128)


def _keyed(
    value, path: str, parts: Sequence[Sequence[str]], convert: Callable
) -> Dict:
    """Reads an object keyed by ``|``-joined labels, checked against the
    declared label lists in ``parts``."""
    if not isinstance(value, dict):
        raise MachineSemanticError(path, "expected an object")
    result = {}
    for key, item in value.items():
        field = _path(path, key)
        labels = key.split(SEPARATOR)
        if len(labels) != len(parts):
            raise MachineSemanticError(
                field, "expected {} labels in the key".format(len(parts))
            )
        for label, declared in zip(labels, parts):
            _label(label, field, declared)
        index = labels[0] if len(parts) == 1 else tuple(labels)
        result[index] = convert(item, field)
    return result


def _total(mapping: Dict, path: str, parts: Sequence[Sequence[str]]):
    expected = [()]
    for declared in parts:
        expected = [key + (label,) for key in expected for label in declared]
    for key in expected:
        index = key[0] if len(parts) == 1 else key
        if index not in mapping:
            raise MachineSemanticError(
                path, "missing entry for ({})".format(", ".join(key))
            )


def _wrapped(build: Callable, path: str):
    try:
        return build()
    except MachineSemanticError:
        raise
    except QfaError as error:
        raise MachineSemanticError(path, error.message) from None


def _operation(value, path: str) -> QuantumOperation:
    if not isinstance(value, list):
        raise MachineSemanticError(path, "expected a list of matrices")
    matrices = [
        _matrix(item, "{}[{}]".format(path, index))
        for index, item in enumerate(value)
    ]
    return _wrapped(lambda: QuantumOperation(matrices), path)


def _measurement(value, path: str, outcomes, cls=GeneralMeasurement):
    _object(value, path, outcomes)
    operators = [
        _matrix(value[outcome], _path(path, outcome)) for outcome in outcomes
    ]
    return _wrapped(lambda: cls(outcomes, operators), path)


def _common(body: dict, states_field: str):
    states = _labels(body[states_field], states_field)
    alphabet = _labels(body["alphabet"], "alphabet")
    initial = _label(body["initial"], "initial", states)
    return states, alphabet, initial


def _dfa_delta(value, path: str, states, alphabet) -> Dict:
    delta = _keyed(
        value,
        path,
        (states, alphabet),
        lambda item, field: _label(item, field, states),
    )
    _total(delta, path, (states, alphabet))
    return delta


def _read_dfa(body: dict) -> Dfa:
    states, alphabet, initial = _common(body, "states")
    return Dfa(
        states,
        alphabet,
        initial,
        _labels(body["accepting"], "accepting", states),
        _dfa_delta(body["delta"], "delta", states, alphabet),
    )


def _read_mo1g(body: dict) -> Mo1gQfa:
    states, alphabet, initial = _common(body, "states")
    operations = _keyed(
        body["operations"], "operations", (alphabet,), _operation
    )
    _total(operations, "operations", (alphabet,))
    if ("accepting" in body) == ("accept_projector" in body):
        raise MachineSemanticError(
            "accepting", "exactly one of accepting and accept_projector"
        )
    if "accepting" in body:
        return Mo1gQfa.with_accepting(
            states,
            alphabet,
            initial,
            operations,
            _labels(body["accepting"], "accepting", states),
        )
    return Mo1gQfa(
        states,
        alphabet,
        initial,
        operations,
        _matrix(body["accept_projector"], "accept_projector"),
    )


def _read_cl1qfa(body: dict) -> Cl1Qfa:
    states, alphabet, initial = _common(body, "quantum_states")
    outcomes = _labels(body["outcomes"], "outcomes")
    unitaries = _keyed(body["unitaries"], "unitaries", (alphabet,), _matrix)
    _total(unitaries, "unitaries", (alphabet,))
    control = _object(
        body["control"],
        "control",
        ("states", "initial", "accepting", "delta"),
    )
    control_states = _labels(control["states"], "control.states")
    return Cl1Qfa(
        states,
        alphabet,
        outcomes,
        initial,
        unitaries,
        _measurement(
            body["measurement"],
            "measurement",
            outcomes,
            ProjectiveMeasurement,
        ),
        Dfa(
            control_states,
            outcomes,
            _label(control["initial"], "control.initial", control_states),
            _labels(control["accepting"], "control.accepting", control_states),
            _dfa_delta(
                control["delta"], "control.delta", control_states, outcomes
            ),
        ),
    )


def _read_qfac(body: dict) -> Qfac1:
    states, alphabet, initial = _common(body, "quantum_states")
    classical = _object(
        body["classical"], "classical", ("states", "initial", "delta")
    )
    classical_states = _labels(classical["states"], "classical.states")
    parts = (classical_states, alphabet)
    unitaries = _keyed(body["unitaries"], "unitaries", parts, _matrix)
    _total(unitaries, "unitaries", parts)
    measurements = _keyed(
        body["final_measurements"],
        "final_measurements",
        (classical_states,),
        lambda item, field: _measurement(
            item,
            field,
            (Qfac1.ACCEPT, Qfac1.REJECT),
            ProjectiveMeasurement,
        ),
    )
    _total(measurements, "final_measurements", (classical_states,))
    return Qfac1(
        states,
        alphabet,
        initial,
        Dfa(
            classical_states,
            alphabet,
            _label(
                classical["initial"], "classical.initial", classical_states
            ),
            (),
            _dfa_delta(
                classical["delta"],
                "classical.delta",
                classical_states,
                alphabet,
            ),
        ),
        unitaries,
        measurements,
    )


def _read_qcfa(body: dict) -> Qcfa1:
    states, alphabet, initial = _common(body, "quantum_states")
    classical_states = _labels(body["classical_states"], "classical_states")
    outcomes = _labels(body["outcomes"], "outcomes")
    parts = (classical_states, alphabet)
    measurements = _keyed(
        body["measurements"],
        "measurements",
        parts,
        lambda item, field: _measurement(item, field, outcomes),
    )
    _total(measurements, "measurements", parts)
    delta_parts = (classical_states, alphabet, outcomes)
    delta = _keyed(
        body["classical_delta"],
        "classical_delta",
        delta_parts,
        lambda item, field: _label(item, field, classical_states),
    )
    _total(delta, "classical_delta", delta_parts)
    return Qcfa1(
        states,
        classical_states,
        alphabet,
        outcomes,
        initial,
        _label(
            body["classical_initial"], "classical_initial", classical_states
        ),
        measurements,
        delta,
        _labels(body["accepting"], "accepting", classical_states),
    )


def _read_ancilla(body: dict) -> AncillaQfa:
    states, alphabet, initial = _common(body, "states")
    outputs = _labels(body["output_alphabet"], "output_alphabet")
    delta = _keyed(
        body["delta"], "delta", (states, alphabet, states, outputs), _complex
    )
    return AncillaQfa(
        states,
        alphabet,
        outputs,
        initial,
        delta,
        _labels(body["accepting"], "accepting", states),
    )


def _read_qsm(body: dict) -> Qsm:
    states, alphabet, initial = _common(body, "states")
    outputs = _labels(body["output_alphabet"], "output_alphabet")
    delta = _keyed(
        body["delta"], "delta", (alphabet, states, outputs, states), _complex
    )
    return Qsm(states, alphabet, outputs, initial, delta)


_READERS = {
    "dfa": (
        _read_dfa,
        ("states", "alphabet", "initial", "accepting", "delta"),
        (),
    ),
    "mo1g": (
        _read_mo1g,
        ("states", "alphabet", "initial", "operations"),
        ("accepting", "accept_projector"),
    ),
    "cl1qfa": (
        _read_cl1qfa,
        (
            "quantum_states",
            "alphabet",
            "outcomes",
            "initial",
            "unitaries",
            "measurement",
            "control",
        ),
        (),
    ),
    "qfac": (
        _read_qfac,
        (
            "quantum_states",
            "alphabet",
            "initial",
            "classical",
            "unitaries",
            "final_measurements",
        ),
        (),
    ),
    "qcfa": (
        _read_qcfa,
        (
            "quantum_states",
            "classical_states",
            "alphabet",
            "outcomes",
            "initial",
            "classical_initial",
            "measurements",
            "classical_delta",
            "accepting",
        ),
        (),
    ),
    "ancilla": (
        _read_ancilla,
        (
            "states",
            "alphabet",
            "output_alphabet",
            "initial",
            "delta",
            "accepting",
        ),
        (),
    ),
    "qsm": (
        _read_qsm,
        ("states", "alphabet", "output_alphabet", "initial", "delta"),
        (),
    ),
}


def parse_machine(text: str, validate: bool = True) -> Machine:
    """Reads a machine document.

    With ``validate`` (the default) the machine must also pass
    :func:`qfa.hybrid.machines.validate_machine`.

    Raises:
        MachineSyntaxError: if ``text`` is not JSON.
        MachineSemanticError: naming the offending field.
        MachineValidationError: listing every violated invariant.
    """
    try:
        document = json.loads(text, object_pairs_hook=_unique_keys)
    except json.JSONDecodeError as error:
        raise MachineSyntaxError(
            error.msg, error.lineno, error.colno
        ) from None
    if not isinstance(document, dict):
        raise MachineSemanticError("document", "expected an object")
    kind = document.get("kind")
    if kind not in _READERS:
        raise MachineSemanticError(
            "kind", "expected one of {}".format(sorted(_READERS))
        )
    if "version" not in document:
        raise MachineSemanticError("version", "missing field")
    version = document["version"]
    if (
        isinstance(version, bool)
        or not isinstance(version, int)
        or version != FORMAT_VERSION
    ):
        raise MachineSemanticError(
            "version",
            "unsupported version {!r}".format(version),
        )
    reader, required, optional = _READERS[kind]
    _object(document, "", ("kind", "version") + required, optional)
    machine = reader(document)
    if validate:
        violations = validate_machine(machine)
        if violations:
            raise MachineValidationError(violations, kind)
    logger.debug("parsed %r", machine)
    return machine


def read_machine(path: str, validate: bool = True) -> Machine:
    """Reads the machine document stored in the UTF-8 file ``path``.

    Raises:
        MachineSyntaxError: if the file is not valid UTF-8 or not JSON.
    """
    with open(path, "rb") as handle:
        data = handle.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as error:
        line_start = data.rfind(b"\n", 0, error.start) + 1
        raise MachineSyntaxError(
            "invalid UTF-8: {}".format(error.reason),
            data.count(b"\n", 0, error.start) + 1,
            error.start - line_start + 1,
        ) from None
    return parse_machine(text, validate)


# Writing


def _pair(value: complex) -> List[float]:
    value = complex(value)
    return [value.real, value.imag]


def _rows(matrix: np.ndarray) -> List:
    return [[_pair(entry) for entry in row] for row in matrix]


def _joined(key) -> str:
    if isinstance(key, tuple):
        return SEPARATOR.join(key)
    return key


def _keyed_body(mapping: Dict, convert: Callable) -> Dict:
    return {_joined(key): convert(value) for key, value in mapping.items()}


def _accepting(states, accepting) -> List[str]:
    return [state for state in states if state in accepting]


def _dfa_delta_body(a: Dfa) -> Dict:
    return _keyed_body(a.delta, lambda target: target)


def _measurement_body(measurement: GeneralMeasurement) -> Dict:
    return {
        outcome: _rows(operator) for outcome, operator in measurement.items()
    }


@singledispatch
def _body(m) -> Dict:
    raise QfaError("cannot serialize {!r}".format(m))


@_body.register(Dfa)
def _(m):
    return {
        "states": list(m.states),
        "alphabet": list(m.alphabet),
        "initial": m.initial,
        "accepting": _accepting(m.states, m.accepting),
        "delta": _dfa_delta_body(m),
    }


@_body.register(Mo1gQfa)
def _(m):
    body = {
        "states": list(m.states),
        "alphabet": list(m.alphabet),
        "initial": m.initial,
        "operations": _keyed_body(
            m.operations, lambda op: [_rows(e) for e in op.kraus]
        ),
    }
    indices = subset_of_projector(m.accept_projector)
    if indices is None:
        body["accept_projector"] = _rows(m.accept_projector)
    else:
        body["accepting"] = [m.states[index] for index in indices]
    return body


@_body.register(Cl1Qfa)
def _(m):
    control = m.control
    return {
        "quantum_states": list(m.quantum_states),
        "alphabet": list(m.alphabet),
        "outcomes": list(m.outcomes),
        "initial": m.initial,
        "unitaries": _keyed_body(m.unitaries, _rows),
        "measurement": _measurement_body(m.measurement),
        "control": {
            "states": list(control.states),
            "initial": control.initial,
            "accepting": _accepting(control.states, control.accepting),
            "delta": _dfa_delta_body(control),
        },
    }


@_body.register(Qfac1)
def _(m):
    return {
        "quantum_states": list(m.quantum_states),
        "alphabet": list(m.alphabet),
        "initial": m.initial,
        "classical": {
            "states": list(m.classical.states),
            "initial": m.classical.initial,
            "delta": _dfa_delta_body(m.classical),
        },
        "unitaries": _keyed_body(m.unitaries, _rows),
        "final_measurements": _keyed_body(
            m.final_measurements, _measurement_body
        ),
    }


@_body.register(Qcfa1)
def _(m):
    return {
        "quantum_states": list(m.quantum_states),
        "classical_states": list(m.classical_states),
        "alphabet": list(m.alphabet),
        "outcomes": list(m.outcomes),
        "initial": m.initial,
        "classical_initial": m.classical_initial,
        "measurements": _keyed_body(m.measurements, _measurement_body),
        "classical_delta": _keyed_body(m.classical_delta, lambda s: s),
        "accepting": _accepting(m.classical_states, m.accepting),
    }


@_body.register(AncillaQfa)
def _(m):
    return {
        "states": list(m.states),
        "alphabet": list(m.alphabet),
        "output_alphabet": list(m.output_alphabet),
        "initial": m.initial,
        "delta": _keyed_body(m.delta, _pair),
        "accepting": _accepting(m.states, m.accepting),
    }


@_body.register(Qsm)
def _(m):
    return {
        "states": list(m.states),
        "alphabet": list(m.alphabet),
        "output_alphabet": list(m.output_alphabet),
        "initial": m.initial,
        "delta": _keyed_body(m.delta, _pair),
    }


def _scalar(value) -> str:
    if value is None or isinstance(value, (bool, str)):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def _flat(value) -> bool:
    return not isinstance(value, (list, dict))


def _inline(items: list) -> bool:
    # Scalars, labels, [re, im] pairs and matrix rows stay on one line.
    return all(
        _flat(item)
        or (isinstance(item, list) and all(_flat(x) for x in item))
        for item in items
    )


def _emit(value, indent: str, out: List[str]):
    inner = indent + "  "
    if isinstance(value, dict):
        if not value:
            out.append("{}")
            return
        out.append("{\n")
        for position, key in enumerate(sorted(value)):
            out.append(inner + _scalar(key) + ": ")
            _emit(value[key], inner, out)
            out.append(",\n" if position < len(value) - 1 else "\n")
        out.append(indent + "}")
    elif isinstance(value, list):
        if _inline(value):
            parts = []
            for item in value:
                sub: List[str] = []
                _emit(item, "", sub)
                parts.append("".join(sub))
            out.append("[" + ", ".join(parts) + "]")
            return
        out.append("[\n")
        for position, item in enumerate(value):
            out.append(inner)
            _emit(item, inner, out)
            out.append(",\n" if position < len(value) - 1 else "\n")
        out.append(indent + "]")
    else:
        out.append(_scalar(value))


def serialize_machine(m: Machine) -> str:
    """Canonical document for ``m``."""
    for label in _all_labels(m):
        if SEPARATOR in label:
            raise QfaError(
                "label {!r} contains {!r}".format(label, SEPARATOR)
            )
    document = {"kind": machine_kind(m), "version": FORMAT_VERSION}
    document.update(_body(m))
    out: List[str] = []
    _emit(document, "", out)
    out.append("\n")
    return "".join(out)


def _all_labels(m: Machine):
    for name in (
        "states",
        "quantum_states",
        "classical_states",
        "alphabet",
        "outcomes",
        "output_alphabet",
    ):
        yield from getattr(m, name, ())
    for inner in ("control", "classical"):
        if isinstance(getattr(m, inner, None), Dfa):
            yield from getattr(m, inner).states


def write_machine(m: Machine, path: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(serialize_machine(m))
