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
Simulations between the automaton models
----------------------------------------

Every transform returns a machine whose acceptance function equals the
source's on every input and which passes
:func:`qfa.hybrid.machines.validate_machine`.

Composite state spaces keep the factor order of their construction: the
label of the basis state ``|x>|y>`` is ``"(x,y)"`` and its index is
``index(x) * len(second) + index(y)``.

Usage
-----

.. code:: python

    from qfa.hybrid.transforms import convert

    mo = convert(cl1qfa, "mo1g")

:func:`convert` follows the unique shortest chain of transforms from the
source kind to the requested kind.
"""

from collections import deque
from functools import singledispatch
from logging import getLogger
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
from opentelemetry.trace import get_tracer

from qfa.hybrid.channels import (
    GeneralMeasurement,
    ProjectiveMeasurement,
    QuantumOperation,
    compose_operations,
    controlled_operation,
    identity_operation,
    tensor_operations,
)
from qfa.hybrid.classical import Dfa
from qfa.hybrid.errors import (
    NonSubsetProjectorError,
    NoTransformPathError,
    QfaError,
)
from qfa.hybrid.linalg import (
    basis_projector,
    identity,
    outer,
    projector_from_subset,
    subset_of_projector,
    tensor_product,
)
from qfa.hybrid.machines import (
    AncillaQfa,
    Cl1Qfa,
    Machine,
    Mo1gQfa,
    Qcfa1,
    Qfac1,
    Qsm,
    hybrid_size,
    label_index,
    machine_kind,
    validate_machine,
)
from qfa.hybrid.version import __version__

logger = getLogger(__name__)


def pair_label(first: str, second: str) -> str:
    return "({},{})".format(first, second)


def _pairs(first: Iterable[str], second: Iterable[str]) -> Tuple[str, ...]:
    second = tuple(second)
    return tuple(pair_label(a, b) for a in first for b in second)


def _validated(machine: Machine) -> Machine:
    violations = validate_machine(machine)
    if violations:
        raise QfaError(
            "constructed {} machine is invalid: {}".format(
                machine_kind(machine), "; ".join(violations)
            )
        )
    return machine


def _dfa_operation(a: Dfa, symbol: str) -> QuantumOperation:
    """Elements ``|delta(s, sigma)><s|``, one per state."""
    size = len(a.states)
    return QuantumOperation(
        [
            outer(size, a.index(a.delta[(state, symbol)]), a.index(state))
            for state in a.states
        ]
    )


def _subset_projector(states, accepting) -> np.ndarray:
    return projector_from_subset(
        len(states), [label_index(states, state) for state in accepting]
    )


def dfa_to_mo1g(a: Dfa) -> Mo1gQfa:
    """Deterministic transitions as quantum operations on ``H_S``.

    ``E_sigma(|s><s|) = |delta(s, sigma)><delta(s, sigma)|``, so acceptance
    is exactly 0 or 1.
    """
    return _validated(
        Mo1gQfa.with_accepting(
            a.states,
            a.alphabet,
            a.initial,
            {symbol: _dfa_operation(a, symbol) for symbol in a.alphabet},
            a.accepting,
        )
    )


def cl1qfa_to_mo1g(m: Cl1Qfa) -> Mo1gQfa:
    """Simulates a CL-1QFA on ``H_Q (x) H_S``, ``S`` the control states.

    Each step applies ``U_sigma (x) I`` and then the measurement of ``Q``
    controlling the control-DFA move on the outcome. The elements are
    ``P_c U_sigma (x) |delta(s, c)><s|``.
    """
    control = m.control
    moves = {
        outcome: _dfa_operation(control, outcome) for outcome in m.outcomes
    }
    step = controlled_operation(m.measurement, moves)
    keep = identity(len(control.states))
    operations = {}
    for symbol in m.alphabet:
        unitary = QuantumOperation(
            [tensor_product(m.unitaries[symbol], keep)]
        )
        operations[symbol] = compose_operations(
            step, unitary, drop_zero=False
        )
    projector = tensor_product(
        identity(len(m.quantum_states)),
        _subset_projector(control.states, control.accepting),
    )
    return _validated(
        Mo1gQfa(
            _pairs(m.quantum_states, control.states),
            m.alphabet,
            pair_label(m.initial, control.initial),
            operations,
            projector,
        )
    )


def qfac_final_measurement(m: Qfac1) -> ProjectiveMeasurement:
    """``{sum_s |s><s| (x) P_{s,a}, sum_s |s><s| (x) P_{s,r}}`` on
    ``H_S (x) H_Q``."""
    size = len(m.classical.states)
    projectors = []
    for outcome in (Qfac1.ACCEPT, Qfac1.REJECT):
        projectors.append(
            sum(
                tensor_product(
                    basis_projector(size, index),
                    m.final_measurements[state].operator(outcome),
                )
                for index, state in enumerate(m.classical.states)
            )
        )
    return ProjectiveMeasurement((Qfac1.ACCEPT, Qfac1.REJECT), projectors)


def qfac_to_mo1g(m: Qfac1) -> Mo1gQfa:
    """Simulates a 1QFAC on ``H_S (x) H_Q`` (classical factor first).

    ``E_sigma`` has the elements ``|s><s| (x) U_{s,sigma}``; it is followed by
    the classical move ``F_sigma (x) I``.
    """
    classical = m.classical
    size = len(classical.states)
    keep = identity_operation(len(m.quantum_states))
    operations = {}
    for symbol in m.alphabet:
        select = QuantumOperation(
            [
                tensor_product(
                    basis_projector(size, index), m.unitaries[(state, symbol)]
                )
                for index, state in enumerate(classical.states)
            ]
        )
        move = tensor_operations(_dfa_operation(classical, symbol), keep)
        operations[symbol] = compose_operations(move, select)
    measurement = qfac_final_measurement(m)
    return _validated(
        Mo1gQfa(
            _pairs(classical.states, m.quantum_states),
            m.alphabet,
            pair_label(classical.initial, m.initial),
            operations,
            measurement.operator(Qfac1.ACCEPT),
        )
    )


def qcfa_to_mo1g(m: Qcfa1, full_elements: bool = False) -> Mo1gQfa:
    """Simulates a 1QCFA on ``H_Q (x) H_S``.

    The elements are ``M^c_{s,sigma} (x) |delta(s, sigma, c)><s|``. With
    ``full_elements`` every ``M^c_{s,sigma} (x) F^k_{sigma,c} E_s`` is kept,
    including the products with ``k != s`` that vanish.
    """
    size = len(m.classical_states)
    index = {state: i for i, state in enumerate(m.classical_states)}
    operations = {}
    for symbol in m.alphabet:
        elements = []
        for state in m.classical_states:
            measurement = m.measurements[(state, symbol)]
            for outcome in m.outcomes:
                operator = measurement.operator(outcome)
                sources = m.classical_states if full_elements else (state,)
                for source in sources:
                    target = m.classical_delta[(source, symbol, outcome)]
                    move = outer(size, index[target], index[source])
                    elements.append(
                        tensor_product(
                            operator,
                            move @ basis_projector(size, index[state]),
                        )
                    )
        operations[symbol] = QuantumOperation(elements)
        logger.debug(
            "1QCFA step %s has %d elements", symbol, len(elements)
        )
    projector = tensor_product(
        identity(len(m.quantum_states)),
        _subset_projector(m.classical_states, m.accepting),
    )
    return _validated(
        Mo1gQfa(
            _pairs(m.quantum_states, m.classical_states),
            m.alphabet,
            pair_label(m.initial, m.classical_initial),
            operations,
            projector,
        )
    )


def ancilla_to_mo1g(m: AncillaQfa) -> Mo1gQfa:
    """The operation with elements ``{V_{sigma,omega}}_omega``."""
    operations = {
        symbol: QuantumOperation(
            list(m.transition_operators(symbol).values())
        )
        for symbol in m.alphabet
    }
    return _validated(
        Mo1gQfa.with_accepting(
            m.states,
            m.alphabet,
            m.initial,
            operations,
            [state for state in m.states if state in m.accepting],
        )
    )


def mo1g_to_ancilla(m: Mo1gQfa) -> AncillaQfa:
    """Writes the index of the Kraus element applied as the output symbol.

    ``Omega = {1..k}`` with ``k`` the largest element count; shorter
    families are padded with zero operators. The acceptance projector must
    be a basis-state projector.
    """
    indices = subset_of_projector(m.accept_projector)
    if indices is None:
        raise NonSubsetProjectorError(
            "the acceptance projector is not diagonal with 0/1 entries"
        )
    count = max(len(operation) for operation in m.operations.values())
    outputs = tuple(str(i + 1) for i in range(count))
    delta = {}
    for symbol in m.alphabet:
        for omega, element in zip(outputs, m.operations[symbol].kraus):
            for target, source in zip(*np.nonzero(element)):
                delta[
                    (m.states[source], symbol, m.states[target], omega)
                ] = complex(element[target, source])
    return _validated(
        AncillaQfa(
            m.states,
            m.alphabet,
            outputs,
            m.initial,
            delta,
            [m.states[i] for i in indices],
        )
    )


def qsm_to_ancilla(m: Qsm, accepting: Iterable[str]) -> AncillaQfa:
    """Assigns accepting states; ``delta(q, sigma, p, omega)`` is the QSM
    amplitude ``delta(sigma, q, omega, p)``."""
    accepting = list(accepting)
    for state in accepting:
        label_index(m.states, state)
    delta = {
        (source, symbol, target, omega): value
        for (symbol, source, omega, target), value in m.delta.items()
    }
    return _validated(
        AncillaQfa(
            m.states,
            m.alphabet,
            m.output_alphabet,
            m.initial,
            delta,
            accepting,
        )
    )


def cl1qfa_to_qcfa(m: Cl1Qfa) -> Qcfa1:
    """``Theta_{s,sigma} = {P_c U_sigma}`` and
    ``delta(s, sigma, c) = delta_L(s, c)``."""
    control = m.control
    measurements = {}
    for symbol in m.alphabet:
        measurement = GeneralMeasurement(
            m.outcomes,
            [
                m.measurement.operator(outcome) @ m.unitaries[symbol]
                for outcome in m.outcomes
            ],
        )
        for state in control.states:
            measurements[(state, symbol)] = measurement
    return _validated(
        Qcfa1(
            m.quantum_states,
            control.states,
            m.alphabet,
            m.outcomes,
            m.initial,
            control.initial,
            measurements,
            {
                (state, symbol, outcome): control.delta[(state, outcome)]
                for state in control.states
                for symbol in m.alphabet
                for outcome in m.outcomes
            },
            control.accepting,
        )
    )


def dfa_to_qfac_certainty(a: Dfa) -> Qfac1:
    """One qubit started in ``|1>``, never changed; the final measurement of
    an accepting state accepts ``|1>``, that of a rejecting one ``|0>``."""
    zero, one = basis_projector(2, 0), basis_projector(2, 1)
    measurements = {
        state: ProjectiveMeasurement(
            (Qfac1.ACCEPT, Qfac1.REJECT),
            [one, zero] if state in a.accepting else [zero, one],
        )
        for state in a.states
    }
    return _validated(
        Qfac1(
            ("0", "1"),
            a.alphabet,
            "1",
            Dfa(a.states, a.alphabet, a.initial, (), a.delta),
            {
                (state, symbol): identity(2)
                for state in a.states
                for symbol in a.alphabet
            },
            measurements,
        )
    )


def dfa_to_qcfa_certainty(a: Dfa) -> Qcfa1:
    """A one-dimensional quantum part measured with the single outcome
    ``0``; the classical part is ``a``."""
    trivial = GeneralMeasurement(("0",), [identity(1)])
    return _validated(
        Qcfa1(
            ("q1",),
            a.states,
            a.alphabet,
            ("0",),
            "q1",
            a.initial,
            {
                (state, symbol): trivial
                for state in a.states
                for symbol in a.alphabet
            },
            {
                (state, symbol, "0"): a.delta[(state, symbol)]
                for state in a.states
                for symbol in a.alphabet
            },
            a.accepting,
        )
    )


# Dispatch

_EDGES: Dict[Tuple[str, str], Callable] = {
    ("dfa", "mo1g"): dfa_to_mo1g,
    ("dfa", "qfac"): dfa_to_qfac_certainty,
    ("dfa", "qcfa"): dfa_to_qcfa_certainty,
    ("cl1qfa", "mo1g"): cl1qfa_to_mo1g,
    ("cl1qfa", "qcfa"): cl1qfa_to_qcfa,
    ("qfac", "mo1g"): qfac_to_mo1g,
    ("qcfa", "mo1g"): qcfa_to_mo1g,
    ("ancilla", "mo1g"): ancilla_to_mo1g,
    ("mo1g", "ancilla"): mo1g_to_ancilla,
    ("qsm", "ancilla"): qsm_to_ancilla,
}


def transform_path(source: str, target: str) -> List[str]:
    """Kinds visited by the unique shortest chain from ``source`` to
    ``target``, both included.

    Raises:
        NoTransformPathError: if no chain exists or several shortest chains
            compete.
    """
    # Breadth-first search counting shortest paths per kind.
    distance = {source: 0}
    count = {source: 1}
    parent: Dict[str, Optional[str]] = {source: None}
    queue = deque([source])
    while queue:
        kind = queue.popleft()
        for (start, end) in _EDGES:
            if start != kind:
                continue
            if end not in distance:
                distance[end] = distance[kind] + 1
                count[end] = count[kind]
                parent[end] = kind
                queue.append(end)
            elif distance[end] == distance[kind] + 1:
                count[end] += count[kind]
    if target not in distance:
        raise NoTransformPathError(
            "no transform from {} to {}".format(source, target)
        )
    if count[target] > 1:
        raise NoTransformPathError(
            "{} shortest transform chains from {} to {}".format(
                count[target], source, target
            )
        )
    path = [target]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def _state_count(m: Machine) -> int:
    if isinstance(m, Qsm):
        return len(m.states)
    classical, quantum = hybrid_size(m)
    return classical * quantum


def convert(
    m: Machine,
    kind: str,
    accepting: Optional[Iterable[str]] = None,
    tracer_provider=None,
) -> Machine:
    """Converts ``m`` to a machine of ``kind``.

    ``accepting`` names the accepting states assigned to a QSM source and is
    required for it.
    """
    source = machine_kind(m)
    path = transform_path(source, kind)
    if source == "qsm" and len(path) > 1 and accepting is None:
        raise QfaError("converting a qsm needs accepting states")
    tracer = get_tracer(__name__, __version__, tracer_provider)
    with tracer.start_as_current_span("qfa.convert") as span:
        result = m
        for start, end in zip(path, path[1:]):
            if start == "qsm":
                result = qsm_to_ancilla(result, accepting)
            else:
                result = _EDGES[(start, end)](result)
        states = _state_count(result)
        if span.is_recording():
            span.set_attribute("qfa.source_kind", source)
            span.set_attribute("qfa.target_kind", kind)
            span.set_attribute("qfa.states", states)
        logger.info(
            "converted %s to %s via %s, %d states",
            source,
            kind,
            " -> ".join(path),
            states,
        )
    return result


@singledispatch
def _to_mo1g(m) -> Mo1gQfa:
    raise NoTransformPathError(
        "{} machines cannot be converted to mo1g".format(machine_kind(m))
    )


_to_mo1g.register(Dfa, dfa_to_mo1g)
_to_mo1g.register(Cl1Qfa, cl1qfa_to_mo1g)
_to_mo1g.register(Qfac1, qfac_to_mo1g)
_to_mo1g.register(Qcfa1, qcfa_to_mo1g)
_to_mo1g.register(AncillaQfa, ancilla_to_mo1g)


@_to_mo1g.register(Mo1gQfa)
def _(m):
    return m


def to_mo1g(m: Machine, tracer_provider=None) -> Mo1gQfa:
    """The MO-1gQFA simulating any acceptor model."""
    tracer = get_tracer(__name__, __version__, tracer_provider)
    with tracer.start_as_current_span("qfa.convert") as span:
        result = _to_mo1g(m)
        if span.is_recording():
            span.set_attribute("qfa.source_kind", machine_kind(m))
            span.set_attribute("qfa.target_kind", "mo1g")
            span.set_attribute("qfa.states", result.dim)
        logger.info(
            "converted %s to mo1g, %d states", machine_kind(m), result.dim
        )
    return result
