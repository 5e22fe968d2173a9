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
Automaton models and their direct semantics
-------------------------------------------

Six models are defined here, each evaluated straight from its own
acceptance formula and independently of :mod:`qfa.hybrid.transforms`:

* :class:`Mo1gQfa`: measure-once one-way general QFA, one quantum operation
  per symbol and a final projective measurement.
* :class:`Cl1Qfa`: unitary then projective measurement per symbol; the word
  of outcomes must be accepted by a control DFA.
* :class:`Qfac1`: the classical state selects the unitary and, at the end,
  the accept/reject measurement.
* :class:`Qcfa1`: the classical state and symbol select a general
  measurement whose outcome drives the classical transition.
* :class:`AncillaQfa`: amplitudes ``delta(q, sigma, p, omega)`` with an
  output symbol written and discarded at each step.
* :class:`Qsm`: quantum sequential machine, a transducer giving ``p(y|x)``.

The history-enumerating evaluators (CL-1QFA, 1QCFA) are exponential in the
input length; the conversions to :class:`Mo1gQfa` give the polynomial path.
For the empty word every evaluator returns the ``n = 0`` instance of its
formula.
"""

from functools import singledispatch
from logging import getLogger
from typing import (
    Dict,
    FrozenSet,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from qfa.hybrid.channels import (
    GeneralMeasurement,
    ProjectiveMeasurement,
    QuantumOperation,
    completeness_residual,
    measurement_violations,
)
from qfa.hybrid.classical import Dfa, Word, check_word, dfa_accepts
from qfa.hybrid.classical import dfa_violations as _dfa_violations
from qfa.hybrid.config import get_prune_eps, resolve_tolerance
from qfa.hybrid.errors import (
    LengthMismatchError,
    QfaError,
    UnknownLabelError,
)
from qfa.hybrid.linalg import (
    ComplexMatrix,
    DensityOperator,
    as_matrix,
    basis_projector,
    isometry_residual,
    ket,
    projector_from_subset,
    projector_residual,
    tensor_product,
)

logger = getLogger(__name__)


def _freeze(matrix) -> ComplexMatrix:
    matrix = as_matrix(matrix)
    matrix.setflags(write=False)
    return matrix


def label_index(labels: Sequence[str], label: str) -> int:
    try:
        return labels.index(label)
    except ValueError:
        raise UnknownLabelError(
            "{!r} is not one of {}".format(label, list(labels))
        ) from None


def _operation(value) -> QuantumOperation:
    if isinstance(value, QuantumOperation):
        return value
    return QuantumOperation(value)


class Mo1gQfa:
    """``(Q, Sigma, q_1, {E_sigma}, P_a)``.

    The acceptance measurement is kept as a projector so that constructions
    whose accepting subspace is not spanned by basis states can be expressed;
    :meth:`with_accepting` builds it from an accepting state set.
    """

    __slots__ = (
        "states",
        "alphabet",
        "initial",
        "operations",
        "accept_projector",
    )

    def __init__(
        self,
        states: Sequence[str],
        alphabet: Sequence[str],
        initial: str,
        operations: Mapping[str, Union[QuantumOperation, Sequence]],
        accept_projector,
    ):
        self.states: Tuple[str, ...] = tuple(states)
        self.alphabet: Tuple[str, ...] = tuple(alphabet)
        self.initial = initial
        self.operations: Dict[str, QuantumOperation] = {
            symbol: _operation(op) for symbol, op in operations.items()
        }
        self.accept_projector = _freeze(accept_projector)

    @classmethod
    def with_accepting(
        cls, states, alphabet, initial, operations, accepting
    ) -> "Mo1gQfa":
        states = tuple(states)
        indices = [label_index(states, state) for state in accepting]
        return cls(
            states,
            alphabet,
            initial,
            operations,
            projector_from_subset(len(states), indices),
        )

    @property
    def dim(self) -> int:
        return len(self.states)

    def __repr__(self):
        return "Mo1gQfa(states={}, alphabet={})".format(
            len(self.states), list(self.alphabet)
        )


class Cl1Qfa:
    """``(Q, Sigma, C, q_1, {U_sigma}, {P_c}, L)``, ``L`` given by a DFA."""

    __slots__ = (
        "quantum_states",
        "alphabet",
        "outcomes",
        "initial",
        "unitaries",
        "measurement",
        "control",
    )

    def __init__(
        self,
        quantum_states: Sequence[str],
        alphabet: Sequence[str],
        outcomes: Sequence[str],
        initial: str,
        unitaries: Mapping[str, object],
        measurement: ProjectiveMeasurement,
        control: Dfa,
    ):
        self.quantum_states = tuple(quantum_states)
        self.alphabet = tuple(alphabet)
        self.outcomes = tuple(outcomes)
        self.initial = initial
        self.unitaries: Dict[str, ComplexMatrix] = {
            symbol: _freeze(u) for symbol, u in unitaries.items()
        }
        self.measurement = measurement
        self.control = control

    def __repr__(self):
        return "Cl1Qfa(quantum_states={}, control_states={})".format(
            len(self.quantum_states), len(self.control.states)
        )


class Qfac1:
    """``(Q, S, Sigma, q_1, s_1, {U_{s,sigma}}, delta, {M_s})``.

    The classical component is a :class:`Dfa` over ``Sigma`` without an
    accepting set; each ``M_s`` has the outcomes ``a`` and ``r``.
    """

    __slots__ = (
        "quantum_states",
        "alphabet",
        "initial",
        "classical",
        "unitaries",
        "final_measurements",
    )

    ACCEPT = "a"
    REJECT = "r"

    def __init__(
        self,
        quantum_states: Sequence[str],
        alphabet: Sequence[str],
        initial: str,
        classical: Dfa,
        unitaries: Mapping[Tuple[str, str], object],
        final_measurements: Mapping[str, ProjectiveMeasurement],
    ):
        self.quantum_states = tuple(quantum_states)
        self.alphabet = tuple(alphabet)
        self.initial = initial
        self.classical = classical
        self.unitaries: Dict[Tuple[str, str], ComplexMatrix] = {
            key: _freeze(u) for key, u in unitaries.items()
        }
        self.final_measurements = dict(final_measurements)

    @property
    def classical_states(self) -> Tuple[str, ...]:
        return self.classical.states

    @property
    def classical_initial(self) -> str:
        return self.classical.initial

    def __repr__(self):
        return "Qfac1(quantum_states={}, classical_states={})".format(
            len(self.quantum_states), len(self.classical.states)
        )


class Qcfa1:
    """``(Q, S, Sigma, C, q_1, s_1, {Theta_{s,sigma}}, delta, S_a)``."""

    __slots__ = (
        "quantum_states",
        "classical_states",
        "alphabet",
        "outcomes",
        "initial",
        "classical_initial",
        "measurements",
        "classical_delta",
        "accepting",
    )

    def __init__(
        self,
        quantum_states: Sequence[str],
        classical_states: Sequence[str],
        alphabet: Sequence[str],
        outcomes: Sequence[str],
        initial: str,
        classical_initial: str,
        measurements: Mapping[Tuple[str, str], GeneralMeasurement],
        classical_delta: Mapping[Tuple[str, str, str], str],
        accepting,
    ):
        self.quantum_states = tuple(quantum_states)
        self.classical_states = tuple(classical_states)
        self.alphabet = tuple(alphabet)
        self.outcomes = tuple(outcomes)
        self.initial = initial
        self.classical_initial = classical_initial
        self.measurements = dict(measurements)
        self.classical_delta = dict(classical_delta)
        self.accepting: FrozenSet[str] = frozenset(accepting)

    def __repr__(self):
        return "Qcfa1(quantum_states={}, classical_states={})".format(
            len(self.quantum_states), len(self.classical_states)
        )


def _amplitudes(delta) -> Dict[tuple, complex]:
    amplitudes = {}
    for key, value in delta.items():
        amplitude = complex(value)
        if not np.isfinite(amplitude):
            raise QfaError("non-finite amplitude at {}".format(key))
        if amplitude:
            amplitudes[key] = amplitude
    return amplitudes


class AncillaQfa:
    """``(Q, Sigma, Omega, q_1, delta, Q_a)``.

    ``delta`` maps ``(q, sigma, p, omega)`` to the amplitude of moving from
    ``q`` to ``p`` while writing ``omega``; absent keys are zero.
    """

    __slots__ = (
        "states",
        "alphabet",
        "output_alphabet",
        "initial",
        "delta",
        "accepting",
    )

    def __init__(
        self,
        states: Sequence[str],
        alphabet: Sequence[str],
        output_alphabet: Sequence[str],
        initial: str,
        delta: Mapping[Tuple[str, str, str, str], complex],
        accepting,
    ):
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        self.output_alphabet = tuple(output_alphabet)
        self.initial = initial
        self.delta = _amplitudes(delta)
        self.accepting: FrozenSet[str] = frozenset(accepting)

    def transition_operators(self, symbol: str) -> Dict[str, ComplexMatrix]:
        """``V_{sigma,omega}[p, q] = delta(q, sigma, p, omega)``."""
        size = len(self.states)
        operators = {
            omega: np.zeros((size, size), dtype=np.complex128)
            for omega in self.output_alphabet
        }
        for (source, sym, target, omega), value in self.delta.items():
            if sym == symbol:
                operators[omega][
                    self.states.index(target), self.states.index(source)
                ] = value
        return operators

    def stacked_isometry(self, symbol: str) -> ComplexMatrix:
        """``V_sigma = sum_omega V_{sigma,omega} (x) |omega>``."""
        size = len(self.output_alphabet)
        return sum(
            tensor_product(operator, ket(size, index))
            for index, operator in enumerate(
                self.transition_operators(symbol).values()
            )
        )

    def __repr__(self):
        return "AncillaQfa(states={}, outputs={})".format(
            len(self.states), len(self.output_alphabet)
        )


class Qsm:
    """``(S, Sigma, Omega, s_1, delta)``.

    ``delta`` maps ``(sigma, s, omega, t)`` to the amplitude of printing
    ``omega`` and entering ``t`` after reading ``sigma`` in ``s``.
    """

    __slots__ = ("states", "alphabet", "output_alphabet", "initial", "delta")

    def __init__(
        self,
        states: Sequence[str],
        alphabet: Sequence[str],
        output_alphabet: Sequence[str],
        initial: str,
        delta: Mapping[Tuple[str, str, str, str], complex],
    ):
        self.states = tuple(states)
        self.alphabet = tuple(alphabet)
        self.output_alphabet = tuple(output_alphabet)
        self.initial = initial
        self.delta = _amplitudes(delta)

    def transition_operators(self, symbol: str) -> Dict[str, ComplexMatrix]:
        """``V_{sigma,omega}[t, s] = delta(sigma, s, omega, t)``."""
        size = len(self.states)
        operators = {
            omega: np.zeros((size, size), dtype=np.complex128)
            for omega in self.output_alphabet
        }
        for (sym, source, omega, target), value in self.delta.items():
            if sym == symbol:
                operators[omega][
                    self.states.index(target), self.states.index(source)
                ] = value
        return operators

    def __repr__(self):
        return "Qsm(states={}, outputs={})".format(
            len(self.states), len(self.output_alphabet)
        )


Machine = Union[Dfa, Mo1gQfa, Cl1Qfa, Qfac1, Qcfa1, AncillaQfa, Qsm]

KINDS = {
    Dfa: "dfa",
    Mo1gQfa: "mo1g",
    Cl1Qfa: "cl1qfa",
    Qfac1: "qfac",
    Qcfa1: "qcfa",
    AncillaQfa: "ancilla",
    Qsm: "qsm",
}


def machine_kind(m: Machine) -> str:
    try:
        return KINDS[type(m)]
    except KeyError:
        raise QfaError("not a machine: {!r}".format(m)) from None


def hybrid_size(m: Machine) -> Tuple[int, int]:
    """``(k, n)``: classical and quantum state counts of an acceptor.

    Purely quantum models have ``k = 1``; a DFA counts as a quantum machine
    on its own state space.
    """
    if isinstance(m, Cl1Qfa):
        return len(m.control.states), len(m.quantum_states)
    if isinstance(m, Qfac1):
        return len(m.classical.states), len(m.quantum_states)
    if isinstance(m, Qcfa1):
        return len(m.classical_states), len(m.quantum_states)
    if isinstance(m, (Dfa, Mo1gQfa, AncillaQfa)):
        return 1, len(m.states)
    raise QfaError(
        "{} machines have no acceptance size".format(machine_kind(m))
    )


# Evaluation


def _clamp(value: float, what: str) -> float:
    tol = resolve_tolerance()
    if value < -tol or value > 1 + tol:
        logger.warning(
            "%s probability %.3e lies outside [0, 1] by more than %.1e",
            what,
            value,
            tol,
        )
    return min(max(value, 0.0), 1.0)


def _norm2(vector: np.ndarray) -> float:
    return float(np.real(np.vdot(vector, vector)))


def mo1g_final_state(
    m: Mo1gQfa, word: Word, initial: Optional[str] = None
) -> DensityOperator:
    """The state ``E_{x_n} o ... o E_{x_1}(|q><q|)``, ``q`` defaulting to
    the initial state."""
    check_word(word, m.alphabet)
    start = m.initial if initial is None else initial
    rho = basis_projector(m.dim, label_index(m.states, start))
    for symbol in word:
        rho = m.operations[symbol].apply(rho)
    # pylint: disable=protected-access
    return DensityOperator._trusted(rho)


def mo1g_accept_prob(m: Mo1gQfa, word: Word, clamp: bool = True) -> float:
    value = mo1g_final_state(m, word).expectation(m.accept_projector)
    return _clamp(value, "MO-1gQFA") if clamp else value


def _cl1qfa_histories(
    m: Cl1Qfa, word: Word, prune_eps: float
) -> Iterator[Tuple[Tuple[str, ...], str, float]]:
    check_word(word, m.alphabet)
    projectors = list(m.measurement.items())
    start = ket(len(m.quantum_states), m.quantum_states.index(m.initial))
    stack = [((), m.control.initial, start)]
    pruned = 0
    while stack:
        history, state, vector = stack.pop()
        depth = len(history)
        if depth == len(word):
            yield history, state, _norm2(vector)
            continue
        evolved = m.unitaries[word[depth]] @ vector
        branches = []
        for outcome, projector in projectors:
            branch = projector @ evolved
            if _norm2(branch) <= prune_eps:
                pruned += 1
                continue
            branches.append(
                (
                    history + (outcome,),
                    m.control.delta[(state, outcome)],
                    branch,
                )
            )
        stack.extend(reversed(branches))
    logger.debug("CL-1QFA enumeration pruned %d branches", pruned)


def cl1qfa_history_distribution(
    m: Cl1Qfa, word: Word, prune_eps: Optional[float] = None
) -> Dict[Tuple[str, ...], float]:
    """``p(y|x)`` for every outcome word ``y`` with non-pruned weight."""
    eps = get_prune_eps() if prune_eps is None else prune_eps
    return {
        history: weight
        for history, _, weight in _cl1qfa_histories(m, word, eps)
    }


def cl1qfa_accept_prob(
    m: Cl1Qfa,
    word: Word,
    clamp: bool = True,
    prune_eps: Optional[float] = None,
) -> float:
    eps = get_prune_eps() if prune_eps is None else prune_eps
    value = sum(
        weight
        for _, state, weight in _cl1qfa_histories(m, word, eps)
        if state in m.control.accepting
    )
    return _clamp(value, "CL-1QFA") if clamp else value


def qfac_accept_prob(m: Qfac1, word: Word, clamp: bool = True) -> float:
    check_word(word, m.alphabet)
    vector = ket(len(m.quantum_states), m.quantum_states.index(m.initial))
    state = m.classical.initial
    for symbol in word:
        vector = m.unitaries[(state, symbol)] @ vector
        state = m.classical.delta[(state, symbol)]
    accept = m.final_measurements[state].operator(Qfac1.ACCEPT)
    value = _norm2(accept @ vector)
    return _clamp(value, "1QFAC") if clamp else value


def _qcfa_histories(
    m: Qcfa1, word: Word, prune_eps: float
) -> Iterator[Tuple[str, float]]:
    check_word(word, m.alphabet)
    start = ket(len(m.quantum_states), m.quantum_states.index(m.initial))
    stack = [(0, m.classical_initial, start)]
    pruned = 0
    while stack:
        depth, state, vector = stack.pop()
        if depth == len(word):
            yield state, _norm2(vector)
            continue
        symbol = word[depth]
        branches = []
        for outcome, operator in m.measurements[(state, symbol)].items():
            branch = operator @ vector
            if _norm2(branch) <= prune_eps:
                pruned += 1
                continue
            branches.append(
                (
                    depth + 1,
                    m.classical_delta[(state, symbol, outcome)],
                    branch,
                )
            )
        stack.extend(reversed(branches))
    logger.debug("1QCFA enumeration pruned %d branches", pruned)


def qcfa_accept_prob(
    m: Qcfa1,
    word: Word,
    clamp: bool = True,
    prune_eps: Optional[float] = None,
) -> float:
    eps = get_prune_eps() if prune_eps is None else prune_eps
    value = sum(
        weight
        for state, weight in _qcfa_histories(m, word, eps)
        if state in m.accepting
    )
    return _clamp(value, "1QCFA") if clamp else value


def ancilla_accept_prob(
    m: AncillaQfa, word: Word, clamp: bool = True
) -> float:
    check_word(word, m.alphabet)
    size = len(m.states)
    operators = {
        symbol: list(m.transition_operators(symbol).values())
        for symbol in set(word)
    }
    rho = basis_projector(size, m.states.index(m.initial))
    for symbol in word:
        rho = sum(v @ rho @ v.conj().T for v in operators[symbol])
    projector = projector_from_subset(
        size, [m.states.index(state) for state in m.accepting]
    )
    value = float(np.real(np.trace(projector @ rho)))
    return _clamp(value, "ancilla QFA") if clamp else value


def qsm_output_prob(m: Qsm, word: Word, output: Word) -> float:
    """``p(y|x) = || V_{x_n,y_n} ... V_{x_1,y_1} |s_1> ||^2``."""
    if len(word) != len(output):
        raise LengthMismatchError(
            "input has {} symbols but output has {}".format(
                len(word), len(output)
            )
        )
    check_word(word, m.alphabet)
    check_word(output, m.output_alphabet)
    operators = {
        symbol: m.transition_operators(symbol) for symbol in set(word)
    }
    vector = ket(len(m.states), m.states.index(m.initial))
    for symbol, printed in zip(word, output):
        vector = operators[symbol][printed] @ vector
    return _clamp(_norm2(vector), "QSM")


def qsm_output_distribution(
    m: Qsm, word: Word, prune_eps: Optional[float] = None
) -> Dict[Tuple[str, ...], float]:
    """``p(y|x)`` for every output word ``y`` with non-pruned weight."""
    check_word(word, m.alphabet)
    eps = get_prune_eps() if prune_eps is None else prune_eps
    operators = {
        symbol: m.transition_operators(symbol) for symbol in set(word)
    }
    stack = [((), ket(len(m.states), m.states.index(m.initial)))]
    distribution = {}
    while stack:
        printed, vector = stack.pop()
        if len(printed) == len(word):
            distribution[printed] = _norm2(vector)
            continue
        for omega in reversed(m.output_alphabet):
            branch = operators[word[len(printed)]][omega] @ vector
            if _norm2(branch) > eps:
                stack.append((printed + (omega,), branch))
    return distribution


@singledispatch
def accept_prob(m, word: Word, clamp: bool = True) -> float:
    """Acceptance probability of ``word`` under any acceptor model."""
    raise QfaError(
        "{} machines do not accept words".format(machine_kind(m))
    )


@accept_prob.register(Dfa)
def _(m, word, clamp=True):
    return 1.0 if dfa_accepts(m, word) else 0.0


accept_prob.register(Mo1gQfa, mo1g_accept_prob)
accept_prob.register(Qfac1, qfac_accept_prob)
accept_prob.register(AncillaQfa, ancilla_accept_prob)


@accept_prob.register(Cl1Qfa)
def _(m, word, clamp=True):
    return cl1qfa_accept_prob(m, word, clamp=clamp)


@accept_prob.register(Qcfa1)
def _(m, word, clamp=True):
    return qcfa_accept_prob(m, word, clamp=clamp)


# Validation


def _labels(kind: str, values, declared) -> List[str]:
    return [
        "{} {} not declared".format(kind, value)
        for value in sorted(set(values) - set(declared))
    ]


def _square_violations(name: str, matrix, dim: int) -> List[str]:
    if matrix.shape != (dim, dim):
        return [
            "{} has shape {}, expected ({}, {})".format(
                name, matrix.shape, dim, dim
            )
        ]
    return []


def _unitary_violations(name: str, matrix, dim: int, tol) -> List[str]:
    violations = _square_violations(name, matrix, dim)
    if not violations:
        residual = isometry_residual(matrix)
        if not residual <= tol:
            violations.append(
                "{} not unitary, residual {:.1e}".format(name, residual)
            )
    return violations


def _measurement_violations(
    name: str, measurement, outcomes, dim: int, tol, projective: bool
) -> List[str]:
    if projective and not isinstance(measurement, ProjectiveMeasurement):
        return ["{} is not a projective measurement".format(name)]
    violations = []
    if set(measurement.outcomes) != set(outcomes):
        violations.append(
            "{} has outcomes {}, expected {}".format(
                name, sorted(measurement.outcomes), sorted(outcomes)
            )
        )
    if measurement.dim != dim:
        violations.append(
            "{} acts on dimension {}, expected {}".format(
                name, measurement.dim, dim
            )
        )
        return violations
    return violations + measurement_violations(measurement, name, tol)


def _sub(name: str, label) -> str:
    if isinstance(label, tuple):
        label = ",".join(label)
    return "{}_{{{}}}".format(name, label)


@singledispatch
def validate_machine(m, tol: Optional[float] = None) -> List[str]:
    """Lists every violated invariant of ``m``; empty when ``m`` is valid.

    Each entry names the offending component, e.g.
    ``U_{s2,b} not unitary, residual 3.1e-04``.
    """
    raise QfaError("not a machine: {!r}".format(m))


@validate_machine.register(Dfa)
def _(m, tol=None):
    return _dfa_violations(m)


@validate_machine.register(Mo1gQfa)
def _(m, tol=None):
    tol = resolve_tolerance(tol)
    violations = _labels("initial state", [m.initial], m.states)
    violations += [
        "no operation for symbol {}".format(symbol)
        for symbol in m.alphabet
        if symbol not in m.operations
    ]
    violations += _labels("operation symbol", m.operations, m.alphabet)
    for symbol, operation in m.operations.items():
        name = _sub("E", symbol)
        if operation.dim != m.dim:
            violations.append(
                "{} acts on dimension {}, expected {}".format(
                    name, operation.dim, m.dim
                )
            )
            continue
        residual = completeness_residual(operation.kraus)
        if not residual <= tol:
            violations.append(
                "{} not trace preserving, residual {:.1e}".format(
                    name, residual
                )
            )
    shape = _square_violations("accept projector", m.accept_projector, m.dim)
    violations += shape
    if not shape:
        residual = projector_residual(m.accept_projector)
        if not residual <= tol:
            violations.append(
                "accept projector not a projector, residual {:.1e}".format(
                    residual
                )
            )
    return violations


@validate_machine.register(Cl1Qfa)
def _(m, tol=None):
    tol = resolve_tolerance(tol)
    dim = len(m.quantum_states)
    violations = _labels("initial state", [m.initial], m.quantum_states)
    for symbol in m.alphabet:
        if symbol not in m.unitaries:
            violations.append("no unitary for symbol {}".format(symbol))
            continue
        violations += _unitary_violations(
            _sub("U", symbol), m.unitaries[symbol], dim, tol
        )
    violations += _labels("unitary symbol", m.unitaries, m.alphabet)
    violations += _measurement_violations(
        "measurement", m.measurement, m.outcomes, dim, tol, projective=True
    )
    if set(m.control.alphabet) != set(m.outcomes):
        violations.append(
            "control alphabet {} differs from outcomes {}".format(
                sorted(m.control.alphabet), sorted(m.outcomes)
            )
        )
    violations += [
        "control: " + violation for violation in _dfa_violations(m.control)
    ]
    return violations


@validate_machine.register(Qfac1)
def _(m, tol=None):
    tol = resolve_tolerance(tol)
    dim = len(m.quantum_states)
    violations = _labels("initial state", [m.initial], m.quantum_states)
    if set(m.classical.alphabet) != set(m.alphabet):
        violations.append(
            "classical alphabet {} differs from input alphabet {}".format(
                sorted(m.classical.alphabet), sorted(m.alphabet)
            )
        )
    if m.classical.accepting:
        violations.append("classical component has an accepting set")
    violations += [
        "classical: " + violation
        for violation in _dfa_violations(m.classical)
    ]
    for state in m.classical.states:
        for symbol in m.alphabet:
            key = (state, symbol)
            if key not in m.unitaries:
                violations.append(
                    "no unitary for {}".format(_sub("U", key))
                )
                continue
            violations += _unitary_violations(
                _sub("U", key), m.unitaries[key], dim, tol
            )
        if state not in m.final_measurements:
            violations.append(
                "no final measurement for {}".format(_sub("M", state))
            )
            continue
        violations += _measurement_violations(
            _sub("M", state),
            m.final_measurements[state],
            (Qfac1.ACCEPT, Qfac1.REJECT),
            dim,
            tol,
            projective=True,
        )
    violations += _labels(
        "final measurement state", m.final_measurements, m.classical.states
    )
    return violations


@validate_machine.register(Qcfa1)
def _(m, tol=None):
    tol = resolve_tolerance(tol)
    dim = len(m.quantum_states)
    violations = _labels("initial state", [m.initial], m.quantum_states)
    violations += _labels(
        "classical initial state", [m.classical_initial], m.classical_states
    )
    violations += _labels(
        "accepting state", m.accepting, m.classical_states
    )
    for state in m.classical_states:
        for symbol in m.alphabet:
            key = (state, symbol)
            if key not in m.measurements:
                violations.append(
                    "no measurement for {}".format(_sub("Theta", key))
                )
            else:
                violations += _measurement_violations(
                    _sub("Theta", key),
                    m.measurements[key],
                    m.outcomes,
                    dim,
                    tol,
                    projective=False,
                )
            for outcome in m.outcomes:
                target = m.classical_delta.get((state, symbol, outcome))
                if target is None:
                    violations.append(
                        "delta missing transition for ({}, {}, {})".format(
                            state, symbol, outcome
                        )
                    )
                elif target not in m.classical_states:
                    violations.append(
                        "delta({}, {}, {}) = {} not a state".format(
                            state, symbol, outcome, target
                        )
                    )
    return violations


def _amplitude_label_violations(m, key_kinds) -> List[str]:
    declared = {
        "state": m.states,
        "symbol": m.alphabet,
        "output": m.output_alphabet,
    }
    violations = []
    for key in m.delta:
        for kind, label in zip(key_kinds, key):
            if label not in declared[kind]:
                violations.append(
                    "delta key {} uses undeclared {} {}".format(
                        "|".join(key), kind, label
                    )
                )
    return violations


@validate_machine.register(AncillaQfa)
def _(m, tol=None):
    tol = resolve_tolerance(tol)
    violations = _labels("initial state", [m.initial], m.states)
    violations += _labels("accepting state", m.accepting, m.states)
    labels = _amplitude_label_violations(
        m, ("state", "symbol", "state", "output")
    )
    if labels:
        return violations + labels
    for symbol in m.alphabet:
        residual = isometry_residual(m.stacked_isometry(symbol))
        if not residual <= tol:
            violations.append(
                "{} not an isometry, residual {:.1e}".format(
                    _sub("V", symbol), residual
                )
            )
    return violations


@validate_machine.register(Qsm)
def _(m, tol=None):
    tol = resolve_tolerance(tol)
    violations = _labels("initial state", [m.initial], m.states)
    labels = _amplitude_label_violations(
        m, ("symbol", "state", "output", "state")
    )
    if labels:
        return violations + labels
    for symbol in m.alphabet:
        operators = list(m.transition_operators(symbol).values())
        residual = completeness_residual(operators)
        if not residual <= tol:
            violations.append(
                "delta for symbol {} violates the orthogonality condition, "
                "residual {:.1e}".format(symbol, residual)
            )
    return violations


# Structural equality


def _canonical(value):
    if isinstance(value, np.ndarray):
        return value
    if isinstance(value, QuantumOperation):
        return ("operation", value.kraus)
    if isinstance(value, GeneralMeasurement):
        return (type(value).__name__, value.outcomes, value.operators)
    if isinstance(value, Dfa) or type(value) in KINDS:
        return (
            type(value).__name__,
            {slot: getattr(value, slot) for slot in type(value).__slots__},
        )
    return value


def _equal(first, second) -> bool:
    first, second = _canonical(first), _canonical(second)
    if isinstance(first, np.ndarray) or isinstance(second, np.ndarray):
        return (
            isinstance(first, np.ndarray)
            and isinstance(second, np.ndarray)
            and first.shape == second.shape
            and bool(np.array_equal(first, second))
        )
    if isinstance(first, dict):
        return (
            isinstance(second, dict)
            and first.keys() == second.keys()
            and all(_equal(first[key], second[key]) for key in first)
        )
    if isinstance(first, (tuple, list)):
        return (
            isinstance(second, (tuple, list))
            and len(first) == len(second)
            and all(_equal(a, b) for a, b in zip(first, second))
        )
    return first == second


def machines_equal(first: Machine, second: Machine) -> bool:
    """Same model, same labels in the same order, identical entries."""
    return type(first) is type(second) and _equal(first, second)