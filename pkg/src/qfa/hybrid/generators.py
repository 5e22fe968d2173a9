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

"""Seeded random machines for property tests.

Every function takes ``rng``, anything accepted by
:func:`numpy.random.default_rng` (a seed or a ``Generator``), so a test can
pass an integer and get the same machine on every run.
"""

from typing import Optional, Sequence

import numpy as np

from qfa.hybrid.channels import (
    GeneralMeasurement,
    ProjectiveMeasurement,
    QuantumOperation,
)
from qfa.hybrid.classical import Dfa
from qfa.hybrid.linalg import ComplexMatrix, projector_from_subset
from qfa.hybrid.machines import (
    AncillaQfa,
    Cl1Qfa,
    Mo1gQfa,
    Qcfa1,
    Qfac1,
    Qsm,
)

ALPHABET = ("a", "b")


def _generator(rng) -> np.random.Generator:
    return np.random.default_rng(rng)


def _labels(prefix: str, count: int):
    return tuple("{}{}".format(prefix, index + 1) for index in range(count))


def _gaussian(rng: np.random.Generator, rows: int, cols: int):
    return (
        rng.standard_normal((rows, cols))
        + 1j * rng.standard_normal((rows, cols))
    ) / np.sqrt(2)


def random_isometry(rows: int, cols: int, rng=None) -> ComplexMatrix:
    """Haar-distributed ``rows x cols`` isometry, ``rows >= cols``."""
    rng = _generator(rng)
    q, r = np.linalg.qr(_gaussian(rng, rows, cols))
    diagonal = np.diag(r)
    phases = np.where(diagonal == 0, 1, diagonal / np.abs(diagonal))
    return q * phases


def random_unitary(dim: int, rng=None) -> ComplexMatrix:
    return random_isometry(dim, dim, rng)


def random_operation(dim: int, k: int, rng=None) -> QuantumOperation:
    """``k`` Kraus elements cut from a ``k*dim x dim`` isometry, i.e. the
    operation obtained by tracing out a ``k``-dimensional environment."""
    isometry = random_isometry(k * dim, dim, rng)
    return QuantumOperation(
        [isometry[i * dim : (i + 1) * dim, :] for i in range(k)]
    )


def random_projective_measurement(
    dim: int, outcomes: Sequence[str], rng=None
) -> ProjectiveMeasurement:
    """Projectors onto groups of columns of a random unitary.

    Some projectors may be zero when ``dim < len(outcomes)``.
    """
    rng = _generator(rng)
    unitary = random_unitary(dim, rng)
    owners = rng.integers(0, len(outcomes), size=dim)
    projectors = []
    for index in range(len(outcomes)):
        columns = unitary[:, owners == index]
        projectors.append(columns @ columns.conj().T)
    return ProjectiveMeasurement(outcomes, projectors)


def random_general_measurement(
    dim: int, outcomes: Sequence[str], rng=None
) -> GeneralMeasurement:
    operation = random_operation(dim, len(outcomes), rng)
    return GeneralMeasurement(outcomes, operation.kraus)


def random_dfa(
    rng=None,
    n_states: int = 3,
    alphabet: Sequence[str] = ALPHABET,
    accepting_ratio: float = 0.5,
) -> Dfa:
    rng = _generator(rng)
    states = _labels("s", n_states)
    delta = {
        (state, symbol): states[rng.integers(n_states)]
        for state in states
        for symbol in alphabet
    }
    accepting = [
        state for state in states if rng.random() < accepting_ratio
    ]
    return Dfa(states, alphabet, states[0], accepting, delta)


def random_mo1g(
    rng=None,
    dim: int = 2,
    alphabet: Sequence[str] = ALPHABET,
    max_kraus: int = 2,
    subset_projector: bool = True,
) -> Mo1gQfa:
    """With ``subset_projector`` the acceptance projector is diagonal, which
    :func:`qfa.hybrid.transforms.mo1g_to_ancilla` requires."""
    rng = _generator(rng)
    states = _labels("q", dim)
    operations = {
        symbol: random_operation(
            dim, int(rng.integers(1, max_kraus + 1)), rng
        )
        for symbol in alphabet
    }
    if subset_projector:
        indices = np.flatnonzero(rng.random(dim) < 0.5)
        projector = projector_from_subset(dim, indices)
    else:
        projector = random_projective_measurement(
            dim, ("a", "r"), rng
        ).operator("a")
    return Mo1gQfa(states, alphabet, states[0], operations, projector)


def random_cl1qfa(
    rng=None,
    quantum: int = 2,
    control: int = 2,
    outcomes: int = 2,
    alphabet: Sequence[str] = ALPHABET,
) -> Cl1Qfa:
    rng = _generator(rng)
    states = _labels("q", quantum)
    labels = tuple(str(index) for index in range(outcomes))
    return Cl1Qfa(
        states,
        alphabet,
        labels,
        states[0],
        {symbol: random_unitary(quantum, rng) for symbol in alphabet},
        random_projective_measurement(quantum, labels, rng),
        random_dfa(rng, control, labels),
    )


def random_qfac(
    rng=None,
    quantum: int = 2,
    classical: int = 2,
    alphabet: Sequence[str] = ALPHABET,
) -> Qfac1:
    rng = _generator(rng)
    states = _labels("q", quantum)
    dfa = random_dfa(rng, classical, alphabet, accepting_ratio=0)
    return Qfac1(
        states,
        alphabet,
        states[0],
        dfa,
        {
            (state, symbol): random_unitary(quantum, rng)
            for state in dfa.states
            for symbol in alphabet
        },
        {
            state: random_projective_measurement(
                quantum, (Qfac1.ACCEPT, Qfac1.REJECT), rng
            )
            for state in dfa.states
        },
    )


def random_qcfa(
    rng=None,
    quantum: int = 2,
    classical: int = 2,
    outcomes: int = 2,
    alphabet: Sequence[str] = ALPHABET,
) -> Qcfa1:
    rng = _generator(rng)
    states = _labels("q", quantum)
    classical_states = _labels("s", classical)
    labels = tuple(str(index) for index in range(outcomes))
    measurements = {
        (state, symbol): random_general_measurement(quantum, labels, rng)
        for state in classical_states
        for symbol in alphabet
    }
    delta = {
        (state, symbol, outcome): classical_states[
            rng.integers(classical)
        ]
        for state in classical_states
        for symbol in alphabet
        for outcome in labels
    }
    accepting = [state for state in classical_states if rng.random() < 0.5]
    return Qcfa1(
        states,
        classical_states,
        alphabet,
        labels,
        states[0],
        classical_states[0],
        measurements,
        delta,
        accepting,
    )


def _stacked_amplitudes(dim: int, outputs: int, symbol_isometries):
    # Row p * |Omega| + omega of the stacked isometry is <p, omega|.
    for symbol, isometry in symbol_isometries.items():
        for source in range(dim):
            for target in range(dim):
                for omega in range(outputs):
                    value = isometry[target * outputs + omega, source]
                    yield symbol, source, target, omega, complex(value)


def random_ancilla(
    rng=None,
    dim: int = 2,
    outputs: int = 2,
    alphabet: Sequence[str] = ALPHABET,
    accepting: Optional[Sequence[str]] = None,
) -> AncillaQfa:
    rng = _generator(rng)
    states = _labels("q", dim)
    omegas = _labels("w", outputs)
    isometries = {
        symbol: random_isometry(dim * outputs, dim, rng)
        for symbol in alphabet
    }
    delta = {
        (states[q], symbol, states[p], omegas[w]): value
        for symbol, q, p, w, value in _stacked_amplitudes(
            dim, outputs, isometries
        )
    }
    if accepting is None:
        accepting = [state for state in states if rng.random() < 0.5]
    return AncillaQfa(states, alphabet, omegas, states[0], delta, accepting)


def random_qsm(
    rng=None,
    dim: int = 2,
    outputs: int = 2,
    alphabet: Sequence[str] = ALPHABET,
) -> Qsm:
    rng = _generator(rng)
    states = _labels("s", dim)
    omegas = _labels("w", outputs)
    isometries = {
        symbol: random_isometry(dim * outputs, dim, rng)
        for symbol in alphabet
    }
    delta = {
        (symbol, states[s], omegas[w], states[t]): value
        for symbol, s, t, w, value in _stacked_amplitudes(
            dim, outputs, isometries
        )
    }
    return Qsm(states, alphabet, omegas, states[0], delta)
