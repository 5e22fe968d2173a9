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
Deterministic finite automata
-----------------------------

States and symbols are strings; their declaration order fixes the basis
used by every matrix construction. Input words are sequences of symbols, so
a plain ``str`` is read one character per symbol.
"""

from typing import Dict, FrozenSet, List, Mapping, Sequence, Tuple

import numpy as np

from qfa.hybrid.errors import UnknownSymbolError

Word = Sequence[str]


class Dfa:
    """``(S, Sigma, s_1, delta, S_a)`` with a total transition function.

    An empty ``accepting`` set is legal; it models a DFA without an
    accepting set.
    """

    __slots__ = ("states", "alphabet", "initial", "accepting", "delta")

    def __init__(
        self,
        states: Sequence[str],
        alphabet: Sequence[str],
        initial: str,
        accepting,
        delta: Mapping[Tuple[str, str], str],
    ):
        self.states: Tuple[str, ...] = tuple(states)
        self.alphabet: Tuple[str, ...] = tuple(alphabet)
        self.initial = initial
        self.accepting: FrozenSet[str] = frozenset(accepting)
        self.delta: Dict[Tuple[str, str], str] = dict(delta)

    def __repr__(self):
        return "Dfa(states={}, alphabet={})".format(
            list(self.states), list(self.alphabet)
        )

    def index(self, state: str) -> int:
        return self.states.index(state)


def check_word(word: Word, alphabet: Sequence[str]) -> None:
    for symbol in word:
        if symbol not in alphabet:
            raise UnknownSymbolError(symbol, alphabet)


def dfa_violations(a: Dfa) -> List[str]:
    violations = []
    states = set(a.states)
    if len(states) != len(a.states):
        violations.append("duplicate states")
    if len(set(a.alphabet)) != len(a.alphabet):
        violations.append("duplicate symbols")
    if a.initial not in states:
        violations.append("initial state {} not a state".format(a.initial))
    for state in sorted(a.accepting - states):
        violations.append("accepting state {} not a state".format(state))
    for state in a.states:
        for symbol in a.alphabet:
            target = a.delta.get((state, symbol))
            if target is None:
                violations.append(
                    "delta missing transition for ({}, {})".format(
                        state, symbol
                    )
                )
            elif target not in states:
                violations.append(
                    "delta({}, {}) = {} not a state".format(
                        state, symbol, target
                    )
                )
    return violations


def dfa_run(a: Dfa, word: Word) -> str:
    """``delta*(s_1, word)``."""
    check_word(word, a.alphabet)
    state = a.initial
    for symbol in word:
        state = a.delta[(state, symbol)]
    return state


def dfa_accepts(a: Dfa, word: Word) -> bool:
    return dfa_run(a, word) in a.accepting


def transition_matrices(a: Dfa) -> Dict[str, np.ndarray]:
    """``A_sigma[i, j] = 1`` iff ``delta(s_j, sigma) = s_i``."""
    size = len(a.states)
    matrices = {}
    for symbol in a.alphabet:
        matrix = np.zeros((size, size), dtype=np.int64)
        for column, state in enumerate(a.states):
            matrix[a.index(a.delta[(state, symbol)]), column] = 1
        matrices[symbol] = matrix
    return matrices


def dfa_matrix_eval(a: Dfa, word: Word) -> int:
    """``f_A(x) = eta A_{x_n} ... A_{x_1} pi`` with 0/1 matrices."""
    check_word(word, a.alphabet)
    matrices = transition_matrices(a)
    vector = np.zeros(len(a.states), dtype=np.int64)
    vector[a.index(a.initial)] = 1
    for symbol in word:
        vector = matrices[symbol] @ vector
    eta = np.array(
        [1 if state in a.accepting else 0 for state in a.states],
        dtype=np.int64,
    )
    return int(eta @ vector)


def dfa_complement(a: Dfa) -> Dfa:
    return Dfa(
        a.states,
        a.alphabet,
        a.initial,
        [state for state in a.states if state not in a.accepting],
        a.delta,
    )
