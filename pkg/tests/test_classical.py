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

from unittest import TestCase

import numpy as np

from qfa.hybrid.classical import (
    Dfa,
    dfa_accepts,
    dfa_complement,
    dfa_matrix_eval,
    dfa_run,
    dfa_violations,
    transition_matrices,
)
from qfa.hybrid.errors import UnknownSymbolError
from qfa.hybrid.generators import random_dfa

from .fixtures import dfa_even, words


class TestDfa(TestCase):
    def test_run(self):
        even = dfa_even()
        self.assertEqual(dfa_run(even, ""), "s1")
        self.assertEqual(dfa_run(even, "aa"), "s1")
        self.assertEqual(dfa_run(even, "aaa"), "s2")

    def test_accepts(self):
        even = dfa_even()
        self.assertTrue(dfa_accepts(even, ""))
        self.assertFalse(dfa_accepts(even, "a"))
        self.assertTrue(dfa_accepts(even, "aa"))

    def test_unknown_symbol(self):
        with self.assertRaises(UnknownSymbolError) as context:
            dfa_run(dfa_even(), "ab")
        self.assertEqual(context.exception.symbol, "b")
        with self.assertRaises(ValueError):
            dfa_accepts(dfa_even(), "b")

    def test_matrix_eval(self):
        even = dfa_even()
        self.assertEqual(dfa_matrix_eval(even, ""), 1)
        self.assertEqual(dfa_matrix_eval(even, "a"), 0)

    def test_matrix_eval_matches_run(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            dfa = random_dfa(rng, int(rng.integers(1, 6)))
            for word in words(dfa.alphabet, 5):
                self.assertEqual(
                    dfa_matrix_eval(dfa, word), int(dfa_accepts(dfa, word))
                )

    def test_transition_matrix_columns(self):
        dfa = random_dfa(22, 5)
        for matrix in transition_matrices(dfa).values():
            self.assertTrue(set(np.unique(matrix)) <= {0, 1})
            self.assertTrue(np.all(matrix.sum(axis=0) == 1))

    def test_complement(self):
        dfa = random_dfa(23, 4)
        complement = dfa_complement(dfa)
        for word in words(dfa.alphabet, 4):
            self.assertNotEqual(
                dfa_accepts(dfa, word), dfa_accepts(complement, word)
            )


class TestDfaViolations(TestCase):
    def test_valid(self):
        self.assertEqual(dfa_violations(dfa_even()), [])
        self.assertEqual(dfa_violations(random_dfa(24, 3)), [])

    def test_empty_accepting_set_is_legal(self):
        even = dfa_even()
        silent = Dfa(even.states, even.alphabet, "s1", (), even.delta)
        self.assertEqual(dfa_violations(silent), [])
        self.assertFalse(dfa_accepts(silent, ""))

    def test_missing_transition(self):
        partial = Dfa(("s1", "s2"), ("a",), "s1", ["s1"], {("s1", "a"): "s2"})
        self.assertEqual(
            dfa_violations(partial), ["delta missing transition for (s2, a)"]
        )

    def test_undeclared_labels(self):
        broken = Dfa(
            ("s1",), ("a",), "s0", ["s9"], {("s1", "a"): "s3"},
        )
        violations = dfa_violations(broken)
        self.assertEqual(len(violations), 3)
        self.assertIn("initial state s0 not a state", violations)
