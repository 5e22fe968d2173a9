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
from numpy.testing import assert_allclose

from qfa.hybrid.channels import (
    GeneralMeasurement,
    ProjectiveMeasurement,
    measurement_violations,
    validate_operation,
)
from qfa.hybrid.classical import dfa_violations
from qfa.hybrid.generators import (
    random_dfa,
    random_general_measurement,
    random_isometry,
    random_mo1g,
    random_operation,
    random_projective_measurement,
    random_unitary,
)
from qfa.hybrid.linalg import identity, is_unitary, subset_of_projector


class TestMatrices(TestCase):
    def test_unitary(self):
        rng = np.random.default_rng(400)
        for dim in (1, 2, 5):
            self.assertTrue(is_unitary(random_unitary(dim, rng)))

    def test_isometry(self):
        isometry = random_isometry(6, 2, 401)
        self.assertEqual(isometry.shape, (6, 2))
        assert_allclose(
            isometry.conj().T @ isometry, identity(2), atol=1e-12
        )

    def test_seeded(self):
        assert_allclose(random_unitary(3, 402), random_unitary(3, 402))

    def test_operation(self):
        operation = random_operation(3, 4, 403)
        self.assertEqual(len(operation), 4)
        self.assertEqual(operation.dim, 3)
        self.assertTrue(validate_operation(operation))


class TestMeasurements(TestCase):
    def test_projective(self):
        rng = np.random.default_rng(404)
        for dim in (1, 2, 4):
            measurement = random_projective_measurement(
                dim, ("0", "1", "2"), rng
            )
            self.assertIsInstance(measurement, ProjectiveMeasurement)
            self.assertEqual(measurement_violations(measurement), [])

    def test_general(self):
        measurement = random_general_measurement(3, ("0", "1"), 405)
        self.assertIsInstance(measurement, GeneralMeasurement)
        self.assertNotIsInstance(measurement, ProjectiveMeasurement)
        self.assertEqual(measurement_violations(measurement), [])


class TestMachines(TestCase):
    def test_dfa(self):
        dfa = random_dfa(406, n_states=5, alphabet=("x", "y", "z"))
        self.assertEqual(dfa.states, ("s1", "s2", "s3", "s4", "s5"))
        self.assertEqual(dfa.initial, "s1")
        self.assertEqual(dfa_violations(dfa), [])
        self.assertEqual(random_dfa(407, accepting_ratio=0).accepting, set())
        self.assertEqual(
            random_dfa(407, accepting_ratio=1).accepting, set(dfa.states[:3])
        )

    def test_mo1g_projector(self):
        machine = random_mo1g(408, dim=3)
        self.assertEqual(machine.states, ("q1", "q2", "q3"))
        self.assertIsNotNone(subset_of_projector(machine.accept_projector))
        for symbol in machine.alphabet:
            self.assertLessEqual(len(machine.operations[symbol]), 2)
