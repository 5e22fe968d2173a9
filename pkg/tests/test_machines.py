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

from qfa.hybrid.channels import GeneralMeasurement, ProjectiveMeasurement
from qfa.hybrid.classical import Dfa, dfa_accepts
from qfa.hybrid.config import DEFAULT_TOLERANCE
from qfa.hybrid.errors import (
    LengthMismatchError,
    QfaError,
    UnknownLabelError,
    UnknownSymbolError,
)
from qfa.hybrid.generators import (
    random_ancilla,
    random_cl1qfa,
    random_mo1g,
    random_qcfa,
    random_qfac,
    random_qsm,
)
from qfa.hybrid.linalg import identity
from qfa.hybrid.machines import (
    AncillaQfa,
    Cl1Qfa,
    Mo1gQfa,
    Qcfa1,
    Qfac1,
    Qsm,
    accept_prob,
    ancilla_accept_prob,
    cl1qfa_accept_prob,
    cl1qfa_history_distribution,
    hybrid_size,
    machine_kind,
    machines_equal,
    mo1g_accept_prob,
    mo1g_final_state,
    qcfa_accept_prob,
    qfac_accept_prob,
    qsm_output_distribution,
    qsm_output_prob,
    validate_machine,
)

from .fixtures import (
    HADAMARD,
    ONE,
    ZERO,
    all_accepting_cl,
    coin_qcfa,
    dfa_even,
    had_cl,
    words,
)


def hadamard_mo1g():
    return Mo1gQfa(("0", "1"), ("a",), "0", {"a": [HADAMARD]}, ZERO)


def single_state_qfac(unitary, accept):
    reject = identity(2) - accept
    classical = Dfa(("s",), ("a",), "s", (), {("s", "a"): "s"})
    return Qfac1(
        ("0", "1"),
        ("a",),
        "0",
        classical,
        {("s", "a"): unitary},
        {"s": ProjectiveMeasurement(("a", "r"), [accept, reject])},
    )


def permutation_ancilla():
    return AncillaQfa(
        ("q1", "q2"),
        ("a",),
        ("w",),
        "q1",
        {("q1", "a", "q2", "w"): 1, ("q2", "a", "q1", "w"): 1},
        ["q1"],
    )


class TestMo1gQfa(TestCase):
    def test_identity_channels(self):
        machine = Mo1gQfa.with_accepting(
            ("q1", "q2"),
            ("a", "b"),
            "q1",
            {"a": [identity(2)], "b": [identity(2)]},
            ["q1"],
        )
        for word in ("", "a", "abba"):
            self.assertAlmostEqual(mo1g_accept_prob(machine, word), 1.0)

    def test_hadamard(self):
        self.assertAlmostEqual(mo1g_accept_prob(hadamard_mo1g(), "a"), 0.5)
        self.assertAlmostEqual(mo1g_accept_prob(hadamard_mo1g(), "aa"), 1.0)
        self.assertAlmostEqual(mo1g_accept_prob(hadamard_mo1g(), ""), 1.0)

    def test_final_state(self):
        state = mo1g_final_state(hadamard_mo1g(), "a")
        assert_allclose(state.matrix, np.full((2, 2), 0.5), atol=1e-15)
        state = mo1g_final_state(hadamard_mo1g(), "", initial="1")
        assert_allclose(state.matrix, ONE)
        with self.assertRaises(UnknownLabelError):
            mo1g_final_state(hadamard_mo1g(), "", initial="2")

    def test_unknown_symbol(self):
        with self.assertRaises(UnknownSymbolError):
            mo1g_accept_prob(hadamard_mo1g(), "b")

    def test_clamping(self):
        amplified = Mo1gQfa(
            ("0",), ("a",), "0", {"a": [[[np.sqrt(2)]]]}, [[1]]
        )
        with self.assertLogs("qfa.hybrid.machines", level="WARNING"):
            self.assertEqual(mo1g_accept_prob(amplified, "a"), 1.0)
        self.assertAlmostEqual(
            mo1g_accept_prob(amplified, "a", clamp=False), 2.0
        )
        self.assertEqual(len(validate_machine(amplified)), 1)


class TestCl1Qfa(TestCase):
    def test_had_cl(self):
        self.assertAlmostEqual(cl1qfa_accept_prob(had_cl(), "a"), 0.5, 12)
        self.assertAlmostEqual(cl1qfa_accept_prob(had_cl(), "aa"), 0.5, 12)

    def test_empty_word_checks_control_language(self):
        self.assertEqual(cl1qfa_accept_prob(had_cl(), ""), 0.0)
        self.assertEqual(cl1qfa_accept_prob(had_cl(("t1",)), ""), 1.0)

    def test_history_distribution(self):
        distribution = cl1qfa_history_distribution(had_cl(), "aa")
        self.assertEqual(
            sorted(distribution),
            [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")],
        )
        for probability in distribution.values():
            self.assertAlmostEqual(probability, 0.25, 12)

    def test_zero_branches_are_pruned(self):
        identity_cl = Cl1Qfa(
            ("0", "1"),
            ("a",),
            ("0", "1"),
            "0",
            {"a": identity(2)},
            ProjectiveMeasurement(("0", "1"), [ZERO, ONE]),
            had_cl().control,
        )
        self.assertEqual(
            cl1qfa_history_distribution(identity_cl, "aaa"),
            {("0", "0", "0"): 1.0},
        )

    def test_total_probability(self):
        rng = np.random.default_rng(31)
        machine = all_accepting_cl()
        for _ in range(50):
            word = "a" * int(rng.integers(0, 11))
            self.assertAlmostEqual(
                cl1qfa_accept_prob(machine, word), 1.0, 12
            )

    def test_random_histories_sum_to_one(self):
        machine = random_cl1qfa(32, quantum=3, control=3)
        for word in ("", "ab", "bbaab"):
            total = sum(cl1qfa_history_distribution(machine, word).values())
            self.assertAlmostEqual(total, 1.0, 12)

    def test_pruning_does_not_change_sums(self):
        rng = np.random.default_rng(33)
        for _ in range(5):
            machine = random_cl1qfa(rng, quantum=3, control=3)
            for word in words(machine.alphabet, 4):
                self.assertAlmostEqual(
                    cl1qfa_accept_prob(machine, word),
                    cl1qfa_accept_prob(machine, word, prune_eps=0),
                    12,
                )


class TestQfac1(TestCase):
    def test_identity_empty_word(self):
        machine = single_state_qfac(identity(2), ZERO)
        self.assertAlmostEqual(qfac_accept_prob(machine, ""), 1.0)

    def test_hadamard(self):
        machine = single_state_qfac(HADAMARD, ZERO)
        self.assertAlmostEqual(qfac_accept_prob(machine, "a"), 0.5)

    def test_classical_state_selects_unitary(self):
        even = dfa_even()
        classical = Dfa(even.states, even.alphabet, "s1", (), even.delta)
        not_gate = np.array([[0, 1], [1, 0]])
        machine = Qfac1(
            ("0", "1"),
            ("a",),
            "0",
            classical,
            {("s1", "a"): not_gate, ("s2", "a"): identity(2)},
            {
                state: ProjectiveMeasurement(("a", "r"), [ONE, ZERO])
                for state in even.states
            },
        )
        # Only the first, third, ... symbols flip the qubit.
        expected = [0.0, 1.0, 1.0, 0.0, 0.0, 1.0]
        for length, value in enumerate(expected):
            self.assertAlmostEqual(
                qfac_accept_prob(machine, "a" * length), value
            )


class TestQcfa1(TestCase):
    def test_coin(self):
        self.assertAlmostEqual(qcfa_accept_prob(coin_qcfa(), "a"), 0.5, 12)
        self.assertAlmostEqual(qcfa_accept_prob(coin_qcfa(), "aaa"), 0.5, 12)

    def test_empty_word(self):
        self.assertEqual(qcfa_accept_prob(coin_qcfa(), ""), 0.0)

    def test_unitary_measurements_follow_the_dfa(self):
        even = dfa_even()
        unitary = GeneralMeasurement(("0",), [HADAMARD])
        machine = Qcfa1(
            ("0", "1"),
            even.states,
            ("a",),
            ("0",),
            "0",
            even.initial,
            {(state, "a"): unitary for state in even.states},
            {
                (state, "a", "0"): even.delta[(state, "a")]
                for state in even.states
            },
            even.accepting,
        )
        for word in words(("a",), 6):
            self.assertAlmostEqual(
                qcfa_accept_prob(machine, word),
                float(dfa_accepts(even, word)),
            )

    def test_complementary_accepting_sets(self):
        rng = np.random.default_rng(34)
        for _ in range(5):
            machine = random_qcfa(rng, quantum=3, classical=3)
            rest = [
                state
                for state in machine.classical_states
                if state not in machine.accepting
            ]
            other = Qcfa1(
                machine.quantum_states,
                machine.classical_states,
                machine.alphabet,
                machine.outcomes,
                machine.initial,
                machine.classical_initial,
                machine.measurements,
                machine.classical_delta,
                rest,
            )
            for word in words(machine.alphabet, 4):
                self.assertAlmostEqual(
                    qcfa_accept_prob(machine, word)
                    + qcfa_accept_prob(other, word),
                    1.0,
                    9,
                )

    def test_pruning_does_not_change_sums(self):
        machine = coin_qcfa()
        self.assertAlmostEqual(
            qcfa_accept_prob(machine, "aa"),
            qcfa_accept_prob(machine, "aa", prune_eps=0),
            12,
        )


class TestAncillaAndQsm(TestCase):
    def test_permutation(self):
        machine = permutation_ancilla()
        self.assertEqual(ancilla_accept_prob(machine, ""), 1.0)
        self.assertEqual(ancilla_accept_prob(machine, "a"), 0.0)
        self.assertEqual(ancilla_accept_prob(machine, "aa"), 1.0)

    def test_stacked_isometry(self):
        machine = random_ancilla(35, dim=3, outputs=2)
        for symbol in machine.alphabet:
            stacked = machine.stacked_isometry(symbol)
            self.assertEqual(stacked.shape, (6, 3))
            assert_allclose(
                stacked.conj().T @ stacked, identity(3), atol=1e-12
            )
            operators = machine.transition_operators(symbol).values()
            assert_allclose(
                sum(v.conj().T @ v for v in operators),
                identity(3),
                atol=1e-12,
            )

    def test_deterministic_printer(self):
        printer = Qsm(
            ("s1",), ("a",), ("x", "y"), "s1", {("a", "s1", "x", "s1"): 1}
        )
        self.assertEqual(qsm_output_prob(printer, "aa", "xx"), 1.0)
        self.assertEqual(qsm_output_prob(printer, "aa", "xy"), 0.0)
        self.assertEqual(qsm_output_prob(printer, "", ""), 1.0)
        self.assertEqual(
            qsm_output_distribution(printer, "aaa"), {("x", "x", "x"): 1.0}
        )

    def test_output_distribution_sums_to_one(self):
        rng = np.random.default_rng(36)
        for _ in range(5):
            machine = random_qsm(rng, dim=3, outputs=2)
            for word in ("", "a", "abba"):
                total = sum(
                    qsm_output_prob(machine, word, output)
                    for output in words(machine.output_alphabet, len(word))
                    if len(output) == len(word)
                )
                self.assertAlmostEqual(total, 1.0, 12)
                self.assertAlmostEqual(
                    sum(qsm_output_distribution(machine, word).values()),
                    1.0,
                    12,
                )

    def test_length_mismatch(self):
        with self.assertRaises(LengthMismatchError):
            qsm_output_prob(random_qsm(37), "ab", ("w1",))

    def test_qsm_has_no_acceptance(self):
        with self.assertRaises(QfaError):
            accept_prob(random_qsm(38), "a")

    def test_non_finite_amplitudes(self):
        for amplitude in (float("nan"), float("inf"), complex(0, -np.inf)):
            with self.assertRaises(QfaError):
                AncillaQfa(
                    ("q1",),
                    ("a",),
                    ("x",),
                    "q1",
                    {("q1", "a", "q1", "x"): amplitude},
                    ["q1"],
                )
            with self.assertRaises(QfaError):
                Qsm(
                    ("s1",),
                    ("a",),
                    ("x",),
                    "s1",
                    {("a", "s1", "x", "s1"): amplitude},
                )


class TestValidation(TestCase):
    def test_valid_machines(self):
        machines = [
            dfa_even(),
            hadamard_mo1g(),
            had_cl(),
            all_accepting_cl(),
            coin_qcfa(),
            permutation_ancilla(),
            random_mo1g(40, dim=3),
            random_mo1g(41, dim=3, subset_projector=False),
            random_cl1qfa(42),
            random_qfac(43, quantum=3, classical=3),
            random_qcfa(44),
            random_ancilla(45),
            random_qsm(46),
        ]
        for machine in machines:
            self.assertEqual(validate_machine(machine), [], machine)

    def test_scaled_unitary(self):
        base = had_cl()
        scaled = Cl1Qfa(
            base.quantum_states,
            base.alphabet,
            base.outcomes,
            base.initial,
            {"a": 1.01 * HADAMARD},
            base.measurement,
            base.control,
        )
        violations = validate_machine(scaled)
        self.assertEqual(len(violations), 1)
        self.assertTrue(violations[0].startswith("U_{a} not unitary"))

    def test_violation_names_component(self):
        base = random_qfac(47)
        unitaries = dict(base.unitaries)
        unitaries[("s2", "b")] = unitaries[("s2", "b")] * 1.001
        broken = Qfac1(
            base.quantum_states,
            base.alphabet,
            base.initial,
            base.classical,
            unitaries,
            base.final_measurements,
        )
        violations = validate_machine(broken)
        self.assertEqual(len(violations), 1)
        self.assertRegex(violations[0], r"^U_\{s2,b\} not unitary, residual ")

    def test_ancilla_isometry_violation(self):
        broken = AncillaQfa(
            ("q1", "q2"),
            ("a", "b"),
            ("w",),
            "q1",
            {
                ("q1", "a", "q2", "w"): 1,
                ("q2", "a", "q1", "w"): 1,
                ("q1", "b", "q1", "w"): 1,
                ("q2", "b", "q1", "w"): 1,
            },
            ["q1"],
        )
        violations = validate_machine(broken)
        self.assertEqual(len(violations), 1)
        self.assertTrue(violations[0].startswith("V_{b} not an isometry"))

    def test_qcfa_missing_transition(self):
        base = coin_qcfa()
        delta = dict(base.classical_delta)
        del delta[("s_acc", "a", "1")]
        broken = Qcfa1(
            base.quantum_states,
            base.classical_states,
            base.alphabet,
            base.outcomes,
            base.initial,
            base.classical_initial,
            base.measurements,
            delta,
            base.accepting,
        )
        self.assertEqual(
            validate_machine(broken),
            ["delta missing transition for (s_acc, a, 1)"],
        )

    def test_probabilities_within_tolerance(self):
        rng = np.random.default_rng(48)
        machines = [
            random_mo1g(rng, dim=3),
            random_cl1qfa(rng, quantum=3),
            random_qfac(rng, quantum=3),
            random_qcfa(rng, quantum=3),
            random_ancilla(rng, dim=3),
        ]
        for machine in machines:
            for word in words(machine.alphabet, 4):
                value = accept_prob(machine, word, clamp=False)
                self.assertGreaterEqual(value, -DEFAULT_TOLERANCE)
                self.assertLessEqual(value, 1 + DEFAULT_TOLERANCE)


class TestMachineHelpers(TestCase):
    def test_kind_and_size(self):
        self.assertEqual(machine_kind(had_cl()), "cl1qfa")
        self.assertEqual(hybrid_size(had_cl()), (2, 2))
        self.assertEqual(hybrid_size(coin_qcfa()), (3, 2))
        self.assertEqual(hybrid_size(dfa_even()), (1, 2))
        self.assertEqual(hybrid_size(random_qfac(49, 2, 3)), (3, 2))
        with self.assertRaises(QfaError):
            machine_kind(object())

    def test_accept_prob_dispatch(self):
        self.assertEqual(accept_prob(dfa_even(), "aa"), 1.0)
        self.assertAlmostEqual(accept_prob(had_cl(), "a"), 0.5)
        self.assertAlmostEqual(accept_prob(coin_qcfa(), "a"), 0.5)

    def test_structural_equality(self):
        self.assertTrue(machines_equal(had_cl(), had_cl()))
        self.assertFalse(machines_equal(had_cl(), all_accepting_cl()))
        self.assertFalse(machines_equal(had_cl(), coin_qcfa()))
        self.assertTrue(machines_equal(random_qsm(50), random_qsm(50)))
        self.assertFalse(machines_equal(random_qsm(50), random_qsm(51)))
