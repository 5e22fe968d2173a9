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

import numpy as np
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import SimpleSpanProcessor
from opentelemetry.sdk.trace.export.in_memory_span_exporter import (
    InMemorySpanExporter,
)

from qfa.hybrid.channels import GeneralMeasurement, ProjectiveMeasurement
from qfa.hybrid.classical import Dfa
from qfa.hybrid.linalg import basis_projector
from qfa.hybrid.machines import Cl1Qfa, Qcfa1

HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
ZERO = basis_projector(2, 0)
ONE = basis_projector(2, 1)


def dfa_even():
    """Words over {a} of even length."""
    return Dfa(
        ("s1", "s2"),
        ("a",),
        "s1",
        ["s1"],
        {("s1", "a"): "s2", ("s2", "a"): "s1"},
    )


def dfa_odd():
    return Dfa(
        ("s1", "s2"),
        ("a",),
        "s1",
        ["s2"],
        {("s1", "a"): "s2", ("s2", "a"): "s1"},
    )


def _ends_in_zero(accepting=("t0",)):
    return Dfa(
        ("t0", "t1"),
        ("0", "1"),
        "t1",
        accepting,
        {
            ("t0", "0"): "t0",
            ("t1", "0"): "t0",
            ("t0", "1"): "t1",
            ("t1", "1"): "t1",
        },
    )


def had_cl(accepting=("t0",)):
    """A qubit rotated by H on every ``a`` and measured in the computational
    basis; accepted when the last outcome is 0."""
    return Cl1Qfa(
        ("0", "1"),
        ("a",),
        ("0", "1"),
        "0",
        {"a": HADAMARD},
        ProjectiveMeasurement(("0", "1"), [ZERO, ONE]),
        _ends_in_zero(accepting),
    )


def all_accepting_cl():
    """HAD-CL whose control language is every outcome word."""
    return had_cl(accepting=("t0", "t1"))


def coin_qcfa():
    """One fair quantum coin flip decides between two absorbing states."""
    classical = ("s1", "s_acc", "s_rej")
    flip = GeneralMeasurement(("0", "1"), [ZERO @ HADAMARD, ONE @ HADAMARD])
    delta = {}
    for outcome in ("0", "1"):
        delta[("s1", "a", outcome)] = "s_acc" if outcome == "0" else "s_rej"
        delta[("s_acc", "a", outcome)] = "s_acc"
        delta[("s_rej", "a", outcome)] = "s_rej"
    return Qcfa1(
        ("0", "1"),
        classical,
        ("a",),
        ("0", "1"),
        "0",
        "s1",
        {(state, "a"): flip for state in classical},
        delta,
        ["s_acc"],
    )


def words(alphabet, max_len):
    """Every word of length at most ``max_len``, shortest first."""
    result = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [
            word + (symbol,) for word in frontier for symbol in alphabet
        ]
        result.extend(frontier)
    return result


def in_memory_tracing():
    """A tracer provider whose finished spans land in the returned exporter."""
    exporter = InMemorySpanExporter()
    provider = TracerProvider()
    provider.add_span_processor(SimpleSpanProcessor(exporter))
    return provider, exporter
