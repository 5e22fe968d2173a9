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
qfa-hybrid simulates one-way quantum finite automata that carry classical
states, converts them into measure-once general QFA (MO-1gQFA) and decides
their equivalence.

Usage
-----

.. code:: python

    from qfa.hybrid import accept_prob, convert, equiv_any, read_machine

    had_cl = read_machine("had_cl.json")
    accept_prob(had_cl, "aa")           # direct history enumeration
    mo = convert(had_cl, "mo1g")        # polynomial simulation
    equiv_any(had_cl, mo).equivalent    # True

Conversions and equivalence checks create OpenTelemetry spans; pass
``tracer_provider`` to use a provider other than the global one.

API
---
"""

from qfa.hybrid.classical import Dfa
from qfa.hybrid.equivalence import (
    EquivalenceVerdict,
    equiv_algebraic,
    equiv_any,
    equiv_bound_hybrid,
    equiv_bound_mo1g,
    equiv_bounded,
)
from qfa.hybrid.errors import QfaError
from qfa.hybrid.formats import (
    parse_machine,
    read_machine,
    serialize_machine,
    write_machine,
)
from qfa.hybrid.machines import (
    AncillaQfa,
    Cl1Qfa,
    Mo1gQfa,
    Qcfa1,
    Qfac1,
    Qsm,
    accept_prob,
    qsm_output_prob,
    validate_machine,
)
from qfa.hybrid.transforms import convert, to_mo1g
from qfa.hybrid.version import __version__

__all__ = [
    "AncillaQfa",
    "Cl1Qfa",
    "Dfa",
    "EquivalenceVerdict",
    "Mo1gQfa",
    "QfaError",
    "Qcfa1",
    "Qfac1",
    "Qsm",
    "__version__",
    "accept_prob",
    "convert",
    "equiv_algebraic",
    "equiv_any",
    "equiv_bound_hybrid",
    "equiv_bound_mo1g",
    "equiv_bounded",
    "parse_machine",
    "qsm_output_prob",
    "read_machine",
    "serialize_machine",
    "to_mo1g",
    "validate_machine",
    "write_machine",
]
