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

"""Exceptions raised by qfa-hybrid.

Structural problems with a machine (a non-unitary ``U``, an incomplete Kraus
family, ...) are reported as data by
:func:`qfa.hybrid.machines.validate_machine`; the exceptions below are raised
for bad arguments and for documents that cannot be turned into machines.
"""

from typing import Optional, Sequence


class QfaError(Exception):
    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DimensionMismatchError(QfaError, ValueError):
    pass


class UnknownSymbolError(QfaError, ValueError):
    def __init__(self, symbol: str, alphabet: Sequence[str]):
        super().__init__(
            "symbol {!r} is not in the alphabet {}".format(
                symbol, list(alphabet)
            )
        )
        self.symbol = symbol


class UnknownLabelError(QfaError, ValueError):
    pass


class MissingBranchError(QfaError, ValueError):
    pass


class LengthMismatchError(QfaError, ValueError):
    pass


class NonSubsetProjectorError(QfaError, ValueError):
    pass


class AlphabetMismatchError(QfaError, ValueError):
    pass


class EnumerationLimitError(QfaError):
    """Raised when bounded enumeration would visit too many strings."""

    def __init__(self, count: int, limit: int):
        super().__init__(
            "bounded check needs {} strings, more than the limit of {}; "
            "use the algebraic method instead".format(count, limit)
        )
        self.count = count
        self.limit = limit


class NoTransformPathError(QfaError):
    pass


class MachineFormatError(QfaError):
    """Base class of every error raised while reading a machine document."""


class MachineSyntaxError(MachineFormatError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(
            "line {} column {}: {}".format(line, column, message)
        )
        self.line = line
        self.column = column


class MachineSemanticError(MachineFormatError):
    def __init__(self, field: str, message: str):
        super().__init__("{}: {}".format(field, message))
        self.field = field


class MachineValidationError(MachineFormatError):
    def __init__(self, violations: Sequence[str], kind: Optional[str] = None):
        super().__init__(
            "{} violates {} invariant(s): {}".format(
                kind or "machine", len(violations), "; ".join(violations)
            )
        )
        self.violations = list(violations)
