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
Quantum operations and measurements
-----------------------------------

A :class:`QuantumOperation` is kept in operator-sum form
``E(rho) = sum_k E_k rho E_k^+``. Construction only checks shapes; the
completeness condition ``sum_k E_k^+ E_k = I`` is checked by
:func:`validate_operation` so that invalid families can still be inspected.

Controlled operations act on ``H_A (x) H_B``: a measurement of ``A`` selects
the operation applied to ``B``.
"""

from logging import getLogger
from typing import List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from qfa.hybrid.config import resolve_tolerance
from qfa.hybrid.errors import (
    DimensionMismatchError,
    MissingBranchError,
    QfaError,
)
from qfa.hybrid.linalg import (
    ComplexMatrix,
    DensityOperator,
    as_matrix,
    dagger,
    frobenius,
    identity,
    projector_residual,
    tensor_product,
)

logger = getLogger(__name__)


def _square_family(matrices: Sequence, what: str) -> Tuple[int, tuple]:
    if not matrices:
        raise QfaError("{} needs at least one operator".format(what))
    converted = tuple(as_matrix(matrix) for matrix in matrices)
    dim = converted[0].shape[0]
    for matrix in converted:
        if matrix.shape != (dim, dim):
            raise DimensionMismatchError(
                "{} operators must all be {}x{}, got {}".format(
                    what, dim, dim, matrix.shape
                )
            )
    for matrix in converted:
        matrix.setflags(write=False)
    return dim, converted


def completeness_residual(operators: Sequence[ComplexMatrix]) -> float:
    """``|| sum_k E_k^+ E_k - I ||_F``."""
    total = sum(dagger(op) @ op for op in operators)
    return frobenius(total - identity(operators[0].shape[0]))


class QuantumOperation:
    """A quantum operation given by its Kraus elements."""

    __slots__ = ("dim", "kraus")

    def __init__(self, kraus: Sequence):
        self.dim, self.kraus = _square_family(kraus, "quantum operation")

    def __len__(self):
        return len(self.kraus)

    def __repr__(self):
        return "QuantumOperation(dim={}, elements={})".format(
            self.dim, len(self.kraus)
        )

    def apply(self, rho: ComplexMatrix) -> ComplexMatrix:
        """Applies the operation to a raw matrix."""
        result = np.zeros_like(rho)
        for element in self.kraus:
            result += element @ rho @ dagger(element)
        return result


def identity_operation(dim: int) -> QuantumOperation:
    return QuantumOperation([identity(dim)])


def validate_operation(
    op: QuantumOperation, tol: Optional[float] = None
) -> bool:
    return completeness_residual(op.kraus) <= resolve_tolerance(tol)


def apply_operation(
    op: QuantumOperation, rho: DensityOperator
) -> DensityOperator:
    if rho.dim != op.dim:
        raise DimensionMismatchError(
            "operation on dimension {} applied to a {}-dimensional "
            "state".format(op.dim, rho.dim)
        )
    # pylint: disable=protected-access
    return DensityOperator._trusted(op.apply(rho.matrix))


def compose_operations(
    outer: QuantumOperation,
    inner: QuantumOperation,
    drop_zero: bool = True,
) -> QuantumOperation:
    """The operation ``outer o inner`` with elements ``F_j E_k``.

    Products that are exactly zero are left out when ``drop_zero`` is set;
    at least one element is always kept.
    """
    if outer.dim != inner.dim:
        raise DimensionMismatchError(
            "cannot compose operations on dimensions {} and {}".format(
                outer.dim, inner.dim
            )
        )
    products = [f @ e for f in outer.kraus for e in inner.kraus]
    if drop_zero:
        kept = [product for product in products if np.any(product)]
        logger.debug(
            "composition kept %d of %d elements", len(kept), len(products)
        )
        products = kept or products[:1]
    return QuantumOperation(products)


def tensor_operations(
    first: QuantumOperation, second: QuantumOperation
) -> QuantumOperation:
    """The operation ``first (x) second`` with elements ``A_i (x) B_j``."""
    return QuantumOperation(
        [tensor_product(a, b) for a in first.kraus for b in second.kraus]
    )


class GeneralMeasurement:
    """Measurement operators ``{M_m}`` indexed by string outcomes."""

    __slots__ = ("dim", "outcomes", "operators")

    def __init__(self, outcomes: Sequence[str], operators: Sequence):
        outcomes = tuple(outcomes)
        if len(set(outcomes)) != len(outcomes):
            raise QfaError("measurement outcomes must be distinct")
        if len(outcomes) != len(operators):
            raise DimensionMismatchError(
                "{} outcomes but {} operators".format(
                    len(outcomes), len(operators)
                )
            )
        self.outcomes = outcomes
        self.dim, self.operators = _square_family(operators, "measurement")

    def operator(self, outcome: str) -> ComplexMatrix:
        return self.operators[self.outcomes.index(outcome)]

    def items(self):
        return zip(self.outcomes, self.operators)

    def __repr__(self):
        return "{}(dim={}, outcomes={})".format(
            type(self).__name__, self.dim, list(self.outcomes)
        )


class ProjectiveMeasurement(GeneralMeasurement):
    """A measurement whose operators are orthogonal projectors."""

    __slots__ = ()

    @property
    def projectors(self) -> Tuple[ComplexMatrix, ...]:
        return self.operators


def measurement_violations(
    measurement: GeneralMeasurement,
    name: str = "measurement",
    tol: Optional[float] = None,
) -> List[str]:
    tol = resolve_tolerance(tol)
    violations = []
    if isinstance(measurement, ProjectiveMeasurement):
        for outcome, projector in measurement.items():
            residual = projector_residual(projector)
            if not residual <= tol:
                violations.append(
                    "{} outcome {} not a projector, residual {:.1e}".format(
                        name, outcome, residual
                    )
                )
        pairs = [
            (first, second)
            for i, first in enumerate(measurement.items())
            for second in list(measurement.items())[i + 1 :]
        ]
        for (out_a, p_a), (out_b, p_b) in pairs:
            overlap = frobenius(p_a @ p_b)
            if not overlap <= tol:
                violations.append(
                    "{} projectors {} and {} not orthogonal, "
                    "residual {:.1e}".format(name, out_a, out_b, overlap)
                )
        residual = frobenius(
            sum(measurement.projectors) - identity(measurement.dim)
        )
    else:
        residual = completeness_residual(measurement.operators)
    if not residual <= tol:
        violations.append(
            "{} not complete, residual {:.1e}".format(name, residual)
        )
    return violations


class MeasurementResult(NamedTuple):
    outcome: str
    probability: float
    state: DensityOperator


def measure(
    measurement: GeneralMeasurement,
    rho: DensityOperator,
    tol: Optional[float] = None,
) -> List[MeasurementResult]:
    """Outcomes with probability above ``tol``, in declaration order."""
    if rho.dim != measurement.dim:
        raise DimensionMismatchError(
            "measurement on dimension {} applied to a {}-dimensional "
            "state".format(measurement.dim, rho.dim)
        )
    tol = resolve_tolerance(tol)
    results = []
    for outcome, operator in measurement.items():
        unnormalized = operator @ rho.matrix @ dagger(operator)
        probability = float(np.real(np.trace(unnormalized)))
        if probability > tol:
            # pylint: disable=protected-access
            state = DensityOperator._trusted(unnormalized / probability)
            results.append(MeasurementResult(outcome, probability, state))
    return results


def _controlled(
    measurement: GeneralMeasurement,
    branches: Mapping[str, QuantumOperation],
) -> QuantumOperation:
    missing = [o for o in measurement.outcomes if o not in branches]
    if missing:
        raise MissingBranchError(
            "no branch operation for outcome(s) {}".format(missing)
        )
    unknown = sorted(set(branches) - set(measurement.outcomes))
    if unknown:
        raise MissingBranchError(
            "branch operation(s) for unknown outcome(s) {}".format(unknown)
        )
    dims = {branches[outcome].dim for outcome in measurement.outcomes}
    if len(dims) != 1:
        raise DimensionMismatchError(
            "branch operations act on different dimensions {}".format(
                sorted(dims)
            )
        )
    return QuantumOperation(
        [
            tensor_product(operator, element)
            for outcome, operator in measurement.items()
            for element in branches[outcome].kraus
        ]
    )


def controlled_operation(
    measurement: ProjectiveMeasurement,
    branches: Mapping[str, QuantumOperation],
) -> QuantumOperation:
    """'If ``A`` was measured in result ``i``, perform ``branches[i]`` on B'.

    Elements are ``P_i (x) E_k^i``; on a product state ``rho (x) sigma`` the
    result is ``sum_i P_i rho P_i (x) E_i(sigma)``.
    """
    return _controlled(measurement, branches)


def controlled_operation_general(
    measurement: GeneralMeasurement,
    branches: Mapping[str, QuantumOperation],
) -> QuantumOperation:
    """Same as :func:`controlled_operation` with elements ``M_i (x) E_k^i``."""
    return _controlled(measurement, branches)
