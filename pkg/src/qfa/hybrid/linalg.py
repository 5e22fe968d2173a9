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
Dense complex linear algebra
----------------------------

Matrices are ``numpy`` arrays of ``complex128``. The basis vector
``|q_i>`` is the ``i``-th standard column vector, counted from 0.

Every predicate takes a Frobenius-norm tolerance; ``None`` means the value
configured through :envvar:`QFA_HYBRID_TOLERANCE`.
"""

from typing import Iterable, Optional

import numpy as np

from qfa.hybrid.config import resolve_tolerance
from qfa.hybrid.errors import DimensionMismatchError, QfaError

ComplexMatrix = np.ndarray


def as_matrix(data) -> ComplexMatrix:
    """Converts ``data`` to a 2-D ``complex128`` array.

    Raises:
        QfaError: if ``data`` is not 2-D, is empty or has a non-finite entry.
    """
    matrix = np.array(data, dtype=np.complex128)
    if matrix.ndim != 2 or 0 in matrix.shape:
        raise QfaError(
            "expected a non-empty 2-D matrix, got shape {}".format(
                matrix.shape
            )
        )
    if not np.all(np.isfinite(matrix)):
        raise QfaError("matrix entries must be finite")
    return matrix


def identity(dim: int) -> ComplexMatrix:
    return np.eye(dim, dtype=np.complex128)


def ket(dim: int, index: int) -> ComplexMatrix:
    if not 0 <= index < dim:
        raise DimensionMismatchError(
            "basis index {} out of range for dimension {}".format(index, dim)
        )
    vector = np.zeros((dim, 1), dtype=np.complex128)
    vector[index, 0] = 1
    return vector


def basis_projector(dim: int, index: int) -> ComplexMatrix:
    vector = ket(dim, index)
    return vector @ vector.conj().T


def outer(dim: int, row: int, col: int) -> ComplexMatrix:
    """``|row><col|`` on a ``dim``-dimensional space."""
    return ket(dim, row) @ ket(dim, col).conj().T


def dagger(matrix: ComplexMatrix) -> ComplexMatrix:
    return matrix.conj().T


def frobenius(matrix: ComplexMatrix) -> float:
    return float(np.linalg.norm(matrix, "fro"))


def tensor_product(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(a, b)


def partial_trace_second(
    m: ComplexMatrix, dim_a: int, dim_b: int
) -> ComplexMatrix:
    """Traces out the second factor of an operator on ``H_A (x) H_B``."""
    size = dim_a * dim_b
    if m.shape != (size, size):
        raise DimensionMismatchError(
            "cannot trace out a {}-dimensional factor from a {} matrix "
            "with a {}-dimensional first factor".format(dim_b, m.shape, dim_a)
        )
    return np.einsum("ikjk->ij", m.reshape(dim_a, dim_b, dim_a, dim_b))


def isometry_residual(v: ComplexMatrix) -> float:
    return frobenius(dagger(v) @ v - identity(v.shape[1]))


def is_isometry(v: ComplexMatrix, tol: Optional[float] = None) -> bool:
    return isometry_residual(v) <= resolve_tolerance(tol)


def is_unitary(u: ComplexMatrix, tol: Optional[float] = None) -> bool:
    return u.shape[0] == u.shape[1] and is_isometry(u, tol)


def is_hermitian(m: ComplexMatrix, tol: Optional[float] = None) -> bool:
    return (
        m.shape[0] == m.shape[1]
        and frobenius(m - dagger(m)) <= resolve_tolerance(tol)
    )


def projector_residual(p: ComplexMatrix) -> float:
    """The larger of ``||P - P^+||`` and ``||P^2 - P||``."""
    return max(frobenius(p - dagger(p)), frobenius(p @ p - p))


def is_projector(p: ComplexMatrix, tol: Optional[float] = None) -> bool:
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise DimensionMismatchError(
            "a projector must be square, got shape {}".format(p.shape)
        )
    return projector_residual(p) <= resolve_tolerance(tol)


def is_density_operator(
    m: ComplexMatrix, tol: Optional[float] = None
) -> bool:
    tol = resolve_tolerance(tol)
    if not is_hermitian(m, tol):
        return False
    if not abs(np.trace(m) - 1) <= tol:
        return False
    hermitian_part = (m + dagger(m)) / 2
    return bool(np.linalg.eigvalsh(hermitian_part).min() >= -tol)


def projector_from_subset(dim: int, indices: Iterable[int]) -> ComplexMatrix:
    projector = np.zeros((dim, dim), dtype=np.complex128)
    for index in indices:
        if not 0 <= index < dim:
            raise DimensionMismatchError(
                "index {} out of range for dimension {}".format(index, dim)
            )
        projector[index, index] = 1
    return projector


def subset_of_projector(p: ComplexMatrix) -> Optional[Iterable[int]]:
    """Returns the indices ``I`` with ``p == projector_from_subset(dim, I)``.

    ``None`` when ``p`` is not an exactly diagonal 0/1 matrix.
    """
    diagonal = np.diag(p)
    if np.count_nonzero(p - np.diag(diagonal)):
        return None
    if not np.all((diagonal == 0) | (diagonal == 1)):
        return None
    return [int(index) for index in np.flatnonzero(diagonal)]


class DensityOperator:
    """A validated, read-only density matrix."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix: ComplexMatrix, tol: Optional[float] = None):
        matrix = as_matrix(matrix)
        if not is_density_operator(matrix, tol):
            raise QfaError(
                "not a density operator (Hermitian, PSD, trace one)"
            )
        matrix.setflags(write=False)
        self._matrix = matrix

    @classmethod
    def pure(cls, dim: int, index: int) -> "DensityOperator":
        return cls(basis_projector(dim, index))

    @classmethod
    def from_matrix(
        cls, matrix, tol: Optional[float] = None
    ) -> "DensityOperator":
        return cls(matrix, tol)

    @classmethod
    def _trusted(cls, matrix: ComplexMatrix) -> "DensityOperator":
        # Results of trace-preserving maps on valid states skip the
        # eigenvalue check.
        instance = cls.__new__(cls)
        matrix = np.array(matrix, dtype=np.complex128)
        matrix.setflags(write=False)
        instance._matrix = matrix
        return instance

    @property
    def matrix(self) -> ComplexMatrix:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def expectation(self, observable: ComplexMatrix) -> float:
        """``Tr(observable rho)``, real part."""
        return float(np.real(np.trace(observable @ self._matrix)))

    def __repr__(self):
        return "DensityOperator(dim={})".format(self.dim)
