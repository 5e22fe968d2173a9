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
Equivalence of acceptors
------------------------

Two machines are equivalent when they accept every word with the same
probability. Both procedures work on the linear representation of an
MO-1gQFA: the state ``rho`` flattened row-major into ``n**2`` coordinates,
each symbol acting by ``sum_k E_k (x) conj(E_k)`` and acceptance read off
by the functional ``vec(P_a^T)``.

* :func:`equiv_bounded` compares every word up to the length bound
  ``n1**2 + n2**2 - 1`` in length-then-lexicographic order.
* :func:`equiv_algebraic` closes the span reachable by the joined system
  and checks that the difference functional vanishes on it.

Symbols are ordered by ``sorted`` in both, so counterexamples are
reproducible.
"""

from collections import deque
from logging import getLogger
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from opentelemetry.trace import get_tracer

from qfa.hybrid.config import (
    NOISE_FLOOR,
    get_enum_limit,
    get_span_tolerance,
    resolve_tolerance,
)
from qfa.hybrid.errors import (
    AlphabetMismatchError,
    EnumerationLimitError,
    QfaError,
)
from qfa.hybrid.machines import (
    Machine,
    Mo1gQfa,
    hybrid_size,
    label_index,
    mo1g_accept_prob,
)
from qfa.hybrid.transforms import to_mo1g
from qfa.hybrid.version import __version__

__all__ = [
    "BOUNDED",
    "ALGEBRAIC",
    "EquivalenceVerdict",
    "LinearRepresentation",
    "equiv_algebraic",
    "equiv_any",
    "equiv_bound_hybrid",
    "equiv_bound_mo1g",
    "equiv_bounded",
    "hybrid_size",
    "linear_representation",
]

logger = getLogger(__name__)

BOUNDED = "bounded"
ALGEBRAIC = "algebraic"


class EquivalenceVerdict(NamedTuple):
    """Outcome of an equivalence check.

    ``counterexample`` is set exactly when ``equivalent`` is false, together
    with both acceptance probabilities of that word. ``within_tolerance``
    flags verdicts of equivalence whose largest discrepancy exceeded the
    float noise floor.
    """

    equivalent: bool
    method: str
    counterexample: Optional[Tuple[str, ...]] = None
    prob_left: Optional[float] = None
    prob_right: Optional[float] = None
    strings_checked: Optional[int] = None
    span_dimension: Optional[int] = None
    max_residual: float = 0.0
    within_tolerance: bool = False


class LinearRepresentation(NamedTuple):
    initial: np.ndarray
    matrices: Dict[str, np.ndarray]
    final: np.ndarray


def equiv_bound_mo1g(n1: int, n2: int) -> int:
    """Words up to this length decide equivalence of MO-1gQFA with ``n1``
    and ``n2`` states."""
    return n1 * n1 + n2 * n2 - 1


def equiv_bound_hybrid(k1: int, n1: int, k2: int, n2: int) -> int:
    """Bound for hybrid machines with ``k`` classical and ``n`` quantum
    states."""
    return equiv_bound_mo1g(k1 * n1, k2 * n2)


def linear_representation(m: Mo1gQfa) -> LinearRepresentation:
    dim = m.dim
    initial = np.zeros(dim * dim, dtype=np.complex128)
    start = label_index(m.states, m.initial)
    initial[start * dim + start] = 1
    matrices = {
        symbol: sum(
            np.kron(element, element.conj())
            for element in m.operations[symbol].kraus
        )
        for symbol in m.alphabet
    }
    return LinearRepresentation(
        initial, matrices, m.accept_projector.T.reshape(-1).copy()
    )


def _block_diagonal(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    rows = first.shape[0] + second.shape[0]
    joined = np.zeros((rows, rows), dtype=np.complex128)
    joined[: first.shape[0], : first.shape[0]] = first
    joined[first.shape[0] :, first.shape[0] :] = second
    return joined


def _joined(m1: Mo1gQfa, m2: Mo1gQfa):
    """Sorted symbols and the representation of ``P_1 - P_2``."""
    if set(m1.alphabet) != set(m2.alphabet):
        raise AlphabetMismatchError(
            "alphabets differ: {} and {}".format(
                sorted(m1.alphabet), sorted(m2.alphabet)
            )
        )
    first, second = linear_representation(m1), linear_representation(m2)
    symbols = sorted(m1.alphabet)
    return symbols, LinearRepresentation(
        np.concatenate([first.initial, second.initial]),
        {
            symbol: _block_diagonal(
                first.matrices[symbol], second.matrices[symbol]
            )
            for symbol in symbols
        },
        np.concatenate([first.final, -second.final]),
    )


def _word(index: int, length: int, symbols: Sequence[str]) -> tuple:
    digits = []
    for _ in range(length):
        index, digit = divmod(index, len(symbols))
        digits.append(symbols[digit])
    return tuple(reversed(digits))


def _report(
    m1: Mo1gQfa,
    m2: Mo1gQfa,
    method: str,
    word: Optional[tuple],
    max_residual: float,
    tol: float,
    **counts
) -> EquivalenceVerdict:
    if word is not None:
        left = mo1g_accept_prob(m1, word, clamp=False)
        right = mo1g_accept_prob(m2, word, clamp=False)
        logger.info(
            "%s check: not equivalent, counterexample %r", method, word
        )
        return EquivalenceVerdict(
            False,
            method,
            word,
            left,
            right,
            max_residual=max_residual,
            **counts
        )
    within = max_residual > NOISE_FLOOR
    if within:
        logger.warning(
            "%s check: equivalent within tolerance %.1e, max residual %.3e",
            method,
            tol,
            max_residual,
        )
    else:
        logger.info("%s check: equivalent", method)
    return EquivalenceVerdict(
        True,
        method,
        max_residual=max_residual,
        within_tolerance=within,
        **counts
    )


def _forward_levels(rep, symbols, depth) -> List[np.ndarray]:
    # Row i * |Sigma| + j of level p is A_{sigma_j} applied to row i of
    # level p - 1, so rows follow the lexicographic order of words.
    levels = [rep.initial[np.newaxis, :]]
    for _ in range(depth):
        previous = levels[-1]
        stacked = np.stack(
            [previous @ rep.matrices[symbol].T for symbol in symbols], axis=1
        )
        levels.append(stacked.reshape(-1, previous.shape[1]))
    return levels


def _backward_levels(rep, symbols, depth) -> List[np.ndarray]:
    # Row u of level m is eta A_{u_m} ... A_{u_1}; prepending sigma to u
    # multiplies by A_sigma on the right.
    levels = [rep.final[np.newaxis, :]]
    for _ in range(depth):
        previous = levels[-1]
        levels.append(
            np.concatenate(
                [previous @ rep.matrices[symbol] for symbol in symbols]
            )
        )
    return levels


def equiv_bounded(
    m1: Mo1gQfa,
    m2: Mo1gQfa,
    max_len: Optional[int] = None,
    tol: Optional[float] = None,
    tracer_provider=None,
) -> EquivalenceVerdict:
    """Compares the machines on every word of length at most ``max_len``.

    ``max_len`` defaults to :func:`equiv_bound_mo1g` of the state counts,
    which makes the check complete.

    Raises:
        AlphabetMismatchError: if the input alphabets differ.
        QfaError: if ``max_len`` is negative.
        EnumerationLimitError: if more than
            :envvar:`QFA_HYBRID_ENUM_LIMIT` words would be compared.
    """
    tol = resolve_tolerance(tol)
    symbols, rep = _joined(m1, m2)
    if max_len is None:
        max_len = equiv_bound_mo1g(m1.dim, m2.dim)
    if max_len < 0:
        raise QfaError("max_len must be non-negative, got {}".format(max_len))
    total = sum(len(symbols) ** length for length in range(max_len + 1))
    limit = get_enum_limit()
    if total > limit:
        raise EnumerationLimitError(total, limit)

    tracer = get_tracer(__name__, __version__, tracer_provider)
    with tracer.start_as_current_span("qfa.equivalence.bounded") as span:
        forward = _forward_levels(rep, symbols, max_len // 2)
        backward = _backward_levels(rep, symbols, max_len - max_len // 2)
        checked = 0
        max_residual = 0.0
        counterexample = None
        for length in range(max_len + 1):
            head = length // 2
            values = (forward[head] @ backward[length - head].T).ravel()
            residuals = np.abs(values.real)
            failing = np.flatnonzero(~(residuals <= tol))
            if failing.size:
                first = int(failing[0])
                counterexample = _word(first, length, symbols)
                checked += first + 1
                max_residual = max(
                    max_residual, float(residuals[: first + 1].max())
                )
                break
            checked += values.size
            max_residual = max(max_residual, float(residuals.max()))
            logger.debug(
                "length %d: %d words agree", length, values.size
            )
        verdict = _report(
            m1,
            m2,
            BOUNDED,
            counterexample,
            max_residual,
            tol,
            strings_checked=checked,
        )
        if span.is_recording():
            span.set_attribute("qfa.method", BOUNDED)
            span.set_attribute("qfa.equivalent", verdict.equivalent)
            span.set_attribute("qfa.strings_checked", checked)
    return verdict


def _orthogonal_part(basis: List[np.ndarray], vector: np.ndarray):
    residual = vector.copy()
    # Two Gram-Schmidt passes keep the basis orthonormal to working
    # precision.
    for _ in range(2):
        for direction in basis:
            residual = residual - direction * np.vdot(direction, residual)
    return residual


def equiv_algebraic(
    m1: Mo1gQfa,
    m2: Mo1gQfa,
    tol: Optional[float] = None,
    tracer_provider=None,
) -> EquivalenceVerdict:
    """Decides equivalence by closing the reachable span of the joined
    system.

    A word's vector joins the span when its component orthogonal to the
    current basis exceeds :envvar:`QFA_HYBRID_SPAN_TOLERANCE` relative to
    its norm; only such words are extended. Words are visited in
    length-then-lexicographic order, so the counterexample is a shortest
    one.

    Raises:
        AlphabetMismatchError: if the input alphabets differ.
    """
    tol = resolve_tolerance(tol)
    span_tol = get_span_tolerance()
    symbols, rep = _joined(m1, m2)
    dimension = rep.initial.size

    tracer = get_tracer(__name__, __version__, tracer_provider)
    with tracer.start_as_current_span("qfa.equivalence.algebraic") as span:
        basis: List[np.ndarray] = []
        queue = deque([((), rep.initial)])
        max_residual = 0.0
        counterexample = None
        while queue and len(basis) < dimension:
            word, vector = queue.popleft()
            norm = np.linalg.norm(vector)
            residual = _orthogonal_part(basis, vector)
            length = np.linalg.norm(residual)
            if norm == 0 or length <= span_tol * norm:
                continue
            basis.append(residual / length)
            difference = abs(float(np.real(rep.final @ vector)))
            max_residual = max(max_residual, difference)
            if not difference <= tol:
                counterexample = word
                break
            for symbol in symbols:
                queue.append(
                    (word + (symbol,), rep.matrices[symbol] @ vector)
                )
        logger.debug("reachable span has dimension %d", len(basis))
        verdict = _report(
            m1,
            m2,
            ALGEBRAIC,
            counterexample,
            max_residual,
            tol,
            span_dimension=len(basis),
        )
        if span.is_recording():
            span.set_attribute("qfa.method", ALGEBRAIC)
            span.set_attribute("qfa.equivalent", verdict.equivalent)
            span.set_attribute("qfa.span_dimension", len(basis))
    return verdict


def equiv_any(
    m1: Machine,
    m2: Machine,
    method: str = BOUNDED,
    max_len: Optional[int] = None,
    tol: Optional[float] = None,
    tracer_provider=None,
) -> EquivalenceVerdict:
    """Converts both acceptors to MO-1gQFA and compares those.

    The default bounded length is the hybrid bound
    ``(k1*n1)**2 + (k2*n2)**2 - 1``, which the converted state counts
    ``k*n`` reproduce.
    """
    if set(m1.alphabet) != set(m2.alphabet):
        raise AlphabetMismatchError(
            "alphabets differ: {} and {}".format(
                sorted(m1.alphabet), sorted(m2.alphabet)
            )
        )
    if method not in (BOUNDED, ALGEBRAIC):
        raise QfaError("unknown equivalence method {!r}".format(method))
    first = to_mo1g(m1, tracer_provider=tracer_provider)
    second = to_mo1g(m2, tracer_provider=tracer_provider)
    if method == ALGEBRAIC:
        return equiv_algebraic(
            first, second, tol=tol, tracer_provider=tracer_provider
        )
    if max_len is None:
        max_len = equiv_bound_hybrid(*hybrid_size(m1), *hybrid_size(m2))
    return equiv_bounded(
        first,
        second,
        max_len=max_len,
        tol=tol,
        tracer_provider=tracer_provider,
    )
