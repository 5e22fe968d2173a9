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

from logging import getLogger
from os import environ
from typing import Callable, TypeVar

from qfa.hybrid.environment_variables import (
    QFA_HYBRID_ENUM_LIMIT,
    QFA_HYBRID_PRUNE_EPS,
    QFA_HYBRID_SPAN_TOLERANCE,
    QFA_HYBRID_TOLERANCE,
)

logger = getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
DEFAULT_PRUNE_EPS = 1e-15
DEFAULT_ENUM_LIMIT = 10 ** 7
DEFAULT_SPAN_TOLERANCE = 1e-10

# Discrepancies at or below this level are float noise, never reported.
NOISE_FLOOR = 1e-12

_T = TypeVar("_T", int, float)


def _read(name: str, default: _T, parse: Callable[[str], _T]) -> _T:
    raw = environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = parse(raw.strip())
    except ValueError:
        logger.warning(
            "Invalid value %r for %s, using default %s", raw, name, default
        )
        return default
    if not value >= 0:
        logger.warning(
            "Out of range value %r for %s, using default %s",
            raw,
            name,
            default,
        )
        return default
    return value


def get_tolerance() -> float:
    return _read(QFA_HYBRID_TOLERANCE, DEFAULT_TOLERANCE, float)


def get_prune_eps() -> float:
    return _read(QFA_HYBRID_PRUNE_EPS, DEFAULT_PRUNE_EPS, float)


def get_enum_limit() -> int:
    return _read(QFA_HYBRID_ENUM_LIMIT, DEFAULT_ENUM_LIMIT, int)


def get_span_tolerance() -> float:
    return _read(QFA_HYBRID_SPAN_TOLERANCE, DEFAULT_SPAN_TOLERANCE, float)


def resolve_tolerance(tol=None) -> float:
    """Returns ``tol`` or, when it is ``None``, the configured tolerance."""
    return get_tolerance() if tol is None else tol
