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

QFA_HYBRID_TOLERANCE = "QFA_HYBRID_TOLERANCE"
"""
.. envvar:: QFA_HYBRID_TOLERANCE

Frobenius-norm tolerance used by every structural predicate (unitarity,
completeness, projectors) and by acceptance-probability comparisons.
Default: ``1e-9``.
"""

QFA_HYBRID_PRUNE_EPS = "QFA_HYBRID_PRUNE_EPS"
"""
.. envvar:: QFA_HYBRID_PRUNE_EPS

Squared-norm threshold under which a branch of a measurement-history
enumeration is discarded. Default: ``1e-15``.
"""

QFA_HYBRID_ENUM_LIMIT = "QFA_HYBRID_ENUM_LIMIT"
"""
.. envvar:: QFA_HYBRID_ENUM_LIMIT

Maximum number of strings the bounded equivalence check agrees to enumerate.
Default: ``10000000``.
"""

QFA_HYBRID_SPAN_TOLERANCE = "QFA_HYBRID_SPAN_TOLERANCE"
"""
.. envvar:: QFA_HYBRID_SPAN_TOLERANCE

Relative residual under which a vector is considered to lie in the span
already built by the algebraic equivalence check. Default: ``1e-10``.
"""
