"""Integer-partition enumeration and the partition-sum form of higher derivatives.

A partition of m is stored as its multiplicity vector (m_1, ..., m_m) with
sum(i * m_i) == m; that is the index set of the Faa di Bruno expansion of
d^m/dx^m exp(g(x)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DomainError, ResourceLimitError

__all__ = ["Partition", "partitions_with_multiplicity", "faa_di_bruno_exp", "PARTITION_ORDER_CAP"]

# Exact partition enumeration beyond this order is outside desk scale.
PARTITION_ORDER_CAP = 64


@dataclass(frozen=True)
class Partition:
    """Multiplicity vector (m_1, ..., m_m) of one partition of m."""

    multiplicities: tuple[int, ...]

    @property
    def order(self) -> int:
        return sum(i * mi for i, mi in enumerate(self.multiplicities, start=1))

    def __post_init__(self):
        if any(mi < 0 for mi in self.multiplicities):
            raise DomainError("multiplicities must be nonnegative")


def partitions_with_multiplicity(m: int) -> list[Partition]:
    """All multiplicity vectors with sum(i*m_i) == m, in ascending lexicographic order."""
    if m < 1:
        raise DomainError(f"partition order must be >= 1, got {m!r}")
    if m > PARTITION_ORDER_CAP:
        raise ResourceLimitError(
            f"partition order {m} exceeds the cap {PARTITION_ORDER_CAP}"
        )
    return [Partition(tuple(v)) for v in _enumerate(m)]


def _enumerate(m: int) -> Iterator[list[int]]:
    vec = [0] * m

    def rec(part_size: int, remaining: int) -> Iterator[list[int]]:
        if part_size > m:
            if remaining == 0:
                yield list(vec)
            return
        if remaining == 0:
            yield list(vec)
            return
        # lexicographic: smaller m_i for the smallest part first
        for count in range(remaining // part_size + 1):
            vec[part_size - 1] = count
            yield from rec(part_size + 1, remaining - count * part_size)
        vec[part_size - 1] = 0

    yield from rec(1, m)


def faa_di_bruno_exp(g_derivs: Sequence[float], m: int) -> float:
    """Partition-sum factor of the m-th derivative of exp(g(x)).

    ``g_derivs`` holds g^(1)..g^(m) at the evaluation point.  Returns
    sum over partitions of m of  m! * prod_j (g^(j))**m_j / (m_j! * (j!)**m_j),
    i.e. d^m/dx^m exp(g) divided by the exp(g) prefactor (supplied by the
    caller).
    """
    if m < 1:
        raise DomainError(f"derivative order must be >= 1, got {m!r}")
    if len(g_derivs) < m:
        raise DomainError(
            f"need g^(1)..g^({m}), got only {len(g_derivs)} derivatives"
        )
    m_fact = math.factorial(m)
    terms = []
    for part in partitions_with_multiplicity(m):
        prod = float(m_fact)
        for j, mj in enumerate(part.multiplicities, start=1):
            if mj == 0:
                continue
            prod *= g_derivs[j - 1] ** mj / (math.factorial(mj) * math.factorial(j) ** mj)
        terms.append(prod)
    return math.fsum(terms)
