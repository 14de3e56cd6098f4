import math
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secshare import (
    DomainError,
    ResourceLimitError,
    exp_composite_derivatives,
    faa_di_bruno_exp,
    partitions_with_multiplicity,
)


@lru_cache(maxsize=None)
def partition_count_oracle(n: int, max_part: int) -> int:
    """Independent recursive counter: partitions of n with parts <= max_part."""
    if n == 0:
        return 1
    if n < 0 or max_part == 0:
        return 0
    return partition_count_oracle(n - max_part, max_part) + partition_count_oracle(n, max_part - 1)


class TestEnumeration:
    def test_m1(self):
        parts = partitions_with_multiplicity(1)
        assert [p.multiplicities for p in parts] == [(1,)]

    def test_m3_explicit(self):
        parts = partitions_with_multiplicity(3)
        assert [p.multiplicities for p in parts] == [(0, 0, 1), (1, 1, 0), (3, 0, 0)]

    def test_m12_count(self):
        assert len(partitions_with_multiplicity(12)) == 77

    def test_counts_match_recursive_oracle(self):
        for m in range(1, 21):
            assert len(partitions_with_multiplicity(m)) == partition_count_oracle(m, m)

    def test_invariant_holds_for_all(self):
        for m in range(1, 21):
            for part in partitions_with_multiplicity(m):
                assert sum(i * mi for i, mi in enumerate(part.multiplicities, 1)) == m
                assert part.order == m

    def test_each_partition_unique(self):
        for m in range(1, 16):
            seen = [p.multiplicities for p in partitions_with_multiplicity(m)]
            assert len(seen) == len(set(seen))

    def test_lexicographic_order(self):
        for m in range(1, 16):
            seen = [p.multiplicities for p in partitions_with_multiplicity(m)]
            assert seen == sorted(seen)

    def test_cap_and_domain(self):
        with pytest.raises(ResourceLimitError):
            partitions_with_multiplicity(65)
        with pytest.raises(DomainError):
            partitions_with_multiplicity(0)


class TestFaaDiBruno:
    def test_chain_rule(self):
        assert faa_di_bruno_exp([3.7], 1) == pytest.approx(3.7)

    def test_second_derivative(self):
        a, b = 1.3, -0.4
        assert faa_di_bruno_exp([a, b], 2) == pytest.approx(a * a + b, rel=1e-14)

    def test_m5_against_recurrence(self):
        c, p, x = -2.0, 0.5, 4.0
        g = []
        falling = 1.0
        for j in range(1, 6):
            falling *= p - (j - 1)
            g.append(c * falling * x ** (p - j))
        expected = exp_composite_derivatives(c, p, x, 5)
        prefactor = math.exp(c * x ** p)
        for m in range(1, 6):
            assert prefactor * faa_di_bruno_exp(g, m) == pytest.approx(expected[m], rel=1e-9)

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            faa_di_bruno_exp([1.0, 2.0], 3)

    @given(
        st.floats(min_value=-5.0, max_value=-0.01),
        st.floats(min_value=0.1, max_value=0.9),
        st.floats(min_value=0.2, max_value=8.0),
        st.integers(min_value=1, max_value=12),
    )
    @settings(max_examples=60, deadline=None)
    def test_partition_sum_equals_recurrence(self, c, p, x, m):
        g = []
        falling = 1.0
        for j in range(1, m + 1):
            falling *= p - (j - 1)
            g.append(c * falling * x ** (p - j))
        expected = exp_composite_derivatives(c, p, x, m)[m]
        got = math.exp(c * x ** p) * faa_di_bruno_exp(g, m)
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-300)
