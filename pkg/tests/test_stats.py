"""Statistics harnesses: tallies, expected laws, determinism."""

from fractions import Fraction

import pytest

from iwascan.stats import (DensityTally, NORM_CONSTRAINED, StatTally,
                           UNCONSTRAINED, expected_proportions,
                           prime_fermat_scan, random_elem_density)
from iwascan.sunits import PreconditionError


def test_expected_proportions_values():
    got = expected_proportions(3, 2, 5)
    assert got == (Fraction(2, 3), Fraction(2, 9), Fraction(2, 27),
                   Fraction(2, 81), Fraction(2, 243), Fraction(1, 243))
    assert expected_proportions(7, 2, 5)[0] == Fraction(6, 7)


@pytest.mark.parametrize("p,d,rmax", [(3, 2, 5), (7, 2, 4), (5, 3, 6), (11, 2, 3)])
def test_expected_proportions_sum_to_one(p, d, rmax):
    assert sum(expected_proportions(p, d, rmax)) == 1


def test_prime_scan_small_frozen():
    t = prime_fermat_scan(103, 3, 5, 10**6)
    assert t.total == 162
    assert t.counts == (107, 34, 13, 7, 1, 0)
    assert t.skipped_nonprincipal == 0
    assert sum(t.counts) == t.total
    assert abs(t.proportions[0] - 2 / 3) < 0.05


def test_prime_scan_deterministic_and_parallel():
    a = prime_fermat_scan(103, 3, 5, 10**6)
    b = prime_fermat_scan(103, 3, 5, 10**6)
    c = prime_fermat_scan(103, 3, 5, 10**6, workers=2)
    assert a == b == c


def test_prime_scan_skips_nonprincipal():
    # h(Q(sqrt 10)) = 2: half the split primes land in the other class
    t = prime_fermat_scan(10, 3, 5, 10**5)
    assert t.skipped_nonprincipal == 11
    assert t.total == 11
    assert t.counts == (8, 1, 0, 1, 1, 0)


def test_prime_scan_empty_below_modulus():
    t = prime_fermat_scan(103, 3, 5, 3**6)
    assert t.total == 0 and all(c == 0 for c in t.counts)


def test_prime_scan_preconditions():
    with pytest.raises(PreconditionError):
        prime_fermat_scan(5, 3, 5, 10**5)  # inert
    with pytest.raises(PreconditionError):
        prime_fermat_scan(79, 3, 5, 10**5)  # 3 | h = 3
    with pytest.raises(ValueError):
        prime_fermat_scan(103, 3, 3, 10**5, rmax=5)  # n < rmax


def test_density_deterministic():
    a = random_elem_density(7, 3, 200_000, NORM_CONSTRAINED, seed=5)
    b = random_elem_density(7, 3, 200_000, NORM_CONSTRAINED, seed=5)
    assert a == b
    c = random_elem_density(7, 3, 200_000, NORM_CONSTRAINED, seed=6)
    assert c != a  # same law, different stream


def test_density_matches_expected_law():
    t = random_elem_density(7, 3, 500_000, NORM_CONSTRAINED, seed=1)
    assert abs(t.density - 2 / 3) < 0.01
    assert t.expected == Fraction(2, 3)
    u = random_elem_density(7, 3, 500_000, UNCONSTRAINED, seed=1)
    assert abs(u.density - 8 / 9) < 0.01
    assert u.expected == Fraction(8, 9)
    # acceptance windows tighten once more than 1e6 samples are kept
    assert u.accepted > t.accepted


def test_density_other_prime():
    t = random_elem_density(14, 5, 400_000, NORM_CONSTRAINED, seed=3)
    assert abs(t.density - 4 / 5) < 0.02
    u = random_elem_density(14, 5, 400_000, UNCONSTRAINED, seed=3)
    assert abs(u.density - 24 / 25) < 0.02


def test_density_zero_samples():
    t = random_elem_density(7, 3, 0, NORM_CONSTRAINED, seed=0)
    assert t.accepted == 0 and t.density is None


def test_density_validates():
    with pytest.raises(PreconditionError):
        random_elem_density(5, 3, 100)
    with pytest.raises(ValueError):
        random_elem_density(7, 3, 100, mode="bogus")
    with pytest.raises(ValueError):
        random_elem_density(7, 3, -5)


def test_tally_validates_totals():
    with pytest.raises(AssertionError):
        StatTally(m=103, p=3, n=5, bound=10, rmax=1, total=5, counts=(1, 1),
                  skipped_nonprincipal=0)
