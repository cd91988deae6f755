"""Heegner points on X0(27) and cube sums of 3p and 3p^2 for primes p = 2, 5 mod 9."""

__version__ = "0.1.0"
