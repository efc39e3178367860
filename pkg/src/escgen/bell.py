"""Partial Bell polynomials in exact arithmetic, and a composition enumerator.

This is the ground-truth engine for the floating-point code elsewhere in
the package. Inputs are normally :class:`fractions.Fraction`; any number
type closed under ``+`` and ``*`` (ints, ``mpmath.mpf``) also works.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from fractions import Fraction
from math import comb, factorial


def _check(n: int, k: int, x: Sequence | None = None) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if x is not None and len(x) < n - k + 1:
        raise ValueError(f"B_{{{n},{k}}} needs {n - k + 1} arguments, got {len(x)}")


def bell_table(n: int, x: Sequence, kmax: int | None = None) -> list[list]:
    """All partial exponential Bell polynomials up to order n.

    Returns ``B`` with ``B[m][k] = B_{m,k}(x_1, ...)`` for ``0 <= m <= n``,
    ``0 <= k <= kmax``, via

        B_{m,k} = sum_{j=1}^{m-k+1} C(m-1, j-1) x_j B_{m-j,k-1},  B_{0,0} = 1.

    ``x`` is 0-indexed: ``x[0]`` is x_1. Entries past ``len(x)`` are
    treated as zero.
    """
    kmax = n if kmax is None else kmax
    zero = 0 * (x[0] if len(x) else 0)
    B = [[zero] * (kmax + 1) for _ in range(n + 1)]
    B[0][0] = zero + 1
    for m in range(1, n + 1):
        for k in range(1, min(m, kmax) + 1):
            acc = zero
            for j in range(1, min(m - k + 1, len(x)) + 1):
                prev = B[m - j][k - 1]
                if prev:
                    acc += comb(m - 1, j - 1) * x[j - 1] * prev
            B[m][k] = acc
    return B


def bell_exponential(n: int, k: int, x: Sequence):
    """Partial exponential Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1})."""
    _check(n, k, x)
    return bell_table(n, x[: n - k + 1], kmax=k)[n][k]


def bell_ordinary(n: int, k: int, x: Sequence):
    """Ordinary Bell polynomial: the sum over compositions of n into k parts
    of prod x_{s_i}. Computed as (k!/n!) B_{n,k}(1! x_1, 2! x_2, ...)."""
    _check(n, k, x)
    scaled = [factorial(i) * xi for i, xi in enumerate(x[: n - k + 1], start=1)]
    val = bell_exponential(n, k, scaled)
    if isinstance(val, int):
        return Fraction(val * factorial(k), factorial(n))
    return val * factorial(k) / factorial(n)


def compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Yield every k-tuple of positive integers summing to n, in lexicographic order."""
    _check(n, k)

    def rec(remaining: int, parts: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (remaining,)
            return
        for first in range(1, remaining - parts + 2):
            for rest in rec(remaining - first, parts - 1):
                yield (first,) + rest

    yield from rec(n, k)
