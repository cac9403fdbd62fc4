"""Codings of finite sets and pairs of natural numbers.

Finite sets are plain ``frozenset`` objects of non-negative ints; Python ints
are arbitrary precision, so codes such as ``pair(2**n, 2*n + 1)`` never
overflow.
"""
from math import isqrt
from typing import Iterable

FinSet = frozenset

EMPTY: FinSet = frozenset()


def finset(items: Iterable[int] = ()) -> FinSet:
    out = frozenset(int(i) for i in items)
    if any(i < 0 for i in out):
        raise ValueError("finite sets contain natural numbers only")
    return out


def encode_finite(p: Iterable[int]) -> int:
    """Code of a finite set: the sum of ``2**i`` over its elements."""
    n = 0
    for i in set(p):
        n |= 1 << i
    return n


def decode_finite(n: int) -> FinSet:
    """The finite set whose code is ``n`` (the positions of its 1-bits)."""
    if n < 0:
        raise ValueError("codes are natural numbers")
    out = []
    i = 0
    while n:
        low = n & -n
        i = low.bit_length() - 1
        out.append(i)
        n ^= low
    return frozenset(out)


def pair(m: int, n: int) -> int:
    """Cantor pairing."""
    s = m + n
    return s * (s + 1) // 2 + n


def unpair(c: int) -> tuple[int, int]:
    if c < 0:
        raise ValueError("codes are natural numbers")
    s = (isqrt(8 * c + 1) - 1) // 2
    n = c - s * (s + 1) // 2
    return s - n, n


def nested_pair(*parts: int) -> int:
    """``<m1, <m2, ... <m_k, n>...>>`` for ``parts = (m1, ..., m_k, n)``."""
    if not parts:
        raise ValueError("nested_pair needs at least one component")
    code = parts[-1]
    for m in reversed(parts[:-1]):
        code = pair(m, code)
    return code


def subsets(base: Iterable[int]):
    """All subsets of a finite set, as frozensets, in code order."""
    base = sorted(set(base))
    for mask in range(1 << len(base)):
        yield frozenset(b for j, b in enumerate(base) if mask >> j & 1)
