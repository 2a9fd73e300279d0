"""Pairwise-independent hashing for the local-hashing protocols.

h_{a,b}(v) = ((a*v + b) mod P) mod g, with a fresh (a, b) per user and a fixed
prime P, the smallest prime above max(d, 2^16).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import numpy.typing as npt

from ldpbench.domain.exceptions import ParameterError

MIN_HASH_PRIME_FLOOR = 1 << 16
# Largest P for which a*v + b (all < P) stays below 2^63.
INT64_SAFE_PRIME = 3_037_000_499


@lru_cache(maxsize=256)
def is_prime(number: int) -> bool:
    if number < 2:
        return False
    if number % 2 == 0:
        return number == 2
    divisor = 3
    while divisor * divisor <= number:
        if number % divisor == 0:
            return False
        divisor += 2
    return True


@lru_cache(maxsize=256)
def hash_prime_for(d: int) -> int:
    """Smallest prime strictly greater than max(d, 2^16)."""
    candidate = max(d, MIN_HASH_PRIME_FLOOR) + 1
    while not is_prime(candidate):
        candidate += 1
    return candidate


def _check_parameters(a: int, b: int, prime: int, g: int) -> None:
    if not is_prime(prime):
        raise ParameterError(f"hash modulus must be prime, got {prime}")
    if not 1 <= a < prime:
        raise ParameterError(f"hash multiplier a must be in [1, {prime}), got {a}")
    if not 0 <= b < prime:
        raise ParameterError(f"hash offset b must be in [0, {prime}), got {b}")
    if g < 2:
        raise ParameterError(f"hash range g must be >= 2, got {g}")


def hash_universal(a: int, b: int, prime: int, g: int, v: int) -> int:
    """Bucket of ``v`` under h_{a,b}; exact in Python integers."""
    _check_parameters(a, b, prime, g)
    if not 0 <= v < prime:
        raise ParameterError(f"hashed value must be in [0, {prime}), got {v}")
    return ((a * v + b) % prime) % g


def hash_buckets(
    a: npt.ArrayLike,
    b: npt.ArrayLike,
    prime: int,
    g: int,
    v: npt.ArrayLike,
) -> npt.NDArray[np.int64]:
    """Broadcasting form of :func:`hash_universal` (no per-element validation)."""
    if prime <= INT64_SAFE_PRIME:
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        v_arr = np.asarray(v, dtype=np.int64)
        return ((a_arr * v_arr + b_arr) % prime) % g
    exact = (
        np.asarray(a, dtype=object) * np.asarray(v, dtype=object)
        + np.asarray(b, dtype=object)
    ) % prime % g
    return np.asarray(exact, dtype=np.int64)
